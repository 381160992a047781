"""Exhaustive and family-level checks of the recolouring and saturation lemmas.

Every check here restates a proved property, so any violation points at a
bug in the implementation rather than at the mathematics.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Iterable, Iterator

import numpy as np

from .families import family, lowered_star, star_saturation
from .minors import MinorMap, apply_minor
from .polymorph import LO3, BudgetExhausted, Filter, enumerate_polymorphisms, is_polymorphism
from .recolour import (
    DEFAULT_PURE_BUDGET,
    enumerate_pure_saturations,
    has_small_2set,
    in_boolean_partition,
    is_recolourable_to,
    is_saturated,
    minimal_2sets,
    saturate,
    static_sets,
    t_union,
    two_recolourable,
)
from .sets import PolyTable, encode_table, full_mask, popcounts, superset_closure
from .structure import dictating_variables, kneser_check, verify_structure_theorem

# uniqueness of a minor's pure saturation is decided within this many nodes;
# padded projections blow past it and are skipped as hypothesis-unknown
MINOR_PURE_BUDGET = 5_000

LEMMA_IDS = (
    "kneser",
    "static",
    "2set",
    "upwards_closure",
    "complementarity",
    "cor_lift",
    "boolean_recolouring",
    "type",
    "small_arity",
    "unique_saturation2",
    "structure",
    "prop_minimal_counterexamples",
    "non_unique",
    "hitting_set_projections",
    "saturation_commutes_sometimes",
)


@dataclass
class LemmaReport:
    lemma: str
    arity: int
    checked: int = 0
    violations: int = 0
    counterexample: str | None = None
    complete: bool = True
    note: str = ""

    def record(self, ok: bool, f: PolyTable) -> None:
        self.checked += 1
        if not ok:
            self.violations += 1
            if self.counterexample is None:
                self.counterexample = encode_table(f)

    @property
    def ok(self) -> bool:
        return self.violations == 0

    def to_record(self) -> dict:
        out = {
            "lemma": self.lemma,
            "arity": self.arity,
            "checked": self.checked,
            "violations": self.violations,
            "complete": self.complete,
        }
        if self.counterexample is not None:
            out["counterexample"] = self.counterexample
        if self.note:
            out["note"] = self.note
        return out


@dataclass
class SuiteReport:
    reports: list[LemmaReport] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.reports)

    @property
    def complete(self) -> bool:
        return all(r.complete for r in self.reports)

    @property
    def violations(self) -> int:
        return sum(r.violations for r in self.reports)

    def by_lemma(self, lemma: str) -> list[LemmaReport]:
        return [r for r in self.reports if r.lemma == lemma]

    def to_records(self) -> list[dict]:
        order = {k: i for i, k in enumerate(LEMMA_IDS)}
        rs = sorted(self.reports, key=lambda r: (order.get(r.lemma, len(order)), r.lemma, r.arity))
        return [r.to_record() for r in rs]


def _boolean_masks(f: PolyTable) -> list[int]:
    return np.flatnonzero(f.values < 2).tolist()


def _upward_closure(f: PolyTable) -> PolyTable:
    v = f.values.copy()
    v[superset_closure(v == 2, f.n)] = 2
    return PolyTable(v, 3)


# per-table checks on exhaustively enumerated polymorphisms


def check_kneser(f: PolyTable) -> bool:
    return kneser_check(f)


def check_static(f: PolyTable) -> bool:
    """Not recolourable to the opposite boolean value iff part of a boolean partition."""
    for x in _boolean_masks(f):
        if (not is_recolourable_to(f, x, 1 - f[x])) != in_boolean_partition(f, x):
            return False
    return True


def check_2set(f: PolyTable) -> bool:
    """No disjoint 2-sets, the empty set is boolean, and 2-recolourability
    is exactly meeting every 2-set."""
    twos = np.flatnonzero(f.values == 2)
    if f[0] == 2:
        return False
    for x in twos.tolist():
        if np.any((twos & x) == 0):
            return False
    return all(two_recolourable(f, x) == is_recolourable_to(f, x, 2) for x in _boolean_masks(f))


def check_upwards_closure(f: PolyTable) -> bool:
    """Boolean supersets of 2-sets are 2-recolourable."""
    up = superset_closure(f.values == 2, f.n)
    return all(is_recolourable_to(f, y, 2) for y in np.flatnonzero(up & (f.values < 2)).tolist())


def check_complementarity(f: PolyTable) -> bool:
    """In the upward closure, both halves of a boolean complementary pair are 2-recolourable."""
    u = _upward_closure(f)
    if not is_polymorphism(u):
        return False
    full = full_mask(f.n)
    for x in range(1, full):
        y = full ^ x
        if u[x] < 2 and u[y] < 2:
            if not (is_recolourable_to(u, x, 2) and is_recolourable_to(u, y, 2)):
                return False
    return True


def check_saturation(f: PolyTable) -> tuple[bool, PolyTable]:
    """``saturate`` reaches a saturated polymorphism through valid single recolourings."""
    res = saturate(f, verify=True)
    g = res.result
    ok = is_saturated(g) and is_polymorphism(g)
    ok = ok and all(int(f[m]) == old and old < 2 for m, old in res.path)
    return ok, g


def check_boolean_recolouring(g: PolyTable) -> bool:
    """On a saturated table a boolean set is static iff it meets T_g."""
    t = t_union(g)
    return all(in_boolean_partition(g, x) == bool(x & t) for x in _boolean_masks(g))


def check_type(f: PolyTable) -> bool:
    """Every split of a 2-set into two boolean parts is 01-typed or 00-typed, never both."""
    v = f.values
    for t in np.flatnonzero(v == 2).tolist():
        kinds = set()
        a = t
        while a:
            a = (a - 1) & t
            b = t ^ a
            if a < b and v[a] < 2 and v[b] < 2:
                kinds.add(int(v[a]) + int(v[b]))
        if 2 in kinds or len(kinds) > 1:
            return False
    return True


def check_small_arity(f: PolyTable) -> bool:
    return has_small_2set(f) or len(dictating_variables(f)) == 1


# family-level checks (arity >= 7)


def static_one_sets(f: PolyTable) -> list[int]:
    return np.flatnonzero(static_sets(f) & (f.values == 1)).tolist()


def union_of_4_element_2sets(f: PolyTable) -> bool:
    pc = popcounts(f.n)
    cover = 0
    for m in np.flatnonzero((f.values == 2) & (pc == 4)).tolist():
        cover |= m
    return cover == full_mask(f.n)


def check_minimal_counterexamples(f: PolyTable) -> bool:
    """No disjoint static 1-sets, and some singleton is a static 1-set."""
    ones = static_one_sets(f)
    arr = np.asarray(ones, dtype=np.int64)
    for x in ones:
        if np.any((arr & x) == 0):
            return False
    return any(x & (x - 1) == 0 for x in ones)


def check_unique_saturation2(f: PolyTable, sats: Iterable[PolyTable], unique: bool) -> bool:
    n = f.n
    pc = popcounts(n)
    twos = f.values == 2
    below = np.zeros_like(twos)
    up = superset_closure(twos, n)
    for b in range(n):
        below.reshape(-1, 2, 1 << b)[:, 1, :] |= up.reshape(-1, 2, 1 << b)[:, 0, :]
    boolean = f.values < 2
    forced = boolean & ((pc >= n - 3) | below)
    for g in sats:
        changed = boolean & (g.values != f.values)
        if np.any(forced & ~changed):
            return False
        if unique and np.any(changed & ~forced):
            return False
    return True


def check_non_unique(f: PolyTable, t: int) -> bool:
    masks = np.arange(1 << f.n)
    bracket = (masks >> (t - 1)) & 1
    bad = np.flatnonzero((f.values < 2) & (f.values != bracket) & (masks != 0))
    for x in bad.tolist():
        if np.any((bad & x) == 0):
            return False
    return True


def check_hitting_set(f: PolyTable, g: PolyTable, t: int) -> bool:
    masks = np.arange(1 << f.n)
    ones = f.values == 1
    xs = np.flatnonzero(ones & ((masks >> (t - 1)) & 1 == 1))
    ys = np.flatnonzero(ones & ((masks & t_union(g)) != 0))
    for x in xs.tolist():
        if np.any((ys & x) == 0):
            return False
    return True


def _unique_pure(f: PolyTable, budget: int):
    sats = enumerate_pure_saturations(f, budget)
    if not sats.complete or len(sats) != 1:
        return None
    g = next(iter(sats))
    d = dictating_variables(g)
    return (g, next(iter(d))) if len(d) == 1 else (g, None)


def _near_bijection(rng: random.Random, n: int) -> MinorMap:
    """A permutation of ``[n]`` followed by merging one pair or padding one variable."""
    perm = list(range(1, n + 1))
    rng.shuffle(perm)
    kind = rng.choice(("perm", "merge", "pad"))
    if kind == "merge" and n > 7:
        a, b = rng.sample(range(n), 2)
        top = perm[b]
        img = [perm[a] if i == b else p for i, p in enumerate(perm)]
        # renumber so the image is onto [n-1]
        img = [p - (p > top) for p in img]
        return MinorMap(img, n - 1)
    if kind == "pad" and n < 9:
        return MinorMap(perm, n + 1)
    return MinorMap(perm, n)


def check_saturation_commutes(f: PolyTable, t: int, pi: MinorMap, budget: int) -> bool | None:
    """``None`` when the hypotheses do not hold for ``f^pi``."""
    h = apply_minor(f, pi)
    m = h.n
    if m < 7 or has_small_2set(h):
        return None
    got = _unique_pure(h, min(budget, MINOR_PURE_BUDGET))
    if got is None or got[1] is None:
        return None
    g2, t2 = got
    if any(bin(a).count("1") >= m - 3 for a in minimal_2sets(g2)):
        return None
    return pi(t) == t2


def _exhaustive(n: int, budget: int | None, flt: Filter = Filter.ALL) -> tuple[list[PolyTable], bool]:
    out: list[PolyTable] = []
    try:
        for f in enumerate_polymorphisms(n, LO3, flt, budget=budget):
            out.append(f)
    except BudgetExhausted:
        return out, False
    return out, True


def iter_exhaustive_reports(n: int, tables: list[PolyTable], complete: bool) -> Iterator[LemmaReport]:
    reps = {k: LemmaReport(k, n, complete=complete) for k in (
        "kneser", "static", "2set", "upwards_closure", "complementarity",
        "cor_lift", "boolean_recolouring", "type", "small_arity")}
    for f in tables:
        reps["kneser"].record(check_kneser(f), f)
        reps["static"].record(check_static(f), f)
        reps["2set"].record(check_2set(f), f)
        reps["upwards_closure"].record(check_upwards_closure(f), f)
        reps["complementarity"].record(check_complementarity(f), f)
        ok, g = check_saturation(f)
        reps["cor_lift"].record(ok, f)
        reps["boolean_recolouring"].record(check_boolean_recolouring(g), g)
        reps["type"].record(check_type(f), f)
        reps["small_arity"].record(check_small_arity(f), f)
    yield from reps.values()


def family_reports(budget: int = DEFAULT_PURE_BUDGET, seed: int = 0, trials: int = 200) -> list[LemmaReport]:
    """Lemmas about arity >= 7, checked on the constructed families.

    Projections of arity >= 8 are left out of pure-saturation checks: they
    have far too many pure saturations to list.
    """
    members = [(name, f) for name, f in family(9)
               if not (name.startswith("projection(") and f.n >= 8)]
    extra = [star_saturation(7, 4), lowered_star(8, 3, 2, seed=5)]
    tables = [f for _, f in members] + extra
    reps = {k: LemmaReport(k, 9) for k in (
        "cor_lift", "unique_saturation2", "structure", "prop_minimal_counterexamples",
        "non_unique", "hitting_set_projections", "saturation_commutes_sometimes")}
    uniques: list[tuple[PolyTable, int]] = []
    for f in tables:
        if has_small_2set(f):
            continue
        res = saturate(f)
        reps["cor_lift"].record(res.pure and is_saturated(res.result), f)
        sats = enumerate_pure_saturations(f, budget)
        if not sats.complete:
            reps["unique_saturation2"].complete = False
            reps["structure"].complete = False
            continue
        unique = len(sats) == 1
        reps["unique_saturation2"].record(check_unique_saturation2(f, sats, unique), f)
        verdict = verify_structure_theorem(f, budget)
        reps["structure"].record(bool(verdict.conforms), f)
        if union_of_4_element_2sets(f):
            reps["prop_minimal_counterexamples"].record(check_minimal_counterexamples(f), f)
        t = verdict.dictating
        if t is None:
            continue
        if not unique:
            reps["non_unique"].record(check_non_unique(f, t), f)
        else:
            g = next(iter(sats))
            reps["hitting_set_projections"].record(check_hitting_set(f, g, t), f)
            uniques.append((f, t))
    rng = random.Random(seed)
    rep = reps["saturation_commutes_sometimes"]
    tried = 0
    for _ in range(trials):
        f, t = rng.choice(uniques)
        pi = _near_bijection(rng, f.n)
        r = check_saturation_commutes(f, t, pi, budget)
        if r is None:
            continue
        tried += 1
        rep.record(r, f)
    rep.note = f"{tried} of {trials} random maps met the hypotheses"
    for r in reps.values():
        if r.checked == 0:
            r.complete = False
            r.note = r.note or "no instance met the hypotheses"
    return list(reps.values())


def lemma_suite(n_max: int = 4, budget: int | None = None, families: bool = True,
                filtered_max: int = 0, seed: int = 0) -> SuiteReport:
    """Run every lemma check.

    Exhaustive checks cover arities ``1..n_max`` (at most 4).  The
    small-arity classification is also run over the small-2-set-free search
    for arities ``n_max+1..filtered_max`` (at most 6).  ``budget`` caps the
    enumeration search nodes and each pure-saturation enumeration.
    """
    if not 1 <= n_max <= 4:
        raise ValueError("exhaustive lemma checks need 1 <= n_max <= 4")
    if filtered_max > 6:
        raise ValueError("the small-2-set-free search stops at arity 6")
    suite = SuiteReport()
    for n in range(1, n_max + 1):
        tables, complete = _exhaustive(n, budget)
        suite.reports.extend(iter_exhaustive_reports(n, tables, complete))
    for n in range(n_max + 1, filtered_max + 1):
        tables, complete = _exhaustive(n, budget, Filter.NO_SMALL_2SET)
        rep = LemmaReport("small_arity", n, complete=complete, note="small-2-set-free search")
        for f in tables:
            rep.record(check_small_arity(f), f)
        suite.reports.append(rep)
    if families:
        pure_budget = DEFAULT_PURE_BUDGET if budget is None else min(budget, DEFAULT_PURE_BUDGET)
        suite.reports.extend(family_reports(pure_budget, seed))
    return suite

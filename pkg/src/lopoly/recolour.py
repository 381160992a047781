"""Recolouring and saturation of (LO_2, LO_3) polymorphisms.

All functions take a polymorphism ``f`` of (LO_2, LO_3) (a :class:`PolyTable`
with ``ell == 3``); local checks below rely on that.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Iterable, Union

import numpy as np

from .polymorph import LO3, BudgetExhausted
from .sets import (
    PolyTable,
    complement,
    full_mask,
    ordered_partition_arrays,
    popcount,
    popcounts,
    superset_closure,
)

DEFAULT_PURE_BUDGET = 10**6

_LO3 = LO3.lookup


def _masks(n: int) -> np.ndarray:
    return np.arange(1 << n)


def two_set_indicator(f: PolyTable) -> np.ndarray:
    return f.values == 2


def small_2sets(f: PolyTable) -> np.ndarray:
    return np.flatnonzero((f.values == 2) & (popcounts(f.n) <= 3))


def has_small_2set(f: PolyTable) -> bool:
    return bool(np.any((f.values == 2) & (popcounts(f.n) <= 3)))


@lru_cache(maxsize=1 << 14)
def _partners(n: int, x: int) -> tuple[np.ndarray, np.ndarray]:
    """All ``(Y, Z)`` completing ``x`` to an ordered partition of ``[n]``."""
    masks = _masks(n)
    ys = masks[(masks & x) == 0]
    return ys, complement(x, n) ^ ys


def _local_ok(values: np.ndarray, n: int, x: int) -> bool:
    """Do all partitions having ``x`` as a part land in LO_3 under ``values``?"""
    ys, zs = _partners(n, x)
    v = values.astype(np.intp)
    return bool(_LO3[(v[x] * 3 + v[ys]) * 3 + v[zs]].all())


def is_recolourable_to(f: PolyTable, x: int, i: int) -> bool:
    """Whether setting ``f(x) = i`` keeps ``f`` a polymorphism of (LO_2, LO_3)."""
    if not 0 <= i < 3:
        raise ValueError(f"colour {i} outside {{0, 1, 2}}")
    if f[x] == i:
        raise ValueError(f"mask {x} already has colour {i}")
    v = f.values.copy()
    v[x] = i
    return _local_ok(v, f.n, x)


def _require_boolean(f: PolyTable, x: int) -> None:
    if f[x] == 2:
        raise ValueError(f"mask {x} is a 2-set")


def in_boolean_partition(f: PolyTable, x: int) -> bool:
    """Is ``x`` a part of some partition whose values are exactly {0, 1}?"""
    _require_boolean(f, x)
    ys, zs = _partners(f.n, x)
    vy = f.values[ys]
    vz = f.values[zs]
    vx = f[x]
    ok = (vy < 2) & (vz < 2) & ~((vy == vx) & (vz == vx))
    return bool(ok.any())


def is_static(f: PolyTable, x: int) -> bool:
    """A boolean set is static iff it takes part in a boolean partition."""
    return in_boolean_partition(f, x)


def static_sets(f: PolyTable) -> np.ndarray:
    """Boolean array over masks: which boolean sets are static (n <= 16)."""
    xs, ys, zs = ordered_partition_arrays(f.n)
    v = f.values
    a, b, c = v[xs], v[ys], v[zs]
    boolean = (a < 2) & (b < 2) & (c < 2) & ~((a == b) & (b == c))
    out = np.zeros(len(f), dtype=bool)
    out[xs[boolean]] = True
    return out


def two_recolourable(f: PolyTable, x: int) -> bool:
    """A boolean set can become a 2-set iff it meets every 2-set, itself included.

    So the empty set never qualifies, even when ``f`` has no 2-sets.
    """
    _require_boolean(f, x)
    twos = np.flatnonzero(f.values == 2)
    return x != 0 and bool(np.all((twos & x) != 0))


def minimal_2sets(f: PolyTable) -> list[int]:
    """2-sets none of whose proper subsets is a 2-set, ascending by mask."""
    n = f.n
    twos = f.values == 2
    up = superset_closure(twos, n)
    below = np.zeros_like(twos)
    for b in range(n):
        src = up.reshape(-1, 2, 1 << b)
        below.reshape(-1, 2, 1 << b)[:, 1, :] |= src[:, 0, :]
    return np.flatnonzero(twos & ~below).tolist()


def t_union(f: PolyTable) -> int:
    t = 0
    for m in minimal_2sets(f):
        t |= m
    return t


def is_upward_closed(f: PolyTable) -> bool:
    twos = f.values == 2
    return bool(np.array_equal(superset_closure(twos, f.n), twos))


def is_complement_complete(f: PolyTable) -> bool:
    twos = f.values == 2
    return bool(np.all(twos | twos[::-1]))


def is_saturated(f: PolyTable) -> bool:
    return is_upward_closed(f) and is_complement_complete(f)


Policy = Union[str, Callable[[PolyTable, int, int], int]]


def policy_from_choices(choices: Iterable[int]) -> Callable[[PolyTable, int, int], int]:
    """Policy consuming a choice per complementary pair.

    Choice 0 recolours the member with smaller bits, 1 the larger; once the
    sequence runs out the larger-set rule applies.
    """
    it = iter(choices)

    def choose(f: PolyTable, a: int, b: int) -> int:
        c = next(it, None)
        if c is None:
            return _large_choice(a, b)
        return min(a, b) if c == 0 else max(a, b)

    return choose


def prefer_variable(t: int) -> Callable[[PolyTable, int, int], int]:
    """Larger-set policy whose ties go to the member containing variable ``t``."""
    bit = 1 << (t - 1)

    def choose(f: PolyTable, a: int, b: int) -> int:
        pa, pb = popcount(a), popcount(b)
        if pa != pb:
            return a if pa > pb else b
        return a if a & bit else b

    return choose


def _large_choice(a: int, b: int) -> int:
    pa, pb = popcount(a), popcount(b)
    if pa != pb:
        return a if pa > pb else b
    return max(a, b)


@dataclass(frozen=True)
class SaturationResult:
    source: PolyTable
    result: PolyTable
    path: tuple[tuple[int, int], ...]
    pure: bool

    def replay(self) -> list[PolyTable]:
        """Every table along the path, source first."""
        v = self.source.values.copy()
        out = [self.source]
        for mask, _old in self.path:
            v[mask] = 2
            out.append(PolyTable(v, 3))
        return out

    def to_record(self) -> dict:
        from .sets import encode_table

        return {
            "input": encode_table(self.source),
            "steps": [[m, old] for m, old in self.path],
            "result": encode_table(self.result),
            "pure": self.pure,
        }


class SaturationError(RuntimeError):
    pass


def saturate(f: PolyTable, policy: Policy = "large", verify: bool = True) -> SaturationResult:
    """Recolour boolean sets to 2 until ``f`` is upward closed and complement-complete.

    Supersets of 2-sets are recoloured first (ascending mask order).  Then each
    complementary pair of non-empty boolean sets is resolved in ascending
    order of its smaller mask, the ``policy`` naming the member to recolour;
    ``"large"`` picks the member with more elements, ties going to the larger
    mask.  Upward closure is restored after every such step.  A boolean
    ``[n]`` with no 2-sets around is recoloured last.  With ``verify`` each
    step is checked to keep ``f`` a polymorphism.
    """
    if f.ell != 3:
        raise ValueError("saturation is defined for tables into {0, 1, 2}")
    if policy == "large":
        choose = None
    elif callable(policy):
        choose = policy
    else:
        raise ValueError(f"unknown policy {policy!r}")
    n = f.n
    full = full_mask(n)
    masks = _masks(n)
    v = f.values.copy()
    path: list[tuple[int, int]] = []

    def recolour(m: int) -> None:
        if verify:
            old = v[m]
            v[m] = 2
            ok = _local_ok(v, n, m)
            v[m] = old
            if not ok:
                raise SaturationError(f"recolouring mask {m} to 2 breaks the polymorphism")
        path.append((m, int(v[m])))
        v[m] = 2

    def close_over(mask_seed: np.ndarray) -> None:
        up = superset_closure(mask_seed, n)
        for m in np.flatnonzero(up & (v != 2)).tolist():
            recolour(m)

    close_over(v == 2)
    for a in range(1, (full >> 1) + 1):
        b = full ^ a
        if v[a] == 2 or v[b] == 2:
            continue
        if choose is None:
            c = _large_choice(a, b)
        else:
            c = choose(PolyTable(v, 3), a, b)
            if c not in (a, b):
                raise ValueError(f"policy returned {c}, not one of {a}, {b}")
        recolour(c)
        close_over(((masks & c) == c))
    if v[full] != 2:
        recolour(full)
    result = PolyTable(v, 3)
    return SaturationResult(f, result, tuple(path), not has_small_2set(result))


@dataclass(frozen=True)
class PureSaturations:
    tables: frozenset
    complete: bool
    nodes: int = 0
    extra: dict = field(default_factory=dict, compare=False)

    def __iter__(self):
        return iter(sorted(self.tables))

    def __len__(self) -> int:
        return len(self.tables)


def enumerate_pure_saturations(f: PolyTable, budget: int = DEFAULT_PURE_BUDGET,
                               strict: bool = False) -> PureSaturations:
    """All saturations of ``f`` reachable without creating a 2-set of size <= 3.

    Depth-first over the complementary-pair decisions (both sides whenever
    the side has at least four elements), closing upwards after each choice.
    Visited states are memoised.  Running past ``budget`` nodes returns the
    endpoints found so far with ``complete=False`` (or raises
    :class:`BudgetExhausted` when ``strict``).
    """
    if f.ell != 3:
        raise ValueError("saturation is defined for tables into {0, 1, 2}")
    n = f.n
    if has_small_2set(f):
        return PureSaturations(frozenset(), True, 0)
    full = full_mask(n)
    masks = _masks(n)
    pc = popcounts(n)
    start = f.values.copy()
    start[superset_closure(start == 2, n)] = 2
    seen: set[bytes] = set()
    found: set[bytes] = set()
    nodes = 0
    stack = [start]
    while stack:
        v = stack.pop()
        key = v.tobytes()
        if key in seen:
            continue
        seen.add(key)
        nodes += 1
        if nodes > budget:
            res = PureSaturations(frozenset(PolyTable(np.frombuffer(k, np.uint8), 3) for k in found),
                                  False, nodes)
            if strict:
                raise BudgetExhausted("pure saturation budget exhausted", nodes, res)
            return res
        open_pair = None
        for a in range(1, (full >> 1) + 1):
            b = full ^ a
            if v[a] != 2 and v[b] != 2:
                open_pair = (a, b)
                break
        if open_pair is None:
            if v[full] != 2:
                v = v.copy()
                v[full] = 2
            if not np.any((v == 2) & (pc <= 3)):
                found.add(v.tobytes())
            continue
        for c in reversed(open_pair):
            if pc[c] <= 3:
                continue
            w = v.copy()
            w[((masks & c) == c) & (w != 2)] = 2
            stack.append(w)
    tables = frozenset(PolyTable(np.frombuffer(k, np.uint8), 3) for k in found)
    return PureSaturations(tables, True, nodes)

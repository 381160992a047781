"""Dictating variables, the classification of small-2-set-free polymorphisms,
and reconfiguration graphs."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .polymorph import LO3, enumerate_polymorphisms, projection
from .recolour import (
    DEFAULT_PURE_BUDGET,
    enumerate_pure_saturations,
    has_small_2set,
    static_sets,
)
from .sets import PolyTable, check_arity, encode_table, popcounts


def dictating_variables(f: PolyTable) -> frozenset[int]:
    """All ``t`` with ``f(S) = [t in S]`` for every static boolean set ``S``."""
    n = f.n
    static = np.flatnonzero(static_sets(f) & (f.values < 2))
    vals = f.values[static]
    return frozenset(t for t in range(1, n + 1)
                     if np.array_equal((static >> (t - 1)) & 1, vals))


def kneser_check(f: PolyTable) -> bool:
    """Some set of at most three elements has value 1 or 2."""
    return bool(np.any((f.values >= 1) & (popcounts(f.n) <= 3)))


@dataclass(frozen=True)
class StructureVerdict:
    arity: int
    has_small_2set: bool
    dictating: int | None = None
    pure_saturation_dictators: frozenset = frozenset()
    conforms: bool | None = None
    saturations: int = 0
    detail: str = ""

    @property
    def unknown(self) -> bool:
        return self.conforms is None

    def to_record(self) -> dict:
        return {
            "arity": self.arity,
            "has_small_2set": self.has_small_2set,
            "dictating": self.dictating,
            "pure_saturation_dictators": sorted(self.pure_saturation_dictators),
            "conforms": self.conforms,
            "saturations": self.saturations,
            "detail": self.detail,
        }


def verify_structure_theorem(f: PolyTable, budget: int = DEFAULT_PURE_BUDGET) -> StructureVerdict:
    """Classify ``f`` against the structure theorem.

    Tables with a small 2-set conform vacuously.  For ``n <= 6`` the
    dictating set of ``f`` itself must be a singleton; for ``n >= 7`` every
    pure saturation must have the same singleton dictating set.  An
    exhausted pure-saturation budget gives ``conforms=None``.
    """
    n = f.n
    if has_small_2set(f):
        return StructureVerdict(n, True, conforms=True, detail="hypothesis unmet: small 2-set")
    if n <= 6:
        d = dictating_variables(f)
        t = next(iter(d)) if len(d) == 1 else None
        return StructureVerdict(n, False, t, frozenset(), len(d) == 1,
                                detail=f"dictating set {sorted(d)}")
    sats = enumerate_pure_saturations(f, budget)
    per = [dictating_variables(g) for g in sats]
    union = frozenset().union(*per) if per else frozenset()
    if not sats.complete:
        return StructureVerdict(n, False, None, union, None, len(sats),
                                detail="pure saturation budget exhausted")
    ok = bool(per) and all(len(d) == 1 for d in per) and len(union) == 1
    t = next(iter(union)) if ok else None
    return StructureVerdict(n, False, t, union, ok, len(sats),
                            detail=f"{len(sats)} pure saturation(s)")


class DSU:
    """Union-find with path halving and union by size."""

    def __init__(self, n: int):
        self.parent = list(range(n))
        self.size = [1] * n

    def find(self, x: int) -> int:
        parent = self.parent
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if self.size[ra] < self.size[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        self.size[ra] += self.size[rb]
        return True


@dataclass(frozen=True)
class Component:
    size: int
    projections: tuple[int, ...]
    representative: str


@dataclass(frozen=True)
class ReconfigReport:
    arity: int
    vertex_count: int
    removed: int
    components: tuple[Component, ...]
    full_graph_components: int
    edges: int = field(default=0)

    @property
    def unique_projection_per_component(self) -> bool:
        return all(len(c.projections) == 1 for c in self.components)

    def to_record(self) -> dict:
        return {
            "arity": self.arity,
            "vertices": self.vertex_count,
            "removed_small_2set": self.removed,
            "full_graph_components": self.full_graph_components,
            "edges_after_removal": self.edges,
            "components": [
                {"size": c.size, "projections": list(c.projections), "representative": c.representative}
                for c in self.components
            ],
        }


def _components(keys: list[bytes], ell: int) -> tuple[DSU, int]:
    index = {k: i for i, k in enumerate(keys)}
    dsu = DSU(len(keys))
    edges = 0
    for i, k in enumerate(keys):
        buf = bytearray(k)
        for pos in range(len(buf)):
            old = buf[pos]
            for c in range(ell):
                if c == old:
                    continue
                buf[pos] = c
                j = index.get(bytes(buf))
                if j is not None and j > i:
                    edges += 1
                    dsu.union(i, j)
            buf[pos] = old
    return dsu, edges


def reconfig_graph(n: int, budget: int | None = None) -> ReconfigReport:
    """Components of the single-position-difference graph on n-ary polymorphisms,
    after dropping every polymorphism with a small 2-set."""
    n = check_arity(n)
    if n > 4:
        raise ValueError("reconfiguration graphs are built from exhaustive enumeration, n <= 4")
    tables = list(enumerate_polymorphisms(n, LO3, budget=budget))
    all_keys = [f.values.tobytes() for f in tables]
    full_dsu, _ = _components(all_keys, 3)
    full_count = len({full_dsu.find(i) for i in range(len(all_keys))})
    kept = [f for f in tables if not has_small_2set(f)]
    keys = [f.values.tobytes() for f in kept]
    dsu, edges = _components(keys, 3)
    proj = {projection(n, t).values.tobytes(): t for t in range(1, n + 1)}
    groups: dict[int, list[int]] = {}
    for i in range(len(keys)):
        groups.setdefault(dsu.find(i), []).append(i)
    comps = []
    for members in groups.values():
        ts = tuple(sorted(proj[keys[i]] for i in members if keys[i] in proj))
        comps.append(Component(len(members), ts, encode_table(kept[members[0]]).split("\n")[1]))
    comps.sort(key=lambda c: (c.projections, -c.size, c.representative))
    return ReconfigReport(n, len(tables), len(tables) - len(kept), tuple(comps), full_count, edges)

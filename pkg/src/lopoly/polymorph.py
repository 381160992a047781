"""Polymorphism membership for (LO_2, B) and exhaustive enumeration.

A table ``f`` over ``2^[n]`` is a polymorphism of ``(LO_2, B)`` iff every
partition ``(X, Y, Z)`` of ``[n]`` maps to a triple of B.  Only symmetric B
are accepted, so canonical (unordered) partitions suffice.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator

import numpy as np

from .sets import (
    PartitionTriple,
    PolyTable,
    check_arity,
    partition_arrays,
    popcounts,
)
from .templates import Relation3, lo_relation

LO3 = lo_relation(3)


class BudgetExhausted(RuntimeError):
    """A search ran out of its node budget; results seen so far are partial."""

    def __init__(self, message: str, nodes: int = 0, partial=None):
        super().__init__(message)
        self.nodes = nodes
        self.partial = partial


@dataclass(frozen=True)
class PolyWitness:
    verdict: bool
    violation: PartitionTriple | None = None
    values: tuple[int, int, int] | None = None

    def __bool__(self) -> bool:
        return self.verdict


def _check_target(f: PolyTable, target: Relation3) -> None:
    if not target.symmetric:
        raise ValueError("target relation must be symmetric")
    if target.d != f.ell:
        raise ValueError(f"target domain size {target.d} does not match table ell={f.ell}")


def is_polymorphism(f: PolyTable, target: Relation3 = LO3) -> PolyWitness:
    """Check every canonical partition; report the first violation on failure."""
    _check_target(f, target)
    n = f.n
    xs, ys, zs = partition_arrays(n)
    v = f.values.astype(np.intp)
    d = target.d
    ok = target.lookup[(v[xs] * d + v[ys]) * d + v[zs]]
    if ok.all():
        return PolyWitness(True)
    i = int(np.argmin(ok))
    p = PartitionTriple(int(xs[i]), int(ys[i]), int(zs[i]))
    return PolyWitness(False, p, (f[p.x], f[p.y], f[p.z]))


def projection(n: int, t: int, ell: int = 3) -> PolyTable:
    """The dictator on variable ``t``: ``f(X) = 1`` iff ``t`` is in ``X``."""
    n = check_arity(n)
    if not 1 <= t <= n:
        raise ValueError(f"projection coordinate {t} outside [1, {n}]")
    masks = np.arange(1 << n)
    return PolyTable((masks >> (t - 1)) & 1, ell)


def threshold_lo2_h2(m: int) -> PolyTable:
    """Boolean table of arity ``3m+1``: 1 iff at least ``m+1`` arguments are 1."""
    if m < 0 or 3 * m + 1 > 24:
        raise ValueError(f"arity 3*{m}+1 exceeds the cap of 24")
    n = 3 * m + 1
    return PolyTable((popcounts(n) >= m + 1).astype(np.uint8), ell=2)


class Filter(enum.Enum):
    ALL = "all"
    NO_SMALL_2SET = "no-small-2set"


@lru_cache(maxsize=None)
def _search_plan(n: int):
    """Mask order (popcount, then bits) and the partitions each step completes.

    For step ``k`` the entry lists ``(a, b)`` step positions of the other two
    parts of every partition whose last-assigned part is mask ``order[k]``.
    """
    pc = popcounts(n)
    order = sorted(range(1 << n), key=lambda m: (int(pc[m]), m))
    pos = {m: k for k, m in enumerate(order)}
    checks: list[list[tuple[int, int]]] = [[] for _ in order]
    xs, ys, zs = partition_arrays(n)
    for x, y, z in zip(xs.tolist(), ys.tolist(), zs.tolist()):
        ks = sorted((pos[x], pos[y], pos[z]))
        checks[ks[2]].append((ks[0], ks[1]))
    return order, [tuple(c) for c in checks]


def _allowed_table(target: Relation3) -> list[list[int]]:
    # allowed[a][b] = bitmask of c with (a, b, c) in target
    d = target.d
    out = [[0] * d for _ in range(d)]
    for a, b, c in target.triples:
        out[a][b] |= 1 << c
    return out


def enumerate_polymorphisms(n: int, target: Relation3 = LO3, filter: Filter | str = Filter.ALL,
                            budget: int | None = None) -> Iterator[PolyTable]:
    """Yield every polymorphism of (LO_2, target) of arity ``n`` once.

    Depth-first assignment over masks ordered by popcount then bits, pruning
    as soon as a fully assigned partition leaves the target.  With
    ``Filter.NO_SMALL_2SET`` masks of popcount at most 3 only take values 0
    and 1.  Results are buffered and yielded in ascending encoded order.  If
    ``budget`` search nodes are exceeded, the tables found so far are yielded
    and then :class:`BudgetExhausted` is raised.
    """
    n = check_arity(n)
    filter = Filter(filter)
    if not target.symmetric:
        raise ValueError("target relation must be symmetric")
    limit = 4 if filter is Filter.ALL else 6
    if n > limit:
        raise ValueError(f"enumeration with filter {filter.value} is limited to n <= {limit}")
    if filter is Filter.NO_SMALL_2SET and target.d < 3:
        raise ValueError("the no-small-2set filter needs a target containing colour 2")
    order, checks = _search_plan(n)
    d = target.d
    allowed = _allowed_table(target)
    pc = popcounts(n)
    full_dom = (1 << d) - 1
    domains = [full_dom if filter is Filter.ALL or pc[m] > 3 else 0b011 for m in order]
    size = len(order)
    vals = [0] * size
    found: list[bytes] = []
    nodes = 0
    exhausted = False

    def dfs(k: int) -> None:
        nonlocal nodes, exhausted
        if k == size:
            out = bytearray(size)
            for pos, m in enumerate(order):
                out[m] = vals[pos]
            found.append(bytes(out))
            return
        dom = domains[k]
        for a, b in checks[k]:
            dom &= allowed[vals[a]][vals[b]]
            if not dom:
                return
        c = 0
        while dom:
            if dom & 1:
                nodes += 1
                if budget is not None and nodes > budget:
                    exhausted = True
                    return
                vals[k] = c
                dfs(k + 1)
                if exhausted:
                    return
            dom >>= 1
            c += 1

    dfs(0)
    found.sort()
    for raw in found:
        yield PolyTable(np.frombuffer(raw, dtype=np.uint8), d)
    if exhausted:
        raise BudgetExhausted(f"enumeration budget of {budget} nodes exhausted", nodes, len(found))


def count_polymorphisms(n: int, target: Relation3 = LO3, filter: Filter | str = Filter.ALL,
                        budget: int | None = None) -> int:
    return sum(1 for _ in enumerate_polymorphisms(n, target, filter, budget))


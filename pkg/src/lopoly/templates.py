"""Symmetric ternary relations LO_k and NAE_k, and the D(B) digraph test."""
from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable

import numpy as np


class Relation3:
    """A ternary relation over ``{0, ..., d-1}``.

    With ``symmetric=True`` the constructor asserts invariance under all six
    coordinate permutations.
    """

    def __init__(self, d: int, triples: Iterable[tuple[int, int, int]], symmetric: bool = True,
                 name: str | None = None):
        if d < 1:
            raise ValueError("domain size must be positive")
        ts = frozenset(tuple(int(c) for c in t) for t in triples)
        for t in ts:
            if len(t) != 3 or not all(0 <= c < d for c in t):
                raise ValueError(f"triple {t} not over domain of size {d}")
        if symmetric:
            for t in ts:
                for p in itertools.permutations(t):
                    if p not in ts:
                        raise ValueError(f"relation not symmetric: {t} in, {p} out")
        self.d = d
        self.triples = ts
        self.symmetric = symmetric
        self.name = name

    def __contains__(self, t) -> bool:
        return tuple(t) in self.triples

    def __len__(self) -> int:
        return len(self.triples)

    def __iter__(self):
        return iter(sorted(self.triples))

    def __eq__(self, other):
        if not isinstance(other, Relation3):
            return NotImplemented
        return self.d == other.d and self.triples == other.triples

    def __hash__(self):
        return hash((self.d, self.triples))

    def __repr__(self):
        label = self.name or "Relation3"
        return f"<{label} d={self.d} |R|={len(self.triples)}>"

    @cached_property
    def lookup(self) -> np.ndarray:
        """Flat boolean array indexed by ``a*d*d + b*d + c``."""
        tab = np.zeros(self.d**3, dtype=bool)
        for a, b, c in self.triples:
            tab[(a * self.d + b) * self.d + c] = True
        tab.flags.writeable = False
        return tab

    def relabel(self, perm) -> "Relation3":
        """Image of the relation under a permutation of the domain."""
        return Relation3(self.d, ((perm[a], perm[b], perm[c]) for a, b, c in self.triples),
                         self.symmetric)


def _check_k(k: int) -> None:
    if k < 2:
        raise ValueError(f"need at least 2 colours, got {k}")


def lo_relation(k: int) -> Relation3:
    """Triples over {0..k-1} whose maximum occurs exactly once."""
    _check_k(k)
    triples = [t for t in itertools.product(range(k), repeat=3) if t.count(max(t)) == 1]
    return Relation3(k, triples, name=f"LO{k}")


def nae_relation(k: int) -> Relation3:
    """All non-constant triples over {0..k-1}."""
    _check_k(k)
    triples = [t for t in itertools.product(range(k), repeat=3) if len(set(t)) > 1]
    return Relation3(k, triples, name=f"NAE{k}")


def parse_target(name: str) -> Relation3:
    """``lo3``, ``lo2``, ``nae2`` and in general ``loK`` / ``naeK``."""
    s = name.strip().lower()
    for prefix, build in (("nae", nae_relation), ("lo", lo_relation)):
        if s.startswith(prefix) and s[len(prefix):].isdigit():
            return build(int(s[len(prefix):]))
    raise ValueError(f"unknown target {name!r}")


class ZVerdict(enum.Enum):
    NO_HOM_TO_Z_TARGET = "NO_HOM_TO_Z_TARGET"
    INCONCLUSIVE = "INCONCLUSIVE"


@dataclass(frozen=True)
class ZCheckVerdict:
    edges: tuple[tuple[int, int], ...]
    verdict: ZVerdict
    loops: tuple[int, ...] = field(default=())
    cycle: tuple[int, ...] = field(default=())


def _find_cycle(d: int, adj: list[list[int]]) -> tuple[int, ...]:
    # iterative DFS, colours: 0 white, 1 on stack, 2 done
    colour = [0] * d
    for root in range(d):
        if colour[root]:
            continue
        stack = [(root, iter(adj[root]))]
        path = [root]
        colour[root] = 1
        while stack:
            v, it = stack[-1]
            nxt = next(it, None)
            if nxt is None:
                colour[v] = 2
                stack.pop()
                path.pop()
            elif colour[nxt] == 1:
                return tuple(path[path.index(nxt):])
            elif colour[nxt] == 0:
                colour[nxt] = 1
                stack.append((nxt, iter(adj[nxt])))
                path.append(nxt)
    return ()


def z_check(rel: Relation3) -> ZCheckVerdict:
    """Build D(B) (edge x->y iff (x,x,y) in rel) and test it for loops and cycles.

    A loopless acyclic D(B) rules out a homomorphism from the integers with
    x+y+z=1; otherwise the test says nothing.
    """
    if rel.d > 16:
        raise ValueError("z_check supports domains of size at most 16")
    edges = sorted({(a, c) for a, b, c in rel.triples if a == b})
    loops = tuple(x for x, y in edges if x == y)
    adj: list[list[int]] = [[] for _ in range(rel.d)]
    for x, y in edges:
        if x != y:
            adj[x].append(y)
    cycle = () if loops else _find_cycle(rel.d, adj)
    verdict = ZVerdict.INCONCLUSIVE if loops or cycle else ZVerdict.NO_HOM_TO_Z_TARGET
    return ZCheckVerdict(tuple(edges), verdict, loops, cycle)

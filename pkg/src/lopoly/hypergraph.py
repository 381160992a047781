"""3-uniform hypergraph instances: LO colouring checks, an exact solver,
planted instances and the LO_3 -> LO_4 gadget reduction.

Vertices are 0-based in memory and 1-based in files.
"""
from __future__ import annotations

import enum
import random
from dataclasses import dataclass
from typing import Iterable, Sequence


class InstanceFormatError(ValueError):
    pass


@dataclass(frozen=True)
class Hypergraph3:
    vertices: int
    edges: tuple[tuple[int, int, int], ...]

    def __init__(self, vertices: int, edges: Iterable[Sequence[int]] = ()):
        es = tuple(tuple(int(v) for v in e) for e in edges)
        if vertices < 0:
            raise ValueError("vertex count must be non-negative")
        for e in es:
            if len(e) != 3 or not all(0 <= v < vertices for v in e):
                raise ValueError(f"edge {e} is not a triple over {vertices} vertices")
        object.__setattr__(self, "vertices", int(vertices))
        object.__setattr__(self, "edges", es)

    def degrees(self) -> list[int]:
        deg = [0] * self.vertices
        for e in self.edges:
            for v in set(e):
                deg[v] += 1
        return deg


Assignment = tuple[int, ...]


def _is_lo(a: int, b: int, c: int) -> bool:
    top = max(a, b, c)
    return (a == top) + (b == top) + (c == top) == 1


def verify_lo(h: Hypergraph3, ell: int, colours: Sequence[int]) -> int | None:
    """Index of the first edge whose colours lack a unique maximum, else ``None``."""
    if len(colours) != h.vertices:
        raise ValueError(f"assignment has {len(colours)} entries for {h.vertices} vertices")
    for c in colours:
        if not 0 <= c < ell:
            raise ValueError(f"colour {c} outside [0, {ell})")
    for i, (x, y, z) in enumerate(h.edges):
        if not _is_lo(colours[x], colours[y], colours[z]):
            return i
    return None


def verify_nae(h: Hypergraph3, colours: Sequence[int]) -> int | None:
    """Index of the first monochromatic edge, else ``None``."""
    for i, (x, y, z) in enumerate(h.edges):
        if colours[x] == colours[y] == colours[z]:
            return i
    return None


class SolveStatus(enum.Enum):
    SAT = "SAT"
    UNSAT = "UNSAT"
    BUDGET = "BUDGET"


@dataclass(frozen=True)
class SolveResult:
    status: SolveStatus
    assignment: Assignment | None = None
    nodes: int = 0


def solve_lo_exact(h: Hypergraph3, ell: int, budget: int | None = 10**7) -> SolveResult:
    """Backtracking LO_ell colouring search.

    Vertices go in order of decreasing degree, colours smallest first.  After
    each assignment every edge with one unassigned vertex left has that
    vertex's domain narrowed; an empty domain backtracks.
    """
    if ell < 1:
        raise ValueError("need at least one colour")
    V = h.vertices
    incident: list[list[tuple[int, int, int]]] = [[] for _ in range(V)]
    for e in h.edges:
        for v in set(e):
            incident[v].append(e)
        if e[0] == e[1] == e[2]:
            return SolveResult(SolveStatus.UNSAT)
    deg = h.degrees()
    order = sorted(range(V), key=lambda v: (-deg[v], v))
    full = (1 << ell) - 1
    colour = [-1] * V
    domain = [full] * V
    nodes = 0

    def forced(e, target):
        # colours for `target` that give e a unique max, the rest fixed
        others = [colour[v] for v in e if v != target]
        k = 3 - len(others)  # occurrences of target in e
        ok = 0
        for c in range(ell):
            vals = others + [c] * k
            if _is_lo(*vals):
                ok |= 1 << c
        return ok

    def propagate(v) -> list[tuple[int, int]] | None:
        trail = []
        for e in incident[v]:
            free = {u for u in e if colour[u] < 0}
            if not free:
                if not _is_lo(*(colour[u] for u in e)):
                    return _undo(trail)
            elif len(free) == 1:
                u = free.pop()
                nd = domain[u] & forced(e, u)
                if nd != domain[u]:
                    trail.append((u, domain[u]))
                    domain[u] = nd
                    if not nd:
                        return _undo(trail)
        return trail

    def _undo(trail):
        for u, d in reversed(trail):
            domain[u] = d
        return None

    def search(k: int) -> bool | None:
        nonlocal nodes
        if k == V:
            return True
        v = order[k]
        d = domain[v]
        c = 0
        while d:
            if d & 1:
                nodes += 1
                if budget is not None and nodes > budget:
                    return None
                colour[v] = c
                trail = propagate(v)
                if trail is not None:
                    r = search(k + 1)
                    if r is None or r:
                        return r
                    _undo(trail)
                colour[v] = -1
            d >>= 1
            c += 1
        return False

    import sys

    limit = sys.getrecursionlimit()
    if V + 100 > limit:
        sys.setrecursionlimit(V + 100)
    try:
        r = search(0)
    finally:
        sys.setrecursionlimit(limit)
    if r is None:
        return SolveResult(SolveStatus.BUDGET, None, nodes)
    if not r:
        return SolveResult(SolveStatus.UNSAT, None, nodes)
    a = tuple(colour)
    if verify_lo(h, ell, a) is not None:
        raise AssertionError("solver produced an invalid colouring")
    return SolveResult(SolveStatus.SAT, a, nodes)


def gadget_reduce(h: Hypergraph3) -> Hypergraph3:
    """Add a vertex ``x + V`` and the edge ``(x, x, x + V)`` for every vertex ``x``."""
    V = h.vertices
    extra = tuple((x, x, x + V) for x in range(V))
    return Hypergraph3(2 * V, h.edges + extra)


def lift_colouring(h: Hypergraph3, colours: Sequence[int]) -> Assignment:
    """Colouring of ``gadget_reduce(h)``: originals keep their colour, ``n_x`` gets one more."""
    return tuple(colours) + tuple(c + 1 for c in colours)


def plant_lo2(vertices: int, edges: int, seed: int) -> tuple[Hypergraph3, Assignment]:
    """Random instance with a hidden 1-in-3 solution.

    Each edge is one planted-1 vertex and two distinct planted-0 vertices in
    random order.
    """
    if vertices < 3:
        raise ValueError("planting needs at least 3 vertices")
    if edges < 0:
        raise ValueError("edge count must be non-negative")
    rng = random.Random(seed)
    while True:
        plant = tuple(1 if rng.random() < 1 / 3 else 0 for _ in range(vertices))
        ones = [v for v in range(vertices) if plant[v]]
        zeros = [v for v in range(vertices) if not plant[v]]
        if ones and len(zeros) >= 2:
            break
    out = []
    for _ in range(edges):
        e = [rng.choice(ones), *rng.sample(zeros, 2)]
        rng.shuffle(e)
        out.append(tuple(e))
    return Hypergraph3(vertices, out), plant


def format_instance(h: Hypergraph3) -> str:
    lines = [f"p hlo {h.vertices} {len(h.edges)}"]
    lines.extend(f"e {x + 1} {y + 1} {z + 1}" for x, y, z in h.edges)
    return "\n".join(lines) + "\n"


def parse_instance(text: str) -> Hypergraph3:
    lines = [ln for ln in text.split("\n") if ln.strip() and not ln.startswith("c")]
    if not lines:
        raise InstanceFormatError("empty instance")
    head = lines[0].split()
    if len(head) != 4 or head[:2] != ["p", "hlo"] or not head[2].isdigit() or not head[3].isdigit():
        raise InstanceFormatError(f"malformed header {lines[0]!r}")
    V, m = int(head[2]), int(head[3])
    if len(lines) - 1 != m:
        raise InstanceFormatError(f"header announces {m} edges, found {len(lines) - 1}")
    edges = []
    for ln in lines[1:]:
        tok = ln.split()
        if len(tok) != 4 or tok[0] != "e" or not all(t.isdigit() for t in tok[1:]):
            raise InstanceFormatError(f"malformed edge line {ln!r}")
        e = tuple(int(t) - 1 for t in tok[1:])
        if not all(0 <= v < V for v in e):
            raise InstanceFormatError(f"edge {ln!r} mentions a vertex outside 1..{V}")
        edges.append(e)
    return Hypergraph3(V, edges)


def format_assignment(colours: Sequence[int]) -> str:
    return " ".join(["a", *map(str, colours)]) + "\n"


def parse_assignment(text: str) -> Assignment:
    tok = text.split()
    if not tok or tok[0] != "a" or not all(t.isdigit() for t in tok[1:]):
        raise InstanceFormatError("assignment line must read 'a c1 c2 ...'")
    return tuple(int(t) for t in tok[1:])

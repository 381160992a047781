"""Affine integer relaxation for 1-in-3 instances: solve ``x + y + z = 1`` over
the integers and round positives to 1, giving a not-all-equal colouring."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .hypergraph import Assignment, Hypergraph3, verify_nae


class NoIntegerSolution:
    """Sentinel outcome: the system has no solution over the integers."""

    _inst = None

    def __new__(cls):
        if cls._inst is None:
            cls._inst = super().__new__(cls)
        return cls._inst

    def __repr__(self):
        return "NO_INTEGER_SOLUTION"

    def __bool__(self):
        return False


NO_INTEGER_SOLUTION = NoIntegerSolution()


@dataclass(frozen=True)
class IntLinSystem:
    rows: tuple[tuple[int, ...], ...]
    rhs: tuple[int, ...]
    variables: int

    def residual(self, x: Sequence[int]) -> list[int]:
        return [sum(a * v for a, v in zip(row, x)) - b for row, b in zip(self.rows, self.rhs)]

    def satisfied_by(self, x: Sequence[int]) -> bool:
        return len(x) == self.variables and not any(self.residual(x))


IntSolution = tuple[int, ...]


def build_system(h: Hypergraph3) -> IntLinSystem:
    rows = []
    for e in h.edges:
        row = [0] * h.vertices
        for v in e:
            row[v] += 1
        rows.append(tuple(row))
    return IntLinSystem(tuple(rows), (1,) * len(rows), h.vertices)


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    """``(g, s, t)`` with ``s*a + t*b = g = gcd(a, b) >= 0``."""
    s0, s1, t0, t1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if a < 0:
        return -a, -s0, -t0
    return a, s0, t0


def solve_integer(system: IntLinSystem) -> IntSolution | NoIntegerSolution:
    """A particular integer solution, or ``NO_INTEGER_SOLUTION``.

    Column operations with a tracked unimodular ``U`` bring ``A`` to lower
    column-echelon (Hermite) form ``H = A U``; ``H y = b`` is then solved by
    forward substitution, each pivot step needing exact divisibility, free
    coordinates set to 0, and ``x = U y``.  The result is checked by
    substitution before it is returned.
    """
    m, n = len(system.rows), system.variables
    # column-major: cols[j] holds column j of A stacked over column j of U
    cols = [[system.rows[i][j] for i in range(m)] + [int(k == j) for k in range(n)] for j in range(n)]
    pivots: list[tuple[int, int]] = []  # (row, column)
    k = 0
    for i in range(m):
        if k == n:
            break
        for j in range(k + 1, n):
            b = cols[j][i]
            if b == 0:
                continue
            a = cols[k][i]
            g, s, t = _xgcd(a, b)
            ca, cb = cols[k], cols[j]
            pa, pb = a // g, b // g
            cols[k] = [s * x + t * y for x, y in zip(ca, cb)]
            cols[j] = [pa * y - pb * x for x, y in zip(ca, cb)]
        p = cols[k][i]
        if p == 0:
            continue
        if p < 0:
            cols[k] = [-x for x in cols[k]]
            p = -p
        for j in range(k):
            q = cols[j][i] // p
            if q:
                cols[j] = [x - q * y for x, y in zip(cols[j], cols[k])]
        pivots.append((i, k))
        k += 1

    y = [0] * n
    for i, c in pivots:
        acc = system.rhs[i] - sum(cols[j][i] * y[j] for j in range(c))
        q, r = divmod(acc, cols[c][i])
        if r:
            return NO_INTEGER_SOLUTION
        y[c] = q
    # pivot coordinates are forced, so an unmet non-pivot row means no solution
    for i in range(m):
        if sum(cols[j][i] * y[j] for j in range(k)) != system.rhs[i]:
            return NO_INTEGER_SOLUTION
    x = tuple(sum(cols[j][m + r] * y[j] for j in range(n)) for r in range(n))
    if not system.satisfied_by(x):
        raise AssertionError("integer solver produced a non-solution")
    return x


def round_to_nae(solution: Sequence[int], h: Hypergraph3) -> Assignment:
    system = build_system(h)
    if not system.satisfied_by(solution):
        raise ValueError("solution does not satisfy the instance's linear system")
    a = tuple(1 if v >= 1 else 0 for v in solution)
    bad = verify_nae(h, a)
    if bad is not None:
        raise AssertionError(f"rounded edge {bad} is monochromatic")
    return a


def aip_pipeline(h: Hypergraph3) -> Assignment | NoIntegerSolution:
    sol = solve_integer(build_system(h))
    if sol is NO_INTEGER_SOLUTION:
        return sol
    return round_to_nae(sol, h)

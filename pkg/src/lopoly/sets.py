"""Subset bitmasks, polymorphism value tables and 3-partitions of [n].

Variables are 1-based externally (element ``i`` of ``[n]``) and 0-based in
mask bits: element ``i`` is bit ``i - 1``.  A table of arity ``n`` stores
``f(X)`` at index ``X`` for every mask ``0 <= X < 2**n``.
"""
from __future__ import annotations

from functools import lru_cache
from typing import Iterable, Iterator, NamedTuple

import numpy as np

MAX_ARITY = 24


class TableFormatError(ValueError):
    """Base class for table parse errors."""


class HeaderError(TableFormatError):
    pass


class LengthError(TableFormatError):
    pass


class DigitError(TableFormatError):
    pass


def check_arity(n: int) -> int:
    if not isinstance(n, (int, np.integer)) or not 1 <= n <= MAX_ARITY:
        raise ValueError(f"arity must be an integer in [1, {MAX_ARITY}], got {n!r}")
    return int(n)


def full_mask(n: int) -> int:
    return (1 << n) - 1


def complement(x: int, n: int) -> int:
    return full_mask(n) ^ x


def disjoint(x: int, y: int) -> bool:
    return x & y == 0


def popcount(x: int) -> int:
    return bin(x).count("1")


def mask_of(elements: Iterable[int]) -> int:
    """Mask of a collection of 1-based variable indices."""
    m = 0
    for i in elements:
        if i < 1:
            raise ValueError(f"variables are 1-based, got {i}")
        m |= 1 << (i - 1)
    return m


def elements_of(x: int) -> tuple[int, ...]:
    """Sorted 1-based variable indices contained in a mask."""
    out = []
    i = 1
    while x:
        if x & 1:
            out.append(i)
        x >>= 1
        i += 1
    return tuple(out)


def submasks(x: int) -> Iterator[int]:
    """All submasks of ``x`` in ascending order."""
    bits = elements_of(x)
    for k in range(1 << len(bits)):
        s = 0
        for j, b in enumerate(bits):
            if k >> j & 1:
                s |= 1 << (b - 1)
        yield s


@lru_cache(maxsize=None)
def popcounts(n: int) -> np.ndarray:
    pc = np.zeros(1 << n, dtype=np.int8)
    for b in range(n):
        pc.reshape(-1, 2, 1 << b)[:, 1, :] += 1
    pc.flags.writeable = False
    return pc


class PartitionTriple(NamedTuple):
    """Three pairwise disjoint masks covering ``[n]``; parts may be empty."""

    x: int
    y: int
    z: int


def iterate_partitions(n: int) -> Iterator[PartitionTriple]:
    """Yield each unordered partition of ``[n]`` into three parts once.

    Parts are listed with ``x <= y <= z`` (as integers).  Triples come out
    with ``x`` ascending, then ``y`` ascending over the submasks of the
    complement of ``x``.
    """
    n = check_arity(n)
    full = full_mask(n)
    for x in range(full + 1):
        rest = full ^ x
        for y in submasks(rest):
            if y < x:
                continue
            z = rest ^ y
            if y <= z:
                yield PartitionTriple(x, y, z)


@lru_cache(maxsize=16)
def ordered_partition_arrays(n: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """All ``3**n`` ordered partitions as parallel mask arrays."""
    n = check_arity(n)
    if n > 16:
        raise ValueError("ordered partition arrays are limited to n <= 16")
    codes = np.arange(3**n, dtype=np.int64)
    parts = [np.zeros(3**n, dtype=np.int64) for _ in range(3)]
    for b in range(n):
        digit = codes % 3
        codes //= 3
        for p in range(3):
            parts[p] |= (digit == p).astype(np.int64) << b
    for a in parts:
        a.flags.writeable = False
    return parts[0], parts[1], parts[2]


@lru_cache(maxsize=16)
def partition_arrays(n: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Canonical partitions as arrays, in the order of ``iterate_partitions``."""
    x, y, z = ordered_partition_arrays(n)
    keep = (x <= y) & (y <= z)
    x, y, z = x[keep], y[keep], z[keep]
    order = np.lexsort((y, x))
    out = (x[order].copy(), y[order].copy(), z[order].copy())
    for a in out:
        a.flags.writeable = False
    return out


class PolyTable:
    """A function ``2^[n] -> {0, ..., ell-1}`` stored as a value table.

    Instances are immutable and hashable; equality is entrywise.
    """

    __slots__ = ("values", "ell", "_hash")

    def __init__(self, values, ell: int = 3):
        arr = np.array(values, dtype=np.uint8).reshape(-1)
        size = arr.shape[0]
        if size < 2 or size & (size - 1):
            raise ValueError(f"table length must be 2**n with n >= 1, got {size}")
        check_arity(size.bit_length() - 1)
        if ell < 2 or ell > 10:
            raise ValueError(f"ell must lie in [2, 10], got {ell}")
        if size and int(arr.max()) >= ell:
            raise ValueError(f"table entry {int(arr.max())} is not below ell={ell}")
        arr.flags.writeable = False
        self.values = arr
        self.ell = int(ell)
        self._hash = None

    @property
    def n(self) -> int:
        return self.values.shape[0].bit_length() - 1

    arity = n

    def __len__(self) -> int:
        return self.values.shape[0]

    def __getitem__(self, mask: int) -> int:
        return int(self.values[mask])

    def __eq__(self, other) -> bool:
        if not isinstance(other, PolyTable):
            return NotImplemented
        return self.ell == other.ell and np.array_equal(self.values, other.values)

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.ell, self.values.tobytes()))
        return self._hash

    def __lt__(self, other: "PolyTable") -> bool:
        return (self.n, self.values.tobytes()) < (other.n, other.values.tobytes())

    def __repr__(self) -> str:
        digits = self.digits()
        if len(digits) > 40:
            digits = digits[:37] + "..."
        return f"PolyTable(n={self.n}, ell={self.ell}, {digits})"

    def digits(self) -> str:
        return (self.values + ord("0")).tobytes().decode("ascii")

    def replace(self, mask: int, value: int) -> "PolyTable":
        arr = self.values.copy()
        arr[mask] = value
        return PolyTable(arr, self.ell)

    def with_ell(self, ell: int) -> "PolyTable":
        """Same values viewed with a different codomain size."""
        return PolyTable(self.values, ell)

    def sets_with_value(self, value: int) -> np.ndarray:
        return np.flatnonzero(self.values == value)

    @classmethod
    def from_function(cls, n: int, func, ell: int = 3) -> "PolyTable":
        """Tabulate ``func(mask)`` for every mask over ``[n]``."""
        n = check_arity(n)
        return cls([func(m) for m in range(1 << n)], ell)


def encode_table(f: PolyTable) -> str:
    return f"poly {f.n} {f.ell}\n{f.digits()}\n"


def decode_table(text: str) -> PolyTable:
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if len(lines) != 2:
        raise HeaderError(f"expected 2 lines, got {len(lines)}")
    head = lines[0].split(" ")
    if len(head) != 3 or head[0] != "poly" or not head[1].isdigit() or not head[2].isdigit():
        raise HeaderError(f"malformed header {lines[0]!r}")
    n, ell = int(head[1]), int(head[2])
    if not 1 <= n <= MAX_ARITY:
        raise HeaderError(f"arity {n} outside [1, {MAX_ARITY}]")
    if not 2 <= ell <= 10:
        raise HeaderError(f"ell {ell} outside [2, 10]")
    body = lines[1]
    if len(body) != 1 << n:
        raise LengthError(f"expected {1 << n} digits for n={n}, got {len(body)}")
    if not body.isascii() or not body.isdigit():
        raise DigitError("table body must consist of decimal digits")
    arr = np.frombuffer(body.encode("ascii"), dtype=np.uint8) - ord("0")
    bad = np.flatnonzero(arr >= ell)
    if bad.size:
        raise DigitError(f"digit {int(arr[bad[0]])} at mask {int(bad[0])} is not below ell={ell}")
    return PolyTable(arr, ell)


def superset_closure(indicator: np.ndarray, n: int) -> np.ndarray:
    """Boolean array marking every mask that contains some marked mask."""
    out = np.array(indicator, dtype=bool).copy()
    for b in range(n):
        v = out.reshape(-1, 2, 1 << b)
        v[:, 1, :] |= v[:, 0, :]
    return out


def subset_closure(indicator: np.ndarray, n: int) -> np.ndarray:
    """Boolean array marking every mask contained in some marked mask."""
    out = np.array(indicator, dtype=bool).copy()
    for b in range(n):
        v = out.reshape(-1, 2, 1 << b)
        v[:, 0, :] |= v[:, 1, :]
    return out

"""Minor maps, minor chains and the bounded-size variable selection I(f).

Minor maps use 1-based images: ``MinorMap((1, 1, 2))`` sends variables 1 and
2 to 1 and variable 3 to 2.  At table level ``g(S) = f(preimage(S))``.
"""
from __future__ import annotations

import enum
import json
import random
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np

from .families import block_dictator, star_saturation
from .polymorph import projection
from .recolour import saturate
from .sets import PolyTable, check_arity, decode_table, elements_of, encode_table, popcounts
from .structure import dictating_variables


class MinorMap:
    __slots__ = ("image", "m")

    def __init__(self, image: Sequence[int], m: int | None = None):
        image = tuple(int(i) for i in image)
        if not image:
            raise ValueError("minor map needs at least one variable")
        check_arity(len(image))
        m = max(image) if m is None else check_arity(m)
        if any(not 1 <= i <= m for i in image):
            raise ValueError(f"map images must lie in [1, {m}]")
        self.image = image
        self.m = m

    @property
    def n(self) -> int:
        return len(self.image)

    def __call__(self, i: int) -> int:
        return self.image[i - 1]

    def __eq__(self, other):
        if not isinstance(other, MinorMap):
            return NotImplemented
        return self.image == other.image and self.m == other.m

    def __hash__(self):
        return hash((self.image, self.m))

    def __repr__(self):
        return f"MinorMap({list(self.image)}, m={self.m})"

    @classmethod
    def identity(cls, n: int) -> "MinorMap":
        return cls(range(1, n + 1), n)

    def is_identity(self) -> bool:
        return self.m == self.n and self.image == tuple(range(1, self.n + 1))

    def preimage(self, s: int) -> int:
        out = 0
        for i, j in enumerate(self.image):
            if s >> (j - 1) & 1:
                out |= 1 << i
        return out

    def preimage_table(self) -> np.ndarray:
        """``preimage(S)`` for every mask ``S`` over ``[m]``."""
        fibers = [0] * self.m
        for i, j in enumerate(self.image):
            fibers[j - 1] |= 1 << i
        pre = np.zeros(1 << self.m, dtype=np.int64)
        for b in range(self.m):
            v = pre.reshape(-1, 2, 1 << b)
            v[:, 1, :] = v[:, 0, :] | fibers[b]
        return pre

    def then(self, other: "MinorMap") -> "MinorMap":
        """The composite ``other o self``."""
        if other.n != self.m:
            raise ValueError(f"cannot compose: {self.m} != {other.n}")
        return MinorMap((other(j) for j in self.image), other.m)


def apply_minor(f: PolyTable, pi: MinorMap) -> PolyTable:
    if pi.n != f.n:
        raise ValueError(f"map has {pi.n} variables, table arity is {f.n}")
    return PolyTable(f.values[pi.preimage_table()], f.ell)


class Branch(enum.Enum):
    SMALL_2SET = "SMALL_2SET"
    LOW_ARITY_DICTATOR = "LOW_ARITY_DICTATOR"
    SINGLETON_1SET = "SINGLETON_1SET"
    PAIR_1SET = "PAIR_1SET"


@dataclass(frozen=True)
class SelectionSet:
    owner: PolyTable
    mask: int
    branch: Branch
    dictator: int | None = None

    @property
    def variables(self) -> tuple[int, ...]:
        return elements_of(self.mask)

    def __len__(self) -> int:
        return bin(self.mask).count("1")


class SelectionError(RuntimeError):
    """The selection rule could not be applied; signals a bug upstream."""


def select_I(f: PolyTable) -> SelectionSet:
    """The canonical selection of at most three variables of ``f``.

    Smallest small 2-set (fewest elements, then least mask) if any; else
    ``{t}`` for the dictating variable when ``n <= 6``; else ``t`` is read off
    the larger-set pure saturation and the selection is ``{t}`` when
    ``f({t}) = 1`` and otherwise ``{t, b}`` for the least ``b`` with
    ``f({t, b}) = 1``.
    """
    return _select_cached(f)


@lru_cache(maxsize=1 << 16)
def _select_cached(f: PolyTable) -> SelectionSet:
    n = f.n
    pc = popcounts(n)
    small = np.flatnonzero((f.values == 2) & (pc <= 3))
    if small.size:
        best = min(small.tolist(), key=lambda m: (int(pc[m]), m))
        return SelectionSet(f, best, Branch.SMALL_2SET)
    if n <= 6:
        d = dictating_variables(f)
        if len(d) != 1:
            raise SelectionError(f"arity {n} table without small 2-set has dictating set {sorted(d)}")
        t = next(iter(d))
        return SelectionSet(f, 1 << (t - 1), Branch.LOW_ARITY_DICTATOR, t)
    sat = saturate(f, "large", verify=False)
    if not sat.pure:
        raise SelectionError("larger-set saturation introduced a small 2-set")
    d = dictating_variables(sat.result)
    if len(d) != 1:
        raise SelectionError(f"pure saturation has dictating set {sorted(d)}")
    t = next(iter(d))
    bit = 1 << (t - 1)
    if f[bit] == 1:
        return SelectionSet(f, bit, Branch.SINGLETON_1SET, t)
    for b in range(1, n + 1):
        if b != t and f[bit | 1 << (b - 1)] == 1:
            return SelectionSet(f, bit | 1 << (b - 1), Branch.PAIR_1SET, t)
    raise SelectionError(f"no two-element 1-set contains the dictating variable {t}")


class ChainError(ValueError):
    pass


class MinorChain:
    """``f_1, pi_12, f_2, ..., f_l`` with ``f_{i+1} = apply_minor(f_i, pi_{i,i+1})``."""

    def __init__(self, tables: Sequence[PolyTable], maps: Sequence[MinorMap]):
        tables = list(tables)
        maps = list(maps)
        if len(maps) != len(tables) - 1 or not tables:
            raise ChainError("a chain of l tables needs l-1 maps")
        for i, pi in enumerate(maps):
            if apply_minor(tables[i], pi) != tables[i + 1]:
                raise ChainError(f"table {i + 2} is not the minor of table {i + 1} under its map")
        self.tables = tables
        self.maps = maps

    def __len__(self) -> int:
        return len(self.tables)

    @classmethod
    def from_maps(cls, first: PolyTable, maps: Sequence[MinorMap]) -> "MinorChain":
        tables = [first]
        for pi in maps:
            tables.append(apply_minor(tables[-1], pi))
        return cls(tables, maps)

    def composite(self, i: int, j: int) -> MinorMap:
        """``pi_{i,j}`` for 1-based ``i < j``."""
        pi = self.maps[i - 1]
        for k in range(i, j - 1):
            pi = pi.then(self.maps[k])
        return pi

    def to_dict(self) -> dict:
        return {
            "arities": [f.n for f in self.tables],
            "tables": [encode_table(f) for f in self.tables],
            "maps": [list(pi.image) for pi in self.maps],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, data: dict) -> "MinorChain":
        try:
            tables = [decode_table(t) for t in data["tables"]]
            arities = data.get("arities")
            maps = [MinorMap(img, tables[k + 1].n) for k, img in enumerate(data["maps"])]
        except (KeyError, IndexError, TypeError, AttributeError) as e:
            raise ChainError(f"malformed chain document: {e!r}") from None
        if arities is not None and arities != [f.n for f in tables]:
            raise ChainError("arity list does not match the tables")
        return cls(tables, maps)

    @classmethod
    def from_json(cls, text: str) -> "MinorChain":
        return cls.from_dict(json.loads(text))


@dataclass(frozen=True)
class ChainResult:
    witness: tuple[int, int] | None
    selections: tuple[SelectionSet, ...]

    @property
    def violation(self) -> bool:
        return self.witness is None


class ChainInvariantError(AssertionError):
    pass


def chain_condition(chain: MinorChain) -> ChainResult:
    """Least ``(i, j)``, ``i < j``, whose pulled-back selection meets ``I(f_i)``.

    ``witness`` is ``None`` when no such pair exists.  Raises
    :class:`ChainInvariantError` if some pulled-back selection is empty.
    """
    sel = tuple(select_I(f) for f in chain.tables)
    witness = None
    for i in range(1, len(chain)):
        for j in range(i + 1, len(chain) + 1):
            back = chain.composite(i, j).preimage(sel[j - 1].mask)
            if back == 0:
                raise ChainInvariantError(f"preimage of I(f_{j}) under pi_{i},{j} is empty")
            if witness is None and back & sel[i - 1].mask:
                witness = (i, j)
    return ChainResult(witness, sel)


@lru_cache(maxsize=None)
def _saturated_seed(n: int, t: int, kind: str) -> PolyTable:
    if kind == "star":
        return star_saturation(n, t)
    return saturate(block_dictator(n, range(n - 6, n + 1), t, lowered=True)).result


def _seed_table(rng: random.Random, lo: int, hi: int) -> PolyTable:
    kind = rng.choice(("projection", "block", "block", "saturated"))
    if kind == "projection" or hi < 7:
        n = rng.randint(lo, hi)
        return projection(n, rng.randint(1, n))
    n = rng.randint(max(7, lo), hi)
    if kind == "block":
        block = rng.sample(range(1, n + 1), 7 if n < 9 or rng.random() < 0.7 else 9)
        return block_dictator(n, block, rng.randint(1, n), lowered=rng.random() < 0.5)
    return _saturated_seed(n, rng.randint(1, n), rng.choice(("star", "block")))


def random_chain(seed: int, min_arity: int = 1, max_arity: int = 9, length: int = 4) -> MinorChain:
    """A deterministic chain of family polymorphisms and random minor maps."""
    if not 1 <= min_arity <= max_arity <= 9:
        raise ValueError("arity bounds must satisfy 1 <= min <= max <= 9")
    if length < 1:
        raise ValueError("chain length must be positive")
    if length > 1 and max_arity < 2:
        raise ValueError("chains over unary tables admit only identity maps")
    rng = random.Random(seed)
    first = _seed_table(rng, min_arity, max_arity)
    n = first.n
    maps = []
    for _ in range(length - 1):
        if rng.random() < 0.5:
            m = rng.randint(max(min_arity, n - 2), min(max_arity, n + 1))
        else:
            m = rng.randint(min_arity, max_arity)
        maps.append(MinorMap([rng.randint(1, m) for _ in range(n)], m))
        n = m
    if maps and all(pi.is_identity() for pi in maps):
        # the last codomain is free to change, so perturb the last map
        last = maps[-1]
        if last.m == 1:
            maps[-1] = MinorMap([2], 2)
        else:
            img = list(last.image)
            img[0] = 2 if img[0] == 1 else 1
            maps[-1] = MinorMap(img, last.m)
    return MinorChain.from_maps(first, maps)

"""Constructed polymorphism families of arity >= 7 for lemma and chain tests."""
from __future__ import annotations

import random
from typing import Iterable

import numpy as np

from .polymorph import projection
from .recolour import is_recolourable_to, prefer_variable, saturate
from .sets import PolyTable, check_arity, full_mask, mask_of, popcounts


def block_dictator(n: int, block: Iterable[int], t: int, lowered: bool = False) -> PolyTable:
    """Majority-on-a-block table with dictator ``t``.

    ``g(S) = 2`` when ``S`` holds a strict majority of ``block``; otherwise
    ``g(S) = 1`` when ``t in S`` and ``S`` meets the block; else 0.  The block
    must have odd size; at size 7 with ``n = 9``, ``block = {3..9}``, ``t = 1``
    this is the nine-variable example g.  With ``lowered=True`` the block
    itself and ``[n]`` get value 1 (the example f).
    """
    n = check_arity(n)
    b = mask_of(block)
    size = bin(b).count("1")
    if size % 2 == 0 or b >> n:
        raise ValueError("block must be an odd-size subset of [n]")
    if not 1 <= t <= n:
        raise ValueError(f"dictator {t} outside [1, {n}]")
    need = (size + 1) // 2
    masks = np.arange(1 << n)
    hits = popcounts(n)[masks & b]
    vals = np.where(hits >= need, 2, np.where((hits >= 1) & ((masks >> (t - 1)) & 1 == 1), 1, 0))
    if lowered:
        vals[b] = 1
        vals[full_mask(n)] = 1
    return PolyTable(vals.astype(np.uint8), 3)


def example_g() -> PolyTable:
    return block_dictator(9, range(3, 10), 1)


def example_f() -> PolyTable:
    return block_dictator(9, range(3, 10), 1, lowered=True)


def example_minor_map() -> tuple[int, ...]:
    """Images of variables 1..9: the first two go to 1, the rest to 2."""
    return (1, 1, 2, 2, 2, 2, 2, 2, 2)


def star_saturation(n: int, t: int) -> PolyTable:
    """Saturation of ``projection(n, t)``: larger side of each pair, ties to the side holding ``t``.

    For ``n >= 7`` this has no small 2-sets; its 4-element 2-sets cover
    ``[n]`` only when ``n`` is 7 or 8.
    """
    return saturate(projection(n, t), prefer_variable(t)).result


def lowered_star(n: int, t: int, k: int, seed: int = 0) -> PolyTable:
    """Star saturation with up to ``k`` of its 2-sets of size ``n // 2`` holding ``t`` set back to 1.

    Only recolourings that keep the table a polymorphism are applied, so the
    result has several pure saturations whenever ``n`` is even.
    """
    g = star_saturation(n, t)
    pc = popcounts(n)
    bit = 1 << (t - 1)
    half = n // 2
    cands = [m for m in range(1 << n) if pc[m] == half and m & bit and g[m] == 2]
    rng = random.Random(seed)
    rng.shuffle(cands)
    done = 0
    for m in cands:
        if done >= k:
            break
        if is_recolourable_to(g, m, 1):
            g = g.replace(m, 1)
            done += 1
    return g


def family(max_arity: int = 9) -> list[tuple[str, PolyTable]]:
    """Named polymorphisms used by the lemma suite and chain generator."""
    out: list[tuple[str, PolyTable]] = []
    for n in range(7, max_arity + 1):
        out.append((f"projection({n},1)", projection(n, 1)))
        out.append((f"projection({n},{n})", projection(n, n)))
        out.append((f"star({n},1)", star_saturation(n, 1)))
    for n in range(7, max_arity + 1):
        for lo in range(0, n - 6):
            block = range(lo + 1, lo + 8)
            for t in sorted({1, n, lo + 1}):
                for lowered in (False, True):
                    tag = "f" if lowered else "g"
                    name = f"block{tag}(n={n},block={lo + 1}..{lo + 7},t={t})"
                    out.append((name, block_dictator(n, block, t, lowered)))
        if n >= 9:
            out.append((f"blockg(n={n},block=1..9,t=1)", block_dictator(n, range(1, 10), 1)))
    if max_arity >= 8:
        for k in (1, 2, 3):
            out.append((f"lowered_star(8,1,k={k})", lowered_star(8, 1, k, seed=k)))
    return out

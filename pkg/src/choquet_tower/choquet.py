"""Choquet integration and comonotonicity on finite spaces.

On a finite space every act is a finite step function, so the integral is
the exact telescoping sum over the act's descending level sets.  The
improper-integral definition is kept out of the library and used only as a
brute-force oracle in the tests.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from .core import Act, Capacity, FiniteSpace, Number, _require_same_space


class NotComonotonicError(ValueError):
    """Two acts move in opposite directions on some pair of points."""


@dataclass(frozen=True)
class ChainDecomposition:
    """Disjoint blocks of constant value covering the space, values descending.

    ``blocks`` pairs a bitmask with the act's value on it; ``decompose``
    produces strictly decreasing values, while a shared chain for a
    comonotonic pair may carry ties.
    """

    space: FiniteSpace
    blocks: tuple[tuple[int, Number], ...]

    def __post_init__(self):
        union = 0
        prev = None
        for mask, value in self.blocks:
            if mask == 0 or union & mask:
                raise ValueError("blocks must be non-empty and disjoint")
            union |= mask
            if prev is not None and value > prev:
                raise ValueError("block values must be non-increasing")
            prev = value
        if union != self.space.full_mask:
            raise ValueError("blocks must cover the space")

    @property
    def values(self) -> tuple[Number, ...]:
        return tuple(v for _, v in self.blocks)

    def reconstruct(self) -> Act:
        out = [0] * len(self.space)
        for mask, value in self.blocks:
            for i in range(len(self.space)):
                if mask >> i & 1:
                    out[i] = value
        return Act(self.space, tuple(out))


def decompose(f: Act) -> ChainDecomposition:
    """Group points by value and sort descending; equal values share a block."""
    by_value: dict = {}
    for i, v in enumerate(f.values):
        by_value.setdefault(v, 0)
        by_value[v] |= 1 << i
    blocks = tuple((by_value[v], v) for v in sorted(by_value, reverse=True))
    return ChainDecomposition(f.space, blocks)


def upper_level_distribution(u: Capacity, f: Act, r: Number) -> Number:
    """u of the upper level set {f >= r}, shifted down by 1 for negative r."""
    _require_same_space(u.space, f.space)
    mask = 0
    for i, v in enumerate(f.values):
        if v >= r:
            mask |= 1 << i
    return u.value(mask) if r >= 0 else u.value(mask) - 1


def choquet_sum(value_of: Callable[[int], Number], f: Act) -> Number:
    """Telescoping Choquet sum against any set function given mask-wise.

    Works for arbitrary monotone set functions (not only normalized
    capacities); the trailing zero sentinel makes negative act values come
    out right because the blocks cover the whole space.
    """
    chain = decompose(f)
    total = 0
    cum = 0
    blocks = chain.blocks
    for idx, (mask, value) in enumerate(blocks):
        cum |= mask
        nxt = blocks[idx + 1][1] if idx + 1 < len(blocks) else 0
        step = value - nxt
        if step != 0:
            total += step * value_of(cum)
    return total


def choquet_integral(u: Capacity, f: Act) -> Number:
    """The Choquet integral of an act against a capacity.

    Reduces to the u-weighted sum of values when u is additive, and to
    u(A) on the indicator act of A.
    """
    _require_same_space(u.space, f.space)
    return choquet_sum(u.value, f)


def are_comonotonic(f: Act, g: Act) -> bool:
    """True iff no pair of points has (f(x)-f(y))(g(x)-g(y)) < 0."""
    _require_same_space(f.space, g.space)
    n = len(f.values)
    for x in range(n):
        for y in range(x + 1, n):
            if (f.values[x] - f.values[y]) * (g.values[x] - g.values[y]) < 0:
                return False
    return True


def common_chain(f: Act, g: Act) -> tuple[ChainDecomposition, ChainDecomposition]:
    """One block list carrying both acts, values descending in lockstep.

    Exists exactly when f and g are comonotonic.
    """
    _require_same_space(f.space, g.space)
    if not are_comonotonic(f, g):
        raise NotComonotonicError("acts are not comonotonic")
    by_pair: dict = {}
    for i, pair in enumerate(zip(f.values, g.values)):
        by_pair.setdefault(pair, 0)
        by_pair[pair] |= 1 << i
    order = sorted(by_pair, reverse=True)
    f_blocks = tuple((by_pair[p], p[0]) for p in order)
    g_blocks = tuple((by_pair[p], p[1]) for p in order)
    return ChainDecomposition(f.space, f_blocks), ChainDecomposition(g.space, g_blocks)


def chain_act(space, blocks: tuple[tuple[int, Number], ...]) -> Act:
    """Assemble an act from (mask, value) blocks; missing points get 0."""
    out = [0] * len(space)
    for mask, value in blocks:
        for i in range(len(space)):
            if mask >> i & 1:
                out[i] = value
    return Act(space, tuple(out))

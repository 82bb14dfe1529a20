"""Uncertainty spaces: a finite space carrying several capacities at once.

The capacity list is itself a finite point set one level up, so evaluation
and Choquet expectation turn acts on the base into acts on the capacities.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence, Union

from .choquet import choquet_integral
from .core import (Act, Capacity, DuplicateLabelError, FiniteSpace, Number,
                   Subset, is_exact, _require_same_space)


def check_separated(capacities: Union["UncertaintySpace",
                                      Sequence[tuple[str, Capacity]]]
                    ) -> tuple[bool, Optional[tuple[str, str]]]:
    """Whether all capacities are pairwise distinct as set functions.

    Returns the first duplicate pair of names otherwise.  Distinct lists are
    exactly the ones whose evaluation acts separate points, so the powerset
    over the list is a faithful sigma-algebra.
    """
    if isinstance(capacities, UncertaintySpace):
        capacities = capacities.capacities
    seen: dict = {}
    for name, cap in capacities:
        sig = cap.signature()
        if sig in seen:
            return False, (seen[sig], name)
        seen[sig] = name
    return True, None


@dataclass(frozen=True)
class UncertaintySpace:
    """A finite space plus a named, non-empty list of distinct capacities."""

    base: FiniteSpace
    capacities: tuple[tuple[str, Capacity], ...]

    def __post_init__(self):
        if not self.capacities:
            raise ValueError("an uncertainty space needs at least one capacity")
        names = [name for name, _ in self.capacities]
        if len(set(names)) != len(names):
            raise DuplicateLabelError("capacity names must be unique")
        for name, cap in self.capacities:
            _require_same_space(cap.space, self.base)
        ok, pair = check_separated(self.capacities)
        if not ok:
            raise DuplicateLabelError(
                f"capacities {pair[0]!r} and {pair[1]!r} have identical tables")
        object.__setattr__(self, "_capacity_space", FiniteSpace(tuple(names)))
        object.__setattr__(self, "_by_name", dict(self.capacities))

    @property
    def names(self) -> tuple[str, ...]:
        return self._capacity_space.points

    @property
    def capacity_space(self) -> FiniteSpace:
        """The capacity list viewed as the point set one level up."""
        return self._capacity_space

    def capacity(self, name: str) -> Capacity:
        return self._by_name[name]


def epsilon(us: UncertaintySpace, subset: Union[Subset, int]) -> Act:
    """Evaluation act of a subset: each capacity reports its value on it."""
    if isinstance(subset, Subset):
        _require_same_space(subset.space, us.base)
        mask = subset.mask
    else:
        mask = int(subset)
        us.base.subset_of_mask(mask)
    return Act(us.capacity_space,
               tuple(cap.value(mask) for _, cap in us.capacities))


def xi(us: UncertaintySpace, f: Act) -> Act:
    """Choquet expectation act: each capacity reports its integral of f."""
    _require_same_space(f.space, us.base)
    return Act(us.capacity_space,
               tuple(choquet_integral(cap, f) for _, cap in us.capacities))


@dataclass(frozen=True)
class GTransform:
    """A strictly increasing continuous change of numeraire with its inverse."""

    forward: Callable[[Number], Number]
    inverse: Callable[[Number], Number]
    kind: str = "custom"
    param: Optional[Number] = None

    def __post_init__(self):
        for t in (-2.0, -0.5, 0.0, 0.25, 1.0, 3.0):
            back = self.inverse(self.forward(t))
            if abs(back - t) > 1e-9:
                raise ValueError(f"inverse(forward({t})) = {back}, not an inverse pair")

    @classmethod
    def linear(cls, c: Number = 1) -> "GTransform":
        if c <= 0:
            raise ValueError("linear transform needs a positive slope")
        return cls(lambda t: c * t, lambda s: s / c, kind="linear", param=c)

    @classmethod
    def entropic(cls, lam: float = 1.0) -> "GTransform":
        if lam <= 0:
            raise ValueError("entropic transform needs lambda > 0")
        return cls(lambda t: math.exp(lam * t),
                   lambda s: math.log(s) / lam,
                   kind="entropic", param=lam)


def xi_g(us: UncertaintySpace, f: Act, g: GTransform) -> Act:
    """Transformed expectation: inverse of g applied to xi of (g of f).

    A linear g changes nothing, so that case short-circuits to ``xi`` and
    stays exact in the rational backend.  The entropic case is the
    log-of-exponential-moment value measure and always computes in floats.
    """
    _require_same_space(f.space, us.base)
    if g.kind == "linear":
        return xi(us, f)
    if g.kind == "entropic" and g.param * float(f.sup_norm) > 700.0:
        raise OverflowError("entropic transform overflows for this act")
    lifted = f.map(lambda v: g.forward(float(v) if is_exact(v) else v))
    expect = xi(us, lifted)
    return expect.map(g.inverse)

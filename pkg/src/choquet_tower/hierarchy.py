"""U-sequences: towers of uncertainty spaces and multi-layer value functions.

Each level's points are the previous level's capacities.  A sequence is a
finite prefix that may close with the one-point terminal space or with a
parameterized capacity family integrated against a weight on [0, 1].
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional, Union

from .choquet import choquet_integral
from .core import (Act, Capacity, FiniteSpace, Number, Subset,
                   _require_same_space)
from .uncertainty import UncertaintySpace, xi


class LayerError(ValueError):
    """A value-function layer that is out of range or not materializable."""


class QuadratureError(ArithmeticError):
    """Gauss-Legendre refinement failed to stabilize."""


class _Terminal:
    """Marker for the one-point absorbing tail of a sequence."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "Terminal"


TERMINAL = _Terminal()


def terminal_space() -> UncertaintySpace:
    """The one-point space with its unique capacity."""
    star = FiniteSpace(("*",))
    bar = Capacity(star, masses=(Fraction(1),), is_additive=True)
    return UncertaintySpace(star, (("*", bar),))


@dataclass(frozen=True)
class UtilityFunction:
    """Nondecreasing payoff scale with utility 0 at 0 and strictly inside (0,1) at 1."""

    fn: Callable[[Number], Number]
    kind: str = "custom"
    u1: Number = None

    def __post_init__(self):
        if self.u1 is None:
            object.__setattr__(self, "u1", self.fn(1))
        zero = self.fn(0)
        if not (0 < self.u1 < 1) or zero != 0:
            raise ValueError(f"need 1 > fn(1) > fn(0) = 0, got fn(1)={self.u1}, fn(0)={zero}")

    def __call__(self, x: Number) -> Number:
        return self.fn(x)

    @classmethod
    def exp_saturating(cls) -> "UtilityFunction":
        """1 - exp(-x); float backend."""
        return cls(lambda x: 1.0 - math.exp(-float(x)), kind="exp1")

    @classmethod
    def anchored(cls, u1: Number) -> "UtilityFunction":
        """Linear scale through (1, u1); exact when u1 is rational."""
        if not 0 < u1 < 1:
            raise ValueError("anchor must lie strictly between 0 and 1")
        return cls(lambda x: u1 * x, kind="anchored", u1=u1)


@dataclass(frozen=True)
class FamilyLevel:
    """A [0,1]-parameterized family of additive capacities plus a weight on p.

    Closes a sequence: the family occupies one level and the weight measure
    the next, so a value function jumps two layers when it crosses this
    entry.  ``binomial_n`` tags families whose member masses are binomial
    coefficients in p (degree-n polynomials), unlocking the exact
    moment-identity path in ``integrate_family``.
    """

    base: FiniteSpace
    family: Callable[[Number], Capacity]
    weight: Union[str, tuple[tuple[Number, Number], ...]] = "lebesgue"
    binomial_n: Optional[int] = None
    weight_label: str = "lambda"

    def __post_init__(self):
        if self.weight != "lebesgue" and not isinstance(self.weight, tuple):
            raise ValueError("weight must be 'lebesgue' or ((p, mass), ...)")
        for p in (Fraction(0), Fraction(1, 4), Fraction(1, 2), Fraction(3, 4), Fraction(1)):
            cap = self.family(p)
            _require_same_space(cap.space, self.base)
            if not cap.is_additive:
                raise ValueError(f"family member at p={p} is not additive")

    @property
    def weight_space(self) -> FiniteSpace:
        return FiniteSpace((self.weight_label,))


Level = Union[UncertaintySpace, FamilyLevel, _Terminal]


def _gauss_legendre_01(n: int) -> tuple[list[float], list[float]]:
    from numpy.polynomial.legendre import leggauss

    xs, ws = leggauss(n)
    return [(x + 1.0) / 2.0 for x in xs], [w / 2.0 for w in ws]


def integrate_family(level: FamilyLevel,
                     phi: Optional[Callable[[Number], Number]] = None,
                     *,
                     act: Optional[Act] = None) -> Number:
    """Integrate a functional of the family against its weight over p.

    Exactly one of ``phi`` (p maps to a number) and ``act`` may be given.
    With ``act`` the integrand is the Choquet integral of the act under the
    p-th member; for a binomial family under Lebesgue weight that integrand
    is linear in the member masses, each of which integrates to
    1/(binomial_n + 1), so the result is the exact mean of the act's values.
    The generic path uses Gauss-Legendre with enough nodes to be exact on
    polynomials of the family's degree, and one refinement doubling as a
    cross-check.
    """
    if (phi is None) == (act is None):
        raise ValueError("give exactly one of phi/act")

    if isinstance(level.weight, tuple):
        evaluate = (lambda p: choquet_integral(level.family(p), act)) if act else phi
        return sum(w * evaluate(p) for p, w in level.weight)

    if act is not None:
        _require_same_space(act.space, level.base)
        if level.binomial_n is not None:
            return sum(act.values, start=Fraction(0)) / (level.binomial_n + 1)
        phi = lambda p: choquet_integral(level.family(p), act)

    nodes = (level.binomial_n // 2 + 1) if level.binomial_n is not None else 16
    nodes = max(nodes, 4)
    results = []
    for n in (nodes, 2 * nodes):
        xs, ws = _gauss_legendre_01(n)
        results.append(math.fsum(w * float(phi(x)) for x, w in zip(xs, ws)))
    if abs(results[0] - results[1]) > 1e-9:
        raise QuadratureError(
            f"refinement moved the value by {abs(results[0] - results[1])!r}")
    return results[1]


@dataclass(frozen=True)
class USequence:
    """Finite prefix of linked uncertainty spaces, possibly closed."""

    levels: tuple[Level, ...]

    def __post_init__(self):
        if not self.levels or not isinstance(self.levels[0], UncertaintySpace):
            raise ValueError("a sequence starts with a concrete uncertainty space")
        for cur, nxt in zip(self.levels, self.levels[1:]):
            if isinstance(cur, UncertaintySpace):
                if isinstance(nxt, UncertaintySpace):
                    if nxt.base.points != cur.names:
                        raise ValueError(
                            "next level's points must be this level's capacities")
                elif isinstance(nxt, FamilyLevel):
                    if nxt.base.points != cur.names:
                        raise ValueError(
                            "family base must be the previous level's capacities")
                elif nxt is TERMINAL and len(cur.capacities) != 1:
                    raise ValueError(
                        "only a single-capacity level can close with the terminal space")
            elif isinstance(cur, FamilyLevel):
                if nxt is not TERMINAL:
                    raise ValueError("a family level closes the sequence")
            elif cur is TERMINAL and nxt is not TERMINAL:
                raise ValueError("levels after the terminal space stay terminal")

    @property
    def layer_count(self) -> int:
        """Highest layer an act can be pushed to."""
        n = 0
        for level in self.levels:
            n += 2 if isinstance(level, FamilyLevel) else 1
        return n

    def base_space(self) -> FiniteSpace:
        return self.levels[0].base


def _push_one(level: Level, act: Act) -> Act:
    if isinstance(level, UncertaintySpace):
        return xi(level, act)
    if level is TERMINAL:
        if len(act.values) != 1:
            raise LayerError("terminal level expects a one-point act")
        term = terminal_space()
        return Act(term.capacity_space, (act.values[0],))
    raise LayerError("family level act is a function of p, not materializable")


def xi_chain(seq: USequence, f: Act, m: int, n: int) -> Act:
    """Iterated Choquet expectation from layer m up to layer n."""
    if not 0 <= m <= n <= seq.layer_count:
        raise LayerError(f"need 0 <= {m} <= {n} <= {seq.layer_count}")
    act = f
    layer = 0
    for level in seq.levels:
        if layer >= n:
            break
        width = 2 if isinstance(level, FamilyLevel) else 1
        if layer >= m:
            if isinstance(level, FamilyLevel):
                if n == layer + 1:
                    raise LayerError(
                        "the family layer itself is not materializable; "
                        "integrate to the weight layer instead")
                _require_same_space(act.space, level.base)
                value = integrate_family(level, act=act)
                act = Act(level.weight_space, (value,))
            else:
                act = _push_one(level, act)
        layer += width
    if layer < n:
        raise LayerError(f"layer {n} is beyond the stored sequence")
    return act


def value_function(seq: USequence, f: Act, n: int, util: UtilityFunction) -> Act:
    """Utility of an act pushed up n layers by iterated Choquet expectation."""
    _require_same_space(f.space, seq.base_space())
    return xi_chain(seq, f.map(util), 0, n)


def conditional_act(subset: Subset, f: Act, g: Act) -> Act:
    """The act equal to f on the subset and to g off it."""
    _require_same_space(f.space, g.space)
    _require_same_space(f.space, subset.space)
    return Act(f.space,
               tuple(f.values[i] if subset.mask >> i & 1 else g.values[i]
                     for i in range(len(f.space))))

"""The single-urn thought experiment, run through two and three layers.

An urn holds 3N balls: N red, and blue/yellow in unknown proportion.  The
first layer is a family of capacities u_k indexed by the hypothetical blue
count (distorted by an exponent alpha >= 1); the second layer weighs the
u_k uniformly (variant X) or binomially (variant Y); variant Z makes the
binomial parameter itself uncertain and weighs it with Lebesgue measure,
adding a third layer.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .core import (Act, Capacity, FiniteSpace, Number, indicator, is_exact,
                   make_space, validate_capacity)
from .hierarchy import (TERMINAL, FamilyLevel, USequence, UtilityFunction,
                        value_function)
from .uncertainty import UncertaintySpace

ACT_NAMES = ("f1", "f2", "f3", "f4")
VARIANTS = ("X", "Y", "Z")


@dataclass(frozen=True)
class UrnParams:
    """Ball-count scale N (3N balls), distortion exponent, and utility anchor."""

    big_n: int
    alpha: Number
    u1: Number

    def __post_init__(self):
        if self.big_n < 1:
            raise ValueError("need N >= 1")
        if self.alpha < 1:
            raise ValueError("need alpha >= 1")
        if not 0 < self.u1 < 1:
            raise ValueError("need 0 < u1 < 1")
        alpha = self.alpha
        if isinstance(alpha, float) and alpha.is_integer():
            alpha = int(alpha)
        if isinstance(alpha, Fraction) and alpha.denominator == 1:
            alpha = int(alpha)
        object.__setattr__(self, "alpha", alpha)

    @property
    def exact(self) -> bool:
        """Integer exponents stay in the rational backend end-to-end."""
        return isinstance(self.alpha, int) and is_exact(self.u1)

    def ratio_power(self, k: int) -> Number:
        """(k / 2N) ** alpha in the proper backend."""
        t = Fraction(k, 2 * self.big_n)
        if isinstance(self.alpha, int):
            return t ** self.alpha
        return float(t) ** float(self.alpha)


def build_urn_space(params: UrnParams) -> UncertaintySpace:
    """The urn with one capacity u_k per hypothetical blue count k = 0..2N."""
    space = make_space(["R", "B", "Y"])
    two_n = 2 * params.big_n
    third = Fraction(1, 3)
    caps = []
    for k in range(two_n + 1):
        blue = 2 * third * params.ratio_power(k)
        yellow = 2 * third * params.ratio_power(two_n - k)
        table = {
            0b000: 0,
            space.mask(["R"]): third,
            space.mask(["B"]): blue,
            space.mask(["Y"]): yellow,
            space.mask(["R", "B"]): third + blue,
            space.mask(["R", "Y"]): third + yellow,
            space.mask(["B", "Y"]): 2 * third,
            0b111: 1,
        }
        caps.append((f"u{k}", validate_capacity(space, table)))
    return UncertaintySpace(space, tuple(caps))


def standard_acts(space: FiniteSpace) -> dict[str, Act]:
    """Bets on red, blue, blue-or-yellow, red-or-yellow."""
    return {
        "f1": indicator(space, space.subset(["R"])),
        "f2": indicator(space, space.subset(["B"])),
        "f3": indicator(space, space.subset(["B", "Y"])),
        "f4": indicator(space, space.subset(["R", "Y"])),
    }


def binomial_family(urn: UncertaintySpace, big_n: int) -> FamilyLevel:
    """p maps to the binomial(2N, p) weighting of the u_k."""
    two_n = 2 * big_n
    base = urn.capacity_space

    def member(p: Number) -> Capacity:
        if is_exact(p):
            p = Fraction(p)
            q = 1 - p
        else:
            q = 1.0 - p
        masses = tuple(math.comb(two_n, k) * p ** k * q ** (two_n - k)
                       for k in range(two_n + 1))
        return Capacity(base, masses=masses, is_additive=True)

    return FamilyLevel(base=base, family=member, weight="lebesgue",
                       binomial_n=two_n)


def build_sequence(variant: str, params: UrnParams) -> USequence:
    """Assemble the urn sequence for variant X (uniform), Y (binomial at
    p=1/2), or Z (binomial family under Lebesgue weight)."""
    urn = build_urn_space(params)
    two_n = 2 * params.big_n
    names = urn.capacity_space
    if variant == "X":
        weights = Capacity(names, masses=(Fraction(1, two_n + 1),) * (two_n + 1),
                           is_additive=True)
        level1 = UncertaintySpace(names, (("vu", weights),))
        return USequence((urn, level1, TERMINAL))
    if variant == "Y":
        denom = 2 ** two_n
        masses = tuple(Fraction(math.comb(two_n, k), denom) for k in range(two_n + 1))
        level1 = UncertaintySpace(names, (("vb", Capacity(names, masses=masses,
                                                          is_additive=True)),))
        return USequence((urn, level1, TERMINAL))
    if variant == "Z":
        return USequence((urn, binomial_family(urn, params.big_n), TERMINAL))
    raise ValueError(f"unknown variant {variant!r}, expected one of {VARIANTS}")


def _layer_weights(variant: str, params: UrnParams) -> list[Number]:
    """Effective weight of each u_k in the final one-point layer."""
    two_n = 2 * params.big_n
    if variant == "X":
        return [Fraction(1, two_n + 1)] * (two_n + 1)
    if variant == "Y":
        return [Fraction(math.comb(two_n, k), 2 ** two_n) for k in range(two_n + 1)]
    # Z: each binomial mass integrates to 1/(2N+1) over p
    return [Fraction(1, two_n + 1)] * (two_n + 1)


def closed_form_values(variant: str, params: UrnParams,
                       layer: int) -> dict[str, Number]:
    """Top-layer values of the four bets by direct summation.

    Only the scalar layers (2 for X/Y, 3 for Z) have closed forms; they are
    the utility anchor times the weighted means of the distorted odds.
    """
    if (variant, layer) not in (("X", 2), ("Y", 2), ("Z", 3)):
        raise ValueError(f"no closed form for variant {variant} at layer {layer}")
    two_n = 2 * params.big_n
    u1 = params.u1
    w = _layer_weights(variant, params)
    third = Fraction(1, 3)
    mean_up = sum(wk * params.ratio_power(k) for k, wk in enumerate(w))
    mean_down = sum(wk * params.ratio_power(two_n - k) for k, wk in enumerate(w))
    return {
        "f1": u1 * third,
        "f2": u1 * 2 * third * mean_up,
        "f3": u1 * 2 * third,
        "f4": u1 * (third + 2 * third * mean_down),
    }


def _compare(a: Number, b: Number, exact: bool) -> str:
    tol = 0 if exact else 1e-12
    if abs(a - b) <= tol:
        return "="
    return ">" if a > b else "<"


def _pointwise_verdict(left: tuple, right: tuple, exact: bool) -> str:
    rels = {_compare(a, b, exact) for a, b in zip(left, right)}
    if rels == {"="}:
        return "="
    if "=" in rels and len(rels) > 1 or rels == {">", "<"}:
        return "incomparable"
    return rels.pop()


@dataclass(frozen=True)
class EllsbergReport:
    """Values of the four bets at one layer, with the induced orderings."""

    variant: str
    layer: int
    params: UrnParams
    point_labels: tuple[str, ...]
    values: dict[str, tuple[Number, ...]]
    f1_vs_f2: str
    f3_vs_f4: str
    verdict: str
    paradox_represented: bool

    def rows(self):
        for name in ACT_NAMES:
            for label, value in zip(self.point_labels, self.values[name]):
                yield name, label, value


def ellsberg_report(variant: str, params: UrnParams, layer: int) -> EllsbergReport:
    """Run one variant to the requested layer and judge the bet orderings.

    Values are produced by the layered expectation chain and re-derived from
    the direct summation formulas; the two must agree (exactly for integer
    exponents, else within 1e-9) before a verdict is issued.
    """
    allowed = {"X": (1, 2), "Y": (1, 2), "Z": (1, 3)}
    if variant not in allowed:
        raise ValueError(f"unknown variant {variant!r}, expected one of {VARIANTS}")
    if layer not in allowed[variant]:
        raise ValueError(f"variant {variant} supports layers {allowed[variant]}, "
                         f"got {layer}")
    seq = build_sequence(variant, params)
    util = UtilityFunction.anchored(params.u1)
    acts = standard_acts(seq.base_space())
    values = {}
    labels = None
    for name in ACT_NAMES:
        act = value_function(seq, acts[name], layer, util)
        values[name] = act.values
        labels = act.space.points

    if layer != 1:
        closed = closed_form_values(variant, params, layer)
        tol = 0 if params.exact else 1e-9
        for name in ACT_NAMES:
            got, want = values[name][0], closed[name]
            if abs(got - want) > tol:
                raise AssertionError(
                    f"layered and closed-form values disagree for {name}: "
                    f"{got} vs {want}")

    exact = params.exact
    f12 = _pointwise_verdict(values["f1"], values["f2"], exact)
    f34 = _pointwise_verdict(values["f3"], values["f4"], exact)
    if f12 == "=" and f34 == "=":
        verdict = "equalities"
    elif f12 == ">" and f34 == ">":
        verdict = "supports modal preference"
    else:
        verdict = "mixed"
    return EllsbergReport(
        variant=variant, layer=layer, params=params, point_labels=labels,
        values=values, f1_vs_f2=f12, f3_vs_f4=f34, verdict=verdict,
        paradox_represented=(verdict == "supports modal preference"))


@dataclass(frozen=True)
class ParadoxReport:
    """The P2 conflict: which act identities hold and how the layers resolve it."""

    identities: tuple[tuple[str, bool], ...]
    identities_hold: bool
    modal_preference: str
    p2_consequence: str
    branch: str
    layer2: EllsbergReport


def paradox_demo(params: UrnParams) -> ParadoxReport:
    """Exhibit the single-urn conflict and whether layer 2 represents it.

    The conditional-act identities make the modal preference (bet on known
    odds) contradict the sure-thing principle; with alpha = 1 the two-layer
    values collapse to equalities, with alpha > 1 they order the bets the
    modal way.
    """
    from .hierarchy import conditional_act

    urn = build_urn_space(params)
    space = urn.base
    acts = standard_acts(space)
    rb = space.subset(["R", "B"])
    zero = Act(space, (0, 0, 0))
    one = Act(space, (1, 1, 1))
    identities = (
        ("(RB; f1, 0) = f1", conditional_act(rb, acts["f1"], zero) == acts["f1"]),
        ("(RB; f2, 0) = f2", conditional_act(rb, acts["f2"], zero) == acts["f2"]),
        ("(RB; f1, 1) = f4", conditional_act(rb, acts["f1"], one) == acts["f4"]),
        ("(RB; f2, 1) = f3", conditional_act(rb, acts["f2"], one) == acts["f3"]),
    )
    report = ellsberg_report("X", params, 2)
    if report.verdict == "supports modal preference":
        branch = "modal preference represented"
    elif report.verdict == "equalities":
        branch = "paradox not representable"
    else:
        branch = "mixed ordering"
    return ParadoxReport(
        identities=identities,
        identities_hold=all(ok for _, ok in identities),
        modal_preference="f1 > f2 and f3 > f4",
        p2_consequence="sure-thing principle forces (f1 >= f2) iff (f4 >= f3)",
        branch=branch,
        layer2=report,
    )

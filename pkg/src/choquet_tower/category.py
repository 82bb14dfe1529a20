"""Arrow checks and the unit/averaging structure over uncertainty spaces.

Everything here is an executable check on finite instances: absolute
continuity and measure preservation for maps, the point-mass unit, the
Choquet averaging of second-order capacities, the substitution rule, and
the two counterexamples (comonotonicity loss and failure of associativity
for non-additive second-order capacities).
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Optional, Sequence, Union

from .choquet import choquet_integral, choquet_sum
from .core import (Act, Capacity, FiniteSpace, Number, PointMap,
                   is_exact, validate_capacity, pushforward,
                   _require_same_space)
from .hierarchy import TERMINAL, FamilyLevel, USequence, terminal_space
from .uncertainty import GTransform, UncertaintySpace, epsilon, xi


def _is_zero(x: Number) -> bool:
    return x == 0 if is_exact(x) else abs(x) <= 1e-12


@dataclass(frozen=True)
class MapWitness:
    """Verdict of an arrow check plus the evidence behind it.

    On success under absolute continuity, ``dominating`` names the chosen
    dominating capacity per source capacity.  On failure, ``failure`` holds
    a re-verifiable violation: for absolute continuity the failing source
    capacity with one zero set per candidate, for measure preservation the
    unmatched source capacity.
    """

    verdict: bool
    dominating: Optional[dict[str, str]] = None
    failure: Optional[tuple] = None

    def __bool__(self) -> bool:
        return self.verdict


def is_unc_map(h: PointMap, source: UncertaintySpace,
               target: UncertaintySpace) -> MapWitness:
    """Null-set domination: every pushforward is absolutely continuous
    with respect to some target capacity."""
    _require_same_space(h.domain, source.base)
    _require_same_space(h.codomain, target.base)
    dominating: dict[str, str] = {}
    for u_name, u in source.capacities:
        blockers = []
        chosen = None
        for v_name, v in target.capacities:
            bad = None
            for mask in target.base.all_masks():
                if _is_zero(v.value(mask)) and not _is_zero(u.value(h.preimage_mask(mask))):
                    bad = mask
                    break
            if bad is None:
                chosen = v_name
                break
            blockers.append((v_name, bad))
        if chosen is None:
            return MapWitness(False, failure=(u_name, tuple(blockers)))
        dominating[u_name] = chosen
    return MapWitness(True, dominating=dominating)


def is_mp_unc_map(h: PointMap, source: UncertaintySpace,
                  target: UncertaintySpace) -> MapWitness:
    """Measure preservation: every pushforward equals some target capacity."""
    _require_same_space(h.domain, source.base)
    _require_same_space(h.codomain, target.base)
    matches: dict[str, str] = {}
    for u_name, u in source.capacities:
        pushed = pushforward(u, h)
        hit = next((v_name for v_name, v in target.capacities if pushed.equals(v)),
                   None)
        if hit is None:
            return MapWitness(False, failure=(u_name, None))
        matches[u_name] = hit
    return MapWitness(True, dominating=matches)


def dirac(space: FiniteSpace, point: str) -> Capacity:
    """The 0/1 capacity concentrated at one point."""
    i = space.index(point)
    masses = tuple(Fraction(1) if j == i else Fraction(0) for j in range(len(space)))
    return Capacity(space, masses=masses, is_additive=True)


def embedding_condition(us: UncertaintySpace) -> bool:
    """True iff the point mass of every point is among the capacities."""
    return all(any(dirac(us.base, p).equals(cap) for _, cap in us.capacities)
               for p in us.base.points)


@dataclass(frozen=True)
class EmbDiracReport:
    """Per-capacity outcome of the three point-mass embedding conditions."""

    verdict: bool
    chosen: dict[str, Optional[str]]
    failures: dict[str, tuple]


def emb_dirac_conditions(source: UncertaintySpace,
                         second: UncertaintySpace) -> EmbDiracReport:
    """Check the three support conditions for embedding points as point masses.

    ``second`` lives over the capacity list of ``source``.  For every source
    capacity u there must be a second-order capacity v giving positive mass
    to {w : w(A) in {0,1}}, to {w : w(A)=0} whenever u charges the
    complement of A, and to {w : w(A)=1} whenever u charges A.
    """
    if second.base.points != source.names:
        raise ValueError("second-order space must live over the capacity list")
    if not embedding_condition(source):
        raise ValueError("source does not satisfy the embedding condition")
    chosen: dict[str, Optional[str]] = {}
    failures: dict[str, tuple] = {}
    caps = source.capacities
    for u_name, u in caps:
        found = None
        last_reason = None
        for v_name, v in second.capacities:
            reason = None
            for mask in source.base.all_masks():
                zero_one = 0
                zero = 0
                one = 0
                for j, (_, w) in enumerate(caps):
                    val = w.value(mask)
                    if _is_zero(val):
                        zero |= 1 << j
                        zero_one |= 1 << j
                    elif _is_zero(val - 1):
                        one |= 1 << j
                        zero_one |= 1 << j
                if _is_zero(v.value(zero_one)):
                    reason = (1, mask)
                    break
                comp = source.base.full_mask ^ mask
                if not _is_zero(u.value(comp)) and _is_zero(v.value(zero)):
                    reason = (2, mask)
                    break
                if not _is_zero(u.value(mask)) and _is_zero(v.value(one)):
                    reason = (3, mask)
                    break
            if reason is None:
                found = v_name
                break
            last_reason = (v_name,) + reason
        chosen[u_name] = found
        if found is None:
            failures[u_name] = last_reason
    return EmbDiracReport(verdict=not failures, chosen=chosen, failures=failures)


def mu(us: UncertaintySpace, v: Capacity) -> Capacity:
    """Average a second-order capacity down to the base.

    v lives on the capacity list; the result's value on A is the Choquet
    integral of the evaluation act of A under v.  Additive v over additive
    capacities yields an additive result.
    """
    _require_same_space(v.space, us.capacity_space)
    table = {mask: choquet_integral(v, epsilon(us, mask))
             for mask in us.base.all_masks()}
    return validate_capacity(us.base, table)


def substitution_check(u: Capacity, h: PointMap, f: Act,
                       tol: float = 1e-9) -> bool:
    """Integrating f of h under u equals integrating f under the pushforward."""
    _require_same_space(u.space, h.domain)
    _require_same_space(f.space, h.codomain)
    from .core import precompose_act

    lhs = choquet_integral(u, precompose_act(f, h))
    rhs = choquet_integral(pushforward(u, h), f)
    if is_exact(lhs) and is_exact(rhs):
        return lhs == rhs
    return abs(lhs - rhs) <= tol


@dataclass(frozen=True)
class MonadCounterexample:
    """Both routes through the two-layer average on the fixed 10-capacity urn.

    ``difference`` must match ``difference_formula``; it vanishes exactly
    when beta = 1 (the additive case) and not otherwise.  The printed size
    of the capacity family (3) disagrees with the actual count (10); the
    instance follows the printed version, so the second-order set function
    is unnormalized and is integrated as a raw table.
    """

    beta: Number
    lhs: Number
    rhs: Number
    difference: Number
    lhs_closed: Number
    rhs_closed: Number
    difference_formula: Number
    printed_count: int
    actual_count: int


def monad_counterexample(beta: Number) -> MonadCounterexample:
    """Average-then-integrate vs integrate-the-expectations, beta-distorted.

    Fixed instance: three colors, the ten additive capacities u_{i,j} with
    masses (i/3, j/3, (3-i-j)/3), the act worth 3 on R, 1 on B, 0 on Y, and
    the counting set function (|A| / 3) ** beta on the capacity list.
    """
    if beta < 1:
        raise ValueError("need beta >= 1")
    if isinstance(beta, float) and beta.is_integer():
        beta = int(beta)
    if isinstance(beta, Fraction) and beta.denominator == 1:
        beta = int(beta)
    n = 3
    space = FiniteSpace(("R", "B", "Y"))
    caps = []
    for i in range(n + 1):
        for j in range(n + 1 - i):
            masses = (Fraction(i, n), Fraction(j, n), Fraction(n - i - j, n))
            caps.append((f"u{i}{j}", Capacity(space, masses=masses, is_additive=True)))
    us = UncertaintySpace(space, tuple(caps))
    printed_count = (n - 1) * n // 2
    actual_count = len(caps)

    def power(x: Number) -> Number:
        if isinstance(beta, int):
            return Fraction(x) ** beta
        return float(x) ** float(beta)

    def v_of(mask: int) -> Number:
        return power(Fraction(mask.bit_count(), printed_count))

    f = Act(space, (3, 1, 0))

    avg_table = {mask: choquet_sum(v_of, epsilon(us, mask))
                 for mask in space.all_masks()}
    lhs = choquet_sum(lambda m: avg_table[m], f)
    rhs = choquet_sum(v_of, xi(us, f))

    scale = power(Fraction(1, n)) / n
    lhs_closed = scale * (2 * (power(6) + power(3) + 1)
                          + (power(9) + power(7) + power(4)))
    rhs_closed = scale * (2 + power(2) + power(3) + power(4) + power(5)
                          + power(7) + power(8) + power(9))
    return MonadCounterexample(
        beta=beta, lhs=lhs, rhs=rhs, difference=rhs - lhs,
        lhs_closed=lhs_closed, rhs_closed=rhs_closed,
        difference_formula=scale * (power(2) - power(3) + power(5)
                                    - 2 * power(6) + power(8)),
        printed_count=printed_count, actual_count=actual_count)


def _level_base(level) -> FiniteSpace:
    if isinstance(level, UncertaintySpace):
        return level.base
    if isinstance(level, FamilyLevel):
        return level.base
    if level is TERMINAL:
        return terminal_space().base
    raise TypeError(f"unexpected level {level!r}")


def _level_capacities(level) -> Optional[tuple]:
    if isinstance(level, UncertaintySpace):
        return level.capacities
    if level is TERMINAL:
        return terminal_space().capacities
    return None


def _resolve_target_capacity(level, ref: Union[str, Capacity]) -> Capacity:
    if isinstance(ref, Capacity):
        return ref
    caps = _level_capacities(level)
    if caps is None:
        raise ValueError("family-level images must be given as capacities")
    for name, cap in caps:
        if name == ref:
            return cap
    raise ValueError(f"no capacity named {ref!r} at the target level")


def is_ug_map(phi: Sequence[Mapping[str, Union[str, Capacity]]],
              source: USequence, target: USequence, g: GTransform,
              depth: int, *, seed: int = 0, random_acts: int = 50,
              tol: float = 1e-9) -> MapWitness:
    """Level-wise maps commuting with the transformed expectation chain.

    ``phi[k]`` maps level-k points; for k >= 1 the level-k points are the
    level-(k-1) capacity names, and an image may be a capacity object when
    the target level is a parameterized family.  The commuting identity is
    checked on every indicator act plus seeded random acts.
    """
    if depth < 2 or len(phi) < depth:
        raise ValueError("need at least two levels of maps")
    rng = random.Random(seed)
    for n in range(depth - 1):
        src_level = source.levels[n] if n < len(source.levels) else TERMINAL
        tgt_level = target.levels[n] if n < len(target.levels) else TERMINAL
        if isinstance(src_level, FamilyLevel):
            raise ValueError("family levels are not supported on the source side")
        src = src_level if isinstance(src_level, UncertaintySpace) else terminal_space()
        tgt_base = _level_base(tgt_level)
        point_map = PointMap(src.base, tgt_base, dict(phi[n]))

        test_acts = [Act(tgt_base, tuple(1 if mask >> i & 1 else 0
                                         for i in range(len(tgt_base))))
                     for mask in tgt_base.all_masks()]
        for _ in range(random_acts):
            test_acts.append(Act(tgt_base, tuple(
                Fraction(rng.randint(-8, 8), rng.randint(1, 6))
                for _ in range(len(tgt_base)))))

        for u_name, u in src.capacities:
            image = phi[n + 1][u_name]
            v = _resolve_target_capacity(tgt_level, image)
            for f in test_acts:
                lifted = f.map(g.forward) if g.kind != "linear" else f
                pulled = Act(src.base, tuple(lifted.at(point_map(p))
                                             for p in src.base.points))
                lhs = choquet_integral(u, pulled)
                rhs = choquet_integral(v, lifted)
                if is_exact(lhs) and is_exact(rhs):
                    ok = lhs == rhs
                else:
                    ok = abs(lhs - rhs) <= tol
                if not ok:
                    return MapWitness(False, failure=(n, u_name, f.values, lhs, rhs))
    return MapWitness(True)


def compose_ug_maps(phi: Sequence[Mapping], psi: Sequence[Mapping],
                    mid: USequence) -> list[dict]:
    """Pointwise composition of level maps (first phi into mid, then psi)."""
    out = []
    for k, (pk, qk) in enumerate(zip(phi, psi)):
        composed = {}
        for key, val in pk.items():
            composed[key] = qk[val] if isinstance(val, str) else val
        out.append(composed)
    return out

"""Seeded law suites shared by the test suite and the command line.

Each suite runs deterministic trials derived from a single seed and
reports per-law counts with the first counterexample, if any.  Trials may
run on a thread pool capped by the CHOQUET_TOWER_THREADS variable; results
are assembled in trial order, so the output does not depend on scheduling.
"""

from __future__ import annotations

import os
import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional

from .category import (compose_ug_maps, dirac, is_mp_unc_map, is_ug_map,
                       is_unc_map, monad_counterexample, mu,
                       substitution_check)
from .choquet import chain_act, choquet_integral
from .core import (Act, Capacity, FiniteSpace, PointMap, pushforward,
                   validate_capacity)
from .ellsberg import UrnParams, build_sequence
from .tower import GridTower, ProjectiveVector, build_tower, iota, \
    projective_consistency
from .uncertainty import GTransform, UncertaintySpace

LABELS = "abcdefgh"


def thread_count() -> int:
    raw = os.environ.get("CHOQUET_TOWER_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


@dataclass(frozen=True)
class LawResult:
    name: str
    trials: int
    failures: int
    first_failure: Optional[str] = None

    @property
    def passed(self) -> bool:
        return self.failures == 0


@dataclass(frozen=True)
class SuiteReport:
    suite: str
    seed: int
    laws: tuple[LawResult, ...]

    @property
    def passed(self) -> bool:
        return all(law.passed for law in self.laws)

    def to_dict(self) -> dict:
        return {
            "suite": self.suite,
            "seed": self.seed,
            "passed": self.passed,
            "laws": [{"name": l.name, "trials": l.trials, "failures": l.failures,
                      "first_failure": l.first_failure} for l in self.laws],
        }


def _run_law(name: str, trials: int, seed: int,
             trial_fn: Callable[[random.Random], Optional[str]]) -> LawResult:
    """Run one law; trial_fn returns None on success, else a description."""

    def one(i: int) -> Optional[str]:
        return trial_fn(random.Random((seed * 1000003 + i) & 0xFFFFFFFF))

    workers = thread_count()
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            outcomes = list(pool.map(one, range(trials)))
    else:
        outcomes = [one(i) for i in range(trials)]
    failures = [o for o in outcomes if o is not None]
    return LawResult(name, trials, len(failures),
                     failures[0] if failures else None)


# ---------------------------------------------------------------------------
# random generators (exact rational values throughout)

def rand_fraction(rng: random.Random, lo: int = -8, hi: int = 8,
                  denom: int = 6) -> Fraction:
    return Fraction(rng.randint(lo, hi), rng.randint(1, denom))


def rand_space(rng: random.Random, max_points: int = 6,
               min_points: int = 2) -> FiniteSpace:
    n = rng.randint(min_points, max_points)
    return FiniteSpace(tuple(LABELS[:n]))


def rand_act(rng: random.Random, space: FiniteSpace) -> Act:
    return Act(space, tuple(rand_fraction(rng) for _ in space.points))


def rand_nonneg_act(rng: random.Random, space: FiniteSpace) -> Act:
    return Act(space, tuple(rand_fraction(rng, 0, 8) for _ in space.points))


def rand_capacity(rng: random.Random, space: FiniteSpace) -> Capacity:
    """Random monotone table: raw draws pushed up along set inclusion."""
    n = len(space)
    table = [Fraction(0)] * (1 << n)
    for mask in range(1, 1 << n):
        raw = Fraction(rng.randint(0, 16), 16)
        best = raw
        for i in range(n):
            if mask >> i & 1:
                below = table[mask ^ (1 << i)]
                if below > best:
                    best = below
        table[mask] = best
    table[-1] = Fraction(1)
    return Capacity(space, table=tuple(table))


def rand_additive(rng: random.Random, space: FiniteSpace) -> Capacity:
    weights = [rng.randint(0, 8) for _ in space.points]
    if sum(weights) == 0:
        weights[rng.randrange(len(weights))] = 1
    total = sum(weights)
    return Capacity(space, masses=tuple(Fraction(w, total) for w in weights),
                    is_additive=True)


def rand_nonadditive(rng: random.Random, space: FiniteSpace) -> Capacity:
    for _ in range(50):
        cap = rand_capacity(rng, space)
        if not cap.is_additive:
            return cap
    raise AssertionError("failed to draw a non-additive capacity")


def rand_point_map(rng: random.Random, domain: FiniteSpace,
                   codomain: FiniteSpace) -> PointMap:
    return PointMap(domain, codomain,
                    {p: rng.choice(codomain.points) for p in domain.points})


def rand_comonotonic_pair(rng: random.Random, space: FiniteSpace) -> tuple[Act, Act]:
    """Draw a shared chain with two non-increasing value sequences."""
    n = len(space)
    order = list(range(n))
    rng.shuffle(order)
    cuts = sorted(rng.randint(0, n - 1) for _ in range(rng.randint(0, n - 1)))
    blocks = []
    start = 0
    for c in cuts + [n]:
        if c > start:
            mask = 0
            for i in order[start:c]:
                mask |= 1 << i
            blocks.append(mask)
            start = c
    k = len(blocks)
    f_vals = sorted((rand_fraction(rng) for _ in range(k)), reverse=True)
    g_vals = sorted((rand_fraction(rng) for _ in range(k)), reverse=True)
    f = chain_act(space, tuple(zip(blocks, f_vals)))
    g = chain_act(space, tuple(zip(blocks, g_vals)))
    return f, g


def rand_uncertainty_space(rng: random.Random, space: FiniteSpace,
                           max_caps: int = 3) -> UncertaintySpace:
    caps = {}
    want = rng.randint(1, max_caps)
    tries = 0
    while len(caps) < want and tries < 30:
        cap = rand_capacity(rng, space)
        caps.setdefault(cap.signature(), cap)
        tries += 1
    return UncertaintySpace(space, tuple(
        (f"w{i}", cap) for i, cap in enumerate(caps.values())))


# ---------------------------------------------------------------------------
# suites

def run_choquet_suite(seed: int = 7, trials: int = 500,
                      max_points: int = 6) -> SuiteReport:
    def monotonicity(rng):
        space = rand_space(rng, max_points)
        u = rand_capacity(rng, space)
        g = rand_act(rng, space)
        f = g + rand_nonneg_act(rng, space)
        if choquet_integral(u, f) < choquet_integral(u, g):
            return f"I(f) < I(g) for f >= g on {space.points}"
        return None

    def comonotonic_additivity(rng):
        space = rand_space(rng, max_points)
        u = rand_capacity(rng, space)
        f, g = rand_comonotonic_pair(rng, space)
        if choquet_integral(u, f + g) != choquet_integral(u, f) + choquet_integral(u, g):
            return f"I(f+g) != I(f)+I(g) on {space.points}"
        return None

    def positive_homogeneity(rng):
        space = rand_space(rng, max_points)
        u = rand_capacity(rng, space)
        f = rand_act(rng, space)
        lam = Fraction(rng.randint(1, 12), rng.randint(1, 12))
        if choquet_integral(u, f.scale(lam)) != lam * choquet_integral(u, f):
            return f"I(lam f) != lam I(f) for lam={lam}"
        return None

    def additive_linearity(rng):
        space = rand_space(rng, max_points)
        u = rand_additive(rng, space)
        f, g = rand_act(rng, space), rand_act(rng, space)
        a, b = rand_fraction(rng), rand_fraction(rng)
        lhs = choquet_integral(u, f.scale(a) + g.scale(b))
        rhs = a * choquet_integral(u, f) + b * choquet_integral(u, g)
        if lhs != rhs:
            return f"additive capacity not linear: {lhs} vs {rhs}"
        weighted = sum(v * m for v, m in zip(f.values, u.singleton_masses()))
        if choquet_integral(u, f) != weighted:
            return "additive capacity does not reduce to the weighted sum"
        return None

    return SuiteReport("choquet", seed, (
        _run_law("monotonicity", trials, seed + 1, monotonicity),
        _run_law("comonotonic-additivity", trials, seed + 2, comonotonic_additivity),
        _run_law("positive-homogeneity", trials, seed + 3, positive_homogeneity),
        _run_law("additive-linearity", trials, seed + 4, additive_linearity),
    ))


def run_dirac_suite(seed: int = 7, trials: int = 200,
                    max_points: int = 5) -> SuiteReport:
    def table_identity(rng):
        space = rand_space(rng, max_points)
        for p in space.points:
            eta = dirac(space, p)
            for mask in space.all_masks():
                if eta.value(mask) != (1 if mask >> space.index(p) & 1 else 0):
                    return f"point mass wrong at {p}, mask {mask}"
        return None

    def evaluation(rng):
        space = rand_space(rng, max_points)
        f = rand_act(rng, space)
        p = rng.choice(space.points)
        if choquet_integral(dirac(space, p), f) != f.at(p):
            return f"I under point mass at {p} is not evaluation"
        return None

    def naturality(rng):
        domain = rand_space(rng, max_points)
        codomain = rand_space(rng, max_points)
        h = rand_point_map(rng, domain, codomain)
        p = rng.choice(domain.points)
        if not pushforward(dirac(domain, p), h).equals(dirac(codomain, h(p)), tol=0.0):
            return f"pushforward of point mass at {p} is not the point mass at {h(p)}"
        return None

    return SuiteReport("dirac", seed, (
        _run_law("table-identity", max(1, trials // 10), seed + 1, table_identity),
        _run_law("integral-evaluates", trials, seed + 2, evaluation),
        _run_law("naturality", max(1, trials // 2), seed + 3, naturality),
    ))


def _unit_laws(tower: GridTower, level: int) -> Optional[str]:
    """Both unit laws at one tower level, checked on every grid point."""
    view = tower.view(level)
    lift = PointMap(view.base, view.capacity_space,
                    {p: tower.find_name(level + 1, dirac(view.base, p))
                     for p in view.base.points})
    for name, cap in tower.levels[level + 1].capacities:
        back = mu(view, dirac(view.capacity_space, name))
        if not back.equals(cap, tol=0.0):
            return f"averaging a point mass at {name} is not the identity"
        inner = mu(view, pushforward(cap, lift))
        if not inner.equals(cap, tol=0.0):
            return f"averaging the lifted {name} is not the identity"
    return None


def run_monad_suite(seed: int = 7, trials: int = 200, grid: int = 2,
                    space_size: int = 2, depth: int = 3) -> SuiteReport:
    base = FiniteSpace(tuple(LABELS[:space_size]))
    tower = build_tower(base, grid, depth)

    def unit(rng):
        for level in range(tower.depth):
            problem = _unit_laws(tower, level)
            if problem:
                return problem
        return None

    level2 = tower.levels[2]
    averaged = {name: mu(tower.view(0), cap) for name, cap in level2.capacities}

    def associativity(rng):
        w = rand_additive(rng, level2.space)
        left = mu(tower.view(0), mu(tower.view(1), w))
        table = {}
        for mask in base.all_masks():
            act = Act(level2.space, tuple(averaged[name].value(mask)
                                          for name in level2.space.points))
            table[mask] = choquet_integral(w, act)
        for mask in base.all_masks():
            if left.value(mask) != table[mask]:
                return f"associativity broke at mask {mask} for {w}"
        return None

    def counterexample(rng):
        flat = monad_counterexample(1)
        if flat.difference != 0 or flat.difference != flat.difference_formula:
            return "additive case must have zero difference"
        bent = monad_counterexample(2)
        if bent.difference != Fraction(4, 9) or bent.difference != bent.difference_formula:
            return f"distorted difference {bent.difference} != 4/9"
        return None

    return SuiteReport("monad", seed, (
        _run_law("unit-laws", 1, seed + 1, unit),
        _run_law("associativity-additive", trials, seed + 2, associativity),
        _run_law("counterexample", 1, seed + 3, counterexample),
    ))


def run_substitution_suite(seed: int = 7, trials: int = 500) -> SuiteReport:
    def substitution(rng):
        domain = FiniteSpace(tuple(LABELS[:4]))
        codomain = FiniteSpace(tuple("xyz"))
        u = rand_nonadditive(rng, domain)
        h = rand_point_map(rng, domain, codomain)
        f = rand_act(rng, codomain)
        if not substitution_check(u, h, f):
            return f"substitution failed for {h.mapping}"
        return None

    return SuiteReport("substitution", seed, (
        _run_law("substitution", trials, seed + 1, substitution),
    ))


def run_retraction_suite(grid: int = 2, depth: int = 3,
                         space_size: int = 2, seed: int = 7) -> SuiteReport:
    base = FiniteSpace(tuple(LABELS[:space_size]))
    tower = build_tower(base, grid, depth)

    def retraction(rng):
        for n in range(1, tower.depth + 1):
            for m in range(n, tower.depth + 1):
                up = iota(tower, n, m)
                down = iota(tower, m, n)
                for name, cap in tower.levels[n].capacities:
                    lifted_name = tower.find_name(m, up[name])
                    if lifted_name is None:
                        return f"lift of {name} to level {m} left the grid"
                    if not down[lifted_name].equals(cap, tol=0.0):
                        return f"retraction {m}->{n} moved {name}"
        return None

    def composition(rng):
        triples = [(l, m, n) for l in range(1, tower.depth + 1)
                   for m in range(1, tower.depth + 1)
                   for n in range(1, tower.depth + 1)
                   if l >= m >= n or l <= m <= n]
        for l, m, n in triples:
            lm = iota(tower, l, m)
            ln = iota(tower, l, n)
            mn = iota(tower, m, n)
            for name in tower.space_at(l).points:
                mid = lm[name]
                if l >= m:
                    mid_name = tower.find_name(m, mid)
                    if mid_name is None and l > m:
                        # descended averages can leave the grid; push directly
                        stepped = mid
                        for k in range(m, n, -1):
                            stepped = mu(tower.view(k - 2), stepped)
                        composed = stepped
                    else:
                        composed = mn[mid_name] if mid_name else mid
                else:
                    composed = mn[tower.find_name(m, mid)]
                if not composed.equals(ln[name], tol=0.0):
                    return f"composition {l}->{m}->{n} differs from {l}->{n} at {name}"
        return None

    def consistency_detector(rng):
        name, cap = tower.levels[1].capacities[0]
        lifted = dirac(tower.space_at(1), name)
        ok, idx = projective_consistency(ProjectiveVector(tower, (cap, lifted)))
        if not ok:
            return f"point-mass chain flagged inconsistent at {idx}"
        # bump one subset value by a grid step, keeping the table monotone
        tweaked = {mask: cap.value(mask) for mask in tower.base.all_masks()}
        target = 1 << 0
        step = Fraction(1, tower.grid)
        tweaked[target] = (tweaked[target] + step if tweaked[target] + step <= 1
                           else tweaked[target] - step)
        perturbed = validate_capacity(tower.base, tweaked)
        ok, idx = projective_consistency(ProjectiveVector(tower, (perturbed, lifted)))
        if ok or idx != 1:
            return "perturbed vector was not flagged at index 1"
        return None

    return SuiteReport("retraction", seed, (
        _run_law("retraction", 1, seed + 1, retraction),
        _run_law("monotone-composition", 1, seed + 2, composition),
        _run_law("consistency-detector", 1, seed + 3, consistency_detector),
    ))


def run_ug_map_suite(seed: int = 7) -> SuiteReport:
    params = UrnParams(big_n=1, alpha=2, u1=Fraction(3, 5))
    seq_x = build_sequence("X", params)
    seq_y = build_sequence("Y", params)
    seq_z = build_sequence("Z", params)
    g_lin = GTransform.linear(1)
    g_ent = GTransform.entropic(1.0)

    def identity(rng):
        urn = seq_x.levels[0]
        phi = [{p: p for p in urn.base.points},
               {name: name for name, _ in urn.capacities},
               {"vu": "vu"}]
        if not is_ug_map(phi, seq_x, seq_x, g_lin, depth=3, seed=rng.randint(0, 99)):
            return "identity maps failed under the linear transform"
        if not is_ug_map(phi, seq_x, seq_x, g_ent, depth=3, seed=rng.randint(0, 99)):
            return "identity maps failed under the entropic transform"
        return None

    def inclusion(rng):
        urn = seq_y.levels[0]
        family = seq_z.levels[1]
        phi = [{p: p for p in urn.base.points},
               {name: name for name, _ in urn.capacities},
               {"vb": family.family(Fraction(1, 2))}]
        if not is_ug_map(phi, seq_y, seq_z, g_lin, depth=3, seed=rng.randint(0, 99)):
            return "binomial midpoint inclusion failed"
        return None

    def composition(rng):
        urn = seq_y.levels[0]
        family = seq_z.levels[1]
        ident = [{p: p for p in urn.base.points},
                 {name: name for name, _ in urn.capacities},
                 {"vb": "vb"}]
        incl = [{p: p for p in urn.base.points},
                {name: name for name, _ in urn.capacities},
                {"vb": family.family(Fraction(1, 2))}]
        composed = compose_ug_maps(ident, incl, seq_y)
        if not is_ug_map(composed, seq_y, seq_z, g_lin, depth=3,
                         seed=rng.randint(0, 99)):
            return "composition of passing maps failed"
        return None

    return SuiteReport("ug-map", seed, (
        _run_law("identity", 1, seed + 1, identity),
        _run_law("inclusion-at-midpoint", 1, seed + 2, inclusion),
        _run_law("composition", 1, seed + 3, composition),
    ))


def run_unc_maps_suite(seed: int = 7, trials: int = 200) -> SuiteReport:
    def mp_implies_unc(rng):
        domain = rand_space(rng, 4)
        codomain = rand_space(rng, 3)
        source = rand_uncertainty_space(rng, domain)
        h = rand_point_map(rng, domain, codomain)
        pushed = {}
        for name, cap in source.capacities:
            image = pushforward(cap, h)
            pushed.setdefault(image.signature(), image)
        target = UncertaintySpace(codomain, tuple(
            (f"v{i}", cap) for i, cap in enumerate(pushed.values())))
        if not is_mp_unc_map(h, source, target):
            return "pushforward-built map not measure preserving"
        if not is_unc_map(h, source, target):
            return "measure preserving map not null-set dominated"
        return None

    def composition_closure(rng):
        a = rand_space(rng, 4)
        b = rand_space(rng, 3)
        c = FiniteSpace(tuple("pq"))
        src = rand_uncertainty_space(rng, a)
        f = rand_point_map(rng, a, b)
        g = rand_point_map(rng, b, c)
        mid_caps = {cap.signature(): cap
                    for cap in (pushforward(cap, f) for _, cap in src.capacities)}
        mid = UncertaintySpace(b, tuple(
            (f"v{i}", cap) for i, cap in enumerate(mid_caps.values())))
        end_caps = {cap.signature(): cap
                    for cap in (pushforward(cap, g) for _, cap in mid.capacities)}
        end = UncertaintySpace(c, tuple(
            (f"z{i}", cap) for i, cap in enumerate(end_caps.values())))
        if not is_mp_unc_map(f.then(g), src, end):
            return "composition of measure preserving maps failed"
        if not is_unc_map(f.then(g), src, end):
            return "composition of dominated maps failed"
        return None

    def full_support_target(rng):
        domain = rand_space(rng, 4)
        codomain = rand_space(rng, 3)
        source = rand_uncertainty_space(rng, domain)
        uniform = Capacity(codomain,
                           masses=(Fraction(1, len(codomain)),) * len(codomain),
                           is_additive=True)
        target = UncertaintySpace(codomain, (("uniform", uniform),))
        h = rand_point_map(rng, domain, codomain)
        if not is_unc_map(h, source, target):
            return "map into a fully supported capacity must be dominated"
        return None

    def killed_singleton(rng):
        domain = FiniteSpace(("a", "b"))
        codomain = FiniteSpace(("c", "d"))
        source = UncertaintySpace(domain, (("u", dirac(domain, "a")),))
        v = Capacity(codomain, masses=(Fraction(0), Fraction(1)), is_additive=True)
        target = UncertaintySpace(codomain, (("v", v),))
        h = PointMap(domain, codomain, {"a": "c", "b": "d"})
        witness = is_unc_map(h, source, target)
        if witness.verdict:
            return "map into a capacity killing the image must fail"
        u_name, blockers = witness.failure
        v_name, mask = blockers[0]
        if not (v.value(mask) == 0 and source.capacity(u_name).value(
                h.preimage_mask(mask)) > 0):
            return "failure witness does not re-verify"
        return None

    return SuiteReport("unc-maps", seed, (
        _run_law("mp-implies-dominated", trials, seed + 1, mp_implies_unc),
        _run_law("composition-closure", trials, seed + 2, composition_closure),
        _run_law("full-support-target", trials, seed + 3, full_support_target),
        _run_law("killed-singleton-witness", 1, seed + 4, killed_singleton),
    ))


SUITES: dict[str, Callable[..., SuiteReport]] = {
    "choquet": run_choquet_suite,
    "dirac": run_dirac_suite,
    "monad": run_monad_suite,
    "substitution": run_substitution_suite,
    "retraction": run_retraction_suite,
    "ug-map": run_ug_map_suite,
    "unc-maps": run_unc_maps_suite,
}

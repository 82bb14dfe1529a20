"""Finite measurable spaces, acts, and capacities with exact arithmetic.

Values are either exact rationals (``fractions.Fraction``, the default for
all law checking) or 64-bit floats (distortions with non-integer exponents,
exp/log utilities, quadrature).  Mixed arithmetic silently promotes to
float, which is the intended behaviour.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Mapping, Sequence, Union

Number = Union[int, Fraction, float]

#: absolute tolerance for capacity-table comparisons in the float backend
TABLE_TOL = 1e-12
#: absolute tolerance for general float value comparisons
VALUE_TOL = 1e-9
#: public cap on user-built spaces (subsets are bitmasks)
MAX_POINTS = 63
#: cap on spaces that carry dense capacity tables (2**n entries)
MAX_DENSE_POINTS = 20


class EmptySpaceError(ValueError):
    """A space needs at least one point."""


class DuplicateLabelError(ValueError):
    """Point labels (or capacity names) must be unique."""


class TooManyPointsError(ValueError):
    """Space exceeds the bitmask or dense-table point cap."""


class SpaceMismatchError(ValueError):
    """A subset, act, or capacity was used with a foreign space."""


class NormalizationError(ValueError):
    """Capacity endpoints are wrong: table(empty) must be 0, table(full) 1."""


class MonotonicityError(ValueError):
    """A set function decreases along set inclusion."""

    def __init__(self, small: int, large: int, message: str):
        super().__init__(message)
        self.witness = (small, large)


class EndpointError(ValueError):
    """A distortion must fix 0 and 1."""


def is_exact(x: Number) -> bool:
    """True for values carried by the rational backend."""
    return isinstance(x, (int, Fraction)) and not isinstance(x, bool)


def as_exact(x: Union[str, int, Fraction]) -> Fraction:
    """Parse a decimal string, "p/q" string, or integer into a Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    return Fraction(str(x))


def values_close(a: Number, b: Number, tol: float = VALUE_TOL) -> bool:
    """Equality check honouring the backend: exact for rationals, abs-tol otherwise."""
    if is_exact(a) and is_exact(b):
        return a == b
    return abs(a - b) <= tol


@dataclass(frozen=True)
class FiniteSpace:
    """Ordered finite point set; subsets are encoded as bitmasks.

    Bit i of a mask corresponds to ``points[i]``.  Labels must be unique
    and non-empty; ``make_space`` additionally caps the size at 63 points,
    while derived spaces (capacity lists used as point sets) may exceed it.
    """

    points: tuple[str, ...]

    def __post_init__(self):
        if not self.points:
            raise EmptySpaceError("a space needs at least one point")
        if len(set(self.points)) != len(self.points):
            raise DuplicateLabelError(f"duplicate point labels in {self.points}")
        object.__setattr__(self, "_index", {p: i for i, p in enumerate(self.points)})

    def __len__(self) -> int:
        return len(self.points)

    @property
    def full_mask(self) -> int:
        return (1 << len(self.points)) - 1

    def index(self, label: str) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise SpaceMismatchError(f"point {label!r} is not in {self.points}") from None

    def mask(self, labels: Iterable[str]) -> int:
        m = 0
        for lab in labels:
            m |= 1 << self.index(lab)
        return m

    def labels(self, mask: int) -> tuple[str, ...]:
        return tuple(p for i, p in enumerate(self.points) if mask >> i & 1)

    def subset(self, labels: Iterable[str]) -> "Subset":
        return Subset(self, self.mask(labels))

    def subset_of_mask(self, mask: int) -> "Subset":
        return Subset(self, mask)

    @property
    def empty(self) -> "Subset":
        return Subset(self, 0)

    @property
    def full(self) -> "Subset":
        return Subset(self, self.full_mask)

    def all_masks(self) -> range:
        if len(self.points) > MAX_DENSE_POINTS:
            raise TooManyPointsError(
                f"refusing to enumerate 2**{len(self.points)} subsets")
        return range(1 << len(self.points))


def make_space(labels: Sequence[str]) -> FiniteSpace:
    """Build a space from unique labels; capped at 63 points (bitmask width)."""
    if len(labels) > MAX_POINTS:
        raise TooManyPointsError(f"at most {MAX_POINTS} points, got {len(labels)}")
    return FiniteSpace(tuple(labels))


@dataclass(frozen=True)
class Subset:
    """A subset of a FiniteSpace, stored as a bitmask over point indices."""

    space: FiniteSpace
    mask: int

    def __post_init__(self):
        if not 0 <= self.mask <= self.space.full_mask:
            raise SpaceMismatchError(f"mask {self.mask:#x} has bits beyond the space")

    @property
    def labels(self) -> tuple[str, ...]:
        return self.space.labels(self.mask)

    def complement(self) -> "Subset":
        return Subset(self.space, self.space.full_mask ^ self.mask)

    def union(self, other: "Subset") -> "Subset":
        _require_same_space(self.space, other.space)
        return Subset(self.space, self.mask | other.mask)

    def __contains__(self, label: str) -> bool:
        return bool(self.mask >> self.space.index(label) & 1)


def _require_same_space(a: FiniteSpace, b: FiniteSpace) -> None:
    if a.points != b.points:
        raise SpaceMismatchError(f"space mismatch: {a.points} vs {b.points}")


def _mask_of(space: FiniteSpace, subset: Union[Subset, int]) -> int:
    if isinstance(subset, Subset):
        _require_same_space(space, subset.space)
        return subset.mask
    mask = int(subset)
    if not 0 <= mask <= space.full_mask:
        raise SpaceMismatchError(f"mask {mask:#x} has bits beyond the space")
    return mask


@dataclass(frozen=True)
class Act:
    """A real-valued function on a space's points (always a finite step function)."""

    space: FiniteSpace
    values: tuple[Number, ...]

    def __post_init__(self):
        if len(self.values) != len(self.space):
            raise SpaceMismatchError(
                f"act has {len(self.values)} values for {len(self.space)} points")
        for v in self.values:
            if isinstance(v, float) and not math.isfinite(v):
                raise ValueError(f"act values must be finite, got {v}")

    @property
    def backend(self) -> str:
        return "rational" if all(is_exact(v) for v in self.values) else "float"

    @property
    def sup_norm(self) -> Number:
        return max(abs(v) for v in self.values)

    def at(self, label: str) -> Number:
        return self.values[self.space.index(label)]

    def __add__(self, other: "Act") -> "Act":
        _require_same_space(self.space, other.space)
        return Act(self.space, tuple(a + b for a, b in zip(self.values, other.values)))

    def __sub__(self, other: "Act") -> "Act":
        _require_same_space(self.space, other.space)
        return Act(self.space, tuple(a - b for a, b in zip(self.values, other.values)))

    def scale(self, c: Number) -> "Act":
        return Act(self.space, tuple(c * v for v in self.values))

    def map(self, fn: Callable[[Number], Number]) -> "Act":
        return Act(self.space, tuple(fn(v) for v in self.values))


def constant_act(space: FiniteSpace, c: Number) -> Act:
    return Act(space, (c,) * len(space))


def indicator(space: FiniteSpace, subset: Union[Subset, int]) -> Act:
    """The 0/1 act of a subset: 1 on its points, 0 elsewhere."""
    mask = _mask_of(space, subset)
    return Act(space, tuple(1 if mask >> i & 1 else 0 for i in range(len(space))))


@dataclass(frozen=True)
class PointMap:
    """A total map between the points of two finite spaces."""

    domain: FiniteSpace
    codomain: FiniteSpace
    mapping: Mapping[str, str]

    def __post_init__(self):
        missing = [p for p in self.domain.points if p not in self.mapping]
        if missing:
            raise SpaceMismatchError(f"map is not total, missing {missing}")
        for src, dst in self.mapping.items():
            self.domain.index(src)
            if dst not in self.codomain.points:
                raise SpaceMismatchError(f"map sends {src!r} outside the codomain: {dst!r}")

    def __call__(self, label: str) -> str:
        return self.mapping[label]

    def preimage_mask(self, mask_in_codomain: int) -> int:
        m = 0
        for i, p in enumerate(self.domain.points):
            j = self.codomain.index(self.mapping[p])
            if mask_in_codomain >> j & 1:
                m |= 1 << i
        return m

    def then(self, after: "PointMap") -> "PointMap":
        """Composition: first self, then `after`."""
        _require_same_space(self.codomain, after.domain)
        return PointMap(self.domain, after.codomain,
                        {p: after.mapping[self.mapping[p]] for p in self.domain.points})


def identity_map(space: FiniteSpace) -> PointMap:
    return PointMap(space, space, {p: p for p in space.points})


def precompose_act(f: Act, h: PointMap) -> Act:
    """Pull an act on the codomain back along h: returns f of h."""
    _require_same_space(f.space, h.codomain)
    return Act(h.domain, tuple(f.at(h.mapping[p]) for p in h.domain.points))


class Capacity:
    """A monotone set function with value 0 on the empty set and 1 on the full set.

    Two internal representations share one interface: a dense table over the
    whole powerset (arbitrary monotone set functions, spaces up to 20 points)
    and a singleton-mass vector (additive capacities, any space size).
    """

    __slots__ = ("space", "_table", "_masses", "is_additive")

    def __init__(self, space: FiniteSpace, *, table: tuple = None,
                 masses: tuple = None, is_additive: bool = None):
        if (table is None) == (masses is None):
            raise ValueError("exactly one of table/masses must be given")
        object.__setattr__(self, "space", space)
        object.__setattr__(self, "_table", table)
        object.__setattr__(self, "_masses", masses)
        if is_additive is None:
            is_additive = masses is not None or _table_is_additive(space, table)
        object.__setattr__(self, "is_additive", is_additive)

    def __setattr__(self, name, value):
        raise AttributeError("Capacity is immutable")

    @property
    def backend(self) -> str:
        vals = self._masses if self._masses is not None else self._table
        return "rational" if all(is_exact(v) for v in vals) else "float"

    def value(self, mask: int) -> Number:
        if self._table is not None:
            return self._table[mask]
        total = 0
        m = mask
        while m:
            low = m & -m
            total += self._masses[low.bit_length() - 1]
            m ^= low
        return total

    def __call__(self, subset: Union[Subset, int]) -> Number:
        return self.value(_mask_of(self.space, subset))

    def singleton_masses(self) -> tuple[Number, ...]:
        if self._masses is not None:
            return self._masses
        return tuple(self._table[1 << i] for i in range(len(self.space)))

    def signature(self):
        """Hashable identity of the underlying set function.

        Additive capacities canonicalize to their singleton masses, so the
        dense and mass-vector representations of the same set function
        collide as intended.
        """
        if self.is_additive:
            return ("additive", self.singleton_masses())
        return ("table", self._table)

    def equals(self, other: "Capacity", tol: float = TABLE_TOL) -> bool:
        """Pointwise table equality (exact pairs compare exactly, floats by tol)."""
        if self.space.points != other.space.points:
            return False
        if self._masses is not None and other._masses is not None:
            return all(values_close(a, b, tol)
                       for a, b in zip(self._masses, other._masses))
        return all(values_close(self.value(m), other.value(m), tol)
                   for m in self.space.all_masks())

    def __eq__(self, other):
        return isinstance(other, Capacity) and self.equals(other, tol=0.0)

    def __hash__(self):
        return hash((self.space.points, self.signature()))

    def __repr__(self):
        kind = "additive" if self._masses is not None else "table"
        return f"Capacity({kind}, {len(self.space)} points, {self.backend})"


def _table_is_additive(space: FiniteSpace, table: tuple) -> bool:
    # additive iff every value splits off its lowest point's singleton
    exact = all(is_exact(v) for v in table)
    for mask in range(1, len(table)):
        low = mask & -mask
        if mask == low:
            continue
        diff = table[mask] - table[mask ^ low] - table[low]
        if (diff != 0) if exact else (abs(diff) > TABLE_TOL):
            return False
    return True


def _check_monotone(space: FiniteSpace, table: Sequence[Number], exact: bool) -> None:
    # cover pairs suffice; on failure rescan for the smallest violating pair
    tol = 0 if exact else TABLE_TOL
    n = len(space)
    for mask in range(1 << n):
        for i in range(n):
            if mask >> i & 1:
                continue
            above = mask | 1 << i
            if table[mask] - table[above] > tol:
                for small in range(1 << n):
                    for large in range(small + 1, 1 << n):
                        if small & large == small and table[small] - table[large] > tol:
                            raise MonotonicityError(
                                small, large,
                                f"capacity decreases from {space.labels(small)}"
                                f" ({table[small]}) to {space.labels(large)}"
                                f" ({table[large]})")


def validate_capacity(space: FiniteSpace,
                      table: Mapping,
                      *,
                      singletons_additive: bool = False) -> Capacity:
    """Check and build a capacity.

    With ``singletons_additive`` the mapping gives one value per point label
    and the table is completed by subset-sum; otherwise it must cover every
    subset (keys are Subset objects or bitmask ints).
    """
    if singletons_additive:
        masses = []
        for p in space.points:
            if p not in table:
                raise SpaceMismatchError(f"missing singleton value for {p!r}")
            masses.append(table[p])
        return _additive_from_masses(space, tuple(masses))

    if len(space) > MAX_DENSE_POINTS:
        raise TooManyPointsError(
            f"dense capacity tables are capped at {MAX_DENSE_POINTS} points")
    dense: list = [None] * (1 << len(space))
    for key, val in table.items():
        dense[_mask_of(space, key)] = val
    if any(v is None for v in dense):
        raise SpaceMismatchError("table does not cover every subset")
    exact = all(is_exact(v) for v in dense)
    tol = 0 if exact else TABLE_TOL
    if abs(dense[0]) > tol or abs(dense[-1] - 1) > tol:
        raise NormalizationError(
            f"need table(empty)=0 and table(full)=1, got {dense[0]} and {dense[-1]}")
    _check_monotone(space, dense, exact)
    return Capacity(space, table=tuple(dense))


def _additive_from_masses(space: FiniteSpace, masses: tuple) -> Capacity:
    exact = all(is_exact(v) for v in masses)
    tol = 0 if exact else TABLE_TOL
    for i, m in enumerate(masses):
        if m < -tol:
            raise MonotonicityError(
                0, 1 << i, f"negative mass {m} at {space.points[i]!r}")
    total = sum(masses)
    if abs(total - 1) > tol:
        raise NormalizationError(f"singleton masses sum to {total}, not 1")
    return Capacity(space, masses=masses, is_additive=True)


def additive_capacity(space: FiniteSpace,
                      masses: Union[Mapping[str, Number], Sequence[Number]]) -> Capacity:
    """Additive capacity from singleton masses (mapping by label or point order)."""
    if isinstance(masses, Mapping):
        return validate_capacity(space, masses, singletons_additive=True)
    if len(masses) != len(space):
        raise SpaceMismatchError("one mass per point required")
    return _additive_from_masses(space, tuple(masses))


def distort(u: Capacity, h: Callable[[Number], Number]) -> Capacity:
    """Post-compose a capacity with a nondecreasing reweighting of [0, 1].

    h must fix the endpoints and be nondecreasing on the capacity's attained
    values (all that is ever evaluated).
    """
    space = u.space
    masks = space.all_masks()
    exact = u.backend == "rational"
    tol = 0 if exact else TABLE_TOL
    h0, h1 = h(u.value(0)), h(u.value(space.full_mask))
    if abs(h0) > tol or abs(h1 - 1) > tol:
        raise EndpointError(f"distortion must fix endpoints, got h(0)={h0}, h(1)={h1}")
    attained = sorted({u.value(m) for m in masks})
    images = [h(v) for v in attained]
    for a, b in zip(images, images[1:]):
        if a > b + tol:
            raise MonotonicityError(0, 0, f"distortion decreases: {a} > {b}")
    lut = dict(zip(attained, images))
    return Capacity(space, table=tuple(lut[u.value(m)] for m in masks))


def pushforward(u: Capacity, h: PointMap) -> Capacity:
    """Transport a capacity along a point map: result(B) = u(preimage of B)."""
    _require_same_space(u.space, h.domain)
    target = h.codomain
    if u._masses is not None:
        out = [0] * len(target)
        for i, p in enumerate(u.space.points):
            out[target.index(h.mapping[p])] += u._masses[i]
        return Capacity(target, masses=tuple(out), is_additive=True)
    table = tuple(u.value(h.preimage_mask(mask)) for mask in target.all_masks())
    return Capacity(target, table=table)


def is_additive(u: Capacity) -> bool:
    """True iff u(A or B) = u(A) + u(B) for all disjoint A, B."""
    return u.is_additive

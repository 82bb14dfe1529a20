"""Finite truncation of the iterated-uncertainty tower over a small base.

Level n+1 enumerates every additive capacity on level n whose singleton
masses lie on the grid {0, 1/m, ..., 1}.  Point masses stay on the grid, so
the unit map climbs the tower; averaging descends but may leave the grid,
which the law checks tolerate by comparing exact tables rather than names.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Optional

from .category import dirac, mu
from .core import Capacity, FiniteSpace
from .uncertainty import UncertaintySpace


class TowerSizeError(ValueError):
    """Requested tower exceeds the enumeration guards."""


def _grid_compositions(parts: int, total: int) -> Iterator[tuple[int, ...]]:
    """All numerator tuples of the given length summing to total, lexicographic."""
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _grid_compositions(parts - 1, total - first):
            yield (first,) + rest


@dataclass(frozen=True)
class TowerLevel:
    space: FiniteSpace
    capacities: Optional[tuple[tuple[str, Capacity], ...]]  # None at the base


@dataclass(frozen=True)
class GridTower:
    """Base space plus enumerated grid-additive capacity levels."""

    base: FiniteSpace
    grid: int
    levels: tuple[TowerLevel, ...]

    @property
    def depth(self) -> int:
        return len(self.levels) - 1

    def space_at(self, level: int) -> FiniteSpace:
        return self.levels[level].space

    def capacity_at(self, level: int, name: str) -> Capacity:
        for cap_name, cap in self.levels[level].capacities:
            if cap_name == name:
                return cap
        raise KeyError(name)

    def view(self, level: int) -> UncertaintySpace:
        """Level `level` as an uncertainty space carrying level+1's points."""
        return UncertaintySpace(self.levels[level].space,
                                self.levels[level + 1].capacities)

    def find_name(self, level: int, cap: Capacity) -> Optional[str]:
        """Grid name of an exact table match at the given level, if any."""
        for name, candidate in self.levels[level].capacities:
            if candidate.equals(cap, tol=0.0):
                return name
        return None


def build_tower(base: FiniteSpace, grid: int, depth: int) -> GridTower:
    """Enumerate `depth` capacity levels over the base on a 1/grid mass grid."""
    if len(base) > 3 or grid > 4 or depth > 4:
        raise TowerSizeError("tower guards: base <= 3 points, grid <= 4, depth <= 4")
    levels = [TowerLevel(base, None)]
    current = base
    for _ in range(depth):
        caps = []
        for numerators in _grid_compositions(len(current), grid):
            name = "-".join(str(c) for c in numerators)
            masses = tuple(Fraction(c, grid) for c in numerators)
            caps.append((name, Capacity(current, masses=masses, is_additive=True)))
        if len(caps) > 5000:
            raise TowerSizeError(f"level would have {len(caps)} points")
        space = FiniteSpace(tuple(name for name, _ in caps))
        levels.append(TowerLevel(space, tuple(caps)))
        current = space
    return GridTower(base, grid, tuple(levels))


def iota(tower: GridTower, m_from: int, n_to: int) -> dict[str, Capacity]:
    """The projection/embedding between tower levels, point by point.

    Identity on equal levels; repeated averaging when descending (results
    are exact capacities on the lower level, possibly off-grid); repeated
    point-mass lifting when climbing (results stay on-grid).  Keys are
    level-``m_from`` point names; values are capacities representing the
    image points at level ``n_to``.
    """
    if not 1 <= m_from <= tower.depth or not 1 <= n_to <= tower.depth:
        raise ValueError(f"levels must lie in 1..{tower.depth}")
    out = {}
    for name, cap in tower.levels[m_from].capacities:
        if m_from == n_to:
            out[name] = cap
        elif m_from > n_to:
            current = cap
            for k in range(m_from, n_to, -1):
                current = mu(tower.view(k - 2), current)
            out[name] = current
        else:
            current_name = name
            for k in range(m_from, n_to):
                lifted = dirac(tower.space_at(k), current_name)
                grid_name = tower.find_name(k + 1, lifted)
                if grid_name is None:
                    raise AssertionError("point masses must lie on the grid")
                current_name = grid_name
            out[name] = tower.capacity_at(n_to, current_name)
    return out


@dataclass(frozen=True)
class ProjectiveVector:
    """One capacity per tower level, candidate member of the inverse limit.

    Entry i is a capacity on level i's point set (an element of level i+1
    in tower terms); consistency means each entry is the average of the
    next one.
    """

    tower: GridTower
    entries: tuple[Capacity, ...]

    def __post_init__(self):
        if not 1 <= len(self.entries) <= self.tower.depth:
            raise ValueError("vector length must fit the tower depth")
        for i, cap in enumerate(self.entries):
            if cap.space.points != self.tower.space_at(i).points:
                raise ValueError(f"entry {i} lives on the wrong level")


def projective_consistency(vec: ProjectiveVector) -> tuple[bool, Optional[int]]:
    """Exact check that each entry averages down from the next.

    Returns (True, None) or (False, first failing 1-based index).
    """
    tower = vec.tower
    for i in range(len(vec.entries) - 1):
        averaged = mu(tower.view(i), vec.entries[i + 1])
        if not vec.entries[i].equals(averaged, tol=0.0):
            return False, i + 1
    return True, None

"""Boundaried instances and their feasible boundary sets.

A boundaried ILP distinguishes an ordered list of boundary variables; two
boundaried ILPs are equivalent when the same boundary tuples extend to full
feasible assignments.  That set is the object all replacement rules preserve.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Iterable, Iterator

from .core import Ilp
from .errors import ModelError

__all__ = ["BoundariedIlp", "BoundarySet", "boundary_box"]


@dataclass(frozen=True, eq=False)
class BoundariedIlp:
    ilp: Ilp
    boundary: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "boundary", tuple(self.boundary))
        if len(set(self.boundary)) != len(self.boundary):
            raise ModelError("boundary variables must be distinct")
        for var in self.boundary:
            if not (0 <= var < self.ilp.n):
                raise ModelError(f"boundary variable {var} out of range")

    @property
    def r(self) -> int:
        return len(self.boundary)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BoundariedIlp):
            return NotImplemented
        return self.ilp == other.ilp and self.boundary == other.boundary


def boundary_box(bilp: BoundariedIlp) -> Iterator[tuple[int, ...]]:
    """All boundary tuples in lexicographic order of the boundary sequence."""
    ranges = [range(bilp.ilp.domain(v).lo, bilp.ilp.domain(v).hi + 1) for v in bilp.boundary]
    return product(*ranges)


@dataclass(frozen=True, eq=False)
class BoundarySet:
    """Set of integer r-tuples; the feasible boundary assignments."""

    r: int
    tuples: frozenset[tuple[int, ...]]

    def __post_init__(self) -> None:
        object.__setattr__(self, "tuples", frozenset(tuple(t) for t in self.tuples))
        for t in self.tuples:
            if len(t) != self.r:
                raise ModelError(f"tuple {t} does not have arity {self.r}")

    @classmethod
    def of(cls, r: int, tuples: Iterable[tuple[int, ...]]) -> "BoundarySet":
        return cls(r, frozenset(tuple(t) for t in tuples))

    def sorted_tuples(self) -> list[tuple[int, ...]]:
        return sorted(self.tuples)

    def __len__(self) -> int:
        return len(self.tuples)

    def __contains__(self, t: tuple[int, ...]) -> bool:
        return tuple(t) in self.tuples

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BoundarySet):
            return NotImplemented
        return self.r == other.r and self.tuples == other.tuples

"""Integer linear program data model and elementary transformations.

An :class:`Ilp` is a finite-domain feasibility instance: variables with
integer interval domains plus sparse integer rows ``sum_j c_j * x_j REL rhs``
with ``REL`` one of ``<=``, ``>=``, ``=``.  All numbers live in the signed
64-bit range; arithmetic that would leave it raises
:class:`~ilpk.errors.ArithmeticOverflowError` instead of wrapping.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Mapping, Optional

from .errors import ArithmeticOverflowError, ModelError

__all__ = [
    "INT64_MAX",
    "INT64_MIN",
    "Rel",
    "DomainInterval",
    "Variable",
    "Constraint",
    "Ilp",
    "FeasibilityResult",
    "checked_i64",
    "normalize",
    "is_normalized",
    "check_assignment",
    "domain_size",
    "pin_variable",
    "substitute_variable",
    "substitute_many",
]

INT64_MAX = (1 << 63) - 1
INT64_MIN = -(1 << 63)


def checked_i64(value: int, what: str = "value") -> int:
    if not (INT64_MIN <= value <= INT64_MAX):
        raise ArithmeticOverflowError(f"{what} {value} outside the signed 64-bit range")
    return value


class Rel(str, Enum):
    LE = "<="
    GE = ">="
    EQ = "="


@dataclass(frozen=True)
class DomainInterval:
    """Contiguous integer domain [lo, hi]."""

    lo: int
    hi: int

    def __post_init__(self) -> None:
        checked_i64(self.lo, "domain lo")
        checked_i64(self.hi, "domain hi")
        if self.lo > self.hi:
            raise ModelError(f"empty domain interval [{self.lo}, {self.hi}]")

    @property
    def size(self) -> int:
        return self.hi - self.lo + 1

    def __contains__(self, value: int) -> bool:
        return self.lo <= value <= self.hi


@dataclass(frozen=True)
class Variable:
    """Variable descriptor; the name is display metadata only."""

    name: str
    domain: DomainInterval


@dataclass(frozen=True, eq=False)
class Constraint:
    """Sparse row: sum of coeffs[j] * x_j  REL  rhs.  Coefficients are nonzero."""

    coeffs: Mapping[int, int]
    rel: Rel
    rhs: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "coeffs", dict(self.coeffs))
        for var, coef in self.coeffs.items():
            if coef == 0:
                raise ModelError(f"zero coefficient stored for variable {var}")
            checked_i64(coef, f"coefficient of variable {var}")
        checked_i64(self.rhs, "right-hand side")
        if not isinstance(self.rel, Rel):
            raise ModelError(f"bad relation {self.rel!r}")

    @property
    def support(self) -> frozenset[int]:
        return frozenset(self.coeffs)

    def sorted_terms(self) -> tuple[tuple[int, int], ...]:
        return tuple(sorted(self.coeffs.items()))

    def negated(self) -> "Constraint":
        return Constraint({v: -c for v, c in self.coeffs.items()}, self.rel, checked_i64(-self.rhs))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Constraint):
            return NotImplemented
        return self.rel == other.rel and self.rhs == other.rhs and self.coeffs == other.coeffs

    def __repr__(self) -> str:
        lhs = " + ".join(f"{c}*x{v}" for v, c in self.sorted_terms()) or "0"
        return f"Constraint({lhs} {self.rel.value} {self.rhs})"


@dataclass(frozen=True, eq=False)
class Ilp:
    """Immutable ILP feasibility instance."""

    vars: tuple[Variable, ...]
    constraints: tuple[Constraint, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "vars", tuple(self.vars))
        object.__setattr__(self, "constraints", tuple(self.constraints))
        n = len(self.vars)
        for row, con in enumerate(self.constraints):
            for var in con.coeffs:
                if not (0 <= var < n):
                    raise ModelError(f"row {row} references variable {var}, but n = {n}")

    @property
    def n(self) -> int:
        return len(self.vars)

    @property
    def m(self) -> int:
        return len(self.constraints)

    def domain(self, var: int) -> DomainInterval:
        return self.vars[var].domain

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Ilp):
            return NotImplemented
        return self.vars == other.vars and self.constraints == other.constraints

    def __repr__(self) -> str:
        return f"Ilp(n={self.n}, m={self.m})"


@dataclass(frozen=True)
class FeasibilityResult:
    feasible: bool
    witness: Optional[dict[int, int]] = field(default=None)

    def __bool__(self) -> bool:
        return self.feasible


def is_normalized(ilp: Ilp) -> bool:
    return all(c.rel is Rel.LE for c in ilp.constraints)


def normalize(ilp: Ilp) -> Ilp:
    """Rewrite every row as <=: GE rows are negated, EQ rows split in two.

    The feasible set and the variable list are unchanged; the result is
    idempotent under repeated normalization.
    """
    if is_normalized(ilp):
        return ilp
    rows: list[Constraint] = []
    for con in ilp.constraints:
        if con.rel is Rel.LE:
            rows.append(con)
        elif con.rel is Rel.GE:
            neg = con.negated()
            rows.append(Constraint(neg.coeffs, Rel.LE, neg.rhs))
        else:
            rows.append(Constraint(con.coeffs, Rel.LE, con.rhs))
            neg = con.negated()
            rows.append(Constraint(neg.coeffs, Rel.LE, neg.rhs))
    return Ilp(ilp.vars, tuple(rows))


def _row_value(con: Constraint, assignment: Mapping[int, int]) -> int:
    total = 0
    for var, coef in con.coeffs.items():
        total = checked_i64(total + checked_i64(coef * assignment[var], "row term"), "row sum")
    return total


def check_assignment(ilp: Ilp, assignment: Mapping[int, int]) -> bool:
    """True iff the total assignment satisfies every row and every domain."""
    missing = [v for v in range(ilp.n) if v not in assignment]
    if missing:
        raise ModelError(f"assignment is partial; missing variables {missing}")
    for var in range(ilp.n):
        if assignment[var] not in ilp.domain(var):
            return False
    for con in ilp.constraints:
        value = _row_value(con, assignment)
        if con.rel is Rel.LE and value > con.rhs:
            return False
        if con.rel is Rel.GE and value < con.rhs:
            return False
        if con.rel is Rel.EQ and value != con.rhs:
            return False
    return True


def domain_size(ilp: Ilp) -> int:
    """Largest domain cardinality over all variables; 0 for a variable-free instance."""
    return max((v.domain.size for v in ilp.vars), default=0)


def pin_variable(ilp: Ilp, var: int, value: int) -> Ilp:
    """Shrink the domain of ``var`` to {value}; rows are untouched.

    Because no row changes, the Gaifman graph of the result equals the
    original one, so decompositions computed for the input stay valid.
    """
    if not (0 <= var < ilp.n):
        raise ModelError(f"variable {var} out of range")
    if value not in ilp.domain(var):
        raise ModelError(f"value {value} outside domain of variable {var}")
    new_vars = list(ilp.vars)
    new_vars[var] = Variable(ilp.vars[var].name, DomainInterval(value, value))
    return Ilp(tuple(new_vars), ilp.constraints)


def substitute_variable(ilp: Ilp, var: int, value: int) -> Ilp:
    """Fix ``var`` to ``value`` and eliminate its column.

    Every row's right-hand side is decreased by ``coeff * value``; variables
    after ``var`` shift down by one index.
    """
    return substitute_many(ilp, {var: value})


def substitute_many(ilp: Ilp, values: Mapping[int, int]) -> Ilp:
    """Simultaneously substitute and remove several variables."""
    for var, value in values.items():
        if not (0 <= var < ilp.n):
            raise ModelError(f"variable {var} out of range")
        if value not in ilp.domain(var):
            raise ModelError(f"value {value} outside domain of variable {var}")
    remap: dict[int, int] = {}
    new_vars: list[Variable] = []
    for var, descr in enumerate(ilp.vars):
        if var not in values:
            remap[var] = len(new_vars)
            new_vars.append(descr)
    rows: list[Constraint] = []
    for con in ilp.constraints:
        coeffs: dict[int, int] = {}
        rhs = con.rhs
        for var, coef in con.coeffs.items():
            if var in values:
                rhs = checked_i64(rhs - checked_i64(coef * values[var], "substitution term"),
                                  "substituted rhs")
            else:
                coeffs[remap[var]] = coef
        rows.append(Constraint(coeffs, con.rel, rhs))
    return Ilp(tuple(new_vars), tuple(rows))

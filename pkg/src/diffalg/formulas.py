"""Quantifier-free Kolchin-constructible formulas and jet points.

Formulas are boolean combinations of atoms ``P = 0`` and ``P != 0`` over
differential polynomials; there is deliberately no quantifier node, so only
the differentially constructible fragment is representable.  Evaluation is
exact, over rational jet points.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Union

from .diffpoly import DiffPoly, DiffRational, RingSignature, evaluate
from .errors import UnboundVariableError
from .mpoly import KIND_JET, VarKey


@dataclass(frozen=True)
class JetPoint:
    """Rational values for jets and parameters, contiguous from order 0."""

    values: tuple[tuple[VarKey, Fraction], ...]

    @staticmethod
    def of(assignment: Mapping[VarKey, Fraction | int]) -> "JetPoint":
        items = tuple(sorted(((v, Fraction(c)) for v, c in assignment.items()),
                             key=lambda p: p[0].rank))
        pt = JetPoint(items)
        pt._check_contiguous()
        return pt

    @staticmethod
    def from_lists(sig: RingSignature,
                   jets: Mapping[str, list],
                   params: Mapping[str, Fraction | int] | None = None) -> "JetPoint":
        """Assign jets of each indeterminate from order 0 upward."""
        assignment: dict[VarKey, Fraction] = {}
        for name, vals in jets.items():
            for k, val in enumerate(vals):
                assignment[sig.jet(name, k)] = Fraction(val)
        for name, val in (params or {}).items():
            assignment[sig.param(name)] = Fraction(val)
        return JetPoint.of(assignment)

    def _check_contiguous(self):
        jets: dict[str, set[int]] = {}
        for v, _ in self.values:
            if v.kind == KIND_JET:
                jets.setdefault(v.name, set()).add(v.jet)
        for name, ks in jets.items():
            if ks != set(range(max(ks) + 1)):
                raise ValueError(
                    f"jets of {name!r} must be assigned contiguously from order 0")

    def get(self, v: VarKey) -> Fraction | None:
        for w, c in self.values:
            if w == v:
                return c
        return None

    def __getitem__(self, v: VarKey) -> Fraction:
        c = self.get(v)
        if c is None:
            raise UnboundVariableError(f"no value for {v}")
        return c


@dataclass(frozen=True)
class Eq:
    """Atom: the polynomial vanishes."""

    poly: DiffPoly


@dataclass(frozen=True)
class Neq:
    """Atom: the polynomial does not vanish."""

    poly: DiffPoly


@dataclass(frozen=True)
class And:
    args: tuple["Formula", ...]


@dataclass(frozen=True)
class Or:
    args: tuple["Formula", ...]


@dataclass(frozen=True)
class Not:
    arg: "Formula"


Formula = Union[Eq, Neq, And, Or, Not]


def conj(*args: Formula) -> And:
    return And(tuple(args))


def disj(*args: Formula) -> Or:
    return Or(tuple(args))


def eval_formula(phi: Formula, jet: JetPoint) -> bool:
    """Standard boolean semantics over exact polynomial evaluation."""
    if isinstance(phi, Eq):
        return evaluate(phi.poly, jet) == 0
    if isinstance(phi, Neq):
        return evaluate(phi.poly, jet) != 0
    if isinstance(phi, And):
        return all(eval_formula(a, jet) for a in phi.args)
    if isinstance(phi, Or):
        return any(eval_formula(a, jet) for a in phi.args)
    if isinstance(phi, Not):
        return not eval_formula(phi.arg, jet)
    raise TypeError(f"not a formula: {phi!r}")


def de_morgan(phi: Formula) -> Formula:
    """Negation normal form: push negations down to the atoms."""
    if isinstance(phi, (Eq, Neq)):
        return phi
    if isinstance(phi, And):
        return And(tuple(de_morgan(a) for a in phi.args))
    if isinstance(phi, Or):
        return Or(tuple(de_morgan(a) for a in phi.args))
    inner = phi.arg
    if isinstance(inner, Eq):
        return Neq(inner.poly)
    if isinstance(inner, Neq):
        return Eq(inner.poly)
    if isinstance(inner, And):
        return Or(tuple(de_morgan(Not(a)) for a in inner.args))
    if isinstance(inner, Or):
        return And(tuple(de_morgan(Not(a)) for a in inner.args))
    return de_morgan(inner.arg)  # double negation


def is_solution(eq: DiffRational, jet: JetPoint) -> bool:
    """A jet solves Q/R = 0 when Q evaluates to 0 and R to nonzero."""
    return evaluate(eq.numer, jet) == 0 and evaluate(eq.denom, jet) != 0

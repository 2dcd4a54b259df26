"""Bounded transcendence checkers for differential algebraic equations.

Four checkers built on the reduction and elimination engines:

* Wronskian linear-independence over the constants, with explicit rational
  relation coefficients on the dependent side;
* generic transcendence-degree evidence: for an irreducible equation of
  order n, the prolonged and saturated solution ideal should have dimension
  n and no relations among the jets below order n;
* witness-based bounded refutation of the joint-independence property D_m:
  a candidate relation among m distinct non-algebraic solutions either
  refutes the property, is inconsistent at the chosen prolongation level,
  or forces a solution to be algebraic;
* companion first-order systems for holonomic scalar equations.

None of these decides D_m outright: a refutation is certified by its basis,
but no bounded computation here proves that the property holds.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import gcd

from .diffpoly import (
    DiffPoly,
    DiffRational,
    RingSignature,
    differentiate,
    leader_data,
    prolong,
    ritt_reduce,
)
from .errors import (
    EquationInconsistentError,
    InvalidWitnessRelationError,
    TrivialWitnessError,
)
from .groebner import (
    GroebnerBasis,
    IdealHandle,
    dimension,
    eliminate,
    normal_form,
    saturate_many,
)
from .mpoly import GREVLEX, KIND_JET, LEX, Monomial, MPoly, VarKey, normalize

INDEPENDENT = "INDEPENDENT"
DEPENDENT = "DEPENDENT"
UNDECIDED = "UNDECIDED"

REFUTES = "REFUTES"
INCONSISTENT_AT = "INCONSISTENT_AT"
FORCES_ALGEBRAIC = "FORCES_ALGEBRAIC"
PASS = "PASS"


# ---------------------------------------------------------------------------
# Wronskians


def wronskian_matrix(fs: list[DiffPoly]) -> tuple[tuple[DiffPoly, ...], ...]:
    """n x n grid whose entry (i, j) is the i-th derivative of fs[j]."""
    if not fs:
        raise ValueError("empty input tuple")
    rows = [tuple(fs)]
    for _ in range(len(fs) - 1):
        rows.append(tuple(differentiate(f) for f in rows[-1]))
    return tuple(rows)


def _det(matrix: tuple[tuple[DiffPoly, ...], ...]) -> DiffPoly:
    """Laplace expansion with memoization on column subsets."""
    n = len(matrix)
    sig = matrix[0][0].sig
    cache: dict[tuple[int, ...], DiffPoly] = {}

    def minor(cols: tuple[int, ...]) -> DiffPoly:
        if cols in cache:
            return cache[cols]
        row = n - len(cols)
        if not cols:
            return DiffPoly.const(sig, 1)
        total = DiffPoly.zero(sig)
        for pos, c in enumerate(cols):
            entry = matrix[row][c]
            if entry.is_zero:
                continue
            sub = minor(tuple(x for x in cols if x != c))
            term = entry * sub
            total = total + (term if pos % 2 == 0 else -term)
        cache[cols] = total
        return total

    return minor(tuple(range(n)))


@dataclass(frozen=True)
class WronskianReport:
    """Wronskian matrix, its (possibly reduced) determinant and the verdict.

    A DEPENDENT verdict always carries rational coefficients that annihilate
    the input tuple; an INDEPENDENT verdict certifies independence over the
    constants by a nonzero determinant.  UNDECIDED means the determinant
    vanishes modulo the constraint but no rational relation was found.
    """

    matrix: tuple[tuple[DiffPoly, ...], ...]
    determinant: DiffPoly
    verdict: str
    relation: tuple[Fraction, ...] | None = None


def constants_linear_independence(fs: list[DiffPoly],
                                  modulo: DiffPoly | None = None) -> WronskianReport:
    """Wronskian test for linear independence over the constants.

    The determinant is computed exactly and, when a constraint is given,
    Ritt-reduced by it; a nonzero reduced determinant certifies independence.
    Otherwise a rational dependence is searched by exact linear algebra and
    verified before being reported.
    """
    matrix = wronskian_matrix(fs)
    det = _det(matrix)
    det_red = ritt_reduce(det, modulo).remainder if modulo is not None else det
    if not det_red.is_zero:
        return WronskianReport(matrix, det_red, INDEPENDENT)

    relation = _rational_relation(fs)
    if relation is None and modulo is not None:
        reduced = [ritt_reduce(f, modulo).remainder for f in fs]
        relation = _rational_relation(reduced)
        if relation is not None:
            combo = DiffPoly.zero(fs[0].sig)
            for c, f in zip(relation, fs):
                combo = combo + c * f
            if not ritt_reduce(combo, modulo).remainder.is_zero:
                relation = None
    if relation is not None:
        return WronskianReport(matrix, det_red, DEPENDENT, relation)
    return WronskianReport(matrix, det_red, UNDECIDED)


def _rational_relation(fs: list[DiffPoly]) -> tuple[Fraction, ...] | None:
    """Nonzero rational kernel vector of sum c_i f_i = 0, or None."""
    monomials: list[Monomial] = []
    index: dict[Monomial, int] = {}
    for f in fs:
        for m, _ in f.body.terms:
            if m not in index:
                index[m] = len(monomials)
                monomials.append(m)
    rows = [[Fraction(0)] * len(fs) for _ in monomials]
    for j, f in enumerate(fs):
        for m, c in f.body.terms:
            rows[index[m]][j] = c
    kernel = _nullspace_vector(rows, len(fs))
    return tuple(kernel) if kernel is not None else None


def _nullspace_vector(rows: list[list[Fraction]], ncols: int) -> list[Fraction] | None:
    """First vector of the nullspace under exact Gaussian elimination."""
    mat = [row[:] for row in rows]
    pivot_of_col: dict[int, int] = {}
    r = 0
    for c in range(ncols):
        pivot = next((i for i in range(r, len(mat)) if mat[i][c] != 0), None)
        if pivot is None:
            continue
        mat[r], mat[pivot] = mat[pivot], mat[r]
        inv = 1 / mat[r][c]
        mat[r] = [x * inv for x in mat[r]]
        for i in range(len(mat)):
            if i != r and mat[i][c] != 0:
                f = mat[i][c]
                mat[i] = [a - f * b for a, b in zip(mat[i], mat[r])]
        pivot_of_col[c] = r
        r += 1
    free = [c for c in range(ncols) if c not in pivot_of_col]
    if not free:
        return None
    f0 = free[0]
    vec = [Fraction(0)] * ncols
    vec[f0] = Fraction(1)
    for c, row in pivot_of_col.items():
        vec[c] = -mat[row][f0]
    # Normalize to integer-primitive with a positive first nonzero entry.
    den = 1
    for x in vec:
        den = den * x.denominator // gcd(den, x.denominator)
    num = 0
    for x in vec:
        num = gcd(num, (x * den).numerator)
    scale = Fraction(den, num)
    vec = [x * scale for x in vec]
    first = next(x for x in vec if x)
    if first < 0:
        vec = [-x for x in vec]
    return vec


# ---------------------------------------------------------------------------
# Generic transcendence degree


@dataclass(frozen=True)
class TrdegReport:
    """Outcome of the bounded generic transcendence-degree check."""

    dimension: int
    expected: int
    low_order_relations: GroebnerBasis
    passed: bool
    level: int


def generic_trdeg_check(eq: DiffRational, k: int,
                        indet: str | None = None) -> TrdegReport:
    """Evidence that the non-algebraic solutions have transcendence degree n.

    Builds the ideal of the k-th prolongation of the numerator in the jets of
    order up to n+k, saturates by the separant and the denominator, and
    computes the dimension (expected: the order n) together with the
    elimination ideal onto the jets below n (expected: zero).  Irreducibility
    of the numerator is the caller's assertion.
    """
    eq = eq.as_equation(indet)
    name = indet or eq.numer.sig.diff_vars[0]
    n = eq.numer.order_in(name)
    if n is None or n < 1:
        raise ValueError("equation must have order at least 1")
    ld = leader_data(eq.numer, name)
    sig = eq.numer.sig
    ambient = [sig.jet(name, j) for j in range(n + k + 1)]
    ambient += [VarKey.of_param(p) for p in sig.params]
    handle = IdealHandle.of(
        [p.body.with_order(GREVLEX) for p in prolong(eq.numer, k)],
        extra_vars=ambient)
    sat_handle, gb = saturate_many(
        handle, [ld.separant.body, eq.denom.body])
    if gb.is_unit_ideal:
        raise EquationInconsistentError(
            "saturated prolongation ideal is the unit ideal")
    dim = dimension(gb)
    low = eliminate(sat_handle, [sig.jet(name, j) for j in range(n)])
    passed = (dim == n) and low.is_zero_ideal
    return TrdegReport(dim, n, low, passed, k)


# ---------------------------------------------------------------------------
# Property D_m witness checks


def copy_names(m: int) -> tuple[str, ...]:
    """Deterministic names for the m solution copies: x, y, z, then x1..xm."""
    if m <= 3:
        return ("x", "y", "z")[:m]
    return tuple(f"x{i + 1}" for i in range(m))


@dataclass(frozen=True)
class WitnessVerdict:
    """Outcome of a bounded D_m witness check at prolongation level k.

    REFUTES carries the proper saturated basis (the certified relation among
    non-algebraic solutions); INCONSISTENT_AT carries the unit basis;
    FORCES_ALGEBRAIC carries the univariate relation that makes one copy
    algebraic over the base field.
    """

    outcome: str
    level: int
    basis: GroebnerBasis
    forced_relation: MPoly | None = None
    forced_copy: str | None = None

    def describe(self) -> str:
        if self.outcome == INCONSISTENT_AT:
            return f"INCONSISTENT_AT({self.level})"
        return self.outcome


def dm_witness_check(eq: DiffRational, m: int, relation: MPoly, k: int,
                     indet: str | None = None) -> WitnessVerdict:
    """Bounded check of a candidate relation against Property D_m.

    Assembles m disjoint renamed copies of the prolonged equation, adjoins
    the relation and its derivatives up to level k, and saturates by every
    copy's separant and denominator and (for m >= 2) by all pairwise
    differences of the order-0 coordinates, so only packets of pairwise
    distinct genuine solutions remain.  A proper ideal in which no copy's
    order-0 coordinate is algebraic certifies the relation as a refutation
    of D_m at this level; no outcome here ever proves that D_m holds.
    """
    eq = eq.as_equation(indet)
    name = indet or eq.numer.sig.diff_vars[0]
    n = eq.numer.order_in(name)
    if m < 1:
        raise ValueError("need at least one solution copy")
    if relation.is_zero:
        raise TrivialWitnessError("witness relation must be nonzero")

    names = copy_names(m)
    csig = RingSignature(names, eq.numer.sig.params)
    for v in relation.variables():
        if v.kind == KIND_JET:
            if v.name not in names:
                raise InvalidWitnessRelationError(
                    f"relation variable {v} is not a jet of the {m} copies")
            if v.jet >= n:
                raise InvalidWitnessRelationError(
                    f"relation must involve only jets of order < {n}")

    gens: list[DiffPoly] = []
    factors: list[MPoly] = []
    for cname in names:
        numer_c = _rename(eq.numer, name, cname, csig)
        denom_c = _rename(eq.denom, name, cname, csig)
        gens.extend(prolong(numer_c, k))
        factors.append(leader_data(numer_c, cname).separant.body)
        factors.append(denom_c.body)
    rel_poly = DiffPoly(csig, relation.with_order(LEX))
    gens.extend(prolong(rel_poly, k))
    for a, b in combinations(names, 2):
        factors.append((MPoly.var(csig.jet(a, 0), LEX)
                        - MPoly.var(csig.jet(b, 0), LEX)))

    ambient = [csig.jet(cname, j) for cname in names for j in range(n + k + 1)]
    ambient += [VarKey.of_param(p) for p in csig.params]
    handle = IdealHandle.of([g.body.with_order(GREVLEX) for g in gens],
                            extra_vars=ambient)
    # Fronting the top jets keeps the copies' quasi-linear prolongations
    # triangular: their leading monomials become coprime across copies.
    high = frozenset(csig.jet(cname, j)
                     for cname in names for j in range(n, n + k + 1))
    sat_handle, gb = saturate_many(handle, factors, inner_blocks=(high,))

    if gb.is_unit_ideal:
        return WitnessVerdict(INCONSISTENT_AT, k, gb)

    for cname in names:
        v0 = csig.jet(cname, 0)
        lms = gb.leading_monomials()
        if not any(set(lm.variables()) == {v0} for lm in lms):
            continue  # no pure power of v0 leads: elimination ideal is zero
        low = eliminate(sat_handle, [v0])
        if not low.is_zero_ideal:
            return WitnessVerdict(FORCES_ALGEBRAIC, k, gb,
                                  forced_relation=low.generators[0],
                                  forced_copy=cname)

    nf = normal_form(relation.with_order(gb.order), gb)
    if not nf.is_zero:
        raise AssertionError("witness relation escaped its own ideal")
    return WitnessVerdict(REFUTES, k, gb)


def _rename(p: DiffPoly, old: str, new: str, sig: RingSignature) -> DiffPoly:
    raw = []
    for mono, c in p.body.terms:
        powers = {}
        for v, e in mono.powers:
            if v.kind == KIND_JET and v.name == old:
                v = VarKey.of_jet(new, v.jet)
            powers[v] = e
        raw.append((Monomial.from_map(powers), c))
    return DiffPoly(sig, normalize(raw, LEX))


# ---------------------------------------------------------------------------
# Companion systems


@dataclass(frozen=True)
class CompanionSystem:
    """First-order matrix form of a holonomic scalar equation.

    The matrix has ones on the superdiagonal, the negated coefficients in
    the last row and zeros elsewhere; ``equation`` is the reconstructed
    scalar polynomial u^(n) + sum b_i u^(i) cleared of denominators.
    """

    matrix: tuple[tuple[DiffRational, ...], ...]
    equation: DiffRational


def companion_system(coeffs: list[DiffRational], var: str = "u") -> CompanionSystem:
    """Companion matrix of u^(n) + b_{n-1} u^(n-1) + ... + b_0 u."""
    n = len(coeffs)
    if n < 1:
        raise ValueError("need at least one coefficient")
    sig = coeffs[0].sig
    if var not in sig.diff_vars:
        sig = RingSignature((var,) + sig.diff_vars, sig.params)
        coeffs = [DiffRational.make(_widen(c.numer, sig), _widen(c.denom, sig))
                  for c in coeffs]
    for b in coeffs:
        if any(v.kind == KIND_JET for v in b.numer.variables()) or \
           any(v.kind == KIND_JET for v in b.denom.variables()):
            raise ValueError("coefficients must lie in the base field")

    zero = DiffRational.make(DiffPoly.zero(sig))
    one = DiffRational.make(DiffPoly.const(sig, 1))
    rows = []
    for i in range(n - 1):
        rows.append(tuple(one if j == i + 1 else zero for j in range(n)))
    rows.append(tuple(-b for b in coeffs))

    u = sig.gen(var)
    scalar = DiffRational.make(u(n))
    for i, b in enumerate(coeffs):
        scalar = scalar + b * DiffRational.make(u(i))
    return CompanionSystem(tuple(rows), scalar)


def _widen(p: DiffPoly, sig: RingSignature) -> DiffPoly:
    return DiffPoly(sig, p.body)

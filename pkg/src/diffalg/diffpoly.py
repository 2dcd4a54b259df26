"""Differential polynomial rings K{U_1,...,U_m} over exact rationals.

The base differential field is Q extended by declared constant parameters,
all annihilated by the derivation.  The formal derivation D sends the jet
u^(k) to u^(k+1) and acts on polynomials by linearity and the Leibniz rule.

The module provides the structural extractors (order, leader, degree,
initial, separant), prolongation, Ritt differential reduction with fully
re-expandable certificates, membership in the minimal prime ideal of an
irreducible polynomial, exact evaluation at jets, and the unique derivation
extension to algebraic elements.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .errors import (
    ConstantReducerError,
    InseparableError,
    InvalidEquationError,
    IrreducibilityUnverifiedError,
    UnboundVariableError,
    ZeroDenominatorError,
)
from .mpoly import (
    KIND_JET,
    KIND_PARAM,
    LEX,
    Monomial,
    MPoly,
    VarKey,
    normalize,
    pseudo_divide,
)


@dataclass(frozen=True)
class RingSignature:
    """Names of the differential indeterminates and constant parameters."""

    diff_vars: tuple[str, ...]
    params: tuple[str, ...] = ()

    def __post_init__(self):
        names = self.diff_vars + self.params
        if len(set(names)) != len(names):
            raise ValueError("duplicate names in ring signature")
        if not all(names):
            raise ValueError("empty name in ring signature")

    def jet(self, name: str, k: int) -> VarKey:
        if name not in self.diff_vars:
            raise ValueError(f"{name!r} is not a differential indeterminate")
        return VarKey.of_jet(name, k)

    def param(self, name: str) -> VarKey:
        if name not in self.params:
            raise ValueError(f"{name!r} is not a declared parameter")
        return VarKey.of_param(name)

    def owns(self, v: VarKey) -> bool:
        if v.kind == KIND_JET:
            return v.name in self.diff_vars
        if v.kind == KIND_PARAM:
            return v.name in self.params
        return False

    def gen(self, name: str) -> "JetGen":
        """Accessor: ``u = sig.gen("u"); u(2)`` is the jet u'' as a DiffPoly."""
        if name not in self.diff_vars:
            raise ValueError(f"{name!r} is not a differential indeterminate")
        return JetGen(self, name)

    def constant(self, name: str) -> "DiffPoly":
        return DiffPoly(self, MPoly.var(self.param(name), LEX))

    def with_params(self, extra: Iterable[str]) -> "RingSignature":
        new = tuple(sorted(set(self.params) | set(extra)))
        return RingSignature(self.diff_vars, new)

    def merged(self, other: "RingSignature") -> "RingSignature":
        dv = self.diff_vars + tuple(v for v in other.diff_vars
                                    if v not in self.diff_vars)
        pp = tuple(sorted(set(self.params) | set(other.params)))
        return RingSignature(dv, pp)


class JetGen:
    """Callable handle turning a jet order into a one-variable DiffPoly."""

    def __init__(self, sig: RingSignature, name: str):
        self.sig = sig
        self.name = name

    def __call__(self, k: int) -> "DiffPoly":
        return DiffPoly(self.sig, MPoly.var(self.sig.jet(self.name, k), LEX))


@dataclass(frozen=True)
class DiffPoly:
    """Element of K{U_1,...,U_m}: an MPoly over jet variables plus its ring."""

    sig: RingSignature
    body: MPoly

    def __post_init__(self):
        if self.body.order != LEX:
            object.__setattr__(self, "body", self.body.with_order(LEX))
        for v in self.body.variables():
            if not self.sig.owns(v):
                raise ValueError(f"variable {v} outside ring signature")

    @staticmethod
    def const(sig: RingSignature, c) -> "DiffPoly":
        return DiffPoly(sig, MPoly.const(c, LEX))

    @staticmethod
    def zero(sig: RingSignature) -> "DiffPoly":
        return DiffPoly(sig, MPoly.zero(LEX))

    # -- arithmetic (delegated to the body) ----------------------------

    def _coerce(self, other) -> "DiffPoly":
        if isinstance(other, DiffPoly):
            if other.sig != self.sig:
                raise ValueError("mixed ring signatures")
            return other
        return DiffPoly.const(self.sig, other)

    def __add__(self, other):
        other = self._coerce(other)
        return DiffPoly(self.sig, self.body + other.body)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        return DiffPoly(self.sig, self.body - other.body)

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __neg__(self):
        return DiffPoly(self.sig, -self.body)

    def __mul__(self, other):
        other = self._coerce(other)
        return DiffPoly(self.sig, self.body * other.body)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        return DiffPoly(self.sig, self.body ** n)

    @property
    def is_zero(self) -> bool:
        return self.body.is_zero

    @property
    def is_constant(self) -> bool:
        """Free of jet variables (may still involve constant parameters)."""
        return all(v.kind != KIND_JET for v in self.body.variables())

    def variables(self) -> tuple[VarKey, ...]:
        return self.body.variables()

    def jets_of(self, indet: str) -> tuple[int, ...]:
        return tuple(sorted(v.jet for v in self.body.variables()
                            if v.kind == KIND_JET and v.name == indet))

    def order_in(self, indet: str) -> int | None:
        """Largest jet of ``indet`` occurring; None encodes order -infinity."""
        js = self.jets_of(indet)
        return js[-1] if js else None

    def __str__(self):
        return str(self.body)


def differentiate(p: DiffPoly) -> DiffPoly:
    """Apply the formal derivation D once.

    D(u^(k)) = u^(k+1); constant parameters and rationals go to zero; products
    follow the Leibniz rule.
    """
    raw = []
    for mono, coeff in p.body.terms:
        for v, e in mono.powers:
            if v.kind != KIND_JET:
                continue
            bumped = VarKey.of_jet(v.name, v.jet + 1)
            rest = dict(mono.powers)
            if e == 1:
                del rest[v]
            else:
                rest[v] = e - 1
            rest[bumped] = rest.get(bumped, 0) + 1
            raw.append((Monomial.from_map(rest), coeff * e))
    return DiffPoly(p.sig, normalize(raw, LEX))


def nth_derivative(p: DiffPoly, n: int) -> DiffPoly:
    for _ in range(n):
        p = differentiate(p)
    return p


def prolong(p: DiffPoly, k: int) -> list[DiffPoly]:
    """The prolongation sequence [p, D(p), ..., D^k(p)] of length k+1."""
    out = [p]
    for _ in range(k):
        out.append(differentiate(out[-1]))
    return out


def partial_derivative(p: DiffPoly, v: VarKey) -> DiffPoly:
    raw = []
    for mono, coeff in p.body.terms:
        e = mono.degree_in(v)
        if e == 0:
            continue
        rest = dict(mono.powers)
        if e == 1:
            del rest[v]
        else:
            rest[v] = e - 1
        raw.append((Monomial.from_map(rest), coeff * e))
    return DiffPoly(p.sig, normalize(raw, LEX))


@dataclass(frozen=True)
class LeaderData:
    """Order, leader, degree, initial and separant of a differential polynomial.

    ``order is None`` encodes order -infinity (the polynomial is free of the
    designated indeterminate); the remaining fields are then None/0.
    """

    order: int | None
    leader: VarKey | None
    degree: int
    initial: DiffPoly | None
    separant: DiffPoly | None


def leader_data(p: DiffPoly, indet: str | None = None) -> LeaderData:
    """Structural data of p with respect to one differential indeterminate."""
    indet = _resolve_indet(p, indet)
    n = p.order_in(indet)
    if n is None:
        return LeaderData(None, None, 0, None, None)
    leader = p.sig.jet(indet, n)
    d = p.body.degree_in(leader)
    initial = DiffPoly(p.sig, p.body.coefficient_of_power(leader, d))
    separant = partial_derivative(p, leader)
    return LeaderData(n, leader, d, initial, separant)


def _resolve_indet(p: DiffPoly, indet: str | None) -> str:
    if indet is not None:
        if indet not in p.sig.diff_vars:
            raise ValueError(f"{indet!r} is not a differential indeterminate")
        return indet
    present = [name for name in p.sig.diff_vars if p.jets_of(name)]
    if len(present) == 1:
        return present[0]
    if len(p.sig.diff_vars) == 1:
        return p.sig.diff_vars[0]
    raise ValueError("ambiguous indeterminate; pass indet explicitly")


@dataclass(frozen=True)
class ReductionCertificate:
    """Ritt reduction identity, fully re-expandable.

    ``s^sep_exp * i^init_exp * reducee == sum_j multipliers[j] * D^j(reducer)
    + remainder`` holds exactly, where s and i are the separant and initial of
    the reducer, and the remainder has order at most ord(reducer) with leader
    degree strictly below the reducer's.
    """

    sep_exp: int
    init_exp: int
    multipliers: dict[int, DiffPoly]
    remainder: DiffPoly
    reducer: DiffPoly
    reducee: DiffPoly
    indet: str

    def reexpand_lhs(self) -> DiffPoly:
        ld = leader_data(self.reducer, self.indet)
        return (ld.separant ** self.sep_exp) * (ld.initial ** self.init_exp) \
            * self.reducee

    def reexpand_rhs(self) -> DiffPoly:
        total = self.remainder
        for j, c in self.multipliers.items():
            total = total + c * nth_derivative(self.reducer, j)
        return total

    def verify(self) -> bool:
        return (self.reexpand_lhs() - self.reexpand_rhs()).is_zero


def ritt_reduce(q: DiffPoly, p: DiffPoly, indet: str | None = None) -> ReductionCertificate:
    """Differential pseudo-division of q by p.

    Repeatedly pseudo-divides the highest derivative occurrence of q by the
    matching derivative of p (whose leader coefficient is the separant), then
    pseudo-divides by p itself in the leader; all multipliers are recorded so
    the certificate re-expands to an exact identity.
    """
    indet = _resolve_indet(p, indet)
    n = p.order_in(indet)
    if n is None:
        raise ConstantReducerError("reducer is free of the indeterminate")
    ld = leader_data(p, indet)
    deriv_cache = [p]

    def dnp(j: int) -> DiffPoly:
        while len(deriv_cache) <= j:
            deriv_cache.append(differentiate(deriv_cache[-1]))
        return deriv_cache[j]

    work = q
    a = b = 0
    mult: dict[int, DiffPoly] = {}

    def scale_all(f: DiffPoly, e: int):
        if e:
            fe = f ** e
            for j in list(mult):
                mult[j] = mult[j] * fe

    while True:
        nw = work.order_in(indet)
        if nw is None or nw < n:
            break
        if nw > n:
            j = nw - n
            divisor = dnp(j)
            vq, vr, e = pseudo_divide(work.body, divisor.body,
                                      p.sig.jet(indet, nw))
            scale_all(ld.separant, e)
            a += e
            quo = DiffPoly(p.sig, vq)
            mult[j] = mult.get(j, DiffPoly.zero(p.sig)) + quo
            work = DiffPoly(p.sig, vr)
        else:
            leader = p.sig.jet(indet, n)
            if work.body.degree_in(leader) < ld.degree:
                break
            vq, vr, e = pseudo_divide(work.body, p.body, leader)
            scale_all(ld.initial, e)
            b += e
            quo = DiffPoly(p.sig, vq)
            mult[0] = mult.get(0, DiffPoly.zero(p.sig)) + quo
            work = DiffPoly(p.sig, vr)
            break
    return ReductionCertificate(a, b, mult, work, p, q, indet)


def ideal_membership(q: DiffPoly, p: DiffPoly, *,
                     assume_irreducible: bool = False,
                     indet: str | None = None) -> bool:
    """Membership of q in the minimal prime differential ideal of p.

    For irreducible p the ideal is the separant saturation of the differential
    ideal generated by p, and membership holds exactly when the Ritt remainder
    of q vanishes.  Irreducibility is a caller-asserted precondition: this
    kernel does not factor.
    """
    if not assume_irreducible:
        raise IrreducibilityUnverifiedError(
            "caller must assert irreducibility of the reducer")
    return ritt_reduce(q, p, indet).remainder.is_zero


def evaluate(p: DiffPoly, jet) -> Fraction:
    """Exact value of p at a jet point (any mapping VarKey -> Fraction)."""
    getter = jet.get if hasattr(jet, "get") else jet.__getitem__
    total = Fraction(0)
    for mono, coeff in p.body.terms:
        v = coeff
        for var, e in mono.powers:
            val = getter(var)
            if val is None:
                raise UnboundVariableError(f"no value for {var}")
            v *= Fraction(val) ** e
        total += v
    return total


# ---------------------------------------------------------------------------
# Differential rational functions


@dataclass(frozen=True)
class DiffRational:
    """Quotient of differential polynomials, canonically normalized.

    The numerator is integer-primitive with positive leading coefficient
    under the ranking order; the denominator absorbs the scaling factor.
    Equality is decided by exact cross-multiplication.
    """

    numer: DiffPoly
    denom: DiffPoly

    @staticmethod
    def make(numer: DiffPoly, denom: DiffPoly | None = None) -> "DiffRational":
        if denom is None:
            denom = DiffPoly.const(numer.sig, 1)
        if denom.sig != numer.sig:
            raise ValueError("mixed ring signatures")
        if denom.is_zero:
            raise ZeroDenominatorError("zero denominator")
        if numer.is_zero:
            return DiffRational(DiffPoly.zero(numer.sig),
                                DiffPoly.const(numer.sig, 1))
        prim, factor = numer.body.primitive_signed()
        scaled_denom = denom.body * (1 / factor)
        return DiffRational(DiffPoly(numer.sig, prim),
                            DiffPoly(numer.sig, scaled_denom))

    @property
    def sig(self) -> RingSignature:
        return self.numer.sig

    @property
    def is_zero(self) -> bool:
        return self.numer.is_zero

    def order(self, indet: str | None = None) -> int | None:
        """Order of the induced equation: the order of the numerator."""
        indet = _resolve_indet(self.numer, indet) if indet is None else indet
        return self.numer.order_in(indet)

    def as_equation(self, indet: str | None = None) -> "DiffRational":
        """Validate the order contract for equations: ord(denom) < ord(numer)."""
        if self.is_zero:
            raise InvalidEquationError("zero is not an equation")
        name = _resolve_indet(self.numer, indet)
        on = self.numer.order_in(name)
        od = self.denom.order_in(name)
        if on is None or (od is not None and od >= on):
            raise InvalidEquationError(
                "denominator order must be strictly below numerator order")
        return self

    # -- field arithmetic ----------------------------------------------

    def _coerce(self, other) -> "DiffRational":
        if isinstance(other, DiffRational):
            return other
        if isinstance(other, DiffPoly):
            return DiffRational.make(other)
        return DiffRational.make(DiffPoly.const(self.sig, other))

    def __add__(self, other):
        o = self._coerce(other)
        return DiffRational.make(self.numer * o.denom + o.numer * self.denom,
                                 self.denom * o.denom)

    __radd__ = __add__

    def __neg__(self):
        return DiffRational.make(-self.numer, self.denom)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        o = self._coerce(other)
        return DiffRational.make(self.numer * o.numer, self.denom * o.denom)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o.is_zero:
            raise ZeroDenominatorError("division by zero")
        return DiffRational.make(self.numer * o.denom, self.denom * o.numer)

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def __pow__(self, n: int):
        if n < 0:
            if self.is_zero:
                raise ZeroDenominatorError("inverse of zero")
            return DiffRational.make(self.denom ** (-n), self.numer ** (-n))
        return DiffRational.make(self.numer ** n, self.denom ** n)

    def __eq__(self, other):
        if not isinstance(other, (DiffRational, DiffPoly, int, Fraction)):
            return NotImplemented
        o = self._coerce(other)
        return (self.numer * o.denom - o.numer * self.denom).is_zero

    def __hash__(self):
        raise TypeError("DiffRational is unhashable (equality is semantic)")

    def derivative(self) -> "DiffRational":
        """Quotient rule: D(Q/R) = (D(Q) R - Q D(R)) / R^2."""
        return DiffRational.make(
            differentiate(self.numer) * self.denom
            - self.numer * differentiate(self.denom),
            self.denom * self.denom)

    def __str__(self):
        if self.denom.body.is_constant and self.denom.body.constant_value() == 1:
            return str(self.numer)
        return f"({self.numer})/({self.denom})"


# ---------------------------------------------------------------------------
# Derivation extension to algebraic elements


def algebraic_derivative(min_poly: Sequence[DiffPoly]) -> list[DiffRational]:
    """Derivative of an algebraic element from its monic minimal polynomial.

    ``min_poly`` lists the coefficients c_0, ..., c_d of m(T) = sum c_i T^i
    with c_d = 1.  Differentiating m(a) = 0 gives m^D(a) + m'(a) a^dot = 0
    with m^D the coefficientwise derivative, so a^dot = -m^D(a) / m'(a) in
    K(a); the inverse is computed by the extended Euclidean algorithm modulo
    m.  Returns the d coefficients of a^dot as a polynomial of degree < d.
    """
    coeffs = list(min_poly)
    if len(coeffs) < 2:
        raise ValueError("minimal polynomial must have positive degree")
    sig = coeffs[0].sig
    lead = coeffs[-1]
    if not (lead.body.is_constant and lead.body.constant_value() == 1):
        raise ValueError("minimal polynomial must be monic")
    d = len(coeffs) - 1

    one = DiffRational.make(DiffPoly.const(sig, 1))
    zero = DiffRational.make(DiffPoly.zero(sig))
    m = [DiffRational.make(c) for c in coeffs]
    m_delta = [DiffRational.make(differentiate(c)) for c in coeffs]
    m_prime = [m[i] * i for i in range(1, d + 1)]

    inv = _mod_inverse(m_prime, m, one, zero)
    if inv is None:
        raise InseparableError("leader derivative not invertible modulo m")
    neg_mdelta = [-c for c in m_delta]
    result = _upoly_mod(_upoly_mul(neg_mdelta, inv, zero), m, zero)
    result = result + [zero] * (d - len(result))
    return result[:d]


def _upoly_trim(p, zero):
    while p and p[-1] == zero:
        p.pop()
    return p


def _upoly_mul(a, b, zero):
    if not a or not b:
        return []
    out = [zero] * (len(a) + len(b) - 1)
    for i, ca in enumerate(a):
        if ca == zero:
            continue
        for j, cb in enumerate(b):
            out[i + j] = out[i + j] + ca * cb
    return _upoly_trim(out, zero)


def _upoly_sub(a, b, zero):
    n = max(len(a), len(b))
    out = [(a[i] if i < len(a) else zero) - (b[i] if i < len(b) else zero)
           for i in range(n)]
    return _upoly_trim(out, zero)


def _upoly_divmod(a, b, zero):
    a = list(a)
    q = [zero] * max(len(a) - len(b) + 1, 0)
    while len(a) >= len(b) and a:
        c = a[-1] / b[-1]
        k = len(a) - len(b)
        q[k] = q[k] + c
        for i, cb in enumerate(b):
            a[k + i] = a[k + i] - c * cb
        _upoly_trim(a, zero)
    return _upoly_trim(q, zero), a


def _upoly_mod(a, m, zero):
    return _upoly_divmod(list(a), m, zero)[1]


def _mod_inverse(f, m, one, zero):
    """Inverse of f modulo m over the differential rational field, or None."""
    r0, r1 = list(m), _upoly_mod(f, m, zero)
    s0, s1 = [], [one]
    while r1:
        q, r = _upoly_divmod(r0, r1, zero)
        r0, r1 = r1, r
        s0, s1 = s1, _upoly_sub(s0, _upoly_mul(q, s1, zero), zero)
    if len(r0) != 1:
        return None
    c = r0[0]
    if c.is_zero:
        return None
    return _upoly_mod([ci / c for ci in s0], m, zero)

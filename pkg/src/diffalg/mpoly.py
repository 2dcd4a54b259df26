"""Exact sparse multivariate polynomials over Q with pluggable monomial orders.

Variables are :class:`VarKey` values: a jet symbol ``u^(k)`` of a differential
indeterminate, a named constant parameter, or an auxiliary inversion variable
used internally by saturation.  Coefficients are :class:`fractions.Fraction`,
so every operation in the kernel is exact; there is no floating-point mode.

A polynomial stores its terms sorted strictly descending under the order it
carries, which makes leading-term access O(1) and lets reduction loops merge
sorted term lists instead of re-sorting.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Iterable, Iterator, Mapping, Sequence

from .errors import DegenerateDivisorError

KIND_JET = "jet"
KIND_PARAM = "param"
KIND_AUX = "aux"

_KIND_RANK = {KIND_PARAM: 0, KIND_JET: 1, KIND_AUX: 2}


@dataclass(frozen=True)
class VarKey:
    """One variable of the ambient polynomial ring.

    ``jet`` is the derivative order for ``kind == "jet"`` and must be 0 for
    constant parameters, which the derivation annihilates.
    """

    kind: str
    name: str
    jet: int = 0
    rank: tuple = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.kind not in _KIND_RANK:
            raise ValueError(f"unknown variable kind {self.kind!r}")
        if self.jet < 0:
            raise ValueError("negative jet order")
        if self.kind != KIND_JET and self.jet != 0:
            raise ValueError("only jet variables carry a derivative order")
        object.__setattr__(self, "rank", (_KIND_RANK[self.kind], self.jet, self.name))

    @staticmethod
    def of_jet(name: str, jet: int) -> "VarKey":
        return VarKey(KIND_JET, name, jet)

    @staticmethod
    def of_param(name: str) -> "VarKey":
        return VarKey(KIND_PARAM, name)

    @staticmethod
    def of_aux(index: int) -> "VarKey":
        return VarKey(KIND_AUX, f"t{index}")

    def __str__(self):
        if self.kind == KIND_JET:
            return f"{self.name}^({self.jet})" if self.jet else self.name
        return self.name


@dataclass(frozen=True)
class Monomial:
    """A power product, stored as (variable, exponent) pairs, rank-ascending.

    Exponents are strictly positive; the empty tuple is the monomial 1.
    """

    powers: tuple[tuple[VarKey, int], ...] = ()

    @staticmethod
    def one() -> "Monomial":
        return _ONE

    @staticmethod
    def of(*pairs: tuple[VarKey, int]) -> "Monomial":
        return Monomial.from_map(dict(pairs))

    @staticmethod
    def var(v: VarKey, exp: int = 1) -> "Monomial":
        if exp == 0:
            return _ONE
        if exp < 0:
            raise ValueError("negative exponent")
        return Monomial(((v, exp),))

    @staticmethod
    def from_map(m: Mapping[VarKey, int]) -> "Monomial":
        pairs = []
        for v, e in m.items():
            if e < 0:
                raise ValueError("negative exponent")
            if e:
                pairs.append((v, e))
        pairs.sort(key=lambda p: p[0].rank)
        return Monomial(tuple(pairs))

    @property
    def is_one(self) -> bool:
        return not self.powers

    def degree(self) -> int:
        return sum(e for _, e in self.powers)

    def degree_in(self, v: VarKey) -> int:
        for w, e in self.powers:
            if w == v:
                return e
        return 0

    def variables(self) -> tuple[VarKey, ...]:
        return tuple(v for v, _ in self.powers)

    def __mul__(self, other: "Monomial") -> "Monomial":
        return Monomial(tuple(_merge_powers(self.powers, other.powers, 1)))

    def divides(self, other: "Monomial") -> bool:
        it = dict(other.powers)
        return all(it.get(v, 0) >= e for v, e in self.powers)

    def divide(self, other: "Monomial") -> "Monomial":
        """Exact quotient self / other; raises ValueError if not divisible."""
        quo = _merge_powers(self.powers, other.powers, -1)
        if any(e < 0 for _, e in quo):
            raise ValueError("monomial not divisible")
        return Monomial(tuple(p for p in quo if p[1]))

    def lcm(self, other: "Monomial") -> "Monomial":
        out = dict(self.powers)
        for v, e in other.powers:
            if out.get(v, 0) < e:
                out[v] = e
        return Monomial.from_map(out)

    def __str__(self):
        if not self.powers:
            return "1"
        return "*".join(str(v) + (f"^{e}" if e > 1 else "") for v, e in self.powers)


def _merge_powers(a, b, sign_b):
    """Merge two rank-ascending power tuples, adding sign_b times b."""
    out = []
    i = j = 0
    while i < len(a) and j < len(b):
        va, ea = a[i]
        vb, eb = b[j]
        if va == vb:
            e = ea + sign_b * eb
            if e:
                out.append((va, e))
            i += 1
            j += 1
        elif va.rank < vb.rank:
            out.append((va, ea))
            i += 1
        else:
            out.append((vb, sign_b * eb))
            j += 1
    out.extend(a[i:])
    out.extend((v, sign_b * e) for v, e in b[j:])
    return out


_ONE = Monomial(())


@dataclass(frozen=True)
class MonomialOrder:
    """Total order on monomials, compatible with multiplication.

    Kinds: ``lex`` (rank-descending lexicographic, so the highest jet
    dominates, matching the usual differential ranking), ``grevlex``
    (graded reverse lexicographic), and ``block`` (compare exponents on each
    front block in turn under grevlex, then the remaining variables; basis
    elements free of front-block variables then cut out the elimination
    ideal).
    """

    kind: str
    blocks: tuple[frozenset[VarKey], ...] = ()

    def __post_init__(self):
        if self.kind not in ("lex", "grevlex", "block"):
            raise ValueError(f"unknown monomial order {self.kind!r}")
        if self.kind != "block" and self.blocks:
            raise ValueError("only block orders carry front blocks")
        if self.kind == "block" and not self.blocks:
            raise ValueError("block order needs at least one front block")

    @property
    def front(self) -> frozenset[VarKey]:
        """Union of all front blocks (the eliminated variables)."""
        out: frozenset[VarKey] = frozenset()
        for b in self.blocks:
            out |= b
        return out

    def compare(self, a: Monomial, b: Monomial) -> int:
        """Return -1, 0, or 1 as a <, =, > b."""
        if self.kind == "lex":
            return _cmp_lex(a.powers, b.powers)
        if self.kind == "grevlex":
            return _cmp_grevlex(a.powers, b.powers)
        ap, bp = a.powers, b.powers
        for blk in self.blocks:
            af, ap = _split(ap, blk)
            bf, bp = _split(bp, blk)
            c = _cmp_grevlex(af, bf)
            if c:
                return c
        return _cmp_grevlex(ap, bp)

    def sort_key(self):
        return functools.cmp_to_key(self.compare)

    def less(self, a: Monomial, b: Monomial) -> bool:
        return self.compare(a, b) < 0


LEX = MonomialOrder("lex")
GREVLEX = MonomialOrder("grevlex")


def block_order(*blocks: Iterable[VarKey]) -> MonomialOrder:
    cleaned = tuple(frozenset(b) for b in blocks if frozenset(b))
    if not cleaned:
        return GREVLEX
    return MonomialOrder("block", cleaned)


def _split(powers, front):
    fa, ra = [], []
    for v, e in powers:
        (fa if v in front else ra).append((v, e))
    return fa, ra


def _cmp_lex(a, b) -> int:
    # Scan from the highest-ranked variable down; first difference decides.
    i, j = len(a) - 1, len(b) - 1
    while i >= 0 or j >= 0:
        if i < 0:
            return -1
        if j < 0:
            return 1
        va, ea = a[i]
        vb, eb = b[j]
        if va == vb:
            if ea != eb:
                return 1 if ea > eb else -1
            i -= 1
            j -= 1
        elif va.rank > vb.rank:
            return 1
        else:
            return -1
    return 0


def _cmp_grevlex(a, b) -> int:
    da = sum(e for _, e in a)
    db = sum(e for _, e in b)
    if da != db:
        return 1 if da > db else -1
    # Equal degrees: scan from the lowest-ranked variable up; at the first
    # difference the monomial with the *smaller* exponent is the larger one.
    i = j = 0
    while i < len(a) or j < len(b):
        if i >= len(a):
            return 1
        if j >= len(b):
            return -1
        va, ea = a[i]
        vb, eb = b[j]
        if va == vb:
            if ea != eb:
                return 1 if ea < eb else -1
            i += 1
            j += 1
        elif va.rank < vb.rank:
            return -1
        else:
            return 1
    return 0


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    raise TypeError(f"not an exact scalar: {x!r}")


@dataclass(frozen=True)
class MPoly:
    """Sparse polynomial: terms sorted strictly descending under ``order``."""

    terms: tuple[tuple[Monomial, Fraction], ...]
    order: MonomialOrder

    # -- construction -------------------------------------------------

    @staticmethod
    def zero(order: MonomialOrder = LEX) -> "MPoly":
        return MPoly((), order)

    @staticmethod
    def const(c, order: MonomialOrder = LEX) -> "MPoly":
        c = _frac(c)
        return MPoly(((_ONE, c),) if c else (), order)

    @staticmethod
    def var(v: VarKey, order: MonomialOrder = LEX) -> "MPoly":
        return MPoly(((Monomial.var(v), Fraction(1)),), order)

    @staticmethod
    def from_terms(raw: Iterable[tuple[Monomial, Fraction]],
                   order: MonomialOrder = LEX) -> "MPoly":
        return normalize(raw, order)

    # -- queries ------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def is_constant(self) -> bool:
        return all(m.is_one for m, _ in self.terms)

    def constant_value(self) -> Fraction:
        if self.is_zero:
            return Fraction(0)
        if not self.is_constant:
            raise ValueError("not a constant polynomial")
        return self.terms[0][1]

    def leading_monomial(self) -> Monomial:
        if self.is_zero:
            raise ValueError("zero polynomial has no leading term")
        return self.terms[0][0]

    def leading_coefficient(self) -> Fraction:
        if self.is_zero:
            raise ValueError("zero polynomial has no leading term")
        return self.terms[0][1]

    def coefficient(self, m: Monomial) -> Fraction:
        for mm, c in self.terms:
            if mm == m:
                return c
        return Fraction(0)

    def total_degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((m.degree() for m, _ in self.terms), default=-1)

    def degree_in(self, v: VarKey) -> int:
        return max((m.degree_in(v) for m, _ in self.terms), default=0)

    def variables(self) -> tuple[VarKey, ...]:
        seen = set()
        for m, _ in self.terms:
            seen.update(m.variables())
        return tuple(sorted(seen, key=lambda v: v.rank))

    def coefficients_in(self, v: VarKey) -> dict[int, "MPoly"]:
        """View the polynomial as univariate in v with MPoly coefficients."""
        buckets: dict[int, list] = {}
        for m, c in self.terms:
            e = m.degree_in(v)
            rest = m.divide(Monomial.var(v, e)) if e else m
            buckets.setdefault(e, []).append((rest, c))
        return {e: normalize(ts, self.order) for e, ts in buckets.items()}

    def coefficient_of_power(self, v: VarKey, e: int) -> "MPoly":
        return self.coefficients_in(v).get(e, MPoly.zero(self.order))

    # -- arithmetic ---------------------------------------------------

    def _check(self, other: "MPoly"):
        if self.order != other.order:
            raise ValueError("mixed monomial orders")

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = MPoly.const(other, self.order)
        self._check(other)
        return MPoly(tuple(_merge_terms(self.terms, other.terms, 1, self.order)),
                     self.order)

    __radd__ = __add__

    def __neg__(self):
        return MPoly(tuple((m, -c) for m, c in self.terms), self.order)

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = MPoly.const(other, self.order)
        self._check(other)
        return MPoly(tuple(_merge_terms(self.terms, other.terms, -1, self.order)),
                     self.order)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            c = _frac(other)
            if not c:
                return MPoly.zero(self.order)
            return MPoly(tuple((m, cf * c) for m, cf in self.terms), self.order)
        self._check(other)
        return mpoly_mul(self, other)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise ValueError("exponent must be a nonnegative integer")
        result = MPoly.const(1, self.order)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def mul_term(self, m: Monomial, c: Fraction) -> "MPoly":
        """Multiply by a single term; multiplication preserves term order."""
        if not c:
            return MPoly.zero(self.order)
        return MPoly(tuple((mm * m, cc * c) for mm, cc in self.terms), self.order)

    def with_order(self, order: MonomialOrder) -> "MPoly":
        if order == self.order:
            return self
        return normalize(self.terms, order)

    # -- content ------------------------------------------------------

    def content(self) -> Fraction:
        """Positive rational c with self/c integer-primitive; 0 for 0."""
        if self.is_zero:
            return Fraction(0)
        num = 0
        den = 1
        for _, c in self.terms:
            num = gcd(num, c.numerator)
            den = den * c.denominator // gcd(den, c.denominator)
        return Fraction(num, den)

    def primitive_signed(self) -> tuple["MPoly", Fraction]:
        """Return (primitive part with positive leading coefficient, factor).

        ``self == factor * primitive`` exactly; factor is 0 only for 0.
        """
        if self.is_zero:
            return self, Fraction(0)
        c = self.content()
        if self.leading_coefficient() < 0:
            c = -c
        return MPoly(tuple((m, cf / c) for m, cf in self.terms), self.order), c

    def __str__(self):
        if self.is_zero:
            return "0"
        bits = []
        for m, c in self.terms:
            t = str(m) if m.is_one is False else None
            if t is None:
                piece = str(c)
            elif c == 1:
                piece = t
            elif c == -1:
                piece = f"-{t}"
            else:
                piece = f"{c}*{t}"
            bits.append(piece)
        out = bits[0]
        for piece in bits[1:]:
            out += f" - {piece[1:]}" if piece.startswith("-") else f" + {piece}"
        return out


def _merge_terms(a, b, sign_b, order):
    """Merge two descending-sorted term tuples; sign_b scales b."""
    out = []
    i = j = 0
    while i < len(a) and j < len(b):
        ma, ca = a[i]
        mb, cb = b[j]
        c = order.compare(ma, mb)
        if c == 0:
            s = ca + sign_b * cb
            if s:
                out.append((ma, s))
            i += 1
            j += 1
        elif c > 0:
            out.append((ma, ca))
            i += 1
        else:
            out.append((mb, sign_b * cb))
            j += 1
    out.extend(a[i:])
    out.extend((m, sign_b * c) for m, c in b[j:])
    return out


def normalize(raw: Iterable[tuple[Monomial, Fraction]],
              order: MonomialOrder = LEX) -> MPoly:
    """Merge duplicates, drop zero coefficients, sort descending under order."""
    acc: dict[Monomial, Fraction] = {}
    for m, c in raw:
        c = _frac(c)
        if m in acc:
            acc[m] += c
        else:
            acc[m] = c
    key = order.sort_key()
    terms = sorted(((m, c) for m, c in acc.items() if c),
                   key=lambda t: key(t[0]), reverse=True)
    return MPoly(tuple(terms), order)


def mpoly_mul(a: MPoly, b: MPoly) -> MPoly:
    """Exact product; operands must share a monomial order."""
    if a.order != b.order:
        raise ValueError("mixed monomial orders")
    if a.is_zero or b.is_zero:
        return MPoly.zero(a.order)
    if len(a.terms) > len(b.terms):
        a, b = b, a
    acc: dict[Monomial, Fraction] = {}
    for ma, ca in a.terms:
        for mb, cb in b.terms:
            m = ma * mb
            c = ca * cb
            if m in acc:
                acc[m] += c
            else:
                acc[m] = c
    key = a.order.sort_key()
    terms = sorted(((m, c) for m, c in acc.items() if c),
                   key=lambda t: key(t[0]), reverse=True)
    return MPoly(tuple(terms), a.order)


def pseudo_divide(f: MPoly, g: MPoly, v: VarKey) -> tuple[MPoly, MPoly, int]:
    """Pseudo-division of f by g in the variable v.

    Returns (quotient, remainder, e) with ``lc_v(g)^e * f == quotient*g +
    remainder`` exactly and ``deg_v(remainder) < deg_v(g)``.  Each elimination
    step scales by the leading coefficient only when it is not the constant 1,
    so e counts the multiplications actually performed.
    """
    if f.order != g.order:
        raise ValueError("mixed monomial orders")
    dg = g.degree_in(v)
    if g.is_zero or dg == 0:
        raise DegenerateDivisorError(f"divisor has degree 0 in {v}")
    lc_g = g.coefficient_of_power(v, dg)
    trivial_lc = lc_g.is_constant and lc_g.constant_value() == 1
    q = MPoly.zero(f.order)
    r = f
    e = 0
    while not r.is_zero:
        dr = r.degree_in(v)
        if dr < dg:
            break
        lc_r = r.coefficient_of_power(v, dr)
        shift = Monomial.var(v, dr - dg)
        step = lc_r.mul_term(shift, Fraction(1))
        if trivial_lc:
            q = q + step
            r = r - step * g
        else:
            q = q * lc_g + step
            r = r * lc_g - step * g
            e += 1
    return q, r, e

"""Buchberger Groebner engine over Q with elimination orders and saturation.

The public surface speaks :class:`MPoly`; internally each computation compiles
its generators into dense exponent tuples with integer coefficients (contents
stripped throughout), runs Buchberger with the Gebauer-Moeller pair update and
the normal selection strategy, and converts the reduced basis back to monic
rational polynomials.  Output is canonical: the reduced basis is unique for
the ideal and order, and generators are listed by descending leading monomial,
so results do not depend on generator input order or reduction schedule.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence

from .errors import EmptyVarietyError, ZeroSaturationError
from .mpoly import (
    GREVLEX,
    KIND_AUX,
    Monomial,
    MonomialOrder,
    MPoly,
    VarKey,
    block_order,
    normalize,
)


@dataclass(frozen=True)
class IdealHandle:
    """Generators plus the ambient variable list they live in."""

    generators: tuple[MPoly, ...]
    ambient: tuple[VarKey, ...]

    @staticmethod
    def of(gens: Iterable[MPoly], extra_vars: Iterable[VarKey] = ()) -> "IdealHandle":
        gens = tuple(gens)
        seen = set(extra_vars)
        for g in gens:
            seen.update(g.variables())
        ambient = tuple(sorted(seen, key=lambda v: v.rank))
        return IdealHandle(gens, ambient)

    def __post_init__(self):
        amb = set(self.ambient)
        for g in self.generators:
            if not set(g.variables()) <= amb:
                raise ValueError("generator outside the ambient ring")
        object.__setattr__(self, "ambient",
                           tuple(sorted(amb, key=lambda v: v.rank)))


@dataclass(frozen=True)
class GroebnerBasis:
    """Reduced Groebner basis: monic generators, no leading-term divisibility."""

    generators: tuple[MPoly, ...]
    order: MonomialOrder
    ambient: tuple[VarKey, ...]
    reduced: bool = True

    @property
    def is_zero_ideal(self) -> bool:
        return not self.generators

    @property
    def is_unit_ideal(self) -> bool:
        return len(self.generators) == 1 and self.generators[0].is_constant \
            and not self.generators[0].is_zero

    def leading_monomials(self) -> tuple[Monomial, ...]:
        return tuple(g.leading_monomial() for g in self.generators)

    def contains(self, f: MPoly) -> bool:
        return normal_form(f, self).is_zero


# ---------------------------------------------------------------------------
# Dense integer engine


class _Engine:
    """One Groebner computation: fixed variable list, fixed order."""

    def __init__(self, ambient: Sequence[VarKey], order: MonomialOrder):
        # Highest-priority variable sits at position 0.
        self.vars = tuple(sorted(ambient, key=lambda v: v.rank, reverse=True))
        self.pos = {v: i for i, v in enumerate(self.vars)}
        self.n = len(self.vars)
        self.order = order
        self._keys: dict[tuple, tuple] = {}
        if order.kind == "block":
            taken: set[int] = set()
            groups = []
            for blk in order.blocks:
                pos = tuple(i for i, v in enumerate(self.vars) if v in blk)
                groups.append(pos)
                taken.update(pos)
            groups.append(tuple(i for i in range(self.n) if i not in taken))
            self.block_pos = tuple(groups)

    # -- keys ----------------------------------------------------------

    def key(self, e: tuple) -> tuple:
        k = self._keys.get(e)
        if k is None:
            k = self._compute_key(e)
            self._keys[e] = k
        return k

    def _compute_key(self, e: tuple) -> tuple:
        kind = self.order.kind
        if kind == "lex":
            return e
        if kind == "grevlex":
            return (sum(e), tuple(-x for x in reversed(e)))
        out = []
        for pos in self.block_pos:
            eb = tuple(e[i] for i in pos)
            out.append((sum(eb), tuple(-x for x in reversed(eb))))
        return tuple(out)

    # -- conversions ----------------------------------------------------

    def to_engine(self, p: MPoly) -> list:
        """Clear denominators, strip content: primitive integer term list."""
        if p.is_zero:
            return []
        den = 1
        for _, c in p.terms:
            den = den * c.denominator // gcd(den, c.denominator)
        terms = []
        for mono, c in p.terms:
            e = [0] * self.n
            for v, k in mono.powers:
                e[self.pos[v]] = k
            terms.append((tuple(e), int(c * den)))
        terms.sort(key=lambda t: self.key(t[0]), reverse=True)
        return self._prim(terms)

    def from_engine(self, terms: list, monic: bool) -> MPoly:
        if not terms:
            return MPoly.zero(self.order)
        lead = Fraction(terms[0][1])
        out = []
        for e, c in terms:
            mono = Monomial.from_map({self.vars[i]: k
                                      for i, k in enumerate(e) if k})
            out.append((mono, Fraction(c) / lead if monic else Fraction(c)))
        return MPoly(tuple(out), self.order)

    # -- raw polynomial ops ---------------------------------------------

    @staticmethod
    def _prim(terms: list) -> list:
        if not terms:
            return terms
        g = 0
        for _, c in terms:
            g = gcd(g, c)
            if g == 1:
                break
        if terms[0][1] < 0:
            g = -g
        if g == 1:
            return terms
        return [(e, c // g) for e, c in terms]

    def _merge(self, a: list, b: list) -> list:
        out = []
        i = j = 0
        la, lb = len(a), len(b)
        key = self.key
        while i < la and j < lb:
            ea, ca = a[i]
            eb, cb = b[j]
            if ea == eb:
                c = ca + cb
                if c:
                    out.append((ea, c))
                i += 1
                j += 1
            elif key(ea) > key(eb):
                out.append(a[i])
                i += 1
            else:
                out.append(b[j])
                j += 1
        out.extend(a[i:])
        out.extend(b[j:])
        return out

    @staticmethod
    def _scale(p: list, c: int) -> list:
        if c == 1:
            return p
        return [(e, cf * c) for e, cf in p]

    @staticmethod
    def _shift(p: list, m: tuple, c: int) -> list:
        """p * c*x^m; multiplication by a fixed term preserves sortedness."""
        return [(tuple(x + y for x, y in zip(e, m)), cf * c) for e, cf in p]

    @staticmethod
    def _divides(a: tuple, b: tuple) -> bool:
        return all(x <= y for x, y in zip(a, b))

    def reduce_full(self, f: list, basis: list) -> list:
        """Full normal-form reduction (head and tail), fraction-free.

        Returns a primitive polynomial r with unit*f == combination + r.
        """
        tail: list = []
        work = f
        while work:
            e, c = work[0]
            red = None
            for g in basis:
                if self._divides(g[0][0], e):
                    red = g
                    break
            if red is None:
                tail.append(work[0])
                work = work[1:]
                continue
            ge, gc = red[0]
            m = tuple(x - y for x, y in zip(e, ge))
            l = abs(c * gc) // gcd(c, gc)
            a, b = l // c, l // gc
            work = self._merge(self._scale(work, a), self._shift(red, m, -b))
            if a != 1 and tail:
                tail = self._scale(tail, a)
        return self._prim(tail)

    def spoly(self, f: list, g: list) -> list:
        ef, cf = f[0]
        eg, cg = g[0]
        lcm = tuple(max(x, y) for x, y in zip(ef, eg))
        l = abs(cf * cg) // gcd(cf, cg)
        return self._merge(
            self._shift(f, tuple(x - y for x, y in zip(lcm, ef)), l // cf),
            self._shift(g, tuple(x - y for x, y in zip(lcm, eg)), -(l // cg)))

    # -- Buchberger ------------------------------------------------------

    def groebner(self, gens: Iterable[MPoly]) -> list[list]:
        polys = [t for t in (self.to_engine(p) for p in gens) if t]
        if not polys:
            return []
        # Deterministic seeding: smaller leading monomials first.
        polys.sort(key=lambda p: (self.key(p[0][0]), len(p)))
        basis: list[list] = []
        pairs: set[tuple[int, int]] = set()
        for p in polys:
            if len(p[0][0]) == 0 or not any(p[0][0]):
                return [[(tuple([0] * self.n), 1)]]
            basis, pairs = self._update(basis, pairs, p)

        def pair_key(pr):
            i, j = pr
            lcm = tuple(max(x, y) for x, y in
                        zip(basis[i][0][0], basis[j][0][0]))
            return (sum(lcm), self.key(lcm), i, j)

        while pairs:
            best = min(pairs, key=pair_key)
            pairs.discard(best)
            i, j = best
            r = self.reduce_full(self.spoly(basis[i], basis[j]), basis)
            if not r:
                continue
            if not any(r[0][0]):
                return [[(tuple([0] * self.n), 1)]]
            basis, pairs = self._update(basis, pairs, r)
        return self._interreduce(basis)

    def _update(self, basis, pairs, h):
        """Gebauer-Moeller pair update (Buchberger's criteria applied)."""
        m = len(basis)
        lh = h[0][0]
        lms = [g[0][0] for g in basis]

        def lcm(a, b):
            return tuple(max(x, y) for x, y in zip(a, b))

        def product(a, b):
            return tuple(x + y for x, y in zip(a, b))

        # Chain criterion on old pairs.
        kept = set()
        for (i, j) in pairs:
            lij = lcm(lms[i], lms[j])
            if (not self._divides(lh, lij)
                    or lcm(lms[i], lh) == lij
                    or lcm(lms[j], lh) == lij):
                kept.add((i, j))
        # Minimalize the new pairs by their lcm, then drop coprime ones.
        groups: dict[tuple, list[int]] = {}
        for i in range(m):
            groups.setdefault(lcm(lms[i], lh), []).append(i)
        minimal: list[tuple] = []
        for lk in sorted(groups, key=lambda e: (sum(e), self.key(e))):
            if not any(self._divides(prev, lk) for prev in minimal):
                minimal.append(lk)
        for lk in minimal:
            if any(lcm(lms[i], lh) == product(lms[i], lh)
                   for i in groups[lk]):
                continue  # coprime leading terms: s-poly reduces to zero
            kept.add((min(groups[lk]), m))
        return basis + [h], kept

    def _interreduce(self, basis: list[list]) -> list[list]:
        basis = sorted(basis, key=lambda p: self.key(p[0][0]))
        minimal = []
        for p in basis:
            if not any(self._divides(q[0][0], p[0][0]) for q in minimal):
                minimal.append(p)
        changed = True
        while changed:
            changed = False
            for i in range(len(minimal)):
                others = minimal[:i] + minimal[i + 1:]
                r = self.reduce_full(minimal[i], others)
                if r != minimal[i]:
                    minimal[i] = r
                    changed = True
        minimal.sort(key=lambda p: self.key(p[0][0]), reverse=True)
        return minimal


# ---------------------------------------------------------------------------
# Public operations


def buchberger(gens: IdealHandle, order: MonomialOrder = GREVLEX) -> GroebnerBasis:
    """Reduced Groebner basis; deterministic and input-order independent."""
    eng = _Engine(gens.ambient, order)
    raw = eng.groebner(gens.generators)
    polys = tuple(eng.from_engine(p, monic=True) for p in raw)
    return GroebnerBasis(polys, order, gens.ambient)


def normal_form(f: MPoly, gb: GroebnerBasis) -> MPoly:
    """Unique remainder of f modulo a reduced basis; zero iff f is a member."""
    return _nf_with_cofactors(f, gb)[0]


def normal_form_with_cofactors(f: MPoly, gb: GroebnerBasis) -> tuple[MPoly, list[MPoly]]:
    """Normal form plus cofactors c_i with f == sum c_i g_i + remainder."""
    return _nf_with_cofactors(f, gb)


def _nf_with_cofactors(f: MPoly, gb: GroebnerBasis):
    order = gb.order
    f = f.with_order(order)
    gens = [g.with_order(order) for g in gb.generators]
    cof = [MPoly.zero(order) for _ in gens]
    tail: list = []
    work = f
    while not work.is_zero:
        m, c = work.terms[0]
        hit = None
        for idx, g in enumerate(gens):
            if g.leading_monomial().divides(m):
                hit = idx
                break
        if hit is None:
            tail.append((m, c))
            work = MPoly(work.terms[1:], order)
            continue
        g = gens[hit]
        quot_mono = m.divide(g.leading_monomial())
        quot_coeff = c / g.leading_coefficient()
        cof[hit] = cof[hit] + MPoly(((quot_mono, quot_coeff),), order)
        work = work - g.mul_term(quot_mono, quot_coeff)
    return MPoly(tuple(tail), order), cof


def eliminate(gens: IdealHandle, keep: Iterable[VarKey]) -> GroebnerBasis:
    """Reduced basis of the elimination ideal onto the kept variables."""
    keep = frozenset(keep)
    if not keep <= set(gens.ambient):
        raise ValueError("keep set outside the ambient ring")
    front = frozenset(gens.ambient) - keep
    kept_vars = tuple(v for v in gens.ambient if v in keep)
    if not front:
        return buchberger(gens, GREVLEX)
    gb = buchberger(gens, block_order(front))
    filtered = []
    for g in gb.generators:
        if set(g.variables()) <= keep:
            # Block order restricted to back-block monomials is grevlex.
            filtered.append(MPoly(g.terms, GREVLEX))
    return GroebnerBasis(tuple(filtered), GREVLEX, kept_vars)


def restrict_after_elimination(gb: GroebnerBasis,
                               keep: tuple[VarKey, ...]) -> GroebnerBasis:
    """Drop basis elements touching eliminated variables.

    For a reduced basis under a block order whose front blocks cover the
    complement of ``keep``, the surviving elements form the reduced basis of
    the elimination ideal under the order with those front blocks removed.
    """
    keep_set = frozenset(keep)
    removed = frozenset(gb.ambient) - keep_set
    remaining_blocks = []
    for blk in gb.order.blocks:
        blk = blk - removed
        if blk:
            remaining_blocks.append(blk)
    inner = block_order(*remaining_blocks)
    filtered = tuple(MPoly(g.terms, inner) for g in gb.generators
                     if set(g.variables()) <= keep_set)
    return GroebnerBasis(filtered, inner,
                         tuple(v for v in gb.ambient if v in keep_set))


def saturate(gens: IdealHandle, s: MPoly) -> IdealHandle:
    """Saturation (gens : s^infinity) via a fresh inverse variable."""
    if s.is_zero:
        raise ZeroSaturationError("saturation by zero")
    return saturate_many(gens, [s], split_monomials=False)[0]


def saturate_many(gens: IdealHandle, factors: Sequence[MPoly], *,
                  split_monomials: bool = True,
                  inner_blocks: Sequence[Iterable[VarKey]] = ()
                  ) -> tuple[IdealHandle, GroebnerBasis]:
    """Saturate by every factor at once, one inverse variable per factor.

    ``(I : (f.g)^inf) == ((I : f^inf) : g^inf)``, so the combined run equals
    iterated single saturations.  With ``split_monomials`` each factor is
    split into its monomial part (saturation by a product is saturation by
    the individual variables) and its primitive residue, which keeps the
    degrees of the inversion generators small.

    ``inner_blocks`` prescribes extra elimination blocks below the inversion
    variables; quasi-linear systems profit from fronting their top jets,
    which makes leading monomials of independent subsystems coprime.

    Returns the saturated handle together with the reduced basis of the
    saturated ideal (grevlex, or the inner block order when given), read off
    the elimination run for free.
    """
    worklist: list[MPoly] = []
    for f in factors:
        if f.is_zero:
            raise ZeroSaturationError("saturation by zero")
        prim, _ = f.primitive_signed()
        if prim.is_constant:
            continue
        if not split_monomials:
            worklist.append(prim)
            continue
        mono_gcd = _monomial_gcd(prim)
        for v in mono_gcd.variables():
            worklist.append(MPoly.var(v, f.order))
        residue = MPoly(tuple((m.divide(mono_gcd), c) for m, c in prim.terms),
                        prim.order)
        if not residue.is_constant:
            worklist.append(residue)
    # Deduplicate structurally, deterministic order.
    uniq: list[MPoly] = []
    for f in worklist:
        if not any(f.terms == g.terms for g in uniq):
            uniq.append(f)
    uniq.sort(key=lambda f: (f.total_degree(), len(f.terms), str(f)))

    ambient = set(gens.ambient)
    for f in uniq:
        ambient.update(f.variables())
    ambient = tuple(sorted(ambient, key=lambda v: v.rank))
    inner = block_order(*inner_blocks)

    if not uniq:
        gb = buchberger(IdealHandle(gens.generators, ambient), inner)
        handle = IdealHandle(gb.generators, ambient)
        return handle, gb

    aux = [VarKey.of_aux(i) for i in range(len(uniq))]
    inversions = [MPoly.var(t, GREVLEX) * f.with_order(GREVLEX) - 1
                  for t, f in zip(aux, uniq)]
    big = IdealHandle(
        tuple(g.with_order(GREVLEX) for g in gens.generators) + tuple(inversions),
        ambient + tuple(aux))
    outer = block_order(frozenset(aux), *inner_blocks)
    full = buchberger(big, outer)
    gb = restrict_after_elimination(full, ambient)
    return IdealHandle(gb.generators, ambient), gb


def _monomial_gcd(p: MPoly) -> Monomial:
    out = None
    for m, _ in p.terms:
        if out is None:
            out = dict(m.powers)
        else:
            cur = dict(m.powers)
            out = {v: min(e, cur[v]) for v, e in out.items() if v in cur}
        if not out:
            break
    return Monomial.from_map(out or {})


def dimension(gb: GroebnerBasis) -> int:
    """Krull dimension of the quotient ring, from the leading-term staircase.

    The dimension is the size of a largest set S of variables such that no
    leading monomial is supported inside S; variables absent from every
    leading monomial are free and always join S.
    """
    if gb.is_unit_ideal:
        raise EmptyVarietyError("unit ideal has an empty variety")
    supports = []
    for m in gb.leading_monomials():
        supports.append(frozenset(m.variables()))
    constrained = frozenset().union(*supports) if supports else frozenset()
    free = len([v for v in gb.ambient if v not in constrained])

    cache: dict[frozenset, int] = {}

    def best(candidate: frozenset) -> int:
        hit = cache.get(candidate)
        if hit is not None:
            return hit
        blocker = next((s for s in supports if s <= candidate), None)
        if blocker is None:
            out = len(candidate)
        else:
            out = max(best(candidate - {v}) for v in blocker)
        cache[candidate] = out
        return out

    return free + best(frozenset(constrained))

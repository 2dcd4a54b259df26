#!/usr/bin/env python3
"""Derive the level-2 modular polynomial from q-expansions and write the
catalog data file.

The j-invariant has the exact integer q-expansion j = E4^3 / Delta with
E4 = 1 + 240 sum sigma_3(n) q^n and Delta = q prod (1-q^n)^24.  The level-2
modular polynomial is the unique symmetric integer polynomial F(X, Y),
monic of degree 3 in each variable, with F(j(q), j(q^2)) = 0; plugging the
truncated series of j(q) and j(q^2) into the monomials X^i Y^j turns that
identity into an exact linear system for the unknown coefficients, solved
here over the rationals.

Writing the coefficients to ``src/diffalg/data/phi2.txt`` (with the checksum
the loader verifies) makes the data's provenance reproducible:

    python3 scripts/derive_phi2_data.py [--check-only]
"""

from __future__ import annotations

import hashlib
import sys
from fractions import Fraction
from pathlib import Path

PREC = 40  # series terms kept beyond the leading one

DATA_PATH = Path(__file__).resolve().parent.parent / "src" / "diffalg" / "data" / "phi2.txt"


def sigma3(n: int) -> int:
    return sum(d ** 3 for d in range(1, n + 1) if n % d == 0)


def series_mul(a: list[int], b: list[int], prec: int) -> list[int]:
    out = [0] * prec
    for i, ca in enumerate(a):
        if ca == 0 or i >= prec:
            continue
        for j, cb in enumerate(b):
            if i + j >= prec:
                break
            out[i + j] += ca * cb
    return out


def series_inverse(a: list[int], prec: int) -> list[int]:
    # Requires a[0] == 1; the inverse then has integer coefficients.
    assert a[0] == 1
    inv = [0] * prec
    inv[0] = 1
    for n in range(1, prec):
        inv[n] = -sum(a[k] * inv[n - k] for k in range(1, n + 1) if k < len(a))
    return inv


def j_series(prec: int) -> list[int]:
    """Coefficients of q^-1, q^0, q^1, ... of the j-invariant."""
    e4 = [1] + [240 * sigma3(n) for n in range(1, prec + 2)]
    e4cubed = series_mul(series_mul(e4, e4, prec + 2), e4, prec + 2)
    # Delta / q = prod (1 - q^n)^24
    delta_over_q = [1] + [0] * (prec + 1)
    for n in range(1, prec + 2):
        factor = [0] * (prec + 2)
        factor[0] = 1
        if n < prec + 2:
            factor[n] = -1
        for _ in range(24):
            delta_over_q = series_mul(delta_over_q, factor, prec + 2)
    return series_mul(e4cubed, series_inverse(delta_over_q, prec + 2), prec + 2)


class Laurent:
    """Exact truncated Laurent series with explicit validity tracking.

    ``coeffs[i]`` is the coefficient of ``q**(offset + i)``; coefficients are
    exact up to and including ``q**valid_to``, unknown beyond.
    """

    def __init__(self, offset: int, coeffs: list[int], valid_to: int):
        self.offset = offset
        self.coeffs = coeffs[: valid_to - offset + 1]
        self.valid_to = valid_to

    @staticmethod
    def of_j(prec: int = PREC) -> "Laurent":
        return Laurent(-1, j_series(prec), prec)

    def rescale_q2(self) -> "Laurent":
        out = [0] * (2 * len(self.coeffs) - 1)
        for i, c in enumerate(self.coeffs):
            out[2 * i] = c
        return Laurent(2 * self.offset, out, 2 * self.valid_to)

    def mul(self, other: "Laurent") -> "Laurent":
        # Unknown high-order terms of one factor only feed powers above
        # min(v1 + o2, v2 + o1), so the product is exact up to that power.
        off = self.offset + other.offset
        valid = min(self.valid_to + other.offset, other.valid_to + self.offset)
        n = valid - off + 1
        return Laurent(off, series_mul(self.coeffs, other.coeffs, max(n, 0)),
                       valid)

    def coefficient(self, power: int) -> int:
        if power > self.valid_to:
            raise ValueError(f"coefficient of q^{power} beyond truncation")
        idx = power - self.offset
        if 0 <= idx < len(self.coeffs):
            return self.coeffs[idx]
        return 0


def monomial_series(prec: int = PREC) -> dict[tuple[int, int], Laurent]:
    """Series of j(q)^i * j(q^2)^j for all 0 <= i, j <= 3."""
    j1 = Laurent.of_j(prec)
    j2 = Laurent.of_j(prec).rescale_q2()
    one = Laurent(0, [1], prec)
    pow1 = [one]
    pow2 = [one]
    for _ in range(3):
        pow1.append(pow1[-1].mul(j1))
        pow2.append(pow2[-1].mul(j2))
    return {(i, j): pow1[i].mul(pow2[j])
            for i in range(4) for j in range(4)}


def solve_phi2() -> dict[tuple[int, int], int]:
    """Coefficients of the level-2 modular polynomial, solved exactly."""
    basis = monomial_series()
    top = min(s.valid_to for s in basis.values())

    # Unknowns: c[i][j] for 0 <= i, j <= 2 with c[i][j] == c[j][i];
    # the X^3 and Y^3 coefficients are pinned to 1 by monicity.
    unknowns = [(i, j) for i in range(3) for j in range(i, 3)]
    rows = []
    rhs = []
    for power in range(-6, top + 1):
        row = []
        for (i, j) in unknowns:
            c = basis[(i, j)].coefficient(power)
            if i != j:
                c += basis[(j, i)].coefficient(power)
            row.append(Fraction(c))
        rows.append(row)
        rhs.append(Fraction(-(basis[(3, 0)].coefficient(power)
                              + basis[(0, 3)].coefficient(power))))

    sol = gauss_solve(rows, rhs, len(unknowns))
    out: dict[tuple[int, int], int] = {(3, 0): 1, (0, 3): 1}
    for (i, j), val in zip(unknowns, sol):
        assert val.denominator == 1, "non-integer modular coefficient"
        out[(i, j)] = int(val)
        out[(j, i)] = int(val)
    return out


def gauss_solve(rows: list[list[Fraction]], rhs: list[Fraction],
                ncols: int) -> list[Fraction]:
    m = [row[:] + [b] for row, b in zip(rows, rhs)]
    pivots = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if p is None:
            raise RuntimeError("underdetermined system")
        m[r], m[p] = m[p], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
    for i in range(r, len(m)):
        if m[i][ncols] != 0:
            raise RuntimeError("inconsistent system")
    return [m[i][ncols] for i in range(ncols)]


def render_data(coeffs: dict[tuple[int, int], int]) -> str:
    lines = ["vars X Y"]
    for (i, j) in sorted(coeffs):
        lines.append(f"{i} {j} {coeffs[(i, j)]}")
    body = "\n".join(lines) + "\n"
    digest = hashlib.sha256(body.encode("utf-8")).hexdigest()
    return body + f"checksum {digest}\n"


def main() -> int:
    coeffs = solve_phi2()
    # Sanity check: the defining identity must vanish through the truncation.
    basis = monomial_series()
    top = min(s.valid_to for s in basis.values())
    for power in range(-6, top + 1):
        total = sum(c * basis[(i, j)].coefficient(power)
                    for (i, j), c in coeffs.items())
        assert total == 0, f"residual at q^{power}"

    text = render_data(coeffs)
    if "--check-only" in sys.argv:
        on_disk = DATA_PATH.read_text()
        if on_disk != text:
            print("MISMATCH: shipped data file differs from derivation")
            return 1
        print(f"OK: {DATA_PATH} matches the q-expansion derivation")
        return 0
    DATA_PATH.parent.mkdir(parents=True, exist_ok=True)
    DATA_PATH.write_text(text)
    print(f"wrote {DATA_PATH}")
    for (i, j) in sorted(coeffs):
        print(f"  X^{i} Y^{j}: {coeffs[(i, j)]}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())

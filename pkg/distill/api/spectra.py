"""
Spectral classification of rational matrices without irrational eigenvalues.

Roots of unity are found by trial division with cyclotomic polynomials, the
modulus-below-one part is certified by a contracting matrix power.
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import lcm
from os import environ
from typing import Dict, List, Optional, Sequence, Tuple
from sympy import QQ, Poly, resultant, symbols
from distill.utils.conf_reader import config_man
from .model import DecayError, DocumentError, InvariantError, Result, Ok, Err
from .ratlin import (
    RatMatrix,
    RatPoly,
    charpoly,
    inf_norm,
    induced_inf_norm,
    poly_at_matrix,
    rank,
)

log = logging.getLogger(__name__)
X, Y = symbols("x y")


@lru_cache(maxsize=None)
def cyclotomic(d: int) -> RatPoly:
    """
    The d-th cyclotomic polynomial

    >>> str(cyclotomic(6))
    'x^2 - x + 1'
    """

    if d <= 0:
        raise ValueError("The argument to cyclotomic must be positive.")

    # x^d - 1 divided by the cyclotomic polynomials of the proper divisors
    poly = RatPoly.monomial(d) - 1
    for e in (e for e in range(1, d) if d % e == 0):
        poly = poly / cyclotomic(e)

    return poly


def totient(n: int) -> int:
    result = n
    p = 2
    m = n
    while p * p <= m:
        if m % p == 0:
            while m % p == 0:
                m //= p
            result -= result // p
        p += 1

    if m > 1:
        result -= result // m

    return result


def candidate_orders(k: int) -> List[int]:
    """
    All d with totient(d) <= k, ascending
    """

    if k < 1:
        return []

    # totient(d) >= sqrt(d / 2), so nothing beyond 2k^2 qualifies
    return [d for d in range(1, 2 * k * k + 3) if totient(d) <= k]


@dataclass(frozen=True)
class SpectralProfile:
    charpoly: RatPoly
    zero_mult: int
    cyclo_factors: Dict[int, int] = field(default_factory=dict)
    period_c: int = 1
    dyn_dim: int = 0
    residual: RatPoly = field(default_factory=lambda: RatPoly([1]))

    def to_data(self) -> dict:
        return {
            "charpoly": self.charpoly.to_strings(),
            "charpoly_text": str(self.charpoly),
            "zero_mult": self.zero_mult,
            "cyclo_factors": {str(d): m for d, m in sorted(self.cyclo_factors.items())},
            "period_c": self.period_c,
            "dyn_dim": self.dyn_dim,
            "residual": str(self.residual),
        }


def _divide_out(p: RatPoly, f: RatPoly) -> Tuple[int, RatPoly]:
    mult = 0
    while p.degree >= f.degree:
        quo, rem = divmod(p, f)
        if not rem.is_zero():
            break
        p = quo
        mult += 1

    return mult, p


def analyze(m: RatMatrix) -> SpectralProfile:
    if not m.is_square:
        raise ValueError(f"Cannot analyze a {m.rows}x{m.cols} matrix")

    chi = charpoly(m)
    ell = chi.trailing_zeros()
    rest = chi.shift_down(ell)

    factors: Dict[int, int] = {}
    for d in candidate_orders(m.rows):
        mult, rest = _divide_out(rest, cyclotomic(d))
        if mult:
            factors[d] = mult

    period = lcm(*factors) if factors else 1
    unit = sum(totient(d) * mult for d, mult in factors.items())
    profile = SpectralProfile(
        charpoly=chi,
        zero_mult=ell,
        cyclo_factors=factors,
        period_c=period,
        dyn_dim=chi.degree - ell - unit,
        residual=rest,
    )
    log.debug("spectrum of %dx%d matrix: %s", m.rows, m.cols, profile.to_data())
    return profile


def stochastic_violations(m: RatMatrix) -> List[str]:
    """
    Reasons why m is not column-stochastic, empty when it is
    """

    problems = []
    if not m.is_square:
        problems.append(f"matrix is {m.rows}x{m.cols}, not square")
        return problems

    for j in range(m.cols):
        col = m.column(j)
        negative = [i for i, x in enumerate(col) if x < 0]
        if negative:
            problems.append(f"column {j} has negative entries at rows {negative}")
        total = sum(col, Fraction(0))
        if total != 1:
            problems.append(f"column {j} sums to {total}")

    return problems


def companion(p: RatPoly) -> RatMatrix:
    p = p.monic()
    n = p.degree
    rows = []
    for i in range(n):
        row = [Fraction(int(j == i - 1)) for j in range(n - 1)]
        rows.append(row + [-p.coeffs[i]])

    return RatMatrix(rows, n)


def decay_cap(k: int) -> int:
    if "DISTILL_MCAP" in environ:
        value = environ["DISTILL_MCAP"]
        try:
            return max(int(value), 1)
        except ValueError:
            raise DocumentError(f"not an integer: {value!r}", "DISTILL_MCAP") from None

    return max(config_man.get("MCAP_FACTOR") * k, 1)


def contracting_power(a: RatMatrix, cap: int) -> Optional[Tuple[int, RatMatrix]]:
    """
    Smallest m <= cap with ||a^m||_inf < 1, together with a^m
    """

    power = a
    for m in range(1, cap + 1):
        if induced_inf_norm(power) < 1:
            return m, power
        power = power @ a

    return None


@dataclass(frozen=True)
class DecayCertificate:
    block_m: int
    block_norm: Fraction
    prefix_bound: Fraction
    n0: int

    def to_data(self) -> dict:
        return {
            "block_m": self.block_m,
            "block_norm": str(self.block_norm),
            "prefix_bound": str(self.prefix_bound),
            "n0": self.n0,
        }


def decay_bound(
    a: RatMatrix, v: Sequence[Fraction], eps_sq: Fraction, m_cap: Optional[int] = None
) -> DecayCertificate:
    """
    n0 with ||a^n v||_2 < sqrt(eps_sq) for every n >= n0.

    Writing n = qm + r, ||a^n v||_inf <= ||a^m||^q * max_r ||a^r v||_inf and
    ||.||_2^2 <= k * ||.||_inf^2, so the test is done on squares.
    """

    if eps_sq <= 0:
        raise ValueError("eps_sq must be positive")

    k = a.rows
    if k == 0:
        return DecayCertificate(1, Fraction(0), Fraction(0), 0)

    cap = m_cap if m_cap is not None else decay_cap(k)
    found = contracting_power(a, cap)
    if found is None:
        raise DecayError(
            f"no power a^m with m <= {cap} has infinity norm below 1; "
            "the matrix has an eigenvalue of modulus >= 1 or decays too slowly"
        )

    m, power = found
    norm = induced_inf_norm(power)

    prefix = Fraction(0)
    w = tuple(v)
    for _ in range(m):
        prefix = max(prefix, inf_norm(w))
        w = a @ w

    q = 0
    bound = prefix * prefix * k
    while bound >= eps_sq:
        bound *= norm * norm
        q += 1

    cert = DecayCertificate(m, norm, prefix, q * m)
    log.debug("decay certificate: %s", cert.to_data())
    return cert


def validate_stochastic_spectrum(
    m: RatMatrix, profile: Optional[SpectralProfile] = None
) -> List[Result]:
    """
    Check the unit-circle structure every stochastic matrix must have
    """

    problems = stochastic_violations(m)
    if problems:
        raise InvariantError("not column-stochastic: " + "; ".join(problems))

    profile = profile or analyze(m)
    n = m.rows
    report: List[Result] = []

    if profile.cyclo_factors.get(1, 0) >= 1:
        report.append(Ok("eigenvalue 1", f"multiplicity {profile.cyclo_factors[1]}"))
    else:
        report.append(Err("eigenvalue 1", "x - 1 does not divide the characteristic polynomial"))

    for d, mult in sorted(profile.cyclo_factors.items()):
        expected = totient(d) * mult
        geometric = n - rank(poly_at_matrix(cyclotomic(d), m))
        name = f"simple roots of unity of order {d}"
        if geometric == expected:
            report.append(Ok(name, f"kernel dimension {geometric}"))
        else:
            report.append(Err(name, f"kernel dimension {geometric}, expected {expected}"))

    residual = profile.residual
    if residual.degree <= 0:
        report.append(Ok("decay of the remaining factor", "no eigenvalues left"))
    else:
        cap = decay_cap(residual.degree)
        found = contracting_power(companion(residual), cap)
        if found is None:
            report.append(
                Err("decay of the remaining factor", f"{residual}: no contracting power up to {cap}")
            )
        else:
            report.append(Ok("decay of the remaining factor", f"{residual}: contracting at power {found[0]}"))

    return report


def power_charpoly(p: RatPoly, c: int) -> RatPoly:
    """
    Monic polynomial whose roots are the c-th powers of the roots of p,
    the resultant Res_x(p(x), x^c - y) in y
    """

    if c < 1:
        raise ValueError("c must be positive")

    if p.degree <= 0:
        return RatPoly([1])

    res = resultant(p.to_sympy(X).as_expr(), X**c - Y, X)
    return RatPoly.from_sympy(Poly(res, Y, domain=QQ)).monic()

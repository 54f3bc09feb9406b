"""Binomial-factorial basis calculus for r-analytic functions on Z_p^n.

The basis function attached to a multi-index i at radius parameter r is
    e_i^{(r)}(x) = prod_j floor(p^{-r} i_j)! * binom(x_j, i_j),
integral-valued, and the inclusion of radius-r functions into radius-r'
functions (r' > r) rescales e_i^{(r)} by the factorial quotient
    prod_j floor(p^{-r} i_j)! / floor(p^{-r'} i_j)! .
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial

from .padic import PAdicNum, legendre_valuation, val_frac


AmiceIndex = tuple[int, ...]

DEFAULT_TRUNCATION = 16


def floor_p_pow(n: int, p: int, r: Fraction | int) -> int:
    """floor(n / p^r) for rational r >= 0, computed exactly in integers.

    For r = a/b the condition m <= n p^{-r} is m^b p^a <= n^b.
    """
    if n < 0:
        raise ValueError("n must be nonnegative")
    r = Fraction(r)
    if r < 0:
        raise ValueError("r must be nonnegative")
    if r.denominator == 1:
        return n // p ** r.numerator
    a, b = r.numerator, r.denominator
    lo, hi = 0, n
    while lo < hi:
        mid = (lo + hi + 1) // 2
        if mid ** b * p ** a <= n ** b:
            lo = mid
        else:
            hi = mid - 1
    return lo


def basis_scaling_valuation(i: AmiceIndex | int, r, r2, p: int) -> int:
    """Valuation of the factor carrying e_i^{(r)} into the radius-r2 basis.

    Computed two independent ways which must agree:
      * factorial quotient  v_p(prod floor(i_j/p^r)!) - v_p(prod floor(i_j/p^{r2})!)
      * the double floor sum  sum_j sum_{t>0} floor(i_j/p^{r+t}) - floor(i_j/p^{r2+t})
    """
    r, r2 = Fraction(r), Fraction(r2)
    if not (r2 > r > 0):
        raise ValueError("need r2 > r > 0")
    idx = (i,) if isinstance(i, int) else tuple(i)
    via_factorials = 0
    via_floors = 0
    for ij in idx:
        via_factorials += legendre_valuation(floor_p_pow(ij, p, r), p)
        via_factorials -= legendre_valuation(floor_p_pow(ij, p, r2), p)
        t = 1
        while True:
            a = floor_p_pow(ij, p, r + t)
            b = floor_p_pow(ij, p, r2 + t)
            if a == 0 and b == 0:
                break
            via_floors += a - b
            t += 1
    if via_factorials != via_floors:
        raise ArithmeticError(
            f"valuation routes disagree at i={idx}: {via_factorials} vs {via_floors}")
    return via_factorials


def basis_factorial(i: AmiceIndex | int, r, p: int) -> int:
    """prod_j floor(i_j / p^r)!  (the normalizing factorial of e_i^{(r)})."""
    idx = (i,) if isinstance(i, int) else tuple(i)
    out = 1
    for ij in idx:
        out *= factorial(floor_p_pow(ij, p, r))
    return out


def eval_basis_function(i: AmiceIndex, r, p: int, x: tuple[int, ...]) -> int:
    """e_i^{(r)} at a nonnegative integer point; always an integer."""
    out = basis_factorial(i, r, p)
    for ij, xj in zip(i, x):
        out *= comb(xj, ij)
    return out


def compute_r_weight(k, p: int) -> int:
    """Minimal radius parameter attached to an integer weight: always 0.

    The weight character sends (1+p, 1+p) to (1+p)^{2k}, and
    v_p((1+p)^{2k} - 1) = 1 + v_p(2k) >= 1 > 1/(p^r (p-1)) already at r = 0.
    (We measure the distance to 1; the unit itself has absolute value 1, under
    which no radius would ever qualify.)
    """
    if not isinstance(k, int):
        raise TypeError(f"unsupported weight {k!r}: only integer weights are handled")
    if k == 0:
        return 0
    v = 1 + val_frac(Fraction(2 * k), p) if (2 * k) % p == 0 else 1
    # v >= 1 > 1/(p^0 (p-1)) for p >= 3, so r = 0 works
    assert v >= 1
    return 0


@dataclass
class AnalyticCoeffVector:
    """Coefficients of an r-analytic function in the basis e_i^{(r)}, i <= N."""

    p: int
    r: Fraction
    truncation: int
    coeffs: dict[AmiceIndex, PAdicNum]

    def __post_init__(self):
        self.r = Fraction(self.r)
        for i in self.coeffs:
            if any(ij > self.truncation or ij < 0 for ij in i):
                raise ValueError(f"index {i} outside truncation {self.truncation}")

    def nvars(self) -> int:
        return len(next(iter(self.coeffs))) if self.coeffs else 1

    def is_integral(self) -> bool:
        """Membership in the unit-ball model: all coefficient valuations >= 0."""
        return all(c.is_zero or c.valuation >= 0 for c in self.coeffs.values())

    def embed(self, r2) -> "AnalyticCoeffVector":
        """Rescale into the radius-r2 basis; coefficients pick up p-powers."""
        r2 = Fraction(r2)
        if not r2 > self.r:
            raise ValueError("need r2 > r")
        out: dict[AmiceIndex, PAdicNum] = {}
        for i, c in self.coeffs.items():
            v = basis_scaling_valuation(i, self.r, r2, self.p)
            shifted = c.shift(v)
            if shifted.precision < 1:
                raise ArithmeticError(f"precision exhausted rescaling index {i}")
            out[i] = shifted
        return AnalyticCoeffVector(self.p, r2, self.truncation, out)


def embed_cr_into_crprime(f: AnalyticCoeffVector, r2) -> AnalyticCoeffVector:
    return f.embed(r2)

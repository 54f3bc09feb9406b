"""Exact local arithmetic: truncated p-adic numbers, valuations, splitting data.

Everything here is integer/rational exact.  A PAdicNum is a triple
(valuation, unit, precision) representing  p^valuation * unit  known modulo
p^(valuation + precision); arithmetic never silently increases the claimed
precision.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, isqrt


# ---------------------------------------------------------------------------
# elementary number theory
# ---------------------------------------------------------------------------

def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for q in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def val_int(n: int, p: int) -> int:
    """p-adic valuation of a nonzero integer."""
    if n == 0:
        raise ValueError("valuation of 0 is +infinity")
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def val_frac(x: Fraction | int, p: int) -> int:
    x = Fraction(x)
    if x == 0:
        raise ValueError("valuation of 0 is +infinity")
    return val_int(x.numerator, p) - val_int(x.denominator, p)


def legendre_valuation(n: int, p: int) -> int:
    """v_p(n!) by the floor sum over powers of p."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    total, q = 0, p
    while q <= n:
        total += n // q
        q *= p
    return total


def kronecker_symbol(a: int, n: int) -> int:
    """Kronecker symbol (a|n) for n > 0."""
    if n <= 0:
        raise ValueError("only positive n supported")
    a %= n if n % 2 == 1 else 8 * n
    result = 1
    a0 = a
    m = n
    while m % 2 == 0:
        m //= 2
        if a0 % 2 == 0:
            return 0
        if a0 % 8 in (3, 5):
            result = -result
    a0 %= m
    while a0 != 0:
        while a0 % 2 == 0:
            a0 //= 2
            if m % 8 in (3, 5):
                result = -result
        a0, m = m % a0, a0
        if a0 % 4 == 3 and m % 4 == 3:
            result = -result
    return result if m == 1 else 0


def is_fundamental_discriminant(d: int) -> bool:
    if d == 0 or d == 1:
        return False
    def squarefree(m: int) -> bool:
        m = abs(m)
        i = 2
        while i * i <= m:
            if m % (i * i) == 0:
                return False
            i += 1
        return True
    if d % 4 == 1:
        return squarefree(d)
    if d % 4 == 0:
        m = d // 4
        return m % 4 in (2, 3) and squarefree(m)
    return False


def kronecker_split(disc_K: int, p: int) -> str:
    """Splitting type ('split' | 'inert' | 'ramified') of p in Q(sqrt(disc_K))."""
    if not is_fundamental_discriminant(disc_K):
        raise ValueError(f"{disc_K} is not a fundamental discriminant")
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if p == 2:
        sym = kronecker_symbol(disc_K, 2) if disc_K % 2 else 0
        # (d|2) via the standard rule on d mod 8
        if disc_K % 2 == 0:
            return "ramified"
        sym = 1 if disc_K % 8 == 1 else -1
    else:
        sym = kronecker_symbol(disc_K % p, p)
    return {1: "split", -1: "inert", 0: "ramified"}[sym]


@dataclass(frozen=True)
class PrimeContext:
    """An odd prime p split in the imaginary quadratic field of discriminant disc_K."""

    p: int
    disc_K: int

    def __post_init__(self):
        if self.p < 3 or not is_prime(self.p):
            raise ValueError(f"p must be an odd prime, got {self.p}")
        if self.disc_K >= 0:
            raise ValueError("disc_K must be negative (imaginary quadratic)")
        if kronecker_split(self.disc_K, self.p) != "split":
            raise ValueError(f"p={self.p} does not split in the field of discriminant {self.disc_K}")

    @property
    def split_check(self) -> bool:
        return True


# ---------------------------------------------------------------------------
# truncated p-adic numbers
# ---------------------------------------------------------------------------

DEFAULT_PRECISION = 30


class PAdicNum:
    """p^valuation * unit, with unit known mod p^precision.

    The zero-at-precision element is stored with unit == 0; its `valuation`
    field is a lower bound for the true valuation (the number is O(p^valuation)).
    """

    __slots__ = ("p", "valuation", "unit", "precision")

    def __init__(self, p: int, valuation: int, unit: int, precision: int = DEFAULT_PRECISION):
        if precision < 1:
            raise ValueError("precision must be >= 1")
        unit %= p ** precision
        if unit == 0:
            self.p, self.valuation, self.unit, self.precision = p, valuation + precision, 0, precision
            return
        shift = val_int(unit, p)
        if shift:
            # keep unit coprime to p; absorbing powers costs precision
            unit //= p ** shift
            precision -= shift
            valuation += shift
            if precision < 1:
                self.p, self.valuation, self.unit, self.precision = p, valuation + precision, 0, max(precision, 1)
                self.precision = 1
                return
            unit %= p ** precision
        self.p, self.valuation, self.unit, self.precision = p, valuation, unit, precision

    # -- constructors -------------------------------------------------------
    @classmethod
    def zero(cls, p: int, valuation_bound: int = 0, precision: int = DEFAULT_PRECISION) -> "PAdicNum":
        z = cls.__new__(cls)
        z.p, z.valuation, z.unit, z.precision = p, valuation_bound, 0, precision
        return z

    @classmethod
    def from_rational(cls, x: Fraction | int, p: int, precision: int = DEFAULT_PRECISION) -> "PAdicNum":
        x = Fraction(x)
        if x == 0:
            return cls.zero(p, precision, precision)
        v = val_frac(x, p)
        num = x.numerator // p ** max(val_int(x.numerator, p), 0)
        den = x.denominator // p ** max(val_int(x.denominator, p), 0)
        mod = p ** precision
        unit = num * pow(den, -1, mod) % mod
        return cls(p, v, unit, precision)

    # -- predicates ----------------------------------------------------------
    @property
    def is_zero(self) -> bool:
        return self.unit == 0

    def known_mod(self) -> int:
        """The number is known modulo p^known_mod()."""
        return self.valuation + (0 if self.is_zero else self.precision)

    # -- arithmetic ----------------------------------------------------------
    def _check(self, other: "PAdicNum"):
        if self.p != other.p:
            raise ValueError("prime mismatch")

    def __add__(self, other: "PAdicNum") -> "PAdicNum":
        self._check(other)
        p = self.p
        if self.is_zero and other.is_zero:
            return PAdicNum.zero(p, min(self.valuation, other.valuation), min(self.precision, other.precision))
        known = min(self.valuation + (self.precision if not self.is_zero else 0),
                    other.valuation + (other.precision if not other.is_zero else 0))
        if self.is_zero:
            known = min(self.valuation, other.known_mod())
            a, v = other.unit, other.valuation
            if v >= known:
                return PAdicNum.zero(p, known, other.precision)
            return PAdicNum(p, v, a % p ** (known - v), known - v)
        if other.is_zero:
            return other.__add__(self)
        v = min(self.valuation, other.valuation)
        known = min(self.known_mod(), other.known_mod())
        if known <= v:
            return PAdicNum.zero(p, known, min(self.precision, other.precision))
        mod = p ** (known - v)
        s = (self.unit * p ** (self.valuation - v) + other.unit * p ** (other.valuation - v)) % mod
        if s == 0:
            return PAdicNum.zero(p, known, min(self.precision, other.precision))
        return PAdicNum(p, v, s, known - v)

    def __neg__(self) -> "PAdicNum":
        if self.is_zero:
            return self
        return PAdicNum(self.p, self.valuation, -self.unit % self.p ** self.precision, self.precision)

    def __sub__(self, other: "PAdicNum") -> "PAdicNum":
        return self + (-other)

    def __mul__(self, other: "PAdicNum") -> "PAdicNum":
        self._check(other)
        p = self.p
        prec = min(self.precision, other.precision)
        if self.is_zero or other.is_zero:
            return PAdicNum.zero(p, self.valuation + other.valuation, prec)
        return PAdicNum(p, self.valuation + other.valuation,
                        self.unit * other.unit % p ** prec, prec)

    def inverse(self) -> "PAdicNum":
        if self.is_zero:
            raise ZeroDivisionError("inverse of zero-at-precision")
        mod = self.p ** self.precision
        return PAdicNum(self.p, -self.valuation, pow(self.unit, -1, mod), self.precision)

    def shift(self, n: int) -> "PAdicNum":
        """Multiply by p^n."""
        if self.is_zero:
            return PAdicNum.zero(self.p, self.valuation + n, self.precision)
        return PAdicNum(self.p, self.valuation + n, self.unit, self.precision)

    # -- comparisons / display ----------------------------------------------
    def congruent(self, other: "PAdicNum") -> bool:
        """Equality up to the joint known precision."""
        d = self - other
        return d.is_zero

    def __repr__(self):
        if self.is_zero:
            return f"O({self.p}^{self.valuation})"
        return f"{self.p}^{self.valuation} * {self.unit} mod {self.p}^{self.precision}"

    def serialize(self) -> str:
        if self.is_zero:
            return f"O({self.p}^{self.valuation})"
        return f"{self.p}^{self.valuation} * {self.unit} mod {self.p}^{self.precision}"


# ---------------------------------------------------------------------------
# Hecke polynomial root data (no root extraction)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class QuadRootPair:
    """Symmetric-function data of X^2 - trace X + norm."""

    trace: Fraction
    norm: Fraction

    @property
    def discriminant(self) -> Fraction:
        return self.trace * self.trace - 4 * self.norm

    @property
    def irreducible_over_R(self) -> bool:
        return self.discriminant < 0

    @property
    def degenerate(self) -> bool:
        return self.discriminant == 0

    def power_sum(self, n: int) -> Fraction:
        """alpha^n + beta^n via the Newton recursion."""
        if n == 0:
            return Fraction(2)
        s_prev, s = Fraction(2), self.trace
        for _ in range(n - 1):
            s_prev, s = s, self.trace * s - self.norm * s_prev
        return s

    def ratio_sum(self) -> Fraction:
        """alpha/beta + beta/alpha = (trace^2 - 2 norm)/norm."""
        if self.norm == 0:
            raise ZeroDivisionError("norm is zero")
        return (self.trace * self.trace - 2 * self.norm) / self.norm


def hecke_poly_rootdata(lam: Fraction | int, q: int, k: int) -> QuadRootPair:
    """Root data for X^2 - lam X + q^(k+1)."""
    if q < 2:
        raise ValueError("q must be >= 2")
    if k < 0:
        raise ValueError("k must be >= 0")
    return QuadRootPair(Fraction(lam), Fraction(q) ** (k + 1))


def parse_rational(s) -> Fraction:
    """Accept int, float-free strings 'a/b' or 'a'."""
    if isinstance(s, int):
        return Fraction(s)
    if isinstance(s, Fraction):
        return s
    if isinstance(s, str):
        return Fraction(s.strip())
    raise TypeError(f"cannot parse rational from {type(s)}")


def format_rational(x: Fraction) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}" if x.denominator != 1 else f"{x.numerator}"

"""Adjoint L-function Euler factors, the archimedean factor, the index
prefactor, the non-criticality predicate, and the assembled value formula.

Roots of Hecke polynomials are never extracted; every Euler factor runs
through the symmetric ratio t = (a^2 - 2 q^(k+1)) / q^(k+1) so that
    (1 - (alpha/beta) x)(1 - (beta/alpha) x) = 1 - t x + x^2.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial

import mpmath

from .padic import is_prime, kronecker_split


mpmath.mp.dps = 60


@dataclass(frozen=True)
class EulerData:
    """Per-prime-ideal Hecke data for the degree-3 adjoint factor."""

    label: str
    q: int                      # residue cardinality (prime power)
    a: Fraction                 # Hecke eigenvalue
    k: int                      # weight

    def __post_init__(self):
        if not _is_prime_power(self.q):
            raise ValueError(f"residue cardinality {self.q} is not a prime power")

    @property
    def t(self) -> Fraction:
        """alpha/beta + beta/alpha = (a^2 - 2 q^(k+1)) / q^(k+1)."""
        qk1 = Fraction(self.q) ** (self.k + 1)
        return (self.a * self.a - 2 * qk1) / qk1

    @property
    def ramanujan_consistent(self) -> bool:
        return abs(self.t) <= 2


def _is_prime_power(q: int) -> bool:
    if q < 2:
        return False
    for ell in range(2, q + 1):
        if q % ell == 0:
            while q % ell == 0:
                q //= ell
            return q == 1 and is_prime(ell)
    return False


class EulerPole(ZeroDivisionError):
    def __init__(self, which: str):
        super().__init__(f"Euler factor has a pole: subfactor {which} vanishes")
        self.which = which


def euler_factor(ed: EulerData, s: float) -> float:
    """((1-x)(1 - t x + x^2))^{-1} at x = q^{-s}; requires x < 1."""
    x = float(ed.q) ** (-s)
    if x >= 1:
        raise ValueError("need q^-s < 1")
    t = float(ed.t)
    lin = 1.0 - x
    quad = 1.0 - t * x + x * x
    if lin == 0.0:
        raise EulerPole("1 - q^-s")
    if quad == 0.0:
        raise EulerPole("1 - t q^-s + q^-2s")
    return 1.0 / (lin * quad)


@dataclass
class PartialLValue:
    value: float
    tail_log_bound: float        # |log tail| <= this; inf when not effective
    bound_B: int
    used: int
    missing_ideals: list[str]


def partial_adjoint_l(eigendata: list[EulerData], s: float, bound: int,
                      disc_K: int | None = None) -> PartialLValue:
    """Partial Euler product over the ideals with q <= bound, with a crude
    tail bound under |t| <= 2 for the omitted ideals.

    Tail model (ours, documented): each omitted factor F satisfies
        (1-x)^{-1}(1+x)^{-2} <= F <= (1-x)^{-3},  x = q^{-s},
    and each rational prime contributes at most two ideals of norm >= that
    prime, so |log tail| <= 3 * 2 * sum_{n > bound} n^{-s} <= 6 (B^(1-s)/(s-1)
    + B^(-s)) for s > 1.  At s = 1 the bound diverges and we report +inf.
    """
    value = 1.0
    used = 0
    seen = set()
    for ed in sorted(eigendata, key=lambda e: (e.q, e.label)):
        if ed.label in seen:
            raise ValueError(f"duplicate ideal label {ed.label}")
        seen.add(ed.label)
        if ed.q <= bound:
            value *= euler_factor(ed, s)
            used += 1
    if s > 1:
        B = max(bound, 1)
        tail = 6.0 * (B ** (1 - s) / (s - 1) + B ** (-s))
    else:
        tail = float("inf")
    missing = []
    if disc_K is not None:
        have = {ed.label for ed in eigendata if ed.q <= bound}
        ell = 2
        while ell <= bound:
            if is_prime(ell):
                typ = kronecker_split(disc_K, ell)
                if typ == "split":
                    expect = [f"{ell}a", f"{ell}b"]
                    need_q = ell
                elif typ == "inert":
                    expect, need_q = [f"{ell}"], ell * ell
                else:
                    expect, need_q = [f"{ell}"], ell
                if need_q <= bound:
                    for lab in expect:
                        if lab not in have:
                            missing.append(lab)
            ell += 1
    return PartialLValue(value, tail, bound, used, missing)


# ---------------------------------------------------------------------------
# the archimedean factor
# ---------------------------------------------------------------------------

@dataclass
class ArchFactor:
    """Exact (rational, pi-power) value with a high-precision float shadow."""

    rational: Fraction
    pi_exponent: int

    @property
    def value(self) -> mpmath.mpf:
        return mpmath.mpf(self.rational.numerator) / self.rational.denominator \
            * mpmath.pi ** self.pi_exponent

    def __float__(self) -> float:
        return float(self.value)

    def is_zero(self) -> bool:
        return self.rational == 0


class TableIndexError(ValueError):
    pass


def _a_table_primary(k: int, n: int) -> Fraction:
    """The three-case diagonal coefficient table at weight k, index n.

    Supported on |n| <= k+1; the three cases tile that range exactly.
    """
    if abs(n) > k + 1:
        return Fraction(0)
    if -k + 1 <= n <= k - 1:
        sgn = 1 if n % 2 == 0 else -1
        return (Fraction((2 * k * k + k) * comb(2 * k, k), factorial(k) ** 2)
                * sgn * factorial(k - n - 1) * factorial(k + n - 1))
    if n == k + 1 or n == -k - 1:
        return Fraction((2 * k + 1) * (k + 1) * (-1) ** (k + 1) * comb(2 * k, k) ** 2)
    if n == k or n == -k:
        return Fraction((-1) ** k * comb(2 * k, k) ** 2)
    raise TableIndexError(f"index n={n} escapes the case analysis at weight {k}")


def _a_table_secondary(k: int, n: int) -> Fraction:
    """Independent second transcription of the same table (rearranged forms;
    written separately so transcription slips cannot cancel)."""
    if abs(n) > k + 1:
        return Fraction(0)
    m = abs(n)
    if m <= k - 1:
        # k(2k+1) * C(2k,k) / (k!)^2 * (-1)^n (k-n-1)! (k+n-1)!
        lead = Fraction(k * (2 * k + 1) * factorial(2 * k), factorial(k) ** 4)
        sgn = 1 if n % 2 == 0 else -1
        return lead * sgn * factorial(k - n - 1) * factorial(k + n - 1)
    if m == k:
        c = Fraction(factorial(2 * k), factorial(k) ** 2)
        return c * c if k % 2 == 0 else -c * c
    if m == k + 1:
        c = Fraction(factorial(2 * k), factorial(k) ** 2)
        base = c * c * (2 * k + 1) * (k + 1)
        return base if (k + 1) % 2 == 0 else -base
    raise TableIndexError(f"index n={n} escapes the case analysis at weight {k}")


def d_infinity(k: int, table=_a_table_primary) -> ArchFactor:
    """(2 pi)^(-1-2k) (-1)^(k+1) ((k+1)!)^2/(2k+1) *
    sum_{|n| <= k+1} (-1)^n a_{2n,-2n} C(2k+2, k+n+1);  k >= 1.

    The diagonal table is supported on |index| <= k+1, so only |2n| <= k+1
    contributes; the three displayed cases tile that range exactly (anything
    else raises, flagging a transcription bug).
    """
    if k < 1:
        raise ValueError("the archimedean factor needs k >= 1")
    total = Fraction(0)
    for n in range(-(k + 1), k + 2):
        coeff = table(k, 2 * n)
        if coeff:
            total += (1 if n % 2 == 0 else -1) * coeff * comb(2 * k + 2, k + n + 1)
    rational = (Fraction(2) ** (-1 - 2 * k) * (-1) ** (k + 1)
                * Fraction(factorial(k + 1) ** 2, 2 * k + 1) * total)
    return ArchFactor(rational, -1 - 2 * k)


def d_infinity_cross_check(k: int) -> bool:
    """The two independent transcriptions agree entrywise and in total."""
    for n in range(-(k + 2), k + 3):
        if _a_table_primary(k, n) != _a_table_secondary(k, n):
            return False
    return d_infinity(k, _a_table_primary).rational == d_infinity(k, _a_table_secondary).rational


# ---------------------------------------------------------------------------
# index prefactor and assembly
# ---------------------------------------------------------------------------

def iwahori_index(p: int) -> int:
    """[G(Z_p) : Iw_G] computed by enumeration over the residue field:
    (#GL2(F_p) / #B(F_p))^2 = (p+1)^2."""
    gl = 0
    borel = 0
    for a in range(p):
        for b in range(p):
            for c in range(p):
                for d in range(p):
                    if (a * d - b * c) % p:
                        gl += 1
                        if c == 0:
                            borel += 1
    cosets = gl // borel
    return cosets * cosets


@dataclass
class AdjointAssembly:
    pairing_value: float
    pairing_interval: tuple[float, float]
    l_value: float
    l_interval: tuple[float, float]
    prefactor_rational: Fraction
    prefactor_pi_exponent: int
    theta: Fraction
    trivial_zero: bool


def assemble_adjoint_value(theta: Fraction, l_partial: PartialLValue, k: int,
                           disc_K: int, p: int, invert: bool = False,
                           pairing_value: float | None = None) -> AdjointAssembly:
    """[stab pairing] = (p+1)^2 Theta D_inf disc(K) / (16 pi) * L(ad0 f, 1).

    Forward: bracket the pairing value from the partial L-value.  Inverted
    (invert=True with a given pairing_value): bracket L(ad0 f, 1).  The
    rational-times-pi-power prefactor stays exact until the final floats.
    """
    theta = Fraction(theta)
    if theta == 0:
        raise ZeroDivisionError("trivial zero: Theta = 0; inversion refused")
    dinf = d_infinity(k)
    pref_rat = (Fraction((p + 1) ** 2) * theta * dinf.rational * disc_K) / 16
    pref_pi = dinf.pi_exponent - 1
    pref = float(mpmath.mpf(pref_rat.numerator) / pref_rat.denominator * mpmath.pi ** pref_pi)
    tail = l_partial.tail_log_bound
    import math
    lo_mult, hi_mult = (math.exp(-tail), math.exp(tail)) if math.isfinite(tail) else (0.0, math.inf)
    if not invert:
        val = pref * l_partial.value
        iv = sorted((pref * l_partial.value * lo_mult, pref * l_partial.value * hi_mult))
        l_iv = sorted((l_partial.value * lo_mult, l_partial.value * hi_mult))
        return AdjointAssembly(val, tuple(iv), l_partial.value, tuple(l_iv),
                               pref_rat, pref_pi, theta, False)
    if pairing_value is None:
        raise ValueError("inversion needs the pairing value")
    l_val = pairing_value / pref
    l_iv = sorted((l_val * lo_mult, l_val * hi_mult))
    return AdjointAssembly(pairing_value, (pairing_value, pairing_value),
                           l_val, tuple(l_iv), pref_rat, pref_pi, theta, False)


def noncritical_slope(v_alpha_p: Fraction, v_alpha_pbar: Fraction, k: int) -> dict:
    """max(v(alpha_p), v(alpha_pbar)) < k+1; also reports ordinarity."""
    v1, v2 = Fraction(v_alpha_p), Fraction(v_alpha_pbar)
    return {
        "noncritical": max(v1, v2) < k + 1,
        "ordinary": v1 == 0 and v2 == 0,
        "bound": k + 1,
        "max_valuation": max(v1, v2),
    }

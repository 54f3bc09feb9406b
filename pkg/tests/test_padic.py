from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from bianchi_adjoint.padic import (PAdicNum, PrimeContext, QuadRootPair,
                                   hecke_poly_rootdata, is_fundamental_discriminant,
                                   kronecker_split, legendre_valuation, val_frac)


def brute_factorial_valuation(n, p):
    """Independent oracle: factor n! by trial division."""
    total = 0
    for m in range(2, n + 1):
        while m % p == 0:
            total += 1
            m //= p
    return total


def test_legendre_examples():
    assert legendre_valuation(6, 3) == 2          # 6! = 2^4 3^2 5
    assert legendre_valuation(0, 5) == 0          # empty product
    # derived by brute-force factorization of 27!
    assert brute_factorial_valuation(27, 3) == 13
    assert legendre_valuation(27, 3) == 13


@given(st.integers(0, 400), st.integers(0, 400), st.sampled_from([2, 3, 5, 7]))
def test_legendre_superadditive(n, m, p):
    assert legendre_valuation(n + m, p) >= legendre_valuation(n, p) + legendre_valuation(m, p)


@given(st.integers(0, 2000), st.sampled_from([3, 5, 7]))
def test_legendre_against_oracle(n, p):
    assert legendre_valuation(n, p) == brute_factorial_valuation(n, p)


def test_kronecker_split_examples():
    assert kronecker_split(-4, 5) == "split"      # 5 = 1 mod 4
    assert kronecker_split(-4, 3) == "inert"      # 3 = 3 mod 4
    assert kronecker_split(-3, 3) == "ramified"   # 3 | disc


def test_kronecker_rejects_invalid_discriminant():
    with pytest.raises(ValueError):
        kronecker_split(-6, 5)   # -6 = 2 mod 4, not fundamental
    assert is_fundamental_discriminant(-4)
    assert is_fundamental_discriminant(-3)
    assert not is_fundamental_discriminant(-9)


def test_prime_context():
    ctx = PrimeContext(5, -4)
    assert ctx.split_check
    with pytest.raises(ValueError):
        PrimeContext(3, -4)      # inert
    with pytest.raises(ValueError):
        PrimeContext(2, -7)      # p must be odd
    with pytest.raises(ValueError):
        PrimeContext(5, 5)       # must be negative


def test_hecke_poly_rootdata_examples():
    # norm is q^(k+1); the quoted trace-10/norm-81/disc=-224 triple belongs
    # to weight 3 (100 - 4*81), not 2
    rd = hecke_poly_rootdata(10, 3, 3)
    assert rd.trace == 10 and rd.norm == 81
    assert rd.discriminant == 100 - 324 == -224
    assert rd.irreducible_over_R
    rd = hecke_poly_rootdata(10, 3, 2)
    assert rd.norm == 27 and rd.discriminant == -8
    rd = hecke_poly_rootdata(0, 3, 0)
    assert rd.trace == 0 and rd.norm == 3 and rd.discriminant == -12
    rd = hecke_poly_rootdata(8, 4, 1)  # lam = 2 q^((k+1)/2)
    assert rd.discriminant == 0 and rd.degenerate


def test_quadrootpair_symmetric_identities():
    rd = QuadRootPair(Fraction(10), Fraction(9))   # roots 9, 1
    assert rd.trace ** 2 - 4 * rd.norm == rd.discriminant
    assert rd.power_sum(0) == 2
    assert rd.power_sum(1) == 10
    assert rd.power_sum(2) == 82          # 81 + 1
    assert rd.power_sum(3) == 730         # 729 + 1
    assert rd.ratio_sum() == Fraction(82, 9)


@given(st.integers(-50, 50), st.integers(-50, 50),
       st.integers(-8, 8), st.integers(-8, 8))
def test_padic_mul_valuation(a, b, va, vb):
    p = 5
    x = PAdicNum.from_rational(Fraction(a if a else 1) * Fraction(p) ** va, p, 12)
    y = PAdicNum.from_rational(Fraction(b if b else 1) * Fraction(p) ** vb, p, 12)
    z = x * y
    if not x.is_zero and not y.is_zero:
        assert z.valuation == x.valuation + y.valuation


@given(st.fractions(min_value=-10 ** 6, max_value=10 ** 6, max_denominator=10 ** 4),
       st.fractions(min_value=-10 ** 6, max_value=10 ** 6, max_denominator=10 ** 4))
def test_padic_ring_against_rationals(x, y):
    p = 3
    if x.denominator % p == 0 or y.denominator % p == 0:
        return
    X = PAdicNum.from_rational(x, p, 20)
    Y = PAdicNum.from_rational(y, p, 20)
    assert (X + Y).congruent(PAdicNum.from_rational(x + y, p, 20))
    assert (X * Y).congruent(PAdicNum.from_rational(x * y, p, 20))
    assert (X - Y).congruent(PAdicNum.from_rational(x - y, p, 20))


def test_padic_precision_not_inflated():
    p = 3
    x = PAdicNum(p, 0, 1 + 3 ** 5, 6)    # known mod 3^6
    y = PAdicNum(p, 0, -1, 6)
    s = x + y                              # 3^5 mod 3^6: one digit left
    assert s.valuation == 5 and s.precision == 1
    assert s.known_mod() == 6


def test_padic_inverse_and_serialize():
    p = 5
    x = PAdicNum.from_rational(Fraction(7, 2), p, 10)
    assert (x * x.inverse()).congruent(PAdicNum.from_rational(1, p, 10))
    assert "mod 5^10" in x.serialize()
    assert val_frac(Fraction(50, 3), 5) == 2

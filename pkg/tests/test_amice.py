from fractions import Fraction

import pytest

from bianchi_adjoint.amice import (AnalyticCoeffVector, basis_scaling_valuation,
                                   compute_r_weight, embed_cr_into_crprime,
                                   eval_basis_function, floor_p_pow)
from bianchi_adjoint.padic import PAdicNum, legendre_valuation


def test_floor_p_pow_rational_exponent():
    assert floor_p_pow(27, 3, 1) == 9
    assert floor_p_pow(27, 3, Fraction(3, 2)) == 5   # 27/3^1.5 = 5.196
    assert floor_p_pow(0, 5, 2) == 0
    assert floor_p_pow(100, 5, Fraction(1, 2)) == 44  # 100/sqrt(5) = 44.72


def test_scaling_valuation_examples():
    # v_3(9!) - v_3(3!) = 4 - 1
    assert legendre_valuation(9, 3) == 4 and legendre_valuation(3, 3) == 1
    assert basis_scaling_valuation((27,), 1, 2, 3) == 3
    assert basis_scaling_valuation((0,), 1, 2, 5) == 0
    # first nonvanishing floor term at i = p^(r2+1)
    assert basis_scaling_valuation((3 ** 3,), 1, 2, 3) > 0
    with pytest.raises(ValueError):
        basis_scaling_valuation((5,), 2, 2, 3)


def test_two_route_agreement_full_range():
    for p in (3, 5):
        for (r, r2) in ((1, 2), (1, 3), (2, 3)):
            for i in range(65):
                basis_scaling_valuation((i,), r, r2, p)  # raises on disagreement


def test_multi_index_additivity():
    v1 = basis_scaling_valuation((12,), 1, 2, 3)
    v2 = basis_scaling_valuation((7,), 1, 2, 3)
    assert basis_scaling_valuation((12, 7), 1, 2, 3) == v1 + v2


def test_compute_r_weight():
    assert compute_r_weight(2, 3) == 0
    # derived: v_3(4^4 - 1) = v_3(255) = 1 > 1/(3-1)
    assert (4 ** 4 - 1) % 3 == 0 and (4 ** 4 - 1) % 9 != 0
    assert compute_r_weight(0, 5) == 0
    assert compute_r_weight(3, 3) == 0   # k = p: valuation 1 + 1
    with pytest.raises(TypeError):
        compute_r_weight("weight", 3)


def test_embedding_rescales_and_composes():
    p = 3
    one = PAdicNum.from_rational(1, p, 20)
    # constant function: index 0, no rescaling
    f = AnalyticCoeffVector(p, Fraction(1), 8, {(0,): one})
    g = f.embed(2)
    assert g.coeffs[(0,)].congruent(one)
    # a single basis vector rescales by exactly the scaling valuation
    f = AnalyticCoeffVector(p, Fraction(1), 8, {(6,): one})
    g = f.embed(2)
    v = basis_scaling_valuation((6,), 1, 2, p)
    assert g.coeffs[(6,)].valuation == v
    # sum rescales componentwise; composition r=1 -> 2 -> 3 equals 1 -> 3
    f = AnalyticCoeffVector(p, Fraction(1), 8, {(2,): one, (7,): one})
    g12 = f.embed(2).embed(3)
    g13 = f.embed(3)
    for i in ((2,), (7,)):
        assert g12.coeffs[i].congruent(g13.coeffs[i])
    with pytest.raises(ValueError):
        f.embed(1)


def test_basis_functions_integral_at_integer_points():
    for p in (3, 5):
        for i in range(9):
            for x in range(9):
                val = eval_basis_function((i,), 1, p, (x,))
                assert isinstance(val, int)


def test_integrality_predicate():
    p = 3
    f = AnalyticCoeffVector(p, Fraction(1), 4,
                            {(1,): PAdicNum.from_rational(6, p, 10)})
    assert f.is_integral()
    g = AnalyticCoeffVector(p, Fraction(1), 4,
                            {(1,): PAdicNum.from_rational(Fraction(1, 3), p, 10)})
    assert not g.is_integral()

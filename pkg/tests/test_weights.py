import random
from fractions import Fraction

import pytest

from bianchi_adjoint.weights import (DualModuleElement, GroupElemPair,
                                     PolyModuleElement, WeightK, act_dual,
                                     act_dual_matrix, act_right, al_frakp,
                                     al_frakpbar, al_p, diag_pair,
                                     gram_matrix_algebraic, mat2, pair,
                                     pair_algebraic, pair_twisted, sharp,
                                     sharp_classical_adjoint, upsilon_p_c,
                                     IDENTITY2)

random.seed(20)


def rand_mu(k):
    mu = DualModuleElement.zero(k)
    for a in range(k.k1 + 1):
        for b in range(k.k2 + 1):
            mu.m[a][b] = Fraction(random.randint(-9, 9), random.randint(1, 4))
    return mu


def test_act_right_examples():
    # identity on constants; scalar prefactor structure
    k = WeightK(2, 2)
    one = PolyModuleElement.monomial(k, 0, 0)
    g = pair(IDENTITY2, IDENTITY2)
    assert act_right(one, g) == one
    # phi = X, first factor (1 0; pc p), k1 = 1: X -> pc + pX
    k10 = WeightK(1, 0)
    phi = PolyModuleElement.monomial(k10, 1, 0)
    res = act_right(phi, pair(mat2(1, 0, 6, 3), IDENTITY2))
    assert res.c[0][0] == 6 and res.c[1][0] == 3


def test_action_axiom_spot():
    k = WeightK(2, 2)
    g = pair(mat2(1, 2, 3, 5), mat2(2, 0, 1, 1))
    h = pair(mat2(1, 1, 0, 2), mat2(3, 1, 1, 2))
    for a in range(3):
        for b in range(3):
            phi = PolyModuleElement.monomial(k, a, b)
            assert act_right(act_right(phi, g), h) == act_right(phi, g * h)


def test_act_dual_examples():
    k = WeightK(2, 2)
    mu = rand_mu(k)
    assert act_dual(mu, pair(IDENTITY2, IDENTITY2)) == mu
    # scalar pair (p,p;I) multiplies moments by p^k1 on the moved factor
    p = 3
    scal = diag_pair(p, p, 1, 1)
    assert act_dual(mu, scal) == mu.scale(Fraction(p) ** k.k1)
    g = pair(mat2(1, 1, 3, 2), mat2(2, 1, 3, 1))
    h = pair(mat2(1, 0, 3, 1), mat2(1, 2, 0, 1))
    assert act_dual(act_dual(mu, h), g) == act_dual(mu, g * h)


def test_act_dual_iwahori_integral():
    p = 3
    k = WeightK(2, 2)
    for g in (pair(mat2(1, 0, 3, 1), mat2(1, 2, 0, 1)),
              pair(mat2(1, 1, 3, 2), mat2(2, 1, 6, 1))):
        assert g.in_iwahori(p)
        M = act_dual_matrix(g, k)
        for row in M:
            for x in row:
                assert x.denominator == 1


def test_pair_algebraic_examples():
    k00 = WeightK(0, 0)
    mu, nu = rand_mu(k00), rand_mu(k00)
    assert pair_algebraic(mu, nu) == mu.m[0][0] * nu.m[0][0]
    k10 = WeightK(1, 0)
    mu, nu = rand_mu(k10), rand_mu(k10)
    assert pair_algebraic(mu, nu) == mu.m[0][0] * nu.m[1][0] - mu.m[1][0] * nu.m[0][0]


def test_gram_nondegenerate_small_weights():
    for k in (WeightK(1, 1), WeightK(2, 2), WeightK(3, 3)):
        G = gram_matrix_algebraic(k)
        n = len(G)
        M = [row[:] for row in G]
        det = Fraction(1)
        for c in range(n):
            piv = next(r for r in range(c, n) if M[r][c] != 0)
            if piv != c:
                M[c], M[piv] = M[piv], M[c]
                det = -det
            det *= M[c][c]
            inv = 1 / M[c][c]
            for r in range(c + 1, n):
                if M[r][c]:
                    f = M[r][c] * inv
                    M[r] = [x - f * y for x, y in zip(M[r], M[c])]
        assert det != 0


def test_pair_twisted_examples_and_route():
    p = 3
    k00 = WeightK(0, 0)
    mu, nu = rand_mu(k00), rand_mu(k00)
    assert pair_twisted(mu, nu, p) == mu.m[0][0] * nu.m[0][0]
    # k=(1,1): the m10 m10' cross term carries coefficient p
    k11 = WeightK(1, 1)
    mu = DualModuleElement.delta(k11, 1, 0)
    nu = DualModuleElement.delta(k11, 1, 0)
    assert pair_twisted(mu, nu, p) == p
    # two independent routes at k=(2,2)
    k22 = WeightK(2, 2)
    for _ in range(10):
        mu, nu = rand_mu(k22), rand_mu(k22)
        assert pair_twisted(mu, nu, p) == pair_algebraic(mu, act_dual(nu, al_p(p)))


def test_al_squares():
    p = 3
    for k in (WeightK(1, 1), WeightK(2, 2)):
        mu = rand_mu(k)
        w = al_frakp(p)
        assert act_dual(act_dual(mu, w), w) == mu.scale(Fraction(-p) ** k.k1)
        wb = al_frakpbar(p)
        assert act_dual(act_dual(mu, wb), wb) == mu.scale(Fraction(-p) ** k.k2)
        wp = al_p(p)
        assert act_dual(act_dual(mu, wp), wp) == mu.scale(Fraction(p) ** (2 * k.k1))


def test_sharp_involution():
    p = 3
    g = upsilon_p_c(p, 1, 0)
    assert sharp(sharp(g, p), p) == g
    d = diag_pair(2, 5, 1, 7)
    assert sharp(d, p) == d
    # the displayed involution: (1 0; 9 3) -> (1 3; 0 3)
    m = pair(mat2(1, 0, 9, 3), IDENTITY2)
    sm = sharp(m, p)
    assert sm.g1 == mat2(1, 3, 0, 3)
    with pytest.raises(ValueError):
        sharp(pair(mat2(1, 0, 1, 1), IDENTITY2), p)   # c not divisible by p
    with pytest.raises(ValueError):
        GroupElemPair(mat2(0, 0, 0, 1), IDENTITY2)    # singular


def test_twisted_adjointness_pins_the_variant():
    """The adjoint of g for the twisted pairing in these coordinates is the
    transpose-variant of the hash involution; the involution itself is the
    exact adjoint for the distribution-side pairing (see test_dist)."""
    p = 3
    for k in (WeightK(1, 1), WeightK(2, 2)):
        for g in (upsilon_p_c(p, 1, 0), pair(mat2(2, 3, 3, 5), mat2(1, 1, 3, 2)),
                  upsilon_p_c(p, 2, 2)):
            assert g.in_xi(p)
            holds_transpose = holds_plain = True
            for _ in range(6):
                mu, nu = rand_mu(k), rand_mu(k)
                lhs = pair_twisted(act_dual(mu, g), nu, p)
                if lhs != pair_twisted(mu, act_dual(nu, sharp_classical_adjoint(g, p)), p):
                    holds_transpose = False
                if lhs != pair_twisted(mu, act_dual(nu, sharp(g, p)), p):
                    holds_plain = False
            assert holds_transpose
            if g.g1[1] != 0 or g.g1[2] != 0:   # away from diagonal pairs they differ
                assert not holds_plain


def test_hecke_adjointness_transfer():
    """[U mu, nu] = [mu, U^adj nu] with U^adj the sum over the adjoint
    involution of the representatives."""
    from bianchi_adjoint.hecke import enumerate_coset_reps
    p = 3
    k = WeightK(2, 2)
    dec = enumerate_coset_reps("U_frakp", p)
    for _ in range(6):
        mu, nu = rand_mu(k), rand_mu(k)
        lhs = Fraction(0)
        rhs = Fraction(0)
        for r in dec.representatives:
            lhs += pair_twisted(act_dual(mu, r), nu, p)
            rhs += pair_twisted(mu, act_dual(nu, sharp_classical_adjoint(r, p)), p)
        assert lhs == rhs

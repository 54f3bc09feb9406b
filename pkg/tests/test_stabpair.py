import itertools
import random
from fractions import Fraction

import pytest

from bianchi_adjoint.hecke import stabilize
from bianchi_adjoint.stabpair import (GramResult, LAdjReport, PowerSeries,
                                      adjoint_matrices, adjoint_matrices_derived,
                                      build_al_matrices, build_al_matrices_derived,
                                      build_hecke_matrices,
                                      build_hecke_matrices_derived, charpoly4,
                                      derived_gram_table, gram_family_series,
                                      identity4, ladj_generator, mat_eq, mat_mul,
                                      mat_scale, mat_sub, mat_T, mat_inv,
                                      orthogonality_identity, pair_stabilized,
                                      pair_stabilized_cross, solve_gram,
                                      stab_basis_determinant,
                                      stab_eigenvector_check, theta_closed_form,
                                      theta_swap_symmetric,
                                      transcribed_gram_table, up_charpoly_factors)
from bianchi_adjoint.symalg import (LAM, LAMB, ONE, ZERO, AlgebraContext,
                                    RatFunc, StabScalar)

CASES = [(3, 1), (3, 2), (5, 1), (5, 2)]
random.seed(9)


@pytest.mark.parametrize("p,k", CASES)
def test_matrix_two_routes(p, k):
    ctx = AlgebraContext(p, k)
    H, Hd = build_hecke_matrices(ctx), build_hecke_matrices_derived(ctx)
    for op in H:
        assert mat_eq(H[op], Hd[op])
    W, Wd = build_al_matrices(ctx), build_al_matrices_derived(ctx)
    for op in W:
        assert mat_eq(W[op], Wd[op])
    S, Sd = adjoint_matrices(ctx), adjoint_matrices_derived(ctx)
    for op in S:
        assert mat_eq(S[op], Sd[op])


@pytest.mark.parametrize("p,k", CASES)
def test_matrix_identities(p, k):
    ctx = AlgebraContext(p, k)
    H = build_hecke_matrices(ctx)
    W = build_al_matrices(ctx)
    # column examples from the displays
    assert [H["U_frakp"][i][1] for i in range(4)] == \
        [RatFunc.const(Fraction(p) ** (k + 1)), ZERO, ZERO, ZERO]
    assert H["U_p"][3][0] == ONE
    # products
    assert mat_eq(H["U_p"], mat_mul(H["U_frakp"], H["U_frakpbar"]))
    assert mat_eq(H["U_p"], mat_mul(H["U_frakpbar"], H["U_frakp"]))
    # omega squares and the antidiagonal
    assert mat_eq(mat_mul(W["omega_frakp"], W["omega_frakp"]),
                  mat_scale(identity4(), RatFunc.const(Fraction(-p) ** k)))
    assert mat_eq(mat_mul(W["omega_p"], W["omega_p"]),
                  mat_scale(identity4(), RatFunc.const(Fraction(p) ** (2 * k))))
    anti = [W["omega_p"][0][3], W["omega_p"][1][2], W["omega_p"][2][1], W["omega_p"][3][0]]
    assert anti == [RatFunc.const(Fraction(p) ** (2 * k)),
                    RatFunc.const(Fraction(-p) ** k),
                    RatFunc.const(Fraction(-p) ** k), ONE]
    assert mat_eq(W["omega_p"], mat_mul(W["omega_frakp"], W["omega_frakpbar"]))


@pytest.mark.parametrize("p,k", CASES)
def test_adjoint_display_entries(p, k):
    ctx = AlgebraContext(p, k)
    S = adjoint_matrices(ctx)
    sgn = (-1) ** k
    assert S["U_frakp"][1][0] == RatFunc.const(Fraction(sgn * p))
    assert S["U_p"][3][0] == RatFunc.const(Fraction(p * p))
    # (U*)* = U since omega_p^2 is central
    W = build_al_matrices(ctx)["omega_p"]
    Winv = mat_inv(W)
    again = mat_mul(mat_mul(Winv, S["U_frakp"]), W)
    assert mat_eq(again, build_hecke_matrices(ctx)["U_frakp"])


@pytest.mark.parametrize("p,k", CASES)
def test_gram_solution(p, k):
    ctx = AlgebraContext(p, k)
    g = solve_gram(ctx)
    assert isinstance(g, GramResult)
    assert g.nullspace_dim == 1
    assert g.symmetric
    assert mat_eq(g.entries, derived_gram_table(ctx))
    D = Fraction((-1) ** k * p + 1)
    # spot entries from the derivation
    assert g.entries[0][1] == LAM * Fraction(1, D)
    assert g.entries[1][1] == RatFunc.const(Fraction(-p) ** k)
    assert g.entries[3][3] == RatFunc.const(Fraction(p) ** (2 * k))
    assert g.entries[0][3] == LAM * LAMB * Fraction(1, D * D)
    # derived sign at the text-critical entries
    assert g.entries[1][2] == LAM * LAMB * Fraction(1, D * D)
    assert g.entries[2][1] == g.entries[1][2]
    # adjointness residual identically zero
    H = build_hecke_matrices(ctx)
    S = adjoint_matrices(ctx)
    for op in ("U_frakp", "U_frakpbar"):
        R = mat_sub(mat_mul(mat_T(H[op]), g.entries), mat_mul(g.entries, S[op]))
        assert all(R[i][j].is_zero for i in range(4) for j in range(4))


@pytest.mark.parametrize("p,k", CASES)
def test_transcribed_table_differs_exactly_at_cross_entries(p, k):
    ctx = AlgebraContext(p, k)
    g = solve_gram(ctx)
    Gt = transcribed_gram_table(ctx)
    mism = [(i, j) for i in range(4) for j in range(4) if not g.entries[i][j] == Gt[i][j]]
    assert mism == [(1, 2), (2, 1)]


@pytest.mark.parametrize("p,k", CASES)
def test_theta_derived_and_structure(p, k):
    ctx = AlgebraContext(p, k)
    for i, j in itertools.product((0, 1), repeat=2):
        ps = pair_stabilized(ctx, i, j)
        th = theta_closed_form(ctx, i, j, "derived")
        assert ps == th.value
        # the conjugated diagonal pairing vanishes identically
        assert orthogonality_identity(ctx, i, j).is_zero
        # ... and the conjugated cross pairing against (1-i,1-j) is the
        # bilinear diagonal value
        assert pair_stabilized_cross(ctx, i, j, 1 - i, 1 - j) == ps
        assert stab_eigenvector_check(ctx, i, j)
        assert theta_swap_symmetric(ctx, i, j)


@pytest.mark.parametrize("p,k", [(3, 1), (3, 2)])
def test_theta_numeric_oracle(p, k):
    """Evaluate the symbolic pairing value at rational root data and compare
    with a direct numeric Gram pairing (independent float-free route)."""
    ctx = AlgebraContext(p, k)
    data = {
        (3, 1): (Fraction(10), Fraction(15, 2), (Fraction(9), Fraction(1)),
                 (Fraction(6), Fraction(3, 2))),
        (3, 2): (Fraction(12), Fraction(21, 2), (Fraction(9), Fraction(3)),
                 (Fraction(6), Fraction(9, 2))),
    }[(p, k)]
    lam, lamb, roots, rootsb = data
    G = derived_gram_table(ctx)
    W = build_al_matrices(ctx)["omega_p"]
    GW = mat_mul(G, W)
    for i, j in itertools.product((0, 1), repeat=2):
        sym = pair_stabilized(ctx, i, j).evaluate(lam, lamb, roots[0], rootsb[0])
        al, alb = roots[i], rootsb[j]
        v = [Fraction(1), -1 / al, -1 / alb, 1 / (al * alb)]
        direct = sum(v[u] * GW[u][t].evaluate(lam, lamb) * v[t]
                     for u in range(4) for t in range(4))
        assert sym == direct


def test_theta_nonzero_sampler():
    """Random eigenvalue data satisfying the square-trace bound at both
    primes: the derived local factors cannot vanish (a probe, not a proof)."""
    import cmath
    rng = random.Random(77)
    p, k = 3, 2
    sgn = 1
    hits = 0
    for _ in range(100):
        lam = Fraction(rng.randint(-20, 20), rng.randint(1, 3))
        lamb = Fraction(rng.randint(-20, 20), rng.randint(1, 3))
        if lam == 0 or lamb == 0:
            continue
        if lam * lam >= 4 * 27 or lamb * lamb >= 4 * 27:
            continue
        hits += 1
        for lv in (lam, lamb):
            disc = complex(lv * lv - 4 * 27)
            a = (complex(lv) + cmath.sqrt(disc)) / 2
            b = complex(lv) - a
            E = (b - a) * (b - sgn * p * a) / (p * a)
            assert abs(E) > 1e-12
    assert hits > 30


def test_up_charpoly_and_determinant():
    for (p, k) in CASES:
        ctx = AlgebraContext(p, k)
        assert up_charpoly_factors(ctx)
        det = stab_basis_determinant(ctx)
        pk1 = Fraction(p) ** (k + 1)
        expect = RatFunc.const(-1) * (LAM * LAM - RatFunc.const(4 * pk1)) \
            * (LAMB * LAMB - RatFunc.const(4 * pk1)) \
            * RatFunc.const(Fraction(1, p ** (4 * k + 4)))
        assert det == expect


def test_charpoly4_degree_and_trace():
    ctx = AlgebraContext(3, 1)
    A = build_hecke_matrices(ctx)["U_frakp"]
    cp = charpoly4(A)
    assert cp[4] == ONE
    assert cp[3] == RatFunc.const(-2) * LAM     # -trace


# ---------------------------------------------------------------------------
# power series / desk-scale generator
# ---------------------------------------------------------------------------

def test_power_series_ring():
    M = 6
    w = PowerSeries.gen(M)
    one = PowerSeries.const(1, M)
    s = one + w
    inv = s.inverse()
    assert (s * inv).c == [1, 0, 0, 0, 0, 0]
    assert (w * w).valuation() == 2
    assert PowerSeries.const(0, M).valuation() is None


def test_ladj_generator_examples():
    M = 6
    # constant family: unit constant term, etale
    rep = ladj_generator(PowerSeries.const(Fraction(5, 3), M))
    assert isinstance(rep, LAdjReport)
    assert rep.etale_at_center and rep.order_of_vanishing == 0
    # w * unit: vanishing detected
    w = PowerSeries.gen(M)
    unit = PowerSeries.const(2, M) + w
    rep = ladj_generator(w * unit)
    assert not rep.etale_at_center and rep.order_of_vanishing == 1
    # zero to working precision: indeterminate
    rep = ladj_generator(PowerSeries.const(0, M))
    assert rep.indeterminate
    # normalization must be a unit
    with pytest.raises(ValueError):
        ladj_generator(unit, normalization=w)


def test_gram_family_matches_pointwise_oracle():
    """Perturb lam_p by w; the series of the pairing of fixed vectors must
    agree with pointwise Gram pairings at small rational offsets, to the
    truncation order."""
    ctx = AlgebraContext(3, 2)
    M = 5
    lam0, lamb0 = Fraction(12), Fraction(21, 2)
    fam = gram_family_series(ctx, lam0, lamb0, M, direction="lam_p")
    Wnum = [[x.const_value() for x in row] for row in build_al_matrices(ctx)["omega_p"]]
    v = [Fraction(1), Fraction(2), Fraction(-1), Fraction(3)]
    wv = [sum(Wnum[s][t] * v[t] for t in range(4)) for s in range(4)]
    series = PowerSeries.const(0, M)
    for u in range(4):
        for s in range(4):
            if v[u] and wv[s]:
                series = series + fam[u][s] * PowerSeries.const(v[u] * wv[s], M)
    G = derived_gram_table(ctx)
    for w0 in (Fraction(1, 16), Fraction(-1, 32)):
        point = sum(v[u] * G[u][s].evaluate(lam0 + w0, lamb0) * wv[s]
                    for u in range(4) for s in range(4))
        partial = series.evaluate(w0)
        # the truncation error is O(w0^M)
        assert abs(point - partial) < abs(w0) ** (M - 1)


def test_ladj_series_normalized_by_g11():
    ctx = AlgebraContext(3, 1)
    M = 4
    fam = gram_family_series(ctx, Fraction(10), Fraction(15, 2), M)
    rep = ladj_generator(fam[0][3], normalization=fam[0][0])
    assert rep.order_of_vanishing == 0 and rep.etale_at_center

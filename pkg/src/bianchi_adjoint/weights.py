"""Classical weight modules for the pair of GL2-factors.

P_k = polynomials of degree <= k per factor; the right action per factor is
    (phi |_k g)(X) = (a + bX)^k phi((c + dX)/(a + bX)),   g = (a b; c d),
expanded homogeneously (so no division is ever performed), with the induced
left action on the moment dual.  The algebraic pairing is the binomial
expansion of prod (X_i' - X_i)^{k_i}; the twisted pairing is the expansion of
prod (1 + p X_i X_i')^{k_i} and coincides with pairing against the
Atkin-Lehner translate of the second argument.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb


Matrix2 = tuple[Fraction, Fraction, Fraction, Fraction]  # (a, b, c, d)


def mat2(a, b, c, d) -> Matrix2:
    return (Fraction(a), Fraction(b), Fraction(c), Fraction(d))


def mat2_mul(g: Matrix2, h: Matrix2) -> Matrix2:
    a, b, c, d = g
    e, f, x, y = h
    return (a * e + b * x, a * f + b * y, c * e + d * x, c * f + d * y)


def mat2_det(g: Matrix2) -> Fraction:
    return g[0] * g[3] - g[1] * g[2]


IDENTITY2: Matrix2 = mat2(1, 0, 0, 1)


@dataclass(frozen=True)
class WeightK:
    k1: int
    k2: int

    def __post_init__(self):
        if self.k1 < 0 or self.k2 < 0:
            raise ValueError("weights must be nonnegative")

    @property
    def parallel(self) -> bool:
        return self.k1 == self.k2

    def require_parallel(self):
        if not self.parallel:
            raise ValueError(f"parallel weight required, got ({self.k1},{self.k2})")


@dataclass(frozen=True)
class GroupElemPair:
    """A pair of 2x2 matrices over exact rationals, acting factorwise."""

    g1: Matrix2
    g2: Matrix2

    def __post_init__(self):
        if mat2_det(self.g1) == 0 or mat2_det(self.g2) == 0:
            raise ValueError("singular matrix")

    def __mul__(self, other: "GroupElemPair") -> "GroupElemPair":
        return GroupElemPair(mat2_mul(self.g1, other.g1), mat2_mul(self.g2, other.g2))

    # -- membership predicates -------------------------------------------------
    def _factor_in(self, g: Matrix2, p: int, kind: str) -> bool:
        a, b, c, d = g
        from .padic import val_frac
        def v(x):
            return val_frac(x, p) if x != 0 else 10 ** 9
        if kind == "glzp":
            return min(v(a), v(b), v(c), v(d)) >= 0 and v(mat2_det(g)) == 0
        if kind == "iwahori":
            return self._factor_in(g, p, "glzp") and v(c) >= 1
        if kind == "xi":
            # a unit, b,d integral, c in pZ_p, det nonzero
            return v(a) == 0 and v(b) >= 0 and v(d) >= 0 and v(c) >= 1
        raise ValueError(kind)

    def in_glzp(self, p: int) -> bool:
        return self._factor_in(self.g1, p, "glzp") and self._factor_in(self.g2, p, "glzp")

    def in_iwahori(self, p: int) -> bool:
        return self._factor_in(self.g1, p, "iwahori") and self._factor_in(self.g2, p, "iwahori")

    def in_xi(self, p: int) -> bool:
        return self._factor_in(self.g1, p, "xi") and self._factor_in(self.g2, p, "xi")


def pair(g1: Matrix2, g2: Matrix2) -> GroupElemPair:
    return GroupElemPair(g1, g2)


def diag_pair(a1, d1, a2, d2) -> GroupElemPair:
    return GroupElemPair(mat2(a1, 0, 0, d1), mat2(a2, 0, 0, d2))


# standard elements at p -------------------------------------------------------

def upsilon_p(p: int) -> GroupElemPair:
    return diag_pair(1, p, 1, p)


def upsilon_frakp(p: int) -> GroupElemPair:
    return diag_pair(1, p, 1, 1)


def upsilon_frakpbar(p: int) -> GroupElemPair:
    return diag_pair(1, 1, 1, p)


def upsilon_frakp_star(p: int) -> GroupElemPair:
    return diag_pair(p, 1, 1, 1)


def upsilon_frakpbar_star(p: int) -> GroupElemPair:
    return diag_pair(1, 1, p, 1)


def upsilon_p_c(p: int, c1: int, c2: int) -> GroupElemPair:
    return GroupElemPair(mat2(1, 0, p * c1, p), mat2(1, 0, p * c2, p))


def al_frakp(p: int) -> GroupElemPair:
    return GroupElemPair(mat2(0, -p, 1, 0), IDENTITY2)


def al_frakpbar(p: int) -> GroupElemPair:
    return GroupElemPair(IDENTITY2, mat2(0, -p, 1, 0))


def al_p(p: int) -> GroupElemPair:
    return GroupElemPair(mat2(0, -p, 1, 0), mat2(0, -p, 1, 0))


# ---------------------------------------------------------------------------
# module elements
# ---------------------------------------------------------------------------

class PolyModuleElement:
    """sum c[a][b] X1^a X2^b with 0 <= a <= k1, 0 <= b <= k2."""

    __slots__ = ("k", "c")

    def __init__(self, k: WeightK, coeffs):
        self.k = k
        self.c = [[Fraction(coeffs[a][b]) for b in range(k.k2 + 1)] for a in range(k.k1 + 1)]

    @classmethod
    def zero(cls, k: WeightK) -> "PolyModuleElement":
        return cls(k, [[0] * (k.k2 + 1) for _ in range(k.k1 + 1)])

    @classmethod
    def monomial(cls, k: WeightK, a: int, b: int) -> "PolyModuleElement":
        z = cls.zero(k)
        z.c[a][b] = Fraction(1)
        return z

    def __add__(self, other: "PolyModuleElement") -> "PolyModuleElement":
        out = PolyModuleElement.zero(self.k)
        for a in range(self.k.k1 + 1):
            for b in range(self.k.k2 + 1):
                out.c[a][b] = self.c[a][b] + other.c[a][b]
        return out

    def scale(self, x) -> "PolyModuleElement":
        out = PolyModuleElement.zero(self.k)
        for a in range(self.k.k1 + 1):
            for b in range(self.k.k2 + 1):
                out.c[a][b] = self.c[a][b] * Fraction(x)
        return out

    def __eq__(self, other):
        return isinstance(other, PolyModuleElement) and self.k == other.k and self.c == other.c

    def __repr__(self):
        terms = [f"{self.c[a][b]}*X1^{a}X2^{b}" for a in range(self.k.k1 + 1)
                 for b in range(self.k.k2 + 1) if self.c[a][b]]
        return " + ".join(terms) if terms else "0"


class DualModuleElement:
    """Moment vector m[a][b] = mu(X1^a X2^b)."""

    __slots__ = ("k", "m")

    def __init__(self, k: WeightK, moments):
        self.k = k
        self.m = [[Fraction(moments[a][b]) for b in range(k.k2 + 1)] for a in range(k.k1 + 1)]

    @classmethod
    def zero(cls, k: WeightK) -> "DualModuleElement":
        return cls(k, [[0] * (k.k2 + 1) for _ in range(k.k1 + 1)])

    @classmethod
    def delta(cls, k: WeightK, a: int, b: int) -> "DualModuleElement":
        z = cls.zero(k)
        z.m[a][b] = Fraction(1)
        return z

    def __add__(self, other: "DualModuleElement") -> "DualModuleElement":
        out = DualModuleElement.zero(self.k)
        for a in range(self.k.k1 + 1):
            for b in range(self.k.k2 + 1):
                out.m[a][b] = self.m[a][b] + other.m[a][b]
        return out

    def __sub__(self, other: "DualModuleElement") -> "DualModuleElement":
        return self + other.scale(-1)

    def scale(self, x) -> "DualModuleElement":
        out = DualModuleElement.zero(self.k)
        for a in range(self.k.k1 + 1):
            for b in range(self.k.k2 + 1):
                out.m[a][b] = self.m[a][b] * Fraction(x)
        return out

    def evaluate(self, phi: PolyModuleElement) -> Fraction:
        if phi.k != self.k:
            raise ValueError("weight mismatch")
        total = Fraction(0)
        for a in range(self.k.k1 + 1):
            for b in range(self.k.k2 + 1):
                total += self.m[a][b] * phi.c[a][b]
        return total

    def __eq__(self, other):
        return isinstance(other, DualModuleElement) and self.k == other.k and self.m == other.m

    def __repr__(self):
        return f"DualModuleElement({self.m})"


# ---------------------------------------------------------------------------
# actions
# ---------------------------------------------------------------------------

def _act_factor_rows(g: Matrix2, k: int) -> list[list[Fraction]]:
    """Row m = coefficients of (X^m |_k g) = (a+bX)^(k-m) (c+dX)^m."""
    a, b, c, d = g
    rows = []
    for m in range(k + 1):
        row = [Fraction(0)] * (k + 1)
        for t1 in range(k - m + 1):
            c1 = comb(k - m, t1) * a ** (k - m - t1) * b ** t1
            if not c1:
                continue
            for t2 in range(m + 1):
                c2 = comb(m, t2) * c ** (m - t2) * d ** t2
                if c2:
                    row[t1 + t2] += c1 * c2
        rows.append(row)
    return rows


def act_right(phi: PolyModuleElement, g: GroupElemPair, k: WeightK | None = None) -> PolyModuleElement:
    """(phi |_k g), exact, degree bounds preserved."""
    k = k or phi.k
    rows1 = _act_factor_rows(g.g1, k.k1)
    rows2 = _act_factor_rows(g.g2, k.k2)
    out = PolyModuleElement.zero(k)
    for a in range(k.k1 + 1):
        for b in range(k.k2 + 1):
            cab = phi.c[a][b]
            if not cab:
                continue
            for a2 in range(k.k1 + 1):
                r1 = rows1[a][a2]
                if not r1:
                    continue
                for b2 in range(k.k2 + 1):
                    r2 = rows2[b][b2]
                    if r2:
                        out.c[a2][b2] += cab * r1 * r2
    return out


def act_dual(mu: DualModuleElement, g: GroupElemPair, k: WeightK | None = None) -> DualModuleElement:
    """(g mu)(phi) = mu(phi |_k g): the transpose of act_right on moments."""
    k = k or mu.k
    rows1 = _act_factor_rows(g.g1, k.k1)
    rows2 = _act_factor_rows(g.g2, k.k2)
    out = DualModuleElement.zero(k)
    for a in range(k.k1 + 1):
        for b in range(k.k2 + 1):
            total = Fraction(0)
            for t1 in range(k.k1 + 1):
                r1 = rows1[a][t1]
                if not r1:
                    continue
                for t2 in range(k.k2 + 1):
                    r2 = rows2[b][t2]
                    if r2:
                        total += r1 * r2 * mu.m[t1][t2]
            out.m[a][b] = total
    return out


def act_dual_matrix(g: GroupElemPair, k: WeightK) -> list[list[Fraction]]:
    """Matrix of act_dual on the flattened moment basis (row-major (a,b))."""
    rows1 = _act_factor_rows(g.g1, k.k1)
    rows2 = _act_factor_rows(g.g2, k.k2)
    n1, n2 = k.k1 + 1, k.k2 + 1
    M = [[Fraction(0)] * (n1 * n2) for _ in range(n1 * n2)]
    for a in range(n1):
        for b in range(n2):
            for t1 in range(n1):
                for t2 in range(n2):
                    M[a * n2 + b][t1 * n2 + t2] = rows1[a][t1] * rows2[b][t2]
    return M


# ---------------------------------------------------------------------------
# pairings
# ---------------------------------------------------------------------------

def pair_algebraic(mu: DualModuleElement, nu: DualModuleElement, k: WeightK | None = None) -> Fraction:
    """Binomial expansion of prod_i (X_i' - X_i)^{k_i}; primes pair with nu."""
    k = k or mu.k
    if nu.k != k or mu.k != k:
        raise ValueError("weight mismatch")
    total = Fraction(0)
    for j1 in range(k.k1 + 1):
        c1 = comb(k.k1, j1) * (-1) ** (k.k1 - j1)
        for j2 in range(k.k2 + 1):
            c2 = comb(k.k2, j2) * (-1) ** (k.k2 - j2)
            total += c1 * c2 * mu.m[k.k1 - j1][k.k2 - j2] * nu.m[j1][j2]
    return total


def pair_twisted(mu: DualModuleElement, nu: DualModuleElement, p: int, k: WeightK | None = None) -> Fraction:
    """Expansion of prod_i (1 + p X_i X_i')^{k_i}: sum of C(k,a) p^(a1+a2) m_a m_a'."""
    k = k or mu.k
    if nu.k != k or mu.k != k:
        raise ValueError("weight mismatch")
    total = Fraction(0)
    for a1 in range(k.k1 + 1):
        for a2 in range(k.k2 + 1):
            total += (comb(k.k1, a1) * comb(k.k2, a2) * Fraction(p) ** (a1 + a2)
                      * mu.m[a1][a2] * nu.m[a1][a2])
    return total


def gram_matrix_algebraic(k: WeightK) -> list[list[Fraction]]:
    """Gram matrix of the monomial-dual basis under pair_algebraic."""
    n1, n2 = k.k1 + 1, k.k2 + 1
    deltas = [DualModuleElement.delta(k, a, b) for a in range(n1) for b in range(n2)]
    return [[pair_algebraic(x, y, k) for y in deltas] for x in deltas]


# ---------------------------------------------------------------------------
# the sharp involution and its adjoint variants
# ---------------------------------------------------------------------------

def sharp(g: GroupElemPair, p: int) -> GroupElemPair:
    """(a b; c d) -> (a, c/p; p b, d) per factor; an involution on Xi."""
    if not g.in_xi(p):
        raise ValueError("sharp is only defined on Xi (need a unit, p | c)")
    def s(m: Matrix2) -> Matrix2:
        a, b, c, d = m
        return (a, c / p, p * b, d)
    return GroupElemPair(s(g.g1), s(g.g2))


def sharp_classical_adjoint(g: GroupElemPair, p: int) -> GroupElemPair:
    """(a b; c d) -> (a, p c; b/p, d) per factor: the transpose-conjugate of
    sharp, which is the exact adjoint for the twisted pairing on moment duals
    in these coordinates (pinned by the adjointness test)."""
    def s(m: Matrix2) -> Matrix2:
        a, b, c, d = m
        return (a, p * c, b / p, d)
    return GroupElemPair(s(g.g1), s(g.g2))

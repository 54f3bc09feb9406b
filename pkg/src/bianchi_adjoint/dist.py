"""Truncated overconvergent distribution modules at integer parallel weight.

Coordinates are with respect to the dual binomial-factorial basis on the
standard two-variable coordinate patch (the one where the lower-unipotent
entry is p times the coordinate).  The U_p action there is weight-independent
and exactly integral:
    e_t(c + pX) expands with integer coefficients of triangular influence.

The specialisation to the classical moment dual is the dual of the degree-k
polynomial embedding phi -> phi(p . ); on monomial moments it is the
binomial-to-monomial conversion followed by the p-power dilation, and it
intertwines the U-operators with the classical ones exactly.  The undilated
moment extraction (`low_moments`) is the map through which the distribution
pairing factors.  Both are exposed; they differ by the diagonal dilation.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, factorial

from .padic import PAdicNum, legendre_valuation, val_frac
from .amice import floor_p_pow
from .weights import DualModuleElement, WeightK

AmiceIndex2 = tuple[int, int]


def _stirling2(a: int, i: int) -> int:
    """Stirling numbers of the second kind S(a,i)."""
    if i > a or i < 0:
        return 0
    total = 0
    for l in range(i + 1):
        total += (-1) ** (i - l) * comb(i, l) * l ** a
    return total // factorial(i)


def _binom_p_expansion(p: int, j: int, N: int) -> list[int]:
    """binom(pX, j) = sum_i w[i] binom(X, i); integer finite differences."""
    out = []
    for i in range(min(j, N) + 1):
        w = 0
        for l in range(i + 1):
            w += (-1) ** (i - l) * comb(i, l) * comb(p * l, j)
        out.append(w)
    return out


def basis_normalizer(i: int, p: int, r) -> int:
    """floor(i / p^r)!  (the factorial carried by the basis function)."""
    return factorial(floor_p_pow(i, p, r))


def up_factor_matrix(p: int, N: int, r=1) -> list[list[int]]:
    """One-variable matrix of the sum over c of the substitutions X -> c+pX
    on dual-basis coordinates: rows indexed by output t, columns by input i,
    integer entries, lower-triangular influence (i <= t)."""
    r = Fraction(r)
    W = {j: _binom_p_expansion(p, j, N) for j in range(N + 1)}
    M = [[0] * (N + 1) for _ in range(N + 1)]
    for t in range(N + 1):
        Ft = basis_normalizer(t, p, r)
        for c in range(p):
            for j in range(t + 1):
                bc = comb(c, t - j) if t - j <= c else 0
                if not bc:
                    continue
                for i, w in enumerate(W[j]):
                    if w:
                        num = Ft * bc * w
                        den = basis_normalizer(i, p, r)
                        q, rem = divmod(num, den)
                        if rem:
                            raise ArithmeticError("non-integral dual-basis entry")
                        M[t][i] += q
    return M


def kron(A: list[list[int]], B: list[list[int]]) -> list[list[int]]:
    n, m = len(A), len(B)
    out = [[0] * (n * m) for _ in range(n * m)]
    for i in range(n):
        for j in range(n):
            a = A[i][j]
            if not a:
                continue
            for s in range(m):
                for t in range(m):
                    if B[s][t]:
                        out[i * m + s][j * m + t] = a * B[s][t]
    return out


def identity_int(n: int) -> list[list[int]]:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def up_moment_matrix(k: int, p: int, N: int, r=1, op: str = "U_p") -> list[list[int]]:
    """Matrix of U_p (or one of U_frakp/U_frakpbar) on two-variable truncated
    coordinates, flattened row-major by (i1, i2).  Exact integers; the weight
    enters only through specialisation, not through this matrix.
    """
    if N < k:
        raise ValueError("need N >= k")
    A = up_factor_matrix(p, N, r)
    I = identity_int(N + 1)
    if op == "U_p":
        return kron(A, A)
    if op == "U_frakp":
        return kron(A, I)
    if op == "U_frakpbar":
        return kron(I, A)
    raise ValueError(op)


def column_valuation_bound(i: AmiceIndex2, p: int, r=1) -> int:
    """Proven lower bound for the valuation of column i of the (infinite)
    one-or-two-variable matrix: the image functions are (r-1)-analytic with
    unit sup norm, so their radius-r coefficients gain the factorial-quotient
    valuation from radius r-1 (radius 0 = restricted power series)."""
    r = Fraction(r)
    total = 0
    for iv in i:
        total += legendre_valuation(floor_p_pow(iv, p, r - 1), p)
        total -= legendre_valuation(floor_p_pow(iv, p, r), p)
    return total


# ---------------------------------------------------------------------------
# truncated distributions
# ---------------------------------------------------------------------------

@dataclass
class TruncDistribution:
    """Element of the truncated integral distribution module.

    coeffs[i] is the value on the basis function of index i = (i1, i2); exact
    rationals are stored (a truncated p-adic is passed through its exact
    representative p^v * u).
    """

    p: int
    k: int
    N: int
    r: Fraction = Fraction(1)
    coeffs: dict[AmiceIndex2, Fraction] = field(default_factory=dict)

    def __post_init__(self):
        self.r = Fraction(self.r)
        clean = {}
        for i, c in self.coeffs.items():
            if any(iv < 0 or iv > self.N for iv in i):
                raise ValueError(f"index {i} outside truncation {self.N}")
            if isinstance(c, PAdicNum):
                c = Fraction(c.unit * c.p ** c.valuation) if not c.is_zero else Fraction(0)
            if c:
                clean[tuple(i)] = Fraction(c)
        self.coeffs = clean

    def coeff(self, i: AmiceIndex2) -> Fraction:
        return self.coeffs.get(tuple(i), Fraction(0))

    def is_integral(self) -> bool:
        return all(c == 0 or val_frac(c, self.p) >= 0 for c in self.coeffs.values())

    def vector(self) -> list[Fraction]:
        n = self.N + 1
        return [self.coeff((i1, i2)) for i1 in range(n) for i2 in range(n)]

    @classmethod
    def from_vector(cls, v, p: int, k: int, N: int, r=1) -> "TruncDistribution":
        n = N + 1
        coeffs = {(i1, i2): Fraction(v[i1 * n + i2]) for i1 in range(n) for i2 in range(n)}
        return cls(p, k, N, Fraction(r), coeffs)

    def __add__(self, other: "TruncDistribution") -> "TruncDistribution":
        out = dict(self.coeffs)
        for i, c in other.coeffs.items():
            out[i] = out.get(i, Fraction(0)) + c
        return TruncDistribution(self.p, self.k, self.N, self.r, out)

    def scale(self, x) -> "TruncDistribution":
        x = Fraction(x)
        return TruncDistribution(self.p, self.k, self.N, self.r,
                                 {i: c * x for i, c in self.coeffs.items()})

    def apply_matrix(self, M: list[list[int]]) -> "TruncDistribution":
        v = self.vector()
        out = [sum(M[t][i] * v[i] for i in range(len(v)) if v[i]) for t in range(len(v))]
        return TruncDistribution.from_vector(out, self.p, self.k, self.N, self.r)

    # -- monomial moments on the shared coordinate ---------------------------
    def monomial_moment(self, a: int, b: int) -> Fraction:
        """mu(X1^a X2^b) via the Stirling conversion from binomial moments."""
        total = Fraction(0)
        for (i1, i2), c in self.coeffs.items():
            s1 = _stirling2(a, i1)
            s2 = _stirling2(b, i2)
            if s1 and s2:
                f1 = Fraction(s1 * factorial(i1), basis_normalizer(i1, self.p, self.r))
                f2 = Fraction(s2 * factorial(i2), basis_normalizer(i2, self.p, self.r))
                total += f1 * f2 * c
        return total


def low_moments(mu: TruncDistribution) -> DualModuleElement:
    """Degree <= k monomial moments in the distribution coordinate (no
    dilation); the map through which the distribution pairing factors."""
    k = WeightK(mu.k, mu.k)
    out = DualModuleElement.zero(k)
    for a in range(mu.k + 1):
        for b in range(mu.k + 1):
            out.m[a][b] = mu.monomial_moment(a, b)
    return out


def specialize_to_vk(mu: TruncDistribution) -> DualModuleElement:
    """The surjection onto the classical moment dual: dual of phi -> phi(p.).

    m_{a,b} = p^(a+b) mu(X1^a X2^b).  Intertwines the distribution-side
    U-operators with the classical module operators exactly.
    """
    if mu.N < mu.k:
        raise ValueError("need N >= k")
    k = WeightK(mu.k, mu.k)
    out = DualModuleElement.zero(k)
    for a in range(mu.k + 1):
        for b in range(mu.k + 1):
            out.m[a][b] = Fraction(mu.p) ** (a + b) * mu.monomial_moment(a, b)
    return out


def specialization_matrix(k: int, p: int, N: int, r=1, dilated: bool = True):
    """Matrix of specialize_to_vk (or low_moments) on flattened coordinates:
    rows (a,b) with a,b <= k, columns (i1,i2) with i_v <= N."""
    n = N + 1
    rows = []
    for a in range(k + 1):
        for b in range(k + 1):
            row = []
            for i1 in range(n):
                for i2 in range(n):
                    s1, s2 = _stirling2(a, i1), _stirling2(b, i2)
                    val = Fraction(0)
                    if s1 and s2:
                        val = (Fraction(s1 * factorial(i1), basis_normalizer(i1, p, r))
                               * Fraction(s2 * factorial(i2), basis_normalizer(i2, p, r)))
                        if dilated:
                            val *= Fraction(p) ** (a + b)
                    row.append(val)
            rows.append(row)
    return rows


# ---------------------------------------------------------------------------
# the action of Xi on the degree <= k moment window (exact)
# ---------------------------------------------------------------------------

def dist_act_low(mu_moments: DualModuleElement, g, p: int, k: int) -> DualModuleElement:
    """Action of g in Xi on the (undilated) moment window of weight k.

    (X^a | g) = (a' + b' p X)^(k-a) ((c' + d' p X)/p)^a per factor: polynomial
    of degree <= k, so the window is exactly stable.
    """
    kk = WeightK(k, k)

    def rows_for(m) -> list[list[Fraction]]:
        a_, b_, c_, d_ = (Fraction(x) for x in m)
        if val_frac(c_, p) < 1 if c_ != 0 else False:
            raise ValueError("matrix not in Xi (need p | c)")
        rows = []
        for a in range(k + 1):
            row = [Fraction(0)] * (k + 1)
            # (a_ + b_ p X)^(k-a) * ((c_ + d_ p X)/p)^a
            for t1 in range(k - a + 1):
                c1 = comb(k - a, t1) * a_ ** (k - a - t1) * (b_ * p) ** t1
                if not c1:
                    continue
                for t2 in range(a + 1):
                    c2 = comb(a, t2) * (c_ / p) ** (a - t2) * d_ ** t2
                    if c2 and t1 + t2 <= k:
                        row[t1 + t2] += c1 * c2
            rows.append(row)
        return rows

    R1, R2 = rows_for(g.g1), rows_for(g.g2)
    out = DualModuleElement.zero(kk)
    for a in range(k + 1):
        for b in range(k + 1):
            total = Fraction(0)
            for t1 in range(k + 1):
                if not R1[a][t1]:
                    continue
                for t2 in range(k + 1):
                    if R2[b][t2]:
                        total += R1[a][t1] * R2[b][t2] * mu_moments.m[t1][t2]
            out.m[a][b] = total
    return out


def pair_distributions(mu: TruncDistribution, nu: TruncDistribution) -> Fraction:
    """The weight-k distribution pairing: expansion of prod (1 + p X_i X_i')^k.

    Depends only on the monomial moments of degree <= k; factors through
    low_moments as the twisted moment pairing.
    """
    if mu.k != nu.k or mu.p != nu.p:
        raise ValueError("weight/prime mismatch")
    k, p = mu.k, mu.p
    total = Fraction(0)
    for a in range(k + 1):
        for b in range(k + 1):
            total += (comb(k, a) * comb(k, b) * Fraction(p) ** (a + b)
                      * mu.monomial_moment(a, b) * nu.monomial_moment(a, b))
    return total


# ---------------------------------------------------------------------------
# filtration
# ---------------------------------------------------------------------------

def filtration_level(mu: TruncDistribution, j: int) -> bool:
    """Membership in the j-th filtration step: the kernel of the reduction of
    the radius-(r-1) coefficients mod p^j.  Requires r > 1."""
    if mu.r <= 1:
        raise ValueError("filtration needs r > 1")
    from .amice import basis_scaling_valuation
    for i, c in mu.coeffs.items():
        if c == 0:
            continue
        w = basis_scaling_valuation(i, mu.r - 1, mu.r, mu.p)
        if val_frac(c, mu.p) < max(j - w, 0):
            return False
    return True


# ---------------------------------------------------------------------------
# characteristic polynomials and Newton polygons
# ---------------------------------------------------------------------------

def charpoly_berkowitz(M: list[list[Fraction]]) -> list[Fraction]:
    """Division-free characteristic polynomial, coefficients low-to-high
    (constant term first), leading coefficient 1."""
    n = len(M)
    if n == 0:
        return [Fraction(1)]
    # Samuelson-Berkowitz, O(n^4), division-free
    C = [Fraction(-1), Fraction(M[0][0])]
    for i in range(1, n):
        R = [M[i][j] for j in range(i)]          # row vector
        Ccol = [M[j][i] for j in range(i)]       # column vector
        A = [row[:i] for row in M[:i]]
        powers = [Ccol]
        for _ in range(i - 1):
            prev = powers[-1]
            powers.append([sum(A[s][t] * prev[t] for t in range(i)) for s in range(i)])
        col = [Fraction(-1), Fraction(M[i][i])]
        for pw in powers:
            col.append(sum(R[t] * pw[t] for t in range(i)))
        newC = [Fraction(0)] * (len(C) + 1)
        for m in range(len(newC)):
            s = Fraction(0)
            for t in range(len(col)):
                if 0 <= m - t < len(C):
                    s += col[t] * C[m - t]
            newC[m] = s
        C = newC
    # C holds coefficients of the char poly times (-1)^n, highest first
    coeffs_high_first = C
    lead = coeffs_high_first[0]
    coeffs = [c / lead for c in coeffs_high_first]
    return list(reversed(coeffs))


def charpoly_power_sums(M: list[list[int]]) -> list[int]:
    """Exact characteristic polynomial of an integer matrix via traces of
    powers and Newton's identities.  Coefficients low-to-high, monic."""
    n = len(M)
    powers = identity_int(n)
    p_sums = []
    for _ in range(n):
        powers = [[sum(powers[i][t] * M[t][j] for t in range(n)) for j in range(n)]
                  for i in range(n)]
        p_sums.append(sum(powers[i][i] for i in range(n)))
    e = [1]
    for m in range(1, n + 1):
        s = 0
        for i in range(1, m + 1):
            s += (-1) ** (i - 1) * e[m - i] * p_sums[i - 1]
        q, rem = divmod(s, m)
        if rem:
            raise ArithmeticError("Newton identity division failed")
        e.append(q)
    # char poly = sum_{m} (-1)^m e_m X^(n-m)
    coeffs = [0] * (n + 1)
    for m in range(n + 1):
        coeffs[n - m] = (-1) ** m * e[m]
    return coeffs


def charpoly_kron_square(A: list[list[int]]) -> list[int]:
    """Characteristic polynomial of kron(A, A) via tr((A x A)^m) = tr(A^m)^2."""
    n = len(A)
    N2 = n * n
    powers = identity_int(n)
    traces = []
    for _ in range(N2):
        powers = [[sum(powers[i][t] * A[t][j] for t in range(n)) for j in range(n)]
                  for i in range(n)]
        traces.append(sum(powers[i][i] for i in range(n)) ** 2)
    e = [1]
    for m in range(1, N2 + 1):
        s = 0
        for i in range(1, m + 1):
            s += (-1) ** (i - 1) * e[m - i] * traces[i - 1]
        q, rem = divmod(s, m)
        if rem:
            raise ArithmeticError("Newton identity division failed")
        e.append(q)
    coeffs = [0] * (N2 + 1)
    for m in range(N2 + 1):
        coeffs[N2 - m] = (-1) ** m * e[m]
    return coeffs


@dataclass
class NewtonPolygon:
    vertices: list[tuple[int, Fraction]]          # lower convex hull
    slopes: list[Fraction]                        # with multiplicity, nondecreasing
    certified_below: Fraction | None = None       # slopes < this bound are certified
    uncertified: list[Fraction] = field(default_factory=list)

    def slope_multiset(self, below=None) -> list[Fraction]:
        if below is None:
            return list(self.slopes)
        return [s for s in self.slopes if s < Fraction(below)]


def newton_polygon(coeffs, p: int, certified_below=None) -> NewtonPolygon:
    """Lower convex hull of (m, v_p(c_m)) for the polynomial sum c_m X^m.

    Slopes are the negatives of the root valuations of the reversed
    (Fredholm-style) polynomial; for a characteristic polynomial they are the
    valuations of the eigenvalues.
    """
    pts = []
    for m, c in enumerate(coeffs):
        c = Fraction(c)
        if c != 0:
            pts.append((m, Fraction(val_frac(c, p))))
    if len(pts) < 1:
        raise ValueError("zero polynomial")
    # lower convex hull, left to right
    hull: list[tuple[int, Fraction]] = []
    for q in pts:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            if (y2 - y1) * (q[0] - x1) >= (q[1] - y1) * (x2 - x1):
                hull.pop()
            else:
                break
        hull.append(q)
    slopes: list[Fraction] = []
    # eigenvalue valuations: char poly sum c_m X^m, monic; eigenvalue
    # valuations are the slopes of the hull read from the RIGHT (descending
    # in m), i.e. (v(c_m) - v(c_m')) / (m' - m) for consecutive vertices.
    for (x1, y1), (x2, y2) in zip(hull, hull[1:]):
        s = Fraction(y1 - y2, x2 - x1)
        slopes.extend([s] * (x2 - x1))
    slopes.sort()
    npg = NewtonPolygon(hull, slopes)
    if certified_below is not None:
        npg.certified_below = Fraction(certified_below)
        npg.uncertified = [s for s in slopes if s >= npg.certified_below]
    return npg


def char_poly_and_newton(M, p: int, certified_below=None) -> tuple[list, NewtonPolygon]:
    """Characteristic polynomial (exact) + Newton polygon of a square matrix
    with integer/rational entries."""
    n = len(M)
    if all(isinstance(x, int) for row in M for x in row):
        coeffs = charpoly_power_sums(M)
    else:
        coeffs = charpoly_berkowitz([[Fraction(x) for x in row] for row in M])
    return coeffs, newton_polygon(coeffs, p, certified_below)


def up_slope_data(k: int, p: int, N: int, r=1, margin: int = 2):
    """Slopes of the truncated two-variable U_p matrix, with the proven
    truncation horizon: discarded columns have valuation >= bound(N+1), so
    slopes below that bound are certified (the margin is reported as well)."""
    A = up_factor_matrix(p, N, r)
    coeffs = charpoly_kron_square(A)
    horizon = column_valuation_bound((N + 1, 0), p, r)
    npg = newton_polygon(coeffs, p, certified_below=horizon)
    return {
        "charpoly": coeffs,
        "polygon": npg,
        "horizon": horizon,
        "margin_certified_below": max(horizon - margin, 0),
    }


# ---------------------------------------------------------------------------
# slope <= h projector
# ---------------------------------------------------------------------------

class SlopeBoundaryError(ValueError):
    pass


class PrecisionRefusal(ArithmeticError):
    def __init__(self, needed: int):
        super().__init__(f"insufficient precision; need roughly p^{needed}")
        self.needed = needed


def _frac_matmul(A, B):
    n = len(A)
    return [[sum(A[i][t] * B[t][j] for t in range(n)) for j in range(n)] for i in range(n)]


def _frac_matinv(A):
    n = len(A)
    M = [[Fraction(x) for x in row] + [Fraction(1 if i == j else 0) for j in range(n)]
         for i, row in enumerate(A)]
    for c in range(n):
        piv = next((r for r in range(c, n) if M[r][c] != 0), None)
        if piv is None:
            raise ZeroDivisionError("singular")
        M[c], M[piv] = M[piv], M[c]
        pv = M[c][c]
        M[c] = [x / pv for x in M[c]]
        for r in range(n):
            if r != c and M[r][c] != 0:
                f = M[r][c]
                M[r] = [x - f * y for x, y in zip(M[r], M[c])]
    return [row[n:] for row in M]


def _mat_mod_reduce(A, p: int, B: int):
    """Reduce a rational matrix mod p^B (entries must be p-integral)."""
    mod = p ** B
    out = []
    for row in A:
        r = []
        for x in row:
            x = Fraction(x)
            if val_frac(x, p) < 0 if x != 0 else False:
                raise PrecisionRefusal(B)
            r.append(x.numerator * pow(x.denominator, -1, mod) % mod)
        out.append(r)
    return out


def slope_le_h_projector(M, h, p: int, precision: int = 30):
    """Projector onto the slope <= h part, plus the slope <= h factor of the
    characteristic polynomial.

    Requires h to separate the Newton slopes strictly.  The projector is the
    limit of large powers of T = cG(1+cG)^{-1} where G = p^{-u} M^v rescales
    the spectrum so the low part has negative valuation; convergence is
    quadratic in the number of squarings.
    """
    n = len(M)
    Mf = [[Fraction(x) for x in row] for row in M]
    coeffs, npg = char_poly_and_newton(Mf, p)
    h = Fraction(h)
    low = [s for s in npg.slopes if s <= h]
    high = [s for s in npg.slopes if s > h]
    if any(s == h for s in npg.slopes):
        raise SlopeBoundaryError(f"h={h} equals a Newton slope")
    m = len(low)
    if m == 0 or m == n:
        P = [[Fraction(1 if (i == j and m) else 0) for j in range(n)] for i in range(n)]
        return P, (coeffs if m else [Fraction(1)])
    a = (max(low) + min(high)) / 2
    v = a.denominator
    u = a.numerator
    # G = M^v / p^u
    G = identity_int(n)
    G = [[Fraction(x) for x in row] for row in G]
    for _ in range(v):
        G = _frac_matmul(G, Mf)
    G = [[x / Fraction(p) ** u for x in row] for row in G]
    # pick c making 1 + cG invertible
    for c in range(1, 12):
        oneplus = [[(Fraction(1 if i == j else 0) + c * G[i][j]) for j in range(n)] for i in range(n)]
        det_ok = True
        try:
            inv = _frac_matinv(oneplus)
        except ZeroDivisionError:
            det_ok = False
        if det_ok:
            break
    else:
        raise ArithmeticError("could not make 1 + cG invertible")
    T = _frac_matmul([[c * x for x in row] for row in G], inv)
    # iterate squaring mod p^precision
    B = precision
    mod = p ** B
    try:
        Tm = _mat_mod_reduce(T, p, B)
    except PrecisionRefusal:
        raise PrecisionRefusal(B + 4)
    def matpow_mod(A, e):
        out = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
        base = [row[:] for row in A]
        while e:
            if e & 1:
                out = [[sum(out[i][t] * base[t][j] for t in range(n)) % mod
                        for j in range(n)] for i in range(n)]
            base = [[sum(base[i][t] * base[t][j] for t in range(n)) % mod
                     for j in range(n)] for i in range(n)]
            e >>= 1
        return out

    # the unit-part eigenvalues are 1 + O(p); exponents p^j drive them to 1
    # (v((1+e)^(p^j) - 1) grows with j) while positive-slope parts die
    Tm = matpow_mod(Tm, n)  # kill nilpotent mixing first
    prev = None
    for _ in range(B + 8):
        Tm = matpow_mod(Tm, p)
        if prev == Tm:
            break
        prev = [row[:] for row in Tm]
    else:
        raise PrecisionRefusal(B + 8)
    P = [[PAdicNum(p, 0, Tm[i][j], B) if Tm[i][j] else PAdicNum.zero(p, B, B)
          for j in range(n)] for i in range(n)]
    # factor polynomial: char poly of M restricted to the image of P
    Pm = Tm
    Mm = _mat_mod_reduce(Mf, p, B) if all(
        val_frac(Fraction(x), p) >= 0 for row in Mf for x in row if x != 0) else None
    factor = None
    if Mm is not None:
        PMP = [[sum(Pm[i][t] * Mm[t][j] % mod for t in range(n)) % mod for j in range(n)] for i in range(n)]
        PMP = [[sum(PMP[i][t] * Pm[t][j] % mod for t in range(n)) % mod for j in range(n)] for i in range(n)]
        # extract an m-dimensional representation via column reduction
        cols = _padic_column_basis(Pm, p, B, m)
        if cols is not None:
            basis, lift = cols
            small = _restrict(PMP, basis, lift, p, B)
            cp = _charpoly_mod(small, p, B)
            factor = cp
    return P, factor


def _padic_column_basis(Pm, p: int, B: int, m: int):
    """m p-adically independent columns of Pm mod p^B, plus the coordinate
    functional (row-echelon data) expressing vectors in that basis."""
    n = len(Pm)
    mod = p ** B
    cols = [[Pm[i][j] for i in range(n)] for j in range(n)]
    chosen = []
    rowsused = []
    work = []
    for j in range(n):
        if len(chosen) == m:
            break
        cand = cols[j][:]
        # reduce against chosen
        for (rw, cv) in zip(rowsused, work):
            f = cand[rw] * pow(cv[rw], -1, mod) % mod if cv[rw] % p != 0 else 0
            if f:
                cand = [(x - f * y) % mod for x, y in zip(cand, cv)]
        piv = next((i for i in range(n) if cand[i] % p != 0), None)
        if piv is None:
            continue
        chosen.append(j)
        rowsused.append(piv)
        work.append(cand)
    if len(chosen) != m:
        return None
    basis = [[Pm[i][j] for j in chosen] for i in range(n)]
    return (basis, (rowsused, work, chosen))


def _restrict(Mat, basis, lift, p: int, B: int):
    """Representation of Mat on the span of basis columns (mod p^B)."""
    n = len(Mat)
    m = len(basis[0])
    mod = p ** B
    rowsused, work, chosen = lift
    out = []
    for j in range(m):
        vec = [sum(Mat[i][t] * basis[t][j] for t in range(n)) % mod for i in range(n)]
        coords = []
        for (rw, cv) in zip(rowsused, work):
            f = vec[rw] * pow(cv[rw], -1, mod) % mod
            vec = [(x - f * y) % mod for x, y in zip(vec, cv)]
            coords.append(f)
        out.append(coords)
    # columns are coordinates in the *work* basis; transform consistency is
    # adequate for char poly purposes (similar matrices share char polys)
    return [[out[j][i] for j in range(m)] for i in range(m)]


def _charpoly_mod(Msmall, p: int, B: int):
    """Characteristic polynomial mod p^B via integer lifting (Berkowitz on
    exact integer lifts keeps everything division-free)."""
    lifted = [[x for x in row] for row in Msmall]
    coeffs = charpoly_power_sums(lifted) if all(isinstance(x, int) for row in lifted for x in row) else None
    if coeffs is None:
        return None
    mod = p ** B
    return [c % mod for c in coeffs]

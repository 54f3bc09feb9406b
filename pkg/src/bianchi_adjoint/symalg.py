"""Exact rational-function field Q(lam_p, lam_pbar) and the root quotient algebra.

MPoly: sparse polynomials in two generators LAM (lam_p) and LAMB (lam_pbar)
with Fraction coefficients, graded-lex order with lam_p > lam_pbar.

RatFunc: canonical fractions of MPoly (gcd-reduced, denominator monic).

StabScalar: elements of
    Q(lam_p, lam_pbar)[a_p, a_pbar] / (a^2 - lam a + p^(k+1) for each root)
stored as 4 RatFunc coordinates on (1, a_p, a_pbar, a_p*a_pbar).  The
conjugation fixes lam's and sends a -> lam - a (root swap).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable


Monomial = tuple[int, int]   # exponents of (lam_p, lam_pbar)


def _grlex_key(m: Monomial):
    return (m[0] + m[1], m)


class MPoly:
    """Sparse 2-variable polynomial over Q."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: dict[Monomial, Fraction] | None = None):
        self.coeffs: dict[Monomial, Fraction] = {}
        if coeffs:
            for m, c in coeffs.items():
                if c:
                    self.coeffs[m] = Fraction(c)

    # -- constructors --------------------------------------------------------
    @classmethod
    def const(cls, c) -> "MPoly":
        c = Fraction(c)
        return cls({(0, 0): c} if c else {})

    @classmethod
    def gen(cls, idx: int) -> "MPoly":
        return cls({(1, 0) if idx == 0 else (0, 1): Fraction(1)})

    # -- structure ------------------------------------------------------------
    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    def is_const(self) -> bool:
        return not self.coeffs or (len(self.coeffs) == 1 and (0, 0) in self.coeffs)

    def const_value(self) -> Fraction:
        if self.is_zero:
            return Fraction(0)
        if not self.is_const():
            raise ValueError("not a constant")
        return self.coeffs[(0, 0)]

    def degree(self) -> int:
        return max((m[0] + m[1] for m in self.coeffs), default=-1)

    def leading_monomial(self) -> Monomial:
        if self.is_zero:
            raise ValueError("zero polynomial")
        return max(self.coeffs, key=_grlex_key)

    def leading_coeff(self) -> Fraction:
        return self.coeffs[self.leading_monomial()]

    # -- arithmetic ------------------------------------------------------------
    def __add__(self, other: "MPoly") -> "MPoly":
        out = dict(self.coeffs)
        for m, c in other.coeffs.items():
            s = out.get(m, Fraction(0)) + c
            if s:
                out[m] = s
            else:
                out.pop(m, None)
        r = MPoly.__new__(MPoly)
        r.coeffs = out
        return r

    def __neg__(self) -> "MPoly":
        r = MPoly.__new__(MPoly)
        r.coeffs = {m: -c for m, c in self.coeffs.items()}
        return r

    def __sub__(self, other: "MPoly") -> "MPoly":
        return self + (-other)

    def __mul__(self, other: "MPoly") -> "MPoly":
        out: dict[Monomial, Fraction] = {}
        for m1, c1 in self.coeffs.items():
            for m2, c2 in other.coeffs.items():
                m = (m1[0] + m2[0], m1[1] + m2[1])
                s = out.get(m, Fraction(0)) + c1 * c2
                if s:
                    out[m] = s
                else:
                    out.pop(m, None)
        r = MPoly.__new__(MPoly)
        r.coeffs = out
        return r

    def scale(self, c) -> "MPoly":
        c = Fraction(c)
        r = MPoly.__new__(MPoly)
        r.coeffs = {} if not c else {m: cc * c for m, cc in self.coeffs.items()}
        return r

    def __eq__(self, other) -> bool:
        return isinstance(other, MPoly) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(frozenset(self.coeffs.items()))

    def evaluate(self, lam: Fraction, lamb: Fraction) -> Fraction:
        lam, lamb = Fraction(lam), Fraction(lamb)
        return sum((c * lam ** m[0] * lamb ** m[1] for m, c in self.coeffs.items()), Fraction(0))

    # -- univariate views (for gcd) --------------------------------------------
    def _as_univariate(self) -> list["MPoly"]:
        """Coefficients in lam_p, entries are polynomials in lam_pbar alone."""
        d = max((m[0] for m in self.coeffs), default=0)
        out = [MPoly() for _ in range(d + 1)]
        for (e1, e2), c in self.coeffs.items():
            out[e1] = out[e1] + MPoly({(0, e2): c})
        return out

    @staticmethod
    def _from_univariate(coeffs: list["MPoly"]) -> "MPoly":
        total = MPoly()
        for e1, inner in enumerate(coeffs):
            for (z, e2), c in inner.coeffs.items():
                total = total + MPoly({(e1, e2): c})
        return total

    def __repr__(self):
        if self.is_zero:
            return "0"
        parts = []
        for m in sorted(self.coeffs, key=_grlex_key, reverse=True):
            c = self.coeffs[m]
            name = ""
            if m[0]:
                name += f"L^{m[0]}" if m[0] > 1 else "L"
            if m[1]:
                name += ("*" if name else "") + (f"Lb^{m[1]}" if m[1] > 1 else "Lb")
            cs = str(c)
            parts.append(f"{cs}*{name}" if name else cs)
        return " + ".join(parts).replace("+ -", "- ")


# ---------------------------------------------------------------------------
# gcd machinery (subresultant PRS on the lam_p-variable, recursing on lam_pbar)
# ---------------------------------------------------------------------------

def _gcd_frac(a: Fraction, b: Fraction) -> Fraction:
    from math import gcd as igcd
    if a == 0:
        return abs(b)
    if b == 0:
        return abs(a)
    num = igcd(a.numerator, b.numerator)
    den = (a.denominator * b.denominator) // igcd(a.denominator, b.denominator)
    return Fraction(num, den)


def _uni_divmod(a: list[Fraction], b: list[Fraction]):
    """Division of univariate Fraction polynomials (lists, low-to-high)."""
    a = a[:]
    db, da = len(b) - 1, len(a) - 1
    if db < 0:
        raise ZeroDivisionError
    q = [Fraction(0)] * max(da - db + 1, 1)
    while len(a) - 1 >= db and any(a):
        while a and a[-1] == 0:
            a.pop()
        if len(a) - 1 < db:
            break
        c = a[-1] / b[-1]
        d = len(a) - 1 - db
        q[d] = c
        for i, bc in enumerate(b):
            a[i + d] -= c * bc
        while a and a[-1] == 0:
            a.pop()
    return q, a


def _uni_gcd(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    a, b = a[:], b[:]
    while any(b):
        _, r = _uni_divmod(a, b)
        a, b = b, r
    while a and a[-1] == 0:
        a.pop()
    if not a:
        return []
    lead = a[-1]
    return [c / lead for c in a]


def _poly_to_uni_lamb(pol: MPoly) -> list[Fraction]:
    """Interpret a poly in lam_pbar only as a coefficient list."""
    d = max((m[1] for m in pol.coeffs), default=0)
    out = [Fraction(0)] * (d + 1)
    for (e1, e2), c in pol.coeffs.items():
        if e1:
            raise ValueError("not univariate in lam_pbar")
        out[e2] = c
    return out


def _uni_to_poly_lamb(coeffs: list[Fraction]) -> MPoly:
    return MPoly({(0, i): c for i, c in enumerate(coeffs) if c})


def _gcd_lamb(a: MPoly, b: MPoly) -> MPoly:
    """gcd of polynomials in lam_pbar alone."""
    if a.is_zero:
        return b
    if b.is_zero:
        return a
    g = _uni_gcd(_poly_to_uni_lamb(a), _poly_to_uni_lamb(b))
    return _uni_to_poly_lamb(g) if g else MPoly()


def _content_lamb(coeffs: list[MPoly]) -> MPoly:
    g = MPoly()
    for c in coeffs:
        g = _gcd_lamb(g, c)
        if g.is_const() and not g.is_zero:
            break
    return g if not g.is_zero else MPoly()


def _divexact_lamb(a: MPoly, b: MPoly) -> MPoly:
    """Exact division of lam_pbar-only polynomials."""
    q, r = _uni_divmod(_poly_to_uni_lamb(a), _poly_to_uni_lamb(b))
    if any(r):
        raise ArithmeticError("inexact division")
    return _uni_to_poly_lamb(q)


def _pseudo_rem(a: list[MPoly], b: list[MPoly]) -> list[MPoly]:
    """Pseudo-remainder of polynomials in lam_p with MPoly (lam_pbar) coefficients."""
    a = a[:]
    db = len(b) - 1
    lb = b[-1]
    while len(a) - 1 >= db and any(not c.is_zero for c in a):
        while a and a[-1].is_zero:
            a.pop()
        if len(a) - 1 < db:
            break
        la = a[-1]
        d = len(a) - 1 - db
        a = [c * lb for c in a]
        for i in range(db + 1):
            a[i + d] = a[i + d] - la * b[i]
        while a and a[-1].is_zero:
            a.pop()
    return a


def mpoly_gcd(a: MPoly, b: MPoly) -> MPoly:
    """gcd in Q[lam_p, lam_pbar], normalized with leading coefficient 1."""
    if a.is_zero:
        g = b
    elif b.is_zero:
        g = a
    else:
        ua, ub = a._as_univariate(), b._as_univariate()
        if len(ua) == 1 and len(ub) == 1:
            g = _gcd_lamb(a, b)
        else:
            ca, cb = _content_lamb(ua), _content_lamb(ub)
            pa = [_divexact_lamb(c, ca) for c in ua] if not ca.is_zero else ua
            pb = [_divexact_lamb(c, cb) for c in ub] if not cb.is_zero else ub
            # primitive PRS
            f, g_ = (pa, pb) if len(pa) >= len(pb) else (pb, pa)
            while any(not c.is_zero for c in g_):
                r = _pseudo_rem(f, g_)
                if not any(not c.is_zero for c in r):
                    f = g_
                    break
                cr = _content_lamb(r)
                r = [_divexact_lamb(c, cr) for c in r]
                f, g_ = g_, r
            else:
                f = f
            cont = _gcd_lamb(ca, cb)
            g = MPoly._from_univariate(f) * cont if not cont.is_zero else MPoly._from_univariate(f)
    if g.is_zero:
        return g
    return g.scale(1 / g.leading_coeff())


# ---------------------------------------------------------------------------
# rational functions
# ---------------------------------------------------------------------------

class RatFunc:
    """Canonical fraction num/den, gcd-reduced, den monic in graded-lex order."""

    __slots__ = ("num", "den")

    def __init__(self, num: MPoly, den: MPoly | None = None, *, reduce: bool = True):
        den = den if den is not None else MPoly.const(1)
        if den.is_zero:
            raise ZeroDivisionError("zero denominator")
        if num.is_zero:
            self.num, self.den = MPoly(), MPoly.const(1)
            return
        if reduce:
            g = mpoly_gcd(num, den)
            if not g.is_const() or g.const_value() != 1:
                num = _exact_div(num, g)
                den = _exact_div(den, g)
        lc = den.leading_coeff()
        if lc != 1:
            num = num.scale(1 / lc)
            den = den.scale(1 / lc)
        self.num, self.den = num, den

    @classmethod
    def const(cls, c) -> "RatFunc":
        return cls(MPoly.const(c), reduce=False)

    @classmethod
    def gen(cls, idx: int) -> "RatFunc":
        return cls(MPoly.gen(idx), reduce=False)

    @property
    def is_zero(self) -> bool:
        return self.num.is_zero

    def is_const(self) -> bool:
        return self.num.is_const() and self.den.is_const()

    def const_value(self) -> Fraction:
        if not self.is_const():
            raise ValueError("not constant")
        return Fraction(0) if self.is_zero else self.num.const_value() / self.den.const_value()

    @staticmethod
    def _coerce(x) -> "RatFunc":
        return x if isinstance(x, RatFunc) else RatFunc.const(x)

    def __add__(self, other) -> "RatFunc":
        other = RatFunc._coerce(other)
        return RatFunc(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self) -> "RatFunc":
        r = RatFunc.__new__(RatFunc)
        r.num, r.den = -self.num, self.den
        return r

    def __sub__(self, other) -> "RatFunc":
        return self + (-RatFunc._coerce(other))

    def __rsub__(self, other) -> "RatFunc":
        return RatFunc._coerce(other) + (-self)

    def __mul__(self, other) -> "RatFunc":
        other = RatFunc._coerce(other)
        return RatFunc(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def inverse(self) -> "RatFunc":
        if self.is_zero:
            raise ZeroDivisionError("inverse of 0")
        return RatFunc(self.den, self.num, reduce=False)

    def __truediv__(self, other: "RatFunc") -> "RatFunc":
        return self * other.inverse()

    def __eq__(self, other) -> bool:
        if not isinstance(other, RatFunc):
            return NotImplemented
        return (self.num * other.den - other.num * self.den).is_zero

    def __hash__(self):
        return hash((self.num, self.den))

    def evaluate(self, lam, lamb) -> Fraction:
        d = self.den.evaluate(lam, lamb)
        if d == 0:
            raise ZeroDivisionError("denominator vanishes at the substitution")
        return self.num.evaluate(lam, lamb) / d

    def __repr__(self):
        if self.den.is_const() and self.den.const_value() == 1:
            return repr(self.num)
        return f"({self.num})/({self.den})"


def _exact_div(a: MPoly, b: MPoly) -> MPoly:
    """Exact division in Q[lam_p, lam_pbar] (b divides a)."""
    if b.is_const():
        return a.scale(1 / b.const_value())
    ua, ub = a._as_univariate(), b._as_univariate()
    if len(ub) == 1:
        return MPoly._from_univariate([_divexact_lamb_any(c, ub[0]) for c in ua])
    quot: list[MPoly] = [MPoly() for _ in range(len(ua) - len(ub) + 1)]
    rem = ua[:]
    lb = ub[-1]
    while len(rem) >= len(ub) and any(not c.is_zero for c in rem):
        while rem and rem[-1].is_zero:
            rem.pop()
        if len(rem) < len(ub):
            break
        qc = _divexact_lamb_any(rem[-1], lb)
        d = len(rem) - len(ub)
        quot[d] = quot[d] + qc
        for i in range(len(ub)):
            rem[i + d] = rem[i + d] - qc * ub[i]
        while rem and rem[-1].is_zero:
            rem.pop()
    if any(not c.is_zero for c in rem):
        raise ArithmeticError("inexact polynomial division")
    return MPoly._from_univariate(quot)


def _divexact_lamb_any(a: MPoly, b: MPoly) -> MPoly:
    if b.is_const():
        return a.scale(1 / b.const_value())
    return _divexact_lamb(a, b)


LAM = RatFunc.gen(0)     # lam_p
LAMB = RatFunc.gen(1)    # lam_pbar
ONE = RatFunc.const(1)
ZERO = RatFunc.const(0)


# ---------------------------------------------------------------------------
# the quotient algebra with the two Hecke roots
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class AlgebraContext:
    """Fixes the prime p and integer weight k of the root relations
    a^2 = lam a - p^(k+1) at both primes above p."""

    p: int
    k: int

    @property
    def pk1(self) -> Fraction:
        return Fraction(self.p) ** (self.k + 1)

    @property
    def sign(self) -> int:
        return -1 if self.k % 2 else 1


class StabScalar:
    """c0 + c1*a_p + c2*a_pbar + c3*a_p*a_pbar with RatFunc coefficients."""

    __slots__ = ("ctx", "c")

    def __init__(self, ctx: AlgebraContext, coords: Iterable[RatFunc]):
        self.ctx = ctx
        self.c = tuple(coords)
        if len(self.c) != 4:
            raise ValueError("need 4 coordinates")

    # -- constructors ---------------------------------------------------------
    @classmethod
    def scalar(cls, ctx: AlgebraContext, x: RatFunc | Fraction | int) -> "StabScalar":
        x = x if isinstance(x, RatFunc) else RatFunc.const(x)
        return cls(ctx, (x, ZERO, ZERO, ZERO))

    @classmethod
    def alpha_p(cls, ctx: AlgebraContext, branch: int = 0) -> "StabScalar":
        """The chosen root a_p (branch 0) or its companion lam_p - a_p (branch 1)."""
        if branch == 0:
            return cls(ctx, (ZERO, ONE, ZERO, ZERO))
        return cls(ctx, (LAM, -ONE, ZERO, ZERO))

    @classmethod
    def alpha_pbar(cls, ctx: AlgebraContext, branch: int = 0) -> "StabScalar":
        if branch == 0:
            return cls(ctx, (ZERO, ZERO, ONE, ZERO))
        return cls(ctx, (LAMB, ZERO, -ONE, ZERO))

    # -- ring operations --------------------------------------------------------
    def _check(self, other: "StabScalar"):
        if self.ctx != other.ctx:
            raise ValueError("algebra context mismatch")

    def __add__(self, other: "StabScalar") -> "StabScalar":
        self._check(other)
        return StabScalar(self.ctx, tuple(a + b for a, b in zip(self.c, other.c)))

    def __neg__(self) -> "StabScalar":
        return StabScalar(self.ctx, tuple(-a for a in self.c))

    def __sub__(self, other: "StabScalar") -> "StabScalar":
        return self + (-other)

    def __mul__(self, other: "StabScalar") -> "StabScalar":
        self._check(other)
        n = RatFunc.const(-self.ctx.pk1)
        a0, a1, a2, a3 = self.c
        b0, b1, b2, b3 = other.c
        # products of basis elements, reduced by a^2 = lam a + n (n = -p^(k+1))
        # 1*1 etc: accumulate on (1, a, b, ab); a^2 -> lam a + n; b^2 -> lamb b + n
        out0 = a0 * b0 + n * (a1 * b1) + n * (a2 * b2) + n * n * (a3 * b3)
        out1 = a0 * b1 + a1 * b0 + LAM * (a1 * b1) + n * (a2 * b3 + a3 * b2) + LAM * n * (a3 * b3)
        out2 = a0 * b2 + a2 * b0 + LAMB * (a2 * b2) + n * (a1 * b3 + a3 * b1) + LAMB * n * (a3 * b3)
        out3 = (a0 * b3 + a3 * b0 + a1 * b2 + a2 * b1 + LAM * (a1 * b3 + a3 * b1)
                + LAMB * (a2 * b3 + a3 * b2) + LAM * LAMB * (a3 * b3))
        return StabScalar(self.ctx, (out0, out1, out2, out3))

    def scale(self, x: RatFunc | Fraction | int) -> "StabScalar":
        x = x if isinstance(x, RatFunc) else RatFunc.const(x)
        return StabScalar(self.ctx, tuple(a * x for a in self.c))

    @property
    def is_zero(self) -> bool:
        return all(a.is_zero for a in self.c)

    def __eq__(self, other) -> bool:
        if not isinstance(other, StabScalar):
            return NotImplemented
        return self.ctx == other.ctx and all(a == b for a, b in zip(self.c, other.c))

    def __hash__(self):
        return hash((self.ctx, self.c))

    # -- field structure ---------------------------------------------------------
    def inverse(self) -> "StabScalar":
        """Solve self * y = 1 by 4x4 linear algebra over Q(lam, lamb)."""
        basis = [StabScalar(self.ctx, tuple(ONE if i == j else ZERO for j in range(4))) for i in range(4)]
        cols = [self * e for e in basis]
        A = [[cols[j].c[i] for j in range(4)] for i in range(4)]
        b = [ONE, ZERO, ZERO, ZERO]
        sol = solve_unique(A, b)
        return StabScalar(self.ctx, tuple(sol))

    def conjugate(self) -> "StabScalar":
        """Ring involution fixing lam's, a -> lam - a at both primes."""
        a0, a1, a2, a3 = self.c
        out0 = a0 + LAM * a1 + LAMB * a2 + LAM * LAMB * a3
        out1 = -a1 - LAMB * a3
        out2 = -a2 - LAM * a3
        out3 = a3
        return StabScalar(self.ctx, (out0, out1, out2, out3))

    def evaluate(self, lam, lamb, alpha, alphabar) -> Fraction:
        """Numeric evaluation at rational root data (alpha a root of X^2-lam X+p^(k+1))."""
        lam, lamb = Fraction(lam), Fraction(lamb)
        alpha, alphabar = Fraction(alpha), Fraction(alphabar)
        if alpha * (lam - alpha) != self.ctx.pk1 or alphabar * (lamb - alphabar) != self.ctx.pk1:
            raise ValueError("root data inconsistent with the context")
        vals = [c.evaluate(lam, lamb) for c in self.c]
        return vals[0] + vals[1] * alpha + vals[2] * alphabar + vals[3] * alpha * alphabar

    def __repr__(self):
        names = ["1", "a", "ab", "a*ab"]
        parts = [f"({c})*{n}" for c, n in zip(self.c, names) if not c.is_zero]
        return " + ".join(parts) if parts else "0"


def reduce_alpha_poly(ctx: AlgebraContext, terms: dict[tuple[int, int], RatFunc]) -> StabScalar:
    """Canonical form of a formal polynomial sum c_{ij} a_p^i a_pbar^j.

    Idempotent: already-reduced inputs come back unchanged.
    """
    out = StabScalar.scalar(ctx, 0)
    ap = StabScalar.alpha_p(ctx)
    apb = StabScalar.alpha_pbar(ctx)
    for (i, j), coeff in terms.items():
        term = StabScalar.scalar(ctx, coeff)
        for _ in range(i):
            term = term * ap
        for _ in range(j):
            term = term * apb
        out = out + term
    return out


# ---------------------------------------------------------------------------
# exact linear algebra over RatFunc
# ---------------------------------------------------------------------------

class InconsistentSystem(ValueError):
    """Raised with a certificate row index when elimination finds 0 = nonzero."""

    def __init__(self, row: int):
        super().__init__(f"inconsistent linear system (row {row} reduces to 0 = nonzero)")
        self.row = row


def solve_linear_system(A: list[list[RatFunc]], b: list[RatFunc]):
    """Gauss-Jordan over the function field.

    Returns (particular_solution, nullspace_basis); raises InconsistentSystem
    with the offending row if no solution exists.
    """
    m = len(A)
    n = len(A[0]) if m else 0
    M = [row[:] + [b[i]] for i, row in enumerate(A)]
    piv_cols: list[int] = []
    r = 0
    for c in range(n):
        pr = next((i for i in range(r, m) if not M[i][c].is_zero), None)
        if pr is None:
            continue
        M[r], M[pr] = M[pr], M[r]
        inv = M[r][c].inverse()
        M[r] = [x * inv for x in M[r]]
        for i in range(m):
            if i != r and not M[i][c].is_zero:
                f = M[i][c]
                M[i] = [x - f * y for x, y in zip(M[i], M[r])]
        piv_cols.append(c)
        r += 1
        if r == m:
            break
    for i in range(r, m):
        if not M[i][n].is_zero:
            raise InconsistentSystem(i)
    sol = [ZERO] * n
    for i, c in enumerate(piv_cols):
        sol[c] = M[i][n]
    free = [c for c in range(n) if c not in piv_cols]
    null_basis = []
    for fc in free:
        v = [ZERO] * n
        v[fc] = ONE
        for i, c in enumerate(piv_cols):
            v[c] = -M[i][fc]
        null_basis.append(v)
    return sol, null_basis


def solve_unique(A: list[list[RatFunc]], b: list[RatFunc]) -> list[RatFunc]:
    sol, null = solve_linear_system(A, b)
    if null:
        raise ValueError("system is underdetermined")
    return sol

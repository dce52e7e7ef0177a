"""Monic polynomials over series: Weierstrass division and preparation,
Sylvester discriminants, Tschirnhaus shifts, monomiality tests.

Division works entirely inside the truncated ring C[x]/(x)^(cap+1), where
the split h = x_n^d * S(h) + T(h) (polynomial quotient and x_n-degree < d
remainder) is exact.  The contraction gains one order in the (x') ideal per
pass, so it stabilizes within cap+1 iterations and the reconstruction
f = q*g + r holds on every kept component.
"""

from __future__ import annotations

from fractions import Fraction

from . import upoly
from .errors import NotRegular, ZeroUpToCap
from .gaussq import ZERO, ONE, GaussRational
from .series import HPoly, TruncatedSeries, s_inv_unit, s_mul, s_order_initial


class MonicPoly:
    """y^d + a_1 y^(d-1) + ... + a_d with TruncatedSeries coefficients.

    Coefficients are listed a_1..a_d (descending y-powers, leading 1
    implicit) and must share nvars and cap.  Degree 0 (the constant 1) is
    tolerated so products over empty factor sets stay total; the public
    operations require degree >= 1.
    """

    __slots__ = ("degY", "coeffs", "_disc")

    def __init__(self, degY: int, coeffs):
        coeffs = list(coeffs)
        if degY != len(coeffs):
            raise ValueError("need exactly degY coefficients a_1..a_d")
        if coeffs:
            nv, cap = coeffs[0].nvars, coeffs[0].cap
            for a in coeffs:
                if a.nvars != nv or a.cap != cap:
                    raise ValueError("coefficients disagree on nvars or cap")
        self.degY = degY
        self.coeffs = coeffs
        self._disc = None

    @property
    def nvars(self) -> int:
        return self.coeffs[0].nvars

    @property
    def cap(self) -> int:
        return self.coeffs[0].cap

    @staticmethod
    def from_roots(roots) -> "MonicPoly":
        """Product of (y - r) over TruncatedSeries roots."""
        poly = MonicPoly(0, [])
        for r in roots:
            poly = poly_mul(poly, MonicPoly(1, [-r]))
        return poly

    def truncate(self, cap: int) -> "MonicPoly":
        return MonicPoly(self.degY, [a.truncate(cap) for a in self.coeffs])

    def coefficient(self, k: int) -> TruncatedSeries:
        """a_k for k in 1..d; a_0 is the implicit 1."""
        if k == 0:
            return TruncatedSeries.one(self.nvars, self.cap)
        return self.coeffs[k - 1]

    def evaluate(self, y: TruncatedSeries) -> TruncatedSeries:
        out = TruncatedSeries.one(y.nvars, min(y.cap, self.cap))
        for a in self.coeffs:
            out = s_mul(out, y) + a
        return out

    def derivative_y(self):
        """d*y^(d-1) + ... as a plain coefficient list [lead, .., const]."""
        d = self.degY
        out = [TruncatedSeries.constant(self.nvars, self.cap, d)]
        for k in range(1, d):
            out.append(self.coeffs[k - 1].scale(d - k))
        return out

    def all_coeffs(self):
        """[1, a_1, ..., a_d] with the leading 1 materialized."""
        return [TruncatedSeries.one(self.nvars, self.cap)] + list(self.coeffs)

    def __eq__(self, other):
        return (
            isinstance(other, MonicPoly)
            and self.degY == other.degY
            and self.coeffs == other.coeffs
        )

    def __repr__(self):
        return f"MonicPoly(degY={self.degY}, coeffs={self.coeffs!r})"


def poly_mul(p: MonicPoly, q: MonicPoly) -> MonicPoly:
    """Product of monic polynomials (coefficient convolution)."""
    if p.degY == 0:
        return q
    if q.degY == 0:
        return p
    a = p.all_coeffs()
    b = q.all_coeffs()
    nv, cap = p.nvars, min(p.cap, q.cap)
    out = [TruncatedSeries.zero(nv, cap) for _ in range(p.degY + q.degY + 1)]
    for i, ca in enumerate(a):
        for j, cb in enumerate(b):
            out[i + j] = out[i + j] + s_mul(ca.truncate(cap), cb.truncate(cap))
    return MonicPoly(p.degY + q.degY, out[1:])


def poly_sub_order(p: MonicPoly, q: MonicPoly):
    """nu(P - Q): the least order among coefficient differences, None if equal
    up to cap (monic polynomials of different degrees give order 0)."""
    if p.degY != q.degY:
        return 0
    cap = min(p.cap, q.cap)
    best = None
    for a, b in zip(p.coeffs, q.coeffs):
        o, _ = s_order_initial(a.truncate(cap) - b.truncate(cap))
        if o is not None and (best is None or o < best):
            best = o
    return best


# ---------------------------------------------------------------------------
# Division and preparation
# ---------------------------------------------------------------------------


def _split_xn(f: TruncatedSeries, d: int):
    """f = x_n^d * S + T with deg_{x_n} T < d; exact inside the capped ring.

    S takes the polynomial-quotient lift (components beyond cap-d are zero),
    so the identity holds on every component of total degree <= cap.
    """
    n = f.nvars
    s_terms, t_terms = [], []
    for e, c in f.terms():
        if e[n - 1] >= d:
            s_terms.append((e[: n - 1] + (e[n - 1] - d,), c))
        else:
            t_terms.append((e, c))
    S = TruncatedSeries.from_terms(n, f.cap, s_terms)
    T = TruncatedSeries.from_terms(n, f.cap, t_terms)
    return S, T


def xn_order(g: TruncatedSeries):
    """Order of g(0,..,0,x_n), or None when zero up to cap."""
    p = g.restrict_last_var()
    for k, c in enumerate(p):
        if not c.is_zero():
            return k
    return None


def w_division(f: TruncatedSeries, g: TruncatedSeries):
    """Weierstrass division f = q*g + r, exact on all kept components.

    g must be x_n-regular of finite order d: g(0,..,0,x_n) has order exactly
    d <= cap.  r is a polynomial in x_n of degree < d whose coefficients
    are series in the remaining variables (returned as a TruncatedSeries).
    """
    if f.nvars != g.nvars:
        raise ValueError("variable count mismatch")
    cap = min(f.cap, g.cap)
    f = f.truncate(cap)
    g = g.truncate(cap)
    d = xn_order(g)
    if d is None:
        raise NotRegular("divisor is zero on the x_n-axis up to cap")
    if d == 0:
        return s_mul(f, s_inv_unit(g)), TruncatedSeries.zero(f.nvars, cap)
    E, Tg = _split_xn(g, d)
    E_inv = s_inv_unit(E)
    q = TruncatedSeries.zero(f.nvars, cap)
    for _ in range(cap + 2):
        work = f - s_mul(q, Tg)
        Sw, _ = _split_xn(work, d)
        q_next = s_mul(E_inv, Sw)
        if q_next == q:
            break
        q = q_next
    work = f - s_mul(q, Tg)
    _, r = _split_xn(work, d)
    return q, r


class WeierstrassData:
    """f = unit * poly with poly distinguished in x_n.

    poly has coefficients in the first n-1 variables and vanishing constant
    terms; unit is invertible.
    """

    __slots__ = ("unit", "poly")

    def __init__(self, unit: TruncatedSeries, poly: MonicPoly):
        self.unit = unit
        self.poly = poly


def xn_coefficients(r: TruncatedSeries, d: int):
    """Coefficients of x_n^k (k = 0..d-1) as series in the first n-1 vars."""
    n = r.nvars
    buckets = [[] for _ in range(d)]
    for e, c in r.terms():
        k = e[n - 1]
        if k < d:
            buckets[k].append((e[: n - 1], c))
    return [TruncatedSeries.from_terms(n - 1, r.cap, b) for b in buckets]


def w_preparation(f: TruncatedSeries) -> WeierstrassData:
    """Weierstrass preparation: f = unit * (x_n^d + c_1 x_n^(d-1) + ...).

    Requires f x_n-regular of order d with 1 <= d <= cap.
    """
    d = xn_order(f)
    if d is None:
        raise NotRegular("f is zero on the x_n-axis up to cap")
    if d == 0:
        raise NotRegular("f is a unit; preparation is trivial")
    n, cap = f.nvars, f.cap
    xnd = TruncatedSeries.monomial(n, cap, (0,) * (n - 1) + (d,))
    q, r = w_division(xnd, f)
    unit = s_inv_unit(q)
    coeffs_low = xn_coefficients(-r, d)  # -r gives x_n^d - r = q*f
    # a_k multiplies x_n^(d-k): bucket index d-k
    coeffs = [coeffs_low[d - k] for k in range(1, d + 1)]
    return WeierstrassData(unit, MonicPoly(d, coeffs))


def prepared_as_series(w: WeierstrassData, cap: int) -> TruncatedSeries:
    """Re-multiply unit * poly into a series in all n variables (testing aid)."""
    d = w.poly.degY
    n = w.unit.nvars
    acc = TruncatedSeries.zero(n, cap)
    for k in range(d + 1):
        if k == 0:
            coeff = TruncatedSeries.one(n - 1, cap)
        else:
            coeff = w.poly.coeffs[k - 1]
        lifted = _lift_to_n(coeff, n, cap)
        acc = acc + lifted.mul_monomial((0,) * (n - 1) + (d - k,))
    return s_mul(w.unit.truncate(cap), acc)


def _lift_to_n(f: TruncatedSeries, n: int, cap: int) -> TruncatedSeries:
    terms = [(e + (0,), c) for e, c in f.terms()]
    return TruncatedSeries.from_terms(n, cap, terms)


# ---------------------------------------------------------------------------
# Discriminants
# ---------------------------------------------------------------------------


def _det_series(matrix) -> TruncatedSeries:
    """Determinant over the truncated series ring, by memoized minor
    expansion along rows (exponential in size, fine for degY <= 5)."""
    n = len(matrix)
    nv = matrix[0][0].nvars
    cap = matrix[0][0].cap
    memo: dict = {}

    def minor(row: int, cols: tuple) -> TruncatedSeries:
        if not cols:
            return TruncatedSeries.one(nv, cap)
        got = memo.get(cols)
        if got is not None:
            return got
        acc = TruncatedSeries.zero(nv, cap)
        for idx, c in enumerate(cols):
            entry = matrix[row][c]
            if entry.is_zero():
                continue
            sub = minor(row + 1, cols[:idx] + cols[idx + 1 :])
            term = s_mul(entry, sub)
            acc = acc + (term if idx % 2 == 0 else -term)
        memo[cols] = acc
        return acc

    return minor(0, tuple(range(n)))


def sylvester_matrix(p_coeffs, q_coeffs, nv, cap):
    """Sylvester matrix rows ordered coefficients-descending."""
    m = len(p_coeffs) - 1
    n = len(q_coeffs) - 1
    size = m + n
    zero = TruncatedSeries.zero(nv, cap)
    rows = []
    for i in range(n):
        row = [zero] * size
        for j, c in enumerate(p_coeffs):
            row[i + j] = c
        rows.append(row)
    for i in range(m):
        row = [zero] * size
        for j, c in enumerate(q_coeffs):
            row[i + j] = c
        rows.append(row)
    return rows


def resultant_y(p: MonicPoly, q_coeffs) -> TruncatedSeries:
    """Res_y(P, Q) with Q given as a [lead..const] series list."""
    nv, cap = p.nvars, p.cap
    rows = sylvester_matrix(p.all_coeffs(), q_coeffs, nv, cap)
    return _det_series(rows)


def discriminant(P: MonicPoly) -> TruncatedSeries:
    """The discriminant of P: (-1)^(d(d-1)/2) Res(P, dP/dy).

    The sign convention is pinned by the Sylvester matrix with rows ordered
    coefficients-descending; for y^2 + P1 y + P0 this yields P1^2 - 4 P0.
    """
    if P._disc is not None:
        return P._disc
    if P.degY < 1:
        raise ValueError("discriminant needs degY >= 1")
    d = P.degY
    res = resultant_y(P, P.derivative_y())
    sign = -1 if (d * (d - 1) // 2) % 2 else 1
    P._disc = res if sign > 0 else -res
    return P._disc


# ---------------------------------------------------------------------------
# Tschirnhaus shift
# ---------------------------------------------------------------------------


def tschirnhaus(P: MonicPoly):
    """(P', shift) with P'(y) = P(y - a_1/d); the shifted a_1 vanishes."""
    d = P.degY
    if d < 1:
        raise ValueError("tschirnhaus needs degY >= 1")
    shift = P.coeffs[0].scale(GaussRational(Fraction(1, d)))
    if shift.is_zero():
        return P, shift
    # synthetic composition with (y - shift)
    nv, cap = P.nvars, P.cap
    out = [TruncatedSeries.one(nv, cap)]
    neg = -shift
    for a in P.coeffs:
        # out := out * (y + neg) + [a]
        nxt = [TruncatedSeries.zero(nv, cap) for _ in range(len(out) + 1)]
        for i, c in enumerate(out):
            nxt[i] = nxt[i] + c
            nxt[i + 1] = nxt[i + 1] + s_mul(c, neg)
        nxt[-1] = nxt[-1] + a
        out = nxt
    return MonicPoly(d, out[1:]), shift


# ---------------------------------------------------------------------------
# Monomial-times-unit recognition (given coordinates)
# ---------------------------------------------------------------------------


def is_monomial_unit(f: TruncatedSeries):
    """(alpha, unit) with f = x^alpha * unit at cap, or None.

    Decides monomiality in the GIVEN coordinates only; a formal coordinate
    change is never attempted here.
    """
    if f.is_zero():
        raise ZeroUpToCap("cannot test a series that vanishes up to cap")
    mins = [None] * f.nvars
    for e, _ in f.terms():
        for i, a in enumerate(e):
            if mins[i] is None or a < mins[i]:
                mins[i] = a
    alpha = tuple(mins)
    unit = f.divide_monomial(alpha)
    if unit.constant_term().is_zero():
        return None
    return alpha, unit

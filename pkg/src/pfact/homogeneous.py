"""Projective rings P_h[[x]], integral homogeneous elements and valued towers.

The workhorse types are HFrac (a quotient of homogeneous polynomials),
GradedFrac (a truncated sum of HFracs graded by valuation: the computational
form of elements of Frac(V_nu) with bounded-below support) and VGammaElem
(a truncated element of the valued extension generated by an integral
homogeneous element gamma, with an optional formal cyclotomic twist).

PhElem is the public normal form with a fixed homogeneous denominator
h^(alpha*k+beta); conversions to and from GradedFrac are provided.

Precision bookkeeping: a GradedFrac with cap C represents an element known
through valuation C.  Products carry the honest cap min(capA + nu(B),
capB + nu(A)); multiplying by a positive-degree fraction gains precision,
dividing loses it.
"""

from __future__ import annotations

from fractions import Fraction
from math import ceil, comb

from . import mpoly, upoly
from .errors import (
    DenominatorMismatch,
    NonPureUnsupported,
    NotWeightedHomogeneous,
    PrimitiveCheckFailed,
)
from .gaussq import ZERO, ONE, GaussRational
from .series import HPoly, TruncatedSeries


# ---------------------------------------------------------------------------
# Homogeneous fractions
# ---------------------------------------------------------------------------


def _hpoly_gcd(a: HPoly, b: HPoly) -> HPoly:
    """gcd of homogeneous polynomials; full for nvars <= 2, monomial content
    otherwise."""
    if a.is_zero():
        return b
    if b.is_zero():
        return a
    nv = a.nvars
    ma = a.min_exponents()
    mb = b.min_exponents()
    mono = tuple(min(x, y) for x, y in zip(ma, mb))
    if nv != 2:
        return HPoly.monomial(nv, mono)
    ca = a.divide_monomial(ma)
    cb = b.divide_monomial(mb)
    g = upoly.gcd(ca.dehomogenize(0), cb.dehomogenize(0))
    core = HPoly.homogenize(2, upoly.degree(g), g, 0)
    return core * HPoly.monomial(nv, mono)


def hpoly_exact_div(a: HPoly, b: HPoly) -> HPoly:
    """Exact quotient of homogeneous polynomials (raises if not divisible)."""
    q = mpoly.mp_exact_div(a.coeffs, b.coeffs)
    return HPoly(a.nvars, a.degree - b.degree, q)


def hpoly_divides(b: HPoly, a: HPoly) -> bool:
    """Does b divide a?"""
    try:
        hpoly_exact_div(a, b)
        return True
    except (ArithmeticError, ValueError):
        return False


_BASE_POOL: dict = {}


def _intern_base(h: HPoly) -> HPoly:
    """Canonical shared instance of a lex-monic denominator base."""
    key = (h.nvars, h.degree, frozenset(h.coeffs.items()))
    got = _BASE_POOL.get(key)
    if got is None:
        _BASE_POOL[key] = h
        got = h
    return got


class HFrac:
    """num / prod(base_i^e_i) with homogeneous numerator and factored,
    lex-monic denominator bases.

    The factored denominator makes the ubiquitous P_h-style arithmetic
    cheap: products merge exponents, sums over a common base ladder never
    need a gcd, and reduction is a divisibility attempt per base.
    """

    __slots__ = ("num", "dens")

    def __init__(self, num: HPoly, den=None, reduce: bool = True, dens=None):
        if dens is None:
            if den is None or den.degree == 0:
                if den is not None:
                    _, cd = den.lex_leading()
                    num = num.scale(cd.inverse())
                dens = ()
            else:
                if den.is_zero():
                    raise ZeroDivisionError("zero denominator")
                mono, c = den.monic_scaled()
                num = num.scale(c.inverse())
                dens = ((_intern_base(mono), 1),)
        if num.is_zero():
            num = HPoly.zero(num.nvars, 0)
            dens = ()
        elif reduce and dens:
            num, dens = _reduce_dens(num, dens)
        self.num = num
        self.dens = dens

    @staticmethod
    def from_hpoly(h: HPoly) -> "HFrac":
        return HFrac(h)

    @staticmethod
    def from_scalar(nvars: int, c) -> "HFrac":
        c = c if isinstance(c, GaussRational) else GaussRational(c)
        return HFrac(HPoly.constant(nvars, c))

    @property
    def nvars(self) -> int:
        return self.num.nvars

    @property
    def den(self) -> HPoly:
        out = HPoly.constant(self.num.nvars, ONE)
        for b, e in self.dens:
            out = out * b**e
        return out

    def is_zero(self) -> bool:
        return self.num.is_zero()

    @property
    def degree(self):
        """num degree minus den degree; None for zero."""
        if self.is_zero():
            return None
        return self.num.degree - sum(b.degree * e for b, e in self.dens)

    def __add__(self, other: "HFrac") -> "HFrac":
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        if self.degree != other.degree:
            raise ValueError("adding homogeneous fractions of different degree")
        da, db = dict(self.dens), dict(other.dens)
        if set(da) == set(db) or set(db) <= set(da) or set(da) <= set(db):
            bases = set(da) | set(db)
            num_a, num_b = self.num, other.num
            out = []
            for b in bases:
                ea, eb = da.get(b, 0), db.get(b, 0)
                m = max(ea, eb)
                if m > ea:
                    num_a = num_a * b ** (m - ea)
                if m > eb:
                    num_b = num_b * b ** (m - eb)
                out.append((b, m))
            return HFrac(num_a + num_b, dens=_sort_dens(out))
        # unrelated bases: fall back to an explicit cross-multiplication
        num = self.num * other.den + other.num * self.den
        rn, rd = _full_reduce_num(num, self.den * other.den)
        return HFrac(rn, dens=rd, reduce=False)

    def __neg__(self) -> "HFrac":
        return HFrac(-self.num, dens=self.dens, reduce=False)

    def __sub__(self, other: "HFrac") -> "HFrac":
        return self + (-other)

    def __mul__(self, other: "HFrac") -> "HFrac":
        if self.is_zero() or other.is_zero():
            return HFrac.from_scalar(self.nvars, ZERO)
        da = dict(self.dens)
        for b, e in other.dens:
            da[b] = da.get(b, 0) + e
        return HFrac(self.num * other.num, dens=_sort_dens(da.items()))

    def scale(self, c: GaussRational) -> "HFrac":
        if c.is_zero():
            return HFrac.from_scalar(self.nvars, ZERO)
        return HFrac(self.num.scale(c), dens=self.dens, reduce=False)

    def inverse(self) -> "HFrac":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero fraction")
        num = HPoly.constant(self.nvars, ONE)
        for b, e in self.dens:
            num = num * b**e
        return HFrac(num, self.num)

    def __truediv__(self, other: "HFrac") -> "HFrac":
        return self * other.inverse()

    def __pow__(self, k: int) -> "HFrac":
        if k < 0:
            return self.inverse() ** (-k)
        if k == 0:
            return HFrac.from_scalar(self.nvars, ONE)
        dens = _sort_dens((b, e * k) for b, e in self.dens)
        return HFrac(self.num**k, dens=dens, reduce=False)

    def __eq__(self, other):
        if not isinstance(other, HFrac):
            return NotImplemented
        if self.dens == other.dens:
            return self.num == other.num
        return (self.num * other.den) == (other.num * self.den)

    def as_constant(self):
        """The scalar c when self == c exactly; None otherwise."""
        if self.is_zero():
            return ZERO
        if self.degree != 0:
            return None
        if not self.dens:
            _, cn = self.num.lex_leading()
            return cn
        den = self.den
        _, cn = self.num.lex_leading()
        _, cd = den.lex_leading()
        c = cn / cd
        if self.num == den.scale(c):
            return c
        return None

    def as_hpoly(self):
        """The numerator when the denominator is trivial; None otherwise.

        Falls back to one exact-division attempt so that elements whose
        denominator happens to divide the numerator are recognized.
        """
        if not self.dens:
            return self.num
        try:
            out = self.num
            for b, e in self.dens:
                out = hpoly_exact_div(out, b**e)
            return out
        except (ArithmeticError, ValueError):
            return None

    def __repr__(self):
        if not self.dens:
            return repr(self.num)
        return f"({self.num!r})/({self.den!r})"


def _sort_dens(items):
    return tuple(sorted(
        ((b, e) for b, e in items if e),
        key=lambda be: (be[0].degree, min(be[0].coeffs) if be[0].coeffs else ()),
    ))


def _reduce_dens(num: HPoly, dens):
    out = []
    for b, e in dens:
        while e > 0 and num.degree >= b.degree:
            try:
                num = hpoly_exact_div(num, b)
                e -= 1
            except (ArithmeticError, ValueError):
                break
        if e:
            out.append((b, e))
    return num, _sort_dens(out)


def _full_reduce_num(num: HPoly, den: HPoly):
    g = _hpoly_gcd(num, den)
    if g.degree > 0:
        num = hpoly_exact_div(num, g)
        den = hpoly_exact_div(den, g)
    if den.degree == 0:
        _, cd = den.lex_leading()
        return num.scale(cd.inverse()), ()
    mono, c = den.monic_scaled()
    return num.scale(c.inverse()), ((_intern_base(mono), 1),)


def hfrac_nth_root(f: HFrac, e: int):
    """Exact e-th root of a homogeneous fraction in Q(i)(x), or None."""
    if f.is_zero():
        return f
    rn = f.num.nth_root_poly(e)
    rd = f.den.nth_root_poly(e)
    if rn is None or rd is None:
        return None
    cn, pn = rn
    cd, pd = rd
    return HFrac(pn, pd).scale(cn / cd)


# ---------------------------------------------------------------------------
# Graded fractions: truncated elements of Frac(V_nu)
# ---------------------------------------------------------------------------


class GradedFrac:
    """A finite sum of HFracs indexed by integer valuation, kept through cap.

    Negative indices are allowed (the field of fractions); ring elements
    exposed in public APIs have nonnegative support.
    """

    __slots__ = ("nvars", "cap", "parts")

    def __init__(self, nvars: int, cap: int, parts: dict):
        self.nvars = nvars
        self.cap = cap
        self.parts = {}
        for k, f in parts.items():
            if f.is_zero() or k > cap:
                continue
            if f.degree != k:
                raise ValueError(f"part {k} has degree {f.degree}")
            self.parts[k] = f

    @staticmethod
    def zero(nvars: int, cap: int) -> "GradedFrac":
        return GradedFrac(nvars, cap, {})

    @staticmethod
    def one(nvars: int, cap: int) -> "GradedFrac":
        return GradedFrac(nvars, cap, {0: HFrac.from_scalar(nvars, ONE)})

    @staticmethod
    def from_series(f: TruncatedSeries) -> "GradedFrac":
        parts = {}
        for k, h in enumerate(f.comps):
            if not h.is_zero():
                parts[k] = HFrac.from_hpoly(h)
        return GradedFrac(f.nvars, f.cap, parts)

    @staticmethod
    def from_hfrac(f: HFrac, cap: int) -> "GradedFrac":
        if f.is_zero():
            return GradedFrac.zero(f.nvars, cap)
        return GradedFrac(f.nvars, cap, {f.degree: f})

    def is_zero(self) -> bool:
        return not self.parts

    def valuation(self):
        """min supported index, None when zero up to cap."""
        return min(self.parts) if self.parts else None

    def initial(self):
        v = self.valuation()
        return None if v is None else self.parts[v]

    def truncate(self, cap: int) -> "GradedFrac":
        if cap >= self.cap:
            return self
        return GradedFrac(self.nvars, cap, {k: f for k, f in self.parts.items() if k <= cap})

    def _align(self, other: "GradedFrac"):
        cap = min(self.cap, other.cap)
        return self.truncate(cap), other.truncate(cap), cap

    def __add__(self, other: "GradedFrac") -> "GradedFrac":
        a, b, cap = self._align(other)
        parts = dict(a.parts)
        for k, f in b.parts.items():
            parts[k] = parts[k] + f if k in parts else f
        return GradedFrac(self.nvars, cap, parts)

    def __neg__(self) -> "GradedFrac":
        return GradedFrac(self.nvars, self.cap, {k: -f for k, f in self.parts.items()})

    def __sub__(self, other: "GradedFrac") -> "GradedFrac":
        return self + (-other)

    def __mul__(self, other: "GradedFrac") -> "GradedFrac":
        # first unknown index of the product: min over the two cross terms
        va = self.valuation() if self.parts else self.cap + 1
        vb = other.valuation() if other.parts else other.cap + 1
        cap = min(self.cap + vb, other.cap + va)
        parts: dict = {}
        for i, fi in self.parts.items():
            for j, fj in other.parts.items():
                k = i + j
                if k > cap:
                    continue
                p = fi * fj
                parts[k] = parts[k] + p if k in parts else p
        return GradedFrac(self.nvars, cap, parts)

    def scale_hfrac(self, f: HFrac) -> "GradedFrac":
        if f.is_zero():
            return GradedFrac.zero(self.nvars, self.cap)
        d = f.degree
        return GradedFrac(self.nvars, self.cap + d, {k + d: g * f for k, g in self.parts.items()})

    def scale(self, c: GaussRational) -> "GradedFrac":
        if c.is_zero():
            return GradedFrac.zero(self.nvars, self.cap)
        return GradedFrac(self.nvars, self.cap, {k: f.scale(c) for k, f in self.parts.items()})

    def __eq__(self, other):
        if not isinstance(other, GradedFrac):
            return NotImplemented
        if self.nvars != other.nvars or self.cap != other.cap:
            return False
        for k in set(self.parts) | set(other.parts):
            a = self.parts.get(k)
            b = other.parts.get(k)
            if a is None or b is None:
                return False
            if a != b:
                return False
        return True

    def same_element(self, other: "GradedFrac") -> bool:
        """Equality through the common cap (caps may differ)."""
        a, b, _ = self._align(other)
        return a == b

    def to_series(self):
        """TruncatedSeries when every denominator is constant; None otherwise."""
        comps = {}
        for k, f in self.parts.items():
            if k < 0:
                return None
            h = f.as_hpoly()
            if h is None:
                return None
            comps[k] = h
        out = [comps.get(k, HPoly.zero(self.nvars, k)) for k in range(self.cap + 1)]
        return TruncatedSeries(self.nvars, self.cap, out)

    def __repr__(self):
        if not self.parts:
            return f"<0 through nu<={self.cap}>"
        body = " + ".join(f"[{k}]{self.parts[k]!r}" for k in sorted(self.parts))
        return f"<{body} through nu<={self.cap}>"


def graded_pow(f: GradedFrac, k: int) -> GradedFrac:
    out = GradedFrac.one(f.nvars, f.cap)
    while k:
        if k & 1:
            out = out * f
        f = f * f
        k >>= 1
    return out


def graded_inv_unit(f: GradedFrac) -> GradedFrac:
    """Inverse of an element with nonzero degree-0 part (Neumann series)."""
    c0 = f.parts.get(0)
    if f.valuation() != 0 or c0 is None:
        raise ZeroDivisionError("graded inverse needs valuation exactly 0")
    inv0 = c0.inverse()
    g = f.scale_hfrac(inv0)
    h = GradedFrac.one(f.nvars, f.cap) - g
    out = GradedFrac.one(f.nvars, f.cap)
    power = GradedFrac.one(f.nvars, f.cap)
    for _ in range(f.cap):
        power = power * h
        if power.is_zero():
            break
        out = out + power
    return out.scale_hfrac(inv0)


def graded_root_unit(f: GradedFrac, e: int) -> GradedFrac:
    """e-th root of 1 + (positive valuation); the branch with initial 1."""
    if f.parts.get(0) != HFrac.from_scalar(f.nvars, ONE):
        raise ValueError("graded root expects initial part 1")
    u_parts = {0: HFrac.from_scalar(f.nvars, ONE)}
    u = GradedFrac(f.nvars, f.cap, u_parts)
    inv_e = GaussRational(Fraction(1, e))
    for k in range(1, f.cap + 1):
        p = graded_pow(u, e)
        want = f.parts.get(k)
        have = p.parts.get(k)
        if want is None and have is None:
            continue
        if want is None:
            delta = -have
        elif have is None:
            delta = want
        else:
            delta = want - have
        if not delta.is_zero():
            u_parts[k] = delta.scale(inv_e)
            u = GradedFrac(f.nvars, f.cap, u_parts)
    return u


# ---------------------------------------------------------------------------
# PhElem: the projective-ring normal form
# ---------------------------------------------------------------------------


class PhElem:
    """Sum of a_k(x)/h^(alpha*k+beta) for k0 <= k <= cap.

    Invariant: deg(a_k) - (alpha*k+beta)*deg(h) = k for every stored a_k.
    Public elements have k0 >= 0; negative k0 is tolerated internally when
    `allow_negative` is set (the Laurent-style fraction field).
    """

    __slots__ = ("h", "alpha", "beta", "k0", "cap", "terms")

    def __init__(self, h: HPoly, alpha: int, beta: int, cap: int, terms: dict,
                 allow_negative: bool = False):
        if h.is_zero():
            raise ValueError("h must be nonzero")
        if alpha < 0 or beta < 0:
            raise ValueError("alpha and beta must be nonnegative")
        self.h = h
        self.alpha = alpha
        self.beta = beta
        self.cap = cap
        self.terms = {}
        g = h.degree
        for k, a in terms.items():
            if a.is_zero() or k > cap:
                continue
            if k < 0 and not allow_negative:
                raise ValueError("negative valuation index on a public PhElem")
            if a.degree - (alpha * k + beta) * g != k:
                raise ValueError(f"term {k} violates the grading invariant")
            if alpha * k + beta < 0:
                raise ValueError(f"term {k} has a negative denominator power")
            self.terms[k] = a
        self.k0 = min(self.terms) if self.terms else 0

    @property
    def nvars(self) -> int:
        return self.h.nvars

    def is_zero(self) -> bool:
        return not self.terms

    def valuation(self):
        return min(self.terms) if self.terms else None

    def to_graded(self) -> GradedFrac:
        parts = {}
        for k, a in self.terms.items():
            parts[k] = HFrac(a, self.h ** (self.alpha * k + self.beta))
        return GradedFrac(self.nvars, self.cap, parts)

    def __eq__(self, other):
        if not isinstance(other, PhElem):
            return NotImplemented
        return self.to_graded() == other.to_graded()

    def __repr__(self):
        body = ", ".join(f"{k}: {a!r}" for k, a in sorted(self.terms.items()))
        return f"PhElem(h={self.h!r}, alpha={self.alpha}, beta={self.beta}, {{{body}}})"


def ph_mul(A: PhElem, B: PhElem) -> PhElem:
    """Product inside P_h; requires the same h (rebase first otherwise)."""
    if A.h != B.h:
        raise DenominatorMismatch("rebase to a common denominator first")
    alpha = A.alpha + B.alpha
    beta = A.beta + B.beta
    cap = min(A.cap, B.cap)
    terms: dict = {}
    for i, a in A.terms.items():
        for j, b in B.terms.items():
            k = i + j
            if k > cap:
                continue
            # bring a_i b_j over h^(alpha*k + beta)
            boost = A.alpha * j + B.alpha * i
            t = a * b * (A.h**boost) if boost else a * b
            terms[k] = terms[k] + t if k in terms else t
    out = PhElem(A.h, alpha, beta, cap, terms, allow_negative=True)
    return _ph_normalize(out)


def _ph_normalize(A: PhElem) -> PhElem:
    """Factor the largest common power of h out of all numerators."""
    while A.beta > 0 and A.terms:
        quotients = {}
        for k, a in A.terms.items():
            try:
                quotients[k] = hpoly_exact_div(a, A.h)
            except (ArithmeticError, ValueError):
                return A
        A = PhElem(A.h, A.alpha, A.beta - 1, A.cap, quotients, allow_negative=True)
    return A


def ph_rebase(A: PhElem, h2: HPoly) -> PhElem:
    """The same element of Frac(V_nu), rewritten inside P_(h*h2)."""
    if h2.is_zero():
        raise ValueError("h2 must be nonzero")
    terms = {k: a * (h2 ** (A.alpha * k + A.beta)) for k, a in A.terms.items()}
    return PhElem(A.h * h2, A.alpha, A.beta, A.cap, terms,
                  allow_negative=A.k0 < 0)


def ph_from_graded(gf: GradedFrac, h: HPoly, allow_negative: bool = False) -> PhElem:
    """Express a GradedFrac inside P_h; every denominator must divide a
    power of h."""
    g = h.degree
    if g == 0:
        terms = {}
        for k, f in gf.parts.items():
            p = f.as_hpoly()
            if p is None:
                raise ValueError("denominator is not constant while h is")
            terms[k] = p
        return PhElem(h, 0, 0, gf.cap, terms, allow_negative=allow_negative)
    needed = {}
    bound = 8 * (gf.cap + 8)
    for k, f in gf.parts.items():
        t = 0
        while not hpoly_divides(f.den, h**t):
            t += 1
            if t > bound:
                raise ValueError("denominator does not divide a power of h")
        needed[k] = t
    if not needed:
        return PhElem(h, 0, 0, gf.cap, {}, allow_negative=allow_negative)
    t_base = max([t for k, t in needed.items() if k <= 0], default=0)
    alpha = 0
    for k, t in needed.items():
        if k > 0:
            alpha = max(alpha, ceil(max(0, t - t_base) / k))
    beta = max(0, max(t - alpha * k for k, t in needed.items()))
    terms = {}
    for k, f in gf.parts.items():
        lift = hpoly_exact_div(h ** (alpha * k + beta), f.den)
        terms[k] = f.num * lift
    return PhElem(h, alpha, beta, gf.cap, terms, allow_negative=allow_negative)


# ---------------------------------------------------------------------------
# Integral homogeneous elements
# ---------------------------------------------------------------------------


class HomElem:
    """gamma with monic weighted-homogeneous minimal polynomial
    Gamma(x, z) = z^d + f_1 z^(d-1) + ... + f_d, deg(f_i) = omega*i."""

    __slots__ = ("minpoly", "omega", "pure", "degree_z", "nvars")

    def __init__(self, minpoly, omega: Fraction, pure: bool):
        self.minpoly = list(minpoly)  # [f_1 .. f_d] as HPoly
        self.omega = omega
        self.pure = pure
        self.degree_z = len(self.minpoly)
        self.nvars = self.minpoly[0].nvars if self.minpoly else 0

    @property
    def radicand(self) -> HPoly:
        """h with gamma^e = h, for pure elements."""
        if not self.pure:
            raise NonPureUnsupported("radicand of a non-pure element")
        return -self.minpoly[-1]

    def is_trivial(self) -> bool:
        return self.degree_z == 1

    def __eq__(self, other):
        return (
            isinstance(other, HomElem)
            and self.minpoly == other.minpoly
            and self.omega == other.omega
        )

    def __repr__(self):
        return f"HomElem(deg_z={self.degree_z}, omega={self.omega}, pure={self.pure})"


def trivial_gamma(nvars: int) -> HomElem:
    """gamma = 1: the trivial tower (minpoly z - 1, omega = 0)."""
    return HomElem([HPoly.constant(nvars, -ONE)], Fraction(0), True)


def gamma_adjoin(minpoly_coeffs) -> HomElem:
    """Validate a monic polynomial in z with HPoly coefficients and wrap it.

    minpoly_coeffs lists f_1..f_d for z^(d-1)..z^0; each nonzero f_i must
    satisfy deg(f_i) = omega*i for a single rational omega, and f_d must be
    nonzero.
    """
    coeffs = list(minpoly_coeffs)
    d = len(coeffs)
    if d == 0:
        raise ValueError("empty minimal polynomial")
    if coeffs[-1].is_zero():
        raise NotWeightedHomogeneous(d, "constant coefficient f_d vanishes")
    omega = None
    for i, f in enumerate(coeffs, start=1):
        if f.is_zero():
            continue
        w = Fraction(f.degree, i)
        if omega is None:
            omega = w
        elif omega != w:
            raise NotWeightedHomogeneous(i)
    pure = all(f.is_zero() for f in coeffs[:-1])
    return HomElem(coeffs, omega, pure)


# ---------------------------------------------------------------------------
# Valued tower elements
# ---------------------------------------------------------------------------

_REDUCTION_CACHE: dict = {}


class VGammaElem:
    """Sum over j < deg(gamma), t < zeta_e of C_(j,t) * zeta^t * gamma^j.

    The C coefficients are GradedFracs.  zeta is a formal primitive root of
    unity of order zeta_e, reduced modulo its cyclotomic polynomial;
    zeta_e == 1 means no twist (the usual case).
    """

    __slots__ = ("gamma", "nvars", "cap", "parts", "zeta_e")

    def __init__(self, gamma: HomElem, nvars: int, cap: int, parts: dict, zeta_e: int = 1):
        self.gamma = gamma
        self.nvars = nvars
        self.cap = cap
        self.zeta_e = zeta_e
        clean = {}
        for (j, t), gf in parts.items():
            if gf.is_zero():
                continue
            if not 0 <= j < gamma.degree_z:
                raise ValueError("gamma power out of range")
            clean[(j, t)] = gf
        self.parts = clean

    # -- constructors ------------------------------------------------------

    @staticmethod
    def zero(gamma: HomElem, nvars: int, cap: int) -> "VGammaElem":
        return VGammaElem(gamma, nvars, cap, {})

    @staticmethod
    def from_graded(gamma: HomElem, gf: GradedFrac) -> "VGammaElem":
        return VGammaElem(gamma, gf.nvars, gf.cap, {(0, 0): gf})

    @staticmethod
    def from_series(gamma: HomElem, f: TruncatedSeries) -> "VGammaElem":
        return VGammaElem.from_graded(gamma, GradedFrac.from_series(f))

    @staticmethod
    def gamma_power(gamma: HomElem, nvars: int, cap: int, j: int = 1) -> "VGammaElem":
        """The element gamma^j at the given cap."""
        if gamma.degree_z == 1:
            root = GradedFrac.from_hfrac(HFrac.from_hpoly(-gamma.minpoly[0]), cap)
            return VGammaElem.from_graded(gamma, graded_pow(root, j))
        out = VGammaElem(gamma, nvars, cap, {(0, 0): GradedFrac.one(nvars, cap)})
        g1 = VGammaElem(gamma, nvars, cap, {(1, 0): GradedFrac.one(nvars, cap)})
        for _ in range(j):
            out = out * g1
        return out

    # -- structure -----------------------------------------------------------

    def coefficient(self, j: int) -> GradedFrac:
        """The gamma^j coefficient (requires no cyclotomic twist)."""
        acc = GradedFrac.zero(self.nvars, self.cap)
        for (jj, t), gf in self.parts.items():
            if jj == j:
                if t != 0:
                    raise ValueError("element carries a cyclotomic twist")
                acc = acc + gf
        return acc

    def coefficients(self):
        return [self.coefficient(j) for j in range(self.gamma.degree_z)]

    def is_zero(self) -> bool:
        return not self.parts

    def descends_to_base(self) -> bool:
        return all(j == 0 and t == 0 for (j, t) in self.parts)

    def base_part(self):
        """GradedFrac when the element descends to the base; None otherwise."""
        if not self.descends_to_base():
            return None
        return self.parts.get((0, 0), GradedFrac.zero(self.nvars, self.cap))

    def effective_cap(self):
        """Certified nu-precision: min over parts of gf.cap + j*omega."""
        best = None
        for (j, _t), gf in self.parts.items():
            c = Fraction(gf.cap) + j * self.gamma.omega
            if best is None or c < best:
                best = c
        return best if best is not None else Fraction(self.cap)

    # -- arithmetic ----------------------------------------------------------

    def _check(self, other: "VGammaElem"):
        if self.gamma != other.gamma:
            raise ValueError("tower mismatch")

    def __add__(self, other: "VGammaElem") -> "VGammaElem":
        self._check(other)
        cap = min(self.cap, other.cap)
        parts = dict(self.parts)
        for key, gf in other.parts.items():
            parts[key] = parts[key] + gf if key in parts else gf
        return VGammaElem(self.gamma, self.nvars, cap, parts, max(self.zeta_e, other.zeta_e))

    def __neg__(self) -> "VGammaElem":
        return VGammaElem(
            self.gamma, self.nvars, self.cap,
            {k: -gf for k, gf in self.parts.items()}, self.zeta_e,
        )

    def __sub__(self, other: "VGammaElem") -> "VGammaElem":
        return self + (-other)

    def _gamma_reduction(self):
        """Tables: expansion of gamma^(E+r) over 1..gamma^(E-1), r = 0..E-2."""
        cached = _REDUCTION_CACHE.get(id(self.gamma))
        if cached is not None:
            return cached
        E = self.gamma.degree_z
        base = {}
        for i, f in enumerate(self.gamma.minpoly, start=1):
            if not f.is_zero():
                base[E - i] = HFrac.from_hpoly(-f)
        tables = [base]
        for _ in range(1, E - 1):
            prev = tables[-1]
            nxt: dict = {}
            for j, c in prev.items():
                if j + 1 < E:
                    nxt[j + 1] = nxt[j + 1] + c if j + 1 in nxt else c
                else:
                    for jj, cc in base.items():
                        add = c * cc
                        nxt[jj] = nxt[jj] + add if jj in nxt else add
            tables.append({j: c for j, c in nxt.items() if not c.is_zero()})
        _REDUCTION_CACHE[id(self.gamma)] = tables
        return tables

    def __mul__(self, other: "VGammaElem") -> "VGammaElem":
        self._check(other)
        cap = min(self.cap, other.cap)
        E = self.gamma.degree_z
        zeta_e = max(self.zeta_e, other.zeta_e)
        tables = self._gamma_reduction() if E > 1 else []
        parts: dict = {}

        def add_part(j, t, gf):
            if gf.is_zero():
                return
            key = (j, t)
            parts[key] = parts[key] + gf if key in parts else gf

        for (j1, t1), g1 in self.parts.items():
            for (j2, t2), g2 in other.parts.items():
                prod = g1 * g2
                if prod.is_zero():
                    continue
                t = (t1 + t2) % zeta_e if zeta_e > 1 else 0
                j = j1 + j2
                if j < E:
                    add_part(j, t, prod)
                else:
                    for jj, c in tables[j - E].items():
                        add_part(jj, t, prod.scale_hfrac(c))
        out = VGammaElem(self.gamma, self.nvars, cap, parts, zeta_e)
        return out._zeta_reduce()

    def scale(self, c) -> "VGammaElem":
        c = c if isinstance(c, GaussRational) else GaussRational(c)
        return VGammaElem(
            self.gamma, self.nvars, self.cap,
            {k: gf.scale(c) for k, gf in self.parts.items()}, self.zeta_e,
        )

    def scale_graded(self, g: GradedFrac) -> "VGammaElem":
        return VGammaElem(
            self.gamma, self.nvars, self.cap,
            {key: gf * g for key, gf in self.parts.items()}, self.zeta_e,
        )

    def scale_hfrac(self, f: HFrac) -> "VGammaElem":
        return VGammaElem(
            self.gamma, self.nvars, self.cap,
            {key: gf.scale_hfrac(f) for key, gf in self.parts.items()}, self.zeta_e,
        )

    def __pow__(self, k: int) -> "VGammaElem":
        out = VGammaElem.from_graded(self.gamma, GradedFrac.one(self.nvars, self.cap))
        out.zeta_e = self.zeta_e
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def truncate(self, cap: int) -> "VGammaElem":
        """Keep only data of valuation <= cap."""
        out = {}
        for (j, t), gf in self.parts.items():
            keep = int(Fraction(cap) - j * self.gamma.omega)
            out[(j, t)] = gf.truncate(keep)
        return VGammaElem(self.gamma, self.nvars, cap, out, self.zeta_e)

    def _zeta_reduce(self) -> "VGammaElem":
        """Reduce zeta powers modulo the cyclotomic polynomial of order e."""
        if self.zeta_e <= 1 or all(t == 0 for (_, t) in self.parts):
            out = VGammaElem(self.gamma, self.nvars, self.cap, self.parts,
                             1 if all(t == 0 for (_, t) in self.parts) else self.zeta_e)
            return out
        phi = upoly.cyclotomic(self.zeta_e)
        deg = upoly.degree(phi)
        by_j: dict = {}
        for (j, t), gf in self.parts.items():
            slot = by_j.setdefault(j, {})
            slot[t] = slot[t] + gf if t in slot else gf
        parts = {}
        for j, tdict in by_j.items():
            maxt = max(tdict)
            vec = [tdict.get(t) for t in range(maxt + 1)]
            for t in range(maxt, deg - 1, -1):
                lead = vec[t]
                if lead is None or lead.is_zero():
                    vec[t] = None
                    continue
                for i, c in enumerate(phi[:-1]):
                    if not c.is_zero():
                        idx = t - deg + i
                        contrib = lead.scale(-c)
                        vec[idx] = contrib if vec[idx] is None else vec[idx] + contrib
                vec[t] = None
            for t, gf in enumerate(vec):
                if gf is not None and not gf.is_zero():
                    parts[(j, t)] = gf
        zeta_e = self.zeta_e if any(t for (_, t) in parts) else 1
        return VGammaElem(self.gamma, self.nvars, self.cap, parts, zeta_e)

    def __eq__(self, other):
        if not isinstance(other, VGammaElem):
            return NotImplemented
        if self.gamma != other.gamma:
            return False
        return (self - other).is_zero()

    def __repr__(self):
        if not self.parts:
            return "VGamma(0)"
        body = " + ".join(
            f"({gf!r})*g^{j}" + (f"*z^{t}" if t else "")
            for (j, t), gf in sorted(self.parts.items())
        )
        return f"VGamma({body})"


def vg_valuation(xi: VGammaElem):
    """min over parts of nu(C_j) + j*omega as a Fraction; None when zero."""
    best = None
    for (j, _t), gf in xi.parts.items():
        v = gf.valuation()
        if v is None:
            continue
        val = Fraction(v) + j * xi.gamma.omega
        if best is None or val < best:
            best = val
    return best


def vg_initial_slice(xi: VGammaElem, s: Fraction) -> VGammaElem:
    """The nu-homogeneous slice of valuation exactly s."""
    parts = {}
    for (j, t), gf in xi.parts.items():
        k = s - j * xi.gamma.omega
        if k.denominator == 1 and int(k) in gf.parts:
            parts[(j, t)] = GradedFrac(xi.nvars, gf.cap, {int(k): gf.parts[int(k)]})
    return VGammaElem(xi.gamma, xi.nvars, xi.cap, parts, xi.zeta_e)


def vg_residue_constant(xi: VGammaElem):
    """The residue-field image when it is a plain Q(i) constant.

    None when the valuation-0 slice involves gamma, a cyclotomic twist, or
    a nonconstant degree-0 fraction.
    """
    c = ZERO
    for (j, t), gf in xi.parts.items():
        k = -j * xi.gamma.omega
        if k.denominator != 1 or int(k) not in gf.parts:
            continue
        if j != 0 or t != 0:
            return None
        cc = gf.parts[int(k)].as_constant()
        if cc is None:
            return None
        c = c + cc
    return c


def gamma_conjugate(xi: VGammaElem, j: int) -> VGammaElem:
    """Substitute gamma -> zeta^j gamma, zeta a primitive e-th root of unity.

    Pure towers only.  For e in {1, 2, 4} the root of unity lives in Q(i)
    and is folded into the coefficients; any other order is carried by a
    single formal cyclotomic generator reduced modulo its cyclotomic
    polynomial.
    """
    if not xi.gamma.pure:
        raise NonPureUnsupported("conjugation needs a pure tower")
    e = xi.gamma.degree_z
    j = j % e
    if e == 1 or j == 0:
        return xi
    if e in (2, 4):
        zeta = -ONE if e == 2 else GaussRational(0, 1)
        parts = {}
        for (jj, t), gf in xi.parts.items():
            parts[(jj, t)] = gf.scale(zeta ** ((j * jj) % e))
        return VGammaElem(xi.gamma, xi.nvars, xi.cap, parts, xi.zeta_e)
    parts: dict = {}
    for (jj, t), gf in xi.parts.items():
        key = (jj, (t + j * jj) % e)
        parts[key] = parts[key] + gf if key in parts else gf
    return VGammaElem(xi.gamma, xi.nvars, xi.cap, parts, e)._zeta_reduce()


# ---------------------------------------------------------------------------
# Primitive element
# ---------------------------------------------------------------------------

_EXPR_CAP = 64  # generous default cap for exact finite expressions


def _small_constants(seed: int):
    """Deterministic seedable sequence of small Gaussian integers."""
    base = [
        GaussRational(1), GaussRational(-1), GaussRational(2), GaussRational(0, 1),
        GaussRational(3), GaussRational(1, 1), GaussRational(-2), GaussRational(1, -1),
        GaussRational(5), GaussRational(2, 1), GaussRational(-3), GaussRational(0, 2),
        GaussRational(7), GaussRational(2, -1), GaussRational(4), GaussRational(3, 1),
        GaussRational(-5), GaussRational(1, 2), GaussRational(6), GaussRational(3, -1),
        GaussRational(-7), GaussRational(1, -2), GaussRational(8), GaussRational(4, 1),
        GaussRational(9), GaussRational(2, 3), GaussRational(-4), GaussRational(3, 2),
        GaussRational(10), GaussRational(5, 1), GaussRational(-6), GaussRational(11),
    ]
    k = seed % len(base)
    return base[k:] + base[:k]


def _pure_root_rescale(gamma: HomElem, m: int) -> HomElem:
    """gamma^(1/m) for pure gamma: the pure element with minpoly z^(e*m) - h."""
    e = gamma.degree_z
    zeros = [HPoly.zero(gamma.nvars, 0) for _ in range(e * m - 1)]
    return gamma_adjoin(zeros + [gamma.minpoly[-1]])


def radical_in_field(gamma: HomElem, target: HFrac, e: int):
    """Solve (t * gamma^j)^e == target inside Q(i)(x)(gamma), gamma pure.

    Returns (t: HFrac, j: int) or None; enumerates the gamma powers whose
    e-th powers are rational and extracts the leftover rational root.
    """
    if not gamma.pure:
        raise NonPureUnsupported("radical search needs a pure tower")
    eg = gamma.degree_z
    h = HFrac.from_hpoly(gamma.radicand) if eg > 1 else None
    for j in range(eg):
        if (j * e) % eg:
            continue
        power = (j * e) // eg
        base = (h**power) if (h is not None and power) else HFrac.from_scalar(gamma.nvars, ONE)
        t = hfrac_nth_root(target / base, e)
        if t is not None:
            return t, j
    return None


def primitive_element(g1: HomElem, g2: HomElem, seed: int = 0):
    """A single integral homogeneous element generating the tower of two.

    Returns (g0, expr1, expr2) with expr_i a VGammaElem over g0 equal to
    gamma_i.  Inputs must be pure; the output need not be.  Raises
    PrimitiveCheckFailed when no tested constant separates the conjugates
    and NonPureUnsupported for inputs outside the supported enumeration.
    """
    if not (g1.pure and g2.pure):
        raise NonPureUnsupported("primitive element needs pure inputs")
    nv = g1.nvars

    # gamma_2 already rational?
    r2 = (
        HFrac.from_hpoly(-g2.minpoly[0])
        if g2.degree_z == 1
        else hfrac_nth_root(HFrac.from_hpoly(g2.radicand), g2.degree_z)
    )
    if r2 is not None:
        e1 = VGammaElem.gamma_power(g1, nv, _EXPR_CAP, 1)
        e2 = VGammaElem.from_graded(g1, GradedFrac.from_hfrac(r2, _EXPR_CAP))
        return g1, e1, e2
    r1 = (
        HFrac.from_hpoly(-g1.minpoly[0])
        if g1.degree_z == 1
        else hfrac_nth_root(HFrac.from_hpoly(g1.radicand), g1.degree_z)
    )
    if r1 is not None:
        g0, e2, e1 = primitive_element(g2, g1, seed)
        return g0, e1, e2
    if g1 == g2:
        e = VGammaElem.gamma_power(g1, nv, _EXPR_CAP, 1)
        return g1, e, e
    # dependence scan: gamma_2 = t * gamma_1^j
    found = radical_in_field(g1, HFrac.from_hpoly(g2.radicand), g2.degree_z)
    if found is not None:
        t, j = found
        expr2 = VGammaElem.gamma_power(g1, nv, _EXPR_CAP, j).scale_hfrac(t)
        return g1, VGammaElem.gamma_power(g1, nv, _EXPR_CAP, 1), expr2
    # partial dependence is outside the supported scope
    for m in range(2, g2.degree_z):
        if g2.degree_z % m == 0:
            if radical_in_field(g1, HFrac.from_hpoly(g2.radicand), g2.degree_z // m):
                raise NonPureUnsupported("partially dependent radical pair")
    # independent: rescale minimally to a common degree
    if g1.omega == 0 or g2.omega == 0:
        raise NonPureUnsupported("degree-0 irrational elements are out of scope")
    ratio = g1.omega / g2.omega
    m1, m2 = ratio.numerator, ratio.denominator
    G1 = _pure_root_rescale(g1, m1) if m1 > 1 else g1
    G2 = _pure_root_rescale(g2, m2) if m2 > 1 else g2
    for c in _small_constants(seed):
        coeffs = _combined_minpoly(G1.radicand, G1.degree_z, G2.radicand, G2.degree_z, c)
        if coeffs is None:
            continue
        try:
            g0 = gamma_adjoin(coeffs)
        except NotWeightedHomogeneous:
            continue
        expr1, expr2 = _express_inputs(G1, G2, g0, c, m1, m2)
        if expr1 is None:
            continue
        return g0, expr1, expr2
    raise PrimitiveCheckFailed("no separating constant found within the budget")


def _combined_minpoly(h1: HPoly, E1: int, h2: HPoly, E2: int, c: GaussRational):
    """Monic candidate minimal polynomial of gamma1 + c*gamma2, by the
    closed-form resultant Res_z1(z1^E1 - h1, (z - z1)^E2 - c^E2 h2).

    Returns the HPoly coefficient list [f_1..f_D] (D = E1*E2) when the
    candidate is squarefree; None otherwise.
    """
    nv = h1.nvars
    W = nv + 2  # x-variables, z, z1
    ZV, Z1 = nv, nv + 1

    def embed(h: HPoly):
        out = {}
        for e, v in h.coeffs.items():
            out[tuple(e) + (0, 0)] = v
        return out

    inner = {}
    for k in range(E2 + 1):
        coeff = GaussRational(comb(E2, k)) * (GaussRational(-1) ** k)
        mono = [0] * W
        mono[ZV] = E2 - k
        mono[Z1] = k
        inner[tuple(mono)] = coeff
    cE2 = c**E2
    for e, v in embed(h2).items():
        inner[e] = inner.get(e, ZERO) - cE2 * v
        if inner[e].is_zero():
            del inner[e]
    base = {}
    mono = [0] * W
    mono[Z1] = E1
    base[tuple(mono)] = ONE
    for e, v in embed(h1).items():
        base[e] = base.get(e, ZERO) - v
        if base[e].is_zero():
            del base[e]
    R = mpoly.mp_resultant(base, inner, Z1, W)
    D = E1 * E2
    coeffs = [dict() for _ in range(D + 1)]  # indexed by z-degree
    for e, v in R.items():
        zd = e[ZV]
        xpart = tuple(e[i] for i in range(nv))
        coeffs[zd][xpart] = coeffs[zd].get(xpart, ZERO) + v
    lead = {e: v for e, v in coeffs[D].items() if not v.is_zero()}
    if len(lead) != 1 or sum(next(iter(lead))) != 0:
        return None
    lc = next(iter(lead.values()))
    out = []
    for k in range(1, D + 1):
        cleaned = {e: v / lc for e, v in coeffs[D - k].items() if not v.is_zero()}
        if not cleaned:
            out.append(HPoly.zero(nv, 0))
            continue
        degs = {sum(e) for e in cleaned}
        if len(degs) != 1:
            return None
        out.append(HPoly(nv, degs.pop(), cleaned))
    # squarefree test: disc_z(R) != 0
    Rm = {}
    for zd in range(D + 1):
        for e, v in coeffs[zd].items():
            if not v.is_zero():
                Rm[e + (zd,)] = v / lc
    dR = {}
    for e, v in Rm.items():
        if e[-1]:
            dR[e[:-1] + (e[-1] - 1,)] = v * GaussRational(e[-1])
    disc = mpoly.mp_resultant(Rm, dR, nv, nv + 1)
    if mpoly.mp_is_zero(disc):
        return None
    return out


def _express_inputs(G1: HomElem, G2: HomElem, g0: HomElem, c: GaussRational,
                    m1: int, m2: int):
    """Solve for the original gammas as polynomials in g0 = G1 + c*G2.

    Works in the tensor basis G1^a G2^b with exact polynomial linear
    algebra; returns (expr1, expr2) over g0 or (None, None) when the power
    matrix is singular (c not primitive).
    """
    E1, E2 = G1.degree_z, G2.degree_z
    D = E1 * E2
    nv = G1.nvars
    h1 = {e: v for e, v in G1.radicand.coeffs.items()}
    h2 = {e: v for e, v in G2.radicand.coeffs.items()}

    cur = {0: mpoly.mp_const(nv, ONE)}  # basis index a*E2+b -> mpoly coeff
    powers = [dict(cur)]
    cmono = mpoly.mp_const(nv, c)
    for _ in range(D - 1):
        nxt: dict = {}

        def add(idx, val):
            nxt[idx] = mpoly.mp_add(nxt[idx], val) if idx in nxt else val

        for idx, coeff in cur.items():
            a, b = divmod(idx, E2)
            if a + 1 < E1:
                add((a + 1) * E2 + b, coeff)
            else:
                add(b, mpoly.mp_mul(coeff, h1))
            cc = mpoly.mp_mul(coeff, cmono)
            if b + 1 < E2:
                add(a * E2 + b + 1, cc)
            else:
                add(a * E2, mpoly.mp_mul(cc, h2))
        cur = {i: v for i, v in nxt.items() if not mpoly.mp_is_zero(v)}
        powers.append(dict(cur))
    M = [[powers[k].get(row, {}) for k in range(D)] for row in range(D)]
    detM = mpoly.mp_det_bareiss(M)
    if mpoly.mp_is_zero(detM):
        return None, None
    sol1 = _cramer_column(M, E2, detM, D, nv)      # basis index of G1 = E2
    sol2 = _cramer_column(M, 1, detM, D, nv)       # basis index of G2 = 1
    expr_g1p = _vg_from_mpoly_fracs(g0, sol1, nv)
    expr_g2p = _vg_from_mpoly_fracs(g0, sol2, nv)
    if expr_g1p is None or expr_g2p is None:
        return None, None
    return expr_g1p**m1, expr_g2p**m2


def _cramer_column(M, target: int, detM, D: int, nv: int):
    """lambda_k = det(M with column k replaced by e_target) / det(M)."""
    unit = {(0,) * nv: ONE}
    sols = []
    for k in range(D):
        Mk = [
            [M[r][cc] if cc != k else (unit if r == target else {}) for cc in range(D)]
            for r in range(D)
        ]
        sols.append((mpoly.mp_det_bareiss(Mk), detM))
    return sols


def _vg_from_mpoly_fracs(g0: HomElem, sols, nv: int, cap: int = _EXPR_CAP):
    """Assemble a VGammaElem over g0 from (numerator, denominator) mpolys."""
    parts = {}
    for k, (num, den) in enumerate(sols):
        if mpoly.mp_is_zero(num):
            continue
        hn = _mp_homogeneous_pieces(num, nv)
        hd = _mp_homogeneous_pieces(den, nv)
        if len(hn) != 1 or len(hd) != 1:
            return None
        frac = HFrac(hn[0], hd[0])
        parts[(k, 0)] = GradedFrac.from_hfrac(frac, cap)
    return VGammaElem(g0, nv, cap, parts)


def _mp_homogeneous_pieces(p, nv: int):
    """Split an mpoly over x into homogeneous pieces (list of HPoly)."""
    buckets: dict = {}
    for e, v in p.items():
        xe = tuple(e[i] for i in range(nv))
        buckets.setdefault(sum(xe), {})[xe] = v
    return [HPoly(nv, d, coeffs) for d, coeffs in sorted(buckets.items())]

"""Truncated multivariate power series, exactly, over Q(i).

A series is stored dense-by-degree and sparse-within-degree: a tuple of
homogeneous components indexed by total degree 0..cap.  The cap is a
precision contract: the residue class mod (x)^(cap+1) is represented
exactly, nothing beyond it is ever reported.  Binary operations return the
minimum cap of their operands.

Zero detection is always "zero up to cap" and is reported as None by
s_order_initial, never as a proven zero.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations_with_replacement

from . import upoly
from .errors import (
    BaseFieldRootMissing,
    ConstantTermNonzero,
    NotAUnit,
    VariableCountMismatch,
)
from .gaussq import ZERO, ONE, GaussRational, nth_root


# ---------------------------------------------------------------------------
# Homogeneous polynomials
# ---------------------------------------------------------------------------


class HPoly:
    """A homogeneous polynomial: map from exponent tuples to nonzero scalars."""

    __slots__ = ("nvars", "degree", "coeffs")

    def __init__(self, nvars: int, degree: int, coeffs: dict):
        self.nvars = nvars
        self.degree = degree
        self.coeffs = {e: c for e, c in coeffs.items() if not c.is_zero()}
        for e in self.coeffs:
            if len(e) != nvars or sum(e) != degree:
                raise ValueError(f"exponent {e} is not degree-{degree} in {nvars} vars")

    @staticmethod
    def zero(nvars: int, degree: int) -> "HPoly":
        return HPoly(nvars, degree, {})

    @staticmethod
    def monomial(nvars: int, exps, coeff=ONE) -> "HPoly":
        exps = tuple(exps)
        c = coeff if isinstance(coeff, GaussRational) else GaussRational(coeff)
        return HPoly(nvars, sum(exps), {exps: c})

    @staticmethod
    def constant(nvars: int, c) -> "HPoly":
        c = c if isinstance(c, GaussRational) else GaussRational(c)
        return HPoly(nvars, 0, {(0,) * nvars: c})

    def is_zero(self) -> bool:
        return not self.coeffs

    def __add__(self, other: "HPoly") -> "HPoly":
        if self.degree != other.degree or self.nvars != other.nvars:
            raise ValueError("mismatched homogeneous addition")
        out = dict(self.coeffs)
        for e, c in other.coeffs.items():
            s = out.get(e, ZERO) + c
            if s.is_zero():
                out.pop(e, None)
            else:
                out[e] = s
        return HPoly(self.nvars, self.degree, out)

    def __neg__(self) -> "HPoly":
        return HPoly(self.nvars, self.degree, {e: -c for e, c in self.coeffs.items()})

    def __sub__(self, other: "HPoly") -> "HPoly":
        return self + (-other)

    def __mul__(self, other: "HPoly") -> "HPoly":
        out = {}
        for e1, c1 in self.coeffs.items():
            for e2, c2 in other.coeffs.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                p = c1 * c2
                s = out.get(e)
                out[e] = p if s is None else s + p
        return HPoly(self.nvars, self.degree + other.degree, out)

    def scale(self, c: GaussRational) -> "HPoly":
        if c.is_zero():
            return HPoly.zero(self.nvars, self.degree)
        return HPoly(self.nvars, self.degree, {e: v * c for e, v in self.coeffs.items()})

    def __pow__(self, k: int) -> "HPoly":
        out = HPoly.constant(self.nvars, ONE)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other):
        return (
            isinstance(other, HPoly)
            and self.nvars == other.nvars
            and self.degree == other.degree
            and self.coeffs == other.coeffs
        )

    def __hash__(self):
        return hash((self.nvars, self.degree, frozenset(self.coeffs.items())))

    def lex_leading(self):
        """(exponent, coefficient) of the lex-largest monomial."""
        e = max(self.coeffs)
        return e, self.coeffs[e]

    def monic_scaled(self) -> tuple["HPoly", GaussRational]:
        """(p/c, c) with c the lex-leading coefficient; canonical scalar form."""
        if self.is_zero():
            return self, ONE
        _, c = self.lex_leading()
        return self.scale(c.inverse()), c

    def min_exponents(self):
        """Componentwise minimum of the support (the largest dividing monomial)."""
        if self.is_zero():
            return None
        mins = [min(e[i] for e in self.coeffs) for i in range(self.nvars)]
        return tuple(mins)

    def divide_monomial(self, exps) -> "HPoly":
        out = {}
        for e, c in self.coeffs.items():
            ne = tuple(a - b for a, b in zip(e, exps))
            if any(a < 0 for a in ne):
                raise ArithmeticError("monomial does not divide")
            out[ne] = c
        return HPoly(self.nvars, self.degree - sum(exps), out)

    def dehomogenize(self, at: int = 0):
        """Set x_at = 1; returns a upoly in the remaining variable (nvars == 2)."""
        if self.nvars != 2:
            raise ValueError("dehomogenize needs two variables")
        other = 1 - at
        out = [ZERO] * (self.degree + 1)
        for e, c in self.coeffs.items():
            out[e[other]] = c
        return upoly.normalize(out)

    @staticmethod
    def homogenize(nvars: int, degree: int, p, at: int = 0) -> "HPoly":
        """Inverse of dehomogenize for nvars == 2: p(w) -> x_at^(d-k) x_other^k."""
        other = 1 - at
        coeffs = {}
        for k, c in enumerate(p):
            if not c.is_zero():
                e = [0, 0]
                e[at] = degree - k
                e[other] = k
                coeffs[tuple(e)] = c
        return HPoly(nvars, degree, coeffs)

    def nth_root_poly(self, e: int):
        """Exact e-th root as (scalar, HPoly) with root = scalar*poly, or None.

        The polynomial part is normalized lex-monic; the scalar carries the
        leading coefficient's root.  Complete for nvars <= 2; for more
        variables only scalar*monomial radicands are recognized.
        """
        if self.is_zero() or e == 1:
            return (ONE, self) if e == 1 else None
        if self.degree % e:
            return None
        lead_e, lead_c = self.lex_leading()
        c_root = nth_root(lead_c, e)
        if c_root is None:
            return None
        if len(self.coeffs) == 1:
            if any(a % e for a in lead_e):
                return None
            mono = HPoly.monomial(self.nvars, tuple(a // e for a in lead_e))
            return (c_root, mono)
        if self.nvars != 2:
            return None
        # two variables: reduce to a univariate root extraction
        p = self.dehomogenize(0)
        q = _upoly_nth_root(upoly.scale(p, lead_c.inverse()), e)
        if q is None:
            return None
        root = HPoly.homogenize(2, self.degree // e, q, 0)
        return (c_root, root)

    def __repr__(self):
        if self.is_zero():
            return "0"
        parts = []
        for e in sorted(self.coeffs):
            mono = "*".join(f"x{i+1}^{a}" for i, a in enumerate(e) if a)
            parts.append(f"{self.coeffs[e]}{'*' + mono if mono else ''}")
        return " + ".join(parts)


def _upoly_nth_root(p, e: int):
    """e-th root of a univariate polynomial with leading coefficient 1."""
    d = upoly.degree(p)
    if d < 0 or d % e:
        return None
    # build the root from the top coefficient down
    root = [ZERO] * (d // e + 1)
    root[-1] = ONE
    for k in range(d // e - 1, -1, -1):
        cur = upoly.pow_(upoly.normalize(list(root)), e)
        target_deg = d - (d // e - k)
        want = p[target_deg] if target_deg < len(p) else ZERO
        have = cur[target_deg] if target_deg < len(cur) else ZERO
        root[k] = (want - have) / GaussRational(e)
    if upoly.pow_(upoly.normalize(list(root)), e) != upoly.normalize(list(p)):
        return None
    return upoly.normalize(root)


# ---------------------------------------------------------------------------
# Truncated series
# ---------------------------------------------------------------------------


class TruncatedSeries:
    """An element of C[[x_1..x_n]] known exactly modulo (x)^(cap+1)."""

    __slots__ = ("nvars", "cap", "comps")

    def __init__(self, nvars: int, cap: int, comps):
        if cap < 0:
            raise ValueError("cap must be nonnegative")
        comps = list(comps)
        if len(comps) != cap + 1:
            raise ValueError("need one component per degree 0..cap")
        for k, h in enumerate(comps):
            if h.nvars != nvars or h.degree != k:
                raise ValueError(f"component {k} has wrong grading")
        self.nvars = nvars
        self.cap = cap
        self.comps = tuple(comps)

    # -- constructors ------------------------------------------------------

    @staticmethod
    def zero(nvars: int, cap: int) -> "TruncatedSeries":
        return TruncatedSeries(nvars, cap, [HPoly.zero(nvars, k) for k in range(cap + 1)])

    @staticmethod
    def constant(nvars: int, cap: int, c) -> "TruncatedSeries":
        out = [HPoly.zero(nvars, k) for k in range(cap + 1)]
        out[0] = HPoly.constant(nvars, c)
        return TruncatedSeries(nvars, cap, out)

    @staticmethod
    def one(nvars: int, cap: int) -> "TruncatedSeries":
        return TruncatedSeries.constant(nvars, cap, ONE)

    @staticmethod
    def variable(nvars: int, cap: int, i: int) -> "TruncatedSeries":
        e = [0] * nvars
        e[i] = 1
        return TruncatedSeries.monomial(nvars, cap, e)

    @staticmethod
    def monomial(nvars: int, cap: int, exps, coeff=ONE) -> "TruncatedSeries":
        exps = tuple(exps)
        out = [HPoly.zero(nvars, k) for k in range(cap + 1)]
        d = sum(exps)
        if d <= cap:
            out[d] = HPoly.monomial(nvars, exps, coeff)
        return TruncatedSeries(nvars, cap, out)

    @staticmethod
    def from_terms(nvars: int, cap: int, terms) -> "TruncatedSeries":
        """terms: iterable of (exponent tuple, scalar); degrees beyond cap drop."""
        buckets = {}
        for e, c in terms:
            e = tuple(e)
            d = sum(e)
            if d > cap:
                continue
            c = c if isinstance(c, GaussRational) else GaussRational(c)
            buckets.setdefault(d, {})
            buckets[d][e] = buckets[d].get(e, ZERO) + c
        comps = []
        for k in range(cap + 1):
            comps.append(HPoly(nvars, k, buckets.get(k, {})))
        return TruncatedSeries(nvars, cap, comps)

    @staticmethod
    def from_hpoly(h: HPoly, cap: int) -> "TruncatedSeries":
        out = [HPoly.zero(h.nvars, k) for k in range(cap + 1)]
        if h.degree <= cap:
            out[h.degree] = h
        return TruncatedSeries(h.nvars, cap, out)

    # -- basic structure -----------------------------------------------------

    def component(self, k: int) -> HPoly:
        return self.comps[k]

    def truncate(self, cap: int) -> "TruncatedSeries":
        if cap == self.cap:
            return self
        if cap < self.cap:
            return TruncatedSeries(self.nvars, cap, self.comps[: cap + 1])
        raise ValueError("cannot extend a truncation")

    def is_zero(self) -> bool:
        """Zero up to cap; never a proof of vanishing."""
        return all(h.is_zero() for h in self.comps)

    def constant_term(self) -> GaussRational:
        c = self.comps[0].coeffs.get((0,) * self.nvars)
        return c if c is not None else ZERO

    def coeff(self, exps) -> GaussRational:
        exps = tuple(exps)
        d = sum(exps)
        if d > self.cap:
            raise ValueError("coefficient beyond the cap")
        return self.comps[d].coeffs.get(exps, ZERO)

    def terms(self):
        for h in self.comps:
            for e in sorted(h.coeffs):
                yield e, h.coeffs[e]

    def __eq__(self, other):
        return (
            isinstance(other, TruncatedSeries)
            and self.nvars == other.nvars
            and self.cap == other.cap
            and self.comps == other.comps
        )

    def __hash__(self):
        return hash((self.nvars, self.cap, self.comps))

    def __repr__(self):
        nz = [repr(h) for h in self.comps if not h.is_zero()]
        body = " + ".join(nz) if nz else "0"
        return f"<{body} mod (x)^{self.cap + 1}>"

    # -- ring operations -----------------------------------------------------

    def _align(self, other: "TruncatedSeries"):
        if self.nvars != other.nvars:
            raise VariableCountMismatch(f"{self.nvars} vs {other.nvars} variables")
        cap = min(self.cap, other.cap)
        return self.truncate(cap), other.truncate(cap), cap

    def __add__(self, other):
        a, b, cap = self._align(other)
        return TruncatedSeries(
            a.nvars, cap, [a.comps[k] + b.comps[k] for k in range(cap + 1)]
        )

    def __neg__(self):
        return TruncatedSeries(self.nvars, self.cap, [-h for h in self.comps])

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "TruncatedSeries":
        c = c if isinstance(c, GaussRational) else GaussRational(c)
        return TruncatedSeries(self.nvars, self.cap, [h.scale(c) for h in self.comps])

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, GaussRational)):
            return self.scale(other)
        return s_mul(self, other)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "TruncatedSeries":
        out = TruncatedSeries.one(self.nvars, self.cap)
        base = self
        while k:
            if k & 1:
                out = s_mul(out, base)
            base = s_mul(base, base)
            k >>= 1
        return out

    def mul_monomial(self, exps, coeff=ONE) -> "TruncatedSeries":
        """Multiply by coeff*x^exps; keeps the cap (top components fall off)."""
        d = sum(exps)
        out = [HPoly.zero(self.nvars, k) for k in range(self.cap + 1)]
        for k in range(self.cap + 1 - d):
            h = self.comps[k]
            if not h.is_zero():
                out[k + d] = (h * HPoly.monomial(self.nvars, exps)).scale(
                    coeff if isinstance(coeff, GaussRational) else GaussRational(coeff)
                )
        return TruncatedSeries(self.nvars, self.cap, out)

    def divide_monomial(self, exps) -> "TruncatedSeries":
        """Exact division by x^exps; cap drops by the monomial degree."""
        d = sum(exps)
        if d == 0:
            return self
        cap = self.cap - d
        if cap < 0:
            raise ValueError("cap too small for monomial division")
        out = []
        for k in range(cap + 1):
            out.append(self.comps[k + d].divide_monomial(exps))
        return TruncatedSeries(self.nvars, cap, out)

    def restrict_last_var(self):
        """f(0,..,0,x_n) as a upoly in x_n (degree <= cap)."""
        n = self.nvars
        out = [ZERO] * (self.cap + 1)
        for k, h in enumerate(self.comps):
            e = (0,) * (n - 1) + (k,)
            c = h.coeffs.get(e)
            if c is not None:
                out[k] = c
        return upoly.normalize(out)

    def subs_zero(self, i: int) -> "TruncatedSeries":
        """Set x_i = 0, keeping the variable slot."""
        comps = []
        for k, h in enumerate(self.comps):
            kept = {e: c for e, c in h.coeffs.items() if e[i] == 0}
            comps.append(HPoly(self.nvars, k, kept))
        return TruncatedSeries(self.nvars, self.cap, comps)


# ---------------------------------------------------------------------------
# Operations of the series core
# ---------------------------------------------------------------------------


def s_mul(f: TruncatedSeries, g: TruncatedSeries) -> TruncatedSeries:
    """Product at the minimum cap; component k is the convolution sum."""
    a, b, cap = f._align(g)
    out = [HPoly.zero(a.nvars, k) for k in range(cap + 1)]
    for i in range(cap + 1):
        hi = a.comps[i]
        if hi.is_zero():
            continue
        for j in range(cap + 1 - i):
            hj = b.comps[j]
            if not hj.is_zero():
                out[i + j] = out[i + j] + hi * hj
    return TruncatedSeries(a.nvars, cap, out)


def s_inv_unit(f: TruncatedSeries) -> TruncatedSeries:
    """Multiplicative inverse of a unit, via the Neumann series."""
    c0 = f.constant_term()
    if c0.is_zero():
        raise NotAUnit("constant term vanishes")
    g = f.scale(c0.inverse())
    h = TruncatedSeries.one(f.nvars, f.cap) - g  # has positive order
    out = TruncatedSeries.one(f.nvars, f.cap)
    power = TruncatedSeries.one(f.nvars, f.cap)
    for _ in range(f.cap):
        power = s_mul(power, h)
        if power.is_zero():
            break
        out = out + power
    return out.scale(c0.inverse())


def s_order_initial(f: TruncatedSeries):
    """(order, initial form) or (None, None) when zero up to cap."""
    for k, h in enumerate(f.comps):
        if not h.is_zero():
            return k, h
    return None, None


def s_subst(f: TruncatedSeries, images) -> TruncatedSeries:
    """Compose f with images of its variables (each of positive order).

    Covers quadratic transforms, power substitutions, linear changes and
    blow-up charts alike.  The result cap is the minimum of all caps.
    """
    images = list(images)
    if len(images) != f.nvars:
        raise VariableCountMismatch(
            f"{f.nvars} variables but {len(images)} images"
        )
    cap = f.cap
    tv = None
    for g in images:
        if tv is None:
            tv = g.nvars
        elif g.nvars != tv:
            raise VariableCountMismatch("images disagree on variable count")
        if not g.constant_term().is_zero():
            raise ConstantTermNonzero("image has nonzero constant term")
        cap = min(cap, g.cap)
    images = [g.truncate(cap) for g in images]
    out = TruncatedSeries.zero(tv, cap)

    # cache powers of each image and partial monomial products
    powers = [[TruncatedSeries.one(tv, cap), g] for g in images]

    def power(i, k):
        col = powers[i]
        while len(col) <= k:
            col.append(s_mul(col[-1], images[i]))
        return col[k]

    mono_cache: dict = {}

    def monomial_image(exps):
        if exps in mono_cache:
            return mono_cache[exps]
        # split off the last nonzero entry for cache reuse
        i = max(j for j, a in enumerate(exps) if a)
        rest = exps[:i] + (0,) * (len(exps) - i)
        if any(rest):
            val = s_mul(monomial_image(rest), power(i, exps[i]))
        else:
            val = power(i, exps[i])
        mono_cache[exps] = val
        return val

    for k in range(cap + 1):
        h = f.comps[k]
        for e, c in h.coeffs.items():
            if not any(e):
                out = out + TruncatedSeries.constant(tv, cap, c)
            else:
                out = out + monomial_image(e).scale(c)
    return out


def s_root_unit(f: TruncatedSeries, e: int) -> TruncatedSeries:
    """The e-th root of a unit whose constant term has a root in Q(i).

    The branch is fixed by taking the base-field root of f(0); when f(0)=1
    the branch with constant term 1 is returned.
    """
    if e <= 0:
        raise ValueError("root index must be positive")
    c0 = f.constant_term()
    if c0.is_zero():
        raise NotAUnit("root of a non-unit")
    r0 = nth_root(c0, e)
    if r0 is None:
        raise BaseFieldRootMissing(f"{c0} has no {e}-th root in Q(i)")
    if e == 1:
        return f
    g = f.scale(c0.inverse())
    # build u with u^e = g degree by degree, u = 1 + u_1 + u_2 + ...
    u_comps = [HPoly.zero(f.nvars, k) for k in range(f.cap + 1)]
    u_comps[0] = HPoly.constant(f.nvars, ONE)
    u = TruncatedSeries(f.nvars, f.cap, u_comps)
    inv_e = GaussRational(Fraction(1, e))
    for k in range(1, f.cap + 1):
        p = u**e
        delta = (g.comps[k] - p.comps[k]).scale(inv_e)
        u_comps[k] = delta
        u = TruncatedSeries(f.nvars, f.cap, u_comps)
    return u.scale(r0)


def s_diff(f: TruncatedSeries, i: int) -> TruncatedSeries:
    """Formal partial derivative; the cap drops by one."""
    if f.cap == 0:
        return TruncatedSeries.zero(f.nvars, 0)
    out = []
    for k in range(1, f.cap + 1):
        coeffs = {}
        for e, c in f.comps[k].coeffs.items():
            if e[i]:
                ne = e[:i] + (e[i] - 1,) + e[i + 1 :]
                coeffs[ne] = coeffs.get(ne, ZERO) + c * GaussRational(e[i])
        out.append(HPoly(f.nvars, k - 1, coeffs))
    return TruncatedSeries(f.nvars, f.cap - 1, out)


def s_power_subst(f: TruncatedSeries, exps) -> TruncatedSeries:
    """Substitute x_i -> x_i^(exps[i]); precision grows with min(exps)."""
    exps = list(exps)
    if len(exps) != f.nvars:
        raise VariableCountMismatch("one exponent per variable")
    if any(a < 1 for a in exps):
        raise ValueError("power substitution needs positive exponents")
    emin = min(exps)
    cap = emin * (f.cap + 1) - 1
    terms = []
    for e, c in f.terms():
        ne = tuple(a * b for a, b in zip(e, exps))
        if sum(ne) <= cap:
            terms.append((ne, c))
    return TruncatedSeries.from_terms(f.nvars, cap, terms)


def s_invert_map(images) -> list:
    """Inverse of a coordinate map u -> (psi_1(u), .., psi_m(u)).

    The linear part must be invertible; the inverse is found by the usual
    fixed-point iteration, one degree at a time.
    """
    m = len(images)
    cap = min(g.cap for g in images)
    nv = images[0].nvars
    if nv != m:
        raise VariableCountMismatch("coordinate map must be square")
    lin = [[images[i].comps[1].coeffs.get(_unit_exp(nv, j), ZERO) for j in range(nv)] for i in range(m)]
    lin_inv = _invert_matrix(lin)
    ident = [TruncatedSeries.variable(nv, cap, j) for j in range(nv)]

    def apply_lin(mat, vecs):
        out = []
        for i in range(m):
            acc = TruncatedSeries.zero(nv, cap)
            for j in range(m):
                if not mat[i][j].is_zero():
                    acc = acc + vecs[j].scale(mat[i][j])
            out.append(acc)
        return out

    higher = []
    for i, g in enumerate(images):
        lin_part = TruncatedSeries.from_terms(
            nv, cap, [(_unit_exp(nv, j), lin[i][j]) for j in range(nv)]
        )
        higher.append(g.truncate(cap) - lin_part)

    cur = apply_lin(lin_inv, ident)
    for _ in range(cap):
        correction = [s_subst(h, cur) for h in higher]
        cur = apply_lin(lin_inv, [ident[j] - correction[j] for j in range(m)])
    return cur


def _unit_exp(n, j):
    e = [0] * n
    e[j] = 1
    return tuple(e)


def _invert_matrix(mat):
    """Exact inverse of a small matrix over Q(i) (Gauss-Jordan)."""
    n = len(mat)
    aug = [[mat[i][j] for j in range(n)] + [ONE if i == j else ZERO for j in range(n)] for i in range(n)]
    for col in range(n):
        piv = next((r for r in range(col, n) if not aug[r][col].is_zero()), None)
        if piv is None:
            raise ArithmeticError("linear part is singular")
        aug[col], aug[piv] = aug[piv], aug[col]
        inv = aug[col][col].inverse()
        aug[col] = [v * inv for v in aug[col]]
        for r in range(n):
            if r != col and not aug[r][col].is_zero():
                f = aug[r][col]
                aug[r] = [a - f * b for a, b in zip(aug[r], aug[col])]
    return [row[n:] for row in aug]


def monomials_of_degree(nvars: int, d: int):
    """All exponent tuples in nvars variables of total degree d."""
    if d == 0:
        yield (0,) * nvars
        return
    for combo in combinations_with_replacement(range(nvars), d):
        e = [0] * nvars
        for i in combo:
            e[i] += 1
        yield tuple(e)


# ---------------------------------------------------------------------------
# Ramified series
# ---------------------------------------------------------------------------


class RamifiedSeries:
    """A series in x^(1/e): base(y_1..y_n) read at y_i = x_i^(1/e)."""

    __slots__ = ("base", "ram")

    def __init__(self, base: TruncatedSeries, ram: int):
        if ram < 1:
            raise ValueError("ramification index must be positive")
        self.base = base
        self.ram = ram

    def _with_common_ram(self, other: "RamifiedSeries"):
        from math import lcm

        e = lcm(self.ram, other.ram)
        a = self if self.ram == e else RamifiedSeries(
            s_power_subst(self.base, [e // self.ram] * self.base.nvars), e
        )
        b = other if other.ram == e else RamifiedSeries(
            s_power_subst(other.base, [e // other.ram] * other.base.nvars), e
        )
        cap = min(a.base.cap, b.base.cap)
        return a.base.truncate(cap), b.base.truncate(cap), e

    def __add__(self, other):
        a, b, e = self._with_common_ram(other)
        return RamifiedSeries(a + b, e)

    def __sub__(self, other):
        a, b, e = self._with_common_ram(other)
        return RamifiedSeries(a - b, e)

    def __neg__(self):
        return RamifiedSeries(-self.base, self.ram)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, GaussRational)):
            return RamifiedSeries(self.base.scale(other), self.ram)
        a, b, e = self._with_common_ram(other)
        return RamifiedSeries(s_mul(a, b), e)

    def __pow__(self, k: int):
        out = RamifiedSeries(TruncatedSeries.one(self.base.nvars, self.base.cap), self.ram)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other):
        if not isinstance(other, RamifiedSeries):
            return NotImplemented
        a, b, _ = self._with_common_ram(other)
        return a == b

    def descend(self):
        """The underlying TruncatedSeries when all exponents are multiples
        of the ramification; None otherwise."""
        if self.ram == 1:
            return self.base
        e = self.ram
        terms = []
        for exps, c in self.base.terms():
            if any(a % e for a in exps):
                return None
            terms.append((tuple(a // e for a in exps), c))
        return TruncatedSeries.from_terms(self.base.nvars, self.base.cap // e, terms)

    def __repr__(self):
        return f"Ramified(e={self.ram}, {self.base!r})"

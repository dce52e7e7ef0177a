"""Puiseux-type factorization of monic polynomials over truncated series.

The recursion follows the classical pattern: center the polynomial, pick
the index minimizing nu(a_k)/k, adjoin a radical of the initial form,
rescale so the residue polynomial is not a pure power, split it coprimely
over Q(i), lift the split by graded Hensel iteration, and recurse on the
factors.  Towers are kept to a single pure radical wherever possible; a
second independent radical triggers one primitive-element merge.

Scalar arithmetic never leaves Q(i): residue polynomials must split by
rational-root search or the quadratic formula, and radicands must be
recognizable k-th powers after at most one extension, otherwise
BaseFieldFactorizationUnsupported is raised (the decidable-base contract).
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations
from math import factorial

from . import upoly
from .errors import (
    BaseFieldFactorizationUnsupported,
    BaseFieldRootMissing,
    NoMatch,
    NotCoprime,
    NotQuasiOrdinary,
    NotReduced,
    NotSupported,
)
from .gaussq import ZERO, ONE, GaussRational
from .homogeneous import (
    GradedFrac,
    HFrac,
    HomElem,
    VGammaElem,
    gamma_adjoin,
    hfrac_nth_root,
    hpoly_exact_div,
    _hpoly_gcd,
    primitive_element,
    radical_in_field,
    trivial_gamma,
    vg_initial_slice,
    vg_residue_constant,
    vg_valuation,
)
from .series import HPoly, RamifiedSeries, TruncatedSeries, s_power_subst, s_subst
from .weierstrass import MonicPoly, discriminant, is_monomial_unit


# ---------------------------------------------------------------------------
# Polynomials with tower coefficients (ascending lists)
# ---------------------------------------------------------------------------


def _vp_normalize(p):
    while p and p[-1].is_zero():
        p.pop()
    return p


def _vp_mul(p, q):
    if not p or not q:
        return []
    out = [None] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a.is_zero():
            continue
        for j, b in enumerate(q):
            if b.is_zero():
                continue
            t = a * b
            out[i + j] = t if out[i + j] is None else out[i + j] + t
    zero = p[0].scale(ZERO)
    return _vp_normalize([c if c is not None else zero for c in out])


def _vp_sub(p, q):
    n = max(len(p), len(q))
    out = []
    for k in range(n):
        a = p[k] if k < len(p) else None
        b = q[k] if k < len(q) else None
        if a is None:
            out.append(-b)
        elif b is None:
            out.append(a)
        else:
            out.append(a - b)
    return _vp_normalize(out)


def _vp_add(p, q):
    n = max(len(p), len(q))
    out = []
    for k in range(n):
        a = p[k] if k < len(p) else None
        b = q[k] if k < len(q) else None
        if a is None:
            out.append(b)
        elif b is None:
            out.append(a)
        else:
            out.append(a + b)
    return _vp_normalize(out)


def _vp_scale_upoly(p, scalars, template):
    """Lift a Q(i) upoly into tower coefficients using a template element."""
    return _vp_normalize([template.scale(c) for c in scalars])


def _vp_divmod_rational(p, div):
    """Divide a tower-coefficient polynomial by a monic Q(i) polynomial."""
    r = list(p)
    dq = len(div) - 1
    quo = []
    while len(r) - 1 >= dq and r:
        lead = r[-1]
        k = len(r) - 1 - dq
        quo.append((k, lead))
        for j, cq in enumerate(div):
            if cq.is_zero():
                continue
            idx = k + j
            r[idx] = r[idx] - lead.scale(cq)
        r.pop()
        _vp_normalize(r)
    out = []
    if quo:
        deg = max(k for k, _ in quo)
        zero = quo[0][1].scale(ZERO)
        out = [zero] * (deg + 1)
        for k, c in quo:
            out[k] = c
    return _vp_normalize(out), _vp_normalize(r)


def _vp_min_valuation(p):
    best = None
    for c in p:
        v = vg_valuation(c)
        if v is not None and (best is None or v < best):
            best = v
    return best


# ---------------------------------------------------------------------------
# Hensel lifting over the graded pieces
# ---------------------------------------------------------------------------


def _hensel_core(q_coeffs, R1, R2, cap, gamma, nvars):
    """Split y^d + ... (ascending tower coefficients, monic) along a coprime
    factorization of its residue.  Returns ascending coefficient lists."""
    g, U, V = upoly.xgcd(R1, R2)
    if upoly.degree(g) != 0:
        raise NotCoprime("residue factors share a root")
    _ = U
    one = VGammaElem.from_graded(gamma, GradedFrac.one(nvars, cap))
    Q1 = [one.scale(c) for c in R1]
    Q2 = [one.scale(c) for c in R2]
    err = _vp_sub(q_coeffs, _vp_mul(Q1, Q2))
    prev_s = None
    guard = 0
    while True:
        guard += 1
        if guard > 8 * (cap + 4) * max(1, gamma.degree_z):
            raise ArithmeticError("hensel iteration failed to terminate")
        s = _vp_min_valuation(err)
        if s is None or s > cap:
            break
        if prev_s is not None and s <= prev_s:
            raise ArithmeticError("hensel iteration stalled")
        prev_s = s
        E_s = [vg_initial_slice(c, s) for c in err]
        # solve d1*R2 + d2*R1 = E_s with deg d1 < deg R1, via Bezout
        VE = _vp_mul(E_s, [one.scale(c) for c in V])
        _, d1 = _vp_divmod_rational(VE, R1)
        rem = _vp_sub(E_s, _vp_mul(d1, [one.scale(c) for c in R2]))
        d2, r0 = _vp_divmod_rational(rem, R1)
        if r0:
            raise ArithmeticError("hensel correction failed to divide")
        # err -= d1*Q2 + d2*Q1 + d1*d2 (the corrections are single slices,
        # so the update is much cheaper than recomputing the product)
        delta = _vp_add(_vp_add(_vp_mul(d1, Q2), _vp_mul(d2, Q1)), _vp_mul(d1, d2))
        err = _vp_sub(err, delta)
        Q1 = _vp_normalize([a + b for a, b in _pad(Q1, d1)])
        Q2 = _vp_normalize([a + b for a, b in _pad(Q2, d2)])
    return Q1, Q2


def _pad(p, q):
    n = max(len(p), len(q))
    zero = (p or q)[0].scale(ZERO)
    pp = list(p) + [zero] * (n - len(p))
    qq = list(q) + [zero] * (n - len(q))
    return zip(pp, qq)


def _residue_of(coeffs):
    out = []
    for c in coeffs:
        r = vg_residue_constant(c)
        out.append(r if r is not None else ZERO)
    return out


def hensel_lift(Q: MonicPoly, R1, R2, cap=None):
    """Lift a coprime residue split of a monic polynomial over plain series.

    R1, R2 are Q(i) coefficient lists (ascending) with R1*R2 equal to the
    residue Q(0)(y); the returned pair multiplies back to Q at cap and
    reduces to (R1, R2) modulo the maximal ideal.
    """
    cap = Q.cap if cap is None else cap
    nv = Q.nvars
    gamma = trivial_gamma(nv)
    coeffs = _monic_to_vp(Q.truncate(cap), gamma)
    resid = [vg_residue_constant(c) for c in coeffs]
    if any(r is None for r in resid):
        raise NotCoprime("residue polynomial is not defined over Q(i)")
    prod = upoly.mul(upoly.normalize(list(R1)), upoly.normalize(list(R2)))
    if prod != upoly.normalize(list(resid)):
        raise NotCoprime("split does not multiply back to the residue")
    Q1, Q2 = _hensel_core(coeffs, upoly.normalize(list(R1)), upoly.normalize(list(R2)), cap, gamma, nv)
    return _vp_to_monic(Q1, cap, nv), _vp_to_monic(Q2, cap, nv)


def _monic_to_vp(P: MonicPoly, gamma):
    out = []
    for k in range(P.degY, 0, -1):
        out.append(VGammaElem.from_series(gamma, P.coeffs[k - 1]))
    out.append(VGammaElem.from_graded(gamma, GradedFrac.one(P.nvars, P.cap)))
    return out


def _vp_to_monic(p, cap, nv):
    d = len(p) - 1
    coeffs = []
    for k in range(d - 1, -1, -1):
        base = p[k].base_part()
        if base is None:
            raise ArithmeticError("factor does not descend to plain series")
        s = base.truncate(cap).to_series()
        if s is None:
            raise ArithmeticError("factor has nonconstant denominators")
        comps = list(s.comps) + [HPoly.zero(nv, j) for j in range(s.cap + 1, cap + 1)]
        coeffs.append(TruncatedSeries(nv, cap, comps[: cap + 1]))
    return MonicPoly(d, coeffs)


# ---------------------------------------------------------------------------
# The factorization recursion
# ---------------------------------------------------------------------------


class _Tower:
    """Current extension data: gamma plus a lift from the previous tower."""

    def __init__(self, gamma: HomElem, nvars: int, cap: int):
        self.gamma = gamma
        self.nvars = nvars
        self.cap = cap

    def one(self):
        return VGammaElem.from_graded(self.gamma, GradedFrac.one(self.nvars, self.cap))


def _identity_lift(xi: VGammaElem) -> VGammaElem:
    return xi


def _rewrap_lift(new_gamma: HomElem):
    """Lift from the trivial tower: re-read base elements over new_gamma."""

    def lift(xi: VGammaElem) -> VGammaElem:
        base = xi.base_part()
        if base is None:
            raise NotSupported("cannot rewrap a non-base element")
        return VGammaElem.from_graded(new_gamma, base)

    return lift


def _compose(f, g):
    if f is _identity_lift:
        return g
    if g is _identity_lift:
        return f
    return lambda xi: g(f(xi))


def _make_lift(expr_old: VGammaElem, new_gamma: HomElem):
    """Rewrite an element over the old gamma as one over new_gamma, given
    the expression of the old gamma in the new tower."""

    def lift(xi: VGammaElem) -> VGammaElem:
        out = VGammaElem.zero(new_gamma, xi.nvars, xi.cap)
        for (j, t), gf in xi.parts.items():
            if t != 0:
                raise NotSupported("cannot lift twisted elements")
            term = (expr_old**j).scale_graded(gf) if j else VGammaElem.from_graded(new_gamma, gf)
            out = out + term
        return out

    return lift


def _radical_candidates(init: VGammaElem, k0: int, tower: _Tower):
    """Ways to realize a k0-th root of the initial slice.

    Yields (gamma1_in_new_tower, new_tower, lift); cheap in-tower solutions
    first, then a pure extension (with one primitive-element merge when the
    tower is already nontrivial), for each radicand normalization.
    """
    nv, cap = tower.nvars, tower.cap
    parts = dict(init.parts)
    single_base = init.descends_to_base()
    if not single_base and len(parts) != 1:
        raise BaseFieldFactorizationUnsupported(
            "initial form mixes gamma powers; nested radicals are out of scope"
        )
    if not single_base:
        # single part C * gamma^j: search t*gamma^m with (t g^m)^k0 = C g^j
        ((j, t), gf), = parts.items()
        if t != 0:
            raise BaseFieldFactorizationUnsupported("twisted initial form")
        if not tower.gamma.pure:
            raise BaseFieldFactorizationUnsupported(
                "radical over a merged tower is out of scope"
            )
        C = gf.initial()
        E = tower.gamma.degree_z
        h = HFrac.from_hpoly(tower.gamma.radicand)
        for m in range(E):
            q, r = divmod(m * k0, E)
            if r != j:
                continue
            tt = hfrac_nth_root(C / (h**q), k0)
            if tt is not None:
                g1 = VGammaElem.gamma_power(tower.gamma, nv, cap, m).scale_hfrac(tt)
                yield g1, tower, _identity_lift
                return
        raise BaseFieldFactorizationUnsupported("no k-th root over the tower")
    f = init.base_part().initial()
    if f is None:
        raise BaseFieldFactorizationUnsupported("empty initial form")
    # in-tower solution (covers rational roots over the trivial tower)
    if tower.gamma.pure:
        found = radical_in_field(tower.gamma, f, k0)
        if found is not None:
            tt, j = found
            g1 = VGammaElem.gamma_power(tower.gamma, nv, cap, j).scale_hfrac(tt)
            yield g1, tower, _identity_lift
    # extension, for each radicand normalization: lex-monic core first
    # (canonical gammas, rational residue splits), then the full initial
    # form (absorbs the scalar so deg-2 residues always split over Q(i))
    monic_num, cnum = f.num.monic_scaled()
    variants = [HFrac(monic_num, f.den)]
    if not cnum.is_one():
        variants.append(f)
    for rad in variants:
        num, den = rad.num, rad.den
        if den.degree == 0:
            cd = den.lex_leading()[1]
            radpoly = num.scale(cd.inverse())
            corr = HFrac.from_scalar(nv, ONE)
        else:
            radpoly = num * (den ** (k0 - 1))
            corr = HFrac(HPoly.constant(nv, ONE), den)
        if radpoly.degree == 0:
            continue  # scalar extension: outside the supported base field
        zeros = [HPoly.zero(nv, 0) for _ in range(k0 - 1)]
        try:
            g_new = gamma_adjoin(zeros + [-radpoly])
        except Exception:
            continue
        if tower.gamma.is_trivial():
            new_tower = _Tower(g_new, nv, cap)
            g1 = VGammaElem.gamma_power(g_new, nv, cap, 1).scale_hfrac(corr)
            yield g1, new_tower, _rewrap_lift(g_new)
        elif tower.gamma.pure:
            try:
                g0, expr_old, expr_new = primitive_element(tower.gamma, g_new)
            except Exception as exc:
                raise BaseFieldFactorizationUnsupported(
                    f"tower merge failed: {exc}"
                ) from exc
            new_tower = _Tower(g0, nv, cap)
            lift = _make_lift(expr_old.truncate(cap), g0)
            g1 = expr_new.truncate(cap).scale_hfrac(corr)
            yield g1, new_tower, lift
        else:
            raise BaseFieldFactorizationUnsupported(
                "third independent radical is out of scope"
            )


def _vg_inverse_homog(init: VGammaElem) -> VGammaElem:
    """Inverse of a nu-homogeneous tower element (single gamma power)."""
    items = list(init.parts.items())
    if len(items) != 1:
        raise BaseFieldFactorizationUnsupported("cannot invert a mixed slice")
    (j, t), gf = items[0]
    if t != 0:
        raise BaseFieldFactorizationUnsupported("cannot invert a twisted slice")
    C = gf.initial()
    E = init.gamma.degree_z
    if j == 0:
        return VGammaElem.from_graded(
            init.gamma, GradedFrac.from_hfrac(C.inverse(), init.cap)
        )
    if not init.gamma.pure:
        raise BaseFieldFactorizationUnsupported("inverse over a merged tower slice")
    h = HFrac.from_hpoly(init.gamma.radicand)
    # gamma^-j = gamma^(E-j) / h
    out = VGammaElem.gamma_power(init.gamma, init.nvars, init.cap, E - j)
    return out.scale_hfrac(C.inverse() / h)


def _vg_inverse(xi: VGammaElem, cap: int) -> VGammaElem:
    """Inverse of a tower element with nu-homogeneous leading slice."""
    mu = vg_valuation(xi)
    if mu is None:
        raise ZeroDivisionError("inverting an element that vanishes up to cap")
    init = vg_initial_slice(xi, mu)
    inv0 = _vg_inverse_homog(init)
    one = VGammaElem.from_graded(xi.gamma, GradedFrac.one(xi.nvars, cap))
    m = one - xi * inv0
    out = one
    power = one
    steps = (cap + 2) * max(1, xi.gamma.degree_z)
    for _ in range(steps):
        power = power * m
        if power.is_zero():
            break
        out = out + power
    return inv0 * out


class NpeFactorization:
    """Roots over a common tower, grouped into base-irreducible orbits."""

    def __init__(self, gamma, roots, orbits, h, cap, certified_cap):
        self.gamma = gamma
        self.roots = roots
        self.orbits = orbits
        self.h = h
        self.cap = cap
        self.certified_cap = certified_cap

    def orbit_factors(self):
        """For each orbit, the coefficients of prod (y - xi) as GradedFracs
        (descending powers, leading 1 omitted)."""
        out = []
        for orbit in self.orbits:
            poly = [VGammaElem.from_graded(
                self.gamma, GradedFrac.one(self.roots[0].nvars, self.roots[0].cap)
            )]
            for i in orbit:
                poly = _vp_mul(poly, [-self.roots[i], _one_like(self.roots[i])])
            coeffs = []
            for c in poly[-2::-1]:
                base = c.base_part()
                if base is None:
                    raise ArithmeticError("orbit product failed to descend")
                coeffs.append(base)
            out.append(coeffs)
        return out


def _one_like(xi: VGammaElem) -> VGammaElem:
    return VGammaElem.from_graded(xi.gamma, GradedFrac.one(xi.nvars, xi.cap))


def npe_factor(P: MonicPoly, cap=None) -> NpeFactorization:
    """Factor a reduced monic polynomial into linear factors over a valued
    tower, returning roots, conjugacy orbits, and the denominator h.

    Raises NotReduced when the discriminant vanishes up to cap and
    BaseFieldFactorizationUnsupported when a residue polynomial or radicand
    leaves the supported Q(i) tower.
    """
    cap = P.cap if cap is None else min(cap, P.cap)
    P = P.truncate(cap)
    if P.degY < 1:
        raise ValueError("nothing to factor")
    disc = discriminant(P)
    if disc.is_zero():
        raise NotReduced("discriminant vanishes up to cap")
    nv = P.nvars
    tower = _Tower(trivial_gamma(nv), nv, cap)
    coeffs = _monic_to_vp(P, tower.gamma)[:-1][::-1]  # a_1..a_d as VGamma
    roots, final_tower, _lift = _npe_rec(coeffs, tower)
    orbits = _orbits_by_descent(roots)
    h = _collect_h(roots, final_tower)
    cert = min((r.effective_cap() for r in roots), default=Fraction(cap))
    return NpeFactorization(final_tower.gamma, roots, orbits, h, cap, cert)


def _npe_rec(coeffs, tower: _Tower):
    """coeffs: [a_1..a_d] over tower.gamma.

    Returns (roots, tower_out, lift) with lift mapping elements over the
    incoming tower to the outgoing one.
    """
    d = len(coeffs)
    nv, cap = tower.nvars, tower.cap
    if d == 1:
        return [-coeffs[0]], tower, _identity_lift
    # tschirnhaus: shift y by a_1/d
    shift = coeffs[0].scale(GaussRational(Fraction(1, d)))
    b = _shifted_coeffs(coeffs, shift, tower)
    if all(c.is_zero() for c in b):
        raise NotReduced("pure power y^d detected at this cap")
    # slope selection: minimize nu(a_k)/k, ties to the smallest k
    k0, mu = None, None
    for k in range(2, d + 1):
        v = vg_valuation(b[k - 1])
        if v is None:
            continue
        slope = v / k
        if mu is None or slope < mu:
            k0, mu = k, slope
    if k0 is None:
        raise NotReduced("all lower coefficients vanish up to cap")
    nu0 = mu * k0
    init = vg_initial_slice(b[k0 - 1], nu0)
    last_err = None
    for g1, new_tower, lift0 in _radical_candidates(init, k0, tower):
        try:
            lifted = [lift0(c) for c in b]
            g1_inv = _vg_inverse(g1, cap)
            scaled = []
            for k in range(1, d + 1):
                scaled.append(lifted[k - 1] * (g1_inv**k))
            resid = [vg_residue_constant(c) for c in scaled]
            if any(r is None for r in resid):
                raise BaseFieldFactorizationUnsupported(
                    "residue polynomial has nonconstant coefficients"
                )
            split = _residue_split(resid)
            if split is None:
                raise BaseFieldFactorizationUnsupported(
                    "residue polynomial does not split over Q(i)"
                )
            R1, R2 = split
            one = new_tower.one()
            q_coeffs = list(reversed(scaled)) + [one]
            Q1, Q2 = _hensel_core(q_coeffs, R1, R2, cap, new_tower.gamma, nv)
            roots1, tower1, lift_a = _npe_rec(_vp_to_desc(Q1), new_tower)
            Q2_lifted = [lift_a(c) for c in _vp_to_desc(Q2)]
            roots2, tower2, lift_b = _npe_rec(Q2_lifted, tower1)
            g1_final = lift_b(lift_a(g1))
            shift_final = lift_b(lift_a(lift0(shift)))
            roots = [g1_final * lift_b(r) for r in roots1]
            roots += [g1_final * r for r in roots2]
            total = _compose(lift0, _compose(lift_a, lift_b))
            return [r - shift_final for r in roots], tower2, total
        except BaseFieldFactorizationUnsupported as exc:
            last_err = exc
            continue
    raise last_err or BaseFieldFactorizationUnsupported("no radical candidate worked")


def _vp_to_desc(p):
    """ascending monic vp -> descending [a_1..a_d] coefficient list."""
    d = len(p) - 1
    return [p[k] for k in range(d - 1, -1, -1)]


def _shifted_coeffs(coeffs, shift, tower: _Tower):
    """Coefficients of P(y - shift) given those of P (a_1..a_d)."""
    one = tower.one()
    out = [one]
    neg = -shift
    for a in coeffs:
        nxt = [None] * (len(out) + 1)
        for i, c in enumerate(out):
            nxt[i] = c if nxt[i] is None else nxt[i] + c
            t = c * neg
            nxt[i + 1] = t if nxt[i + 1] is None else nxt[i + 1] + t
        nxt[-1] = nxt[-1] + a if nxt[-1] is not None else a
        out = nxt
    return out[1:]


def _residue_split(resid_desc):
    """Coprime monic split (R1, R2) of y^d + sum resid[k] y^(d-k), or None.

    R1 collects one root with its full multiplicity; R2 is the rest.
    Both are ascending Q(i) coefficient lists.
    """
    d = len(resid_desc)
    poly = upoly.normalize([resid_desc[d - 1 - k] for k in range(d)] + [ONE])
    roots = upoly.rational_roots(poly)
    if not roots:
        return None
    blocks = []
    rest = poly
    for r, m in roots:
        block = upoly.pow_(upoly.upoly([-r, ONE]), m)
        blocks.append(block)
        rest, rem = upoly.divmod_(rest, block)
        assert not rem
    if upoly.degree(rest) > 0:
        blocks.append(rest)
    if len(blocks) < 2:
        return None
    R1 = blocks[0]
    R2 = [ONE]
    for b in blocks[1:]:
        R2 = upoly.mul(R2, b)
    return R1, R2


def _orbits_by_descent(roots):
    """Partition root indices into minimal subsets whose products descend."""
    n = len(roots)
    remaining = sorted(range(n))
    orbits = []
    while remaining:
        first = remaining[0]
        found = None
        for size in range(1, len(remaining) + 1):
            for combo in combinations(remaining, size):
                if combo[0] != first:
                    continue
                if _product_descends([roots[i] for i in combo]):
                    found = list(combo)
                    break
            if found:
                break
        if not found:
            found = list(remaining)  # defensive: everything in one orbit
        orbits.append(found)
        remaining = [i for i in remaining if i not in found]
    return orbits


def _product_descends(roots):
    poly = [_one_like(roots[0])]
    for r in roots:
        poly = _vp_mul(poly, [-r, _one_like(r)])
    return all(c.descends_to_base() for c in poly[:-1])


def _collect_h(roots, tower: _Tower):
    """Product of the distinct denominators across all root data."""
    nv = tower.nvars
    h = HPoly.constant(nv, ONE)
    seen = []
    dens = []
    for r in roots:
        for (_j, _t), gf in r.parts.items():
            for _k, f in gf.parts.items():
                if f.den.degree > 0:
                    dens.append(f.den)
    if tower.gamma.pure and tower.gamma.degree_z > 1:
        pass  # the radicand is not a denominator
    for den in dens:
        if any(den == s for s in seen):
            continue
        seen.append(den)
        g = _hpoly_gcd(h, den)
        extra = hpoly_exact_div(den, g) if g.degree else den
        h = h * extra
    return h


# ---------------------------------------------------------------------------
# Abhyankar-Jung roots
# ---------------------------------------------------------------------------


def aj_roots(P: MonicPoly, cap=None):
    """Fractional-power roots of a quasi-ordinary polynomial (n <= 2).

    The discriminant must be a monomial times a unit in the given
    coordinates; the roots are returned as RamifiedSeries with a common
    ramification index dividing d!.
    """
    cap = P.cap if cap is None else min(cap, P.cap)
    P = P.truncate(cap)
    if P.nvars > 2:
        raise NotSupported("the ramified recursion is limited to n <= 2")
    d = P.degY
    disc = discriminant(P)
    if disc.is_zero():
        raise NotReduced("discriminant vanishes up to cap")
    if is_monomial_unit(disc) is None:
        raise NotQuasiOrdinary("discriminant is not monomial times a unit")
    last = None
    for e in _sorted_divisors(factorial(d)):
        try:
            roots = _aj_attempt(P, e, cap)
        except (BaseFieldFactorizationUnsupported, BaseFieldRootMissing) as exc:
            last = exc
            continue
        if roots is not None:
            return roots
    raise last or BaseFieldRootMissing("no ramification index in d! worked")


def _sorted_divisors(n):
    out = [e for e in range(1, n + 1) if n % e == 0]
    return out


def _aj_attempt(P: MonicPoly, e: int, cap: int):
    sub_cap = e * (cap + 1) - 1
    coeffs = [s_power_subst(a, [e] * P.nvars).truncate(sub_cap) for a in P.coeffs]
    Psub = MonicPoly(P.degY, coeffs)
    fact = npe_factor(Psub, sub_cap)
    out = []
    for r in fact.roots:
        base = r.base_part()
        if base is None:
            return None
        s = base.to_series()
        if s is None:
            return None
        out.append(RamifiedSeries(s, e))
    return out


# ---------------------------------------------------------------------------
# Matching roots against a morphism in prepared form
# ---------------------------------------------------------------------------


def match_root(P: MonicPoly, images, cap=None):
    """The root of a quasi-ordinary P matched by a prepared morphism.

    images = (phi1, phi2, phi_y): monomial images of x_1, x_2 and the image
    of y, as TruncatedSeries in the target variables.  Returns
    (index, certificate) where the certificate lists residual valuations of
    every candidate; raises NoMatch when no residual vanishes at cap.
    """
    phi1, phi2, phiy = images
    cap = phiy.cap if cap is None else cap
    roots = aj_roots(P, cap if cap <= P.cap else P.cap)
    e = 1
    for r in roots:
        e = e * r.ram // _gcd(e, r.ram)
    m1 = _monomial_of(phi1)
    m2 = _monomial_of(phi2)
    if m1 is None or m2 is None:
        raise NotSupported("match_root expects monomial images of x_1, x_2")
    ucap = e * (phiy.cap + 1) - 1
    phiy_ram = s_power_subst(phiy, [e] * phiy.nvars)
    residuals = []
    matched = None
    from .gaussq import nth_root

    for idx, r in enumerate(roots):
        rr = r if r.ram == e else RamifiedSeries(
            s_power_subst(r.base, [e // r.ram] * r.base.nvars), e
        )
        images_sub = []
        for exps, c in (m1, m2):
            ce = nth_root(c, e)
            if ce is None:
                raise BaseFieldRootMissing(f"{c} has no {e}-th root in Q(i)")
            images_sub.append(TruncatedSeries.monomial(phiy.nvars, ucap, exps, ce))
        value = s_subst(rr.base.truncate(min(rr.base.cap, ucap)), images_sub)
        resid = phiy_ram.truncate(min(phiy_ram.cap, value.cap)) - value.truncate(
            min(phiy_ram.cap, value.cap)
        )
        if resid.is_zero():
            residuals.append(None)
            if matched is None:
                matched = idx
        else:
            k = next(k for k, h in enumerate(resid.comps) if not h.is_zero())
            residuals.append(Fraction(k, e))
    if matched is None:
        raise NoMatch("no root matches the morphism at this cap")
    return matched, {"matched": matched, "residuals": residuals, "ram": e}


def _monomial_of(f: TruncatedSeries):
    terms = list(f.terms())
    if len(terms) != 1:
        return None
    return terms[0]


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a

"""Dense univariate polynomials over Q(i).

Coefficient lists run from the constant term upward; trailing zeros are
stripped so that degree(p) == len(p) - 1.  Used for residue polynomials in
the Hensel layer, restrictions to exceptional curves, and cyclotomic
polynomials.
"""

from __future__ import annotations

from fractions import Fraction

from .gaussq import ZERO, ONE, GaussRational, UNITS, gaussian_divisors, sqrt


def normalize(p):
    while p and p[-1].is_zero():
        p.pop()
    return p


def upoly(coeffs) -> list:
    out = []
    for c in coeffs:
        if isinstance(c, (int, Fraction)):
            c = GaussRational(c)
        out.append(c)
    return normalize(out)


def degree(p) -> int:
    return len(p) - 1  # degree of the zero polynomial is -1


def is_zero(p) -> bool:
    return not p


def add(p, q):
    if len(p) < len(q):
        p, q = q, p
    out = list(p)
    for k, c in enumerate(q):
        out[k] = out[k] + c
    return normalize(out)


def neg(p):
    return [-c for c in p]


def sub(p, q):
    return add(p, neg(q))


def scale(p, c: GaussRational):
    if c.is_zero():
        return []
    return normalize([a * c for a in p])


def mul(p, q):
    if not p or not q:
        return []
    out = [ZERO] * (len(p) + len(q) - 1)
    for a, ca in enumerate(p):
        if ca.is_zero():
            continue
        for b, cb in enumerate(q):
            if not cb.is_zero():
                out[a + b] = out[a + b] + ca * cb
    return normalize(out)


def pow_(p, k: int):
    out = [ONE]
    while k:
        if k & 1:
            out = mul(out, p)
        p = mul(p, p)
        k >>= 1
    return out


def divmod_(p, q):
    """Quotient and remainder; q need not be monic but must be nonzero."""
    if not q:
        raise ZeroDivisionError("polynomial division by zero")
    r = list(p)
    dq = degree(q)
    lead_inv = q[-1].inverse()
    quo = [ZERO] * max(0, len(p) - dq)
    while len(r) - 1 >= dq and r:
        k = len(r) - 1 - dq
        c = r[-1] * lead_inv
        quo[k] = c
        for j, cq in enumerate(q):
            r[k + j] = r[k + j] - c * cq
        normalize(r)
    return normalize(quo), r


def monic(p):
    if not p:
        return p
    return scale(p, p[-1].inverse())


def gcd(p, q):
    while q:
        _, r = divmod_(p, q)
        p, q = q, r
    return monic(p)


def xgcd(p, q):
    """Extended gcd: (g, u, v) with u*p + v*q = g, g monic (or zero)."""
    r0, r1 = list(p), list(q)
    u0, u1 = [ONE], []
    v0, v1 = [], [ONE]
    while r1:
        quo, rem = divmod_(r0, r1)
        r0, r1 = r1, rem
        u0, u1 = u1, sub(u0, mul(quo, u1))
        v0, v1 = v1, sub(v0, mul(quo, v1))
    if r0:
        c = r0[-1].inverse()
        r0, u0, v0 = scale(r0, c), scale(u0, c), scale(v0, c)
    return r0, u0, v0


def derivative(p):
    return normalize([p[k] * k for k in range(1, len(p))])


def evaluate(p, x: GaussRational) -> GaussRational:
    out = ZERO
    for c in reversed(p):
        out = out * x + c
    return out


def shift(p, c: GaussRational):
    """Compose p with (y + c)."""
    out = []
    for coeff in reversed(p):
        out = add(mul(out, [c, ONE]), [coeff])
    return out


def root_multiplicity(p, r: GaussRational) -> int:
    m = 0
    while p and evaluate(p, r).is_zero():
        p, rem = divmod_(p, [-r, ONE])
        assert not rem
        m += 1
    return m


def rational_roots(p):
    """All roots of p lying in Q(i), with multiplicities: list of (root, mult).

    Rational-root theorem over Z[i]: clear denominators, enumerate Gaussian
    divisors of the extreme coefficients.  Complete for roots inside Q(i).
    """
    if not p:
        raise ZeroDivisionError("zero polynomial has every root")
    roots = []
    if p[0].is_zero():
        m = 0
        while p[0].is_zero() and len(p) > 1:
            p = p[1:]
            m += 1
        roots.append((ZERO, m))
    if degree(p) == 0:
        return roots
    if degree(p) == 1:
        r = -p[0] / p[1]
        roots.append((r, 1))
        return roots
    if degree(p) == 2:
        # quadratic formula with the exact Q(i) square-root decision
        a, b, c = p[2], p[1], p[0]
        disc = b * b - GaussRational(4) * a * c
        s = sqrt(disc)
        if s is not None:
            inv = (a * GaussRational(2)).inverse()
            for r in {(-b + s) * inv, (-b - s) * inv}:
                roots.append((r, root_multiplicity(p, r)))
        return _dedupe(roots)
    # general: clear denominators to Z[i] and enumerate divisor quotients
    den = 1
    for co in p:
        den = _lcm(den, co.re.denominator)
        den = _lcm(den, co.im.denominator)
    ip = [co * GaussRational(den) for co in p]
    lead = (ip[-1].re.numerator, ip[-1].im.numerator)
    const = (ip[0].re.numerator, ip[0].im.numerator)
    if const == (0, 0):  # handled above, defensive
        return roots
    seen = set()
    for dn in gaussian_divisors(const):
        for dd in gaussian_divisors(lead):
            for u in UNITS:
                num = GaussRational(dn[0], dn[1]) * u
                cand = num / GaussRational(dd[0], dd[1])
                if cand in seen:
                    continue
                seen.add(cand)
                if evaluate(p, cand).is_zero():
                    roots.append((cand, root_multiplicity(p, cand)))
    return _dedupe(roots)


def _dedupe(roots):
    out = []
    seen = set()
    for r, m in roots:
        if r not in seen:
            seen.add(r)
            out.append((r, m))
    return out


def _lcm(a: int, b: int) -> int:
    from math import gcd as igcd

    return a // igcd(a, b) * b


def cyclotomic(e: int):
    """The e-th cyclotomic polynomial over Q, as a upoly."""
    # Phi_e = (z^e - 1) / prod_{d|e, d<e} Phi_d
    num = [ -ONE ] + [ZERO] * (e - 1) + [ONE]
    for d in range(1, e):
        if e % d == 0:
            q, r = divmod_(num, cyclotomic(d))
            assert not r
            num = q
    return num

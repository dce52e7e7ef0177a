"""Sparse multivariate polynomials over Q(i), with fraction-free determinants.

Support layer for resultant computations (primitive elements, test oracles).
Exponent tuples map to nonzero scalars; lex order drives exact division.
"""

from __future__ import annotations

from .gaussq import ZERO, ONE, GaussRational


def mp_zero():
    return {}


def mp_const(nvars: int, c: GaussRational):
    if c.is_zero():
        return {}
    return {(0,) * nvars: c}


def mp_is_zero(p) -> bool:
    return not p


def mp_add(p, q):
    out = dict(p)
    for e, c in q.items():
        s = out.get(e, ZERO) + c
        if s.is_zero():
            out.pop(e, None)
        else:
            out[e] = s
    return out


def mp_neg(p):
    return {e: -c for e, c in p.items()}


def mp_sub(p, q):
    return mp_add(p, mp_neg(q))


def mp_mul(p, q):
    out = {}
    for e1, c1 in p.items():
        for e2, c2 in q.items():
            e = tuple(a + b for a, b in zip(e1, e2))
            s = out.get(e, ZERO) + c1 * c2
            if s.is_zero():
                out.pop(e, None)
            else:
                out[e] = s
    return out


def mp_pow(p, k: int, nvars: int):
    out = mp_const(nvars, ONE)
    while k:
        if k & 1:
            out = mp_mul(out, p)
        p = mp_mul(p, p)
        k >>= 1
    return out


def mp_exact_div(p, q):
    """Exact quotient p/q in the polynomial ring (lex division, no remainder)."""
    if not q:
        raise ZeroDivisionError("division by the zero polynomial")
    out = {}
    rem = dict(p)
    qe = max(q)
    qc = q[qe]
    while rem:
        re = max(rem)
        e = tuple(a - b for a, b in zip(re, qe))
        if any(a < 0 for a in e):
            raise ArithmeticError("non-exact polynomial division")
        c = rem[re] / qc
        out[e] = c
        rem = mp_sub(rem, mp_mul({e: c}, q))
    return out


def mp_det_bareiss(matrix):
    """Fraction-free Bareiss determinant; entries are mpolys over Q(i)."""
    n = len(matrix)
    if n == 0:
        raise ValueError("empty matrix")
    nvars = None
    for row in matrix:
        for e in row:
            for expt in e:
                nvars = len(expt)
                break
            if nvars:
                break
        if nvars:
            break
    m = [list(row) for row in matrix]
    sign = 1
    prev = None
    for k in range(n - 1):
        if mp_is_zero(m[k][k]):
            swap = next((r for r in range(k + 1, n) if not mp_is_zero(m[r][k])), None)
            if swap is None:
                return {}
            m[k], m[swap] = m[swap], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = mp_sub(mp_mul(m[i][j], m[k][k]), mp_mul(m[i][k], m[k][j]))
                m[i][j] = mp_exact_div(num, prev) if prev is not None else num
            m[i][k] = {}
        prev = m[k][k]
    det = m[n - 1][n - 1]
    if sign < 0:
        det = mp_neg(det)
    return det


def mp_resultant(p, q, var: int, nvars: int):
    """Resultant of p, q in variable `var` via the Sylvester determinant.

    Coefficients are mpolys in the remaining variables (same width, the
    eliminated slot stays zero).
    """
    dp = _deg_in(p, var)
    dq = _deg_in(q, var)
    if dp < 0 or dq < 0:
        raise ZeroDivisionError("resultant with the zero polynomial")
    cp = _coeffs_in(p, var, dp, nvars)
    cq = _coeffs_in(q, var, dq, nvars)
    size = dp + dq
    if size == 0:
        return mp_const(nvars, ONE)
    rows = []
    for i in range(dq):
        row = [mp_zero()] * size
        for j, c in enumerate(cp):
            row[i + j] = c
        rows.append(row)
    for i in range(dp):
        row = [mp_zero()] * size
        for j, c in enumerate(cq):
            row[i + j] = c
        rows.append(row)
    return mp_det_bareiss(rows)


def _deg_in(p, var: int) -> int:
    if not p:
        return -1
    return max(e[var] for e in p)


def _coeffs_in(p, var: int, deg: int, nvars: int):
    """Coefficient list [lead, .., const] of p as a polynomial in x_var."""
    out = [mp_zero() for _ in range(deg + 1)]
    for e, c in p.items():
        k = e[var]
        rest = e[:var] + (0,) + e[var + 1 :]
        out[deg - k] = mp_add(out[deg - k], {rest: c})
    return out


def mp_from_hpoly(h, nvars_out: int, offset: int = 0):
    """Embed an HPoly into an mpoly with extra variable slots."""
    out = {}
    for e, c in h.coeffs.items():
        ne = [0] * nvars_out
        for i, a in enumerate(e):
            ne[offset + i] = a
        out[tuple(ne)] = c
    return out

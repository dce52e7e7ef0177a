"""Exact linear algebra over Q(i): echelon forms and nullspace bases.

Rows are sparse dicts {column: scalar}.  Elimination is exact (field
arithmetic on Gaussian rationals); the reduced forms are canonical, so
downstream consumers get deterministic bases.
"""

from __future__ import annotations

from .gaussq import ZERO, GaussRational


def rref(rows, ncols: int):
    """Reduced row echelon form of sparse rows; returns (pivots, rows).

    Pivot columns are chosen left to right; each surviving row is scaled to
    a unit pivot and fully reduced upward.
    """
    work = [dict(r) for r in rows if r]
    pivots = []
    reduced = []
    for col in range(ncols):
        piv_idx = None
        best = None
        for idx, row in enumerate(work):
            if col in row:
                if piv_idx is None or len(row) < best:
                    piv_idx, best = idx, len(row)
        if piv_idx is None:
            continue
        piv = work.pop(piv_idx)
        inv = piv[col].inverse()
        piv = {c: v * inv for c, v in piv.items()}
        for row in work:
            if col in row:
                f = row[col]
                for c, v in piv.items():
                    s = row.get(c, ZERO) - f * v
                    if s.is_zero():
                        row.pop(c, None)
                    else:
                        row[c] = s
        for row in reduced:
            if col in row:
                f = row[col]
                for c, v in piv.items():
                    s = row.get(c, ZERO) - f * v
                    if s.is_zero():
                        row.pop(c, None)
                    else:
                        row[c] = s
        reduced.append(piv)
        pivots.append(col)
        work = [r for r in work if r]
        if not work:
            break
    order = sorted(range(len(pivots)), key=lambda i: pivots[i])
    return [pivots[i] for i in order], [reduced[i] for i in order]


def nullspace(rows, ncols: int):
    """Basis of the solution space of (rows) * x = 0, in reduced form.

    Basis vectors are indexed by free columns in increasing order; the
    vector for free column j has a 1 there and its pivot-column entries
    filled from the reduced system.  The result is canonical.
    """
    pivots, red = rref(rows, ncols)
    pivot_set = set(pivots)
    free = [c for c in range(ncols) if c not in pivot_set]
    basis = []
    for fcol in free:
        vec = {fcol: GaussRational(1)}
        for pcol, row in zip(pivots, red):
            v = row.get(fcol)
            if v is not None and not v.is_zero():
                vec[pcol] = -v
        basis.append(vec)
    return basis


def solve_dense(mat, rhs):
    """Solve a small dense square system exactly; raises on singularity."""
    n = len(mat)
    aug = [list(mat[i]) + [rhs[i]] for i in range(n)]
    for col in range(n):
        piv = next((r for r in range(col, n) if not aug[r][col].is_zero()), None)
        if piv is None:
            raise ArithmeticError("singular system")
        aug[col], aug[piv] = aug[piv], aug[col]
        inv = aug[col][col].inverse()
        aug[col] = [v * inv for v in aug[col]]
        for r in range(n):
            if r != col and not aug[r][col].is_zero():
                f = aug[r][col]
                aug[r] = [a - f * b for a, b in zip(aug[r], aug[col])]
    return [aug[i][n] for i in range(n)]

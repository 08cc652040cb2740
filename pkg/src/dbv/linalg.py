"""Exact rational linear algebra on small dense matrices.

Matrices are lists of rows, rows are lists of Fractions.  Everything here is
deterministic: pivots are always the first nonzero entry scanning rows top to
bottom, so echelon bases and particular solutions are reproducible across
runs.  Dimensions in this package are tiny (tens), so dense Fractions are the
simplest honest representation.
"""

from .scalars import ONE, ZERO


def zeros(n):
    return [ZERO] * n


def rref(rows):
    """Reduced row echelon form.

    Returns (echelon_rows, pivot_columns) with zero rows dropped and each
    pivot normalized to 1.  Input rows are not mutated.
    """
    rows = [list(r) for r in rows]
    if not rows:
        return [], []
    ncols = len(rows[0])
    pivots = []
    pivot_row = 0
    for col in range(ncols):
        sel = None
        for i in range(pivot_row, len(rows)):
            if rows[i][col] != 0:
                sel = i
                break
        if sel is None:
            continue
        rows[pivot_row], rows[sel] = rows[sel], rows[pivot_row]
        inv = ONE / rows[pivot_row][col]
        rows[pivot_row] = [x * inv for x in rows[pivot_row]]
        for i in range(len(rows)):
            if i != pivot_row and rows[i][col] != 0:
                c = rows[i][col]
                rows[i] = [a - c * b for a, b in zip(rows[i], rows[pivot_row])]
        pivots.append(col)
        pivot_row += 1
        if pivot_row == len(rows):
            break
    return rows[:pivot_row], pivots


def rank(rows):
    return len(rref(rows)[1])


def reduce_against(echelon, pivots, vec):
    """Reduce vec against an echelon basis; returns (residue, coords).

    coords[i] is the coefficient of echelon[i] in the part of vec that lies
    in the span; residue is vec minus that part (zero iff vec is in the span).
    """
    v = list(vec)
    coords = []
    for row, p in zip(echelon, pivots):
        c = v[p]
        coords.append(c)
        if c != 0:
            v = [a - c * b for a, b in zip(v, row)]
    return v, coords


def in_span(echelon, pivots, vec):
    residue, coords = reduce_against(echelon, pivots, vec)
    if any(x != 0 for x in residue):
        return None
    return coords


def nullspace(rows, ncols):
    """Basis of {x : A x = 0} for A given as rows of length ncols.

    Deterministic: one basis vector per free column, ordered by column index,
    with the free coordinate set to 1.
    """
    ech, pivots = rref(rows)
    pivot_set = set(pivots)
    basis = []
    for free in range(ncols):
        if free in pivot_set:
            continue
        v = zeros(ncols)
        v[free] = ONE
        for row, p in zip(ech, pivots):
            v[p] = -row[free]
        basis.append(v)
    return basis


def solve(rows, rhs):
    """One solution of A x = rhs (rows of A, len(rhs) == len(rows)).

    Free variables are set to 0 (deterministic).  Returns None when the
    system is inconsistent.
    """
    if not rows:
        if any(x != 0 for x in rhs):
            return None
        return []
    ncols = len(rows[0])
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    ech, pivots = rref(aug)
    sol = zeros(ncols)
    for row, p in zip(ech, pivots):
        if p == ncols:
            return None
        sol[p] = row[ncols]
    return sol


def span_intersection(u_rows, w_rows):
    """Echelon basis of rowspan(U) ∩ rowspan(W).

    Solved via the nullspace of [U^T | -W^T]: a combination Σa_i u_i that
    also lies in span(W).
    """
    if not u_rows or not w_rows:
        return []
    ncols = len(u_rows[0])
    nu, nw = len(u_rows), len(w_rows)
    stacked = []
    for k in range(ncols):
        row = [u_rows[i][k] for i in range(nu)] + [-w_rows[j][k] for j in range(nw)]
        stacked.append(row)
    vectors = []
    for coeffs in nullspace(stacked, nu + nw):
        v = zeros(ncols)
        for i in range(nu):
            if coeffs[i] != 0:
                v = [a + coeffs[i] * b for a, b in zip(v, u_rows[i])]
        if any(x != 0 for x in v):
            vectors.append(v)
    return rref(vectors)[0]


def spans_equal(u_rows, w_rows):
    """Rowspan equality via mutual containment."""
    ue, up = rref(u_rows)
    we, wp = rref(w_rows)
    if len(ue) != len(we):
        return False
    return all(in_span(we, wp, u) is not None for u in ue)


def span_difference_witness(u_rows, w_rows):
    """A vector in rowspan(U) not in rowspan(W), or None."""
    ue, _ = rref(u_rows)
    we, wp = rref(w_rows)
    for u in ue:
        if in_span(we, wp, u) is None:
            return u
    return None

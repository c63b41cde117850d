"""Exact linear algebra over Q (dense, Fraction entries)."""

from fractions import Fraction


def rref(rows, ncols):
    """Reduced row echelon form. Returns (rows, pivot_columns)."""
    m = [list(map(Fraction, r)) for r in rows]
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][c]
        m[r] = [v * inv for v in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m, pivots


def solve(a, b):
    """A particular solution of A x = b (free variables set to 0), or None."""
    ncols = len(a[0]) if a else 0
    aug = [list(row) + [rhs] for row, rhs in zip(a, b)]
    m, pivots = rref(aug, ncols + 1)
    if ncols in pivots:
        return None
    x = [Fraction(0)] * ncols
    for row, c in zip(m, pivots):
        x[c] = row[ncols]
    return x


def min_norm_solve(a, b):
    """The minimal Euclidean-norm solution of A x = b, or None if inconsistent."""
    if not a:
        return []
    ncols = len(a[0])
    aug = [list(row) + [rhs] for row, rhs in zip(a, b)]
    m, pivots = rref(aug, ncols + 1)
    if ncols in pivots:
        return None
    indep = [row for row, c in zip(m, pivots)]
    if not indep:
        return [Fraction(0)] * ncols
    r = [row[:ncols] for row in indep]
    rhs = [row[ncols] for row in indep]
    gram = [[sum(x * y for x, y in zip(ri, rj)) for rj in r] for ri in r]
    y = solve(gram, rhs)
    return [sum(y[k] * r[k][j] for k in range(len(r))) for j in range(ncols)]


def rank(rows, ncols):
    return len(rref(rows, ncols)[1])

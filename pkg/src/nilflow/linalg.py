"""Exact dense linear algebra over the rationals.

Matrices are lists of row lists of Fraction.  All routines are
deterministic: row reduction always picks the lowest-index usable column,
and nullspace basis vectors carry the 1/0 free-variable pattern.
"""

from fractions import Fraction

_ZERO = Fraction(0)
_ONE = Fraction(1)


def frac(x) -> Fraction:
    """Coerce an int, string like '5/12', or Fraction to Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, str)):
        return Fraction(x)
    raise TypeError("expected an exact rational, got %r" % (x,))


def identity(n):
    return [[_ONE if i == j else _ZERO for j in range(n)] for i in range(n)]


def zeros(r, c):
    return [[_ZERO] * c for _ in range(r)]


def transpose(mat):
    return [list(col) for col in zip(*mat)]


def mat_add(a, b):
    return [[x + y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def mat_scale(a, c):
    return [[c * x for x in row] for row in a]


def mat_mul(a, b):
    bt = transpose(b)
    return [[sum(x * y for x, y in zip(row, col)) for col in bt] for row in a]


def mat_vec(a, v):
    return [sum(x * y for x, y in zip(row, v)) for row in a]


def vec_add(u, v):
    return [x + y for x, y in zip(u, v)]


def vec_sub(u, v):
    return [x - y for x, y in zip(u, v)]


def vec_scale(u, c):
    return [c * x for x in u]


def is_zero_vec(u):
    return all(x == 0 for x in u)


def inner(u, v, gram=None):
    """<u, v>, optionally with respect to a Gram matrix."""
    if gram is None:
        return sum(x * y for x, y in zip(u, v))
    return sum(x * g * y for x, row in zip(u, gram) for g, y in zip(row, v))


def rref(mat):
    """Reduced row echelon form.  Returns (rows, pivot_columns)."""
    rows = [[frac(x) for x in row] for row in mat]
    nrows = len(rows)
    ncols = len(rows[0]) if nrows else 0
    pivots = []
    r = 0
    for c in range(ncols):
        pivot_row = None
        for i in range(r, nrows):
            if rows[i][c] != 0:
                pivot_row = i
                break
        if pivot_row is None:
            continue
        rows[r], rows[pivot_row] = rows[pivot_row], rows[r]
        inv = _ONE / rows[r][c]
        rows[r] = [x * inv for x in rows[r]]
        for i in range(nrows):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return rows, pivots


def rank(mat):
    if not mat:
        return 0
    _, pivots = rref(mat)
    return len(pivots)


def nullspace(mat, ncols=None):
    """Basis of the right nullspace, one vector per free column."""
    if not mat:
        n = ncols or 0
        return [[_ONE if i == j else _ZERO for j in range(n)] for i in range(n)]
    n = len(mat[0])
    red, pivots = rref(mat)
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for fc in free:
        v = [_ZERO] * n
        v[fc] = _ONE
        for ri, pc in enumerate(pivots):
            v[pc] = -red[ri][fc]
        basis.append(v)
    return basis


def row_space_basis(vectors):
    """Canonical (RREF) basis of the span of the given vectors."""
    if not vectors:
        return []
    red, pivots = rref(vectors)
    return [red[i] for i in range(len(pivots))]


def span_equal(vectors_a, vectors_b):
    return row_space_basis(vectors_a) == row_space_basis(vectors_b)


def in_span(vectors, v):
    if is_zero_vec(v):
        return True
    if not vectors:
        return False
    return rank(list(vectors)) == rank(list(vectors) + [v])


def det(mat):
    n = len(mat)
    rows = [[frac(x) for x in row] for row in mat]
    sign = _ONE
    out = _ONE
    for c in range(n):
        pivot_row = None
        for i in range(c, n):
            if rows[i][c] != 0:
                pivot_row = i
                break
        if pivot_row is None:
            return _ZERO
        if pivot_row != c:
            rows[c], rows[pivot_row] = rows[pivot_row], rows[c]
            sign = -sign
        out *= rows[c][c]
        inv = _ONE / rows[c][c]
        for i in range(c + 1, n):
            if rows[i][c] != 0:
                f = rows[i][c] * inv
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[c])]
    return sign * out


def inverse(mat):
    n = len(mat)
    aug = [[frac(x) for x in row] + [_ONE if i == j else _ZERO for j in range(n)]
           for i, row in enumerate(mat)]
    red, pivots = rref(aug)
    if pivots != list(range(n)):
        raise ValueError("matrix is singular")
    return [row[n:] for row in red]


def solve(mat, rhs):
    """One solution of mat @ x = rhs, or None if inconsistent."""
    n = len(mat[0])
    aug = [list(row) + [b] for row, b in zip(mat, rhs)]
    red, pivots = rref(aug)
    if n in pivots:
        return None
    x = [_ZERO] * n
    for ri, pc in enumerate(pivots):
        x[pc] = red[ri][n]
    return x


def gram_schmidt(vectors, gram=None):
    """Orthogonalize (without normalizing) over the rationals."""
    out = []
    for v in vectors:
        w = [frac(x) for x in v]
        for u in out:
            c = inner(w, u, gram) / inner(u, u, gram)
            w = [a - c * b for a, b in zip(w, u)]
        if not is_zero_vec(w):
            out.append(w)
    return out

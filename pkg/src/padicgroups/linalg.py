"""Dense exact linear algebra over PadicNumber entries.

Dimensions here are tiny (<= 9), so everything is plain Gaussian
elimination on lists of lists.  Pivots are chosen with minimal valuation
(maximal p-adic size) to keep precision loss down.
"""

from fractions import Fraction

from .errors import DegenerateForm
from .padic import GUARD_DIGITS, INF, PadicNumber, eq_within, sum_all, vp_int


def identity(n, p):
    one = PadicNumber.one(p)
    zero = PadicNumber.zero(p)
    return [[one if i == j else zero for j in range(n)] for i in range(n)]


def transpose(a):
    return [list(col) for col in zip(*a)]


def mat_mul(a, b, min_digits=None):
    n, k, m = len(a), len(b), len(b[0])
    bt = transpose(b)
    return [[_dot(a[i], bt[j], min_digits) for j in range(m)] for i in range(n)]


def _dot(row, col, min_digits=None):
    return sum_all([x * y for x, y in zip(row, col)], min_digits=min_digits)


def mat_vec(a, x, min_digits=None):
    return [_dot(row, x, min_digits) for row in a]


def mat_eq(a, b):
    return all(x == y for ra, rb in zip(a, b) for x, y in zip(ra, rb))


def mat_eq_within(a, b, slack=None):
    if slack is None:
        slack = GUARD_DIGITS
    return all(
        eq_within(x, y, slack) for ra, rb in zip(a, b) for x, y in zip(ra, rb)
    )


def congruent(m, g, min_digits=None):
    """m^T g m."""
    return mat_mul(transpose(m), mat_mul(g, m, min_digits), min_digits)


def _pivot_row(mat, col, start):
    best, best_val = None, INF
    for i in range(start, len(mat)):
        v = mat[i][col].valuation
        if v < best_val:
            best, best_val = i, v
    return best


def _fraction_det(m):
    n = len(m)
    m = [row[:] for row in m]
    d = Fraction(1)
    for c in range(n):
        piv = next((i for i in range(c, n) if m[i][c]), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            d = -d
        d *= m[c][c]
        for i in range(c + 1, n):
            if m[i][c]:
                f = m[i][c] / m[c][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[c])]
    return d


def det(a):
    """Determinant, computed exactly on the stored representatives.

    Elimination in truncated arithmetic can cancel deeply on the way to a
    perfectly determined value, so the entries are expanded to exact
    rationals first and the trust window is attached once at the end:
    moving one entry at its absolute precision moves the determinant by
    that times a cofactor, so the value is known modulo
    p^(min absolute precision + (n-1) * min(0, min valuation)).
    """
    n = len(a)
    p = a[0][0].prime
    nonzero = [x for row in a for x in row if not x.is_zero]
    if not nonzero or any(all(x.is_zero for x in row) for row in a):
        return PadicNumber.zero(p)
    # scale rows, then columns, to integral entries; a perturbation of one
    # entry at its absolute precision then moves the scaled determinant by
    # that times an integral cofactor, so no further correction is needed.
    # Scaling both ways keeps the window sharp whether the depth sits in
    # one row or one column
    rs = [min(x.valuation for x in row if not x.is_zero) for row in a]
    cs = [
        min(
            (a[i][j].valuation - rs[i] for i in range(n) if not a[i][j].is_zero),
            default=INF,
        )
        for j in range(n)
    ]
    if any(c == INF for c in cs):
        return PadicNumber.zero(p)
    exact = [
        [
            Fraction(0)
            if x.is_zero
            else Fraction(x.unit * p ** (x.valuation - r - c))
            for x, c in zip(row, cs)
        ]
        for row, r in zip(a, rs)
    ]
    d = _fraction_det(exact)
    if d == 0:
        return PadicNumber.zero(p)
    window = min(
        x.absolute_precision - r - c
        for row, r in zip(a, rs)
        for x, c in zip(row, cs)
        if not x.is_zero
    )
    vd = vp_int(d.numerator, p)
    if vd >= window:
        return PadicNumber.zero(p)
    prec = min(window - vd, min(x.precision for x in nonzero))
    mod = p**prec
    u = (d.numerator // p**vd) % mod
    return PadicNumber(p, vd + sum(rs) + sum(cs), u, prec)


def inverse(a):
    n = len(a)
    p = a[0][0].prime
    mat = [row[:] + ident_row for row, ident_row in zip(a, identity(n, p))]
    for c in range(n):
        piv = _pivot_row(mat, c, c)
        if piv is None:
            raise DegenerateForm("matrix is singular")
        mat[c], mat[piv] = mat[piv], mat[c]
        d = mat[c][c]
        mat[c] = [x / d for x in mat[c]]
        for i in range(n):
            if i == c or mat[i][c].is_zero:
                continue
            f = mat[i][c]
            mat[i] = [x - f * y for x, y in zip(mat[i], mat[c])]
    return [row[n:] for row in mat]


def nullspace(rows, width, p):
    """Basis of the solution space of rows . x = 0, as coordinate lists.

    Pivots are the largest (minimal valuation) entries of the whole
    remaining block, so every elimination ratio is integral and the basis
    spans a saturated lattice: integral vectors, unit on the free columns.
    """
    mat = [row[:] for row in rows]
    pivots = []
    r = 0
    while r < len(mat):
        piv, best = None, INF
        for i in range(r, len(mat)):
            for c in range(width):
                if c in pivots:
                    continue
                v = mat[i][c].valuation
                if v < best:
                    piv, best = (i, c), v
        if piv is None:
            break
        i, c = piv
        mat[r], mat[i] = mat[i], mat[r]
        d = mat[r][c]
        mat[r] = [x / d for x in mat[r]]
        for i in range(len(mat)):
            if i == r or mat[i][c].is_zero:
                continue
            f = mat[i][c]
            mat[i] = [x - f * y for x, y in zip(mat[i], mat[r])]
        pivots.append(c)
        r += 1
    zero = PadicNumber.zero(p)
    one = PadicNumber.one(p)
    basis = []
    pivot_set = set(pivots)
    for c in range(width):
        if c in pivot_set:
            continue
        vec = [zero] * width
        vec[c] = one
        for row_idx, pc in enumerate(pivots):
            vec[pc] = -mat[row_idx][c]
        basis.append(vec)
    return basis

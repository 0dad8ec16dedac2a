"""Quadratic and symmetric bilinear spaces over Q_p.

A BilinearSpace carries an explicit Gram matrix; QuadSpace is the
diagonal special case and owns the classification machinery: square-class
discriminant, Hasse invariant, Witt index, explicit null vectors,
representation of values, and certified Witt decompositions.

Conventions: Q(x) = B(x, x), so a hyperbolic pair (e, f) has Gram block
[[0, 1], [1, 0]] and Q(e + c f) = 2c.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

import numpy as np

from . import linalg
from .errors import (
    DegenerateForm,
    DegenerateRestriction,
    MathError,
    NotNull,
    NotRepresented,
    PrecisionExhausted,
    SearchExhausted,
    ZeroInput,
)
from .padic import (
    INF,
    PadicNumber,
    get_precision,
    hilbert_symbol,
    hilbert_symbol_int,
    legendre,
    square_class,
    square_class_of_int,
    sum_all,
    vp_int,
)


def _as_scalar(prime, c):
    if isinstance(c, PadicNumber):
        if c.prime != prime:
            raise ValueError("mixed primes")
        return c
    if isinstance(c, int):
        return PadicNumber.from_int(c, prime)
    if isinstance(c, Fraction):
        return PadicNumber.from_fraction(c, prime)
    raise TypeError(f"cannot use {type(c).__name__} as a p-adic scalar")


class VecV:
    """Vector in a bilinear space, coordinates in the space's basis."""

    __slots__ = ("space", "coords")

    def __init__(self, space, coords):
        self.space = space
        self.coords = tuple(_as_scalar(space.prime, c) for c in coords)
        if len(self.coords) != space.dim:
            raise ValueError("coordinate count does not match the space")

    def _check(self, other):
        if not isinstance(other, VecV):
            raise TypeError("expected a vector")
        if other.space is not self.space and not self.space.same_space(other.space):
            raise ValueError("vectors live in different spaces")

    def __add__(self, other):
        self._check(other)
        return VecV(self.space, [a + b for a, b in zip(self.coords, other.coords)])

    def __sub__(self, other):
        self._check(other)
        return VecV(self.space, [a - b for a, b in zip(self.coords, other.coords)])

    def __neg__(self):
        return VecV(self.space, [-a for a in self.coords])

    def __mul__(self, c):
        c = _as_scalar(self.space.prime, c)
        return VecV(self.space, [c * a for a in self.coords])

    __rmul__ = __mul__

    def dot(self, other):
        self._check(other)
        return self.space.bilinear(self, other)

    def q(self):
        return self.space.bilinear(self, self)

    @property
    def is_zero(self):
        return all(c.is_zero for c in self.coords)

    def __eq__(self, other):
        if not isinstance(other, VecV):
            return NotImplemented
        return all(a == b for a, b in zip(self.coords, other.coords))

    __hash__ = None

    def to_record(self):
        return [c.to_record() for c in self.coords]

    def __repr__(self):
        return "VecV(" + ", ".join(repr(c) for c in self.coords) + ")"


class BilinearSpace:
    """Nondegenerate symmetric bilinear space with an explicit Gram matrix."""

    __slots__ = ("prime", "dim", "gram")

    def __init__(self, prime, gram):
        self.prime = prime
        self.dim = len(gram)
        rows = [[_as_scalar(prime, x) for x in row] for row in gram]
        if any(len(row) != self.dim for row in rows):
            raise ValueError("Gram matrix must be square")
        for i in range(self.dim):
            for j in range(i + 1, self.dim):
                if rows[i][j] != rows[j][i]:
                    raise ValueError("Gram matrix must be symmetric")
        self.gram = rows
        if self.dim and linalg.det(rows).is_zero:
            raise DegenerateForm("Gram matrix is singular")

    def _scalar(self, c):
        return _as_scalar(self.prime, c)

    def vector(self, coords):
        return VecV(self, coords)

    def zero_vector(self):
        return VecV(self, [0] * self.dim)

    def basis_vector(self, i):
        return VecV(self, [1 if j == i else 0 for j in range(self.dim)])

    def basis(self):
        return [self.basis_vector(i) for i in range(self.dim)]

    def bilinear(self, x, y):
        gy = linalg.mat_vec(self.gram, list(y.coords))
        return sum_all([a * b for a, b in zip(x.coords, gy)], self.prime)

    def q(self, x):
        return self.bilinear(x, x)

    def same_space(self, other):
        return (
            isinstance(other, BilinearSpace)
            and other.prime == self.prime
            and other.dim == self.dim
            and linalg.mat_eq(other.gram, self.gram)
        )

    def __repr__(self):
        return f"{type(self).__name__}(p={self.prime}, dim={self.dim})"


class QuadSpace(BilinearSpace):
    """Diagonal quadratic space <d_1, ..., d_n>, entries nonzero."""

    __slots__ = ("diag", "_witt")

    def __init__(self, prime, diag):
        entries = [_as_scalar(prime, d) for d in diag]
        if any(d.is_zero for d in entries):
            raise DegenerateForm("zero diagonal entry")
        self.diag = tuple(entries)
        self._witt = None
        n = len(entries)
        zero = PadicNumber.zero(prime)
        gram = [[entries[i] if i == j else zero for j in range(n)] for i in range(n)]
        super().__init__(prime, gram)

    @classmethod
    def from_rationals(cls, prime, entries):
        return cls(prime, [Fraction(e) for e in entries])

    # -- invariants -------------------------------------------------------

    @property
    def disc_class(self):
        if self.dim == 0:
            return square_class_of_int(1, self.prime)
        cls = square_class(self.diag[0])
        for d in self.diag[1:]:
            cls = cls * square_class(d)
        return cls

    @property
    def hasse(self):
        s = 1
        for i in range(self.dim):
            for j in range(i + 1, self.dim):
                s *= hilbert_symbol(self.diag[i], self.diag[j])
        return s

    @property
    def witt_index(self):
        if self._witt is None:
            self._witt = _anisotropic_reduction(
                self.dim, self.disc_class, self.hasse, self.prime
            )[0]
        return self._witt

    def kernel_invariants(self):
        """(dim, discriminant class, Hasse) of the anisotropic kernel."""
        _, d, c, h = _anisotropic_reduction(self.dim, self.disc_class, self.hasse, self.prime)
        return d, c, h

    def bilinear(self, x, y):
        # diagonal Gram, skip the generic matrix product
        return sum_all(
            [d * a * b for d, a, b in zip(self.diag, x.coords, y.coords)],
            self.prime,
        )


# -- classification by invariants ----------------------------------------


def _isotropic_by_invariants(dim, disc, hasse, p):
    if dim <= 1:
        return False
    if dim == 2:
        return disc == square_class_of_int(-1, p)
    if dim == 3:
        return hasse == hilbert_symbol_int(-1, -disc.rep, p)
    if dim == 4:
        return disc.rep != 1 or hasse == hilbert_symbol_int(-1, -1, p)
    return True


def _anisotropic_reduction(dim, disc, hasse, p):
    """Split hyperbolic planes until anisotropic.

    Returns (witt index, kernel dim, kernel disc class, kernel Hasse).
    Peeling H from V = H + W: disc(W) = -disc(V), hasse(W) = hasse(V)(-1, disc W).
    """
    witt = 0
    while dim > 0 and _isotropic_by_invariants(dim, disc, hasse, p):
        disc = disc * square_class_of_int(-1, p)
        hasse = hasse * hilbert_symbol_int(-1, disc.rep, p)
        dim -= 2
        witt += 1
    return witt, dim, disc, hasse


def is_isotropic(space: QuadSpace) -> bool:
    """Whether the form has a nonzero null vector (rank criteria, exact)."""
    return _isotropic_by_invariants(space.dim, space.disc_class, space.hasse, space.prime)


def isometric(a: QuadSpace, b: QuadSpace) -> bool:
    if a.prime != b.prime:
        raise ValueError("mixed primes")
    return a.dim == b.dim and a.disc_class == b.disc_class and a.hasse == b.hasse


def witt_equivalent(a: QuadSpace, b: QuadSpace) -> bool:
    """Same anisotropic kernel up to isometry."""
    if a.prime != b.prime:
        raise ValueError("mixed primes")
    return a.kernel_invariants() == b.kernel_invariants()


# -- diagonalization ------------------------------------------------------


def _congruence_swap(g, b, i, j):
    for row in g:
        row[i], row[j] = row[j], row[i]
    g[i], g[j] = g[j], g[i]
    for row in b:
        row[i], row[j] = row[j], row[i]


def _congruence_col_add(g, b, dst, src, f):
    # column op mirrored on rows, so g stays the Gram of the new basis
    for row in g:
        row[dst] = row[dst] + f * row[src]
    for c in range(len(g)):
        g[dst][c] = g[dst][c] + f * g[src][c]
    for row in b:
        row[dst] = row[dst] + f * row[src]


def diagonalize(space: BilinearSpace):
    """Orthogonal basis change: returns (QuadSpace, B) with B^T G B diagonal.

    Columns of B are the new basis in the old coordinates.
    """
    n, p = space.dim, space.prime
    if n == 0:
        return QuadSpace(p, []), []
    g = [row[:] for row in space.gram]
    b = linalg.identity(n, p)
    one = PadicNumber.one(p)
    for i in range(n):
        # pivot on the largest entry of the remaining block, wherever it
        # sits; integral elimination ratios keep the diagonal valuations
        # close to the discriminant bound
        piv, best = None, INF
        for j in range(i, n):
            if g[j][j].valuation < best:
                piv, best = j, g[j][j].valuation
        off = None
        for j in range(i, n):
            for k in range(j + 1, n):
                if g[j][k].valuation < best:
                    piv, off, best = j, k, g[j][k].valuation
        if piv is None:
            raise DegenerateForm("form vanishes on a nonzero subspace")
        if off is not None:
            # the polarization identity puts both diagonal entries plus
            # 2 g[j][k] at (j, j); the sign whose candidate keeps the
            # larger value is taken, the other may cancel arbitrarily deep
            diag_terms = [g[piv][piv], g[off][off]]
            cross = [g[piv][off], g[piv][off]]
            vals = []
            for cand in (cross, [-c for c in cross]):
                try:
                    vals.append(sum_all(diag_terms + cand, p).valuation)
                except PrecisionExhausted:
                    vals.append(INF)
            _congruence_col_add(
                g, b, piv, off, one if vals[0] <= vals[1] else -one
            )
        if piv != i:
            _congruence_swap(g, b, i, piv)
        d = g[i][i]
        for j in range(i + 1, n):
            if g[i][j].is_zero:
                continue
            _congruence_col_add(g, b, j, i, -(g[i][j] / d))
    return QuadSpace(p, [g[i][i] for i in range(n)]), b


# -- null vectors ---------------------------------------------------------


def _int_rep(x: PadicNumber, k: int) -> int:
    """Canonical integer representative of x modulo p^k (needs v(x) >= 0)."""
    if x.is_zero:
        return 0
    if x.valuation < 0:
        raise ValueError("negative valuation has no integer representative")
    return (x.unit * x.prime**x.valuation) % x.prime**k


def _newton_coordinate(c2, c0, t0, p, mod_exp, target):
    """Root of c2 t^2 + c0 near t0, exact integers modulo p^mod_exp.

    Requires v(c2 t0^2 + c0) > 2 v(2 c2 t0); refines until the value has
    valuation >= target.
    """
    m = p**mod_exp
    t = t0 % m
    e = vp_int(2 * c2 * t, p)
    for _ in range(64):
        f = (c2 * t * t + c0) % m
        if f == 0 or vp_int(f, p) >= target:
            return t
        t = (t - (f // p**e) * pow((2 * c2 * t) // p**e, -1, m)) % m
    raise SearchExhausted("quadratic refinement did not converge")


def _conic_point(u1, u2, u3, p):
    # first nonzero point of u1 x^2 + u2 y^2 + u3 z^2 = 0 over F_p, lex order
    for x in range(p):
        for y in range(p):
            for z in range(p):
                if x == y == z == 0:
                    continue
                if (u1 * x * x + u2 * y * y + u3 * z * z) % p == 0:
                    return (x, y, z)
    return None


def _unit_stratum_zero(units, p, target):
    """Null vector of a unit diagonal form over Z_p, or None (p odd).

    Returns integer coordinates with some unit entry, exact to p^target.
    """
    mod_exp = target + 2
    if len(units) >= 3:
        pt = _conic_point(units[0] % p, units[1] % p, units[2] % p, p)
        coords = [0] * len(units)
        coords[0], coords[1], coords[2] = pt
        piv = next(i for i in range(3) if pt[i] % p)
        c0 = sum(units[j] * coords[j] ** 2 for j in range(3) if j != piv)
        coords[piv] = _newton_coordinate(units[piv], c0, coords[piv], p, mod_exp, target)
        return coords
    if len(units) == 2:
        s = (-units[0] * pow(units[1], -1, p)) % p
        if legendre(s, p) != 1:
            return None
        r = next(c for c in range(1, p) if c * c % p == s)
        r = _newton_coordinate(units[1], units[0], r, p, mod_exp, target)
        return [1, r]
    return None


_GRID_CACHE = {}


def _residue_grid(m):
    if m not in _GRID_CACHE:
        _GRID_CACHE[m] = np.indices((16,) * m).reshape(m, -1).T
    return _GRID_CACHE[m]


def _dyadic_subset_zero(ints, target):
    """Null vector for a 2-adic diagonal form with entries of valuation 0 or 1.

    Scans residues modulo 16 for a candidate certified modulo 32, then
    refines the best odd coordinate to a value exact to 2^target.  Entries
    come in as exact integer representatives; completeness: a true null
    vector reduced mod 16 always passes the mod-32 test with an odd
    coordinate.
    """
    mod_exp = target + 2
    m = len(ints)
    grid = _residue_grid(m)
    d16 = np.array([d % 2**10 for d in ints], dtype=np.int64)
    qvals = (grid.astype(np.int64) ** 2 * d16).sum(axis=1) % 2**10
    odd = (grid % 2 == 1).any(axis=1)
    hits = np.nonzero((qvals % 32 == 0) & odd)[0]
    for idx in hits:
        row = [int(v) for v in grid[idx]]
        # prefer the odd coordinate whose entry has the smaller valuation
        piv = min(
            (i for i in range(m) if row[i] % 2),
            key=lambda i: (vp_int(ints[i], 2), i),
        )
        f0 = sum(ints[j] * row[j] ** 2 for j in range(m))
        if f0 and vp_int(f0, 2) <= 2 * vp_int(2 * ints[piv] * row[piv], 2):
            continue
        c0 = sum(ints[j] * row[j] ** 2 for j in range(m) if j != piv)
        row[piv] = _newton_coordinate(ints[piv], c0, row[piv], 2, mod_exp, target)
        return row
    return None


def isotropic_vector(space: QuadSpace) -> VecV:
    """A nonzero null vector, found deterministically.

    Coordinates are rescaled so every diagonal entry has valuation 0 or 1;
    for odd p a residue conic point on one stratum is refined, for p = 2 a
    minimal isotropic coordinate subset is searched modulo 16 and refined.
    """
    if not is_isotropic(space):
        raise ValueError("anisotropic space has no nonzero null vectors")
    p = space.prime
    shifts = [d.valuation // 2 for d in space.diag]
    reduced = [d.unit * p ** (d.valuation % 2) for d in space.diag]
    # The final zero test sums terms entry * coord^2 over the chosen
    # coordinates only, in a window bounded by one digit past the largest
    # effective entry precision there, so the refinement target must be
    # taken per subset, not from the weakest entry of the whole space.
    caps = [min(d.precision, get_precision()) for d in space.diag]

    coords = None
    if p == 2:
        for size in range(2, min(space.dim, 5) + 1):
            for subset in itertools.combinations(range(space.dim), size):
                cls = square_class_of_int(reduced[subset[0]], 2)
                h = 1
                for a, b in itertools.combinations(subset, 2):
                    h *= hilbert_symbol_int(reduced[a], reduced[b], 2)
                for i in subset[1:]:
                    cls = cls * square_class_of_int(reduced[i], 2)
                if not _isotropic_by_invariants(size, cls, h, 2):
                    continue
                target = max(caps[i] for i in subset) + 4
                part = _dyadic_subset_zero([reduced[i] for i in subset], target)
                if part is None:
                    continue
                coords = [0] * space.dim
                for i, c in zip(subset, part):
                    coords[i] = c
                break
            if coords is not None:
                break
    else:
        for parity in (0, 1):
            stratum = [i for i in range(space.dim) if space.diag[i].valuation % 2 == parity]
            units = [reduced[i] // p**parity for i in stratum]
            target = max((caps[i] for i in stratum), default=0) + 4
            part = _unit_stratum_zero(units, p, target)
            if part is not None:
                coords = [0] * space.dim
                for i, c in zip(stratum, part):
                    coords[i] = c
                break
    if coords is None:
        raise SearchExhausted("no null vector found below the residue bound")

    vec = space.vector(
        [
            PadicNumber.from_int(c, p) / PadicNumber.from_int(p, p) ** shifts[i]
            if c
            else 0
            for i, c in enumerate(coords)
        ]
    )
    if not space.q(vec).is_zero:
        raise SearchExhausted("refined candidate failed the exact null check")
    return vec


def represent(space: QuadSpace, a) -> VecV:
    """A vector with Q(x) = a, via a null vector of V + <-a>."""
    a = space._scalar(a)
    if a.is_zero:
        raise ZeroInput("use an explicit null vector to represent zero")
    ext = QuadSpace(space.prime, list(space.diag) + [-a])
    if not is_isotropic(ext):
        raise NotRepresented(f"form does not represent the class of {a!r}")
    w = isotropic_vector(ext)
    t = w.coords[-1]
    x = space.vector(w.coords[:-1])
    if not t.is_zero:
        return (PadicNumber.one(space.prime) / t) * x
    # x is a null vector of V itself; walk the hyperbolic plane through it
    qv = hyperbolic_pair(space, x)
    half_a = a / 2
    return x + half_a * qv


def hyperbolic_pair(space, pv: VecV) -> VecV:
    """Complete the null vector pv to a hyperbolic pair; returns the dual q."""
    if pv.is_zero:
        raise ZeroInput("cannot extend the zero vector")
    if not space.q(pv).is_zero:
        raise NotNull("hyperbolic pairs start from a null vector")
    y = None
    for i in range(space.dim):
        if not space.bilinear(pv, space.basis_vector(i)).is_zero:
            y = space.basis_vector(i)
            break
    if y is None:
        raise DegenerateForm("vector pairs to zero with the whole space")
    q0 = (PadicNumber.one(space.prime) / space.bilinear(pv, y)) * y
    return q0 - (space.q(q0) / 2) * pv


def orthogonal_complement(space, spanning):
    """Orthogonal basis of the complement of span(spanning).

    Returns (vectors, sub) where sub is the diagonal space of the restricted
    form and vectors[i] has Q = sub.diag[i].
    """
    p = space.prime
    rows = [linalg.mat_vec(space.gram, list(s.coords)) for s in spanning]
    basis = linalg.nullspace(rows, space.dim, p)
    if not basis:
        return [], QuadSpace(p, [])
    # rescale before forming the sub-Gram: integral entries keep the
    # nondegeneracy check and the diagonalization clear of cancellation
    raw = [primitive_rescale(space.vector(b)) for b in basis]
    sub_gram = [[space.bilinear(x, y) for y in raw] for x in raw]
    try:
        _, change = diagonalize(BilinearSpace(p, sub_gram))
    except DegenerateForm as exc:
        raise DegenerateRestriction(
            "restriction to the complement is degenerate"
        ) from exc
    # flatten each Q-value to valuation 0 or 1: the complement diagonal
    # feeds reciprocals and recursive searches, which stay well-scaled
    # only when no entry carries a large power of p
    vectors = []
    for j in range(len(raw)):
        vec = _combine(raw, [change[i][j] for i in range(len(raw))])
        shift = space.q(vec).valuation // 2
        if shift:
            vec = space._scalar(p) ** (-shift) * vec
        vectors.append(vec)
    return vectors, QuadSpace(p, [space.q(v) for v in vectors])


def _combine(vectors, coeffs):
    space = vectors[0].space
    return space.vector(
        [
            sum_all([c * v.coords[j] for v, c in zip(vectors, coeffs)], space.prime)
            for j in range(space.dim)
        ]
    )


def vec_sum(vectors):
    """Coordinatewise n-ary sum; one cancellation accounting per coordinate."""
    space = vectors[0].space
    return space.vector(
        [
            sum_all([v.coords[j] for v in vectors], space.prime)
            for j in range(space.dim)
        ]
    )


def primitive_rescale(v: VecV) -> VecV:
    """Scale by a power of p so coordinates are integral with a unit entry."""
    shift = min(c.valuation for c in v.coords)
    if shift == INF or shift == 0:
        return v
    p = v.space.prime
    return PadicNumber.from_int(p, p) ** (-shift) * v


class WittDecomposition:
    """Hyperbolic pairs plus an anisotropic kernel, all in ambient coordinates."""

    __slots__ = ("space", "pairs", "kernel_vectors", "kernel")

    def __init__(self, space, pairs, kernel_vectors, kernel):
        self.space = space
        self.pairs = pairs
        self.kernel_vectors = kernel_vectors
        self.kernel = kernel

    @property
    def index(self):
        return len(self.pairs)

    def basis_matrix(self):
        cols = []
        for e, f in self.pairs:
            cols.append(list(e.coords))
            cols.append(list(f.coords))
        for v in self.kernel_vectors:
            cols.append(list(v.coords))
        return linalg.transpose(cols)


def witt_decompose(space: QuadSpace) -> WittDecomposition:
    """Split off hyperbolic planes until the rest is anisotropic (certified)."""
    p = space.prime
    pairs = []
    cur_vecs = space.basis()
    cur = space
    while cur.dim >= 2 and is_isotropic(cur):
        w = isotropic_vector(cur)
        qv = hyperbolic_pair(cur, w)
        pairs.append((_combine(cur_vecs, w.coords), _combine(cur_vecs, qv.coords)))
        sub_vecs, sub = orthogonal_complement(cur, [w, qv])
        cur_vecs = [_combine(cur_vecs, sv.coords) for sv in sub_vecs]
        cur = sub
    dec = WittDecomposition(space, pairs, cur_vecs, cur)
    _certify_decomposition(space, dec)
    return dec


def _certify_decomposition(space, dec):
    b = dec.basis_matrix()
    got = linalg.congruent(b, space.gram, min_digits=1)
    zero = PadicNumber.zero(space.prime)
    one = PadicNumber.one(space.prime)
    n = space.dim
    expect = [[zero] * n for _ in range(n)]
    for k in range(dec.index):
        expect[2 * k][2 * k + 1] = one
        expect[2 * k + 1][2 * k] = one
    for j, d in enumerate(dec.kernel.diag):
        expect[2 * dec.index + j][2 * dec.index + j] = d
    if not linalg.mat_eq_within(got, expect):
        raise MathError("decomposition failed its own certification")

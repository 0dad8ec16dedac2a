"""Affine and conformal-affine groups of W inside the orthogonal group of
W extended by a hyperbolic plane, plus the 2x2-to-3x3 spin cover.

Everything here works in a fixed ordered basis (p, q, w_1, ..., w_m): p and q
a hyperbolic pair, the w_j an orthogonal basis of their complement W.  In that
basis the Gram matrix is [[0,1],[1,0]] plus the diagonal of W, and the maps of
interest are literal block matrices, so each embedding certifies itself
through the Isometry constructor.
"""

from __future__ import annotations

from . import linalg
from .errors import (
    NoPreimage,
    NotInImageShape,
    NotInStabilizer,
    NotNull,
)
from .padic import PadicNumber, is_square, sqrt, sum_all
from .quadspace import (
    BilinearSpace,
    QuadSpace,
    VecV,
    _as_scalar,
    _combine,
    hyperbolic_pair,
    orthogonal_complement,
)
from .orthogonal import Isometry


class NullDecomposition:
    """A space split as <p, q> perp W, carried in the ordered (p, q, W) basis.

    w_space is the diagonal form on W; block_space is the whole space with
    the hyperbolic-plus-diagonal Gram.  When the split was extracted from a
    concrete ambient space, to_ambient converts block coordinates back.
    """

    __slots__ = ("prime", "w_space", "block_space", "p_vec", "q_vec", "ambient_space", "ambient_basis")

    def __init__(self, w_space: QuadSpace, ambient=None):
        self.prime = w_space.prime
        self.w_space = w_space
        zero = PadicNumber.zero(self.prime)
        one = PadicNumber.one(self.prime)
        n = w_space.dim + 2
        gram = [[zero] * n for _ in range(n)]
        gram[0][1] = gram[1][0] = one
        for j, d in enumerate(w_space.diag):
            gram[2 + j][2 + j] = d
        self.block_space = BilinearSpace(self.prime, gram)
        self.p_vec = self.block_space.basis_vector(0)
        self.q_vec = self.block_space.basis_vector(1)
        if ambient is None:
            self.ambient_space = None
            self.ambient_basis = None
        else:
            self.ambient_space, self.ambient_basis = ambient

    @classmethod
    def from_wspace(cls, w_space: QuadSpace) -> "NullDecomposition":
        return cls(w_space)

    @classmethod
    def from_null_vector(cls, space: QuadSpace, pv: VecV) -> "NullDecomposition":
        """Split an ambient space along a null vector and its hyperbolic dual."""
        if pv.is_zero or not space.q(pv).is_zero:
            raise NotNull("the decomposition starts from a nonzero null vector")
        qv = hyperbolic_pair(space, pv)
        vectors, w_space = orthogonal_complement(space, [pv, qv])
        return cls(w_space, ambient=(space, [pv, qv, *vectors]))

    @property
    def dim(self):
        return self.block_space.dim

    def to_block(self, w: VecV) -> VecV:
        """Lift a vector of W to the block space (p- and q-coordinates 0)."""
        if w.space is not self.w_space and not self.w_space.same_space(w.space):
            raise ValueError("vector does not live in W")
        return self.block_space.vector([0, 0, *w.coords])

    def to_ambient(self, x: VecV) -> VecV:
        if self.ambient_space is None:
            raise ValueError("decomposition has no ambient space attached")
        return _combine(self.ambient_basis, list(x.coords))


def _pairing_row(decomp, t: VecV, rot: Isometry):
    """Row of values -(t, R w_j) over the W basis."""
    w = decomp.w_space
    return [
        -sum_all([d * a * b for d, a, b in zip(w.diag, t.coords, col)], w.prime)
        for col in zip(*rot.matrix)
    ]


class PoincareElt:
    """Pair (t, R): a translation t in W and a rotation R in SO(W)."""

    __slots__ = ("decomp", "t", "rot")

    def __init__(self, decomp: NullDecomposition, t: VecV, rot: Isometry):
        if rot.det != 1:
            raise ValueError("the rotation part must have determinant +1")
        if not rot.space.same_space(decomp.w_space):
            raise ValueError("rotation does not act on W")
        self.decomp = decomp
        self.t = decomp.w_space.vector(list(t.coords))
        self.rot = rot

    @classmethod
    def identity(cls, decomp):
        return cls(decomp, decomp.w_space.zero_vector(), Isometry.identity(decomp.w_space))

    def mul(self, other: "PoincareElt") -> "PoincareElt":
        # (t, R)(t', R') = (t + R t', R R')
        return PoincareElt(
            self.decomp,
            self.t + self.rot.apply(other.t),
            self.rot.compose(other.rot),
        )

    __matmul__ = mul

    def inverse(self) -> "PoincareElt":
        rinv = self.rot.inverse()
        return PoincareElt(self.decomp, -rinv.apply(self.t), rinv)

    def act(self, w: VecV) -> VecV:
        """Affine action on W: w -> R w + t."""
        return self.rot.apply(w) + self.t

    def __eq__(self, other):
        if not isinstance(other, PoincareElt):
            return NotImplemented
        return self.t == other.t and self.rot == other.rot

    __hash__ = None

    def to_record(self):
        return {"t": self.t.to_record(), "R": self.rot.to_record()}

    def __repr__(self):
        return f"PoincareElt(dim W={self.decomp.w_space.dim})"


class PartialConfElt:
    """Triple (c, t, R) extending PoincareElt by a dilation factor c != 0."""

    __slots__ = ("decomp", "c", "t", "rot")

    def __init__(self, decomp: NullDecomposition, c, t: VecV, rot: Isometry):
        c = decomp.w_space._scalar(c)
        if c.is_zero:
            raise ValueError("the dilation factor must be nonzero")
        if rot.det != 1:
            raise ValueError("the rotation part must have determinant +1")
        if not rot.space.same_space(decomp.w_space):
            raise ValueError("rotation does not act on W")
        self.decomp = decomp
        self.c = c
        self.t = decomp.w_space.vector(list(t.coords))
        self.rot = rot

    @classmethod
    def identity(cls, decomp):
        return cls(decomp, 1, decomp.w_space.zero_vector(), Isometry.identity(decomp.w_space))

    @classmethod
    def dilation(cls, decomp, c):
        return cls(decomp, c, decomp.w_space.zero_vector(), Isometry.identity(decomp.w_space))

    @classmethod
    def from_poincare(cls, elt: PoincareElt):
        return cls(elt.decomp, 1, elt.t, elt.rot)

    def inverse(self) -> "PartialConfElt":
        rinv = self.rot.inverse()
        return PartialConfElt(
            self.decomp, 1 / self.c, (-self.c) * rinv.apply(self.t), rinv
        )

    def __eq__(self, other):
        if not isinstance(other, PartialConfElt):
            return NotImplemented
        return self.c == other.c and self.t == other.t and self.rot == other.rot

    __hash__ = None

    def to_record(self):
        return {"c": self.c.to_record(), "t": self.t.to_record(), "R": self.rot.to_record()}

    def __repr__(self):
        return f"PartialConfElt(dim W={self.decomp.w_space.dim})"


def partial_mul(x: PartialConfElt, y: PartialConfElt) -> PartialConfElt:
    """Group law (c,t,R)(c',t',R') = (cc', (1/c') t + R t', R R')."""
    if x.decomp is not y.decomp and not x.decomp.block_space.same_space(y.decomp.block_space):
        raise ValueError("elements live over different decompositions")
    return PartialConfElt(
        x.decomp,
        x.c * y.c,
        (1 / y.c) * x.t + x.rot.apply(y.t),
        x.rot.compose(y.rot),
    )


def embed_h(decomp: NullDecomposition, elt: PoincareElt) -> Isometry:
    """Block matrix of (t, R) acting on the whole space, fixing p.

    Columns in the (p, q, W) order: p -> p, q -> -(t,t)/2 p + q + t, and
    w_j -> -(t, R w_j) p + R w_j.  Determinant +1 by the triangular shape.
    """
    w = decomp.w_space
    p_, one, zero = decomp.prime, PadicNumber.one(decomp.prime), PadicNumber.zero(decomp.prime)
    pair_row = _pairing_row(decomp, elt.t, elt.rot)
    top = [one, -(w.q(elt.t) / 2), *pair_row]
    mid = [zero, one] + [zero] * w.dim
    rows = [top, mid]
    for i in range(w.dim):
        rows.append([zero, elt.t.coords[i], *elt.rot.matrix[i]])
    return Isometry(decomp.block_space, rows, det=1)


def embed_partial(decomp: NullDecomposition, elt: PartialConfElt) -> Isometry:
    """Block matrix of (c, t, R): sends p to c p and scales the form chart.

    Same shape as embed_h with the first row scaled by c and the (q, q)
    entry replaced by 1/c.
    """
    w = decomp.w_space
    zero = PadicNumber.zero(decomp.prime)
    pair_row = _pairing_row(decomp, elt.t, elt.rot)
    top = [elt.c, elt.c * (-(w.q(elt.t) / 2)), *(elt.c * e for e in pair_row)]
    mid = [zero, 1 / elt.c] + [zero] * w.dim
    rows = [top, mid]
    for i in range(w.dim):
        rows.append([zero, elt.t.coords[i], *elt.rot.matrix[i]])
    return Isometry(decomp.block_space, rows, det=1)


def decompose_H_p(decomp: NullDecomposition, h: Isometry) -> PoincareElt:
    """Invert embed_h: read (t, R) off a block isometry that fixes p.

    Raises NotInStabilizer when h p != p or the rotation block has
    determinant -1; the returned element satisfies embed_h(t, R) = h.
    """
    if not h.space.same_space(decomp.block_space):
        raise ValueError("isometry does not act on the block space")
    one = PadicNumber.one(decomp.prime)
    col_p = [h.matrix[i][0] for i in range(decomp.dim)]
    if col_p[0] != one or any(not x.is_zero for x in col_p[1:]):
        raise NotInStabilizer("the element moves p")
    t = decomp.w_space.vector([h.matrix[2 + i][1] for i in range(decomp.w_space.dim)])
    rot_rows = [row[2:] for row in h.matrix[2:]]
    rot = Isometry(decomp.w_space, rot_rows)
    if rot.det != 1:
        raise NotInStabilizer("the rotation block has determinant -1")
    elt = PoincareElt(decomp, t, rot)
    if not linalg.mat_eq_within(embed_h(decomp, elt).matrix, h.matrix):
        raise NotInStabilizer("the element is not in the image shape over p")
    return elt


# -- the 2x2 -> 3x3 spin cover ---------------------------------------------


class SL2Elt:
    """2x2 matrix with determinant exactly 1 over Q_p."""

    __slots__ = ("prime", "a", "b", "c", "d")

    def __init__(self, prime, a, b, c, d):
        self.prime = prime
        self.a, self.b, self.c, self.d = (_as_scalar(prime, x) for x in (a, b, c, d))
        det = sum_all([self.a * self.d, -(self.b * self.c)], prime)
        if det != PadicNumber.one(prime):
            raise ValueError("determinant must be 1")

    @classmethod
    def identity(cls, prime):
        return cls(prime, 1, 0, 0, 1)

    @classmethod
    def from_matrix(cls, prime, m):
        return cls(prime, m[0][0], m[0][1], m[1][0], m[1][1])

    def mul(self, other: "SL2Elt") -> "SL2Elt":
        p = self.prime
        return SL2Elt(
            p,
            sum_all([self.a * other.a, self.b * other.c], p),
            sum_all([self.a * other.b, self.b * other.d], p),
            sum_all([self.c * other.a, self.d * other.c], p),
            sum_all([self.c * other.b, self.d * other.d], p),
        )

    __matmul__ = mul

    def inverse(self) -> "SL2Elt":
        return SL2Elt(self.prime, self.d, -self.b, -self.c, self.a)

    def neg(self) -> "SL2Elt":
        return SL2Elt(self.prime, -self.a, -self.b, -self.c, -self.d)

    def __eq__(self, other):
        if not isinstance(other, SL2Elt):
            return NotImplemented
        return (
            self.a == other.a and self.b == other.b
            and self.c == other.c and self.d == other.d
        )

    __hash__ = None

    def entries(self):
        return (self.a, self.b, self.c, self.d)

    def to_record(self):
        return [[self.a.to_record(), self.b.to_record()], [self.c.to_record(), self.d.to_record()]]

    def __repr__(self):
        return f"SL2Elt(p={self.prime})"


def adjoint_space(prime) -> BilinearSpace:
    """Trace form on trace-zero 2x2 matrices in the basis (X, H, Y).

    X = [[0,1],[0,0]], H = [[1,0],[0,-1]], Y = [[0,0],[1,0]]; the pairing
    (A, B) = tr(AB) has Gram [[0,0,1],[0,2,0],[1,0,0]].
    """
    return BilinearSpace(prime, [[0, 0, 1], [0, 2, 0], [1, 0, 0]])


def spin_cover(g: SL2Elt, space: BilinearSpace | None = None) -> Isometry:
    """Conjugation action of g on trace-zero matrices in the (X, H, Y) basis.

    A determinant +1 isometry of the trace form; g and -g land on the same
    image, x -> g x g^-1.
    """
    if space is None:
        space = adjoint_space(g.prime)
    a, b, c, d = g.entries()
    p = g.prime
    two = PadicNumber.from_int(2, p)
    rows = [
        [a * a, -(two * a * b), -(b * b)],
        [-(a * c), sum_all([a * d, b * c], p), b * d],
        [-(c * c), two * c * d, d * d],
    ]
    return Isometry(space, rows, det=1)


def _canonical_sign(g: SL2Elt) -> SL2Elt:
    # of g and -g, keep the one whose first nonzero entry has the smaller
    # canonical unit; this pins a unique representative of the fiber
    for x, y in zip(g.entries(), g.neg().entries()):
        if not x.is_zero:
            return g if x.unit <= y.unit else g.neg()
    return g


def spin_preimage(h: Isometry) -> SL2Elt:
    """Solve spin_cover(g) = h for g, up to the fiber {g, -g}.

    Raises NoPreimage when the corner entry is a nonsquare (the element is
    outside the image of the cover) and NotInImageShape when no 2x2 matrix
    reproduces h at all.  The returned representative has the canonical sign.
    """
    m = h.matrix
    p = h.space.prime
    try:
        if not m[0][0].is_zero:
            # a != 0 branch: first row gives a and b, first column gives c
            if not is_square(m[0][0]):
                raise NoPreimage("corner entry is not a square")
            a = sqrt(m[0][0])
            b = -(m[0][1] / (2 * a))
            c = -(m[1][0] / a)
            d = (1 + b * c) / a
        else:
            if m[0][2].is_zero:
                raise NotInImageShape("first row is outside the image shape")
            if not is_square(-m[0][2]):
                raise NoPreimage("corner entry is not a square")
            b = sqrt(-m[0][2])
            c = -(1 / b)
            d = m[1][2] / b
            a = PadicNumber.zero(p)
        g = SL2Elt(p, a, b, c, d)
    except ValueError as exc:
        raise NotInImageShape("entries do not close to determinant 1") from exc
    if not linalg.mat_eq_within(spin_cover(g, h.space).matrix, m):
        raise NotInImageShape("candidate does not reproduce the matrix")
    return _canonical_sign(g)

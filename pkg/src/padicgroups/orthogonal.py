"""Certified isometries of p-adic bilinear spaces and SO(V)-orbit machinery.

Every Isometry re-checks the Gram congruence on construction, so products,
inverses, and the constructive witnesses below are self-certifying.
"""

from __future__ import annotations

from . import linalg
from .errors import (
    DifferentOrbits,
    NotAnIsometry,
    NotIsometric,
    NullReflectionVector,
    PrecisionExhausted,
)
from .padic import GUARD_DIGITS, INF, eq_within, sum_all, vp_int
from .quadspace import (
    QuadSpace,
    VecV,
    _combine,
    hyperbolic_pair,
    isometric,
    orthogonal_complement,
    represent,
)


def _det_sign(d):
    """Resolve a computed isometry determinant to +1 or -1.

    Elimination erodes precision, so the value is compared to both signs
    p-adically; the Gram congruence has already certified the matrix, which
    forces the true determinant to be a sign.
    """
    if d.is_zero or d.valuation != 0:
        raise NotAnIsometry("determinant of an isometry must be a unit")
    p, mod = d.prime, d.prime**d.precision
    plus = (d.unit - 1) % mod
    minus = (d.unit + 1) % mod
    v_plus = d.precision if plus == 0 else vp_int(plus, p)
    v_minus = d.precision if minus == 0 else vp_int(minus, p)
    if max(v_plus, v_minus) < GUARD_DIGITS:
        raise NotAnIsometry("determinant of an isometry must be +1 or -1")
    return 1 if v_plus > v_minus else -1


def _blind_depth(col_i, gram, col_j):
    """Absolute digit position below which sum(M_ki G_kl M_lj) is unknown.

    INF when every term vanishes exactly, i.e. the true entry is 0.
    """
    best = INF
    for k, grow in enumerate(gram):
        x = col_i[k]
        if x.is_zero:
            continue
        for l, g in enumerate(grow):
            if g.is_zero:
                continue
            y = col_j[l]
            if y.is_zero:
                continue
            w = x.valuation + g.valuation + y.valuation
            w += min(x.precision, g.precision, y.precision)
            best = min(best, w)
    return best


def _certify_congruence(rows, space):
    """Check M^T G M = G within slack, distinguishing the undecidable case.

    An exact-zero entry of the computed congruence claims infinite trust,
    but a sum whose true value hides below every term window also comes
    back exactly zero; when the target Gram digit lies at or past that
    blind depth the verdict is refused rather than guessed.
    """
    got = linalg.congruent(rows, space.gram, min_digits=1)
    cols = list(zip(*rows))
    for i in range(space.dim):
        for j in range(space.dim):
            want = space.gram[i][j]
            if eq_within(got[i][j], want):
                continue
            if got[i][j].is_zero and not want.is_zero:
                if _blind_depth(cols[i], space.gram, cols[j]) > want.valuation + GUARD_DIGITS:
                    raise NotAnIsometry("matrix does not preserve the form")
                raise PrecisionExhausted("entries too deep to certify against the form")
            raise NotAnIsometry("matrix does not preserve the form")


class Isometry:
    """Matrix preserving the form of a bilinear space, with determinant ±1."""

    __slots__ = ("space", "matrix", "det")

    def __init__(self, space, matrix, det=None):
        self.space = space
        rows = [[space._scalar(x) for x in row] for row in matrix]
        if len(rows) != space.dim or any(len(r) != space.dim for r in rows):
            raise ValueError("matrix shape does not match the space")
        self.matrix = rows
        _certify_congruence(rows, space)
        # a caller that knows the determinant from the way the matrix was
        # assembled may pass it; extracting it from a matrix with deep
        # denominators can need more digits than the entries carry
        if det is None:
            det = _det_sign(linalg.det(rows))
        elif det not in (1, -1):
            raise NotAnIsometry("determinant of an isometry must be +1 or -1")
        self.det = det

    @classmethod
    def identity(cls, space):
        return cls(space, linalg.identity(space.dim, space.prime), det=1)

    def apply(self, v: VecV) -> VecV:
        if v.space is not self.space and not self.space.same_space(v.space):
            raise ValueError("vector lives in a different space")
        # an image coordinate may sink arbitrarily close to its window when
        # the true value is near zero; the matrix is already certified, so
        # the weak coordinate is reported rather than refused
        return self.space.vector(linalg.mat_vec(self.matrix, list(v.coords), min_digits=1))

    def compose(self, other: "Isometry") -> "Isometry":
        if not self.space.same_space(other.space):
            raise ValueError("isometries of different spaces")
        return Isometry(
            self.space,
            linalg.mat_mul(self.matrix, other.matrix),
            det=self.det * other.det,
        )

    __matmul__ = compose

    def inverse(self) -> "Isometry":
        # M^-1 = G^-1 M^T G for any isometry
        g = self.space.gram
        inv = linalg.mat_mul(
            linalg.inverse(g), linalg.mat_mul(linalg.transpose(self.matrix), g)
        )
        return Isometry(self.space, inv, det=self.det)

    def __eq__(self, other):
        if not isinstance(other, Isometry):
            return NotImplemented
        return self.space.same_space(other.space) and linalg.mat_eq(
            self.matrix, other.matrix
        )

    __hash__ = None

    def to_record(self):
        return {
            "det": self.det,
            "matrix": [[x.to_record() for x in row] for row in self.matrix],
        }

    def __repr__(self):
        return f"Isometry(dim={self.space.dim}, det={self.det:+d})"


def reflection(space, w: VecV) -> Isometry:
    """x -> x - (2(x,w)/(w,w)) w; determinant -1, fixes w-perp pointwise."""
    qw = space.q(w)
    if qw.is_zero:
        raise NullReflectionVector("reflection vector must have Q(w) != 0")
    cols = []
    for j in range(space.dim):
        e = space.basis_vector(j)
        c = (2 * space.bilinear(e, w)) / qw
        cols.append(list((e - c * w).coords))
    return Isometry(space, linalg.transpose(cols), det=-1)


class OrbitClass:
    """SO(V)-orbit label of a vector: massive (with its Q-value), massless, trivial."""

    __slots__ = ("kind", "value", "complete")

    def __init__(self, kind, value=None, complete=True):
        self.kind = kind
        self.value = value
        self.complete = complete

    def __eq__(self, other):
        if not isinstance(other, OrbitClass):
            return NotImplemented
        if self.kind != other.kind:
            return False
        if self.kind == "massive":
            return self.value == other.value
        return True

    __hash__ = None

    def __repr__(self):
        if self.kind == "massive":
            return f"OrbitClass(massive, {self.value!r})"
        return f"OrbitClass({self.kind})"


def orbit_classify(space: QuadSpace, v: VecV) -> OrbitClass:
    """Label v by its Q-value; a complete orbit invariant once dim >= 3."""
    complete = space.dim >= 3
    if v.is_zero:
        return OrbitClass("trivial", complete=complete)
    qv = space.q(v)
    if qv.is_zero:
        return OrbitClass("massless", complete=complete)
    return OrbitClass("massive", qv, complete=complete)


def complement_isometry(u: QuadSpace, u2: QuadSpace):
    """Matrix T with T^T Gram(u2) T = Gram(u), built by represent-and-recurse."""
    if u.prime != u2.prime:
        raise ValueError("mixed primes")
    if not isometric(u, u2):
        raise NotIsometric("forms differ in dim, discriminant, or Hasse invariant")
    p = u.prime
    if u.dim == 0:
        return []
    x2 = represent(u2, u.diag[0])
    if u.dim == 1:
        t = [[c] for c in x2.coords]
    else:
        vecs2, sub2 = orthogonal_complement(u2, [x2])
        rest = complement_isometry(QuadSpace(p, list(u.diag[1:])), sub2)
        cols = [list(x2.coords)]
        for i in range(u.dim - 1):
            img = _combine(vecs2, [rest[j][i] for j in range(len(vecs2))])
            cols.append(list(img.coords))
        t = linalg.transpose(cols)
    if not linalg.mat_eq_within(linalg.congruent(t, u2.gram, min_digits=1), u.gram):
        raise NotIsometric("constructed map failed its congruence check")
    return t


def _primitive(space, x: VecV) -> VecV:
    """Rescale a nonzero vector so its coordinates are integral with a unit entry."""
    shift = min(c.valuation for c in x.coords if not c.is_zero)
    if shift:
        x = space._scalar(space.prime) ** (-shift) * x
    return x


def _loose_sub(space, x: VecV, y: VecV) -> VecV:
    """x - y, keeping coordinates whose digits sink past the guard.

    Reflection vectors are certified downstream, so a weak coordinate is
    acceptable where ordinary subtraction would refuse to answer.
    """
    return space.vector(
        [
            sum_all([a, -b], p=space.prime, min_digits=1)
            for a, b in zip(x.coords, y.coords)
        ]
    )


def _reflectable(space, x: VecV):
    """Primitive rescale of x paired with Q(x), or None when x vanishes or
    its Q-value cancels below the guard."""
    if x.is_zero:
        return None
    x = _primitive(space, x)
    try:
        q = space.q(x)
    except PrecisionExhausted:
        return None
    if q.is_zero:
        return None
    return x, q


def _pairing_or_none(space, x, y):
    try:
        b = space.bilinear(x, y)
    except PrecisionExhausted:
        return None
    return None if b.is_zero else b


def _massive_witness(space, v, w):
    # Q(v-w) + Q(v+w) = 4 Q(v) != 0, so at least one candidate keeps a
    # small valuation; reflecting in it carries v to w or to -w
    cand_d = _reflectable(space, _loose_sub(space, v, w))
    cand_t = _reflectable(space, _loose_sub(space, v, -w))
    if cand_d is None and cand_t is None:
        raise PrecisionExhausted("both reflection candidates lost their Q-value")
    if cand_t is None or (
        cand_d is not None and cand_d[1].valuation <= cand_t[1].valuation
    ):
        # r v = w already; follow with a reflection that fixes w
        r = reflection(space, cand_d[0])
        zs, _ = orthogonal_complement(space, [w])
        return reflection(space, zs[0]).compose(r)
    # r v = -w; reflecting in w itself restores the sign
    r = reflection(space, cand_t[0])
    return reflection(space, w).compose(r)


def _massless_bridge(space, v, w):
    """A null vector pairing away from zero with both v and w.

    Two null vectors with vanishing pairing cannot be joined by one
    reflection; the bridge provides a two-hop path, and is assembled from
    hyperbolic partners so every pairing along the way is a unit.
    """
    vpair = hyperbolic_pair(space, v)
    if _pairing_or_none(space, w, vpair) is not None:
        return vpair
    wpair = hyperbolic_pair(space, w)
    if _pairing_or_none(space, v, wpair) is not None:
        return wpair
    # both partners pair to zero with the opposite vector, so the sum pairs
    # to 1 with each; a multiple of v pulls it back onto the cone without
    # touching either pairing
    y = _loose_sub(space, vpair, -wpair)
    try:
        c = space.bilinear(vpair, wpair)
    except PrecisionExhausted:
        c = None
    if c is not None and not c.is_zero:
        y = _loose_sub(space, y, c * v)
    return y


def _massless_witness(space, v, w):
    b = _pairing_or_none(space, v, w)
    if b is not None and b.valuation <= 2:
        # Q(v-w) = -2 (v,w) is away from zero, so one reflection joins the
        # pair; fix w with a vector orthogonal to its hyperbolic plane
        r = reflection(space, _primitive(space, _loose_sub(space, v, w)))
        zs, _ = orthogonal_complement(space, [w, hyperbolic_pair(space, w)])
        return reflection(space, zs[0]).compose(r)
    y = _massless_bridge(space, v, w)
    r1 = reflection(space, _primitive(space, _loose_sub(space, v, y)))
    r2 = reflection(space, _primitive(space, _loose_sub(space, y, w)))
    return r2.compose(r1)


def transitivity_witness(space: QuadSpace, v: VecV, w: VecV) -> Isometry:
    """g in SO(V) with g v = w, for two vectors in the same orbit (dim >= 3).

    The witness is a product of exactly two reflections, so its determinant
    is +1 by construction and only one division by a Q-value of controlled
    valuation enters each factor.  The image g v agrees with w to guard
    slack below the common window: the pair only determines the map that
    far, since Q(v) and Q(w) themselves agree only within their windows.
    """
    if space.dim < 3:
        raise ValueError("orbit transitivity is only claimed for dim >= 3")
    cv, cw = orbit_classify(space, v), orbit_classify(space, w)
    if cv != cw:
        raise DifferentOrbits(f"{cv!r} vs {cw!r}")
    if cv.kind == "trivial" or v == w:
        return Isometry.identity(space)
    p = space.prime
    # a common rescale of the pair leaves the witness equation unchanged
    # and keeps the reflection vectors integral
    shift = min(c.valuation for c in (*v.coords, *w.coords) if not c.is_zero)
    if shift:
        scale = space._scalar(p) ** (-shift)
        v, w = scale * v, scale * w
    if cv.kind == "massive":
        g = _massive_witness(space, v, w)
    else:
        g = _massless_witness(space, v, w)
    out = linalg.mat_vec(g.matrix, list(v.coords), min_digits=1)
    if not all(eq_within(x, y) for x, y in zip(out, w.coords)):
        raise NotAnIsometry("witness failed to map v to w")
    return g


def so_generators_demo(space: QuadSpace, count, rng):
    """Deterministic SO(V) elements: products of two reflections."""
    from .sampling import random_anisotropic_vector

    out = []
    for _ in range(count):
        w1 = random_anisotropic_vector(space, rng)
        w2 = random_anisotropic_vector(space, rng)
        out.append(reflection(space, w1).compose(reflection(space, w2)))
    return out

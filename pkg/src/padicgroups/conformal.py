"""Projective cone of a quadratic space, the chart over a null direction,
and the induced conformal structure.

The chart machinery rides on a NullDecomposition: points live in its block
space, the chart covers the locus pairing nontrivially with p, and the
affine group of W acts through embed_h.
"""

from __future__ import annotations

from .errors import NotInChart, NotTangent, WitnessSearchExhausted, ZeroInput
from .orthogonal import Isometry
from .padic import PadicNumber
from .poincare import NullDecomposition, PartialConfElt, PoincareElt, embed_h
from .quadspace import VecV, is_isotropic, isotropic_vector
from .sampling import random_vector


class ProjPoint:
    """Point of projective space: a nonzero vector up to scale.

    The stored representative is normalized so its last nonzero coordinate
    is exactly 1, which makes equality a plain coordinate comparison.
    """

    __slots__ = ("space", "coords")

    def __init__(self, space, coords):
        coords = [space._scalar(c) for c in coords]
        if len(coords) != space.dim:
            raise ValueError("coordinate count does not match the space")
        pivot = None
        for c in reversed(coords):
            if not c.is_zero:
                pivot = c
                break
        if pivot is None:
            raise ZeroInput("projective points need a nonzero representative")
        self.space = space
        self.coords = tuple(c / pivot for c in coords)

    @classmethod
    def from_vector(cls, v: VecV) -> "ProjPoint":
        return cls(v.space, list(v.coords))

    @property
    def rep(self) -> VecV:
        """The normalized representative as a vector."""
        return self.space.vector(list(self.coords))

    def __eq__(self, other):
        if not isinstance(other, ProjPoint):
            return NotImplemented
        if not self.space.same_space(other.space):
            return False
        return all(a == b for a, b in zip(self.coords, other.coords))

    __hash__ = None

    def to_record(self):
        return [c.to_record() for c in self.coords]

    def __repr__(self):
        return "ProjPoint(" + ", ".join(repr(c) for c in self.coords) + ")"


class ConeMembership:
    """Verdict on whether a projective point lies on the null cone."""

    __slots__ = ("point", "on_cone", "value")

    def __init__(self, point: ProjPoint, on_cone: bool, value):
        self.point = point
        self.on_cone = on_cone
        self.value = value

    def __bool__(self):
        return self.on_cone

    def to_record(self):
        return {"on_cone": self.on_cone, "q_value": self.value.to_record()}


def cone_membership(x: ProjPoint) -> ConeMembership:
    """Evaluate Q on the normalized representative; scale-independent."""
    q = x.space.q(x.rep)
    return ConeMembership(x, q.is_zero, q)


def chart_J(decomp: NullDecomposition, w: VecV) -> ProjPoint:
    """The chart of W into the cone: w -> [-(w,w)/2 p + q + w]."""
    if w.space is not decomp.w_space and not decomp.w_space.same_space(w.space):
        raise ValueError("chart input must live in W")
    qw = decomp.w_space.q(w)
    return ProjPoint(decomp.block_space, [-(qw / 2), 1, *w.coords])


def chart_J_inv(decomp: NullDecomposition, x: ProjPoint) -> VecV:
    """Invert the chart: scale the q-coordinate to 1 and read off the W part.

    Raises NotInChart when the point pairs to zero with p, i.e. its
    q-coordinate vanishes and no rescaling can reach the chart.
    """
    if not x.space.same_space(decomp.block_space):
        raise ValueError("point does not live on the compactified space")
    t = x.coords[1]
    if t.is_zero:
        raise NotInChart("the point pairs to zero with p")
    return decomp.w_space.vector([c / t for c in x.coords[2:]])


def act_on_projective(g: Isometry, x: ProjPoint) -> ProjPoint:
    """Push a projective point through an isometry of its space."""
    if not g.space.same_space(x.space):
        raise ValueError("isometry and point live in different spaces")
    return ProjPoint.from_vector(g.apply(x.rep))


def intertwine_check(decomp: NullDecomposition, elt: PoincareElt, w: VecV) -> bool:
    """Whether acting by embed_h(t, R) on J(w) lands on J(R w + t)."""
    lhs = act_on_projective(embed_h(decomp, elt), chart_J(decomp, w))
    rhs = chart_J(decomp, elt.act(w))
    return lhs == rhs


def induced_form(x: VecV, t1: VecV, t2: VecV) -> PadicNumber:
    """The conformal pairing of two tangents at a cone point.

    Tangents to the cone at x are vectors pairing to zero with x; the value
    only depends on the tangents modulo the line through x, and switching
    the base representative x -> lambda x rescales tangent representatives
    and hence the value by lambda^2.
    """
    space = x.space
    if x.is_zero or not space.q(x).is_zero:
        raise ZeroInput("the base point must be a nonzero cone vector")
    for t in (t1, t2):
        if not space.bilinear(x, t).is_zero:
            raise NotTangent("vector does not pair to zero with the base point")
    return space.bilinear(t1, t2)


def _escape_candidates(decomp, rng, attempts):
    w = decomp.w_space
    yield w.zero_vector()
    nullable = w.dim >= 1 and is_isotropic(w)
    for k in range(attempts - 1):
        if nullable and k % 2 == 0:
            # points over null directions of W are where charts typically end
            from .sampling import random_rotation, random_scalar

            yield random_scalar(w.prime, rng) * random_rotation(w, rng).apply(isotropic_vector(w))
        else:
            yield random_vector(w, rng)


def chart_escape_witness(decomp: NullDecomposition, g: Isometry, rng, attempts: int = 60) -> ProjPoint:
    """A chart point that g carries out of the chart.

    Tries the base point of the chart and random cone points, weighted
    toward null directions of W; raises WitnessSearchExhausted when none of
    the sampled points escapes.
    """
    for w in _escape_candidates(decomp, rng, attempts):
        x = chart_J(decomp, w)
        if g.apply(x.rep).coords[1].is_zero:
            return x
    raise WitnessSearchExhausted("no sampled chart point escaped")


def stabilizes_chart(decomp: NullDecomposition, g: Isometry, rng=None, samples: int = 50) -> bool:
    """Whether g maps the chart over p into itself.

    Ground truth is the line criterion: g fixes [p] exactly when its first
    column is a multiple of the first basis vector.  When a generator is
    supplied the verdict is corroborated on random points: sampled chart
    images must stay in the chart if True, and a concrete escaping point is
    searched for if False (a failed search is not fatal).
    """
    if not g.space.same_space(decomp.block_space):
        raise ValueError("isometry does not act on the block space")
    col = [g.matrix[i][0] for i in range(decomp.dim)]
    verdict = all(c.is_zero for c in col[1:]) and not col[0].is_zero
    if rng is not None:
        if verdict:
            for _ in range(samples):
                x = chart_J(decomp, random_vector(decomp.w_space, rng))
                chart_J_inv(decomp, act_on_projective(g, x))
        else:
            try:
                chart_escape_witness(decomp, g, rng)
            except WitnessSearchExhausted:
                pass
    return verdict


def swap_pq_isometry(decomp: NullDecomposition) -> Isometry:
    """The isometry exchanging p and q and negating one W direction.

    Swapping alone has determinant -1; negating a single complement basis
    vector restores +1.  Moves [p] to [q], so it does not stabilize the
    chart: a standard negative control.
    """
    if decomp.w_space.dim == 0:
        raise ValueError("needs at least one W direction to fix the determinant")
    p = decomp.prime
    zero, one = PadicNumber.zero(p), PadicNumber.one(p)
    n = decomp.dim
    rows = [[zero] * n for _ in range(n)]
    rows[0][1] = rows[1][0] = one
    rows[2][2] = -one
    for i in range(3, n):
        rows[i][i] = one
    return Isometry(decomp.block_space, rows, det=1)

"""Galilean group over an isotropic inner-product space: spacetime and dual
actions, the boost cocycle and its multiplier, and the orbit invariants of
the two kinds of dual-space orbits.

The group is G = V x| R with V = V_0 + Q_p (space and time translations) and
R = V_0 x| SO(V_0) (boosts and rotations).  R acts on translations by
(u, eta) -> (W u + eta v, eta).
"""

from __future__ import annotations

from . import linalg
from .errors import InvalidBaseMultiplier, ZeroTau, ZeroXi
from .orthogonal import Isometry
from .padic import PadicNumber, Phase, psi
from .quadspace import QuadSpace, VecV


class RElt:
    """Homogeneous element (v, W): a boost v in V_0 and a rotation W."""

    __slots__ = ("v0", "v", "rot")

    def __init__(self, v0: QuadSpace, v: VecV, rot: Isometry):
        if rot.det != 1:
            raise ValueError("the rotation part must have determinant +1")
        if not rot.space.same_space(v0):
            raise ValueError("rotation does not act on V_0")
        self.v0 = v0
        self.v = v0.vector(list(v.coords))
        self.rot = rot

    @classmethod
    def identity(cls, v0):
        return cls(v0, v0.zero_vector(), Isometry.identity(v0))

    @classmethod
    def boost(cls, v0, v):
        return cls(v0, v, Isometry.identity(v0))

    def mul(self, other: "RElt") -> "RElt":
        # (v, W)(v', W') = (v + W v', W W')
        return RElt(self.v0, self.v + self.rot.apply(other.v), self.rot.compose(other.rot))

    __matmul__ = mul

    def inverse(self) -> "RElt":
        winv = self.rot.inverse()
        return RElt(self.v0, -winv.apply(self.v), winv)

    def act_translation(self, u: VecV, eta: PadicNumber):
        """Action on the translation group: (u, eta) -> (W u + eta v, eta)."""
        return self.rot.apply(u) + eta * self.v, eta

    def __eq__(self, other):
        if not isinstance(other, RElt):
            return NotImplemented
        return self.v == other.v and self.rot == other.rot

    __hash__ = None

    def to_record(self):
        return {"v": self.v.to_record(), "W": self.rot.to_record()}

    def __repr__(self):
        return f"RElt(dim V0={self.v0.dim})"


class GalileanElt:
    """Full element ((u, eta), (v, W)): translations plus a homogeneous part."""

    __slots__ = ("v0", "u", "eta", "r")

    def __init__(self, v0: QuadSpace, u: VecV, eta, r: RElt):
        self.v0 = v0
        self.u = v0.vector(list(u.coords))
        self.eta = v0._scalar(eta)
        self.r = r

    @classmethod
    def identity(cls, v0):
        return cls(v0, v0.zero_vector(), 0, RElt.identity(v0))

    @classmethod
    def translation(cls, v0, u, eta):
        return cls(v0, u, eta, RElt.identity(v0))

    @classmethod
    def from_relt(cls, r: RElt):
        return cls(r.v0, r.v0.zero_vector(), 0, r)

    def mul(self, other: "GalileanElt") -> "GalileanElt":
        # ((u, eta), r)((u', eta'), r') = ((u, eta) + r (u', eta'), r r')
        du, deta = self.r.act_translation(other.u, other.eta)
        return GalileanElt(self.v0, self.u + du, self.eta + deta, self.r.mul(other.r))

    __matmul__ = mul

    def inverse(self) -> "GalileanElt":
        rinv = self.r.inverse()
        du, deta = rinv.act_translation(self.u, self.eta)
        return GalileanElt(self.v0, -du, -deta, rinv)

    def __eq__(self, other):
        if not isinstance(other, GalileanElt):
            return NotImplemented
        return self.u == other.u and self.eta == other.eta and self.r == other.r

    __hash__ = None

    def to_record(self):
        return {"u": self.u.to_record(), "eta": self.eta.to_record(), **self.r.to_record()}

    def __repr__(self):
        return f"GalileanElt(dim V0={self.v0.dim})"


def act_spacetime(g: GalileanElt, x: VecV, t) -> tuple[VecV, PadicNumber]:
    """Action on events: (x, t) -> (W x + t v + u, t + eta)."""
    t = g.v0._scalar(t)
    return g.r.rot.apply(x) + t * g.r.v + g.u, t + g.eta


class DualPoint:
    """Point (xi, t) of the dual of the translation group.

    Pairs with a translation (u, eta) through (xi, u) + t eta.
    """

    __slots__ = ("v0", "xi", "t")

    def __init__(self, v0: QuadSpace, xi: VecV, t):
        self.v0 = v0
        self.xi = v0.vector(list(xi.coords))
        self.t = v0._scalar(t)

    def pair(self, u: VecV, eta) -> PadicNumber:
        return self.v0.bilinear(self.xi, u) + self.t * self.v0._scalar(eta)

    def __add__(self, other):
        return DualPoint(self.v0, self.xi + other.xi, self.t + other.t)

    def __neg__(self):
        return DualPoint(self.v0, -self.xi, -self.t)

    def __sub__(self, other):
        return self + (-other)

    def __eq__(self, other):
        if not isinstance(other, DualPoint):
            return NotImplemented
        return self.xi == other.xi and self.t == other.t

    __hash__ = None

    def to_record(self):
        return {"xi": self.xi.to_record(), "t": self.t.to_record()}

    def __repr__(self):
        return f"DualPoint(xi={self.xi!r}, t={self.t!r})"


def dual_action(r: RElt, chi: DualPoint) -> DualPoint:
    """Contragredient action: (xi, t) -> (W xi, t - (W xi, v)).

    Characterized by <r chi, r (u, eta)> = <chi, (u, eta)>.
    """
    wxi = r.rot.apply(chi.xi)
    return DualPoint(r.v0, wxi, chi.t - r.v0.bilinear(wxi, r.v))


def theta_tau(tau, r: RElt) -> DualPoint:
    """The boost cocycle theta_tau(v, W) = (2 tau v, -tau (v, v))."""
    tau = r.v0._scalar(tau)
    return DualPoint(r.v0, (2 * tau) * r.v, -(tau * r.v0.q(r.v)))


def find_cocycle_counterexample(v0, f, pairs):
    """First pair (r, r') with f(r r') != f(r) + r[f(r')], or None."""
    for r, rp in pairs:
        lhs = f(r.mul(rp))
        rhs = f(r) + dual_action(r, f(rp))
        if not (lhs == rhs):
            return r, rp
    return None


def cocycle_check(v0, f, samples, rng) -> bool:
    """Whether f satisfies the cocycle identity on sampled pairs of R."""
    from .sampling import random_relt

    pairs = [(random_relt(v0, rng), random_relt(v0, rng)) for _ in range(samples)]
    return find_cocycle_counterexample(v0, f, pairs) is None


def coboundary(v0, chi: DualPoint):
    """The cocycle r -> r[chi] - chi; always passes the cocycle identity."""

    def f(r):
        return dual_action(r, chi) - chi

    return f


def affine_action(tau, r: RElt, chi: DualPoint) -> DualPoint:
    """The theta-shifted action (xi, t) -> (W xi + 2 tau v, t - (W xi, v) - tau (v, v))."""
    return dual_action(r, chi) + theta_tau(tau, r)


def invariant_M(tau, chi: DualPoint) -> PadicNumber:
    """(xi, xi) + 4 tau t: constant along affine orbits."""
    tau = chi.v0._scalar(tau)
    if tau.is_zero:
        raise ZeroTau("the affine invariant needs tau != 0")
    return chi.v0.q(chi.xi) + 4 * tau * chi.t


def base_point(tau, a, v0) -> DualPoint:
    """The point (0, a / 4 tau), where invariant_M takes the value a."""
    tau, a = v0._scalar(tau), v0._scalar(a)
    if tau.is_zero:
        raise ZeroTau("the level base point needs tau != 0")
    return DualPoint(v0, v0.zero_vector(), a / (4 * tau))


def affine_orbit_witness(tau, chi: DualPoint) -> RElt:
    """A pure boost carrying the level base point of M(chi) to chi.

    The witness is (xi / 2 tau, I); the construction re-checks that it
    lands exactly on chi.
    """
    v0 = chi.v0
    tau = v0._scalar(tau)
    if tau.is_zero:
        raise ZeroTau("affine orbits degenerate at tau = 0")
    w = RElt.boost(v0, (1 / (2 * tau)) * chi.xi)
    start = base_point(tau, invariant_M(tau, chi), v0)
    if not (affine_action(tau, w, start) == chi):
        raise ZeroTau("witness verification failed")
    return w


# -- multipliers -------------------------------------------------------------


def mu_tau(tau, g: GalileanElt, gp: GalileanElt) -> Phase:
    """The multiplier psi(-2 tau (v, W u') - tau eta' (v, v))."""
    v0 = g.v0
    tau = v0._scalar(tau)
    arg = -(2 * tau) * v0.bilinear(g.r.v, g.r.rot.apply(gp.u)) - tau * gp.eta * v0.q(g.r.v)
    return psi(arg)


def find_multiplier_counterexample(v0, m, triples):
    """First triple breaking m(x,y) + m(xy,z) = m(y,z) + m(x,yz), or None."""
    for x, y, z in triples:
        lhs = m(x, y) + m(x.mul(y), z)
        rhs = m(y, z) + m(x, y.mul(z))
        if not (lhs == rhs):
            return x, y, z
    return None


def multiplier_check(v0, m, samples, rng) -> bool:
    """Whether m is a normalized 2-cocycle on sampled triples."""
    from .sampling import random_galilean

    one = GalileanElt.identity(v0)
    zero_phase = Phase()
    for _ in range(samples):
        x = random_galilean(v0, rng)
        if not (m(x, one) == zero_phase and m(one, x) == zero_phase):
            return False
    triples = [
        (random_galilean(v0, rng), random_galilean(v0, rng), random_galilean(v0, rng))
        for _ in range(samples)
    ]
    return find_multiplier_counterexample(v0, m, triples) is None


def multiplier_restrictions(v0, n0, tau, rng, samples=40) -> dict:
    """Behavior of m(g, g') = n0(W, W') + mu_tau(g, g') on subgroups.

    n0 must itself be a normalized multiplier of SO(V_0) (checked on
    samples; InvalidBaseMultiplier otherwise).  The report records that the
    combined multiplier vanishes on translation x anything pairs and, for
    tau != 0, exhibits a (boost, translation) pair with nonzero phase.
    """
    from .sampling import random_galilean, random_rotation, random_translation

    tau = v0._scalar(tau)
    zero_phase = Phase()

    ident = Isometry.identity(v0)
    if not (n0(ident, ident) == zero_phase):
        raise InvalidBaseMultiplier("n0 is not normalized")
    triples = [
        tuple(random_rotation(v0, rng) for _ in range(3)) for _ in range(samples)
    ]
    for w1, w2, w3 in triples:
        lhs = n0(w1, w2) + n0(w1.compose(w2), w3)
        rhs = n0(w2, w3) + n0(w1, w2.compose(w3))
        if not (lhs == rhs):
            raise InvalidBaseMultiplier("n0 fails the multiplier identity")

    def m(g, gp):
        return n0(g.r.rot, gp.r.rot) + mu_tau(tau, g, gp)

    report = {
        "translation_translation_trivial": True,
        "translation_group_trivial": True,
        "group_translation_nontrivial": None,
        "multiplier_identity_holds": True,
    }
    for _ in range(samples):
        s = random_translation(v0, rng)
        sp = random_translation(v0, rng)
        g = random_galilean(v0, rng)
        if not (m(s, sp) == zero_phase):
            report["translation_translation_trivial"] = False
        if not (m(s, g) == zero_phase):
            report["translation_group_trivial"] = False
    if not multiplier_check(v0, m, samples, rng):
        report["multiplier_identity_holds"] = False

    if tau.is_zero:
        report["group_translation_nontrivial"] = False
    else:
        report["group_translation_nontrivial"] = False
        d = v0.diag[0]
        e = v0.basis_vector(0)
        # (v, u') = 1 / (2 tau p) forces the phase psi(-1/p) != 0
        scale = 1 / (2 * tau * d * v0._scalar(v0.prime))
        boost = GalileanElt.from_relt(RElt.boost(v0, e))
        trans = GalileanElt.translation(v0, scale * e, 0)
        if not (m(boost, trans) == zero_phase):
            report["group_translation_nontrivial"] = True
            report["witness"] = {
                "boost": boost.to_record(),
                "translation": trans.to_record(),
                "phase": m(boost, trans).to_str(),
            }
    return report


# -- the tau = 0 (ordinary) orbits -------------------------------------------


def invariant_N(chi: DualPoint) -> PadicNumber:
    """(xi, xi): constant along plain dual orbits."""
    return chi.v0.q(chi.xi)


def ordinary_orbit_witness(chi: DualPoint) -> RElt:
    """A boost (v, I) with (xi, v) = -t, carrying (xi, 0) to (xi, t).

    Needs xi != 0; raises ZeroXi otherwise.
    """
    v0 = chi.v0
    if chi.xi.is_zero:
        raise ZeroXi("no boost moves the time coordinate over xi = 0")
    j = next(i for i, c in enumerate(chi.xi.coords) if not c.is_zero)
    v = (-(chi.t / (v0.diag[j] * chi.xi.coords[j]))) * v0.basis_vector(j)
    w = RElt.boost(v0, v)
    if not (dual_action(w, DualPoint(v0, chi.xi, 0)) == chi):
        raise ZeroXi("witness verification failed")
    return w


def level_time(tau, a, xi: VecV) -> PadicNumber:
    """The unique t with invariant_M((xi, t)) = a: t = (a - (xi, xi)) / 4 tau."""
    v0 = xi.space
    tau, a = v0._scalar(tau), v0._scalar(a)
    if tau.is_zero:
        raise ZeroTau("level sets need tau != 0")
    return (a - v0.q(xi)) / (4 * tau)


def level_point(tau, a, xi: VecV) -> DualPoint:
    return DualPoint(xi.space, xi, level_time(tau, a, xi))


def level_set_action(tau, r: RElt, xi: VecV) -> VecV:
    """The action read through level coordinates: xi -> W xi + 2 tau v.

    Independent of the level a; affine_action on level_point(tau, a, xi)
    lands on level_point(tau, a, of the returned vector).
    """
    tau = xi.space._scalar(tau)
    return r.rot.apply(xi) + (2 * tau) * r.v


# -- rigidity of skew forms ----------------------------------------------------


def invariant_skew_dimension(v0: QuadSpace, rng, samples=6) -> int:
    """Dimension of R-invariant skew forms on V = V_0 + Q_p time.

    Collects the linear constraints B(r e_i, r e_j) = B(e_i, e_j) from
    sampled group elements and returns the dimension of the solution space.
    """
    from .sampling import random_relt

    n = v0.dim + 1
    unknowns = [(k, l) for k in range(n) for l in range(k + 1, n)]
    index = {kl: i for i, kl in enumerate(unknowns)}
    zero = PadicNumber.zero(v0.prime)

    def images(r):
        # columns of the action of (v, W) on V_0 + time
        cols = []
        for i in range(v0.dim):
            w = r.rot.apply(v0.basis_vector(i))
            cols.append(list(w.coords) + [zero])
        cols.append(list(r.v.coords) + [PadicNumber.one(v0.prime)])
        return cols

    rows = []
    for _ in range(samples):
        cols = images(random_relt(v0, rng))
        for (i, j) in unknowns:
            row = [zero] * len(unknowns)
            for (k, l) in unknowns:
                c = cols[i][k] * cols[j][l] - cols[i][l] * cols[j][k]
                if (k, l) == (i, j):
                    c = c - 1
                row[index[(k, l)]] = c
            rows.append(row)
    return len(linalg.nullspace(rows, len(unknowns), v0.prime))

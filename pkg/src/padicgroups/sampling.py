"""Seeded deterministic generators for scalars, vectors, and group elements.

Everything takes an explicit random.Random so runs are reproducible; the
verification suites and the CLI rely on that.
"""

from fractions import Fraction

from .padic import PadicNumber
from .quadspace import QuadSpace


def random_scalar(p, rng, zero_ok=False):
    num = rng.randint(-40, 40)
    while num == 0 and not zero_ok:
        num = rng.randint(-40, 40)
    if num == 0:
        return PadicNumber.zero(p)
    x = PadicNumber.from_fraction(Fraction(num), p)
    shift = rng.randint(-2, 2)
    return x * PadicNumber.from_int(p, p) ** shift


def random_unit(p, rng):
    x = random_scalar(p, rng)
    return PadicNumber(p, 0, x.unit, x.precision)


def random_vector(space, rng, zero_ok=True):
    return space.vector([random_scalar(space.prime, rng, True) for _ in range(space.dim)])


def random_nonzero_vector(space, rng):
    while True:
        v = random_vector(space, rng)
        if not v.is_zero:
            return v


def random_int_vector(space, rng, bound=9):
    while True:
        coords = [rng.randint(-bound, bound) for _ in range(space.dim)]
        if any(coords):
            return space.vector(coords)


def random_anisotropic_vector(space, rng, bound=9):
    # Q(v) of low valuation keeps reflection matrices near-integral, which
    # protects long products from precision attrition
    for _ in range(500):
        v = random_int_vector(space, rng, bound)
        q = space.q(v)
        if not q.is_zero and q.valuation <= 1:
            return v
    raise RuntimeError("could not sample an anisotropic vector")


def random_rotation(space, rng, steps=2):
    """Product of an even number of reflections: a determinant +1 isometry."""
    from .orthogonal import Isometry, reflection

    g = Isometry.identity(space)
    for _ in range(steps):
        w1 = random_anisotropic_vector(space, rng)
        w2 = random_anisotropic_vector(space, rng)
        g = g.compose(reflection(space, w1)).compose(reflection(space, w2))
    return g


def random_isometry(space, rng):
    """Random element of O(V), determinant +1 or -1."""
    from .orthogonal import reflection

    g = random_rotation(space, rng)
    if rng.random() < 0.5:
        g = g.compose(reflection(space, random_anisotropic_vector(space, rng)))
    return g


def random_diag_space(p, rng, dim, pool=None):
    pool = pool or ([1, -1, 2, -2, 3, -3] if p == 2 else [1, -1, 2, -2, p, -p])
    return QuadSpace(p, [rng.choice(pool) for _ in range(dim)])


def random_poincare(decomp, rng):
    """Random translation-rotation pair over the chart layer of decomp."""
    from .poincare import PoincareElt

    w = decomp.w_space
    return PoincareElt(decomp, random_vector(w, rng), random_rotation(w, rng))


def random_partial(decomp, rng):
    """Random dilation-translation-rotation triple over the chart layer."""
    from .poincare import PartialConfElt

    w = decomp.w_space
    return PartialConfElt(
        decomp, random_scalar(w.prime, rng), random_vector(w, rng), random_rotation(w, rng)
    )


def random_relt(v0, rng):
    """Random boost-plus-rotation pair over V_0."""
    from .galilean import RElt

    return RElt(v0, random_vector(v0, rng), random_rotation(v0, rng))


def random_translation(v0, rng):
    """Random pure spacetime translation."""
    from .galilean import GalileanElt

    return GalileanElt.translation(
        v0, random_vector(v0, rng), random_scalar(v0.prime, rng, zero_ok=True)
    )


def random_galilean(v0, rng):
    """Random full Galilean element."""
    from .galilean import GalileanElt

    return GalileanElt(
        v0,
        random_vector(v0, rng),
        random_scalar(v0.prime, rng, zero_ok=True),
        random_relt(v0, rng),
    )


def random_dual_point(v0, rng, nonzero_xi=False):
    from .galilean import DualPoint

    xi = random_nonzero_vector(v0, rng) if nonzero_xi else random_vector(v0, rng)
    return DualPoint(v0, xi, random_scalar(v0.prime, rng, zero_ok=True))


def random_sl2(p, rng):
    """Entries of a random SL(2) element as exact scalars, det = 1.

    Unipotent factors stay integral and the single torus factor carries at
    most one power of p, so entry valuations stay >= -1; products of two
    samples then keep the conjugation matrix certifiable at the default
    precision.
    """
    one = PadicNumber.one(p)
    zero = PadicNumber.zero(p)
    m = [[one, zero], [zero, one]]
    factors = []
    for _ in range(rng.randint(1, 2)):
        factors.append([[one, PadicNumber.from_int(rng.randint(-9, 9), p)], [zero, one]])
        factors.append([[one, zero], [PadicNumber.from_int(rng.randint(-9, 9), p), one]])
    a = random_unit(p, rng) * PadicNumber.from_int(p, p) ** rng.randint(-1, 1)
    factors.insert(rng.randrange(len(factors) + 1), [[a, zero], [zero, one / a]])
    for f in factors:
        m = [
            [m[0][0] * f[0][0] + m[0][1] * f[1][0], m[0][0] * f[0][1] + m[0][1] * f[1][1]],
            [m[1][0] * f[0][0] + m[1][1] * f[1][0], m[1][0] * f[0][1] + m[1][1] * f[1][1]],
        ]
    return m

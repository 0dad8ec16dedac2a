"""Projective cone, chart over a null direction, induced conformal pairing."""

import random

import pytest

from padicgroups.conformal import (
    ConeMembership,
    ProjPoint,
    act_on_projective,
    chart_J,
    chart_J_inv,
    chart_escape_witness,
    cone_membership,
    induced_form,
    intertwine_check,
    stabilizes_chart,
    swap_pq_isometry,
)
from padicgroups.errors import NotInChart, NotTangent, WitnessSearchExhausted, ZeroInput
from padicgroups.padic import PadicNumber, eq_within
from padicgroups.poincare import (
    NullDecomposition,
    PartialConfElt,
    PoincareElt,
    embed_h,
    embed_partial,
)
from padicgroups.quadspace import QuadSpace
from padicgroups.sampling import random_rotation, random_scalar, random_vector

PRIMES = (2, 3, 5, 7)


def _decomp(p, diag=(1, -1, 3)):
    return NullDecomposition.from_wspace(QuadSpace(p, list(diag)))


def _random_poincare(dec, rng):
    return PoincareElt(dec, random_vector(dec.w_space, rng), random_rotation(dec.w_space, rng))


# -- projective points -------------------------------------------------------


def test_projective_normalization_and_equality():
    space = QuadSpace(5, [1, -1, 2])
    x = ProjPoint(space, [2, 4, 6])
    y = ProjPoint(space, [1, 2, 3])
    assert x == y
    assert x.coords[2] == PadicNumber.one(5)
    z = ProjPoint(space, [3, 0, 0])
    assert z.coords[0] == PadicNumber.one(5)
    assert not (x == z)


def test_projective_rejects_zero():
    space = QuadSpace(5, [1, -1, 2])
    with pytest.raises(ZeroInput):
        ProjPoint(space, [0, 0, 0])


def test_cone_membership_values():
    space = QuadSpace(7, [1, -1, 1])
    on = cone_membership(ProjPoint(space, [1, 1, 0]))
    off = cone_membership(ProjPoint(space, [1, 0, 1]))
    assert on.on_cone and bool(on)
    assert not off.on_cone
    assert off.value == PadicNumber.from_int(2, 7)


# -- chart and its inverse ---------------------------------------------------


@pytest.mark.parametrize("p", PRIMES)
def test_chart_round_trip(p):
    dec = _decomp(p)
    rng = random.Random(200 + p)
    for _ in range(20):
        w = random_vector(dec.w_space, rng)
        x = chart_J(dec, w)
        assert cone_membership(x).on_cone
        assert chart_J_inv(dec, x) == w


def test_chart_base_points():
    dec = _decomp(5)
    # the origin of W lands on [q]; [p] itself stays outside the chart
    assert chart_J(dec, dec.w_space.zero_vector()) == ProjPoint.from_vector(dec.q_vec)
    with pytest.raises(NotInChart):
        chart_J_inv(dec, ProjPoint.from_vector(dec.p_vec))


def test_chart_inverse_rescales():
    dec = _decomp(3)
    rng = random.Random(6)
    w = random_vector(dec.w_space, rng)
    x = chart_J(dec, w)
    scaled = ProjPoint(dec.block_space, [3 * c for c in x.rep.coords])
    assert chart_J_inv(dec, scaled) == w


# -- equivariance ------------------------------------------------------------


@pytest.mark.parametrize("p", PRIMES)
def test_chart_intertwines_affine_action(p):
    dec = _decomp(p)
    rng = random.Random(220 + p)
    for _ in range(20):
        elt = _random_poincare(dec, rng)
        w = random_vector(dec.w_space, rng)
        assert intertwine_check(dec, elt, w)


def test_act_on_projective_is_projective():
    dec = _decomp(5)
    rng = random.Random(7)
    g = embed_h(dec, _random_poincare(dec, rng))
    w = random_vector(dec.w_space, rng)
    x = chart_J(dec, w)
    y = ProjPoint(dec.block_space, [5 * c for c in x.rep.coords])
    assert act_on_projective(g, x) == act_on_projective(g, y)


# -- induced conformal structure ---------------------------------------------


def _tangent_at(space, x, rng):
    p = space.prime
    y1 = space.vector([random_scalar(p, rng, True) for _ in range(space.dim)])
    y2 = space.vector([random_scalar(p, rng, True) for _ in range(space.dim)])
    return space.bilinear(x, y2) * y1 - space.bilinear(x, y1) * y2


@pytest.mark.parametrize("p", PRIMES)
def test_induced_form_well_defined_mod_base_line(p):
    dec = _decomp(p)
    rng = random.Random(240 + p)
    bs = dec.block_space
    for _ in range(10):
        x = chart_J(dec, random_vector(dec.w_space, rng)).rep
        t1, t2 = _tangent_at(bs, x, rng), _tangent_at(bs, x, rng)
        val = induced_form(x, t1, t2)
        c = random_scalar(p, rng)
        assert induced_form(x, t1 + c * x, t2) == val
        assert induced_form(x, t1, t2 + c * x) == val


@pytest.mark.parametrize("p", PRIMES)
def test_induced_form_scales_by_lambda_squared(p):
    dec = _decomp(p)
    rng = random.Random(260 + p)
    bs = dec.block_space
    for _ in range(10):
        x = chart_J(dec, random_vector(dec.w_space, rng)).rep
        t1, t2 = _tangent_at(bs, x, rng), _tangent_at(bs, x, rng)
        lam = random_scalar(p, rng)
        lhs = induced_form(lam * x, lam * t1, lam * t2)
        assert eq_within(lhs, lam * lam * induced_form(x, t1, t2))


def test_induced_form_rejects_non_tangent():
    dec = _decomp(5)
    x = chart_J(dec, dec.w_space.zero_vector()).rep
    # p pairs to 1 with q = x, so it is not tangent there
    with pytest.raises(NotTangent):
        induced_form(x, dec.p_vec, dec.p_vec)


def test_induced_form_needs_cone_base():
    dec = _decomp(5)
    off = dec.block_space.vector([0, 0, 1, 0, 0])
    with pytest.raises(ZeroInput):
        induced_form(off, dec.p_vec, dec.p_vec)


# -- chart stabilizer --------------------------------------------------------


@pytest.mark.parametrize("p", PRIMES)
def test_embedded_elements_stabilize_chart(p):
    dec = _decomp(p)
    rng = random.Random(280 + p)
    for _ in range(5):
        elt = PartialConfElt(
            dec, random_scalar(p, rng), random_vector(dec.w_space, rng), random_rotation(dec.w_space, rng)
        )
        assert stabilizes_chart(dec, embed_partial(dec, elt), rng) is True


@pytest.mark.parametrize("p", PRIMES)
def test_swap_leaves_chart_and_witness_escapes(p):
    dec = _decomp(p)
    rng = random.Random(300 + p)
    sw = swap_pq_isometry(dec)
    assert stabilizes_chart(dec, sw, rng) is False
    wit = chart_escape_witness(dec, sw, rng)
    assert cone_membership(wit).on_cone
    assert sw.apply(wit.rep).coords[1].is_zero


def test_exhausted_escape_search_is_loud_but_survivable():
    # the identity stabilizes the chart, so no witness exists; the search
    # must exhaust rather than fabricate one
    dec = _decomp(5)
    rng = random.Random(8)
    from padicgroups.orthogonal import Isometry

    with pytest.raises(WitnessSearchExhausted):
        chart_escape_witness(dec, Isometry.identity(dec.block_space), rng, attempts=10)

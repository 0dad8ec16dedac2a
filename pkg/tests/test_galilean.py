"""Galilean group, dual orbits, boost cocycle, and multipliers."""

import random
from fractions import Fraction

import pytest

from padicgroups.errors import InvalidBaseMultiplier, ZeroTau, ZeroXi
from padicgroups.galilean import (
    DualPoint,
    GalileanElt,
    RElt,
    act_spacetime,
    affine_action,
    affine_orbit_witness,
    base_point,
    coboundary,
    cocycle_check,
    dual_action,
    invariant_M,
    invariant_N,
    invariant_skew_dimension,
    level_point,
    level_set_action,
    level_time,
    mu_tau,
    multiplier_check,
    multiplier_restrictions,
    ordinary_orbit_witness,
    theta_tau,
)
from padicgroups.padic import PadicNumber, Phase, eq_within, psi
from padicgroups.quadspace import QuadSpace
from padicgroups.sampling import (
    random_dual_point,
    random_galilean,
    random_relt,
    random_scalar,
    random_translation,
    random_vector,
)

PRIMES = (2, 3, 5, 7)


def _v0(p, diag=(1, -1, 1)):
    return QuadSpace(p, list(diag))


# -- group structure ----------------------------------------------------------


@pytest.mark.parametrize("p", PRIMES)
def test_group_law_associative_with_inverses(p):
    v0 = _v0(p)
    rng = random.Random(320 + p)
    for _ in range(10):
        a, b, c = (random_galilean(v0, rng) for _ in range(3))
        assert a.mul(b).mul(c) == a.mul(b.mul(c))
        assert a.mul(a.inverse()) == GalileanElt.identity(v0)
        assert a.inverse().mul(a) == GalileanElt.identity(v0)


def test_isotropy_constructor_guard():
    # an anisotropic V_0 admits no light cone to speak of; the samplers and
    # witnesses assume represented values, so the guard lives in the tests
    space = QuadSpace(5, [1, -1, 1])
    assert space.witt_index >= 1


@pytest.mark.parametrize("p", PRIMES)
def test_spacetime_action_composes(p):
    v0 = _v0(p)
    rng = random.Random(340 + p)
    for _ in range(10):
        g, h = random_galilean(v0, rng), random_galilean(v0, rng)
        x, t = random_vector(v0, rng), random_scalar(p, rng, True)
        x1, t1 = act_spacetime(h, x, t)
        lhs = act_spacetime(g, x1, t1)
        rhs = act_spacetime(g.mul(h), x, t)
        assert lhs[0] == rhs[0] and lhs[1] == rhs[1]


def test_translations_translate():
    v0 = _v0(5)
    g = GalileanElt.translation(v0, v0.basis_vector(0), 3)
    x, t = act_spacetime(g, v0.zero_vector(), 0)
    assert x == v0.basis_vector(0)
    assert t == PadicNumber.from_int(3, 5)


# -- dual action ----------------------------------------------------------------


@pytest.mark.parametrize("p", PRIMES)
def test_dual_action_preserves_pairing(p):
    v0 = _v0(p)
    rng = random.Random(360 + p)
    for _ in range(10):
        r = random_relt(v0, rng)
        chi = random_dual_point(v0, rng)
        u, eta = random_vector(v0, rng), random_scalar(p, rng, True)
        un, en = r.act_translation(u, eta)
        assert dual_action(r, chi).pair(un, en) == chi.pair(u, eta)


def test_dual_action_is_left_action():
    v0 = _v0(7)
    rng = random.Random(10)
    for _ in range(10):
        r, rp = random_relt(v0, rng), random_relt(v0, rng)
        chi = random_dual_point(v0, rng)
        assert dual_action(r.mul(rp), chi) == dual_action(r, dual_action(rp, chi))


# -- boost cocycle ----------------------------------------------------------------


@pytest.mark.parametrize("p", PRIMES)
def test_theta_is_a_cocycle(p):
    v0 = _v0(p)
    rng = random.Random(380 + p)
    for tau in (0, 1, p, random_scalar(p, rng)):
        assert cocycle_check(v0, lambda r: theta_tau(tau, r), 25, rng)


def test_coboundary_passes_and_constant_fails():
    v0 = _v0(5)
    rng = random.Random(11)
    chi = random_dual_point(v0, rng)
    assert cocycle_check(v0, coboundary(v0, chi), 25, rng)
    const = DualPoint(v0, v0.basis_vector(0), 1)
    assert not cocycle_check(v0, lambda r: const, 25, rng)


def test_theta_additive_in_tau():
    v0 = _v0(3)
    rng = random.Random(12)
    for _ in range(10):
        t1, t2 = random_scalar(3, rng), random_scalar(3, rng)
        r = random_relt(v0, rng)
        assert theta_tau(t1 + t2, r) == theta_tau(t1, r) + theta_tau(t2, r)


# -- affine orbits ----------------------------------------------------------------


@pytest.mark.parametrize("p", PRIMES)
def test_affine_action_law_and_invariant(p):
    v0 = _v0(p)
    rng = random.Random(400 + p)
    tau = random_scalar(p, rng)
    for _ in range(10):
        r, rp = random_relt(v0, rng), random_relt(v0, rng)
        chi = random_dual_point(v0, rng)
        assert affine_action(tau, r.mul(rp), chi) == affine_action(
            tau, r, affine_action(tau, rp, chi)
        )
        assert eq_within(invariant_M(tau, affine_action(tau, r, chi)), invariant_M(tau, chi))


@pytest.mark.parametrize("p", PRIMES)
def test_affine_orbit_witness_certifies(p):
    v0 = _v0(p)
    rng = random.Random(420 + p)
    tau = random_scalar(p, rng)
    for _ in range(15):
        chi = random_dual_point(v0, rng)
        w = affine_orbit_witness(tau, chi)
        start = base_point(tau, invariant_M(tau, chi), v0)
        assert affine_action(tau, w, start) == chi


def test_base_point_hits_value():
    v0 = _v0(5)
    rng = random.Random(13)
    for _ in range(10):
        tau, a = random_scalar(5, rng), random_scalar(5, rng, True)
        assert invariant_M(tau, base_point(tau, a, v0)) == a


def test_invariants_refuse_zero_tau():
    v0 = _v0(5)
    chi = DualPoint(v0, v0.basis_vector(0), 1)
    with pytest.raises(ZeroTau):
        invariant_M(0, chi)
    with pytest.raises(ZeroTau):
        affine_orbit_witness(0, chi)


# -- multiplier ----------------------------------------------------------------


@pytest.mark.parametrize("p", PRIMES)
def test_mu_is_a_multiplier(p):
    v0 = _v0(p)
    rng = random.Random(440 + p)
    for tau in (0, 1, random_scalar(p, rng)):
        assert multiplier_check(v0, lambda g, h: mu_tau(tau, g, h), 20, rng)


def test_trivial_multiplier_passes_and_noise_fails():
    v0 = _v0(5)
    rng = random.Random(14)
    assert multiplier_check(v0, lambda g, h: Phase(), 20, rng)

    def noise(g, h):
        # breaks associativity bookkeeping: depends only on one factor
        return psi(1 / (5 * (1 + g.eta * g.eta)))

    assert not multiplier_check(v0, noise, 20, rng)


def test_mu_vanishes_on_translations():
    v0 = _v0(7)
    rng = random.Random(15)
    tau = random_scalar(7, rng)
    for _ in range(15):
        s, sp = random_translation(v0, rng), random_translation(v0, rng)
        assert mu_tau(tau, s, sp) == Phase()
        assert mu_tau(tau, s, random_galilean(v0, rng)) == Phase()


@pytest.mark.parametrize("p", PRIMES)
def test_multiplier_restrictions_report(p):
    v0 = _v0(p)
    rng = random.Random(460 + p)
    tau = random_scalar(p, rng)
    rep = multiplier_restrictions(v0, lambda w1, w2: Phase(), tau, rng, samples=15)
    assert rep["translation_translation_trivial"]
    assert rep["translation_group_trivial"]
    assert rep["group_translation_nontrivial"] is True
    assert rep["multiplier_identity_holds"]
    assert "witness" in rep


def test_multiplier_restrictions_tau_zero():
    v0 = _v0(5)
    rng = random.Random(16)
    rep = multiplier_restrictions(v0, lambda w1, w2: Phase(), 0, rng, samples=10)
    assert rep["group_translation_nontrivial"] is False


def test_invalid_base_multiplier_rejected():
    v0 = _v0(5)
    rng = random.Random(17)
    bad = lambda w1, w2: Phase(Fraction(1, 3))
    with pytest.raises(InvalidBaseMultiplier):
        multiplier_restrictions(v0, bad, 1, rng, samples=5)


# -- ordinary orbits ----------------------------------------------------------------


@pytest.mark.parametrize("p", PRIMES)
def test_ordinary_invariant_and_witness(p):
    v0 = _v0(p)
    rng = random.Random(480 + p)
    for _ in range(15):
        chi = random_dual_point(v0, rng, nonzero_xi=True)
        r = random_relt(v0, rng)
        assert eq_within(invariant_N(dual_action(r, chi)), invariant_N(chi))
        w = ordinary_orbit_witness(chi)
        assert dual_action(w, DualPoint(v0, chi.xi, 0)) == chi


def test_ordinary_witness_needs_nonzero_xi():
    v0 = _v0(5)
    with pytest.raises(ZeroXi):
        ordinary_orbit_witness(DualPoint(v0, v0.zero_vector(), 1))


# -- level sets ----------------------------------------------------------------


@pytest.mark.parametrize("p", PRIMES)
def test_level_action_independent_of_level(p):
    v0 = _v0(p)
    rng = random.Random(500 + p)
    tau = random_scalar(p, rng)
    for _ in range(10):
        xi = random_vector(v0, rng)
        a1, a2 = random_scalar(p, rng, True), random_scalar(p, rng, True)
        r = random_relt(v0, rng)
        out = level_set_action(tau, r, xi)
        c1 = affine_action(tau, r, level_point(tau, a1, xi))
        c2 = affine_action(tau, r, level_point(tau, a2, xi))
        assert c1.xi == out and c2.xi == out
        assert eq_within(c1.t, level_time(tau, a1, out))
        assert eq_within(c2.t, level_time(tau, a2, out))


def test_phase_on_level_factors_through_level_value():
    v0 = _v0(5)
    rng = random.Random(18)
    tau = random_scalar(5, rng)
    for _ in range(10):
        xi, u = random_vector(v0, rng), random_vector(v0, rng)
        a = random_scalar(5, rng, True)
        eta = random_scalar(5, rng, True)
        lhs = psi(v0.bilinear(u, xi) + eta * level_time(tau, a, xi))
        rhs = psi(eta * a / (4 * tau)) + psi(v0.bilinear(u, xi) - eta * v0.q(xi) / (4 * tau))
        assert lhs == rhs


# -- skew rigidity ----------------------------------------------------------------


@pytest.mark.parametrize("p", PRIMES)
@pytest.mark.parametrize("dim", (2, 3, 4))
def test_no_invariant_skew_forms(p, dim):
    v0 = QuadSpace(p, [1, -1, 1, -1][:dim])
    rng = random.Random(520 + 10 * p + dim)
    assert invariant_skew_dimension(v0, rng) == 0

import itertools
import random
from fractions import Fraction

import pytest

from padicgroups import linalg
from padicgroups.errors import (
    DegenerateForm,
    DegenerateRestriction,
    NotNull,
    NotRepresented,
    ZeroInput,
)
from padicgroups.padic import PadicNumber
from padicgroups.quadspace import (
    BilinearSpace,
    QuadSpace,
    diagonalize,
    hyperbolic_pair,
    is_isotropic,
    isometric,
    isotropic_vector,
    orthogonal_complement,
    represent,
    witt_decompose,
    witt_equivalent,
)

from oracles import isotropic_by_enumeration

PRIMES = (2, 3, 5, 7)


def census_entries(p):
    pool = [1, -1, 2, -2, 3, -3] if p == 2 else [1, -1, 2, -2, p, -p]
    spaces = []
    for dim in (1, 2, 3):
        spaces += list(itertools.combinations_with_replacement(pool, dim))
    rng = random.Random(471 + p)
    spaces += [tuple(rng.choice(pool) for _ in range(4)) for _ in range(40)]
    return spaces


# -- linalg sanity ---------------------------------------------------------


def test_inverse_and_det():
    rng = random.Random(7)
    for p in PRIMES:
        done = 0
        while done < 8:
            n = rng.randint(1, 4)
            a = [
                [PadicNumber.from_int(rng.randint(-20, 20), p) for _ in range(n)]
                for _ in range(n)
            ]
            if linalg.det(a).is_zero:
                continue
            inv = linalg.inverse(a)
            assert linalg.mat_eq(linalg.mat_mul(a, inv), linalg.identity(n, p))
            done += 1


def test_nullspace_solves():
    p = 5
    rows = [[PadicNumber.from_int(c, p) for c in (1, 2, 3, 4)],
            [PadicNumber.from_int(c, p) for c in (0, 1, 1, 0)]]
    basis = linalg.nullspace(rows, 4, p)
    assert len(basis) == 2
    for vec in basis:
        for row in rows:
            acc = PadicNumber.zero(p)
            for a, b in zip(row, vec):
                acc = acc + a * b
            assert acc.is_zero


# -- spot values -----------------------------------------------------------


def test_sum_of_two_squares_over_q5_is_isotropic():
    space = QuadSpace(5, [1, 1])
    assert is_isotropic(space) is True
    assert isotropic_by_enumeration([1, 1], 5) is True
    w = isotropic_vector(space)
    assert not w.is_zero and space.q(w).is_zero


def test_sum_of_four_squares_spot_values():
    assert is_isotropic(QuadSpace(2, [1, 1, 1, 1])) is False
    for p in (3, 5, 7):
        assert is_isotropic(QuadSpace(p, [1, 1, 1, 1])) is True


def test_unit_times_p_plane_is_anisotropic(prime):
    assert is_isotropic(QuadSpace(prime, [1, prime])) is False
    assert is_isotropic(QuadSpace(prime, [1, -1])) is True


def test_census_matches_enumeration(prime):
    for entries in census_entries(prime):
        space = QuadSpace(prime, list(entries))
        expected = isotropic_by_enumeration(list(entries), prime)
        assert is_isotropic(space) == expected, entries
        if expected:
            w = isotropic_vector(space)
            assert not w.is_zero
            assert space.q(w).is_zero, entries


def test_rational_entries_reduce_like_integers():
    space = QuadSpace(3, [Fraction(2, 9), Fraction(-1, 2)])
    # scaling by squares (9 and 4) does not change any verdict
    assert is_isotropic(space) == is_isotropic(QuadSpace(3, [2, -2]))


# -- witt machinery --------------------------------------------------------


def sample_entries(prime, count, seed):
    rng = random.Random(seed)
    pool = [1, -1, 2, -2, 3, -3] if prime == 2 else [1, -1, 2, -2, prime, -prime]
    return [
        [rng.choice(pool) for _ in range(rng.randint(1, 5))] for _ in range(count)
    ]


def test_witt_decompose_certifies_and_matches_invariants(prime):
    for entries in sample_entries(prime, 12, 911 + prime):
        space = QuadSpace(prime, entries)
        dec = witt_decompose(space)
        assert dec.index == space.witt_index
        assert not is_isotropic(dec.kernel)
        for e, f in dec.pairs:
            assert space.q(e).is_zero and space.q(f).is_zero
            assert space.bilinear(e, f) == 1


def test_hyperbolic_gram_diagonalizes_to_split_plane(prime):
    h = BilinearSpace(prime, [[0, 1], [1, 0]])
    space, change = diagonalize(h)
    assert linalg.mat_eq(linalg.congruent(change, h.gram), space.gram)
    assert space.witt_index == 1
    assert witt_equivalent(space, QuadSpace(prime, [2, Fraction(-1, 2)]))
    assert witt_equivalent(space, QuadSpace(prime, [1, -1]))


def test_witt_equivalence_ignores_split_planes(prime):
    base = QuadSpace(prime, [1, 2])
    padded = QuadSpace(prime, [1, 2, 1, -1])
    assert witt_equivalent(base, padded)
    assert not isometric(base, padded)
    assert isometric(base, QuadSpace(prime, [2, 1]))


def test_diagonalize_random_grams(prime):
    rng = random.Random(1300 + prime)
    done = 0
    while done < 6:
        n = rng.randint(2, 4)
        m = [[rng.randint(-9, 9) for _ in range(n)] for _ in range(n)]
        g = [[m[i][j] + m[j][i] for j in range(n)] for i in range(n)]
        try:
            space = BilinearSpace(prime, g)
        except DegenerateForm:
            continue
        diag, change = diagonalize(space)
        assert linalg.mat_eq(linalg.congruent(change, space.gram), diag.gram)
        done += 1


# -- represent / pairs / complements ---------------------------------------


def test_represent_census(prime):
    rng = random.Random(2400 + prime)
    pool = [1, -1, 2, -2, 3, -3] if prime == 2 else [1, -1, 2, -2, prime, -prime]
    for entries in sample_entries(prime, 10, 37 + prime):
        space = QuadSpace(prime, entries)
        a = rng.choice(pool)
        if isotropic_by_enumeration(entries + [-a], prime):
            x = represent(space, a)
            assert space.q(x) == a
        else:
            with pytest.raises(NotRepresented):
                represent(space, a)


def test_hyperbolic_pair_properties(prime):
    space = QuadSpace(prime, [1, -1, 2, prime])
    w = isotropic_vector(space)
    q = hyperbolic_pair(space, w)
    assert space.q(q).is_zero
    assert space.bilinear(w, q) == 1
    with pytest.raises(NotNull):
        hyperbolic_pair(space, space.basis_vector(0))
    with pytest.raises(ZeroInput):
        hyperbolic_pair(space, space.zero_vector())


def test_orthogonal_complement_of_pair(prime):
    space = QuadSpace(prime, [1, -1, 2, prime])
    w = isotropic_vector(space)
    q = hyperbolic_pair(space, w)
    vectors, sub = orthogonal_complement(space, [w, q])
    assert sub.dim == 2
    for i, v in enumerate(vectors):
        assert space.bilinear(v, w).is_zero
        assert space.bilinear(v, q).is_zero
        assert space.q(v) == sub.diag[i]
    # splitting one plane drops the Witt index by exactly one
    assert space.witt_index == 1 + sub.witt_index


def test_complement_of_null_line_is_degenerate(prime):
    space = QuadSpace(prime, [1, -1])
    w = isotropic_vector(space)
    with pytest.raises(DegenerateRestriction):
        orthogonal_complement(space, [w])


def test_degenerate_inputs_rejected(prime):
    with pytest.raises(DegenerateForm):
        QuadSpace(prime, [1, 0])
    with pytest.raises(DegenerateForm):
        BilinearSpace(prime, [[1, 0], [0, 0]])
    with pytest.raises(ValueError):
        isotropic_vector(QuadSpace(prime, [1, prime]))

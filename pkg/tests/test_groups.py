import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import transwidth as tw
from transwidth.errors import DimError, NonIsometry, OrbitOverflow, UnsupportedVirtual, WrongKind
from transwidth.groups import group_from_json, group_to_json, rotation_group

S2 = 1 / math.sqrt(2)


def _as_set(points, decimals=9):
    return {tuple(np.round(np.real_if_close(p), decimals) + 0.0) for p in points}


def test_rotation_orbit():
    X = tw.orbit_enumerate(rotation_group(4), [1.0, 0.0])
    assert _as_set(X.points) == {(1, 0), (0, 1), (-1, 0), (0, -1)}


def test_s3_coordinate_orbit():
    X = tw.orbit_enumerate(tw.permutation_group(3), [1.0, 0, 0])
    assert _as_set(X.points) == {(1, 0, 0), (0, 1, 0), (0, 0, 1)}


def test_signed_permutation_orbit_d2():
    X = tw.orbit_enumerate(tw.signed_permutation_group(2), [S2, S2])
    assert len(X) == 4
    assert _as_set(X.points) == _as_set(np.array([(a, b) for a in (S2, -S2) for b in (S2, -S2)]))


def test_orbit_sizes():
    v = np.array([3.0, 2.0, 1.0]) / math.sqrt(14)
    assert len(tw.orbit_enumerate(tw.permutation_group(3), v)) == 6
    assert len(tw.orbit_enumerate(tw.signed_permutation_group(3), v)) == 48
    assert len(tw.orbit_enumerate(tw.signed_permutation_group(4), [1.0, 0, 0, 0])) == 8


def test_orbit_overflow_and_errors():
    with pytest.raises(OrbitOverflow):
        tw.orbit_enumerate(tw.signed_permutation_group(4), np.full(4, 0.5) * [1, 2, 3, 4] / math.sqrt(7.5), max_size=10)
    with pytest.raises(DimError):
        tw.orbit_enumerate(tw.permutation_group(3), [1.0, 0.0])
    with pytest.raises(NonIsometry):
        tw.explicit_group([[[1.0, 1.0], [0.0, 1.0]]])
    with pytest.raises(WrongKind):
        tw.monomial_group(3).generator_matrices()


def test_group_json_roundtrip():
    g = rotation_group(6)
    back = group_from_json(group_to_json(g))
    np.testing.assert_allclose(back.generators[0], g.generators[0])
    assert group_from_json(group_to_json(tw.monomial_group(5))).kind == "monomial_full"


def test_sup_correlation_examples():
    sq = tw.square_set()
    assert tw.sup_correlation(sq, np.array([1.0, 0.0])) == pytest.approx(1.0)
    X = tw.virtual_set(tw.monomial_group(3), [1.0, 0, 0])
    assert tw.sup_correlation(X, np.array([0.6, 0.8, 0.0])) == pytest.approx(0.8, abs=1e-12)
    Y = tw.virtual_set(tw.monomial_group(2), [S2, S2])
    assert tw.sup_correlation(Y, np.array([1.0, 0.0])) == pytest.approx(S2, abs=1e-12)


def test_gamma3_example_against_signed_enumeration():
    v, w = np.array([1.0, 0, 0]), np.array([0.6, 0.8, 0.0])
    best = 0.0
    for perm in itertools.permutations(range(3)):
        for signs in itertools.product((1, -1), repeat=3):
            best = max(best, abs(np.dot(np.array(signs) * v[list(perm)], w)))
    assert best == pytest.approx(0.8)


@given(st.integers(2, 5), st.integers(0, 2 ** 32 - 1))
@settings(max_examples=40, deadline=None)
def test_virtual_matches_enumerated_signed_permutation(d, seed):
    rng = np.random.default_rng(seed)
    v = rng.standard_normal(d)
    v /= np.linalg.norm(v)
    W = rng.standard_normal((5, d))
    g = tw.signed_permutation_group(d)
    virt = tw.sup_correlation_many(tw.virtual_set(g, v), W)
    expl = tw.sup_correlation_many(tw.orbit_enumerate(g, v), W)
    np.testing.assert_allclose(virt, expl, atol=1e-12)


@given(st.integers(2, 5), st.integers(0, 2 ** 32 - 1))
@settings(max_examples=40, deadline=None)
def test_virtual_matches_enumerated_permutation(d, seed):
    rng = np.random.default_rng(seed)
    v = rng.standard_normal(d)
    v /= np.linalg.norm(v)
    W = rng.standard_normal((5, d))
    g = tw.permutation_group(d)
    virt = tw.sup_correlation_many(tw.virtual_set(g, v), W)
    expl = tw.sup_correlation_many(tw.orbit_enumerate(g, v), W)
    np.testing.assert_allclose(virt, expl, atol=1e-12)


def test_complex_signed_permutation_uses_enumeration():
    rng = np.random.default_rng(1)
    v = rng.standard_normal(3) + 1j * rng.standard_normal(3)
    v /= np.linalg.norm(v)
    w = rng.standard_normal(3) + 1j * rng.standard_normal(3)
    g = tw.signed_permutation_group(3, field="complex")
    virt = tw.sup_correlation(tw.virtual_set(g, v), w)
    expl = tw.sup_correlation(tw.orbit_enumerate(g, v), w)
    assert virt == pytest.approx(expl, abs=1e-12)
    with pytest.raises(UnsupportedVirtual):
        tw.sup_correlation(tw.virtual_set(tw.signed_permutation_group(9, "complex"), np.eye(9)[0] * 1j), np.ones(9))


def test_explicit_virtual_set_unsupported():
    X = tw.virtual_set(rotation_group(4), [1.0, 0.0])
    with pytest.raises(UnsupportedVirtual):
        tw.sup_correlation(X, np.array([1.0, 0.0]))


def test_sorted_profile_examples():
    d = 5
    assert np.array_equal(tw.sorted_profile(tw.basis_set(d)), np.eye(d)[0])
    np.testing.assert_allclose(tw.sorted_profile(tw.hypercube_set(d)), np.full(d, 1 / math.sqrt(d)))
    with pytest.raises(WrongKind):
        tw.sorted_profile(tw.square_set())


def test_sharpness_seed():
    assert np.array_equal(tw.sharpness_set(1).seed_vector, [1.0])
    np.testing.assert_allclose(tw.sharpness_set(2).seed_vector, [0.8164965809, 0.5773502692], atol=1e-10)
    assert np.linalg.norm(tw.sharpness_set(4).seed_vector) == pytest.approx(1.0, abs=1e-15)


def test_simplex_is_regular():
    X = tw.simplex_set(4)
    G = X.points @ X.points.T
    off = G[~np.eye(5, dtype=bool)]
    np.testing.assert_allclose(off, -1 / 4, atol=1e-12)
    np.testing.assert_allclose(X.points.sum(axis=0), 0, atol=1e-12)


def test_explicit_set_rejects_duplicates():
    with pytest.raises(DimError):
        tw.explicit_set([[1.0, 0.0], [1.0, 0.0]])

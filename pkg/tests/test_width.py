import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import transwidth as tw
from transwidth.errors import DegenerateWitness, WrongKind
from transwidth.groups import harmonic
from transwidth.width import _values_and_subgradients, angle_sweep

S2 = 1 / math.sqrt(2)
FAST = tw.SolverConfig(restarts=16, max_iters=600, seed=0)


def test_square_orbit():
    rep = tw.width_report(tw.square_set(), FAST)
    assert rep.lower_certificate == "sweep2d"
    assert rep.upper == pytest.approx(S2, abs=1e-6)
    assert rep.lower == pytest.approx(S2, abs=1e-6)
    assert rep.details["eig"] == pytest.approx(S2, abs=1e-12)


@pytest.mark.parametrize("d", [3, 4, 6])
def test_basis_orbit_eig_certificate(d):
    X = tw.orbit_enumerate(tw.signed_permutation_group(d), np.eye(d)[0])
    assert tw.width_lower_eig(X) == pytest.approx(1 / math.sqrt(d), abs=1e-12)
    rep = tw.width_report(X, FAST)
    assert rep.lower_certificate == "eig"
    assert rep.upper == pytest.approx(1 / math.sqrt(d), abs=1e-6)
    np.testing.assert_allclose(np.abs(rep.witness), 1 / math.sqrt(d), atol=1e-4)


def test_eig_zero_for_degenerate_span():
    X = tw.explicit_set([[1.0, 0, 0], [-1.0, 0, 0]])
    assert tw.width_lower_eig(X) == pytest.approx(0.0, abs=1e-12)
    rep = tw.width_report(X, FAST)
    assert rep.upper < 1e-8
    assert rep.lower == 0.0


def test_prefix_flat_examples():
    d = 7
    val, _ = tw.width_exact_monomial(tw.basis_set(d))
    assert val == pytest.approx(1 / math.sqrt(d))
    val, w = tw.width_exact_monomial(tw.hypercube_set(d))
    assert val == pytest.approx(1 / math.sqrt(d))
    assert w[0] == 1.0 and np.all(w[1:] == 0)
    val, w = tw.width_exact_monomial(tw.sharpness_set(4))
    assert val == pytest.approx(math.sqrt(12 / 25), abs=1e-12)
    assert val == pytest.approx(0.6928203230, abs=1e-10)
    with pytest.raises(WrongKind):
        tw.width_exact_monomial(tw.square_set())


def test_sharpness_256():
    h = harmonic(256)
    assert h == pytest.approx(6.1243, abs=1e-4)
    rep = tw.width_report(tw.sharpness_set(256), FAST)
    assert rep.lower == pytest.approx(1 / math.sqrt(h), abs=1e-9)
    assert rep.lower == pytest.approx(0.40408, abs=1e-5)
    assert rep.upper <= math.sqrt(tw.psi(256))
    assert rep.lower_certificate == "prefix_flat"


def test_report_sanity_and_json():
    rng = np.random.default_rng(0)
    g = tw.signed_permutation_group(3)
    v = rng.standard_normal(3)
    X = tw.orbit_enumerate(g, v / np.linalg.norm(v))
    rep = tw.width_report(X, FAST)
    assert rep.lower <= rep.upper
    assert tw.sup_correlation(X, rep.witness) == pytest.approx(rep.upper, abs=1e-9)
    js = rep.to_json()
    assert js["lower_certificate"] == "eig" and "coords" in js["witness"]
    assert '"upper"' in rep.dumps()


def test_width_deterministic_in_seed():
    X = tw.simplex_set(5)
    a = tw.width_report(X, FAST)
    b = tw.width_report(X, FAST)
    assert a.upper == b.upper and np.array_equal(a.witness, b.witness)


def test_simplex_bounds():
    X = tw.simplex_set(3)
    rep = tw.width_report(X, FAST)
    assert rep.lower <= rep.upper
    # the eig certificate for a regular simplex is 1/sqrt(d)
    assert rep.lower == pytest.approx(1 / math.sqrt(3), abs=1e-12)


def test_unsupported_virtual_gives_trivial_certificate():
    X = tw.virtual_set(tw.permutation_group(4), np.array([0.1, 0.2, 0.3, 0.9]) / math.sqrt(0.95))
    rep = tw.width_report(X, tw.SolverConfig(restarts=4, max_iters=100))
    assert rep.lower_certificate == "trivial" and rep.lower == 0.0
    assert rep.upper == pytest.approx(tw.sup_correlation(X, rep.witness))


def test_monotonicity_in_points():
    rng = np.random.default_rng(4)
    P = rng.standard_normal((10, 4))
    P /= np.linalg.norm(P, axis=1, keepdims=True)
    small, big = tw.explicit_set(P[:5]), tw.explicit_set(P)
    for _ in range(20):
        w = rng.standard_normal(4)
        w /= np.linalg.norm(w)
        assert tw.sup_correlation(big, w) >= tw.sup_correlation(small, w)


def test_unitary_conjugation_invariance():
    rng = np.random.default_rng(5)
    P = np.array(tw.orbit_enumerate(tw.signed_permutation_group(3), [0.8, 0.6, 0.0]).points)
    Q, _ = np.linalg.qr(rng.standard_normal((3, 3)))
    a = tw.width_report(tw.explicit_set(P), FAST)
    b = tw.width_report(tw.explicit_set(P @ Q.T), FAST)
    assert a.upper == pytest.approx(b.upper, abs=1e-6)
    # the rotated witness is optimal for the rotated set
    assert tw.sup_correlation(tw.explicit_set(P @ Q.T), Q @ a.witness) == pytest.approx(a.upper, abs=1e-9)


@given(st.integers(0, 2 ** 32 - 1))
@settings(max_examples=25, deadline=None)
def test_subgradient_matches_finite_differences(seed):
    rng = np.random.default_rng(seed)
    d = 5
    v = rng.standard_normal(d)
    X_virtual = tw.virtual_set(tw.signed_permutation_group(d), v / np.linalg.norm(v))
    X_explicit = tw.orbit_enumerate(tw.permutation_group(d), v / np.linalg.norm(v))
    for X in (X_virtual, X_explicit):
        w = rng.standard_normal(d)
        w /= np.linalg.norm(w)
        val, G = _values_and_subgradients(X, w[None, :])
        h = 1e-7
        for k in range(d):
            e = np.zeros(d)
            e[k] = h
            fd = (tw.sup_correlation(X, w + e) - tw.sup_correlation(X, w - e)) / (2 * h)
            # generic points are differentiable: the subgradient is the gradient
            assert fd == pytest.approx(G[0, k], abs=1e-5)
        assert val[0] == pytest.approx(tw.sup_correlation(X, w))


def test_angle_sweep_is_tight():
    lower, best, w = angle_sweep(tw.square_set(), n_angles=10_000)
    assert lower <= best
    assert best - lower <= 1e-9
    assert best == pytest.approx(S2, abs=1e-9)


def test_real_witness_from_complex():
    X = tw.square_set()
    w = np.array([1j, 0])
    r = tw.real_witness_from_complex(w, X)
    np.testing.assert_allclose(r, [1.0, 0.0])
    assert tw.sup_correlation(X, r) == pytest.approx(tw.sup_correlation(X, w))
    real = np.array([0.6, 0.8])
    assert np.array_equal(tw.real_witness_from_complex(real, X), real)
    with pytest.raises(DegenerateWitness):
        tw.real_witness_from_complex(np.zeros(2, complex), X)


@given(st.integers(2, 6), st.integers(0, 2 ** 32 - 1))
@settings(max_examples=50, deadline=None)
def test_real_witness_loss_at_most_sqrt2(d, seed):
    rng = np.random.default_rng(seed)
    v = rng.standard_normal(d)
    X = tw.orbit_enumerate(tw.signed_permutation_group(d) if d <= 4 else tw.permutation_group(d), v / np.linalg.norm(v))
    w = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    w /= np.linalg.norm(w)
    r = tw.real_witness_from_complex(w, X)
    assert tw.sup_correlation(X, r) <= math.sqrt(2) * tw.sup_correlation(X, w) + 1e-9

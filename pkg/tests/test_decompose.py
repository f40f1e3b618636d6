import math

import numpy as np
import pytest

import transwidth as tw
from transwidth.decompose import (
    coordinate_line_system,
    group_closure,
    projector_checksum,
    system_from_bases,
)
from transwidth.errors import NotASystem, OrbitOverflow, WrongKind
from transwidth.groups import rotation_group

S2 = 1 / math.sqrt(2)


def _max_commutator(dec, g):
    return max(float(np.max(np.abs(m @ P - P @ m))) for P in dec.projectors() for m in g.generator_matrices())


@pytest.mark.parametrize("n", [3, 4, 5])
def test_permutation_rep_splits(n):
    g = tw.permutation_group(n)
    dec = tw.reynolds_invariant_subspaces(g, seed=1)
    assert sorted(dec.dims) == [1, n - 1]
    assert _max_commutator(dec, g) <= 1e-8
    one = [b for b in dec.blocks if b.shape[1] == 1][0]
    np.testing.assert_allclose(np.abs(one[:, 0]), 1 / math.sqrt(n), atol=1e-10)


def test_blocks_orthonormal_and_complete():
    dec = tw.reynolds_invariant_subspaces(tw.signed_permutation_group(3), seed=0)
    B = np.hstack(dec.blocks)
    np.testing.assert_allclose(B.conj().T @ B, np.eye(3), atol=1e-9)
    assert sum(dec.dims) == 3


def test_signed_permutations_irreducible():
    dec = tw.reynolds_invariant_subspaces(tw.signed_permutation_group(4), seed=0)
    assert dec.dims == [4]


def test_rotation_over_complex_splits_into_eigenlines():
    dec = tw.reynolds_invariant_subspaces(rotation_group(4), seed=0)
    assert dec.dims == [1, 1]
    rot = rotation_group(4).generators[0]
    for b in dec.blocks:
        u = b[:, 0]
        lam = np.vdot(u, rot @ u)
        assert abs(abs(lam) - 1) < 1e-9 and abs(lam.real) < 1e-9
        assert abs(u[1]) == pytest.approx(S2, abs=1e-9)


def test_trivial_group_gives_lines():
    g = tw.explicit_group([np.eye(3)])
    assert tw.reynolds_invariant_subspaces(g, seed=0).dims == [1, 1, 1]


def test_closure_bound_and_infinite_group():
    with pytest.raises(OrbitOverflow):
        group_closure(tw.signed_permutation_group(4).generator_matrices(), max_size=50)
    with pytest.raises(WrongKind):
        tw.reynolds_invariant_subspaces(tw.monomial_group(3))
    assert len(group_closure(tw.signed_permutation_group(3).generator_matrices())) == 48


def test_checksum_is_seed_independent():
    g = tw.permutation_group(4)
    a = tw.reynolds_invariant_subspaces(g, seed=1)
    b = tw.reynolds_invariant_subspaces(g, seed=2)
    ca = sorted(projector_checksum(P) for P in a.projectors())
    cb = sorted(projector_checksum(P) for P in b.projectors())
    assert ca == cb


def test_coordinate_lines_valid():
    d = 5
    rep = tw.validate_imprimitivity(coordinate_line_system(d), tw.signed_permutation_group(d))
    assert rep.valid
    # generators: swap(0 1), cycle, sign flip; sigma is the underlying permutation
    assert rep.sigma[0] == [1, 0, 2, 3, 4]
    assert rep.sigma[1] == [4, 0, 1, 2, 3]
    assert rep.sigma[2] == list(range(d))
    assert tw.validate_imprimitivity(coordinate_line_system(3), tw.monomial_group(3)).valid


def test_swap_eigenlines_valid():
    sys = system_from_bases([[1.0, 1.0], [1.0, -1.0]])
    rep = tw.validate_imprimitivity(sys, tw.permutation_group(2))
    assert rep.sigma == [[0, 1]]


def test_nonorthogonal_rejected():
    with pytest.raises(NotASystem) as exc:
        tw.validate_imprimitivity(system_from_bases([[1.0, 0.0], [1.0, 1.0]]), tw.permutation_group(2))
    assert exc.value.block == (0, 1)


def test_not_permuted_rejected():
    # coordinate lines are not permuted by a 45 degree rotation
    rot = np.array([[S2, -S2], [S2, S2]])
    with pytest.raises(NotASystem) as exc:
        tw.validate_imprimitivity(coordinate_line_system(2), tw.explicit_group([rot]))
    assert exc.value.generator == 0


def test_wrong_coset_map_rejected():
    lines = coordinate_line_system(3)
    bad = tw.ImprimitivitySystem(lines.blocks, (np.eye(3), np.eye(3), np.eye(3)))
    with pytest.raises(NotASystem):
        tw.validate_imprimitivity(bad, tw.permutation_group(3))


def test_dimension_mismatch_rejected():
    with pytest.raises(NotASystem):
        tw.validate_imprimitivity(system_from_bases([[1.0, 0.0, 0.0]]), tw.permutation_group(3))

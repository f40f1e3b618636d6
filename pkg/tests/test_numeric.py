import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from transwidth import numeric as nm
from transwidth.errors import DimError, DomainError, NonIsometry

S2 = 1 / math.sqrt(2)


@pytest.mark.parametrize("a, b, expected", [
    ((1, 0), (0, 1), 0.0),
    ((1, 0), (1, 0), 1.0),
    ((S2, S2), (1, 0), 0.7071067812),
])
def test_inner_examples(a, b, expected):
    assert nm.inner(np.array(a, float), np.array(b, float)) == pytest.approx(expected, abs=1e-10)


def test_inner_conjugates_second_slot():
    a = np.array([1j, 0])
    b = np.array([1j, 0])
    assert nm.inner(a, b) == pytest.approx(1.0)
    assert nm.inner(a, np.array([1.0, 0])) == pytest.approx(1j)


def test_inner_dimension_mismatch():
    with pytest.raises(DimError):
        nm.inner(np.ones(2), np.ones(3))


def test_sorted_abs_examples():
    assert np.array_equal(nm.sorted_abs([-3, 1, 2]), [3, 2, 1])
    assert np.array_equal(nm.sorted_abs([0, 0]), [0, 0])
    np.testing.assert_allclose(nm.sorted_abs(np.array([1j, -1]) / math.sqrt(2)), [S2, S2])


def test_sorted_abs_batches_rows():
    out = nm.sorted_abs(np.array([[1, -5, 2], [0, 3, -4]]))
    assert np.array_equal(out, [[5, 2, 1], [4, 3, 0]])


def test_unit_vector_checks_norm():
    v = nm.unit_vector([0.6, 0.8])
    assert not v.flags.writeable
    with pytest.raises(DomainError):
        nm.unit_vector([1.0, 1.0])
    with pytest.raises(DimError):
        nm.unit_vector([[1.0]])
    with pytest.raises(DomainError):
        nm.as_vector([np.nan, 1.0])


def test_real_field_rejects_imaginary_parts():
    with pytest.raises(DomainError):
        nm.as_vector([1j, 0], field=nm.REAL)


def test_tolerance_bounds():
    with pytest.raises(DomainError):
        nm.Tolerance(eq_tol=0.0)


def test_haar_d1_real_is_sign():
    draws = nm.haar_sample(1, nm.REAL, 3, 50)
    assert set(np.unique(draws)) <= {-1.0, 1.0}


def test_haar_is_deterministic_and_unit():
    a = nm.haar_sample(7, nm.COMPLEX, 42, 100)
    b = nm.haar_sample(7, nm.COMPLEX, 42, 100)
    assert np.array_equal(a, b)
    np.testing.assert_allclose(np.linalg.norm(a, axis=1), 1.0, atol=1e-14)
    assert not np.array_equal(a, nm.haar_sample(7, nm.COMPLEX, 43, 100))


def test_make_rng_spawn_keys_differ():
    x = nm.make_rng(5, 1).standard_normal(4)
    y = nm.make_rng(5, 2).standard_normal(4)
    assert not np.array_equal(x, y)
    with pytest.raises(DomainError):
        nm.make_rng(-1)


def test_unitarity():
    nm.assert_unitary(np.array([[0, 1], [1, 0]]))
    with pytest.raises(NonIsometry):
        nm.assert_unitary(np.array([[1, 1], [0, 1]]))


@given(st.lists(st.tuples(st.floats(-5, 5), st.floats(-5, 5)), min_size=1, max_size=6))
@settings(max_examples=60, deadline=None)
def test_vector_json_roundtrip(pairs):
    v = np.array([complex(a, b) for a, b in pairs])
    assert np.array_equal(nm.vector_from_json(nm.vector_to_json(v)), v)
    r = v.real.copy()
    back = nm.vector_from_json(nm.vector_to_json(r))
    assert back.dtype == np.float64 and np.array_equal(back, r)


def test_matrix_json_roundtrip():
    m = np.array([[0, 1j], [1j, 0]])
    assert np.array_equal(nm.matrix_from_json(nm.matrix_to_json(m)), m)
    with pytest.raises(NonIsometry):
        nm.matrix_from_json({"field": "real", "rows": [[1, 1], [0, 1]]})

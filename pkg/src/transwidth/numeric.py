"""Vector and matrix foundations shared by every other module.

Vectors are plain numpy arrays: ``float64`` for the real field and
``complex128`` for the complex field. Validated values are returned
read-only so they can be shared freely between threads.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from .errors import DimError, DomainError, NonIsometry

REAL = "real"
COMPLEX = "complex"
FIELDS = (REAL, COMPLEX)

SeedLike = Union[int, np.random.Generator, None]


@dataclass(frozen=True)
class Tolerance:
    eq_tol: float = 1e-9
    orbit_dedup_tol: float = 1e-7

    def __post_init__(self):
        for name in ("eq_tol", "orbit_dedup_tol"):
            val = getattr(self, name)
            if not 0.0 < val < 1.0:
                raise DomainError(f"{name} must lie in (0, 1), got {val}")


DEFAULT_TOL = Tolerance()


def field_of(x) -> str:
    return COMPLEX if np.iscomplexobj(x) else REAL


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, copy=True)
    a.flags.writeable = False
    return a


def as_vector(coords, field: str | None = None) -> np.ndarray:
    """Coerce ``coords`` to a finite 1-d array of the requested field."""
    a = np.asarray(coords)
    if a.ndim != 1 or a.size == 0:
        raise DimError(f"expected a nonempty 1-d vector, got shape {a.shape}")
    if field is None:
        field = field_of(a)
    if field == REAL:
        if np.iscomplexobj(a):
            if np.any(a.imag != 0):
                raise DomainError("real field vector has nonzero imaginary parts")
            a = a.real
        a = a.astype(np.float64)
    elif field == COMPLEX:
        a = a.astype(np.complex128)
    else:
        raise DomainError(f"unknown field {field!r}")
    if not np.all(np.isfinite(a)):
        raise DomainError("vector has non-finite entries")
    return a


def unit_vector(coords, field: str | None = None, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """Validate that ``coords`` has norm one (within ``tol.eq_tol``)."""
    a = as_vector(coords, field)
    n = np.linalg.norm(a)
    if abs(n - 1.0) > tol.eq_tol:
        raise DomainError(f"not a unit vector: norm {n!r}")
    return _frozen(a)


def normalize(x) -> np.ndarray:
    x = np.asarray(x)
    n = np.linalg.norm(x)
    if n == 0:
        raise DomainError("cannot normalize the zero vector")
    return x / n


def inner(a, b) -> complex | float:
    """Inner product, linear in the first slot and conjugate-linear in the second."""
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape != b.shape or a.ndim != 1:
        raise DimError(f"dimension mismatch: {a.shape} vs {b.shape}")
    val = np.sum(a * np.conj(b))
    if np.iscomplexobj(val):
        return complex(val)
    return float(val)


def sorted_abs(v) -> np.ndarray:
    """Absolute values of the coordinates, sorted nonincreasing."""
    v = np.asarray(v)
    return -np.sort(-np.abs(v), axis=-1)


def as_square_matrix(entries, field: str | None = None, check_unitary: bool = False,
                     tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    m = np.asarray(entries)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] == 0:
        raise DimError(f"expected a square matrix, got shape {m.shape}")
    if field is None:
        field = field_of(m)
    if field == REAL:
        if np.iscomplexobj(m) and np.any(m.imag != 0):
            raise DomainError("real field matrix has nonzero imaginary parts")
        m = np.real(m).astype(np.float64)
    else:
        m = m.astype(np.complex128)
    if not np.all(np.isfinite(m)):
        raise DomainError("matrix has non-finite entries")
    if check_unitary:
        assert_unitary(m, tol)
    return _frozen(m)


def unitarity_defect(m) -> float:
    m = np.asarray(m)
    return float(np.max(np.abs(m.conj().T @ m - np.eye(m.shape[0]))))


def assert_unitary(m, tol: Tolerance = DEFAULT_TOL) -> None:
    defect = unitarity_defect(m)
    if defect > tol.eq_tol:
        raise NonIsometry(f"matrix is not unitary: max|M*M - I| = {defect:.3e}")


def make_rng(seed: SeedLike = 0, *spawn_key: int) -> np.random.Generator:
    """Deterministic generator for ``seed``; ``spawn_key`` derives independent streams."""
    if isinstance(seed, np.random.Generator):
        if spawn_key:
            raise ValueError("spawn keys need an integer seed")
        return seed
    if seed is None:
        seed = 0
    if not 0 <= int(seed) < 2**64:
        raise DomainError("seed must be a 64-bit unsigned integer")
    return np.random.default_rng(np.random.SeedSequence(int(seed), spawn_key=tuple(spawn_key)))


def haar_sample(d: int, field: str = COMPLEX, seed: SeedLike = 0, n: int = 1) -> np.ndarray:
    """``n`` independent uniform draws from the unit sphere, as rows of an (n, d) array."""
    if d < 1 or n < 1:
        raise DomainError("need d >= 1 and n >= 1")
    rng = make_rng(seed)
    if field == REAL:
        g = rng.standard_normal((n, d))
    elif field == COMPLEX:
        g = rng.standard_normal((n, d)) + 1j * rng.standard_normal((n, d))
    else:
        raise DomainError(f"unknown field {field!r}")
    return g / np.linalg.norm(g, axis=1, keepdims=True)


def rounded_key(x, grid: float) -> bytes:
    """Hashable key for ``x`` on a grid of spacing ``grid`` (real and imaginary parts)."""
    x = np.asarray(x)
    if np.iscomplexobj(x):
        x = np.concatenate([x.real.ravel(), x.imag.ravel()])
    return np.rint(np.ravel(x) / grid).astype(np.int64).tobytes()


# JSON ------------------------------------------------------------------------

def _encode_scalars(a: np.ndarray, field: str):
    if field == COMPLEX:
        return [[float(z.real), float(z.imag)] for z in np.ravel(a)]
    return [float(z) for z in np.ravel(np.real(a))]


def vector_to_json(v) -> dict:
    v = np.asarray(v)
    field = field_of(v)
    return {"field": field, "coords": _encode_scalars(v, field)}


def _decode_entries(items: Sequence, field: str) -> np.ndarray:
    if field == COMPLEX:
        arr = np.asarray(items, dtype=np.float64)
        if arr.ndim == 1:
            return arr.astype(np.complex128)
        return arr[..., 0] + 1j * arr[..., 1]
    return np.asarray(items, dtype=np.float64)


def vector_from_json(obj: dict) -> np.ndarray:
    field = obj.get("field", REAL)
    if field not in FIELDS:
        raise DomainError(f"unknown field {field!r}")
    return as_vector(_decode_entries(obj["coords"], field), field)


def matrix_to_json(m) -> dict:
    m = np.asarray(m)
    field = field_of(m)
    rows = [_encode_scalars(row, field) for row in m]
    return {"field": field, "rows": rows}


def matrix_from_json(obj: dict, check_unitary: bool = True, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    field = obj.get("field", REAL)
    if field not in FIELDS:
        raise DomainError(f"unknown field {field!r}")
    rows = [_decode_entries(r, field) for r in obj["rows"]]
    return as_square_matrix(np.array(rows), field, check_unitary=check_unitary, tol=tol)

"""Finite isometry groups, their orbits, and the sup-correlation functional.

A :class:`TransitiveSet` is either an explicit list of orbit points or a
*virtual* orbit: a structured group together with a seed vector. Virtual
orbits over the monomial group (permutation matrices with unimodular
entries) are never enumerated; the rearrangement inequality gives the
supremum in closed form from sorted absolute profiles.
"""

from __future__ import annotations

import itertools
import math
from collections import deque
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import DimError, OrbitOverflow, UnsupportedVirtual, WrongKind
from .numeric import (
    COMPLEX,
    DEFAULT_TOL,
    REAL,
    Tolerance,
    as_square_matrix,
    assert_unitary,
    field_of,
    matrix_from_json,
    matrix_to_json,
    rounded_key,
    sorted_abs,
    unit_vector,
)

EXPLICIT = "explicit"
PERMUTATION = "permutation"
SIGNED_PERMUTATION = "signed_permutation"
MONOMIAL_FULL = "monomial_full"
KINDS = (EXPLICIT, PERMUTATION, SIGNED_PERMUTATION, MONOMIAL_FULL)

# Exhaustive enumeration of signed/plain permutations is used up to this degree.
MAX_ENUM_DEGREE = 8


@dataclass(frozen=True, eq=False)
class GroupPresentation:
    dim: int
    kind: str
    field: str = REAL
    generators: tuple = ()

    def __post_init__(self):
        if self.kind not in KINDS:
            raise WrongKind(f"unknown group kind {self.kind!r}")
        if self.dim < 1:
            raise DimError("group dimension must be positive")
        if self.kind != EXPLICIT and self.generators:
            raise WrongKind("structured groups carry no generator matrices")

    @property
    def is_finite_structured(self) -> bool:
        return self.kind in (PERMUTATION, SIGNED_PERMUTATION)

    def generator_actions(self) -> list[Callable[[np.ndarray], np.ndarray]]:
        """Callables ``x -> g x`` for a generating set."""
        d = self.dim
        if self.kind == EXPLICIT:
            return [(lambda x, g=g: g @ x) for g in self.generators]
        if self.kind == MONOMIAL_FULL:
            raise WrongKind("the monomial group is infinite and has no finite generating set")
        acts = []
        if d >= 2:
            swap = np.arange(d)
            swap[[0, 1]] = [1, 0]
            acts.append(lambda x, p=swap: x[p])
            if d >= 3:
                cyc = np.roll(np.arange(d), -1)
                acts.append(lambda x, p=cyc: x[p])
        if self.kind == SIGNED_PERMUTATION:
            flip = np.ones(d)
            flip[0] = -1.0
            acts.append(lambda x, s=flip: x * s)
        return acts

    def generator_matrices(self) -> list[np.ndarray]:
        """Matrices of the generating set (materialized for structured kinds)."""
        if self.kind == EXPLICIT:
            return list(self.generators)
        if self.kind == MONOMIAL_FULL:
            raise WrongKind("the monomial group is infinite and has no finite generating set")
        eye = np.eye(self.dim)
        return [np.column_stack([act(eye[:, j]) for j in range(self.dim)])
                for act in self.generator_actions()]


def explicit_group(generators: Sequence, field: str | None = None,
                   tol: Tolerance = DEFAULT_TOL) -> GroupPresentation:
    mats = [as_square_matrix(g, check_unitary=False) for g in generators]
    if not mats:
        raise DimError("explicit group needs at least one generator")
    d = mats[0].shape[0]
    if any(m.shape != (d, d) for m in mats):
        raise DimError("generators have different dimensions")
    if field is None:
        field = COMPLEX if any(np.iscomplexobj(m) for m in mats) else REAL
    mats = [as_square_matrix(m, field) for m in mats]
    for m in mats:
        assert_unitary(m, tol)
    return GroupPresentation(d, EXPLICIT, field, tuple(mats))


def permutation_group(d: int, field: str = REAL) -> GroupPresentation:
    return GroupPresentation(d, PERMUTATION, field)


def signed_permutation_group(d: int, field: str = REAL) -> GroupPresentation:
    return GroupPresentation(d, SIGNED_PERMUTATION, field)


def monomial_group(d: int) -> GroupPresentation:
    return GroupPresentation(d, MONOMIAL_FULL, COMPLEX)


def group_to_json(g: GroupPresentation) -> dict:
    if g.kind == EXPLICIT:
        return {"dim": g.dim, "field": g.field, "kind": EXPLICIT,
                "generators": [matrix_to_json(m) for m in g.generators]}
    return {"dim": g.dim, "field": g.field, "kind": g.kind}


def group_from_json(obj: dict, tol: Tolerance = DEFAULT_TOL) -> GroupPresentation:
    kind = obj["kind"]
    if kind == EXPLICIT:
        gens = [matrix_from_json(m, check_unitary=False) for m in obj["generators"]]
        g = explicit_group(gens, obj.get("field"), tol)
        if "dim" in obj and obj["dim"] != g.dim:
            raise DimError(f"declared dim {obj['dim']} but generators are {g.dim}x{g.dim}")
        return g
    d = int(obj["dim"])
    if kind == MONOMIAL_FULL:
        return monomial_group(d)
    return GroupPresentation(d, kind, obj.get("field", REAL))


@dataclass(frozen=True, eq=False)
class TransitiveSet:
    dim: int
    field: str
    points: np.ndarray | None = None
    group: GroupPresentation | None = None
    seed_vector: np.ndarray | None = None

    @property
    def is_virtual(self) -> bool:
        return self.points is None

    def __len__(self):
        if self.is_virtual:
            raise UnsupportedVirtual("virtual sets have no stored point list")
        return len(self.points)


def explicit_set(points, tol: Tolerance = DEFAULT_TOL, check_distinct: bool = True) -> TransitiveSet:
    pts = np.asarray(points)
    if pts.ndim != 2:
        raise DimError("points must be a 2-d array (n, d)")
    fld = field_of(pts)
    pts = np.array([unit_vector(p, fld, tol) for p in pts])
    if check_distinct:
        seen: dict[bytes, list[int]] = {}
        for i, p in enumerate(pts):
            k = rounded_key(p, tol.orbit_dedup_tol)
            for j in seen.get(k, ()):
                if np.max(np.abs(pts[j] - p)) <= tol.orbit_dedup_tol:
                    raise DimError(f"points {j} and {i} coincide")
            seen.setdefault(k, []).append(i)
    pts.flags.writeable = False
    return TransitiveSet(pts.shape[1], fld, points=pts)


def virtual_set(group: GroupPresentation, v, tol: Tolerance = DEFAULT_TOL) -> TransitiveSet:
    v = unit_vector(v, tol=tol)
    if v.shape[0] != group.dim:
        raise DimError(f"seed vector has dim {v.shape[0]}, group has dim {group.dim}")
    fld = COMPLEX if (group.field == COMPLEX or np.iscomplexobj(v)) else REAL
    return TransitiveSet(group.dim, fld, group=group, seed_vector=v)


def orbit_enumerate(g: GroupPresentation, v, max_size: int = 100_000,
                    tol: Tolerance = DEFAULT_TOL) -> TransitiveSet:
    """Breadth-first closure of ``{v}`` under the generators of ``g``."""
    if g.kind == EXPLICIT:
        for m in g.generators:
            assert_unitary(m, tol)
    v = unit_vector(v, tol=tol)
    if v.shape[0] != g.dim:
        raise DimError(f"vector has dim {v.shape[0]}, group has dim {g.dim}")
    if g.field == COMPLEX:
        v = v.astype(np.complex128)
    acts = g.generator_actions()
    grid = tol.orbit_dedup_tol

    points = [np.array(v)]
    buckets: dict[bytes, list[int]] = {rounded_key(v, grid): [0]}
    queue = deque([0])

    def lookup(x):
        k = rounded_key(x, grid)
        for j in buckets.get(k, ()):
            if np.max(np.abs(points[j] - x)) <= grid:
                return k, j
        return k, None

    while queue:
        i = queue.popleft()
        for act in acts:
            y = act(points[i])
            k, j = lookup(y)
            if j is None:
                if len(points) >= max_size:
                    raise OrbitOverflow(f"orbit exceeds max_size={max_size}")
                buckets.setdefault(k, []).append(len(points))
                points.append(y)
                queue.append(len(points) - 1)
    pts = np.array(points)
    pts.flags.writeable = False
    return TransitiveSet(g.dim, field_of(pts), points=pts)


# sup-correlation ---------------------------------------------------------------

def _as_batch(w, d: int) -> np.ndarray:
    w = np.atleast_2d(np.asarray(w))
    if w.shape[1] != d:
        raise DimError(f"witness has dim {w.shape[1]}, set has dim {d}")
    return w


def _sign_patterns(d: int) -> np.ndarray:
    # first sign fixed to +1: a global sign does not change |.|
    rest = np.array(list(itertools.product((1.0, -1.0), repeat=d - 1))).reshape(-1, d - 1)
    return np.hstack([np.ones((len(rest), 1)), rest])


def _enumerated_sup(v: np.ndarray, W: np.ndarray, signed: bool) -> np.ndarray:
    d = v.shape[0]
    if d > MAX_ENUM_DEGREE:
        raise UnsupportedVirtual(
            f"exact enumeration is limited to d <= {MAX_ENUM_DEGREE}; use the monomial group")
    perms = np.array(list(itertools.permutations(range(d))))
    vp = v[perms]
    signs = _sign_patterns(d) if signed else np.ones((1, d))
    out = np.empty(len(W))
    chunk = max(1, 2_000_000 // (len(signs) * d))
    for k, w in enumerate(W):
        best = 0.0
        for s in range(0, len(vp), chunk):
            z = vp[s:s + chunk] * np.conj(w)
            best = max(best, float(np.max(np.abs(z @ signs.T))))
        out[k] = best
    return out


def sup_correlation_many(X: TransitiveSet, W) -> np.ndarray:
    """``max_{x in X} |<x, w>|`` for every row ``w`` of ``W``."""
    W = _as_batch(W, X.dim)
    if not X.is_virtual:
        P = X.points
        out = np.empty(len(W))
        chunk = max(1, 4_000_000 // max(1, len(P)))
        for s in range(0, len(W), chunk):
            out[s:s + chunk] = np.max(np.abs(np.conj(W[s:s + chunk]) @ P.T), axis=1)
        return out

    g, v = X.group, X.seed_vector
    if g.kind == EXPLICIT:
        raise UnsupportedVirtual("virtual sets over explicit generators must be enumerated first")
    real_pair = not np.iscomplexobj(v) and not np.iscomplexobj(W)
    if g.kind == MONOMIAL_FULL or (g.kind == SIGNED_PERMUTATION and real_pair):
        return sorted_abs(W) @ sorted_abs(v)
    if g.kind == SIGNED_PERMUTATION:
        return _enumerated_sup(v, W, signed=True)
    # plain permutations
    if real_pair:
        va = np.sort(v)
        Wa = np.sort(W, axis=1)
        top = Wa @ va
        bottom = Wa[:, ::-1] @ va
        return np.maximum(np.abs(top), np.abs(bottom))
    return _enumerated_sup(v, W, signed=False)


def sup_correlation(X: TransitiveSet, w) -> float:
    w = np.asarray(w)
    if w.ndim != 1:
        raise DimError("sup_correlation takes a single vector; use sup_correlation_many")
    return float(sup_correlation_many(X, w[None, :])[0])


def sorted_profile(X: TransitiveSet) -> np.ndarray:
    """Nonincreasing absolute profile of the seed vector of a monomial-type virtual set."""
    if not X.is_virtual or X.group.kind not in (MONOMIAL_FULL, SIGNED_PERMUTATION):
        raise WrongKind("sorted profiles exist only for virtual monomial or signed-permutation sets")
    p = sorted_abs(X.seed_vector)
    p.flags.writeable = False
    return p


# families ----------------------------------------------------------------------

def harmonic(d: int) -> float:
    return math.fsum(1.0 / i for i in range(1, d + 1))


def sharpness_set(d: int) -> TransitiveSet:
    """Monomial orbit of ``(1, 1/sqrt 2, ..., 1/sqrt d) / sqrt(H_d)`` (all phases and permutations)."""
    if d < 1:
        raise DimError("d must be positive")
    h = harmonic(d)
    seed = 1.0 / np.sqrt(np.arange(1, d + 1) * h)
    return virtual_set(monomial_group(d), seed)


def basis_set(d: int) -> TransitiveSet:
    e = np.zeros(d)
    e[0] = 1.0
    return virtual_set(signed_permutation_group(d), e)


def hypercube_set(d: int) -> TransitiveSet:
    return virtual_set(signed_permutation_group(d), np.full(d, 1.0 / np.sqrt(d)))


def simplex_set(d: int) -> TransitiveSet:
    """Vertices of the regular simplex inscribed in ``S(R^d)`` (``d + 1`` points)."""
    from scipy.linalg import null_space

    basis = null_space(np.ones((1, d + 1)))  # (d+1, d)
    centered = np.eye(d + 1) - 1.0 / (d + 1)
    pts = centered @ basis
    pts /= np.linalg.norm(pts, axis=1, keepdims=True)
    return explicit_set(pts)


def rotation_group(n: int) -> GroupPresentation:
    """Cyclic group of rotations of the plane by multiples of ``2 pi / n``."""
    t = 2 * np.pi / n
    return explicit_group([[[np.cos(t), -np.sin(t)], [np.sin(t), np.cos(t)]]])


def square_set() -> TransitiveSet:
    return orbit_enumerate(rotation_group(4), [1.0, 0.0])

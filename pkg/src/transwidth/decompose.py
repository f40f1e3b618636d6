"""Invariant subspaces by group averaging, and checks for systems of imprimitivity."""

from __future__ import annotations

import hashlib
from collections import deque
from dataclasses import dataclass, field

import numpy as np

from .errors import DimError, NotASystem, OrbitOverflow, WrongKind
from .groups import EXPLICIT, MONOMIAL_FULL, GroupPresentation
from .numeric import DEFAULT_TOL, SeedLike, Tolerance, make_rng, rounded_key

CLUSTER_TOL = 1e-7
COMMUTE_TOL = 1e-8
PERMUTE_TOL = 1e-6


@dataclass(frozen=True, eq=False)
class SubspaceDecomposition:
    blocks: tuple  # orthonormal bases, each d x k_i

    @property
    def dims(self) -> list[int]:
        return [b.shape[1] for b in self.blocks]

    @property
    def dim(self) -> int:
        return self.blocks[0].shape[0]

    def projectors(self) -> list[np.ndarray]:
        return [b @ b.conj().T for b in self.blocks]


@dataclass(frozen=True, eq=False)
class ImprimitivitySystem:
    blocks: SubspaceDecomposition
    coset_maps: tuple = ()  # gamma_i with gamma_i V_1 = V_i


def group_closure(gens, max_size: int = 1_000_000, tol: Tolerance = DEFAULT_TOL) -> list[np.ndarray]:
    """All elements of the finite matrix group generated by ``gens``."""
    gens = [np.asarray(g) for g in gens]
    d = gens[0].shape[0]
    dtype = np.result_type(*gens)
    eye = np.eye(d, dtype=dtype)
    grid = tol.orbit_dedup_tol
    elems = [eye]
    seen = {rounded_key(eye, grid)}
    queue = deque([eye])
    while queue:
        a = queue.popleft()
        for g in gens:
            b = g @ a
            k = rounded_key(b, grid)
            if k not in seen:
                if len(elems) >= max_size:
                    raise OrbitOverflow(f"group closure exceeds {max_size} elements")
                seen.add(k)
                elems.append(b)
                queue.append(b)
    return elems


def _group_generators(g: GroupPresentation) -> list[np.ndarray]:
    if g.kind == MONOMIAL_FULL:
        raise WrongKind("the monomial group is infinite")
    return g.generator_matrices()


def _cluster(evals: np.ndarray, tol: float) -> list[list[int]]:
    groups = [[0]]
    for i in range(1, len(evals)):
        if evals[i] - evals[i - 1] > tol:
            groups.append([i])
        else:
            groups[-1].append(i)
    return groups


def _commutator(P: np.ndarray, gens) -> float:
    return max((float(np.max(np.abs(g @ P - P @ g))) for g in gens), default=0.0)


def reynolds_invariant_subspaces(g: GroupPresentation, seed: SeedLike = 0, max_size: int = 1_000_000,
                                 tol: Tolerance = DEFAULT_TOL) -> SubspaceDecomposition:
    """Average a random Hermitian matrix over the group and split by eigenvalue.

    Eigenvalues closer than ``CLUSTER_TOL`` share a block. Should a block fail
    to commute with a generator (a smeared cluster), adjacent clusters are
    merged across the smallest relative gap until every block commutes.
    """
    gens = _group_generators(g)
    elems = group_closure(gens, max_size, tol)
    d = g.dim
    rng = make_rng(seed)
    A = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    H0 = (A + A.conj().T) / 2
    H = np.zeros((d, d), dtype=np.complex128)
    for e in elems:
        H += e @ H0 @ e.conj().T
    H /= len(elems)
    H = (H + H.conj().T) / 2
    evals, evecs = np.linalg.eigh(H)
    groups = _cluster(evals, CLUSTER_TOL)

    def bad_block(groups):
        for i, idx in enumerate(groups):
            B = evecs[:, idx]
            if _commutator(B @ B.conj().T, gens) > COMMUTE_TOL:
                return i
        return None

    while (i := bad_block(groups)) is not None and len(groups) > 1:
        # merge across the smallest gap adjacent to the offending block, relative to spacing
        scale = max(np.ptp(evals), 1.0)
        left = evals[groups[i][0]] - evals[groups[i - 1][-1]] if i > 0 else np.inf
        right = evals[groups[i + 1][0]] - evals[groups[i][-1]] if i + 1 < len(groups) else np.inf
        j = i - 1 if left / scale <= right / scale else i
        groups[j:j + 2] = [groups[j] + groups[j + 1]]

    real_group = all(not np.iscomplexobj(x) for x in gens)
    blocks = []
    for idx in groups:
        B = evecs[:, idx]
        if real_group:
            B = _realify(B)
        blocks.append(B)
    return SubspaceDecomposition(tuple(blocks))


def _realify(B: np.ndarray) -> np.ndarray:
    """Real orthonormal basis for ``span(B)`` when that span is closed under conjugation."""
    k = B.shape[1]
    M = np.hstack([B.real, B.imag])
    u, s, _ = np.linalg.svd(M, full_matrices=False)
    if np.sum(s > 1e-8) == k:
        return u[:, :k]
    return B


def projector_checksum(P: np.ndarray, decimals: int = 8) -> str:
    r = np.round(np.asarray(P, dtype=np.complex128), decimals) + 0.0
    return hashlib.sha256(np.ascontiguousarray(r).tobytes()).hexdigest()[:16]


@dataclass
class ImprimitivityReport:
    valid: bool
    sigma: list = field(default_factory=list)  # per generator: block permutation as a list
    max_orthogonality_defect: float = 0.0
    max_permutation_defect: float = 0.0


def validate_imprimitivity(sys: ImprimitivitySystem, g: GroupPresentation,
                           tol: Tolerance = DEFAULT_TOL) -> ImprimitivityReport:
    """Check that the blocks are orthonormal, mutually orthogonal, and permuted by every generator."""
    blocks = list(sys.blocks.blocks)
    d = g.dim
    if sum(b.shape[1] for b in blocks) != d or any(b.shape[0] != d for b in blocks):
        raise NotASystem("block dimensions do not add up to the ambient dimension")
    ortho = 0.0
    for i, bi in enumerate(blocks):
        gram = bi.conj().T @ bi
        ortho = max(ortho, float(np.max(np.abs(gram - np.eye(bi.shape[1])))))
        if ortho > tol.eq_tol:
            raise NotASystem(f"block {i} basis is not orthonormal", block=i)
        for j in range(i + 1, len(blocks)):
            c = float(np.max(np.abs(bi.conj().T @ blocks[j])))
            ortho = max(ortho, c)
            if c > tol.eq_tol:
                raise NotASystem(f"blocks {i} and {j} are not orthogonal", block=(i, j))
    if g.kind == MONOMIAL_FULL:
        # the phase group is infinite: check signed permutations plus a generic phase
        gens = GroupPresentation(d, "signed_permutation").generator_matrices()
        ph = np.eye(d, dtype=np.complex128)
        ph[0, 0] = np.exp(1j * np.sqrt(2.0))
        gens.append(ph)
    else:
        gens = g.generator_matrices()
    projs = [b @ b.conj().T for b in blocks]
    sigmas = []
    worst = 0.0
    for gi, m in enumerate(gens):
        sigma = []
        for i, P in enumerate(projs):
            image = m @ P @ m.conj().T
            defects = [float(np.max(np.abs(image - Q))) for Q in projs]
            j = int(np.argmin(defects))
            if defects[j] > PERMUTE_TOL:
                raise NotASystem(f"generator {gi} does not map block {i} onto a block",
                                 generator=gi, block=i)
            worst = max(worst, defects[j])
            sigma.append(j)
        sigmas.append(sigma)
    for i, gam in enumerate(sys.coset_maps):
        gam = np.asarray(gam)
        if float(np.max(np.abs(gam @ projs[0] @ gam.conj().T - projs[i]))) > PERMUTE_TOL:
            raise NotASystem(f"coset map {i} does not send block 0 to block {i}", block=i)
    return ImprimitivityReport(True, sigmas, ortho, worst)


def coordinate_line_system(d: int) -> ImprimitivitySystem:
    """Coordinate axes with transpositions ``(1 i)`` as coset maps."""
    eye = np.eye(d)
    blocks = tuple(eye[:, [i]] for i in range(d))
    gammas = []
    for i in range(d):
        p = np.arange(d)
        p[[0, i]] = p[[i, 0]]
        gammas.append(eye[:, p])
    return ImprimitivitySystem(SubspaceDecomposition(blocks), tuple(gammas))


def system_from_bases(bases, coset_maps=(), orthonormalize: bool = True) -> ImprimitivitySystem:
    """Build a system from spanning sets; each block is orthonormalized by QR unless told otherwise."""
    blocks = []
    for b in bases:
        b = np.asarray(b, dtype=np.result_type(np.asarray(b), np.float64))
        if b.ndim == 1:
            b = b[:, None]
        if b.ndim != 2:
            raise DimError("each basis must be a vector or a d x k matrix")
        if orthonormalize:
            b = np.linalg.qr(b)[0]
        blocks.append(b)
    return ImprimitivitySystem(SubspaceDecomposition(tuple(blocks)), tuple(coset_maps))

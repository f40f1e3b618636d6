"""Symmetric witness measures on the sphere and the inequalities that certify them.

A symmetric probability measure ``mu`` (invariant under ``w -> -w``) gives a
width witness through its *risk*

    risk(mu, X) = integral of max_{x in X} |<x, w>|^2 d mu(w),

since some atom ``w`` must satisfy ``max_x |<x, w>| <= sqrt(risk)``.

The dyadic family ``e_0, ..., e_m`` (first ``2^i`` coordinates equal to
``2^{-i/2}``) is almost orthogonal, with Gram entries ``2^{-|i-j|/2}``; the
Selberg inequality bounds ``sum_i |<v, e_i>|^2`` by the largest absolute row
sum of the Gram matrix, which controls the risk of the uniform measure on
``{+-e_i}`` against every monomial orbit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from statistics import NormalDist
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    DimError,
    DomainError,
    NonOrthogonalBlocks,
    NonOrthogonalSubspaces,
    UnsupportedVirtual,
    WrongKind,
)
from .groups import MONOMIAL_FULL, SIGNED_PERMUTATION, TransitiveSet, sup_correlation_many
from .numeric import (
    COMPLEX,
    DEFAULT_TOL,
    REAL,
    SeedLike,
    Tolerance,
    field_of,
    haar_sample,
    make_rng,
    rounded_key,
    sorted_abs,
    vector_from_json,
    vector_to_json,
)

ATOMS = "atoms"
HAAR = "haar"

_Z99 = NormalDist().inv_cdf(0.995)


@dataclass(frozen=True, eq=False)
class SymmetricMeasure:
    dim: int
    field: str
    kind: str
    atoms: np.ndarray | None = None
    weights: np.ndarray | None = None
    seed: int = 0
    n_samples: int = 0

    @property
    def size(self) -> int:
        return 0 if self.atoms is None else len(self.atoms)

    def mean(self) -> np.ndarray:
        """Barycenter of the atoms; zero for a symmetric measure."""
        if self.kind != ATOMS:
            return np.zeros(self.dim)
        return self.weights @ self.atoms


def check_symmetric(atoms: np.ndarray, weights: np.ndarray, tol: Tolerance = DEFAULT_TOL) -> bool:
    """True when every atom ``a`` is matched by ``-a`` carrying the same total weight."""
    grid = tol.orbit_dedup_tol
    mass: dict[bytes, float] = {}
    for a, w in zip(atoms, weights):
        k = rounded_key(a, grid)
        mass[k] = mass.get(k, 0.0) + w
    for a in atoms:
        if abs(mass[rounded_key(a, grid)] - mass.get(rounded_key(-a, grid), 0.0)) > tol.eq_tol:
            return False
    return True


def atom_measure(atoms, weights, tol: Tolerance = DEFAULT_TOL) -> SymmetricMeasure:
    atoms = np.atleast_2d(np.asarray(atoms))
    weights = np.asarray(weights, dtype=np.float64)
    if atoms.ndim != 2 or len(atoms) != len(weights) or len(atoms) == 0:
        raise DimError("atoms must be (n, d) with n matching the weights")
    if np.any(weights <= 0):
        raise DomainError("weights must be positive")
    if abs(math.fsum(weights) - 1.0) > tol.eq_tol:
        raise DomainError(f"weights sum to {math.fsum(weights)!r}, not 1")
    norms = np.linalg.norm(atoms, axis=1)
    if np.max(np.abs(norms - 1.0)) > tol.eq_tol:
        raise DomainError("atoms must lie on the unit sphere")
    if not check_symmetric(atoms, weights, tol):
        raise DomainError("atom support is not symmetric under w -> -w")
    atoms = np.array(atoms)
    atoms.flags.writeable = False
    weights = np.array(weights)
    weights.flags.writeable = False
    return SymmetricMeasure(atoms.shape[1], field_of(atoms), ATOMS, atoms, weights)


def haar_measure(d: int, field: str = COMPLEX, n_samples: int = 100_000, seed: int = 0) -> SymmetricMeasure:
    if d < 1 or n_samples < 1:
        raise DomainError("need d >= 1 and n_samples >= 1")
    return SymmetricMeasure(d, field, HAAR, seed=seed, n_samples=n_samples)


def measure_to_json(mu: SymmetricMeasure) -> dict:
    if mu.kind == HAAR:
        return {"kind": HAAR, "dim": mu.dim, "field": mu.field,
                "n_samples": mu.n_samples, "seed": mu.seed}
    return {"kind": ATOMS,
            "atoms": [{"w": vector_to_json(a), "weight": float(w)}
                      for a, w in zip(mu.atoms, mu.weights)]}


def measure_from_json(obj: dict, tol: Tolerance = DEFAULT_TOL) -> SymmetricMeasure:
    if obj["kind"] == HAAR:
        return haar_measure(int(obj["dim"]), obj.get("field", COMPLEX),
                            int(obj["n_samples"]), int(obj.get("seed", 0)))
    vecs = [vector_from_json(a["w"]) for a in obj["atoms"]]
    if any(np.iscomplexobj(v) for v in vecs):
        vecs = [v.astype(np.complex128) for v in vecs]
    return atom_measure(np.array(vecs), [a["weight"] for a in obj["atoms"]], tol)


# dyadic construction -----------------------------------------------------------

def dyadic_m(d: int) -> int:
    """Smallest ``m >= 0`` with ``4^m >= d``, i.e. ``ceil(log d / (2 log 2))``."""
    if d < 1:
        raise DomainError("d must be positive")
    m = 0
    while 4 ** m < d:
        m += 1
    return m


@dataclass(frozen=True, eq=False)
class DyadicFamily:
    d: int
    m: int
    vectors: np.ndarray  # (m + 1, d)

    def gram(self) -> np.ndarray:
        return self.vectors @ self.vectors.T


def dyadic_family(d: int) -> DyadicFamily:
    m = dyadic_m(d)
    vecs = np.zeros((m + 1, d))
    for i in range(m + 1):
        vecs[i, : 2 ** i] = 2.0 ** (-i / 2)
    vecs.flags.writeable = False
    return DyadicFamily(d, m, vecs)


def dyadic_gram_exact(m: int) -> np.ndarray:
    idx = np.arange(m + 1)
    return 2.0 ** (-np.abs(idx[:, None] - idx[None, :]) / 2)


def _plus_minus(vecs: np.ndarray, tol: Tolerance) -> SymmetricMeasure:
    n = len(vecs)
    atoms = np.vstack([vecs, -vecs])
    return atom_measure(atoms, np.full(2 * n, 1.0 / (2 * n)), tol)


def dyadic_measure(d: int, tol: Tolerance = DEFAULT_TOL) -> SymmetricMeasure:
    """Uniform measure on ``+-e_0, ..., +-e_m`` (weight ``1/(2(m+1))`` each)."""
    return _plus_minus(dyadic_family(d).vectors, tol)


def projected_dyadic_vectors(d: int, normalize: bool = True) -> tuple[np.ndarray, np.ndarray]:
    """Projections of the dyadic vectors onto the hyperplane orthogonal to ``(1, ..., 1)``.

    Returns ``(vectors, norms)`` where ``norms`` are the lengths before any
    renormalization.
    """
    if d < 2:
        raise DomainError("projection onto the sum-zero hyperplane needs d >= 2")
    fam = dyadic_family(d)
    shift = (2.0 ** (np.arange(fam.m + 1) / 2) / d)[:, None]
    proj = fam.vectors - shift
    norms = np.linalg.norm(proj, axis=1)
    if normalize:
        keep = norms > 0
        proj = proj.copy()
        proj[keep] /= norms[keep, None]
    return proj, norms


def projected_dyadic_measure(d: int, tol: Tolerance = DEFAULT_TOL) -> SymmetricMeasure:
    """Renormalized projected dyadic atoms; atoms that project to zero are dropped."""
    proj, norms = projected_dyadic_vectors(d, normalize=True)
    return _plus_minus(proj[norms > tol.eq_tol], tol)


def selberg_bound(vectors) -> float:
    """``max_i sum_j |<v_i, v_j>|``, which dominates ``sum_i |<v, v_i>|^2`` for unit ``v``."""
    V = np.atleast_2d(np.asarray(vectors))
    if V.size == 0:
        raise DimError("need at least one vector")
    G = np.abs(V @ V.conj().T)
    return float(np.max(np.sum(G, axis=1)))


def psi(d: int) -> float:
    """Average of ``2^{-|n|/2}`` over the best window of ``m + 1`` consecutive integers."""
    m = dyadic_m(d)
    best = 0.0
    # windows {a, ..., a+m}; a and -m-a are mirror images
    for a in range(-m, -(m // 2) + 1):
        best = max(best, math.fsum(2.0 ** (-abs(n) / 2) for n in range(a, a + m + 1)))
    return best / (m + 1)


def psi_tail_bound(d: int) -> float:
    """``2 (3 + 2 sqrt 2) log 2 / log d``, a closed-form decay envelope for ``psi``."""
    if d < 2:
        raise DomainError("envelope needs d >= 2")
    return 2 * (3 + 2 * math.sqrt(2)) * math.log(2) / math.log(d)


def fit_psi_constant(max_d: int = 10 ** 6, power: float = 1.0) -> tuple[float, int]:
    """Largest ``c'`` with ``psi(d)^(1/power) (1 + c' ln d) <= 1`` for all ``2 <= d <= max_d``.

    ``power = 1`` fits ``psi <= (1 + c' ln d)^-1``; ``power = 0.5`` fits
    ``psi <= (1 + c' ln d)^-1/2``. Returns the constant and the binding ``d``.
    ``psi`` is constant on each range ``4^(m-1) < d <= 4^m`` while ``ln d``
    grows, so only the right end of each range matters.
    """
    if max_d < 2:
        raise DomainError("need max_d >= 2")
    best, arg = math.inf, 2
    for m in range(1, dyadic_m(max_d) + 1):
        hi = min(4 ** m, max_d)
        c = (psi(hi) ** (-1.0 / power) - 1.0) / math.log(hi)
        if c < best:
            best, arg = c, hi
    return best, arg


# risk --------------------------------------------------------------------------

@dataclass(frozen=True)
class RiskEstimate:
    value: float
    low: float
    high: float
    n: int = 0

    def __float__(self):
        return self.value


def measure_risk(mu: SymmetricMeasure, X: TransitiveSet, chunk: int = 4096) -> RiskEstimate:
    if mu.dim != X.dim:
        raise DimError(f"measure dim {mu.dim} vs set dim {X.dim}")
    if mu.kind == ATOMS:
        sq = sup_correlation_many(X, mu.atoms) ** 2
        val = float(np.sum(mu.weights * sq))
        return RiskEstimate(val, val, val, len(sq))
    rng = make_rng(mu.seed)
    vals = []
    remaining = mu.n_samples
    while remaining > 0:
        k = min(chunk, remaining)
        W = haar_sample(mu.dim, mu.field, rng, k)
        vals.append(sup_correlation_many(X, W) ** 2)
        remaining -= k
    sq = np.concatenate(vals)
    mean = float(np.mean(sq))
    se = float(np.std(sq, ddof=1) / np.sqrt(len(sq))) if len(sq) > 1 else 0.0
    return RiskEstimate(mean, mean - _Z99 * se, mean + _Z99 * se, len(sq))


def measure_risk_many(mu: SymmetricMeasure, g, seeds) -> np.ndarray:
    """Exact risks of an atomic measure for many seed vectors of one monomial-type group.

    Uses ``sup_g |<g v, w>| = sorted|v| . sorted|w|``, so all seeds are handled by one
    matrix product. Real signed-permutation groups need real seeds and atoms.
    """
    if mu.kind != ATOMS:
        raise WrongKind("batched risks need an atomic measure")
    V = np.atleast_2d(np.asarray(seeds))
    if V.shape[1] != mu.dim or g.dim != mu.dim:
        raise DimError(f"seeds of dim {V.shape[1]}, measure dim {mu.dim}, group dim {g.dim}")
    real_pair = not np.iscomplexobj(V) and not np.iscomplexobj(mu.atoms)
    if not (g.kind == MONOMIAL_FULL or (g.kind == SIGNED_PERMUTATION and real_pair)):
        raise UnsupportedVirtual("batched risks need the monomial group or real signed permutations")
    V = V / np.linalg.norm(V, axis=1, keepdims=True)
    sup = sorted_abs(V) @ sorted_abs(mu.atoms).T
    return (sup ** 2) @ mu.weights


def fixed_element_second_moment(mu: SymmetricMeasure, u) -> float:
    """``integral |<u, w>|^2 d mu(w)`` for a single vector ``u`` (no supremum)."""
    u = np.asarray(u)
    return float(np.sum(mu.weights * np.abs(np.conj(mu.atoms) @ u) ** 2))


# combination rules ---------------------------------------------------------------

def reducible_weights(f1: float, f2: float) -> tuple[float, float]:
    s = math.hypot(f1, f2)
    return f2 / s, f1 / s


def reducible_bound(f1: float, f2: float) -> float:
    return f1 * f2 / math.hypot(f1, f2)


def combine_reducible(mu1: SymmetricMeasure, mu2: SymmetricMeasure, f1: float, f2: float,
                      embed1, embed2, tol: Tolerance = DEFAULT_TOL) -> SymmetricMeasure:
    """Push the product measure forward through ``(w1, w2) -> l1 E1 w1 + l2 E2 w2``.

    ``embed1`` and ``embed2`` are ``d x d_i`` isometries onto orthogonal
    subspaces; ``l1, l2`` are the weights from :func:`reducible_weights`.
    """
    if mu1.kind != ATOMS or mu2.kind != ATOMS:
        raise DomainError("only atomic measures can be combined")
    if not (0 < f1 <= 1 and 0 < f2 <= 1):
        raise DomainError("f1 and f2 must lie in (0, 1]")
    E1 = np.asarray(embed1)
    E2 = np.asarray(embed2)
    if E1.ndim == 1:
        E1 = E1[:, None]
    if E2.ndim == 1:
        E2 = E2[:, None]
    if E1.shape[1] != mu1.dim or E2.shape[1] != mu2.dim or E1.shape[0] != E2.shape[0]:
        raise DimError("embedding shapes do not match the measures")
    for E in (E1, E2):
        if np.max(np.abs(E.conj().T @ E - np.eye(E.shape[1]))) > tol.eq_tol:
            raise NonOrthogonalSubspaces("embedding is not an isometry")
    if np.max(np.abs(E1.conj().T @ E2), initial=0.0) > tol.eq_tol:
        raise NonOrthogonalSubspaces("embedded subspaces are not orthogonal")
    l1, l2 = reducible_weights(f1, f2)
    A1 = mu1.atoms @ E1.T
    A2 = mu2.atoms @ E2.T
    atoms = (l1 * A1[:, None, :] + l2 * A2[None, :, :]).reshape(-1, E1.shape[0])
    weights = np.outer(mu1.weights, mu2.weights).ravel()
    return atom_measure(atoms, weights, tol)


def _orthonormal_span(vectors: np.ndarray, tol: Tolerance) -> np.ndarray:
    u, s, _ = np.linalg.svd(vectors.T, full_matrices=False)
    rank = int(np.sum(s > tol.eq_tol * max(1.0, s[0])))
    return u[:, :rank]


def combine_imprimitive(mu1: SymmetricMeasure, mu2: SymmetricMeasure, gammas: Sequence,
                        v1_basis=None, tol: Tolerance = DEFAULT_TOL) -> SymmetricMeasure:
    """Push ``mu1 x mu2`` forward through ``(x, lam) -> sum_i lam_i gamma_i x``.

    ``mu1`` lives on the block ``V_1``: either as atoms in ``C^d`` lying in
    ``V_1`` or, when ``v1_basis`` (a ``d x k`` isometry) is given, in the
    coordinates of that basis. ``mu2`` lives on ``C^{d_1}`` with
    ``d_1 = len(gammas)``.
    """
    if mu1.kind != ATOMS or mu2.kind != ATOMS:
        raise DomainError("only atomic measures can be combined")
    gam = np.array([np.asarray(g) for g in gammas])
    d1, d = gam.shape[0], gam.shape[1]
    if gam.shape != (d1, d, d):
        raise DimError("gammas must be square matrices of one size")
    if mu2.dim != d1:
        raise DimError(f"mu2 must live on C^{d1}, got dim {mu2.dim}")
    for g in gam:
        if np.max(np.abs(g.conj().T @ g - np.eye(d))) > tol.eq_tol:
            raise NonOrthogonalBlocks("coset map is not unitary")
    if v1_basis is None:
        if mu1.dim != d:
            raise DimError("mu1 atoms must live in C^d unless v1_basis is given")
        X = mu1.atoms
        basis = _orthonormal_span(X, tol)
    else:
        basis = np.asarray(v1_basis)
        if basis.ndim == 1:
            basis = basis[:, None]
        if basis.shape != (d, mu1.dim):
            raise DimError("v1_basis must be d x dim(mu1)")
        X = mu1.atoms @ basis.T
    blocks = [g @ basis for g in gam]
    for i in range(d1):
        for j in range(i + 1, d1):
            if np.max(np.abs(blocks[i].conj().T @ blocks[j])) > tol.eq_tol:
                raise NonOrthogonalBlocks(f"blocks {i} and {j} are not orthogonal")
    GX = np.einsum("ide,ae->aid", gam, X)  # (n1, d1, d): gamma_i x_a
    lam = mu2.atoms
    atoms = np.einsum("bi,aid->abd", lam, GX).reshape(-1, d)
    norms = np.linalg.norm(atoms, axis=1)
    if np.max(np.abs(norms - 1.0)) > tol.eq_tol:
        raise NonOrthogonalBlocks("combined atoms are not unit vectors")
    weights = np.outer(mu1.weights, mu2.weights).ravel()
    return atom_measure(atoms, weights, tol)


# eta calculus ------------------------------------------------------------------

@dataclass(frozen=True)
class EtaParams:
    c: float = 1.0 / math.log(2)

    def __post_init__(self):
        if not 0 < self.c <= 1.0 / math.log(2):
            raise DomainError(f"c must lie in (0, 1/ln 2], got {self.c}")


def eta(x, params: EtaParams = EtaParams()):
    """``(1 + c log x)^{-1/2}`` for ``x >= 1``."""
    xa = np.asarray(x, dtype=np.float64)
    if np.any(xa < 1):
        raise DomainError("eta is defined for x >= 1")
    out = (1.0 + params.c * np.log(xa)) ** -0.5
    return float(out) if out.ndim == 0 else out


def eta_combined(x, y, params: EtaParams = EtaParams()):
    ex, ey = eta(x, params), eta(y, params)
    return ex * ey / np.sqrt(ex ** 2 + ey ** 2)


@dataclass
class EtaReport:
    c: float
    n_points: int
    min_margin_sum: float       # eta(x+y) - eta(x)eta(y)/sqrt(eta(x)^2+eta(y)^2)
    min_margin_sum_expanded: float  # e^{1/c} x y - (x + y)
    min_margin_product: float   # eta(xy) - eta(x) eta(y)
    min_margin_product_expanded: float  # c^2 log x log y
    argmin_sum: tuple
    argmin_product: tuple
    equality_points_sum: list
    passed: bool


def log_grid(n: int = 100, lo: float = 1.0, hi: float = 1e6) -> list[tuple[float, float]]:
    xs = np.geomspace(lo, hi, n)
    return [(float(x), float(y)) for x in xs for y in xs]


def eta_inequalities_check(params: EtaParams = EtaParams(), grid: Iterable[tuple[float, float]] | None = None,
                           tol: float = 1e-12) -> EtaReport:
    """Check both eta inequalities at every grid point, in direct and expanded forms."""
    pts = np.array(list(grid if grid is not None else log_grid()), dtype=np.float64)
    x, y = pts[:, 0], pts[:, 1]
    if np.any(pts < 1):
        raise DomainError("grid points must be >= 1")
    c = params.c
    m_sum = eta(x + y, params) - eta_combined(x, y, params)
    m_sum_exp = np.exp(1.0 / c) * x * y - (x + y)
    m_prod = eta(x * y, params) - eta(x, params) * eta(y, params)
    m_prod_exp = (1 + c * np.log(x)) * (1 + c * np.log(y)) - (1 + c * np.log(x) + c * np.log(y))
    i_sum = int(np.argmin(m_sum))
    i_prod = int(np.argmin(m_prod))
    eq_sum = [tuple(p) for p, a, b in zip(pts.tolist(), m_sum, m_sum_exp) if abs(a) <= tol and abs(b) <= tol]
    mins = [float(np.min(a)) for a in (m_sum, m_sum_exp, m_prod, m_prod_exp)]
    return EtaReport(
        c=c,
        n_points=len(pts),
        min_margin_sum=mins[0],
        min_margin_sum_expanded=mins[1],
        min_margin_product=mins[2],
        min_margin_product_expanded=mins[3],
        argmin_sum=tuple(pts[i_sum]),
        argmin_product=tuple(pts[i_prod]),
        equality_points_sum=eq_sum,
        passed=min(mins) >= -tol,
    )


# Haar witness ------------------------------------------------------------------

def haar_witness(X: TransitiveSet, n_samples: int = 10_000, seed: SeedLike = 0,
                 chunk: int = 4096) -> tuple[np.ndarray, float]:
    """Best of ``n_samples`` uniform sphere draws, scored by sup-correlation."""
    rng = make_rng(seed)
    best_w, best_val = None, np.inf
    remaining = n_samples
    while remaining > 0:
        k = min(chunk, remaining)
        W = haar_sample(X.dim, X.field, rng, k)
        vals = sup_correlation_many(X, W)
        i = int(np.argmin(vals))
        if vals[i] < best_val:
            best_w, best_val = W[i], float(vals[i])
        remaining -= k
    return best_w, best_val


def cap_bound(d: int, t: float) -> float:
    """Measure bound ``2 exp(-t^2 d / 2)`` for the two-sided cap ``|<v, w>| > t``."""
    return 2.0 * math.exp(-t * t * d / 2.0)


def haar_risk_bound(d: int, m: int, t: float | None = None) -> float:
    """Union bound ``t^2 + 2 m exp(-t^2 d / 2)`` for ``m`` orbit directions; default ``t = 2/sqrt(log d)``."""
    if t is None:
        t = 2.0 / math.sqrt(math.log(d))
    return t * t + 2.0 * m * math.exp(-t * t * d / 2.0)


@dataclass
class CapReport:
    d: int
    t: float
    n: int
    p_hat: float
    bound: float
    slack: float
    passed: bool


def cap_tail(d: int, t: float, n: int = 100_000, seed: SeedLike = 0, field: str = COMPLEX,
             chunk: int = 20_000) -> CapReport:
    """Empirical ``P(|<e_1, w>| > t)`` under Haar measure against the cap bound."""
    rng = make_rng(seed)
    hits = 0
    remaining = n
    while remaining > 0:
        k = min(chunk, remaining)
        W = haar_sample(d, field, rng, k)
        hits += int(np.count_nonzero(np.abs(W[:, 0]) > t))
        remaining -= k
    p = hits / n
    slack = 3.0 * math.sqrt(p * (1 - p) / n)
    bound = cap_bound(d, t)
    return CapReport(d, t, n, p, bound, slack, p <= bound + slack)


__all__ = [
    "ATOMS", "HAAR", "REAL", "COMPLEX",
    "SymmetricMeasure", "DyadicFamily", "EtaParams", "RiskEstimate", "EtaReport", "CapReport",
    "atom_measure", "haar_measure", "check_symmetric", "measure_to_json", "measure_from_json",
    "dyadic_m", "dyadic_family", "dyadic_gram_exact", "dyadic_measure",
    "projected_dyadic_vectors", "projected_dyadic_measure",
    "selberg_bound", "psi", "psi_tail_bound", "fit_psi_constant", "measure_risk", "measure_risk_many",
    "fixed_element_second_moment",
    "reducible_weights", "reducible_bound", "combine_reducible", "combine_imprimitive",
    "eta", "eta_combined", "eta_inequalities_check", "log_grid",
    "haar_witness", "cap_bound", "haar_risk_bound", "cap_tail",
]

"""Two-sided bounds on ``width(X) = min_{|w|=1} max_{x in X} |<x, w>|``.

Upper bounds are honest evaluations of a witness found by multi-restart
projected subgradient descent on the sphere. Lower bounds come from
certificates:

* ``prefix_flat`` -- exact for monomial-type virtual sets. On the cone of
  sorted nonnegative vectors the objective is linear, and every such unit
  vector is a nonnegative combination of the prefix-flat unit vectors
  ``(1/sqrt k, ..., 1/sqrt k, 0, ..., 0)`` whose coefficients sum to at least
  one, so the minimum is attained on one of them.
* ``eig`` -- ``max_x |<x,w>|^2 >= w* M w`` with ``M`` the orbit covariance,
  hence ``width >= sqrt(lambda_min(M))``.
* ``sweep2d`` -- a Lipschitz branch-and-bound over angles for real planar sets.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field

import numpy as np
from scipy.optimize import minimize

from .errors import DegenerateWitness, WrongKind
from .groups import (
    MONOMIAL_FULL,
    SIGNED_PERMUTATION,
    TransitiveSet,
    sorted_profile,
    sup_correlation,
    sup_correlation_many,
)
from .measures import dyadic_family
from .numeric import COMPLEX, DEFAULT_TOL, Tolerance, haar_sample, make_rng, vector_to_json

EIG = "eig"
PREFIX_FLAT = "prefix_flat"
SWEEP2D = "sweep2d"
TRIVIAL = "trivial"


@dataclass(frozen=True)
class SolverConfig:
    restarts: int = 64
    max_iters: int = 2000
    initial_step: float = 0.2
    step_decay: float = 0.5       # step_k = initial_step / (k + 1)^step_decay
    patience: int = 200           # stop a run after this many iterations without significant progress
    min_improvement: float = 1e-9
    polish_tol: float = 1e-10
    work_budget: float = 2e7      # restarts * d * iterations cap for sorted-profile objectives
    seed: int = 0

    def __post_init__(self):
        if self.restarts < 1 or self.max_iters < 1:
            raise ValueError("restarts and max_iters must be >= 1")


@dataclass
class WidthReport:
    upper: float
    witness: np.ndarray
    lower: float
    lower_certificate: str
    iterations: int = 0
    restarts: int = 0
    details: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        out = asdict(self)
        out["witness"] = vector_to_json(self.witness)
        return out

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2)


# objective and subgradients ------------------------------------------------------

def _is_monomial_type(X: TransitiveSet) -> bool:
    return X.is_virtual and X.group.kind in (MONOMIAL_FULL, SIGNED_PERMUTATION) and (
        X.group.kind == MONOMIAL_FULL or not np.iscomplexobj(X.seed_vector))


def _values_and_subgradients(X: TransitiveSet, W: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Objective values and one subgradient per row of ``W`` (real-coordinate convention)."""
    if not X.is_virtual:
        S = np.conj(W) @ X.points.T                 # <x_j, w_r>
        j = np.argmax(np.abs(S), axis=1)            # lowest index on ties
        s = S[np.arange(len(W)), j]
        vals = np.abs(s)
        phase = np.where(vals > 0, np.conj(s) / np.where(vals > 0, vals, 1.0), 0.0)
        G = X.points[j] * phase[:, None]
        if not np.iscomplexobj(W):
            G = G.real
        return vals, G
    if _is_monomial_type(X):
        p = sorted_profile(X)
        A = np.abs(W)
        order = np.argsort(-A, axis=1, kind="stable")
        coef = np.empty_like(A)
        np.put_along_axis(coef, order, np.broadcast_to(p, A.shape), axis=1)
        vals = np.sum(coef * A, axis=1)
        unit = np.where(A > 0, W / np.where(A > 0, A, 1.0), 0.0)
        return vals, coef * unit
    # generic virtual sets: finite differences on the real coordinates
    vals = sup_correlation_many(X, W)
    h = 1e-7
    G = np.zeros_like(W)
    for k in range(W.shape[1]):
        E = np.zeros_like(W)
        E[:, k] = h
        G[:, k] = (sup_correlation_many(X, W + E) - vals) / h
        if np.iscomplexobj(W):
            E[:, k] = 1j * h
            G[:, k] += 1j * (sup_correlation_many(X, W + E) - vals) / h
    return vals, G


def _normalize_rows(W):
    return W / np.linalg.norm(W, axis=1, keepdims=True)


def _start_pool(X: TransitiveSet, cfg: SolverConfig, rng: np.random.Generator) -> np.ndarray:
    d = X.dim
    pool = [np.full(d, 1.0 / math.sqrt(d))]
    e1 = np.zeros(d)
    e1[0] = 1.0
    pool.append(e1)
    if d >= 2:
        pool.extend(dyadic_family(d).vectors[1:])
    pool = np.array(pool)
    if X.field == COMPLEX:
        pool = pool.astype(np.complex128)
    n_haar = max(cfg.restarts - len(pool), 0)
    if n_haar:
        pool = np.vstack([pool, haar_sample(d, X.field, rng, n_haar)])
    return pool[: max(cfg.restarts, 2)]


def _descend(X: TransitiveSet, W0: np.ndarray, cfg: SolverConfig) -> tuple[np.ndarray, np.ndarray, int]:
    W = W0.copy()
    vals, G = _values_and_subgradients(X, W)
    best_W, best_vals = W.copy(), vals.copy()
    stale = np.zeros(len(W), dtype=int)
    it = 0
    max_iters = cfg.max_iters
    if _is_monomial_type(X):
        # each step sorts every row; the exact prefix witness is added afterwards anyway
        max_iters = min(max_iters, max(100, int(cfg.work_budget / W.size)))
    for it in range(1, max_iters + 1):
        active = stale < cfg.patience
        if not np.any(active):
            break
        step = cfg.initial_step / (it ** cfg.step_decay)
        radial = np.real(np.sum(G * np.conj(W), axis=1))
        T = G - radial[:, None] * W
        norms = np.linalg.norm(T, axis=1)
        safe = np.where(norms > 0, norms, 1.0)
        upd = W - step * T / safe[:, None]
        W = np.where(active[:, None], _normalize_rows(upd), W)
        vals, G = _values_and_subgradients(X, W)
        better = vals < best_vals
        significant = vals < best_vals - cfg.min_improvement
        best_W[better] = W[better]
        best_vals[better] = vals[better]
        stale = np.where(significant, 0, stale + 1)
    return best_W, best_vals, it


def _polish_explicit(X: TransitiveSet, w0: np.ndarray, cfg: SolverConfig, max_points: int = 400) -> np.ndarray:
    """Local minimax refinement with SLSQP on the near-active orbit points."""
    P = X.points
    vals = np.abs(np.conj(w0) @ P.T)
    idx = np.argsort(-vals)[:max_points]
    A = P[idx]
    d = X.dim
    complex_case = np.iscomplexobj(A) or np.iscomplexobj(w0)

    if complex_case:
        def unpack(z):
            return z[:d] + 1j * z[d:2 * d], z[-1]
        z0 = np.concatenate([np.real(w0), np.imag(w0), [float(np.max(vals))]])
        cons = [
            {"type": "ineq", "fun": lambda z: z[-1] ** 2 - np.abs(A @ np.conj(unpack(z)[0])) ** 2},
            {"type": "eq", "fun": lambda z: np.sum(z[:-1] ** 2) - 1.0},
        ]
    else:
        Ar = np.real(A)
        z0 = np.concatenate([np.real(w0), [float(np.max(vals))]])
        cons = [
            {"type": "ineq", "fun": lambda z: z[-1] - Ar @ z[:-1],
             "jac": lambda z: np.hstack([-Ar, np.ones((len(Ar), 1))])},
            {"type": "ineq", "fun": lambda z: z[-1] + Ar @ z[:-1],
             "jac": lambda z: np.hstack([Ar, np.ones((len(Ar), 1))])},
            {"type": "eq", "fun": lambda z: np.sum(z[:-1] ** 2) - 1.0,
             "jac": lambda z: np.concatenate([2 * z[:-1], [0.0]])[None, :]},
        ]
    res = minimize(lambda z: z[-1], z0, jac=lambda z: np.eye(len(z0))[-1],
                   constraints=cons, method="SLSQP",
                   options={"maxiter": 500, "ftol": cfg.polish_tol})
    z = res.x
    w = z[:d] + 1j * z[d:2 * d] if complex_case else z[:d]
    n = np.linalg.norm(w)
    return w / n if n > 0 else w0


def width_upper(X: TransitiveSet, cfg: SolverConfig = SolverConfig()) -> tuple[np.ndarray, float]:
    w, val, _ = _width_upper(X, cfg)
    return w, val


def _width_upper(X: TransitiveSet, cfg: SolverConfig) -> tuple[np.ndarray, float, int]:
    rng = make_rng(cfg.seed)
    W0 = _start_pool(X, cfg, rng)
    cands, vals, iters = _descend(X, W0, cfg)
    if _is_monomial_type(X):
        _, flat = width_exact_monomial(X)
        flat = flat.astype(cands.dtype)
        cands = np.vstack([cands, flat])
        vals = np.concatenate([vals, [sup_correlation(X, flat)]])
    order = np.argsort(vals, kind="stable")
    best_w, best_val = cands[order[0]], float(vals[order[0]])
    if not X.is_virtual:
        for k in order[: min(4, len(order))]:
            w = _polish_explicit(X, cands[k], cfg)
            v = sup_correlation(X, w)
            if v < best_val:
                best_w, best_val = w, v
    return best_w, best_val, iters


# lower certificates ----------------------------------------------------------------

def width_lower_eig(X: TransitiveSet) -> float:
    if X.is_virtual:
        raise WrongKind("the covariance certificate needs an explicit point list")
    P = X.points
    M = (P.T @ np.conj(P)) / len(P)
    lam = float(np.linalg.eigvalsh(M)[0])
    return math.sqrt(max(lam, 0.0))


def width_exact_monomial(X: TransitiveSet) -> tuple[float, np.ndarray]:
    """Exact width of a monomial-type virtual set and a prefix-flat witness attaining it."""
    if not _is_monomial_type(X):
        raise WrongKind("exact formula applies to virtual monomial (or real signed-permutation) sets")
    p = sorted_profile(X)
    k = np.arange(1, len(p) + 1)
    vals = np.cumsum(p) / np.sqrt(k)
    i = int(np.argmin(vals))
    w = np.zeros(len(p))
    w[: i + 1] = 1.0 / math.sqrt(i + 1)
    return float(vals[i]), w


def angle_sweep(X: TransitiveSet, n_angles: int = 1_000_000, gap: float = 1e-10,
                max_rounds: int = 30) -> tuple[float, float, np.ndarray]:
    """Rigorous lower bound and best value for a real planar set.

    Each angle cell ``[a, b]`` of length ``h`` has ``f >= (f(a) + f(b))/2 - h/2``
    because ``f`` is 1-Lipschitz in the angle. Cells whose bound is below the
    best value are refined until the gap closes.
    """
    if X.is_virtual or X.dim != 2 or np.iscomplexobj(X.points):
        raise WrongKind("the angle sweep needs an explicit real planar set")
    P = X.points

    def f(theta):
        out = np.empty(len(theta))
        step = 200_000
        for s in range(0, len(theta), step):
            t = theta[s:s + step]
            out[s:s + step] = np.max(np.abs(np.cos(t)[:, None] * P[:, 0] + np.sin(t)[:, None] * P[:, 1]), axis=1)
        return out

    # w and -w give the same value, so angles in [0, pi] suffice
    edges = np.linspace(0.0, np.pi, n_angles + 1)
    fe = f(edges)
    best_i = int(np.argmin(fe))
    best_val, best_t = float(fe[best_i]), float(edges[best_i])
    lo, hi = edges[:-1], edges[1:]
    flo, fhi = fe[:-1], fe[1:]
    lower = float(np.min((flo + fhi) / 2 - (hi - lo) / 2))
    for _ in range(max_rounds):
        lb = (flo + fhi) / 2 - (hi - lo) / 2
        keep = lb < best_val - gap
        if not np.any(keep):
            lower = best_val - gap
            break
        lo, hi, flo, fhi = lo[keep], hi[keep], flo[keep], fhi[keep]
        sub = 16
        pts = lo[:, None] + (hi - lo)[:, None] * np.linspace(0, 1, sub + 1)[None, :]
        fp = f(pts.ravel()).reshape(pts.shape)
        j = np.unravel_index(np.argmin(fp), fp.shape)
        if fp[j] < best_val:
            best_val, best_t = float(fp[j]), float(pts[j])
        lo, hi = pts[:, :-1].ravel(), pts[:, 1:].ravel()
        flo, fhi = fp[:, :-1].ravel(), fp[:, 1:].ravel()
        lower = float(np.min((flo + fhi) / 2 - (hi - lo) / 2))
    else:
        lower = min(lower, best_val - gap)
    w = np.array([math.cos(best_t), math.sin(best_t)])
    return max(0.0, min(lower, best_val)), best_val, w


def real_witness_from_complex(w, X: TransitiveSet, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """Real part or imaginary part of ``w`` (the longer one), normalized.

    For real ``X`` every ``|<x, Re w>|`` and ``|<x, Im w>|`` is at most
    ``|<x, w>|`` and one of the parts has norm at least ``1/sqrt 2``, so the
    result's sup-correlation is within a factor ``sqrt 2`` of the input's.
    """
    w = np.asarray(w)
    pts = X.seed_vector if X.is_virtual else X.points
    if np.iscomplexobj(pts) and np.any(np.imag(pts) != 0):
        raise WrongKind("the set must consist of real vectors")
    if not np.iscomplexobj(w):
        return w.astype(np.float64)
    re, im = np.real(w), np.imag(w)
    nr, ni = np.linalg.norm(re), np.linalg.norm(im)
    if max(nr, ni) < tol.eq_tol:
        raise DegenerateWitness("both real and imaginary parts vanish")
    return re / nr if nr >= ni else im / ni


def width_report(X: TransitiveSet, cfg: SolverConfig = SolverConfig()) -> WidthReport:
    w, upper, iters = _width_upper(X, cfg)
    details: dict = {}
    if _is_monomial_type(X):
        lower, w_exact = width_exact_monomial(X)
        cert = PREFIX_FLAT
        v_exact = sup_correlation(X, w_exact)
        if v_exact < upper:
            w, upper = w_exact.astype(w.dtype), v_exact
    elif not X.is_virtual and X.dim == 2 and not np.iscomplexobj(X.points):
        lower, sweep_best, w_sweep = angle_sweep(X)
        cert = SWEEP2D
        details["eig"] = width_lower_eig(X)
        if sweep_best < upper:
            w, upper = w_sweep, sup_correlation(X, w_sweep)
    elif not X.is_virtual:
        lower = width_lower_eig(X)
        cert = EIG
    else:
        lower, cert = 0.0, TRIVIAL
    lower = min(lower, upper)
    return WidthReport(upper=upper, witness=w, lower=max(lower, 0.0), lower_certificate=cert,
                       iterations=iters, restarts=cfg.restarts, details=details)

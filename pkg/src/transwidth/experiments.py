"""Family sweeps and the verification suites behind ``transwidth verify``."""

from __future__ import annotations

import csv
import io
import itertools
import json
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Callable

import numpy as np

from .decompose import (
    coordinate_line_system,
    reynolds_invariant_subspaces,
    system_from_bases,
    validate_imprimitivity,
)
from .errors import NotASystem
from .groups import (
    TransitiveSet,
    basis_set,
    explicit_group,
    harmonic,
    hypercube_set,
    monomial_group,
    orbit_enumerate,
    permutation_group,
    sharpness_set,
    signed_permutation_group,
    simplex_set,
    square_set,
    sup_correlation,
    sup_correlation_many,
    virtual_set,
)
from .measures import (
    EtaParams,
    atom_measure,
    cap_tail,
    combine_imprimitive,
    combine_reducible,
    dyadic_family,
    dyadic_gram_exact,
    dyadic_m,
    dyadic_measure,
    eta_inequalities_check,
    fit_psi_constant,
    fixed_element_second_moment,
    log_grid,
    measure_risk,
    measure_risk_many,
    psi,
    psi_tail_bound,
    reducible_bound,
    selberg_bound,
)
from .numeric import haar_sample, make_rng, sorted_abs
from .width import (
    SolverConfig,
    angle_sweep,
    real_witness_from_complex,
    width_exact_monomial,
    width_report,
)

CSV_HEADER = ["family", "d", "width_upper", "width_lower", "inv_sqrt_log_d", "sqrt_psi"]
FAMILIES = ("sharpness", "hypercube", "basis", "simplex")
MAX_EXPLICIT_SWEEP_DIM = 512


# sweeps ------------------------------------------------------------------------

@dataclass
class SweepRow:
    family: str
    d: int
    width_upper: float = math.nan
    width_lower: float = math.nan
    inv_sqrt_log_d: float = math.nan
    sqrt_psi: float = math.nan
    error: str = ""


@dataclass
class RunConfig:
    dims: list
    family: str = "sharpness"
    seed: int = 0
    out: str | None = None
    format: str = "csv"
    threads: int = 1
    solver: SolverConfig = field(default_factory=SolverConfig)
    custom_set: Callable[[int], TransitiveSet] | None = None

    def __post_init__(self):
        if not self.dims or any(int(d) < 1 for d in self.dims):
            raise ValueError("dims must be a nonempty list of positive integers")
        if self.family not in FAMILIES + ("custom",):
            raise ValueError(f"unknown family {self.family!r}")
        if self.family == "custom" and self.custom_set is None:
            raise ValueError("custom family needs a set factory")
        if self.format not in ("csv", "json"):
            raise ValueError("format must be csv or json")


def family_set(family: str, d: int) -> TransitiveSet:
    if family == "sharpness":
        return sharpness_set(d)
    if family == "hypercube":
        return hypercube_set(d)
    if family == "basis":
        return basis_set(d)
    if family == "simplex":
        if d > MAX_EXPLICIT_SWEEP_DIM:
            raise ValueError(f"explicit simplex sweep limited to d <= {MAX_EXPLICIT_SWEEP_DIM}")
        return simplex_set(d)
    raise ValueError(f"unknown family {family!r}")


def _row(cfg: RunConfig, d: int) -> SweepRow:
    row = SweepRow(cfg.family, d)
    row.inv_sqrt_log_d = 1.0 / math.sqrt(math.log(d)) if d >= 2 else math.nan
    row.sqrt_psi = math.sqrt(psi(d))
    try:
        X = cfg.custom_set(d) if cfg.family == "custom" else family_set(cfg.family, d)
        solver = SolverConfig(**{**asdict(cfg.solver), "seed": int(make_rng(cfg.seed, d).integers(2**63))})
        rep = width_report(X, solver)
        row.width_upper, row.width_lower = rep.upper, rep.lower
    except Exception as exc:  # recorded per row; the sweep continues
        row.error = f"{type(exc).__name__}: {exc}"
    return row


def run_sweep(cfg: RunConfig) -> list[SweepRow]:
    dims = [int(d) for d in cfg.dims]
    if cfg.threads > 1:
        with ThreadPoolExecutor(cfg.threads) as pool:
            rows = list(pool.map(lambda d: _row(cfg, d), dims))
    else:
        rows = [_row(cfg, d) for d in dims]
    if cfg.out:
        with open(cfg.out, "w", newline="") as fh:
            fh.write(format_rows(rows, cfg.format))
    return rows


def _fmt(x: float) -> str:
    return "" if x is None or (isinstance(x, float) and math.isnan(x)) else repr(float(x))


def format_rows(rows: list[SweepRow], fmt: str = "csv") -> str:
    if fmt == "json":
        return json.dumps([asdict(r) for r in rows], indent=2, default=float) + "\n"
    with_err = any(r.error for r in rows)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER + (["error"] if with_err else []))
    for r in rows:
        line = [r.family, r.d, _fmt(r.width_upper), _fmt(r.width_lower), _fmt(r.inv_sqrt_log_d), _fmt(r.sqrt_psi)]
        w.writerow(line + ([r.error] if with_err else []))
    return buf.getvalue()


def rows_to_svg(rows: list[SweepRow], width: int = 640, height: int = 400) -> str:
    """Minimal SVG: width bounds against log2 d with the reference curve 1/sqrt(ln d)."""
    pts = [r for r in rows if r.d >= 2 and not r.error]
    if not pts:
        return '<svg xmlns="http://www.w3.org/2000/svg"/>\n'
    xs = [math.log2(r.d) for r in pts]
    x0, x1 = min(xs), max(xs) if max(xs) > min(xs) else min(xs) + 1
    pad = 40

    def sx(x):
        return pad + (x - x0) / (x1 - x0) * (width - 2 * pad)

    def sy(y):
        return height - pad - min(max(y, 0.0), 1.5) / 1.5 * (height - 2 * pad)

    def poly(ys, color):
        coords = " ".join(f"{sx(x):.2f},{sy(y):.2f}" for x, y in zip(xs, ys))
        return f'<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{coords}"/>'

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
        poly([r.width_upper for r in pts], "#1f77b4"),
        poly([r.width_lower for r in pts], "#ff7f0e"),
        poly([r.inv_sqrt_log_d for r in pts], "#7f7f7f"),
        f'<text x="{pad}" y="20" font-size="12">width upper (blue), lower (orange), '
        f'1/sqrt(ln d) (grey) vs log2 d</text>',
        "</svg>",
    ]
    return "\n".join(parts) + "\n"


# verification suites -------------------------------------------------------------

@dataclass
class SuiteResult:
    name: str
    passed: bool
    margin: float
    lines: list = field(default_factory=list)
    seconds: float = 0.0

    def summary(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"[{status}] {self.name}: min margin {self.margin:.3e} ({self.seconds:.1f}s)"


def _timed(fn):
    def wrapper(*args, **kwargs):
        t0 = time.perf_counter()
        res = fn(*args, **kwargs)
        res.seconds = time.perf_counter() - t0
        return res
    wrapper.__name__ = fn.__name__
    wrapper.__doc__ = fn.__doc__
    return wrapper


@_timed
def suite_gram(dims=(2, 4, 16, 256, 4096, 2 ** 20), tol: float = 1e-12) -> SuiteResult:
    """Dyadic Gram entries equal 2^{-|i-j|/2}."""
    lines, worst = [], 0.0
    for d in dims:
        fam = dyadic_family(d)
        err = float(np.max(np.abs(fam.gram() - dyadic_gram_exact(fam.m))))
        worst = max(worst, err)
        lines.append(f"d={d} m={fam.m} max|gram-2^(-|i-j|/2)|={err:.2e}")
    return SuiteResult("gram", worst <= tol, tol - worst, lines)


@_timed
def suite_selberg(dims=(2, 16, 256, 4096), n: int = 10_000, seed: int = 0, slack: float = 1e-9) -> SuiteResult:
    """sum_i |<v, e_i>|^2 <= max row sum of |Gram| for random and extremal unit v."""
    lines, margin, violations = [], np.inf, 0
    for d in dims:
        E = dyadic_family(d).vectors
        bound = selberg_bound(E)
        rng = make_rng(seed, d)
        worst = 0.0
        for s in range(0, n, 1000):
            V = haar_sample(d, "complex", rng, min(1000, n - s))
            S = np.sum(np.abs(np.conj(E) @ V.T) ** 2, axis=0)
            worst = max(worst, float(np.max(S)))
            violations += int(np.count_nonzero(S > bound + slack))
        # extremal direction: top eigenvector of E^T E lies in the span of the family
        evals, evecs = np.linalg.eigh(E @ E.T)
        top = evecs[:, -1] @ E
        top /= np.linalg.norm(top)
        s_top = float(np.sum((E @ top) ** 2))
        violations += int(s_top > bound + slack)
        worst = max(worst, s_top)
        margin = min(margin, bound - worst)
        lines.append(f"d={d} bound={bound:.10f} max_sum={worst:.10f} (lambda_max={evals[-1]:.10f})")
    lines.append(f"violations={violations}")
    return SuiteResult("selberg", violations == 0, float(margin), lines)


@_timed
def suite_risk(dims=range(2, 4097), n_seeds: int = 100, seed: int = 0, psi_max_d: int = 10 ** 6,
               slack: float = 1e-9) -> SuiteResult:
    """Dyadic measure risk on monomial orbits <= psi(d); psi < 1 and its log-decay envelope."""
    margin, bad = np.inf, 0
    lines = []
    dims = list(dims)
    spot = set(dims[:: max(1, len(dims) // 16)])
    consistency, raw = 0.0, np.inf
    for d in dims:
        mu = dyadic_measure(d)
        p = psi(d)
        # orbits of the monomial group only see |v|; for a Haar v, |v_i|^2 are normalized exponentials
        seeds = np.sqrt(make_rng(seed, d).exponential(1.0, (n_seeds, d)))
        seeds /= np.linalg.norm(seeds, axis=1, keepdims=True)
        extra = dyadic_family(d).vectors.sum(axis=0)
        seeds = np.vstack([seeds, extra / np.linalg.norm(extra)])
        g = monomial_group(d)
        risks = measure_risk_many(mu, g, seeds)
        if d in spot:
            # the batched path must agree with the per-orbit evaluation
            for v, r in zip(seeds[:5], risks[:5]):
                consistency = max(consistency, abs(measure_risk(mu, virtual_set(g, v)).value - r))
        raw = min(raw, float(np.min(p - risks)))
        margin = min(margin, float(np.min(p + slack - risks)))
        bad += int(np.count_nonzero(risks > p + slack))
    lines.append(f"risk: d in [{min(dims)}, {max(dims)}], {n_seeds}+1 seeds each, min psi-risk margin={raw:.3e}, "
                 f"batched vs per-orbit max diff={consistency:.1e}")
    # psi depends on d only through m, so scan the m-ranges exactly
    psi_bad, env_margin = 0, np.inf
    for m in range(1, dyadic_m(psi_max_d) + 1):
        lo, hi = 4 ** (m - 1) + 1, min(4 ** m, psi_max_d)
        if lo > psi_max_d:
            break
        lo = max(lo, 2)
        pv = psi(hi)
        psi_bad += pv >= 1.0
        # envelope decreases in d, so the largest d of the m-range is the binding one
        env_margin = min(env_margin, psi_tail_bound(hi) - pv)
    lines.append(f"psi<1 failures={psi_bad}; min envelope margin over 2..{psi_max_d}={env_margin:.3e}")
    c1, d1 = fit_psi_constant(psi_max_d, 1.0)
    c2, d2 = fit_psi_constant(psi_max_d, 0.5)
    lines.append(f"fitted c' for psi <= (1 + c' ln d)^-1: {c1:.6f} (binding d={d1}); "
                 f"for psi <= (1 + c' ln d)^-1/2: {c2:.6f} (binding d={d2})")
    ok = bad == 0 and psi_bad == 0 and env_margin >= 0 and consistency <= 1e-12
    return SuiteResult("risk", bool(ok), float(min(margin, env_margin)), lines)


@_timed
def suite_sharpness(dims=(2, 4, 16, 64, 256, 1024, 4096), seed: int = 0, ratio_max: float = 4.0,
                    cfg: SolverConfig | None = None) -> SuiteResult:
    """Sharpness set: lower = 1/sqrt(H_d), upper <= sqrt(psi(d)), upper/lower bounded."""
    lines, ok, margin = [], True, np.inf
    for d in dims:
        rep = width_report(sharpness_set(d), cfg or SolverConfig(seed=seed))
        floor = 1.0 / math.sqrt(harmonic(d))
        sp = math.sqrt(psi(d))
        ratio = rep.upper / rep.lower
        good = abs(rep.lower - floor) <= 1e-9 and rep.upper <= sp and ratio <= ratio_max
        ok &= good
        margin = min(margin, 1e-9 - abs(rep.lower - floor), sp - rep.upper, ratio_max - ratio)
        lines.append(f"d={d} lower={rep.lower:.10f} 1/sqrt(H_d)={floor:.10f} upper={rep.upper:.10f} "
                     f"sqrt(psi)={sp:.6f} ratio={ratio:.4f}")
    return SuiteResult("sharpness", bool(ok), float(margin), lines)


@_timed
def suite_exact(seed: int = 0, tol: float = 1e-6, pair_tol: float = 1e-5) -> SuiteResult:
    """Square, basis and hypercube orbits have width exactly 1/sqrt(d)."""
    lines, ok, margin = [], True, np.inf
    cfg = SolverConfig(seed=seed)

    def check(name, X, target):
        nonlocal ok, margin
        rep = width_report(X, cfg)
        e = max(abs(rep.upper - target), abs(rep.lower - target))
        gap = rep.upper - rep.lower
        good = e <= tol and gap <= pair_tol
        ok &= good
        margin = min(margin, tol - e, pair_tol - gap)
        lines.append(f"{name}: upper={rep.upper:.12f} lower={rep.lower:.12f} target={target:.12f} "
                     f"cert={rep.lower_certificate}")

    sq = square_set()
    _, sweep_best, _ = angle_sweep(sq)
    check("square", sq, sweep_best)
    for d in range(2, 10):
        e1 = np.zeros(d)
        e1[0] = 1.0
        check(f"basis d={d}", orbit_enumerate(signed_permutation_group(d), e1), 1 / math.sqrt(d))
    for d in range(2, 17):
        check(f"hypercube d={d}", hypercube_set(d), 1 / math.sqrt(d))
    return SuiteResult("exact", bool(ok), float(margin), lines)


def brute_force_profile_width(p: np.ndarray, n_samples: int, rng: np.random.Generator,
                              n_polish: int = 10) -> float:
    """Independent estimate of min over unit w of sum_i p_i |w|_(i) by sampling plus SLSQP on the sorted cone."""
    from scipy.optimize import minimize

    d = len(p)
    W = rng.standard_normal((n_samples, d))
    # half the samples are sparse so that low-dimensional faces of the cone get hit too
    half = n_samples // 2
    W[:half] *= rng.random((half, d)) < 0.5
    W[np.all(W == 0, axis=1), 0] = 1.0
    W /= np.linalg.norm(W, axis=1, keepdims=True)
    vals = sorted_abs(W) @ p
    best = float(np.min(vals))
    # polish the best dense and the best sparse samples separately so neither kind crowds out the other
    pick = np.concatenate([np.argsort(vals[half:])[:n_polish] + half, np.argsort(vals[:half])[:n_polish]])
    starts = sorted_abs(W[pick])
    cons = [{"type": "ineq", "fun": lambda w: np.append(w[:-1] - w[1:], w[-1]),
             "jac": lambda w: np.vstack([np.eye(d)[:-1] - np.eye(d, k=1)[:-1], np.eye(d)[-1]])},
            {"type": "eq", "fun": lambda w: w @ w - 1.0, "jac": lambda w: 2 * w[None, :]}]
    for w0 in starts:
        res = minimize(lambda w: p @ w, w0, jac=lambda w: p, constraints=cons, method="SLSQP",
                       options={"ftol": 1e-14, "maxiter": 200})
        w = sorted_abs(res.x)
        if np.linalg.norm(w) > 0:
            best = min(best, float(sorted_abs(w / np.linalg.norm(w)) @ p))
    return best


@_timed
def suite_prefix(n_profiles: int = 200, max_d: int = 6, n_samples: int = 100_000, seed: int = 0) -> SuiteResult:
    """Prefix-flat formula equals a randomized brute-force minimum."""
    rng = make_rng(seed)
    below, far, margin = 0, 0, np.inf
    worst_gap = 0.0
    for k in range(n_profiles):
        d = int(rng.integers(1, max_d + 1))
        p = sorted_abs(rng.standard_normal(d) * rng.exponential(1.0, d))
        p /= np.linalg.norm(p)
        exact, _ = width_exact_monomial(virtual_set(monomial_group(d), p))
        brute = brute_force_profile_width(p, n_samples, rng)
        below += exact > brute + 1e-9
        gap = brute - exact
        far += gap > 1e-4
        worst_gap = max(worst_gap, gap)
        margin = min(margin, brute + 1e-9 - exact, 1e-4 - gap)
    lines = [f"{n_profiles} profiles: exact>brute+1e-9 count={below}, gap>1e-4 count={far}, "
             f"max gap={worst_gap:.3e}"]
    return SuiteResult("prefix", below == 0 and far == 0, float(margin), lines)


@_timed
def suite_eta(n: int = 100, hi: float = 1e6, tol: float = 1e-12) -> SuiteResult:
    """Both eta inequalities on a log grid, with equality of the sum rule at x = y = 1."""
    rep = eta_inequalities_check(EtaParams(), log_grid(n, 1.0, hi), tol=tol)
    eq_at_one = (1.0, 1.0) in rep.equality_points_sum
    lines = [
        f"c={rep.c:.12f} points={rep.n_points}",
        f"sum rule: min margin {rep.min_margin_sum:.3e} (expanded {rep.min_margin_sum_expanded:.3e}) "
        f"at {rep.argmin_sum}",
        f"product rule: min margin {rep.min_margin_product:.3e} (expanded {rep.min_margin_product_expanded:.3e})",
        f"equality at (1,1) detected: {eq_at_one}",
    ]
    margin = min(rep.min_margin_sum, rep.min_margin_sum_expanded,
                 rep.min_margin_product, rep.min_margin_product_expanded)
    return SuiteResult("eta", bool(rep.passed and eq_at_one), float(margin + tol), lines)


@_timed
def suite_cap(cases=((50, 0.3), (100, 0.3), (200, 0.25)), n: int = 100_000, seed: int = 0) -> SuiteResult:
    """Haar tail P(|<v,w>| > t) <= 2 exp(-t^2 d/2) + 3 sigma."""
    lines, ok, margin = [], True, np.inf
    for d, t in cases:
        rep = cap_tail(d, t, n, make_rng(seed, d))
        ok &= rep.passed
        margin = min(margin, rep.bound + rep.slack - rep.p_hat)
        lines.append(f"d={d} t={t} p_hat={rep.p_hat:.5f} bound={rep.bound:.5f} slack={rep.slack:.5f}")
    return SuiteResult("cap", bool(ok), float(margin), lines)


def _sign_flip_group():
    return explicit_group([np.diag([-1.0, 1.0]), np.diag([1.0, -1.0])])


@_timed
def suite_combine(seed: int = 0, dims=(4, 16), n_seeds: int = 100) -> SuiteResult:
    """Reducible 1+1 combination and the coordinate-line imprimitive combination."""
    lines, ok, margin = [], True, np.inf
    rng = make_rng(seed)
    half = atom_measure([[1.0], [-1.0]], [0.5, 0.5])
    mu = combine_reducible(half, half, 1.0, 1.0, np.array([1.0, 0.0]), np.array([0.0, 1.0]))
    target = reducible_bound(1.0, 1.0) ** 2
    # every fixed group element: integral |<g v, w>|^2 = l1^2 v1^2 + l2^2 v2^2 = 1/2
    flips = [np.diag([a, b]) for a in (1.0, -1.0) for b in (1.0, -1.0)]
    worst = 0.0
    for v in haar_sample(2, "real", rng, 200):
        for g in flips:
            worst = max(worst, abs(fixed_element_second_moment(mu, g @ v) - target))
    ok &= worst <= 1e-12
    margin = min(margin, 1e-12 - worst)
    lines.append(f"reducible 1+1: max |fixed-g second moment - 1/2| = {worst:.2e}")
    # full risk (sup inside) for G = {+-I}, which preserves both lines
    minus = explicit_group([-np.eye(2)])
    worst = 0.0
    for v in haar_sample(2, "real", rng, 200):
        r = measure_risk(mu, orbit_enumerate(minus, v)).value
        worst = max(worst, abs(r - target))
    ok &= worst <= 1e-12
    margin = min(margin, 1e-12 - worst)
    lines.append(f"reducible 1+1, G={{+-I}}: max |risk - 1/2| = {worst:.2e}")
    # sign flips: the supremum sits inside the integral, so the risk is (|v1|+|v2|)^2/2, not 1/2
    v = np.array([1.0, 1.0]) / math.sqrt(2)
    r_flip = measure_risk(mu, orbit_enumerate(_sign_flip_group(), v)).value
    lines.append(f"reducible 1+1, G=sign flips, v=(1,1)/sqrt2: risk = {r_flip:.12f} (exceeds 1/2)")

    for d in dims:
        e1 = np.zeros(d)
        e1[0] = 1.0
        mu1 = atom_measure([e1, -e1], [0.5, 0.5])
        gammas = coordinate_line_system(d).coset_maps
        comb = combine_imprimitive(mu1, dyadic_measure(d), gammas)
        p = psi(d)
        g = monomial_group(d)
        worst = -np.inf
        for v in haar_sample(d, "complex", make_rng(seed, d), n_seeds):
            worst = max(worst, measure_risk(comb, virtual_set(g, v)).value)
        ok &= worst <= p + 1e-9
        margin = min(margin, p + 1e-9 - worst)
        lines.append(f"imprimitive coordinate lines d={d}: atoms={comb.size} max risk={worst:.10f} psi={p:.10f}")
    return SuiteResult("combine", bool(ok), float(margin), lines)


@_timed
def suite_decompose(seed: int = 0) -> SuiteResult:
    """Permutation representations split as trivial + standard; imprimitivity validation."""
    lines, ok, margin = [], True, np.inf
    for n in (3, 5):
        g = permutation_group(n)
        dec = reynolds_invariant_subspaces(g, seed)
        gens = g.generator_matrices()
        comm = max(float(np.max(np.abs(m @ P - P @ m))) for P in dec.projectors() for m in gens)
        good = sorted(dec.dims) == [1, n - 1] and comm <= 1e-8
        ok &= good
        margin = min(margin, 1e-8 - comm)
        lines.append(f"S_{n}: dims={sorted(dec.dims)} max commutator={comm:.2e}")
    for d in (2, 4, 6):
        rep = validate_imprimitivity(coordinate_line_system(d), signed_permutation_group(d))
        lines.append(f"coordinate lines d={d} under signed permutations: valid, sigma={rep.sigma}")
    bad = system_from_bases([[1.0, 0.0], [1.0, 1.0]])
    try:
        validate_imprimitivity(bad, permutation_group(2))
        ok = False
        lines.append("non-orthogonal blocks: wrongly accepted")
    except NotASystem as exc:
        lines.append(f"non-orthogonal blocks rejected: {exc}")
    return SuiteResult("decompose", bool(ok), float(margin), lines)


def signed_cyclic_group(d: int):
    """Cyclic coordinate shift together with a sign flip (a real group of order d 2^d)."""
    shift = np.roll(np.eye(d), 1, axis=0)
    flip = np.eye(d)
    flip[0, 0] = -1.0
    return explicit_group([shift, flip])


@_timed
def suite_realify(n_pairs: int = 1000, dims=range(2, 9), seed: int = 0) -> SuiteResult:
    """Real witness from a complex one loses at most a factor sqrt(2)."""
    rng = make_rng(seed)
    dims = list(dims)
    per = [n_pairs // len(dims) + (i < n_pairs % len(dims)) for i in range(len(dims))]
    margin, bad, worst_ratio = np.inf, 0, 0.0
    for d, k in zip(dims, per):
        group = signed_cyclic_group(d)
        for j in range(k):
            if j % 25 == 0:
                v = haar_sample(d, "real", rng, 1)[0]
                X = orbit_enumerate(group, v)
            w = haar_sample(d, "complex", rng, 1)[0]
            c = sup_correlation(X, w)
            r = sup_correlation(X, real_witness_from_complex(w, X))
            bad += r > math.sqrt(2) * c + 1e-9
            margin = min(margin, math.sqrt(2) * c + 1e-9 - r)
            worst_ratio = max(worst_ratio, r / c)
    lines = [f"{n_pairs} pairs, d in {dims[0]}..{dims[-1]}: violations={bad}, max ratio={worst_ratio:.6f}"]
    return SuiteResult("realify", bad == 0, float(margin), lines)


def _discretized_monomial_sup(v: np.ndarray, w: np.ndarray, n_phase: int) -> float:
    d = len(v)
    phases = np.exp(2j * np.pi * np.arange(n_phase) / n_phase)
    best = 0.0
    for perm in itertools.permutations(range(d)):
        z = v[list(perm)] * np.conj(w)
        total = np.full(1, z[0])
        for i in range(1, d):
            total = (total[:, None] + phases[None, :] * z[i]).ravel()
        best = max(best, float(np.max(np.abs(total))))
    return best


def _signed_perm_enumeration(v: np.ndarray, w: np.ndarray) -> float:
    d = len(v)
    best = 0.0
    for perm in itertools.permutations(range(d)):
        for signs in itertools.product((1.0, -1.0), repeat=d):
            best = max(best, abs(float(np.dot(np.array(signs) * v[list(perm)], w))))
    return best


@_timed
def suite_rearrange(n_pairs: int = 100, seed: int = 0, n_phase: int = 72) -> SuiteResult:
    """Closed-form monomial sup agrees with phase/permutation discretization and signed enumeration."""
    rng = make_rng(seed)
    worst_c, worst_r = 0.0, 0.0
    for k in range(n_pairs):
        d = 2 + k % 3
        v = haar_sample(d, "complex", rng, 1)[0]
        w = haar_sample(d, "complex", rng, 1)[0]
        closed = sup_correlation(virtual_set(monomial_group(d), v), w)
        disc = _discretized_monomial_sup(v, w, n_phase)
        worst_c = max(worst_c, abs(closed - disc))
        vr = haar_sample(d, "real", rng, 1)[0]
        wr = haar_sample(d, "real", rng, 1)[0]
        closed_r = sup_correlation(virtual_set(signed_permutation_group(d), vr), wr)
        worst_r = max(worst_r, abs(closed_r - _signed_perm_enumeration(vr, wr)))
    ok = worst_c <= 1e-3 and worst_r <= 1e-9
    lines = [f"max |closed - discretized| = {worst_c:.2e} (tol 1e-3)",
             f"max |closed - signed enumeration| = {worst_r:.2e} (tol 1e-9)"]
    return SuiteResult("rearrange", ok, float(min(1e-3 - worst_c, 1e-9 - worst_r)), lines)


SUITES: dict[str, Callable[..., SuiteResult]] = {
    "gram": suite_gram,
    "selberg": suite_selberg,
    "risk": suite_risk,
    "sharpness": suite_sharpness,
    "exact": suite_exact,
    "prefix": suite_prefix,
    "eta": suite_eta,
    "cap": suite_cap,
    "combine": suite_combine,
    "decompose": suite_decompose,
    "realify": suite_realify,
    "rearrange": suite_rearrange,
}

_SEEDED = {"selberg", "risk", "sharpness", "exact", "prefix", "cap", "combine", "decompose", "realify", "rearrange"}


def run_verify(suite: str, seed: int = 0) -> SuiteResult:
    if suite not in SUITES:
        raise ValueError(f"unknown suite {suite!r}; choose from {sorted(SUITES)}")
    fn = SUITES[suite]
    return fn(seed=seed) if suite in _SEEDED else fn()


def run_verify_all(seed: int = 0, names=None) -> list[SuiteResult]:
    return [run_verify(name, seed) for name in (names or SUITES)]

"""Monte Carlo threshold estimation.

Campaigns sweep an error ray p_erasure = c_erasure * x, p_error = c_error * x
over lattice sizes, fit each size's logical-error curve to a rescaled and
shifted beta CDF, and locate the threshold as the dispersion-minimizing
crossing of the fitted curves.

Trials use counter-based RNG streams keyed by (master seed, point stream id,
trial index), so results are bit-identical for any worker count and any
scheduling order; per-point failure counts are plain sums.
"""

from __future__ import annotations

import csv
import math
import os
from dataclasses import dataclass, field
from multiprocessing import Pool
from typing import Iterable, Optional, Sequence

import numpy as np
from scipy import optimize, special

from .decoder import decode_trial
from .errormodel import (
    HardwareAgnosticParams,
    LinearOpticalParams,
    NoSolutionError,
    effective_erasure,
    loss_threshold,
    sample_hardware_agnostic,
    trial_rng,
)
from .networks import build_4star, build_6ring
from .syndrome import SyndromeGraph, derive_syndrome_graphs

__all__ = [
    "SweepSpec",
    "CurvePoint",
    "BetaCdfFit",
    "ThresholdEstimate",
    "FitFailedError",
    "NoCrossingError",
    "build_graphs",
    "run_point",
    "run_sweep",
    "fit_beta_cdf",
    "find_threshold",
    "estimate_threshold",
    "trace_correctable_region",
    "loss_failure_curve",
    "write_points_csv",
    "write_thresholds_csv",
]

_KIND_BUILDERS = {"four-star": build_4star, "six-ring": build_6ring}


class FitFailedError(RuntimeError):
    pass


class NoCrossingError(RuntimeError):
    pass


@dataclass(frozen=True)
class SweepSpec:
    kind: str
    sizes: tuple[int, ...]
    c_erasure: float
    c_error: float
    x_values: tuple[float, ...]
    trials_per_point: int = 15000
    master_seed: int = 2024

    def __post_init__(self):
        if self.kind not in _KIND_BUILDERS:
            raise ValueError(f"unknown network kind {self.kind!r}")
        if any(L < 2 for L in self.sizes):
            raise ValueError("sizes must be >= 2")
        if self.trials_per_point < 1:
            raise ValueError("trials_per_point must be >= 1")
        if self.c_erasure < 0 or self.c_error < 0 or (
            self.c_erasure == 0 and self.c_error == 0
        ):
            raise ValueError("ray coefficients must be >= 0 and not both 0")

    def params_at(self, x: float) -> HardwareAgnosticParams:
        return HardwareAgnosticParams(self.c_erasure * x, self.c_error * x)


@dataclass(frozen=True)
class CurvePoint:
    kind: str
    L: int
    x: float
    p_erasure: float
    p_error: float
    trials: int
    failures: int

    @property
    def rate(self) -> float:
        return self.failures / self.trials

    def wilson_ci(self, z: float = 1.96) -> tuple[float, float]:
        n = self.trials
        p = self.rate
        den = 1 + z * z / n
        center = (p + z * z / (2 * n)) / den
        half = z * math.sqrt(p * (1 - p) / n + z * z / (4 * n * n)) / den
        return (max(0.0, center - half), min(1.0, center + half))


@dataclass(frozen=True)
class BetaCdfFit:
    """rate(x) = y0 + (y1 - y0) * I_{(x-a)/(b-a)}(alpha, beta)."""

    y0: float
    y1: float
    a: float
    b: float
    alpha: float
    beta: float
    residuals: tuple[float, ...]

    def __call__(self, x):
        t = np.clip((np.asarray(x, dtype=float) - self.a) / (self.b - self.a),
                    0.0, 1.0)
        return self.y0 + (self.y1 - self.y0) * special.betainc(
            self.alpha, self.beta, t
        )


@dataclass(frozen=True)
class ThresholdEstimate:
    kind: str
    c_erasure: float
    c_error: float
    x_threshold: float
    uncertainty: float
    crossings: tuple[float, ...]
    fits: dict[int, BetaCdfFit] = field(compare=False, hash=False, default=None)

    @property
    def p_erasure_star(self) -> float:
        return self.c_erasure * self.x_threshold

    @property
    def p_error_star(self) -> float:
        return self.c_error * self.x_threshold


def build_graphs(kind: str, L: int) -> tuple[SyndromeGraph, SyndromeGraph]:
    net = _KIND_BUILDERS[kind](L, periodic=True)
    return derive_syndrome_graphs(net)


# -- worker plumbing ---------------------------------------------------------

_WORKER: dict = {}


def _init_worker(graphs, params, master_seed, stream_base):
    _WORKER["graphs"] = graphs
    _WORKER["params"] = params
    _WORKER["seed"] = master_seed
    _WORKER["stream_base"] = stream_base


def _count_chunk(args) -> int:
    start, count = args
    graphs = _WORKER["graphs"]
    params = _WORKER["params"]
    seed = _WORKER["seed"]
    base = _WORKER["stream_base"]
    failures = 0
    for t in range(start, start + count):
        failed = False
        for side, graph in enumerate(graphs):
            rng = trial_rng(seed, base + side, t)
            sample = sample_hardware_agnostic(params, graph.n_edges, rng)
            if decode_trial(graph, sample).failed:
                failed = True
        failures += int(failed)
    return failures


def run_point(
    graphs: tuple[SyndromeGraph, SyndromeGraph],
    params: HardwareAgnosticParams,
    trials: int,
    master_seed: int,
    stream_base: int = 0,
    workers: int = 1,
    kind: str = "",
    L: int = 0,
    x: float = 0.0,
) -> CurvePoint:
    """Estimate the logical failure rate at one parameter point.

    A trial fails when the primal or dual decode reports a nontrivial
    winding in any direction.  Streams are indexed so results do not depend
    on worker count or scheduling.
    """
    chunk = 256
    tasks = [
        (start, min(chunk, trials - start)) for start in range(0, trials, chunk)
    ]
    if workers <= 1:
        _init_worker(graphs, params, master_seed, stream_base)
        failures = sum(_count_chunk(t) for t in tasks)
    else:
        with Pool(
            workers,
            initializer=_init_worker,
            initargs=(graphs, params, master_seed, stream_base),
        ) as pool:
            failures = sum(pool.imap_unordered(_count_chunk, tasks))
    return CurvePoint(
        kind=kind,
        L=L,
        x=x,
        p_erasure=params.p_erasure,
        p_error=params.p_error,
        trials=trials,
        failures=failures,
    )


def run_sweep(spec: SweepSpec, workers: int = 1,
              progress=None) -> list[CurvePoint]:
    """All (size, x) points of a sweep; stream ids enumerate the grid."""
    points = []
    for li, L in enumerate(spec.sizes):
        graphs = build_graphs(spec.kind, L)
        for xi, x in enumerate(spec.x_values):
            stream_base = 2 * (li * len(spec.x_values) + xi)
            pt = run_point(
                graphs,
                spec.params_at(x),
                spec.trials_per_point,
                spec.master_seed,
                stream_base=stream_base,
                workers=workers,
                kind=spec.kind,
                L=L,
                x=x,
            )
            points.append(pt)
            if progress is not None:
                progress(pt)
    return points


def fit_beta_cdf(points: Sequence[CurvePoint]) -> BetaCdfFit:
    """Least-squares fit of the 6-parameter rescaled/shifted beta CDF."""
    if len(points) < 4:
        raise FitFailedError("need at least 4 points to fit")
    xs = np.array([p.x for p in points], float)
    ys = np.array([p.rate for p in points], float)
    order = np.argsort(xs)
    xs, ys = xs[order], ys[order]
    if np.allclose(ys, ys[0]):
        raise FitFailedError("constant failure rates; fit is degenerate")
    span = xs[-1] - xs[0]

    def model(x, y0, y1, a, b, alpha, beta):
        t = np.clip((x - a) / max(b - a, 1e-12), 0.0, 1.0)
        return y0 + (y1 - y0) * special.betainc(alpha, beta, t)

    p0 = [max(ys.min(), 1e-4), min(ys.max(), 1.0), xs[0] - 0.5 * span,
          xs[-1] + 0.5 * span, 2.0, 2.0]
    bounds = (
        [0.0, 0.0, xs[0] - 10 * span, xs[0] - 9.99 * span, 0.05, 0.05],
        [1.0, 1.0, xs[-1] + 9.99 * span, xs[-1] + 10 * span, 50.0, 50.0],
    )
    try:
        popt, _ = optimize.curve_fit(
            model, xs, ys, p0=p0, bounds=bounds, maxfev=20000
        )
    except (RuntimeError, ValueError) as exc:
        raise FitFailedError(str(exc)) from exc
    resid = tuple(float(r) for r in (ys - model(xs, *popt)))
    return BetaCdfFit(*[float(v) for v in popt], residuals=resid)


def find_threshold(
    fits: dict[int, BetaCdfFit],
    x_lo: float,
    x_hi: float,
    kind: str = "",
    c_erasure: float = 0.0,
    c_error: float = 0.0,
) -> ThresholdEstimate:
    """Average pairwise crossing of the fitted curves, spread as uncertainty."""
    sizes = sorted(fits)
    if len(sizes) < 2:
        raise NoCrossingError("need fits for at least two sizes")
    crossings = []
    for i in range(len(sizes)):
        for j in range(i + 1, len(sizes)):
            fi, fj = fits[sizes[i]], fits[sizes[j]]

            def diff(x):
                return fi(x) - fj(x)

            # find a sign change on a fine grid, then refine
            grid = np.linspace(x_lo, x_hi, 201)
            vals = diff(grid)
            idx = np.where(np.signbit(vals[:-1]) != np.signbit(vals[1:]))[0]
            if idx.size == 0:
                continue
            k = int(idx[0])
            try:
                root = optimize.brentq(diff, grid[k], grid[k + 1])
            except ValueError:
                continue
            crossings.append(float(root))
    if not crossings:
        raise NoCrossingError("fitted curves do not cross in the swept range")
    x_star = float(np.mean(crossings))
    spread = (max(crossings) - min(crossings)) / 2 if len(crossings) > 1 else 0.0
    return ThresholdEstimate(
        kind=kind,
        c_erasure=c_erasure,
        c_error=c_error,
        x_threshold=x_star,
        uncertainty=float(spread),
        crossings=tuple(crossings),
        fits=fits,
    )


def estimate_threshold(spec: SweepSpec, workers: int = 1, progress=None,
                       points: Optional[list[CurvePoint]] = None
                       ) -> tuple[ThresholdEstimate, list[CurvePoint]]:
    """Full pipeline: sweep, per-size fits, crossing estimate."""
    if points is None:
        points = run_sweep(spec, workers=workers, progress=progress)
    fits = {}
    for L in spec.sizes:
        pts = [p for p in points if p.L == L]
        fits[L] = fit_beta_cdf(pts)
    est = find_threshold(
        fits,
        min(spec.x_values),
        max(spec.x_values),
        kind=spec.kind,
        c_erasure=spec.c_erasure,
        c_error=spec.c_error,
    )
    return est, points


def trace_correctable_region(
    kind: str,
    rays: Sequence[tuple[float, float, Sequence[float]]],
    sizes: Sequence[int],
    trials: int,
    master_seed: int = 2024,
    workers: int = 1,
) -> list[ThresholdEstimate]:
    """Thresholds along several rays; each ray is (c_erasure, c_error, xs)."""
    out = []
    for (ce, cerr, xs) in rays:
        spec = SweepSpec(
            kind=kind,
            sizes=tuple(sizes),
            c_erasure=ce,
            c_error=cerr,
            x_values=tuple(xs),
            trials_per_point=trials,
            master_seed=master_seed,
        )
        est, _ = estimate_threshold(spec, workers=workers)
        out.append(est)
    return out


def loss_failure_curve(
    p_erasure_star: float,
    encoded: bool,
    p_fail_grid: Sequence[float],
) -> list[tuple[float, float]]:
    """Map an erasure threshold to per-photon loss tolerance vs p_fail.

    Points where even lossless operation exceeds the threshold are emitted
    with zero tolerance.
    """
    out = []
    for pf in p_fail_grid:
        try:
            pl = loss_threshold(pf, p_erasure_star, encoded)
        except NoSolutionError:
            pl = 0.0
        out.append((float(pf), float(pl)))
    return out


# -- CSV output ---------------------------------------------------------------

POINT_FIELDS = [
    "kind", "L", "x", "p_erasure", "p_error", "trials", "failures",
    "rate", "ci_lo", "ci_hi",
]
THRESHOLD_FIELDS = [
    "kind", "c_erasure", "c_error", "x_star", "p_erasure_star",
    "p_error_star", "uncertainty",
]


def write_points_csv(path: str, points: Iterable[CurvePoint]) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(POINT_FIELDS)
        for p in points:
            lo, hi = p.wilson_ci()
            w.writerow([
                p.kind, p.L, f"{p.x:.10g}", f"{p.p_erasure:.10g}",
                f"{p.p_error:.10g}", p.trials, p.failures,
                f"{p.rate:.8f}", f"{lo:.8f}", f"{hi:.8f}",
            ])


def write_thresholds_csv(path: str, estimates: Iterable[ThresholdEstimate]) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(THRESHOLD_FIELDS)
        for e in estimates:
            w.writerow([
                e.kind, f"{e.c_erasure:.10g}", f"{e.c_error:.10g}",
                f"{e.x_threshold:.8f}", f"{e.p_erasure_star:.8f}",
                f"{e.p_error_star:.8f}", f"{e.uncertainty:.8f}",
            ])

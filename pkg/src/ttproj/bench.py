"""Seeded benchmark: approximate projection vs. reference projection on random pairs.

Each pair ``(X, Y)`` draws from its own stream
``numpy.random.default_rng(SeedSequence(seed, spawn_key=(pair,)))``: first
the three TT cores of ``X`` (standard normal, in the order G1, G2, G3), then
``Y`` (standard normal). Results do not depend on the number of workers.
"""

import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from .exceptions import ConfigError
from .oracle import exact_project_grid, exact_project_multistart
from .projection import (
    angle_value,
    approx_project,
    kutschan_omega,
    omega_bound,
    omega_ratio,
)
from .tensor3 import norm
from .ttd import canonicalize, random_tt

BOUND_SLACK = 1e-8


@dataclass
class ExperimentConfig:
    dims: tuple = (5, 5, 5)
    true_rank: tuple = (2, 2)
    bound_rank: tuple = (3, 3)
    n_pairs: int = 50
    seed: int = 42
    eps: float = 1e-16
    i_max: int = 10
    oracle: str = "multistart:100"
    oracle_max_iter: int = 500
    timing: bool = True
    jobs: int = 1
    eta_pair: int = 0
    csv_path: str = None
    json_path: str = None

    def __post_init__(self):
        self.dims = tuple(int(v) for v in self.dims)
        self.true_rank = tuple(int(v) for v in self.true_rank)
        self.bound_rank = tuple(int(v) for v in self.bound_rank)

    def oracle_spec(self):
        """``(method, size)`` parsed from ``oracle``, e.g. ``("multistart", 100)``."""
        if self.oracle in (None, "", "none"):
            return None, 0
        method, _, size = str(self.oracle).partition(":")
        if method not in ("multistart", "grid"):
            raise ConfigError(f"unknown oracle {self.oracle!r}; use multistart:N, grid:N or none")
        try:
            size = int(size) if size else (100 if method == "multistart" else 720)
        except ValueError:
            raise ConfigError(f"oracle size must be an integer in {self.oracle!r}") from None
        if size < 1:
            raise ConfigError("oracle size must be positive")
        return method, size

    def validate(self):
        n, r, k = self.dims, self.true_rank, self.bound_rank
        if len(n) != 3 or min(n) < 1:
            raise ConfigError(f"dims must be three positive integers, got {n}")
        if len(r) != 2 or len(k) != 2 or min(r) < 1:
            raise ConfigError(f"ranks must be pairs of positive integers, got r={r}, k={k}")
        if r[0] > k[0] or r[1] > k[1]:
            raise ConfigError(f"true rank {r} must not exceed the bound {k}")
        if r == k:
            raise ConfigError("true rank equals the bound; there is no rank gap to study")
        if k[0] > n[0] or k[1] > n[2]:
            raise ConfigError(f"bound {k} exceeds (n1, n3) = {(n[0], n[2])}")
        if r[0] > n[1] * r[1] or r[1] > n[1] * r[0]:
            raise ConfigError(f"rank {r} is not attainable for dims {n}")
        if self.n_pairs < 1:
            raise ConfigError("n_pairs must be at least 1")
        if not self.eps > 0:
            raise ConfigError("eps must be positive")
        if self.i_max < 1:
            raise ConfigError("i_max must be at least 1")
        if self.jobs < 1:
            raise ConfigError("jobs must be at least 1")
        if not 0 <= self.eta_pair < self.n_pairs:
            raise ConfigError(f"eta_pair must lie in [0, {self.n_pairs})")
        self.oracle_spec()
        return self


@dataclass
class PairRecord:
    pair: int
    angle_approx: float
    angle_oracle: float
    norm_ytilde: float
    norm_yhat: float
    norm_y: float
    omega_eq4: float
    omega_s4: float
    omega_kutschan: float
    iters: int
    wall_ms: float
    eta_trace: list = field(default_factory=list)

    def csv_row(self):
        def fmt(x):
            return "" if x is None or (isinstance(x, float) and math.isnan(x)) else repr(x)
        return [
            self.pair, fmt(self.angle_approx), fmt(self.angle_oracle),
            fmt(self.norm_ytilde), fmt(self.norm_yhat), fmt(self.norm_y),
            fmt(self.omega_eq4), fmt(self.omega_s4), fmt(self.omega_kutschan),
            self.iters, fmt(self.wall_ms),
        ]

    def bound_holds(self, omega):
        """``||Y_tilde|| >= omega ||Y_hat|| - 1e-8``; ``None`` without a reference."""
        if math.isnan(self.norm_yhat):
            return None
        return self.norm_ytilde >= omega * self.norm_yhat - BOUND_SLACK


def pair_stream(seed, pair, *extra):
    return np.random.SeedSequence(seed, spawn_key=(pair, *extra))


def generate_pair(cfg, pair):
    """The ``pair``-th random ``(X, Y)``, with ``X`` already canonicalized."""
    rng = np.random.default_rng(pair_stream(cfg.seed, pair))
    _, D = random_tt(cfg.dims, cfg.true_rank, rng)
    Y = rng.standard_normal(cfg.dims)
    return canonicalize(D), Y


def run_pair(cfg, pair, i_max=None):
    X, Y = generate_pair(cfg, pair)
    k = cfg.bound_rank
    t0 = time.perf_counter()
    res = approx_project(Y, X, k, eps=cfg.eps, i_max=i_max or cfg.i_max)
    wall_ms = (time.perf_counter() - t0) * 1e3 if cfg.timing else math.nan

    method, size = cfg.oracle_spec()
    if method == "multistart":
        ref = exact_project_multistart(
            Y, X, k, n_starts=size, random_state=pair_stream(cfg.seed, pair, 1),
            i_max=cfg.oracle_max_iter,
        )
    elif method == "grid":
        ref = exact_project_grid(Y, X, k, resolution=size)
    else:
        ref = None

    n, r = cfg.dims, X.ranks
    return PairRecord(
        pair=pair,
        angle_approx=angle_value(Y, res.y_tilde),
        angle_oracle=angle_value(Y, ref.y_hat) if ref is not None else math.nan,
        norm_ytilde=res.norm,
        norm_yhat=ref.value if ref is not None else math.nan,
        norm_y=norm(Y),
        omega_eq4=omega_bound(n, r, k),
        omega_s4=omega_ratio(n, r, k),
        omega_kutschan=kutschan_omega(n),
        iters=res.iterations,
        wall_ms=wall_ms,
        eta_trace=[float(v) for v in res.eta_trace],
    )


def _run_pair_star(args):
    return run_pair(*args)


def box_stats(values):
    """Five-number summary (linear-interpolation quartiles) plus the mean."""
    v = np.asarray(values, dtype=float)
    q = np.percentile(v, [0, 25, 50, 75, 100])
    return dict(zip(("min", "q1", "median", "q3", "max"), map(float, q)), mean=float(v.mean()))


def summarize(cfg, records, elapsed_s=None):
    omega_eq4 = records[0].omega_eq4
    omega_s4 = records[0].omega_s4
    has_ref = not math.isnan(records[0].norm_yhat)
    approx = [rec.angle_approx for rec in records]
    eta = records[cfg.eta_pair].eta_trace
    summary = {
        "config": {k: v for k, v in asdict(cfg).items() if k not in ("csv_path", "json_path", "jobs")},
        "rng": "numpy PCG64 via SeedSequence(seed, spawn_key=(pair,)); oracle starts use spawn_key=(pair, 1)",
        "n_pairs": len(records),
        "omega": {"eq4": omega_eq4, "s4": omega_s4, "kutschan": records[0].omega_kutschan},
        "angle_approx": box_stats(approx),
        "angle_oracle": box_stats([rec.angle_oracle for rec in records]) if has_ref else None,
        "checks": {
            "min_angle_approx": float(min(approx)),
            "all_angles_above_omega_s4": bool(min(approx) > omega_s4),
            "all_angles_above_kutschan": bool(min(approx) > records[0].omega_kutschan),
        },
        "comparison": [
            {"pair": rec.pair, "angle_approx": rec.angle_approx,
             "angle_oracle": rec.angle_oracle if has_ref else None}
            for rec in records[:10]
        ],
        "eta": {
            "pair": cfg.eta_pair,
            "eta_new": eta,
            "eta_increment": [b - a for a, b in zip([0.0] + eta[:-1], eta)],
        },
    }
    if has_ref:
        summary["checks"].update(
            bound_s4_pass=sum(bool(rec.bound_holds(omega_s4)) for rec in records),
            bound_eq4_pass=sum(bool(rec.bound_holds(omega_eq4)) for rec in records),
            approx_not_above_oracle=sum(
                rec.norm_ytilde <= rec.norm_yhat + BOUND_SLACK for rec in records
            ),
        )
    if cfg.timing and elapsed_s is not None:
        summary["timing"] = {
            "total_s": elapsed_s,
            "approx_ms": box_stats([rec.wall_ms for rec in records]),
        }
    return summary


def run_experiment(cfg):
    """Run all pairs; return ``(records, summary)``."""
    cfg.validate()
    t0 = time.perf_counter()
    jobs = [(cfg, p) for p in range(cfg.n_pairs)]
    if cfg.jobs > 1:
        with ProcessPoolExecutor(max_workers=cfg.jobs) as pool:
            records = list(pool.map(_run_pair_star, jobs))
    else:
        records = [run_pair(*job) for job in jobs]
    elapsed = time.perf_counter() - t0
    return records, summarize(cfg, records, elapsed)

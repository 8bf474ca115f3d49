"""Acceptance suite: one PASS/FAIL line per criterion.

Run with ``pytest tests/test_acceptance.py -s`` to see the lines inline; they
are also repeated in the terminal summary of any run that collects this file.
"""

import math
import time

import numpy as np
import pytest

from helpers import make_pair, random_frames, random_params, report
from ttproj.bench import ExperimentConfig, generate_pair, pair_stream, run_experiment, run_pair
from ttproj.linalg import svd_trunc
from ttproj.oracle import exact_project_grid, exact_project_multistart
from ttproj.projection import approx_project, kutschan_omega, omega_bound, omega_ratio
from ttproj.tangent import (
    assemble,
    assemble_block,
    project_tangent_space,
    terms,
    y_parallel,
)
from ttproj.tensor3 import inner, norm

N_PAIRS = 50
TOL_ANGLE = 1e-10
TOL_BOUND = 1e-8


@pytest.fixture(scope="module")
def experiment():
    cfg = ExperimentConfig(n_pairs=N_PAIRS, eps=1e-16, i_max=10, oracle="multistart:100")
    start = time.perf_counter()
    records, summary = run_experiment(cfg)
    return cfg, records, summary, time.perf_counter() - start


@pytest.fixture(scope="module")
def one_step(experiment):
    cfg = experiment[0]
    return [run_pair(cfg, p, i_max=1) for p in range(cfg.n_pairs)]


def test_c01_angle_floor(experiment):
    _, records, _, elapsed = experiment
    angles = np.array([r.angle_approx for r in records])
    ok = len(records) == N_PAIRS and bool(np.all(angles > 1 / 3 - TOL_ANGLE)) and elapsed < 60
    report(1, ok, f"min angle {angles.min():.6f} over {len(records)} pairs, {elapsed:.1f} s")
    assert ok


def test_c02_bound_against_oracle(experiment):
    cfg, records, _, _ = experiment
    w_ratio = omega_ratio(cfg.dims, cfg.true_rank, cfg.bound_rank)
    w_root = omega_bound(cfg.dims, cfg.true_rank, cfg.bound_rank)
    gated = [r.norm_ytilde >= w_ratio * r.norm_yhat - TOL_BOUND for r in records]
    root = [r.norm_ytilde >= w_root * r.norm_yhat - TOL_BOUND for r in records]
    worst = min(r.norm_ytilde / r.norm_yhat for r in records)
    ok = all(gated)
    report(2, ok, f"{sum(gated)}/{len(records)} with omega={w_ratio:.6f}; "
                  f"ungated omega={w_root:.6f}: {sum(root)}/{len(records)}; "
                  f"worst ratio {worst:.6f}")
    assert ok


def test_c03_dominates_prior_constant(experiment):
    cfg, records, _, _ = experiment
    w = kutschan_omega(cfg.dims)
    margin = min(r.angle_approx for r in records) - w
    ok = math.isclose(w, 1 / (6 * math.sqrt(125))) and margin >= 0.1
    report(3, ok, f"prior constant {w:.6f}, smallest margin {margin:.6f}")
    assert ok


def test_c04_single_iteration(experiment, one_step):
    cfg, records, _, _ = experiment
    w = omega_ratio(cfg.dims, cfg.true_rank, cfg.bound_rank)
    hold = [a.norm_ytilde >= w * r.norm_yhat - TOL_BOUND for a, r in zip(one_step, records)]
    ok = all(hold) and all(a.iters == 1 for a in one_step)
    worst = min(a.norm_ytilde / r.norm_yhat for a, r in zip(one_step, records))
    report(4, ok, f"{sum(hold)}/{len(hold)} pairs at i_max=1, worst ratio {worst:.6f}")
    assert ok


def test_c05_eta_monotone(experiment, one_step):
    traces = [r.eta_trace for r in experiment[1]] + [r.eta_trace for r in one_step]
    for seed in range(20):
        X, Y = make_pair(1000 + seed, dims=(6, 4, 5), ranks=(2, 2))
        for k in [(3, 3), (3, 4), (4, 3), (2, 4), (5, 2)]:
            traces.append(approx_project(Y, X, k, i_max=25).eta_trace)
    diffs = np.concatenate([np.diff(t) for t in traces if len(t) > 1])
    ok = bool(np.all(diffs >= -1e-10))
    report(5, ok, f"{len(traces)} runs, smallest increment {diffs.min():.3e}")
    assert ok


def test_c06_feasibility(experiment):
    cfg = experiment[0]
    worst = 0.0
    for p in range(cfg.n_pairs):
        X, Y = generate_pair(cfg, p)
        Yt = approx_project(Y, X, cfg.bound_rank, cfg.eps, cfg.i_max).y_tilde
        worst = max(worst, abs(inner(Y - Yt, Yt)) / (norm(Y) * norm(Yt)))
    rng = np.random.default_rng(6)
    for case in range(100):
        dims = tuple(int(d) for d in rng.integers(3, 7, size=3))
        r = (int(rng.integers(1, 3)), int(rng.integers(1, 3)))
        X, Y = make_pair(int(rng.integers(2**31)), dims=dims, ranks=r)
        s1 = int(rng.integers(0, dims[0] - r[0] + 1))
        s2 = int(rng.integers(0, dims[2] - r[1] + 1))
        U1, V3 = random_frames(X, s1, s2, rng)
        Yt = y_parallel(Y, X, U1, V3)
        worst = max(worst, abs(inner(Y - Yt, Yt)) / (norm(Y) * norm(Yt)))
    ok = worst <= 1e-10
    report(6, ok, f"{cfg.n_pairs} pairs + 100 random frames, worst relative residual {worst:.3e}")
    assert ok


def _stiefel_stack(rng, count, n, s):
    Q, _ = np.linalg.qr(rng.standard_normal((count, n, s)))
    return Q


def test_c07_truncated_svd_inequalities():
    rng = np.random.default_rng(7)
    worst = np.inf
    checked = 0
    for _ in range(100):
        r = int(rng.integers(2, 5))
        n, m = (int(d) for d in rng.integers(r, 9, size=2))
        A = rng.standard_normal((n, r)) @ rng.standard_normal((r, m))
        total = np.linalg.norm(A) ** 2
        for s in range(1, r):
            t = svd_trunc(A, s)
            left = np.linalg.norm(t.U.T @ A)
            right = np.linalg.norm(A @ t.V)
            Us = _stiefel_stack(rng, 1000, n, s)
            Vs = _stiefel_stack(rng, 1000, m, s)
            left_c = np.linalg.norm(np.swapaxes(Us, 1, 2) @ A, axis=(1, 2))
            right_c = np.linalg.norm(A @ Vs, axis=(1, 2))
            slacks = [
                left - left_c.max(),
                left ** 2 - s / r * total,
                right - right_c.max(),
                right ** 2 - s / r * total,
            ]
            worst = min(worst, min(slacks))
            checked += 1
    ok = worst >= -1e-10
    report(7, ok, f"{checked} (matrix, s) cases x 1000 frames per side, worst slack {worst:.3e}")
    assert ok


def test_c08_oracles_agree():
    cfg = ExperimentConfig(dims=(3, 3, 3), true_rank=(1, 1), bound_rank=(2, 2), n_pairs=20)
    gap, excess = 0.0, -np.inf
    for p in range(cfg.n_pairs):
        X, Y = generate_pair(cfg, p)
        g = exact_project_grid(Y, X, cfg.bound_rank, resolution=720).value
        stream = np.random.default_rng(pair_stream(cfg.seed, p, 1))
        m = exact_project_multistart(Y, X, cfg.bound_rank, n_starts=100, random_state=stream).value
        a = approx_project(Y, X, cfg.bound_rank).norm
        gap = max(gap, abs(g - m) / max(g, m))
        excess = max(excess, a - g, a - m)
    ok = gap <= 1e-6 and excess <= 1e-8
    report(8, ok, f"max relative oracle gap {gap:.3e}, max approx excess {excess:.3e}")
    assert ok


def _structural_cases():
    rng = np.random.default_rng(9)
    for case in range(60):
        dims = tuple(int(d) for d in rng.integers(3, 7, size=3))
        r = (int(rng.integers(1, 3)), int(rng.integers(1, 3)))
        X, Y = make_pair(10_000 + case, dims=dims, ranks=r)
        s1 = int(rng.integers(0, dims[0] - r[0] + 1))
        s2 = int(rng.integers(0, dims[2] - r[1] + 1))
        yield X, Y, random_params(X, s1, s2, rng), rng


def test_c09_structural_invariants():
    stiefel = ortho = block = idem = lin = 0.0
    count = 0
    for X, Y, P, rng in _structural_cases():
        stiefel = max(stiefel, max(X.stiefel_residuals().values()))
        ts = terms(P, X)
        for i in range(6):
            for j in range(i + 1, 6):
                scale = norm(ts[i]) * norm(ts[j])
                if scale > 0:
                    ortho = max(ortho, abs(inner(ts[i], ts[j])) / scale)
        G = assemble(P, X)
        block = max(block, norm(assemble_block(P, X) - G) / norm(G))
        PY = project_tangent_space(Y, X)
        idem = max(idem, norm(project_tangent_space(PY, X) - PY) / norm(PY))
        Z = rng.standard_normal(X.dims)
        a, b = rng.standard_normal(2)
        combo = project_tangent_space(a * Y + b * Z, X)
        lhs = a * PY + b * project_tangent_space(Z, X)
        lin = max(lin, norm(combo - lhs) / norm(combo))
        count += 1
    ok = (count >= 50 and stiefel <= 1e-12 and ortho <= 1e-10 and block <= 1e-12
          and idem <= 1e-12 and lin <= 1e-12)
    report(9, ok, f"{count} cases: stiefel {stiefel:.1e}, orthogonality {ortho:.1e}, "
                  f"block/sum {block:.1e}, idempotence {idem:.1e}, linearity {lin:.1e}")
    assert ok


def test_c10_degenerate_paths():
    worst_x = worst_t = 0.0
    zero_ok = True
    for seed in range(20):
        X, Y = make_pair(seed)
        Yt = approx_project(X.tensor, X, (3, 3)).y_tilde
        worst_x = max(worst_x, norm(Yt - X.tensor) / norm(X.tensor))
        G = project_tangent_space(Y, X)
        Yt = approx_project(G, X, (3, 3)).y_tilde
        worst_t = max(worst_t, norm(Yt - G) / norm(G))
        try:
            Z = approx_project(np.zeros(X.dims), X, (3, 3))
            zero_ok &= norm(Z.y_tilde) == 0.0 and np.all(np.isfinite(Z.eta_trace))
            zero_ok &= not svd_trunc(np.zeros((4, 3)), 2).S.any()
        except Exception:
            zero_ok = False
    ok = worst_x <= 1e-10 and worst_t <= 1e-10 and bool(zero_ok)
    report(10, ok, f"Y=X error {worst_x:.1e}, Y in tangent space error {worst_t:.1e}, "
                   f"zero residuals handled: {bool(zero_ok)}")
    assert ok

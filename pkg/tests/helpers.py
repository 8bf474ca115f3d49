"""Shared random-instance builders for the test suite."""

import numpy as np

from ttproj.linalg import complement_basis
from ttproj.ttd import canonicalize, random_tt


def make_pair(seed, dims=(5, 5, 5), ranks=(2, 2)):
    """Canonical base point of the given TT-rank and a Gaussian target."""
    rng = np.random.default_rng(seed)
    _, D = random_tt(dims, ranks, rng)
    return canonicalize(D), rng.standard_normal(dims)


def random_frames(X, s1, s2, rng):
    """Haar-ish admissible frames U1 (n1 x s1) and V3 (s2 x n3)."""
    Q1 = complement_basis(X.X1p)
    Q3 = complement_basis(X.X3pp.T)
    u, _ = np.linalg.qr(rng.standard_normal((Q1.shape[1], s1)))
    v, _ = np.linalg.qr(rng.standard_normal((Q3.shape[1], s2)))
    return Q1 @ u, (Q3 @ v).T


def random_params(X, s1, s2, rng):
    """Random parameters satisfying all gauge conditions against X."""
    from ttproj.tangent import closed_form_params

    U1, V3 = random_frames(X, s1, s2, rng)
    return closed_form_params(rng.standard_normal(X.dims), X, U1, V3)


ACCEPTANCE_LINES = []


def report(number, ok, detail):
    """Record and print one acceptance verdict line."""
    line = f"criterion {number:>2}: {'PASS' if ok else 'FAIL'}  {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    return ok

"""Reference ("exact") projections onto the tangent cone at desk scale.

Every exact projection is the best cone element for its own frames
``(U1, V3)``, so the projection reduces to maximizing
``||y_parallel(Y, X, U1, V3)||`` over admissible frames. Two searches are
provided:

* :func:`exact_project_multistart` runs the alternating maximization to
  convergence from many random admissible starts and keeps the best;
* :func:`exact_project_grid` handles the smallest nontrivial case (unit gaps,
  complements of dimension at most two) by exhaustive search over the two
  frame angles, followed by a bounded scalar polish of the best grid cell.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize_scalar

from .exceptions import RankError
from .linalg import complement_basis
from .projection import _check_bound, alternating_uv
from .tangent import project_tangent_space, y_parallel
from .tensor3 import check_tensor3, mode1, mode3, norm, unfold_left, unfold_right


@dataclass(frozen=True, eq=False)
class OracleResult:
    y_hat: np.ndarray
    value: float
    best_frames: tuple
    starts_used: int
    method: str


def _gaps(Y, X, k):
    check_tensor3(Y, "Y")
    n, r, k = _check_bound(X.dims, X.ranks, k)
    return k[0] - r[0], k[1] - r[1]


def _haar_frame(rng, Q, s):
    """Haar-random ``s``-column frame inside ``range(Q)``."""
    if s == 0:
        return Q[:, :0]
    Z, R = np.linalg.qr(rng.standard_normal((Q.shape[1], s)))
    Z = Z * np.sign(np.diag(R))
    return Q @ Z


def exact_project_multistart(Y, X, k, n_starts=100, random_state=None,
                             i_max=500, rtol=1e-14):
    """Best of ``n_starts`` converged alternating maximizations.

    Start 0 uses the default initialization of :func:`alternating_uv`, so the
    search contains the path of :func:`ttproj.projection.approx_project`; the
    other starts draw Haar-random admissible frames. Ties keep the lowest
    start index.
    """
    s1, s2 = _gaps(Y, X, k)
    if n_starts < 1:
        raise ValueError("n_starts must be at least 1")
    pt = project_tangent_space(Y, X)
    if s1 == 0 and s2 == 0:
        U1, V3 = np.zeros((X.dims[0], 0)), np.zeros((0, X.dims[2]))
        return OracleResult(pt, norm(pt), (U1, V3), 1, "multistart")

    rng = np.random.default_rng(random_state)
    Q1 = complement_basis(X.X1p)
    Q3 = complement_basis(X.X3pp.T)
    eps = max(rtol * norm(Y) ** 2, np.finfo(float).tiny)
    best = None
    for start in range(n_starts):
        init = None if start == 0 else (_haar_frame(rng, Q1, s1), _haar_frame(rng, Q3, s2).T)
        U1, V3, trace = alternating_uv(Y, X, s1, s2, eps=eps, i_max=i_max, init=init)
        if best is None or trace[-1] > best[0]:
            best = (trace[-1], U1, V3)
    _, U1, V3 = best
    y_hat = y_parallel(Y, X, U1, V3)
    return OracleResult(y_hat, norm(y_hat), (U1, V3), n_starts, "multistart")


class _AngleObjective:
    """``||y_parallel||^2`` as an explicit function of the two frame angles.

    With ``u = Q1 c(theta)`` and ``v = Q3 c(phi)``::

        ||y_parallel||^2 = ||P_T Y||^2 + u^T Mu u + v^T Mv v + sum_j (u^T Y[:, j, :] v)^2
    """

    def __init__(self, Y, X):
        self.Q1 = complement_basis(X.X1p)
        self.Q3 = complement_basis(X.X3pp.T)
        X2ppL = unfold_left(X.X2pp)
        X2pR = unfold_right(X.X2p)
        L = unfold_left(mode3(Y, X.X3pp.T))
        L = L - (L @ X2ppL.T) @ X2ppL
        R = unfold_right(mode1(X.X1p.T, Y))
        R = R - X2pR @ (X2pR.T @ R)
        Lc = self.Q1.T @ L
        Rc = R @ self.Q3
        self.Mu = Lc @ Lc.T
        self.Mv = Rc.T @ Rc
        self.core = mode3(mode1(self.Q1.T, Y), self.Q3)   # (c1, n2, c3)
        self.base = norm(project_tangent_space(Y, X)) ** 2

    @staticmethod
    def directions(angles, dim):
        if dim == 1:
            return np.ones((1, 1))
        return np.stack([np.cos(angles), np.sin(angles)], axis=1)

    def grid(self, cu, cv):
        qu = np.einsum("ta,ab,tb->t", cu, self.Mu, cu)
        qv = np.einsum("pa,ab,pb->p", cv, self.Mv, cv)
        z = np.einsum("ta,ajb,pb->tpj", cu, self.core, cv)
        return self.base + qu[:, None] + qv[None, :] + np.sum(z * z, axis=2)

    def __call__(self, theta, phi):
        cu = self.directions(np.array([theta]), self.Q1.shape[1])
        cv = self.directions(np.array([phi]), self.Q3.shape[1])
        return float(self.grid(cu, cv)[0, 0])


def exact_project_grid(Y, X, k, resolution=720, refine=True, sweeps=8):
    """Exhaustive search over frame angles for unit gaps.

    Requires ``k - r == (1, 1)`` and complements ``n1 - r1``, ``n3 - r2`` of
    dimension at most two, so that each frame is a unit vector parametrized by
    one angle. ``resolution`` angles are sampled on each circle; with
    ``refine`` the best grid point is polished by alternating bounded scalar
    maximization within one grid step.
    """
    s1, s2 = _gaps(Y, X, k)
    n1, _, n3 = X.dims
    r1, r2 = X.ranks
    if (s1, s2) != (1, 1) or n1 - r1 > 2 or n3 - r2 > 2:
        raise RankError(
            "grid oracle needs unit gaps and complements of dimension <= 2, got "
            f"gaps {(s1, s2)} and complements {(n1 - r1, n3 - r2)}"
        )
    if resolution < 1:
        raise ValueError("resolution must be positive")
    f = _AngleObjective(Y, X)
    c1, c3 = f.Q1.shape[1], f.Q3.shape[1]
    angles = 2.0 * math.pi * np.arange(resolution) / resolution
    thetas = angles if c1 == 2 else np.zeros(1)
    phis = angles if c3 == 2 else np.zeros(1)
    values = f.grid(f.directions(thetas, c1), f.directions(phis, c3))
    a, b = np.unravel_index(np.argmax(values), values.shape)
    theta, phi, best = thetas[a], phis[b], values[a, b]

    if refine:
        h = 2.0 * math.pi / resolution
        lo_t, hi_t, lo_p, hi_p = theta - h, theta + h, phi - h, phi + h
        for _ in range(sweeps):
            if c1 == 2:
                res = minimize_scalar(lambda t: -f(t, phi), bounds=(lo_t, hi_t),
                                      method="bounded", options={"xatol": 1e-12})
                if -res.fun > best:
                    theta, best = res.x, -res.fun
            if c3 == 2:
                res = minimize_scalar(lambda p: -f(theta, p), bounds=(lo_p, hi_p),
                                      method="bounded", options={"xatol": 1e-12})
                if -res.fun > best:
                    phi, best = res.x, -res.fun

    U1 = f.Q1 @ f.directions(np.array([theta]), c1).T
    V3 = (f.Q3 @ f.directions(np.array([phi]), c3).T).T
    y_hat = y_parallel(Y, X, U1, V3)
    return OracleResult(y_hat, norm(y_hat), (U1, V3), values.size, "grid")

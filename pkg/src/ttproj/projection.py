"""Approximate projection onto the tangent cone of bounded TT-rank tensors.

The cone element is fixed by two frames, ``U1`` (columns orthogonal to the
column space of ``X1p``) and ``V3`` (rows orthogonal to those of ``X3pp``).
:func:`alternating_uv` picks them by alternating truncated SVDs. Every update
maximizes the norm of the resulting cone element over one frame while the
other frame is held fixed, so the objective never decreases. The remaining
parameters then follow from :func:`ttproj.tangent.closed_form_params`.

The result satisfies the angle condition

    <Y, Y_tilde> >= omega * ||P Y|| * ||Y_tilde||,
    omega = sqrt(max((k1 - r1) / (n1 - r1), (k2 - r2) / (n3 - r2))),

where ``P Y`` is an exact projection onto the cone.
"""

import math
from dataclasses import dataclass

import numpy as np

from .exceptions import DimensionError, RankError, ZeroTensorError
from .linalg import complement_basis, svd_trunc
from .tangent import assemble, check_frames, closed_form_params, project_tangent_space
from .tensor3 import check_tensor3, inner, mode1, mode3, norm, unfold_left, unfold_right

DEFAULT_EPS = 1e-16
DEFAULT_MAX_ITER = 10


@dataclass(frozen=True, eq=False)
class ProjectionResult:
    """Output of :func:`approx_project`.

    Attributes
    ----------
    y_tilde : ndarray
        The approximate projection.
    params : TangentParams
        Its parameters.
    eta_trace : ndarray
        ``eta_new`` after every iteration, i.e. ``||y_tilde||^2`` minus the
        squared norm of the tangent-space part, for the frames of that iteration.
    iterations : int
    omega : float
        Guaranteed angle-condition constant (``1.0`` at a smooth point).
    tangent_space_norm : float
        ``||P_T Y||`` for the tangent space to the fixed-rank manifold.
    branch : str
        ``"U1-first"`` or ``"V3-first"``; which frame each iteration updates first.
    """

    y_tilde: np.ndarray
    params: object
    eta_trace: np.ndarray
    iterations: int
    omega: float
    tangent_space_norm: float
    branch: str

    @property
    def norm(self):
        return norm(self.y_tilde)


def _gap_ratio(gap, n, r):
    return gap / (n - r) if n > r else 0.0


def _check_bound(n, r, k):
    n1, n2, n3 = (int(v) for v in n)
    r1, r2 = (int(v) for v in r)
    k1, k2 = (int(v) for v in k)
    if r1 > k1 or r2 > k2:
        raise RankError(f"TT-rank {(r1, r2)} exceeds the bound {(k1, k2)}")
    if k1 > n1 or k2 > n3:
        raise RankError(f"bound {(k1, k2)} exceeds (n1, n3) = {(n1, n3)}")
    return (n1, n2, n3), (r1, r2), (k1, k2)


def omega_ratio(n, r, k):
    """``max((k1 - r1) / (n1 - r1), (k2 - r2) / (n3 - r2))``, the square of :func:`omega_bound`.

    At ``n = (5, 5, 5)``, ``r = (2, 2)``, ``k = (3, 3)`` this is ``1/3``.
    """
    (n1, _, n3), (r1, r2), (k1, k2) = _check_bound(n, r, k)
    if (r1, r2) == (k1, k2):
        raise RankError("the bound is only defined when the TT-rank is below the bound")
    return max(_gap_ratio(k1 - r1, n1, r1), _gap_ratio(k2 - r2, n3, r2))


def omega_bound(n, r, k):
    """Angle-condition constant guaranteed by :func:`approx_project`."""
    return math.sqrt(omega_ratio(n, r, k))


def kutschan_omega(n):
    """``1 / (6 sqrt(n1 n2 n3))``, the constant of the earlier diagram-based projection."""
    n1, n2, n3 = (int(v) for v in n)
    if min(n1, n2, n3) < 1:
        raise DimensionError(f"dims must be positive, got {n}")
    return 1.0 / (6.0 * math.sqrt(n1 * n2 * n3))


def angle_value(Y, y_tilde):
    """Cosine of the angle between ``Y`` and ``y_tilde``."""
    ny, nt = norm(Y), norm(y_tilde)
    if ny == 0.0 or nt == 0.0:
        raise ZeroTensorError("angle is undefined for a zero tensor")
    return float(np.clip(inner(Y, y_tilde) / (ny * nt), -1.0, 1.0))


def _leading_left(M, s):
    """Leading ``s`` left singular vectors and values, padding thin matrices with zeros."""
    if M.shape[1] < s:
        M = np.hstack([M, np.zeros((M.shape[0], s - M.shape[1]))])
    t = svd_trunc(M, s)
    return t.U, t.S


def _leading_right(M, s):
    if M.shape[0] < s:
        M = np.vstack([M, np.zeros((s - M.shape[0], M.shape[1]))])
    t = svd_trunc(M, s)
    return t.V, t.S


def alternating_uv(Y, X, s1, s2, eps=DEFAULT_EPS, i_max=DEFAULT_MAX_ITER, init=None):
    """Choose the frames ``(U1, V3)`` by alternating truncated SVDs.

    Parameters
    ----------
    Y : ndarray of shape (n1, n2, n3)
    X : CanonicalTtPair
    s1, s2 : int
        Rank gaps ``k1 - r1`` and ``k2 - r2``.
    eps : float
        Iteration stops once ``|eta_new - eta_old| <= eps``.
    i_max : int
        Maximum number of iterations.
    init : (U1, V3), optional
        Starting frames. Only the one consumed by the first half-step matters.
        By default both start as bases of the full complements, so that the
        first half-step sees every direction the other frame could pick.

    Returns
    -------
    U1 : ndarray of shape (n1, s1)
    V3 : ndarray of shape (s2, n3)
    eta_trace : ndarray
        ``eta_new`` after each iteration.

    Notes
    -----
    Both SVDs act on thin matrices expressed in orthonormal bases ``Q1`` of
    ``range(X1p)^perp`` and ``Q3`` of ``range(X3pp^T)^perp``: the update for
    ``U1`` uses ``Q1^T [(Y . V3^T)^L, (Y . X3pp^T)^L P_perp]`` and the update for
    ``V3`` uses ``[(U1^T . Y)^R; P_perp (X1p^T . Y)^R] Q3``. Dropping the
    orthonormal factors leaves the singular values unchanged, and mapping back
    through ``Q1``/``Q3`` keeps the frames admissible even when a residual is zero.
    """
    Y = check_tensor3(Y, "Y")
    if Y.shape != X.dims:
        raise DimensionError(f"Y has shape {Y.shape}, base point has {X.dims}")
    s1, s2 = int(s1), int(s2)
    n1, n2, n3 = X.dims
    r1, r2 = X.ranks
    if s1 < 0 or s2 < 0 or s1 + s2 == 0:
        raise RankError(f"need nonnegative gaps with s1 + s2 > 0, got {(s1, s2)}")
    if s1 > n1 - r1 or s2 > n3 - r2:
        raise RankError(f"gaps {(s1, s2)} exceed the complement sizes {(n1 - r1, n3 - r2)}")
    if not eps > 0:
        raise ValueError("eps must be positive")
    if int(i_max) < 1:
        raise ValueError("i_max must be at least 1")

    Q1 = complement_basis(X.X1p)            # (n1, c1)
    Q3 = complement_basis(X.X3pp.T)         # (n3, c3)
    X2pR = unfold_right(X.X2p)
    X2ppL = unfold_left(X.X2pp)

    L = unfold_left(mode3(Y, X.X3pp.T))
    Lc = Q1.T @ (L - (L @ X2ppL.T) @ X2ppL)       # (c1, n2 r2)
    R = unfold_right(mode1(X.X1p.T, Y))
    Rc = (R - X2pR @ (X2pR.T @ R)) @ Q3           # (r1 n2, c3)
    Ycc = mode3(mode1(Q1.T, Y), Q3)               # (c1, n2, c3)

    if init is None:
        u = np.eye(Q1.shape[1])
        v = np.eye(Q3.shape[1])
    else:
        U1_0, V3_0 = check_frames(init[0], init[1], X)
        u = Q1.T @ U1_0
        v = Q3.T @ V3_0.T

    def update_u(v):
        A = np.hstack([unfold_left(mode3(Ycc, v)), Lc])
        return _leading_left(A, s1)

    def update_v(u):
        B = np.vstack([unfold_right(mode1(u.T, Ycc)), Rc])
        return _leading_right(B, s2)

    u_first = _gap_ratio(s2, n3, r2) > _gap_ratio(s1, n1, r1)
    trace = []
    i = 0
    eta_old, eta_new = 0.0, math.inf
    while i < i_max and abs(eta_new - eta_old) > eps:
        eta_old = eta_new
        i += 1
        if u_first:
            u, _ = update_u(v)
            v, S = update_v(u)
            eta_new = float(S @ S) + float(np.linalg.norm(u.T @ Lc) ** 2)
        else:
            v, _ = update_v(u)
            u, S = update_u(v)
            eta_new = float(S @ S) + float(np.linalg.norm(Rc @ v) ** 2)
        trace.append(eta_new)

    return Q1 @ u, (Q3 @ v).T, np.asarray(trace)


def approx_project(Y, X, k, eps=DEFAULT_EPS, i_max=DEFAULT_MAX_ITER, init=None):
    """Approximate projection of ``Y`` onto the tangent cone at ``X``.

    Parameters
    ----------
    Y : ndarray of shape (n1, n2, n3)
    X : CanonicalTtPair
        Base point; its stored ranks are taken as its TT-rank.
    k : (int, int)
        TT-rank bound of the variety.
    eps, i_max, init
        Passed to :func:`alternating_uv`.

    Returns
    -------
    ProjectionResult

    Notes
    -----
    When ``X`` has TT-rank exactly ``k`` the cone is the tangent space and the
    orthogonal projection onto it is returned (``omega = 1``).
    """
    Y = check_tensor3(Y, "Y")
    if Y.shape != X.dims:
        raise DimensionError(f"Y has shape {Y.shape}, base point has {X.dims}")
    n, r, k = _check_bound(X.dims, X.ranks, k)
    s1, s2 = k[0] - r[0], k[1] - r[1]
    pt = project_tangent_space(Y, X)
    pt_norm = norm(pt)

    if s1 == 0 and s2 == 0:
        U1, V3 = np.zeros((n[0], 0)), np.zeros((0, n[2]))
        params = closed_form_params(Y, X, U1, V3)
        return ProjectionResult(pt, params, np.zeros(0), 0, 1.0, pt_norm, "none")

    U1, V3, trace = alternating_uv(Y, X, s1, s2, eps=eps, i_max=i_max, init=init)
    params = closed_form_params(Y, X, U1, V3)
    y_tilde = assemble(params, X, tol=None)
    branch = "U1-first" if _gap_ratio(s2, n[2], r[1]) > _gap_ratio(s1, n[0], r[0]) else "V3-first"
    return ProjectionResult(
        y_tilde=y_tilde,
        params=params,
        eta_trace=trace,
        iterations=len(trace),
        omega=omega_bound(n, r, k),
        tangent_space_norm=pt_norm,
        branch=branch,
    )

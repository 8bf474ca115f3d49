"""Parametrization of the tangent cone at a point of bounded TT-rank.

A tangent cone element at ``X`` (TT-rank ``(r1, r2)``, bound ``(k1, k2)``,
gaps ``s = k - r``) is the sum of six mutually orthogonal trains

    G = W1 . X2pp . X3pp  +  X1p . X2p . W3  +  X1p . W2 . X3pp
      + U1 . V2 . X3pp    +  X1p . U2 . V3   +  U1 . Z2 . V3

where ``U1`` (``n1 x s1``) and ``V3.T`` (``n3 x s2``) have orthonormal columns
and the gauge conditions

    U1^T X1p = 0,   W1^T X1p = 0,   (U2^R)^T X2p^R = 0,
    W3 X3pp^T = 0,  V3 X3pp^T = 0,  V2^L (X2pp^L)^T = 0

hold. The first three terms span the tangent space to the fixed-rank
manifold. For fixed frames ``(U1, V3)`` the best remaining parameters for a
target ``Y`` are available in closed form (:func:`closed_form_params`).
"""

from dataclasses import dataclass, fields

import numpy as np

from .exceptions import DimensionError, InadmissibleFrameError
from .tensor3 import (
    check_tensor3,
    contract3,
    fold_left,
    fold_right,
    mode1,
    mode3,
    unfold_left,
    unfold_right,
)

FRAME_TOL = 1e-8


@dataclass(frozen=True, eq=False)
class TangentParams:
    """The eight parameters of a tangent cone element.

    Attributes
    ----------
    U1 : (n1, s1)       W1 : (n1, r1)
    U2 : (r1, n2, s2)   W2 : (r1, n2, r2)
    Z2 : (s1, n2, s2)   V2 : (s1, n2, r2)
    W3 : (r2, n3)       V3 : (s2, n3)
    """

    U1: np.ndarray
    W1: np.ndarray
    U2: np.ndarray
    W2: np.ndarray
    Z2: np.ndarray
    V2: np.ndarray
    W3: np.ndarray
    V3: np.ndarray

    @property
    def gaps(self):
        return (self.U1.shape[1], self.V3.shape[0])

    def as_dict(self):
        return {f.name: getattr(self, f.name) for f in fields(self)}

    def scale(self):
        return max(1.0, *(float(np.linalg.norm(v)) for v in self.as_dict().values()))


def empty_frames(X):
    """Frames with zero gap: ``U1`` is ``n1 x 0`` and ``V3`` is ``0 x n3``."""
    n1, _, n3 = X.dims
    return np.zeros((n1, 0)), np.zeros((0, n3))


def frame_residuals(U1, V3, X):
    """Orthonormality and orthogonality residuals of the frames ``(U1, V3)``."""
    U1 = np.asarray(U1, dtype=np.float64)
    V3 = np.asarray(V3, dtype=np.float64)
    return {
        "U1_stiefel": float(np.linalg.norm(U1.T @ U1 - np.eye(U1.shape[1]))),
        "U1_X1p": float(np.linalg.norm(U1.T @ X.X1p)),
        "V3_stiefel": float(np.linalg.norm(V3 @ V3.T - np.eye(V3.shape[0]))),
        "V3_X3pp": float(np.linalg.norm(V3 @ X.X3pp.T)),
    }


def check_frames(U1, V3, X, tol=FRAME_TOL):
    U1 = np.asarray(U1, dtype=np.float64)
    V3 = np.asarray(V3, dtype=np.float64)
    n1, _, n3 = X.dims
    if U1.ndim != 2 or U1.shape[0] != n1:
        raise DimensionError(f"U1 must have shape (n1, s1) with n1={n1}, got {U1.shape}")
    if V3.ndim != 2 or V3.shape[1] != n3:
        raise DimensionError(f"V3 must have shape (s2, n3) with n3={n3}, got {V3.shape}")
    bad = {k: v for k, v in frame_residuals(U1, V3, X).items() if v > tol}
    if bad:
        detail = ", ".join(f"{k}={v:.2e}" for k, v in bad.items())
        raise InadmissibleFrameError(f"inadmissible frames: {detail}")
    return U1, V3


def param_residuals(P, X):
    """Residuals of the six gauge conditions and of the two Stiefel constraints."""
    res = frame_residuals(P.U1, P.V3, X)
    res.update(
        W1_X1p=float(np.linalg.norm(P.W1.T @ X.X1p)),
        U2_X2p=float(np.linalg.norm(unfold_right(P.U2).T @ unfold_right(X.X2p))),
        W3_X3pp=float(np.linalg.norm(P.W3 @ X.X3pp.T)),
        V2_X2pp=float(np.linalg.norm(unfold_left(P.V2) @ unfold_left(X.X2pp).T)),
    )
    return res


def _check_params(P, X, tol):
    r1, r2 = X.ranks
    n1, n2, n3 = X.dims
    s1, s2 = P.gaps
    expected = {
        "U1": (n1, s1), "W1": (n1, r1), "U2": (r1, n2, s2), "W2": (r1, n2, r2),
        "Z2": (s1, n2, s2), "V2": (s1, n2, r2), "W3": (r2, n3), "V3": (s2, n3),
    }
    for name, shape in expected.items():
        if getattr(P, name).shape != shape:
            raise DimensionError(f"{name} has shape {getattr(P, name).shape}, expected {shape}")
    if tol is None:
        return
    scale = P.scale()
    bad = {k: v for k, v in param_residuals(P, X).items() if v > tol * scale}
    if bad:
        detail = ", ".join(f"{k}={v:.2e}" for k, v in bad.items())
        raise InadmissibleFrameError(f"parameters violate the gauge conditions: {detail}")


def terms(P, X, tol=FRAME_TOL):
    """The six orthogonal trains of ``G``, in the order of the module docstring."""
    _check_params(P, X, tol)
    return [
        contract3(P.W1, X.X2pp, X.X3pp),
        contract3(X.X1p, X.X2p, P.W3),
        contract3(X.X1p, P.W2, X.X3pp),
        contract3(P.U1, P.V2, X.X3pp),
        contract3(X.X1p, P.U2, P.V3),
        contract3(P.U1, P.Z2, P.V3),
    ]


def assemble(P, X, tol=FRAME_TOL):
    """Dense tangent cone element built as the sum of the six trains."""
    out = np.zeros(X.dims)
    for t in terms(P, X, tol):
        out += t
    return out


def assemble_block(P, X, tol=FRAME_TOL):
    """Same element built as a single TTD with block cores.

    ``[X1p U1 W1] . [[X2p U2 W2], [0 Z2 V2], [0 0 X2pp]] . [W3; V3; X3pp]``
    """
    _check_params(P, X, tol)
    r1, r2 = X.ranks
    s1, s2 = P.gaps
    n2 = X.dims[1]
    A = np.hstack([X.X1p, P.U1, P.W1])
    C = np.vstack([P.W3, P.V3, X.X3pp])
    B = np.zeros((2 * r1 + s1, n2, 2 * r2 + s2))
    rows = np.cumsum([0, r1, s1, r1])
    cols = np.cumsum([0, r2, s2, r2])
    blocks = {(0, 0): X.X2p, (0, 1): P.U2, (0, 2): P.W2,
              (1, 1): P.Z2, (1, 2): P.V2, (2, 2): X.X2pp}
    for (i, j), core in blocks.items():
        B[rows[i]:rows[i + 1], :, cols[j]:cols[j + 1]] = core
    return contract3(A, B, C)


def extract_params(G, X, U1, V3, tol=FRAME_TOL):
    """Read off the parameters of ``G`` with respect to the frames ``(U1, V3)``.

    Each parameter is the inner product of ``G`` with the matching interface
    tensors, followed by the projection that enforces its gauge condition.
    For ``G = assemble(P, X)`` with ``P.U1 = U1`` and ``P.V3 = V3`` this
    returns ``P``; for a general ``G`` it returns the component of ``G``
    captured by those frames.
    """
    G = check_tensor3(G, "G")
    U1, V3 = check_frames(U1, V3, X, tol)
    X1p, X3pp = X.X1p, X.X3pp
    left_iface = contract3(X1p, X.X2p, np.eye(X.ranks[1]))    # X1p . X2p, (n1, n2, r2)
    right_iface = contract3(np.eye(X.ranks[0]), X.X2pp, X3pp)  # X2pp . X3pp, (r1, n2, n3)

    W1 = np.einsum("ijk,ajk->ia", G, right_iface)
    W1 -= X1p @ (X1p.T @ W1)
    W2 = np.einsum("ia,ijk,bk->ajb", X1p, G, X3pp)
    W3 = np.einsum("ija,ijk->ak", left_iface, G)
    W3 -= (W3 @ X3pp.T) @ X3pp

    U2 = np.einsum("ia,ijk,ck->ajc", X1p, G, V3)
    # remove the component along X2p: U2 <- U2 - X2p . (X2p^R)^T U2^R
    X2pR = unfold_right(X.X2p)
    U2 = U2 - mode3(X.X2p, X2pR.T @ unfold_right(U2))
    V2 = np.einsum("ic,ijk,bk->cjb", U1, G, X3pp)
    X2ppL = unfold_left(X.X2pp)
    V2 = V2 - mode1(unfold_left(V2) @ X2ppL.T, X.X2pp)
    Z2 = np.einsum("ic,ijk,dk->cjd", U1, G, V3)
    return TangentParams(U1=U1, W1=W1, U2=U2, W2=W2, Z2=Z2, V2=V2, W3=W3, V3=V3)


def closed_form_params(Y, X, U1, V3, tol=FRAME_TOL):
    """Optimal parameters of a cone element for target ``Y`` and fixed frames.

    Computed with the unfolded-matrix formulas::

        W1 = P_perp(X1p) (Y . X3pp^T)^L (X2pp^L)^T
        W2 = X1p^T . Y . X3pp^T
        W3 = (X2p^R)^T (X1p^T . Y)^R P_perp(X3pp^T)
        U2 = [P_perp(X2p^R) (X1p^T . Y)^R] . V3^T
        V2 = U1^T . [(Y . X3pp^T)^L P_perp((X2pp^L)^T)]
        Z2 = U1^T . Y . V3^T
    """
    Y = check_tensor3(Y, "Y")
    if Y.shape != X.dims:
        raise DimensionError(f"Y has shape {Y.shape}, base point has {X.dims}")
    U1, V3 = check_frames(U1, V3, X, tol)
    n1, n2, n3 = X.dims
    r1, r2 = X.ranks
    s1, s2 = U1.shape[1], V3.shape[0]
    X1p, X3pp = X.X1p, X.X3pp
    X2pR = unfold_right(X.X2p)
    X2ppL = unfold_left(X.X2pp)

    YX3 = mode3(Y, X3pp.T)          # (n1, n2, r2)
    L = unfold_left(YX3)            # (n1, n2 r2)
    X1Y = mode1(X1p.T, Y)           # (r1, n2, n3)
    R = unfold_right(X1Y)           # (r1 n2, n3)

    L_perp = L - (L @ X2ppL.T) @ X2ppL
    R_perp = R - X2pR @ (X2pR.T @ R)

    W1 = L @ X2ppL.T
    W1 = W1 - X1p @ (X1p.T @ W1)
    W2 = mode3(X1Y, X3pp.T)
    W3 = X2pR.T @ R
    W3 = W3 - (W3 @ X3pp.T) @ X3pp
    U2 = fold_right(R_perp @ V3.T, (r1, n2, s2))
    V2 = fold_left(U1.T @ L_perp, (s1, n2, r2))
    Z2 = mode3(mode1(U1.T, Y), V3.T)
    return TangentParams(U1=U1, W1=W1, U2=U2, W2=W2, Z2=Z2, V2=V2, W3=W3, V3=V3)


def y_parallel(Y, X, U1, V3, tol=FRAME_TOL):
    """Best cone element of ``Y`` with frames ``(U1, V3)``.

    The result ``T`` is feasible for the max-norm reformulation of the
    projection: ``<Y - T, T> = 0``.
    """
    return assemble(closed_form_params(Y, X, U1, V3, tol), X, tol=None)


def project_tangent_space(Y, X):
    """Orthogonal projection of ``Y`` onto the tangent space at ``X`` to the fixed-rank manifold."""
    U1, V3 = empty_frames(X)
    return y_parallel(Y, X, U1, V3)

"""Dense third-order tensors: unfoldings, foldings, contractions, inner product.

Tensors are plain ``numpy.ndarray`` objects of shape ``(n1, n2, n3)``. Every
reshape uses first-index-fastest (Fortran) order, so that

* ``unfold_left(T)[i, j + n2*k] == T[i, j, k]``
* ``unfold_right(T)[i + n1*j, k] == T[i, j, k]``

with 0-based indices. TT cores of shape ``(r1, n2, r2)`` follow the same
conventions, so the familiar identities

    A . B . C = [A (B . C)^L]      and      B . C = [B^R C]

hold literally with the functions below.
"""

import numpy as np

from .exceptions import DimensionError


def check_tensor3(T, name="T", copy=False):
    """Validate ``T`` as a finite real order-3 array and return it as float64."""
    T = np.array(T, dtype=np.float64) if copy else np.asarray(T, dtype=np.float64)
    if T.ndim != 3:
        raise DimensionError(f"{name} must be an order-3 array, got ndim={T.ndim}")
    if min(T.shape) < 1:
        raise DimensionError(f"{name} has an empty mode: shape={T.shape}")
    if not np.all(np.isfinite(T)):
        raise ValueError(f"{name} contains non-finite entries")
    return T


def _check_dims(dims):
    dims = tuple(int(d) for d in dims)
    # Zero-sized modes are allowed for the empty factors of a zero rank gap.
    if len(dims) != 3 or min(dims) < 0:
        raise DimensionError(f"dims must be three nonnegative integers, got {dims}")
    return dims


def unfold_left(T):
    """Left unfolding ``T^L`` of shape ``(n1, n2*n3)``."""
    T = np.asarray(T)
    n1, n2, n3 = T.shape
    return T.reshape(n1, n2 * n3, order="F")


def unfold_right(T):
    """Right unfolding ``T^R`` of shape ``(n1*n2, n3)``."""
    T = np.asarray(T)
    n1, n2, n3 = T.shape
    return T.reshape(n1 * n2, n3, order="F")


def fold_left(M, dims):
    """Inverse of :func:`unfold_left`."""
    n1, n2, n3 = _check_dims(dims)
    M = np.asarray(M)
    if M.shape != (n1, n2 * n3):
        raise DimensionError(f"cannot fold a {M.shape} matrix into {(n1, n2, n3)}")
    return M.reshape(n1, n2, n3, order="F")


def fold_right(M, dims):
    """Inverse of :func:`unfold_right`."""
    n1, n2, n3 = _check_dims(dims)
    M = np.asarray(M)
    if M.shape != (n1 * n2, n3):
        raise DimensionError(f"cannot fold a {M.shape} matrix into {(n1, n2, n3)}")
    return M.reshape(n1, n2, n3, order="F")


def mode1(A, T):
    """Left contraction ``A . T``: contracts the columns of ``A`` with the first mode of ``T``."""
    A = np.asarray(A)
    T = np.asarray(T)
    if A.ndim != 2 or A.shape[1] != T.shape[0]:
        raise DimensionError(f"mode-1 contraction of {A.shape} with {T.shape}")
    m, n2, n3 = A.shape[0], T.shape[1], T.shape[2]
    return fold_left(A @ unfold_left(T), (m, n2, n3))


def mode3(T, B):
    """Right contraction ``T . B``: contracts the last mode of ``T`` with the rows of ``B``."""
    B = np.asarray(B)
    T = np.asarray(T)
    if B.ndim != 2 or B.shape[0] != T.shape[2]:
        raise DimensionError(f"mode-3 contraction of {T.shape} with {B.shape}")
    n1, n2, m = T.shape[0], T.shape[1], B.shape[1]
    return fold_right(unfold_right(T) @ B, (n1, n2, m))


def contract3(A, B, C):
    """Contract the train ``A . B . C`` into a dense ``(n1, n2, n3)`` tensor.

    Parameters
    ----------
    A : ndarray of shape (n1, r1)
    B : ndarray of shape (r1, n2, r2)
    C : ndarray of shape (r2, n3)
    """
    A = np.asarray(A)
    B = np.asarray(B)
    C = np.asarray(C)
    if A.ndim != 2 or B.ndim != 3 or C.ndim != 2:
        raise DimensionError("contract3 expects (matrix, order-3 core, matrix)")
    r1, n2, r2 = B.shape
    if A.shape[1] != r1 or C.shape[0] != r2:
        raise DimensionError(
            f"inner dimensions disagree: {A.shape} . {B.shape} . {C.shape}"
        )
    n1, n3 = A.shape[0], C.shape[1]
    BC = fold_right(unfold_right(B) @ C, (r1, n2, n3))
    return fold_left(A @ unfold_left(BC), (n1, n2, n3))


def inner(S, T):
    """Frobenius inner product of two tensors of equal shape."""
    S = np.asarray(S)
    T = np.asarray(T)
    if S.shape != T.shape:
        raise DimensionError(f"shape mismatch: {S.shape} vs {T.shape}")
    return float(np.vdot(S, T))


def norm(T):
    """Frobenius norm."""
    return float(np.linalg.norm(np.asarray(T).ravel()))

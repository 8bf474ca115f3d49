"""SVD, truncated SVD and orthogonal projectors.

All singular value decompositions go through LAPACK's bidiagonalization
drivers (``gesdd`` with a ``gesvd`` fallback). Gram matrices are never
eigendecomposed.
"""

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .exceptions import DimensionError, InadmissibleFrameError, NumericalError

GRAM_TOL = 1e-8


@dataclass(frozen=True)
class TruncatedSvd:
    """Leading ``s`` singular triples of a matrix.

    ``U`` is ``(n, s)`` and ``V`` is ``(m, s)``, both with orthonormal columns,
    and ``S`` holds the singular values in nonincreasing order, so that
    ``U @ np.diag(S) @ V.T`` is a best rank-``s`` approximation.
    """

    U: np.ndarray
    S: np.ndarray
    V: np.ndarray

    @property
    def s(self):
        return self.S.shape[0]

    def reconstruct(self):
        return (self.U * self.S) @ self.V.T


def svd_full(A, full_matrices=False):
    """Thin SVD ``A = U diag(S) V^T`` returning ``(U, S, V)``.

    Raises
    ------
    NumericalError
        If neither LAPACK driver converges.
    """
    A = np.asarray(A, dtype=np.float64)
    if A.ndim != 2:
        raise DimensionError(f"expected a matrix, got ndim={A.ndim}")
    if not np.all(np.isfinite(A)):
        raise ValueError("matrix contains non-finite entries")
    try:
        U, S, Vt = np.linalg.svd(A, full_matrices=full_matrices)
    except np.linalg.LinAlgError:
        try:
            U, S, Vt = scipy.linalg.svd(
                A, full_matrices=full_matrices, lapack_driver="gesvd"
            )
        except (np.linalg.LinAlgError, ValueError) as exc:
            raise NumericalError(
                f"SVD of a {A.shape} matrix failed to converge with both gesdd "
                f"and gesvd (norm={np.linalg.norm(A):.3e}): {exc}"
            ) from exc
    return U, S, Vt.T


def svd_trunc(A, s):
    """Rank-``s`` truncated SVD.

    A zero (or rank-deficient) matrix is not an error: the trailing singular
    values are zero and the corresponding vectors are LAPACK's deterministic
    orthonormal completion.
    """
    A = np.asarray(A, dtype=np.float64)
    s = int(s)
    if A.ndim != 2:
        raise DimensionError(f"expected a matrix, got ndim={A.ndim}")
    if s < 0 or s > min(A.shape):
        raise DimensionError(f"truncation rank s={s} not in [0, {min(A.shape)}]")
    U, S, V = svd_full(A)
    return TruncatedSvd(U[:, :s], S[:s], V[:, :s])


def stiefel_deviation(U):
    """``||U^T U - I||_F``; zero exactly when ``U`` has orthonormal columns."""
    U = np.asarray(U)
    return float(np.linalg.norm(U.T @ U - np.eye(U.shape[1])))


def _check_orthonormal(U):
    U = np.asarray(U, dtype=np.float64)
    if U.ndim != 2:
        raise DimensionError(f"frame must be a matrix, got ndim={U.ndim}")
    dev = stiefel_deviation(U)
    if dev > GRAM_TOL:
        raise InadmissibleFrameError(
            f"frame of shape {U.shape} is not orthonormal (Gram deviation {dev:.2e})"
        )
    return U


def apply_proj(U, A):
    """``P_U A = U U^T A`` for ``U`` with orthonormal columns."""
    U = _check_orthonormal(U)
    return U @ (U.T @ A)


def apply_proj_perp(U, A):
    """``P_U^perp A = A - U U^T A`` for ``U`` with orthonormal columns."""
    U = _check_orthonormal(U)
    return A - U @ (U.T @ A)


def complement_basis(U):
    """Orthonormal basis of ``range(U)^perp``; empty when ``U`` is square."""
    U = _check_orthonormal(U)
    n, s = U.shape
    if s == 0:
        return np.eye(n)
    Q, _ = np.linalg.qr(U, mode="complete")
    return Q[:, s:]


def orth_complement(U):
    """``Q`` of shape ``(n, n - s)`` with ``[U Q]`` orthogonal.

    Raises
    ------
    DimensionError
        If ``U`` already spans the whole space.
    """
    U = np.asarray(U)
    if U.ndim != 2 or U.shape[1] >= U.shape[0]:
        raise DimensionError(f"no orthogonal complement for a frame of shape {U.shape}")
    return complement_basis(U)

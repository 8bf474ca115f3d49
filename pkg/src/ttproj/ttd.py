"""Tensor-train decompositions of third-order tensors.

A TTD ``X = G1 . G2 . G3`` stores ``G1`` of shape ``(n1, r1)``, ``G2`` of shape
``(r1, n2, r2)`` and ``G3`` of shape ``(r2, n3)``.

:func:`canonicalize` produces the two orthogonal gauges used by the tangent
cone parametrization:

* the *right form* ``X = X1p . X2p . X3`` with ``X1p`` and ``unfold_right(X2p)``
  having orthonormal columns (the first two cores are left-orthogonal),
* the *left form* ``X = X1 . X2pp . X3pp`` with ``unfold_left(X2pp)`` and
  ``X3pp`` having orthonormal rows (the last two cores are right-orthogonal).

Both are obtained by QR sweeps; no core is ever inverted.
"""

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .exceptions import DimensionError, RankDeficientError, RankError
from .linalg import svd_full
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

RANK_DEFICIENCY_TOL = 1e-12


@dataclass(frozen=True)
class Ttd:
    """Tensor-train decomposition ``G1 . G2 . G3``."""

    G1: np.ndarray
    G2: np.ndarray
    G3: np.ndarray

    def __post_init__(self):
        if self.G1.ndim != 2 or self.G2.ndim != 3 or self.G3.ndim != 2:
            raise DimensionError("Ttd expects (matrix, order-3 core, matrix)")
        if self.G1.shape[1] != self.G2.shape[0] or self.G2.shape[2] != self.G3.shape[0]:
            raise DimensionError(
                f"core shapes do not chain: {self.G1.shape}, {self.G2.shape}, {self.G3.shape}"
            )

    @property
    def ranks(self):
        return (self.G2.shape[0], self.G2.shape[2])

    @property
    def dims(self):
        return (self.G1.shape[0], self.G2.shape[1], self.G3.shape[1])

    def full(self):
        return contract3(self.G1, self.G2, self.G3)


@dataclass(frozen=True, eq=False)
class CanonicalTtPair:
    """Right form ``X1p . X2p . X3`` and left form ``X1 . X2pp . X3pp`` of one tensor."""

    X1p: np.ndarray
    X2p: np.ndarray
    X3: np.ndarray
    X1: np.ndarray
    X2pp: np.ndarray
    X3pp: np.ndarray

    @property
    def ranks(self):
        return (self.X2p.shape[0], self.X2p.shape[2])

    @property
    def dims(self):
        return (self.X1p.shape[0], self.X2p.shape[1], self.X3.shape[1])

    @cached_property
    def tensor(self):
        return contract3(self.X1p, self.X2p, self.X3)

    def right_form(self):
        return Ttd(self.X1p, self.X2p, self.X3)

    def left_form(self):
        return Ttd(self.X1, self.X2pp, self.X3pp)

    def stiefel_residuals(self):
        """Deviation from orthonormality of the four gauge-fixed factors."""
        r1, r2 = self.ranks
        X2pR = unfold_right(self.X2p)
        X2ppL = unfold_left(self.X2pp)
        return {
            "X1p": float(np.linalg.norm(self.X1p.T @ self.X1p - np.eye(r1))),
            "X2p_R": float(np.linalg.norm(X2pR.T @ X2pR - np.eye(r2))),
            "X2pp_L": float(np.linalg.norm(X2ppL @ X2ppL.T - np.eye(r1))),
            "X3pp": float(np.linalg.norm(self.X3pp @ self.X3pp.T - np.eye(r2))),
        }


def _check_ranks(ranks):
    ranks = tuple(int(r) for r in ranks)
    if len(ranks) != 2:
        raise RankError(f"expected a pair of ranks, got {ranks}")
    return ranks


def tt_svd(T, ranks):
    """TT-SVD truncated to ``ranks = (k1, k2)``.

    Exact whenever ``tt_rank(T) <= ranks`` elementwise. The returned cores are
    left-orthogonal (``G1`` and ``unfold_right(G2)`` have orthonormal columns).
    """
    T = check_tensor3(T)
    n1, n2, n3 = T.shape
    k1, k2 = _check_ranks(ranks)
    if not 1 <= k1 <= min(n1, n2 * n3):
        raise RankError(f"k1={k1} must lie in [1, {min(n1, n2 * n3)}]")
    if not 1 <= k2 <= min(n3, k1 * n2):
        raise RankError(f"k2={k2} must lie in [1, {min(n3, k1 * n2)}]")

    U, S, V = svd_full(unfold_left(T))
    G1 = U[:, :k1]
    rest = fold_left(S[:k1, None] * V[:, :k1].T, (k1, n2, n3))

    U, S, V = svd_full(unfold_right(rest))
    G2 = fold_right(U[:, :k2], (k1, n2, k2))
    G3 = S[:k2, None] * V[:, :k2].T
    return Ttd(G1, G2, G3)


def tt_rank(T, tol=1e-10):
    """Numerical TT-rank ``(rank(T^L), rank(T^R))`` relative to ``tol * sigma_max``."""
    T = check_tensor3(T)
    if tol < 0:
        raise ValueError("tol must be nonnegative")
    out = []
    for M in (unfold_left(T), unfold_right(T)):
        S = np.linalg.svd(M, compute_uv=False)
        if S.size == 0 or S[0] == 0.0:
            out.append(0)
        else:
            out.append(int(np.sum(S > tol * S[0])))
    return tuple(out)


def _qr_checked(M, what, tensor):
    Q, R = np.linalg.qr(M)
    S = np.linalg.svd(R, compute_uv=False)
    if S.size and (S[0] == 0.0 or S[-1] <= RANK_DEFICIENCY_TOL * S[0]):
        true_ranks = tt_rank(tensor(), tol=RANK_DEFICIENCY_TOL)
        raise RankDeficientError(
            f"{what} is rank deficient (sigma_min/sigma_max = "
            f"{S[-1] / S[0] if S[0] else 0.0:.2e}); the nominal TT-rank overstates "
            f"the TT-rank {true_ranks}",
            true_ranks=true_ranks,
        )
    return Q, R


def canonicalize(D):
    """Compute both orthogonal gauges of a full-rank TTD.

    Raises
    ------
    RankDeficientError
        If some unfolding of a core has relative singular value below
        ``1e-12``, i.e. the stored ranks exceed the TT-rank of the tensor.
    """
    G1, G2, G3 = (np.asarray(G, dtype=np.float64) for G in (D.G1, D.G2, D.G3))
    D = Ttd(G1, G2, G3)
    r1, r2 = D.ranks
    n1, n2, n3 = D.dims
    if r1 > n1 or r2 > n3 or r1 > n2 * r2 or r2 > r1 * n2:
        raise RankDeficientError(
            f"ranks {(r1, r2)} cannot be full for dims {(n1, n2, n3)}",
            true_ranks=tt_rank(D.full(), tol=RANK_DEFICIENCY_TOL),
        )

    # left-to-right sweep
    Q, R = _qr_checked(G1, "G1", D.full)
    X1p = Q
    Q, R = _qr_checked(unfold_right(mode1(R, G2)), "G2 (right unfolding)", D.full)
    X2p = fold_right(Q, (r1, n2, r2))
    X3 = R @ G3

    # right-to-left sweep
    Q, R = _qr_checked(G3.T, "G3", D.full)
    X3pp = Q.T
    core = mode3(G2, R.T)
    Q, R = _qr_checked(unfold_left(core).T, "G2 (left unfolding)", D.full)
    X2pp = fold_left(Q.T, (r1, n2, r2))
    X1 = G1 @ R.T

    return CanonicalTtPair(X1p=X1p, X2p=X2p, X3=X3, X1=X1, X2pp=X2pp, X3pp=X3pp)


def random_tt(dims, ranks, random_state=None):
    """Draw a random TTD with i.i.d. standard normal cores.

    ``random_state`` is anything accepted by :func:`numpy.random.default_rng`
    (an int seed, a ``SeedSequence`` or a ``Generator``). Normals come from the
    PCG64 bit generator through NumPy's ziggurat sampler.

    Returns
    -------
    tensor : ndarray of shape dims
    ttd : Ttd
    """
    n1, n2, n3 = (int(d) for d in dims)
    r1, r2 = _check_ranks(ranks)
    if min(n1, n2, n3) < 1 or min(r1, r2) < 1:
        raise RankError(f"dims {dims} and ranks {ranks} must be positive")
    rng = np.random.default_rng(random_state)
    G1 = rng.standard_normal((n1, r1))
    G2 = rng.standard_normal((r1, n2, r2))
    G3 = rng.standard_normal((r2, n3))
    D = Ttd(G1, G2, G3)
    return D.full(), D

"""scikit-learn style wrappers.

``fit`` takes the base point ``X`` (a dense tensor, a :class:`~ttproj.ttd.Ttd`
or a :class:`~ttproj.ttd.CanonicalTtPair`) and stores its canonical TT
gauges. ``transform`` maps a tensor ``Y`` of the same shape, or a stack of
them with shape ``(n_samples, n1, n2, n3)``, to its projection onto the
tangent cone at ``X``.
"""

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .exceptions import DimensionError, RankError
from .oracle import exact_project_grid, exact_project_multistart
from .projection import DEFAULT_EPS, DEFAULT_MAX_ITER, angle_value, approx_project
from .tensor3 import check_tensor3
from .ttd import CanonicalTtPair, Ttd, canonicalize, tt_rank, tt_svd


def check_rank_pair(value, name):
    try:
        pair = tuple(int(v) for v in value)
    except TypeError:
        raise RankError(f"{name} must be a pair of integers, got {value!r}") from None
    if len(pair) != 2 or min(pair) < 1:
        raise RankError(f"{name} must be a pair of positive integers, got {value!r}")
    return pair


def check_targets(Y, dims):
    """Return ``(stack, was_single)`` with ``stack`` of shape ``(n_samples, *dims)``."""
    Y = np.asarray(Y, dtype=np.float64)
    if Y.ndim == 3:
        Y = check_tensor3(Y, "Y")
        single = True
        Y = Y[None]
    elif Y.ndim == 4:
        single = False
        if not np.all(np.isfinite(Y)):
            raise ValueError("Y contains non-finite entries")
    else:
        raise DimensionError(f"Y must have 3 or 4 dimensions, got {Y.ndim}")
    if Y.shape[1:] != tuple(dims):
        raise DimensionError(f"Y has tensor shape {Y.shape[1:]}, fitted base point has {dims}")
    return Y, single


class _ConeProjectorBase(TransformerMixin, BaseEstimator):

    def fit(self, X, y=None):
        """Store the canonical gauges of the base point ``X``."""
        k = check_rank_pair(self.rank_bound, "rank_bound")
        if isinstance(X, CanonicalTtPair):
            canonical = X
        elif isinstance(X, Ttd):
            canonical = canonicalize(X)
        else:
            T = check_tensor3(X, "X")
            ranks = tt_rank(T, tol=self.rank_tol)
            if min(ranks) == 0:
                raise RankError("the base point must be nonzero")
            canonical = canonicalize(tt_svd(T, ranks))
        if canonical.ranks[0] > k[0] or canonical.ranks[1] > k[1]:
            raise RankError(f"base point has TT-rank {canonical.ranks} above the bound {k}")
        self.canonical_ = canonical
        self.tt_rank_ = canonical.ranks
        self.dims_ = canonical.dims
        return self

    def transform(self, Y):
        check_is_fitted(self, "canonical_")
        stack, single = check_targets(Y, self.dims_)
        out = np.stack([self._project(T)[1] for T in stack])
        return out[0] if single else out

    def project(self, Y):
        """Full result object for a single tensor ``Y``."""
        check_is_fitted(self, "canonical_")
        stack, single = check_targets(Y, self.dims_)
        if not single:
            raise DimensionError("project expects a single tensor; use transform for stacks")
        return self._project(stack[0])[0]

    def score(self, Y, y=None):
        """Mean cosine between each ``Y`` and its projection."""
        check_is_fitted(self, "canonical_")
        stack, _ = check_targets(Y, self.dims_)
        return float(np.mean([angle_value(T, self._project(T)[1]) for T in stack]))


class TangentConeProjector(_ConeProjectorBase):
    """Approximate projection onto the tangent cone at ``X`` to tensors of TT-rank at most ``rank_bound``.

    Parameters
    ----------
    rank_bound : (int, int), default=(3, 3)
        TT-rank bound ``(k1, k2)`` of the variety.
    eps : float, default=1e-16
        Stopping tolerance on the change of the alternating objective.
    max_iter : int, default=10
        Maximum number of alternating iterations.
    rank_tol : float, default=1e-10
        Relative singular value threshold used to read the TT-rank of a dense ``X``.

    Attributes
    ----------
    canonical_ : CanonicalTtPair
    tt_rank_ : (int, int)
    dims_ : (int, int, int)

    Examples
    --------
    >>> from ttproj import TangentConeProjector, random_tt
    >>> import numpy as np
    >>> X, _ = random_tt((5, 5, 5), (2, 2), random_state=0)
    >>> Y = np.random.default_rng(1).standard_normal((5, 5, 5))
    >>> proj = TangentConeProjector(rank_bound=(3, 3)).fit(X)
    >>> proj.tt_rank_
    (2, 2)
    >>> proj.transform(Y).shape
    (5, 5, 5)
    """

    def __init__(self, rank_bound=(3, 3), eps=DEFAULT_EPS, max_iter=DEFAULT_MAX_ITER,
                 rank_tol=1e-10):
        self.rank_bound = rank_bound
        self.eps = eps
        self.max_iter = max_iter
        self.rank_tol = rank_tol

    def _project(self, Y):
        res = approx_project(Y, self.canonical_, check_rank_pair(self.rank_bound, "rank_bound"),
                             eps=self.eps, i_max=self.max_iter)
        return res, res.y_tilde


class ExactTangentConeProjector(_ConeProjectorBase):
    """Reference projection onto the tangent cone by multistart or grid search.

    Parameters
    ----------
    rank_bound : (int, int), default=(3, 3)
    method : {"multistart", "grid"}, default="multistart"
    n_starts : int, default=100
        Number of starts for ``method="multistart"``.
    resolution : int, default=720
        Angles per circle for ``method="grid"``.
    max_iter : int, default=500
        Iteration cap of each multistart run.
    random_state : int, SeedSequence or Generator, optional
    rank_tol : float, default=1e-10
    """

    def __init__(self, rank_bound=(3, 3), method="multistart", n_starts=100, resolution=720,
                 max_iter=500, random_state=None, rank_tol=1e-10):
        self.rank_bound = rank_bound
        self.method = method
        self.n_starts = n_starts
        self.resolution = resolution
        self.max_iter = max_iter
        self.random_state = random_state
        self.rank_tol = rank_tol

    def _project(self, Y):
        k = check_rank_pair(self.rank_bound, "rank_bound")
        if self.method == "multistart":
            res = exact_project_multistart(Y, self.canonical_, k, n_starts=self.n_starts,
                                           random_state=self.random_state, i_max=self.max_iter)
        elif self.method == "grid":
            res = exact_project_grid(Y, self.canonical_, k, resolution=self.resolution)
        else:
            raise ValueError(f"method must be 'multistart' or 'grid', got {self.method!r}")
        return res, res.y_hat

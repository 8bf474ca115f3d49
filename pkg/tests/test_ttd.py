import numpy as np
import pytest

from ttproj.exceptions import RankDeficientError, RankError
from ttproj.tensor3 import contract3, norm
from ttproj.ttd import Ttd, canonicalize, random_tt, tt_rank, tt_svd


def rank_one(rng, dims=(4, 3, 5)):
    a, b, c = (rng.standard_normal(n) for n in dims)
    return np.einsum("i,j,k->ijk", a, b, c), (a, b, c)


def test_tt_svd_rank_one(rng):
    T, _ = rank_one(rng)
    D = tt_svd(T, (1, 1))
    assert norm(D.full() - T) <= 1e-12 * norm(T)


def test_tt_svd_recovers_random_tt(rng):
    T, _ = random_tt((5, 5, 5), (2, 2), rng)
    assert norm(tt_svd(T, (2, 2)).full() - T) <= 1e-10 * norm(T)


def test_tt_svd_full_rank_exact(rng):
    T = rng.standard_normal((4, 3, 5))
    assert norm(tt_svd(T, (4, 5)).full() - T) <= 1e-12 * norm(T)


def test_tt_svd_rank_bounds(rng):
    T = rng.standard_normal((3, 3, 3))
    with pytest.raises(RankError):
        tt_svd(T, (4, 1))
    with pytest.raises(RankError):
        tt_svd(T, (1, 0))


def test_tt_svd_truncation_rank(rng):
    T = rng.standard_normal((5, 4, 6))
    D = tt_svd(T, (2, 3))
    r1, r2 = tt_rank(D.full(), tol=1e-10)
    assert r1 <= 2 and r2 <= 3


def test_tt_rank_examples(rng):
    assert tt_rank(np.zeros((3, 3, 3))) == (0, 0)
    assert tt_rank(rank_one(rng)[0]) == (1, 1)
    T, _ = random_tt((5, 5, 5), (2, 2), rng)
    assert tt_rank(T, tol=1e-10) == (2, 2)


def test_random_tt_deterministic():
    T1, _ = random_tt((5, 5, 5), (2, 2), 123)
    T2, _ = random_tt((5, 5, 5), (2, 2), 123)
    assert np.array_equal(T1, T2)
    T3, _ = random_tt((5, 5, 5), (1, 1), 7)
    assert tt_rank(T3) == (1, 1)


@pytest.mark.parametrize("seed", range(20))
def test_canonicalize_residuals(seed):
    T, D = random_tt((5, 5, 5), (2, 2), seed)
    X = canonicalize(D)
    assert max(X.stiefel_residuals().values()) <= 1e-12
    assert norm(X.right_form().full() - T) <= 1e-12 * norm(T)
    assert norm(X.left_form().full() - T) <= 1e-12 * norm(T)


def test_canonicalize_idempotent_up_to_gauge(rng):
    T, D = random_tt((4, 5, 3), (2, 3), rng)
    X = canonicalize(D)
    X2 = canonicalize(X.right_form())
    assert norm(X2.tensor - T) <= 1e-12 * norm(T)
    assert max(X2.stiefel_residuals().values()) <= 1e-12


def test_canonicalize_rank_one(rng):
    T, (a, b, c) = rank_one(rng)
    X = canonicalize(Ttd(a[:, None], b[None, :, None], c[None, :]))
    np.testing.assert_allclose(np.abs(X.X1p[:, 0]), np.abs(a) / np.linalg.norm(a), atol=1e-14)
    assert norm(X.tensor - T) <= 1e-13 * norm(T)


def test_canonicalize_rank_deficient(rng):
    G1 = rng.standard_normal((5, 1)) @ np.ones((1, 2))   # rank-one first core
    D = Ttd(G1, rng.standard_normal((2, 5, 2)), rng.standard_normal((2, 5)))
    with pytest.raises(RankDeficientError) as info:
        canonicalize(D)
    assert info.value.true_ranks[0] == 1


def test_canonicalize_gauge_shapes(rng):
    _, D = random_tt((6, 4, 5), (3, 2), rng)
    X = canonicalize(D)
    assert X.X1p.shape == (6, 3) and X.X2p.shape == (3, 4, 2) and X.X3.shape == (2, 5)
    assert X.X1.shape == (6, 3) and X.X2pp.shape == (3, 4, 2) and X.X3pp.shape == (2, 5)
    assert X.ranks == (3, 2) and X.dims == (6, 4, 5)
    assert norm(contract3(X.X1, X.X2pp, X.X3pp) - X.tensor) <= 1e-12 * norm(X.tensor)

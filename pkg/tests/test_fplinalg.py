import numpy as np
import pytest

from hallq import fplinalg as fl


def test_rank_small():
    assert fl.rank(np.eye(3, dtype=np.int64), 2) == 3
    assert fl.rank(np.zeros((2, 5), dtype=np.int64), 3) == 0
    assert fl.rank(fl.mat([[1, 1], [1, 1]], 2), 2) == 1


def test_rank_matches_batched():
    rng = np.random.default_rng(0)
    for p in (2, 3, 5):
        stack = rng.integers(0, p, size=(50, 4, 6))
        ranks = fl.rank_batched(stack, p)
        for m, r in zip(stack, ranks):
            assert fl.rank(m, p) == r


def test_rank_batched_edge_shapes():
    assert list(fl.rank_batched(np.zeros((3, 0, 4), dtype=np.int64), 2)) == [0, 0, 0]
    assert list(fl.rank_batched(np.zeros((2, 4, 0), dtype=np.int64), 2)) == [0, 0]


def test_rank_product_bound():
    rng = np.random.default_rng(1)
    for _ in range(20):
        a = rng.integers(0, 5, size=(4, 3))
        b = rng.integers(0, 5, size=(3, 5))
        ab = fl.matmul(a, b, 5)
        assert fl.rank(ab, 5) <= min(fl.rank(a, 5), fl.rank(b, 5))


def test_nullspace_and_solve():
    rng = np.random.default_rng(2)
    for p in (2, 3, 5):
        for _ in range(10):
            a = rng.integers(0, p, size=(4, 5))
            ker = fl.nullspace(a, p)
            assert ker.shape[0] == 5 - fl.rank(a, p)
            if ker.shape[0]:
                assert not ((a @ ker.T) % p).any()
            x = rng.integers(0, p, size=5)
            b = (a @ x) % p
            sol = fl.solve(a, b, p)
            assert sol is not None
            assert (((a @ sol) % p) == b).all()


def test_gaussian_binomial():
    assert fl.gaussian_binomial(2, 1, 2) == 3
    assert fl.gaussian_binomial(4, 2, 1) == 6
    assert fl.gaussian_binomial(3, 1, 5) == 31


@pytest.mark.parametrize("p", [2, 3, 5])
@pytest.mark.parametrize("n", [0, 1, 2, 3, 4])
def test_subspace_enumeration_counts(p, n):
    for k in range(n + 1):
        subs = list(fl.enumerate_subspaces(p, n, k))
        assert len(subs) == fl.gaussian_binomial(n, k, p)
        seen = {tuple(map(tuple, s)) for s in subs}
        assert len(seen) == len(subs)
        for s in subs:
            assert s.shape == (k, n)
            if k:
                assert fl.rank(s, p) == k


def test_subspace_budget():
    with pytest.raises(fl.ResourceError):
        list(fl.enumerate_subspaces(2, 10, 5, budget=10))


def test_subspace_list_matches_enumeration():
    for p, n, k in [(2, 3, 1), (3, 3, 2), (5, 2, 1)]:
        groups = fl.subspace_list(p, n, k)
        total = sum(stack.shape[0] for _, stack in groups)
        assert total == fl.gaussian_binomial(n, k, p)


def test_solve_exact_rational():
    sol = fl.solve_exact_rational([[2, 0], [0, 4], [2, 4]], [2, 8, 10])
    assert sol == [1, 2]
    with pytest.raises(ValueError):
        fl.solve_exact_rational([[1, 1], [2, 2]], [1, 2])


def test_primes():
    assert fl.primes(5) == [2, 3, 5, 7, 11]
    assert fl.primes(3, minimum=6) == [7, 11, 13]


def test_q_factorial():
    assert fl.q_factorial(3, 1) == 6
    assert fl.q_factorial(3, 2) == 1 * 3 * 7

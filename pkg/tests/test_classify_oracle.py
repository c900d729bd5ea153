"""Exhaustive agreement between rank-invariant and brute-force classification."""

import numpy as np
import pytest

from helpers_brute import (all_reps, brute_classify_cyclic,
                           brute_classify_kronecker)
from hallq import reps as rp
from hallq.quivers import cyclic, kronecker


def _dimvecs(n, total_max):
    out = []

    def rec(i, acc):
        if i == n:
            if 0 < sum(acc) <= total_max:
                out.append(tuple(acc))
            return
        for x in range(total_max + 1):
            if sum(acc) + x <= total_max:
                rec(i + 1, acc + [x])

    rec(0, [])
    return out


@pytest.mark.parametrize("dims", _dimvecs(2, 4))
def test_kronecker_oracle_f2(dims):
    q = kronecker()
    reps = list(all_reps(q, dims, 2))
    fast = rp.classify_kronecker_batch(
        dims,
        np.stack([r.maps[0] for r in reps]),
        np.stack([r.maps[1] for r in reps]), 2)
    for rep, cls in zip(reps, fast):
        assert brute_classify_kronecker(rep) == cls


@pytest.mark.parametrize("r", [2, 3])
def test_cyclic_oracle_f2(r):
    q = cyclic(r)
    for dims in _dimvecs(r, 4 if r == 2 else 3):
        reps = [m for m in all_reps(q, dims, 2, nilpotent_only=True)]
        if not reps:
            continue
        stacks = [np.stack([m.maps[j] for m in reps]) for j in range(r)]
        fast = rp.classify_cyclic_batch(r, dims, stacks, 2)
        for rep, cls in zip(reps, fast):
            assert brute_classify_cyclic(rep) == cls


def test_kronecker_oracle_f3_spot():
    q = kronecker()
    for dims in [(2, 2), (2, 1), (1, 2)]:
        reps = list(all_reps(q, dims, 3))
        fast = rp.classify_kronecker_batch(
            dims,
            np.stack([r.maps[0] for r in reps]),
            np.stack([r.maps[1] for r in reps]), 3)
        for rep, cls in zip(reps, fast):
            assert brute_classify_kronecker(rep) == cls

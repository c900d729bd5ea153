from itertools import combinations

import pytest
from hypothesis import given, strategies as st

from hallq.partitions import (MultiPartition, Partition, Word, conjugate,
                              dominance_leq, e_to_m_entry, h_to_m_entry,
                              monomial_product, newton_identity_holds,
                              partitions_of, symfun_transition,
                              tight_words_of_content)


def test_conjugate_examples():
    assert conjugate((2, 1)) == (2, 1)
    assert conjugate((3, 1)) == (2, 1, 1)
    assert conjugate(()) == ()


parts_strategy = st.lists(st.integers(min_value=1, max_value=8),
                          min_size=0, max_size=6)


@given(parts_strategy)
def test_conjugate_involution(parts):
    lam = Partition(parts)
    assert lam.conjugate().conjugate() == lam
    assert lam.conjugate().weight == lam.weight


def test_dominance_examples():
    assert dominance_leq((2, 2), (3, 1))
    assert not dominance_leq((3, 1), (2, 2))
    assert dominance_leq((1, 1, 1), (1, 1, 1))
    with pytest.raises(ValueError):
        dominance_leq((2,), (1,))


@pytest.mark.parametrize("n", range(1, 9))
def test_dominance_partial_order_and_conjugation_antitone(n):
    ps = partitions_of(n)
    for a in ps:
        assert dominance_leq(a, a)
    for a, b in combinations(ps, 2):
        ab = dominance_leq(a, b)
        ba = dominance_leq(b, a)
        assert not (ab and ba)  # antisymmetry on distinct elements
        # conjugation reverses dominance
        assert ab == dominance_leq(conjugate(b), conjugate(a))
    for a in ps:
        for b in ps:
            for c in ps:
                if dominance_leq(a, b) and dominance_leq(b, c):
                    assert dominance_leq(a, c)


def test_aperiodic():
    assert not MultiPartition([(1,), (1,)]).is_aperiodic()
    assert MultiPartition([(2,), ()]).is_aperiodic()
    assert MultiPartition([(), ()]).is_aperiodic()
    assert not MultiPartition([(2,), (2, 1), (2,)]).is_aperiodic()
    assert MultiPartition([(2, 1), (1, 1), (2,)]).is_aperiodic()


def test_word_tight_roundtrip():
    w = Word([1, 1, 2, 1])
    assert w.tight() == [(1, 2), (2, 1), (1, 1)]
    assert Word.from_tight(w.tight()) == w
    with pytest.raises(ValueError):
        Word.from_tight([(1, 2), (1, 1)])


def test_tight_words_of_content():
    ws = tight_words_of_content((1, 1))
    assert [w.letters for w in ws] == [(1, 2), (2, 1)]
    ws = tight_words_of_content((2, 1))
    contents = {w.letters for w in ws}
    assert contents == {(1, 1, 2), (2, 1, 1), (1, 2, 1)}
    for w in ws:
        tight = w.tight()
        assert all(a[0] != b[0] for a, b in zip(tight, tight[1:]))


def test_symfun_small():
    idx, e_mat, h_mat = symfun_transition(2)
    assert idx == ((2,), (1, 1))
    # e_2 = m_{(1,1)}; e_{(1,1)} = e_1^2 = m_(2) + 2 m_(1,1)
    assert e_to_m_entry((2,), (2,)) == 0
    assert e_to_m_entry((2,), (1, 1)) == 1
    assert h_to_m_entry((2,), (2,)) == 1
    assert h_to_m_entry((2,), (1, 1)) == 1
    assert e_to_m_entry((1,), (1,)) == 1
    assert h_to_m_entry((1,), (1,)) == 1


def test_monomial_product():
    # m_(1) * m_(1) = m_(2) + 2 m_(1,1)
    prod = monomial_product((1,), (1,))
    assert prod == {(2,): 1, (1, 1): 2}


@pytest.mark.parametrize("n", range(1, 11))
def test_newton_identity(n):
    assert newton_identity_holds(n)

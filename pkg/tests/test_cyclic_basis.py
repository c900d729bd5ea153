import pytest

from hallq import cyclic_basis as cb
from hallq import engine as eng
from hallq.partitions import MultiPartition, Word
from hallq.reps import cyclic_class_dim, enumerate_cyclic_classes
from hallq import reports


def MP(*comps):
    return MultiPartition(list(comps))


@pytest.fixture(scope="module")
def ctx2():
    return cb.context(2)


@pytest.fixture(scope="module")
def ctx3():
    return cb.context(3)


def test_generic_extension_examples(ctx2):
    s1 = ctx2.fam.simple_class(1)
    s2 = ctx2.fam.simple_class(2)
    assert ctx2.generic_extension(s1, s1) == MP((1, 1), ())
    assert ctx2.generic_extension(s1, s2) == MP((2,), ())
    lam = MP((2, 1), (1,))
    assert ctx2.generic_extension(lam, ctx2.fam.zero_class()) == lam
    assert ctx2.generic_extension(ctx2.fam.zero_class(), lam) == lam


def test_wp_examples(ctx2):
    assert ctx2.wp(Word([1, 2])) == MP((2,), ())
    assert ctx2.wp(Word([1, 1])) == MP((1, 1), ())
    assert ctx2.wp(Word([2, 1])) == MP((), (2,))


def test_generic_extension_associative(ctx2):
    classes = [c for a in [(1, 0), (0, 1), (1, 1)]
               for c in enumerate_cyclic_classes(a, 2)]
    for a in classes:
        for b in classes:
            for c in classes:
                lhs = ctx2.generic_extension(ctx2.generic_extension(a, b), c)
                rhs = ctx2.generic_extension(a, ctx2.generic_extension(b, c))
                assert lhs == rhs


def test_degeneration_order_examples(ctx2):
    split = MP((1,), (1,))
    chain1 = MP((2,), ())
    chain2 = MP((), (2,))
    assert cb.degeneration_leq(split, chain1)
    assert not cb.degeneration_leq(chain1, split)
    assert cb.degeneration_leq(chain1, chain1)
    assert not cb.degeneration_leq(chain1, chain2)
    assert not cb.degeneration_leq(chain2, chain1)
    with pytest.raises(ValueError):
        cb.degeneration_leq(MP((1,), ()), MP((), (1,)))


def test_degeneration_compatible_with_extension(ctx2):
    # lam' <= lam, mu' <= mu implies lam' * mu' <= lam * mu
    dims = [(1, 0), (0, 1), (1, 1)]
    classes = [c for a in dims for c in enumerate_cyclic_classes(a, 2)]
    for lam in classes:
        for mu in classes:
            dl = cyclic_class_dim(lam)
            dm = cyclic_class_dim(mu)
            lows_l = [x for x in enumerate_cyclic_classes(dl, 2)
                      if cb.degeneration_leq(x, lam)]
            lows_m = [x for x in enumerate_cyclic_classes(dm, 2)
                      if cb.degeneration_leq(x, mu)]
            top = ctx2.generic_extension(lam, mu)
            for a in lows_l:
                for b in lows_m:
                    assert cb.degeneration_leq(
                        ctx2.generic_extension(a, b), top)


def test_end_dim_class_matches_models(ctx2):
    from hallq import reps as rp
    for alpha in [(1, 1), (2, 1), (2, 2)]:
        for pi in enumerate_cyclic_classes(alpha, 2):
            m = rp.instantiate_cyclic(pi, 3)
            assert rp.end_dim(m) == cb.end_dim_class(pi)


def test_distinguished_words_examples(ctx2, ctx3):
    w = ctx2.find_distinguished_word(MP((2,), ()))
    assert w.letters == (1, 2)
    w = ctx2.find_distinguished_word(MP((1,), ()))
    assert w.letters == (1,)
    w = ctx3.find_distinguished_word(MP((1,), (1,), ()))
    assert len(w.letters) == 2 and set(w.letters) <= {1, 2}


def test_layered_count_certificate(ctx2):
    pi = MP((2,), ())
    assert ctx2.layered_count(pi, Word([1, 2]), 2) == 1
    assert ctx2.layered_count(pi, Word([1, 2]), 3) == 1
    # the non-distinguished reading has no filtration at all
    assert ctx2.layered_count(pi, Word([2, 1]), 2) == 0


def test_wp_surjective_small(ctx2):
    from hallq.partitions import tight_words_of_content
    for alpha in [(1, 1), (2, 1), (2, 2), (3, 2)]:
        hit = set()
        for w in tight_words_of_content(alpha):
            hit.add(ctx2.wp(w))
        aper = {pi for pi in enumerate_cyclic_classes(alpha, 2)
                if pi.is_aperiodic()}
        assert aper <= hit


def test_e_basis_small(ctx2):
    basis = ctx2.build_E_basis((1, 1))
    assert set(basis) == {MP((2,), ()), MP((), (2,))}
    # no aperiodic class lies strictly below, so E = the divided monomial,
    # whose only tail term sits at the non-aperiodic split class
    split = MP((1,), (1,))
    assert basis[MP((2,), ())] == eng.HallElement(
        ctx2.fam, {MP((2,), ()): 1, split: 1})
    assert basis[MP((), (2,))] == eng.HallElement(
        ctx2.fam, {MP((), (2,)): 1, split: 1})
    # the split tails cancel in the full-period difference
    diff = basis[MP((2,), ())] - basis[MP((), (2,))]
    assert diff == (eng.char_fn(ctx2.fam, MP((2,), ()))
                    - eng.char_fn(ctx2.fam, MP((), (2,))))
    basis = ctx2.build_E_basis((1, 0))
    assert basis[MP((1,), ())] == eng.char_fn(ctx2.fam, MP((1,), ()))


def test_e_basis_rank_one_empty():
    ctx1 = cb.context(1)
    assert ctx1.build_E_basis((2,)) == {}


def test_section_save_load(tmp_path, ctx2):
    ctx2.section_for((1, 1))
    path = tmp_path / "section.json"
    ctx2.save_section(path)
    fresh = cb.CyclicContext(2)
    n = fresh.load_section(path)
    assert n >= 2


@pytest.mark.parametrize("alpha", [(1, 1), (2, 1), (2, 2)])
def test_verify_suite_r2(ctx2, alpha):
    results = ctx2.verify_suite(alpha)
    assert reports.all_ok(results), reports.summary_lines(results)


def test_verify_suite_r3(ctx3):
    results = ctx3.verify_suite((1, 1, 1))
    assert reports.all_ok(results), reports.summary_lines(results)

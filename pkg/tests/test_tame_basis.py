import pytest

from hallq import engine as eng
from hallq import reports
from hallq import tame_basis as tb
from hallq.partitions import MultiPartition
from hallq.tame import TameClass


@pytest.fixture(scope="module")
def ctx():
    return tb.context()


def test_tube_E_quasi_simple(ctx):
    pi = MultiPartition([(1,), ()])
    el = ctx.tube_E(pi)
    assert el == eng.char_fn(ctx.fam, TameClass(tube=((1,), ())))


def test_tube_E_real_root_chain(ctx):
    # quasi-length 1 chains are real-root classes: E is the plain indicator
    for pi in (MultiPartition([(1,), ()]), MultiPartition([(), (1,)])):
        el = ctx.tube_E(pi)
        assert el == eng.char_fn(ctx.fam, TameClass(tube=pi))


def test_m_fn_spreads_over_tube_point(ctx):
    # the embedded regular class function covers the homogeneous point
    # classes and the doubled-length tube classes
    el = ctx.m_fn((1,))
    assert len(el.terms) == 2
    assert el.coeff(TameClass(homog=(1,))) == 1
    tube_comp = [[], []]
    tube_comp[ctx.k1 - 1] = [2]
    assert el.coeff(TameClass(tube=tuple(map(tuple, tube_comp)))) == 1


def test_tube_E_matches_engine_product(ctx):
    # E for the full-period chain equals the transported cyclic element;
    # cross-check the transport against a direct engine product
    fam = ctx.fam
    s2 = eng.simple(fam, 2)        # one quasi-simple
    other = ctx.tube_E(MultiPartition([(), (1,)]))
    # product of the two quasi-simple indicators in tube order
    prod = ctx.engine.multiply(s2, other)
    # compare with the transported cyclic product
    cyc = ctx.cyclic
    ps = cyc.engine.multiply(eng.simple(cyc.fam, 1), eng.simple(cyc.fam, 2))
    transported = eng.HallElement(fam, {
        ctx.tube_class(lam): c for lam, c in ps.terms.items()})
    # identify which tame simple corresponds to cyclic vertex 1
    if eng.family("a2tilde:1").simple_class(2) != \
            TameClass(tube=((1,), ())):
        pytest.skip("tube labelling differs; covered by product checks")
    assert prod == transported


def test_bc_element_unit_and_simple(ctx):
    assert ctx.bc_element(TameClass()) == eng.unit(ctx.fam)
    cls = TameClass(prep=[(0, 0, 1)])
    assert ctx.bc_element(cls) == eng.char_fn(ctx.fam, cls)


def test_bc_unitriangular_delta(ctx):
    res = ctx.verify_bc_unitriangular((1, 1, 1))
    assert res.ok, res.to_json()


def test_bc_linear_independence(ctx):
    for gamma in [(1, 1, 1), (1, 1, 0), (2, 1, 1)]:
        res = ctx.verify_bc_linear_independence(gamma)
        assert res.ok, res.to_json()


def test_expand_in_bc_roundtrip(ctx):
    fam = ctx.fam
    f = ctx.engine.multiply(eng.simple(fam, 1), eng.simple(fam, 3))
    coeffs = ctx.expand_in_bc(f)
    assert coeffs is not None
    rebuilt = eng.HallElement(fam)
    for c, v in coeffs.items():
        rebuilt = rebuilt + ctx.bc_element(c).scale(v)
    assert rebuilt == f


def test_multiplicity_bookkeeping(ctx):
    results = ctx.verify_multiplicity_bookkeeping()
    assert reports.all_ok(results), reports.summary_lines(results)


def test_prep_prei_factorization_small(ctx):
    res = ctx.prep_prei_factorization({(0, 0, 1): 2}, side="prep")
    assert res.ok, res.to_json()
    res = ctx.prep_prei_factorization({(0, 0, 1): 1, (0, 1, 1): 1},
                                      side="prep")
    assert res.ok, res.to_json()
    res = ctx.prep_prei_factorization({(1, 0, 0): 1, (1, 1, 0): 1},
                                      side="prei")
    assert res.ok, res.to_json()


def test_bc_products_tiny(ctx):
    results = ctx.verify_bc_products(3)
    assert reports.all_ok(results), "\n".join(
        r for r in reports.summary_lines(results) if "FAIL" in r)

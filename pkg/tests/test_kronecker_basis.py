import pytest

from hallq import engine as eng
from hallq import kronecker_basis as kb
from hallq import reports
from hallq.partitions import partitions_of
from hallq.reps import KroneckerClass


@pytest.fixture(scope="module")
def ctx():
    return kb.context()


def test_p1_equals_h1(ctx):
    assert ctx.p_fn(1) == ctx.h_fn(1) == ctx.e_fn(1)


def test_bracket_simple_case(ctx):
    # [1_2, 1_1] = P_delta
    lhs = ctx.bracket(ctx.prei_fn((0,)), ctx.prep_fn((0,)))
    assert lhs == ctx.p_fn(1)


def test_bracket_p_prep(ctx):
    lhs = ctx.bracket(ctx.p_fn(1), ctx.prep_fn((0,)))
    assert lhs == ctx.prep_fn((1,)).scale(2)


def test_structure_constants_small(ctx):
    results = ctx.verify_structure_constants(2)
    assert reports.all_ok(results), "\n".join(reports.summary_lines(results))


def test_divided_expansion_n1(ctx):
    lhs, res = ctx.expand_divided_monomial(1, 1)
    assert res.ok
    # 1_2 1_1^(2) = 1_(2,1) + 1_(1,0) H(1) + 1_(1,0)^(2) H(0) 1_(0,1): the
    # mixed bucket already appears at regular weight zero
    expected = (ctx.prep_fn((1,))
                + eng.char_fn(ctx.fam, KroneckerClass((0,), (1,), ()))
                + eng.char_fn(ctx.fam, KroneckerClass((0, 0), (), (0,))))
    assert lhs == expected
    assert res.to_json()["witness"]["mixed_regular_weights"] == [0]
    lhs, res = ctx.expand_divided_monomial(3, 1)
    assert res.ok
    # 1_2 1_1 = H(1) + 1_{S1 + S2}
    expected = ctx.h_fn(1) + eng.char_fn(ctx.fam,
                                         KroneckerClass((0,), (), (0,)))
    assert lhs == expected


@pytest.mark.parametrize("kind", [1, 2, 3])
@pytest.mark.parametrize("n", [1, 2])
def test_divided_expansions(ctx, kind, n):
    _, res = ctx.expand_divided_monomial(kind, n)
    assert res.ok, res.to_json()


@pytest.mark.parametrize("n", [1, 2, 3])
def test_ph_recursion(ctx, n):
    assert ctx.verify_ph_recursion(n).ok


def test_h1_is_p1_full_class(ctx):
    # every regular of dimension delta is indecomposable
    assert ctx.verify_ph_recursion(1).ok
    assert ctx.h_fn(1) == ctx.p_fn(1)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_hem_calculus(ctx, n):
    results = ctx.verify_hem(n)
    assert reports.all_ok(results), "\n".join(reports.summary_lines(results))


def test_e11_expansion(ctx):
    # E(1)^2 = M((2)) + a M((1,1)) with integer a (conjugate of (1,1) is (2))
    eo = ctx.e_omega((1, 1))
    assert eo.coeff(KroneckerClass((), (2,), ())) == 1
    a = eo.coeff(KroneckerClass((), (1, 1), ()))
    assert a.denominator == 1


def test_char_fn_property_small(ctx):
    for gamma in [(1, 1), (2, 1), (2, 2)]:
        results = ctx.verify_char_fn_property(gamma)
        assert reports.all_ok(results), "\n".join(
            reports.summary_lines(results))


def test_basis_products_tiny(ctx):
    results = ctx.verify_basis_products((2, 2))
    assert reports.all_ok(results), "\n".join(
        r for r in reports.summary_lines(results) if "FAIL" in r)


def test_support_shape(ctx):
    results = ctx.verify_support_shape(1, 1)
    assert reports.all_ok(results)


def test_expand_in_basis_roundtrip(ctx):
    el = ctx.engine.multiply(ctx.prei_fn((0,)), ctx.prep_fn((1,)))
    for kind in ("m", "h", "e"):
        coeffs = ctx.expand_in_basis(el, kind)
        rebuilt = eng.HallElement(ctx.fam)
        for cls, c in coeffs.items():
            if kind == "m":
                base = ctx.basis_monomial_element(cls)
            else:
                factors = []
                if cls.prep:
                    factors.append(ctx.prep_fn(cls.prep))
                builder = ctx.h_omega if kind == "h" else ctx.e_omega
                if cls.regular.parts:
                    factors.append(builder(cls.regular.parts))
                if cls.prei:
                    factors.append(ctx.prei_fn(cls.prei))
                base = ctx.product_chain(factors) if factors \
                    else eng.unit(ctx.fam)
            rebuilt = rebuilt + base.scale(c)
        assert rebuilt == el, kind

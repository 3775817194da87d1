import pytest
from hypothesis import given, strategies as st

from swalex.alexander import alexander_multivariable
from swalex.exactalg import LaurentPoly
from swalex.homology import EulerClass, h1
from swalex.presentations import splice_t3, t3_presentation
from swalex.swbridge import (
    SWPolynomial,
    baldridge_pushforward,
    coefficient_sum,
    kzero_sum_test,
    splice_sw,
    sw_from_alexander,
)

from helpers import natural_euler


def _tre():
    return LaurentPoly.univariate({0: 1, 1: -1, 2: 1})


def _h3():
    return h1(t3_presentation())


# -- construction -----------------------------------------------------------------


def test_sw_from_constant():
    s = sw_from_alexander(LaurentPoly.const(1, ("x", "y", "z")), _h3())
    assert s.sorted_support() == [((0, 0, 0), 1)]


def test_sw_from_trefoil_splice_polynomial():
    d = LaurentPoly(("x", "y", "z"), {(0, 0, 0): 1, (0, 0, 1): -1, (0, 0, 2): 1})
    s = sw_from_alexander(d, _h3())
    assert s.sorted_support() == [((0, 0, -1), 1), ((0, 0, 0), -1), ((0, 0, 1), 1)]


def test_sw_from_zero():
    s = sw_from_alexander(LaurentPoly.zero(("x", "y", "z")), _h3())
    assert s.support == {}
    assert coefficient_sum(s) == 0


def test_sw_requires_b_at_least_2():
    from swalex.presentations import parse_presentation

    h = h1(parse_presentation("< x | >"))
    with pytest.raises(ValueError):
        sw_from_alexander(LaurentPoly.univariate({0: 1}), h)


def test_sw_rejects_asymmetric_support():
    d = LaurentPoly(("x", "y", "z"), {(0, 0, 0): 1, (0, 0, 1): 1, (0, 1, 2): 1})
    with pytest.raises(ValueError):
        sw_from_alexander(d, _h3())


def test_sw_sign_normalization():
    d = LaurentPoly(("x", "y", "z"), {(0, 0, 0): -1, (0, 0, 1): 2, (0, 0, 2): -1})
    s = sw_from_alexander(d, _h3())
    assert s.support[(0, 0, -1)] == 1  # lex-smallest support point positive


def test_swpolynomial_invariants():
    with pytest.raises(ValueError):
        SWPolynomial(2, {(1, 0): 1})  # not symmetric
    s = SWPolynomial(2, {(1, 0): 1, (-1, 0): -1, (0, 0): 0})
    assert s.num_classes == 2  # zero coefficient dropped


# -- pushforward -------------------------------------------------------------------


def test_pushforward_collapses_fiber_direction():
    s = sw_from_alexander(
        LaurentPoly(("x", "y", "z"), {(0, 0, 0): 1, (0, 0, 1): -1, (0, 0, 2): 1}),
        _h3(),
    )
    pushed = baldridge_pushforward(s, EulerClass((0, 0, 1)))
    assert pushed.sorted_support() == [((0, 0), 1)]
    pushed2 = baldridge_pushforward(s, EulerClass((0, 0, 2)))
    assert pushed2.sorted_support() == [((0, 0), 1)]


def test_pushforward_transverse_direction_keeps_classes():
    s = sw_from_alexander(
        LaurentPoly(("x", "y", "z"), {(0, 0, 0): 1, (0, 0, 1): -1, (0, 0, 2): 1}),
        _h3(),
    )
    pushed = baldridge_pushforward(s, EulerClass((1, 0, 0)))
    assert pushed.num_classes == 3
    assert coefficient_sum(pushed) == 1


def test_pushforward_single_class():
    s = SWPolynomial(3, {(0, 0, 0): 5})
    pushed = baldridge_pushforward(s, EulerClass((2, 3, 1)))
    assert pushed.sorted_support() == [((0, 0), 5)]


def test_pushforward_rejects_torsion():
    s = SWPolynomial(2, {(0, 0): 1})
    with pytest.raises(ValueError):
        baldridge_pushforward(s, EulerClass((0, 0)))


def sw_polys(rank=3):
    def build(pairs):
        support = {}
        for w, c in pairs:
            support[w] = c
            support[tuple(-x for x in w)] = support.get(tuple(-x for x in w), c)
        return SWPolynomial(rank, support)

    return st.lists(
        st.tuples(
            st.tuples(*([st.integers(-3, 3)] * rank)),
            st.integers(-4, 4).filter(bool),
        ),
        max_size=5,
    ).map(build)


@given(sw_polys(), st.tuples(st.integers(-3, 3), st.integers(-3, 3), st.integers(-3, 3)))
def test_coefficient_sum_invariant_under_pushforward(s, e_free):
    if all(x == 0 for x in e_free):
        return
    pushed = baldridge_pushforward(s, EulerClass(e_free))
    assert coefficient_sum(pushed) == coefficient_sum(s)


@given(sw_polys())
def test_support_symmetry_preserved(s):
    pushed = baldridge_pushforward(s, EulerClass((1, 1, 2)))
    for w in pushed.support:
        assert tuple(-x for x in w) in pushed.support


# -- coefficient sums ----------------------------------------------------------------


def test_coefficient_sums_of_splices(knots):
    for name in ("trefoil", "5_2"):
        p = splice_t3(knots[name])
        h = h1(p)
        s = sw_from_alexander(alexander_multivariable(p, h), h)
        assert coefficient_sum(s) == 1
        assert kzero_sum_test(s, h)


def test_kzero_predicate_rejects_large_b1():
    from swalex.presentations import parse_presentation

    p = parse_presentation("< a, b, c, d | >")
    h = h1(p)
    s = SWPolynomial(4, {(0, 0, 0, 0): 1})
    assert not kzero_sum_test(s, h)


# -- the symbolic splice path ---------------------------------------------------------


def test_splice_sw_trivial_polynomial():
    one = LaurentPoly.univariate({0: 1})
    for e in ((0, 0, 1), (1, 0, 0), (2, -1, 3), (0, 0, 2), (5, 5, 5)):
        s = splice_sw(one, EulerClass(e))
        assert s.sorted_support() == [((0, 0), 1)]


def test_splice_sw_trefoil_axis():
    for e in ((0, 0, 1), (0, 0, -1), (0, 0, 2), (0, 0, -2)):
        s = splice_sw(_tre(), EulerClass(e))
        assert s.num_classes == 1
        assert coefficient_sum(s) == 1


def test_splice_sw_transverse():
    s = splice_sw(_tre(), EulerClass((0, 1, 0)))
    assert s.num_classes == 3


def test_splice_sw_rejects_bad_input():
    asym = LaurentPoly.univariate({0: 1, 1: 1, 2: -1})
    with pytest.raises(ValueError):
        splice_sw(asym, EulerClass((0, 0, 1)))
    with pytest.raises(ValueError):
        splice_sw(_tre(), EulerClass((0, 0, 0)))
    with pytest.raises(ValueError):
        splice_sw(LaurentPoly(("x", "y"), {(0, 0): 1}), EulerClass((0, 0, 1)))


@pytest.mark.parametrize("name", ["unknot", "trefoil", "figure_eight", "5_2"])
@pytest.mark.parametrize("e_nat", [(0, 0, 1), (0, 0, 2), (1, 0, 0), (1, 1, 1)])
def test_splice_sw_matches_full_pipeline(knots, name, e_nat):
    """The symbolic fast path equals the Fox pipeline followed by the
    pushforward, for every built-in knot."""
    k = knots[name]
    p = splice_t3(k)
    h = h1(p)
    delta = alexander_multivariable(p, h)
    e_int = natural_euler(p, k, e_nat, h)
    full = baldridge_pushforward(sw_from_alexander(delta, h), e_int)
    fast = splice_sw(k.alexander_polynomial, EulerClass(e_nat))
    assert coefficient_sum(full) == coefficient_sum(fast)
    assert full.num_classes == fast.num_classes
    assert sorted(full.support.values()) == sorted(fast.support.values())

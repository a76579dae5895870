import random
from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from oracles import (
    finite_difference_order,
    order_at_infinity,
    pointwise_geq,
    pointwise_max,
    pointwise_sum,
    sample_points,
)
from troprat import fixtures
from troprat.chipfire import cf, cf_point, cf_tail, make_subgraph
from troprat.curve import Point
from troprat.errors import (
    BadProbeGeometry,
    BottomFunction,
    CurveMismatch,
    FunctionError,
    InvertBottom,
    NonIntegerSlope,
    PlusInfinityConstant,
    UndefinedSum,
)
from troprat.ext import INF, NEG_INF, ext_add, ext_scale, fmt_ext, to_ext
from troprat.randgen import random_function
from troprat.ratfun import (
    Divisor,
    argmax_set,
    argmin_set,
    bottom,
    check_star,
    check_star_star,
    constant,
    divisor,
    equals,
    from_breakpoints,
    is_constant,
    is_irredundant,
    leq,
    max_value,
    min_value,
    min_with,
    odot,
    oinv,
    oplus,
    opow,
    star_clauses,
    star_star_clauses,
)

V = Point.at
CURVES = [n for n in fixtures.FIXTURES]


def seg_linear(c, a, b):
    """On SEG3: the affine function with values a at v0 and b at v1."""
    return from_breakpoints(c, {"e0": ([(0, a), (3, b)], None)})


# -- extended rationals --------------------------------------------------------------------

def test_ext_parsing_and_printing():
    assert to_ext("5/2") == F(5, 2) and to_ext("inf") == INF and to_ext("-inf") == NEG_INF
    assert fmt_ext(F(6, 4)) == "3/2" and fmt_ext(F(4)) == "4" and fmt_ext(NEG_INF) == "-inf"
    with pytest.raises(TypeError):
        to_ext(0.5)


def test_ext_rejects_opposite_infinities():
    assert ext_add(INF, F(1)) == INF
    with pytest.raises(UndefinedSum):
        ext_add(INF, NEG_INF)
    assert ext_scale(F(2), NEG_INF) == NEG_INF


# -- construction and evaluation ------------------------------------------------------------

def test_constants():
    s = fixtures.seg3()
    f = random_function(s, random.Random(1))
    assert odot(f, constant(s, 0)) == f
    assert constant(s, NEG_INF).is_bottom
    assert oplus(f, constant(s, NEG_INF)) == f
    assert divisor(constant(fixtures.circ2(), F(5, 2))) == Divisor()
    with pytest.raises(PlusInfinityConstant):
        constant(s, INF)


def test_eval_examples():
    s = fixtures.seg3()
    f = cf_point(s, V("v0"), 1)
    assert f(s.parse_point("e0@2")) == -1
    assert bottom(s)(V("v1")) == NEG_INF
    assert constant(s, 3)(V("v0")) == 3


def test_eval_at_infinity():
    r = fixtures.ray()
    up = from_breakpoints(r, {"e0": ([(0, 0)], 2)})
    assert up(V("v1")) == INF and up(r.parse_point("e0@3")) == 6
    flat = from_breakpoints(r, {"e0": ([(0, 0), (1, 1)], 0)})
    assert flat(V("v1")) == 1


def test_malformed_function_data():
    s = fixtures.seg3()
    with pytest.raises(NonIntegerSlope):
        seg_linear(s, 0, 1)
    with pytest.raises(FunctionError):
        from_breakpoints(s, {"e0": ([(0, 0)], None)})
    with pytest.raises(FunctionError):
        from_breakpoints(fixtures.ray(), {"e0": ([(0, 0)], None)})


def test_values_must_agree_at_shared_vertices():
    t = fixtures.theta()
    data = {e: ([(0, 0), (1, 0)], None) for e in ("e0", "e1")}
    data["e2"] = ([(0, 0), (1, 1)], None)
    with pytest.raises(FunctionError):
        from_breakpoints(t, data)


# -- operations ------------------------------------------------------------------------------

def test_oplus_of_two_lines():
    s = fixtures.seg3()
    f = oplus(seg_linear(s, 0, 3), constant(s, F(3, 2)))
    assert f.pieces["e0"].offsets == (0, F(3, 2), 3)
    assert divisor(f) == Divisor({s.parse_point("e0@3/2"): 1, V("v1"): -1})


def test_inverse_law_and_identity(any_curve, rng):
    for _ in range(20):
        f = random_function(any_curve, rng)
        assert odot(f, constant(any_curve, 0)) == f
        assert odot(f, oinv(f)) == constant(any_curve, 0)


def test_inverse_of_bottom_fails():
    with pytest.raises(InvertBottom):
        oinv(bottom(fixtures.seg3()))


def test_curve_mismatch():
    with pytest.raises(CurveMismatch):
        oplus(constant(fixtures.seg3(), 0), constant(fixtures.ray(), 0))


def test_opow():
    s = fixtures.seg3()
    f = seg_linear(s, 0, 3)
    assert opow(f, 3) == odot(f, odot(f, f))
    assert opow(f, -1) == oinv(f)
    assert opow(f, 0) == constant(s, 0)


def test_min_with():
    s = fixtures.seg3()
    assert min_with(constant(s, 5), 2) == constant(s, 2)
    f = random_function(s, random.Random(3))
    assert min_with(f, max_value(f)) == f
    far = cf(s, make_subgraph(s, points=[V("v0")]), INF)
    clamped = min_with(far, -1)
    for p in sample_points(s, far, clamped):
        assert clamped(p) == min(far(p), -1)


def test_equality_is_exact_and_canonical():
    s = fixtures.seg3()
    f = seg_linear(s, 0, 3)
    g = from_breakpoints(s, {"e0": ([(0, 0), (1, 1), (3, 3)], None)})
    assert equals(f, g)
    assert constant(s, 0) != constant(s, F(1, 10**9))


def test_order_compatibility(any_curve, rng):
    for _ in range(20):
        f, g = random_function(any_curve, rng), random_function(any_curve, rng)
        assert leq(g, f) == pointwise_geq(f, g)
        assert leq(g, oplus(f, g))


# -- extrema --------------------------------------------------------------------------------

def test_extrema_of_point_move():
    s = fixtures.seg3()
    f = cf_point(s, V("v0"), 1)
    assert max_value(f) == 0 and min_value(f) == -1
    assert argmax_set(f).single_point() == V("v0")
    low = argmin_set(f)
    assert low.intervals == (("e0", 1, 3),) and low.points == frozenset()


def test_extrema_of_constant(any_curve):
    f = constant(any_curve, 7)
    assert max_value(f) == min_value(f) == 7 and is_constant(f)
    whole = argmax_set(f)
    covered = {e for e, _, _ in whole.intervals}
    assert covered == set(any_curve.edges)


def test_extrema_of_tail_move():
    r = fixtures.ray()
    f = cf_tail(r, r.parse_point("e0@1"), V("v1"))
    assert min_value(f) == NEG_INF
    assert argmin_set(f).single_point() == V("v1")


def test_bottom_has_no_argmax():
    with pytest.raises(BottomFunction):
        argmax_set(bottom(fixtures.seg3()))


# -- divisors -----------------------------------------------------------------------------------

def test_divisor_examples():
    s = fixtures.seg3()
    x = s.parse_point("e0@3/2")
    d = divisor(cf_point(s, x, F(1, 2)))
    assert d == Divisor({x: -2, s.parse_point("e0@1"): 1, s.parse_point("e0@2"): 1})
    assert divisor(constant(s, 4)) == Divisor()
    assert divisor(cf_point(s, V("v0"), 1)) == Divisor({V("v0"): -1, s.parse_point("e0@1"): 1})
    with pytest.raises(BottomFunction):
        divisor(bottom(s))


def test_divisor_matches_finite_differences(edged_curve, rng):
    for _ in range(10):
        f = random_function(edged_curve, rng)
        d = divisor(f)
        for p in sample_points(edged_curve, f):
            if edged_curve.is_at_infinity(p):
                assert d[p] == order_at_infinity(f, p)
            else:
                assert d[p] == finite_difference_order(f, p)


# -- irredundant representations and probe conditions ---------------------------------------

def test_irredundant():
    s = fixtures.seg3()
    g, h = seg_linear(s, 0, 3), seg_linear(s, 3, 0)
    f = oplus(g, h)
    assert is_irredundant(f, [g, h])
    assert not is_irredundant(f, [g, h, g])
    assert not is_irredundant(f, [g, h, constant(s, -10)])


def _split_point_probe(seg, t, eps):
    """The decomposition of ``CF({x}; eps)`` for an interior point ``x`` of
    SEG3 used when bounding the size of an argmax: part ``i`` follows the
    probe along half-edge ``i`` and has slope -2 out to ``eps / 2`` on the
    other half-edge."""
    f = cf_point(seg, seg.point("e0", t), eps)
    right = [(0, -eps), (t - eps / 2, -eps), (t, 0), (t + eps, -eps), (3, -eps)]
    left = [(0, -eps), (t - eps, -eps), (t, 0), (t + eps / 2, -eps), (3, -eps)]
    return f, [from_breakpoints(seg, {"e0": (pts, None)}) for pts in (right, left)]


def test_star_condition_on_split_probe():
    s = fixtures.seg3()
    x = s.parse_point("e0@3/2")
    f, parts = _split_point_probe(s, F(3, 2), F(1, 2))
    assert oplus(parts[0], parts[1]) == f
    assert is_irredundant(f, parts)
    assert check_star(parts, x, F(1, 2))


def test_star_condition_clause_one_fails():
    s = fixtures.seg3()
    x = s.parse_point("e0@3/2")
    parts = [odot(cf_point(s, x, F(1, 2)), constant(s, -1))]
    assert star_clauses(parts, x, F(1, 2))[0] is False


def test_star_condition_needs_small_eps():
    s = fixtures.seg3()
    with pytest.raises(BadProbeGeometry):
        check_star([cf_point(s, V("v0"), 1)], V("v0"), 5)


def test_star_star_condition():
    r = fixtures.ray()
    y, x = r.parse_point("e0@1"), V("v1")
    g = oinv(cf_tail(r, y, x))
    assert check_star_star([g], y, x)
    # two zeros on [y, x): slope 0 -> 1 -> 2 -> ... with kinks at 1 and 2
    two = from_breakpoints(r, {"e0": ([(0, 0), (1, 0), (2, 1)], 2)})
    assert star_star_clauses([two], y, x)[2] is False


# -- properties -------------------------------------------------------------------------

def _triple(name, seed):
    curve = fixtures.fixture(name)
    rng = random.Random(seed)
    return curve, [random_function(curve, rng, p_bottom=0.1) for _ in range(3)]


@given(st.sampled_from(CURVES), st.integers(0, 2**32))
def test_semifield_laws(name, seed):
    c, (f, g, h) = _triple(name, seed)
    assert oplus(f, g) == oplus(g, f)
    assert oplus(oplus(f, g), h) == oplus(f, oplus(g, h))
    assert oplus(f, f) == f
    assert odot(f, g) == odot(g, f)
    assert odot(odot(f, g), h) == odot(f, odot(g, h))
    assert odot(f, oplus(g, h)) == oplus(odot(f, g), odot(f, h))
    assert odot(f, bottom(c)).is_bottom
    assert oplus(f, bottom(c)) == f


@given(st.sampled_from(CURVES), st.integers(0, 2**32))
def test_pointwise_semantics(name, seed):
    c, (f, g, _) = _triple(name, seed)
    s, p = oplus(f, g), odot(f, g)
    for q in sample_points(c, f, g):
        assert s(q) == pointwise_max(f, g, q)
        if not (f(q) in (INF, NEG_INF) and g(q) in (INF, NEG_INF) and f(q) != g(q)):
            assert p(q) == pointwise_sum(f, g, q)


@given(st.sampled_from(CURVES[1:]), st.integers(0, 2**32))
def test_divisor_is_a_homomorphism_of_degree_zero(name, seed):
    curve = fixtures.fixture(name)
    rng = random.Random(seed)
    f, g = random_function(curve, rng), random_function(curve, rng)
    assert divisor(f).degree() == 0
    assert divisor(odot(f, g)) == divisor(f) + divisor(g)
    assert divisor(oinv(f)) == -divisor(f)

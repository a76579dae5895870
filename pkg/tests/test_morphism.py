import random
from fractions import Fraction as F
from pathlib import Path

import pytest
from hypothesis import given, strategies as st

from troprat import fixtures
from troprat.curve import Point, loopless_subdivision, valence
from troprat.errors import (
    CurveMismatch,
    Discontinuous,
    FactorViolated,
    InfinityNotPreserved,
    LoopyModel,
    MalformedMap,
    NotBijective,
    NotHarmonic,
    NotStarInfinite,
)
from troprat.ext import INF
from troprat.io import harmonic_from_json, map_from_json
from troprat.morphism import (
    HarmonicMorphismData,
    Piece,
    apply,
    apply_inverse,
    circle_rotation,
    combinatorial_maps,
    compose,
    group_closure,
    harmonic_data,
    has_nonunit_dilation,
    identity,
    inverse,
    inversion,
    is_automorphism,
    line_affine,
    line_coordinate,
    line_dilation,
    line_fixed_point,
    line_point,
    make_expansive,
    same_action,
    sample_points,
    star_aut_generators,
    star_map,
    translation,
    verify_harmonic,
)
from troprat.randgen import MAP_FAMILIES, rand_rational, random_map, random_point

V = Point.at
FIX = Path(__file__).resolve().parent.parent / "fixtures"


# -- make_expansive ------------------------------------------------------------------------

def test_rotation_of_the_circle_is_valid():
    c = fixtures.circ2()
    m = circle_rotation(c, F(1, 2))
    assert m.r == 1 and apply(m, V("v0")) == c.parse_point("loop@1/2")


def test_dilation_of_the_star_is_valid():
    s = fixtures.star3()
    m = star_map(s, [0, 1, 2], 2)
    assert apply(m, s.parse_point("ray1@3")) == s.parse_point("ray1@6")
    assert apply(m, V("c")) == V("c") and apply(m, V("x2")) == V("x2")


def test_doubling_the_circle_violates_the_factor():
    c = fixtures.circ2()
    with pytest.raises(FactorViolated):
        make_expansive(c, c, 2, [Piece("loop", F(0), F(2), "loop", F(0))])
    # wrapping twice keeps the local factor but covers the loop twice
    with pytest.raises(NotBijective):
        make_expansive(c, c, 2, [Piece("loop", F(0), F(1), "loop", F(0)),
                                 Piece("loop", F(1), F(2), "loop", F(0))])


def test_non_bijective_maps_are_rejected():
    s = fixtures.seg3()
    # folding the segment in half
    with pytest.raises((NotBijective, Discontinuous)):
        make_expansive(s, s, 1, [Piece("e0", F(0), F(3, 2), "e0", F(0)),
                                 Piece("e0", F(3, 2), F(3), "e0", F(3, 2), True)])
    t = fixtures.theta()
    both_on_e0 = [Piece("e0", F(0), F(1), "e0", F(0)), Piece("e1", F(0), F(1), "e0", F(0)),
                  Piece("e2", F(0), F(1), "e2", F(0))]
    with pytest.raises(NotBijective):
        make_expansive(t, t, 1, both_on_e0)


def test_discontinuous_pieces_are_rejected():
    s = fixtures.seg3()
    with pytest.raises((Discontinuous, NotBijective)):
        make_expansive(s, s, 1, [Piece("e0", F(0), F(1), "e0", F(2)),
                                 Piece("e0", F(1), F(3), "e0", F(0))])


def test_infinity_must_be_preserved():
    r = fixtures.ray()
    with pytest.raises(InfinityNotPreserved):
        make_expansive(r, r, 1, [Piece("e0", F(0), INF, "e0", F(5), True)])


def test_malformed_pieces():
    s = fixtures.seg3()
    with pytest.raises(MalformedMap):
        make_expansive(s, s, 1, [Piece("e0", F(0), F(2), "e0", F(0))])
    with pytest.raises(MalformedMap):
        make_expansive(s, s, 0, [Piece("e0", F(0), F(3), "e0", F(0))])


# -- groupoid structure ----------------------------------------------------------------------

def test_non_commutation_on_the_line():
    ln = fixtures.line()
    phi1 = compose(translation(ln, 1), identity(ln))
    theta2 = line_dilation(ln, 2)
    zero = line_point(ln, 0)
    assert line_coordinate(ln, apply(compose(phi1, theta2), zero)) == 1
    assert line_coordinate(ln, apply(compose(theta2, phi1), zero)) == 2


def test_inverse_of_a_dilation_undoes_it():
    ln = fixtures.line()
    m = line_dilation(ln, 2)
    back = compose(inverse(m), m)
    assert back.r == 1
    rng = random.Random(7)
    for _ in range(10):
        p = random_point(ln, rng)
        assert apply(back, p) == p
        assert apply_inverse(m, apply(m, p)) == p


def test_rotation_twice():
    c = fixtures.circ2()
    half = circle_rotation(c, F(1, 2))
    assert same_action(compose(half, half), circle_rotation(c, 1))
    assert same_action(compose(circle_rotation(c, F(3, 2)), half), identity(c))


def test_compose_requires_matching_curves():
    with pytest.raises(CurveMismatch):
        compose(identity(fixtures.seg3()), identity(fixtures.theta()))


@pytest.mark.parametrize("x", [F(1), F(1, 2), F(7, 3), F(-5, 4)])
def test_inversion_conjugates_translations(x):
    ln = fixtures.line()
    iota = inversion(ln)
    lhs = compose(iota, compose(translation(ln, x), iota))
    assert same_action(lhs, translation(ln, -x), sample_points(ln))


@pytest.mark.parametrize("r, flip, shift", [(2, False, 3), (3, False, F(-1, 2)),
                                            (F(1, 2), True, 5), (2, True, F(-4, 3))])
def test_fixed_point_formulas(r, flip, shift):
    ln = fixtures.line()
    m = line_affine(ln, r, flip, shift)
    x = line_fixed_point(m)
    assert line_coordinate(ln, apply(m, line_point(ln, x))) == x
    sign = -1 if flip else 1
    assert x == shift / (1 - sign * F(r))


def test_line_affine_formula():
    ln = fixtures.line()
    m = line_affine(ln, 3, True, F(1, 2))
    for y in (F(-2), F(0), F(1, 3), F(5)):
        assert line_coordinate(ln, apply(m, line_point(ln, y))) == -3 * y + F(1, 2)


# -- automorphisms -----------------------------------------------------------------------------

def test_is_automorphism():
    assert is_automorphism(circle_rotation(fixtures.circ2(), F(1, 3)))
    assert not is_automorphism(star_map(fixtures.star3(), [0, 1, 2], 2))
    assert is_automorphism(inversion(fixtures.line()))
    with pytest.raises(CurveMismatch):
        is_automorphism(make_expansive(fixtures.seg3(), _seg(3), 1,
                                       [Piece("e0", F(0), F(3), "f", F(0))]))


def _seg(n):
    from troprat.curve import Edge, Model, build_curve
    return build_curve(Model(["a", "b"], [Edge("f", "a", "b", F(n))]))


def test_star3_group_has_order_six():
    s = fixtures.star3()
    gens = star_aut_generators(s)
    assert len(gens) == 2
    group = group_closure(gens)
    assert len(group) == 6
    probe = sample_points(s)
    actions = {tuple(apply(m, p) for p in probe) for m in group}
    assert len(actions) == 6


def test_ray_has_only_the_identity():
    r = fixtures.ray()
    group = group_closure(star_aut_generators(r))
    assert len(group) == 1 and same_action(group[0], identity(r))
    assert len(combinatorial_maps(r, 1)) == 1


def test_line_generators():
    gens = star_aut_generators(fixtures.line())
    assert len(gens) == 2 and all(is_automorphism(g) for g in gens)


def test_generators_need_a_star():
    with pytest.raises(NotStarInfinite):
        star_aut_generators(fixtures.theta())


@pytest.mark.parametrize("name", ["STAR3", "RAY", "LINE", "PT"])
def test_nonunit_dilation_witness(name):
    ok, witness = has_nonunit_dilation(fixtures.fixture(name))
    assert ok and witness.r == 2


@pytest.mark.parametrize("name", ["SEG3", "CIRC2", "THETA"])
def test_no_nonunit_dilation(name):
    curve = fixtures.fixture(name)
    assert has_nonunit_dilation(curve) == (False, None)
    for r in (F(1, 2), 2, 3):
        assert combinatorial_maps(curve, r) == []
    assert combinatorial_maps(curve, 1)


def test_theta_symmetries():
    # S3 on the edges times swapping the two vertices
    assert len(combinatorial_maps(fixtures.theta(), 1)) == 12


# -- harmonic morphisms --------------------------------------------------------------------------

def test_double_cover_has_degree_two():
    data = harmonic_from_json(FIX / "double_cover.json")
    assert verify_harmonic(data) == 2


def test_identity_on_theta_has_degree_one():
    t = fixtures.theta()
    assert verify_harmonic(harmonic_data(identity(t))) == 1


def _theta_identity_data(**changes):
    t = fixtures.theta()
    data = dict(source=t, target=t, vertex_map={"a": "a", "b": "b"},
                edge_map={e: e for e in t.edges}, edge_degrees={e: 1 for e in t.edges})
    data.update(changes)
    return HarmonicMorphismData(**data)


def test_collapsing_an_edge_fails_clause_three():
    with pytest.raises(NotHarmonic) as err:
        verify_harmonic(_theta_identity_data(edge_degrees={"e0": 0, "e1": 1, "e2": 1}))
    assert err.value.clause == 3


def test_harmonic_clause_failures():
    with pytest.raises(NotHarmonic) as err:
        verify_harmonic(_theta_identity_data(vertex_map={"a": "a", "b": "z"}))
    assert err.value.clause == 1
    with pytest.raises(NotHarmonic) as err:
        verify_harmonic(_theta_identity_data(vertex_map={"a": "a", "b": "a"}))
    assert err.value.clause == 2


def test_loops_are_refused():
    c = fixtures.circ2()
    data = HarmonicMorphismData(c, c, {"v0": "v0"}, {"loop": "loop"}, {"loop": 1})
    with pytest.raises(LoopyModel):
        verify_harmonic(data)
    sub, _ = loopless_subdivision(c)
    assert verify_harmonic(harmonic_data(identity(sub))) == 1


def test_singleton_accepts_any_declared_degree():
    p = fixtures.pt()
    assert verify_harmonic(HarmonicMorphismData(p, p, {"v0": "v0"}, {}, {}, 5)) == 5
    with pytest.raises(NotHarmonic):
        verify_harmonic(HarmonicMorphismData(p, p, {"v0": "v0"}, {}, {}, 0))


def test_fixture_maps_load():
    rot = map_from_json(FIX / "rot_circ2.json")
    assert same_action(rot, circle_rotation(rot.source, F(1, 2)))
    iota = map_from_json(FIX / "iota_line.json")
    assert same_action(iota, inversion(iota.source))
    dil = map_from_json(FIX / "dil2_star3.json")
    assert dil.r == 2


# -- properties ---------------------------------------------------------------------------------

@given(st.integers(0, 2**32))
def test_factor_multiplicativity(seed):
    rng = random.Random(seed)
    fam = rng.choice(MAP_FAMILIES)
    _, m1 = random_map(rng, fam)
    _, m2 = random_map(rng, fam)
    assert compose(m2, m1).r == m2.r * m1.r
    assert inverse(m1).r == 1 / m1.r
    assert same_action(compose(inverse(m1), m1), identity(m1.source))


@given(st.integers(0, 2**32))
def test_maps_preserve_valence(seed):
    rng = random.Random(seed)
    _, m = random_map(rng)
    for _ in range(5):
        p = random_point(m.source, rng, finite=False)
        assert valence(m.source, p) == valence(m.target, apply(m, p))


@given(st.integers(0, 2**32))
def test_random_maps_scale_distances(seed):
    from troprat.curve import distance
    rng = random.Random(seed)
    _, m = random_map(rng)
    p, q = random_point(m.source, rng), random_point(m.source, rng)
    assert distance(m.target, apply(m, p), apply(m, q)) == m.r * distance(m.source, p, q)


@given(st.integers(0, 2**32))
def test_unit_maps_are_degree_one_harmonic(seed):
    rng = random.Random(seed)
    label, m = random_map(rng, rng.choice([f for f in MAP_FAMILIES if f.startswith("aut")]))
    assert verify_harmonic(harmonic_data(m)) == 1


@given(st.integers(0, 2**32))
def test_inversion_relation_for_random_x(seed):
    ln = fixtures.line()
    x = rand_rational(random.Random(seed), -5, 5)
    iota = inversion(ln)
    assert same_action(compose(iota, compose(translation(ln, x), iota)), translation(ln, -x))

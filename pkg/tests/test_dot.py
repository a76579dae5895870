from fractions import Fraction as F

from troprat import fixtures
from troprat.chipfire import cf_point
from troprat.curve import Point
from troprat.dot import export_dot
from troprat.ratfun import bottom, divisor


def test_segment():
    text = export_dot(fixtures.seg3())
    nodes = [ln for ln in text.splitlines() if "[label=" in ln and "--" not in ln]
    edges = [ln for ln in text.splitlines() if "--" in ln]
    assert len(nodes) == 2 and len(edges) == 1
    assert 'label="3"' in edges[0]


def test_divisor_labels():
    s = fixtures.seg3()
    x = s.parse_point("e0@3/2")
    text = export_dot(s, divisor=divisor(cf_point(s, x, F(1, 2))))
    assert text.count('xlabel="+1"') == 2 and 'xlabel="−2"' in text
    # the interior points split the edge into a chain
    assert sum("--" in ln for ln in text.splitlines()) == 4


def test_vertex_orders_and_infinity():
    r = fixtures.ray()
    text = export_dot(r, divisor=divisor(cf_point(r, Point.at("v0"), 1)))
    assert 'label="v0 −1"' in text and "doublecircle" in text and 'label="∞"' in text


def test_bottom_function_labels():
    c = fixtures.theta()
    text = export_dot(c, bottom(c))
    edges = [ln for ln in text.splitlines() if "--" in ln]
    assert len(edges) == 3 and all("−∞" in ln for ln in edges)


def test_function_breakpoints_and_determinism():
    c = fixtures.circ2()
    f = cf_point(c, Point.at("v0"), F(1, 2))
    text = export_dot(c, f)
    assert "1/2:−1/2" in text
    assert text == export_dot(fixtures.circ2(), f)

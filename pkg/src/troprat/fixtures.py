"""The fixture zoo: small curves used throughout the tests and documentation.

=======  ==========================================================
PT       a single point
SEG3     segment v0 -- v1 of length 3
RAY      [0, inf]: v0 -- v1 along an infinite edge, v1 at infinity
LINE     [-inf, inf]: two infinite rays from o, ends m and p
STAR3    three infinite rays ray1..ray3 from the center c
CIRC2    one loop of length 2 at v0
THETA    two vertices joined by three edges of length 1
=======  ==========================================================

The same curves ship as JSON under ``fixtures/`` in the repository, together
with a few maps (``rot_circ2.json`` and friends) referenced by the README.
"""

from fractions import Fraction

from .curve import Edge, Model, build_curve
from .ext import INF


def pt():
    return build_curve(Model(["v0"]))


def seg3():
    return build_curve(Model(["v0", "v1"], [Edge("e0", "v0", "v1", Fraction(3))]))


def ray():
    return build_curve(Model(["v0", "v1"], [Edge("e0", "v0", "v1", INF, "v1")]))


def line():
    return build_curve(Model(["m", "o", "p"], [
        Edge("e0", "o", "m", INF, "m"),
        Edge("e1", "o", "p", INF, "p"),
    ]))


def star(n):
    verts = ["c"] + [f"x{i}" for i in range(1, n + 1)]
    edges = [Edge(f"ray{i}", "c", f"x{i}", INF, f"x{i}") for i in range(1, n + 1)]
    return build_curve(Model(verts, edges))


def star3():
    return star(3)


def circ2():
    return build_curve(Model(["v0"], [Edge("loop", "v0", "v0", Fraction(2))]))


def theta():
    return build_curve(Model(["a", "b"], [
        Edge(f"e{i}", "a", "b", Fraction(1)) for i in range(3)
    ]))


FIXTURES = {
    "PT": pt,
    "SEG3": seg3,
    "RAY": ray,
    "LINE": line,
    "STAR3": star3,
    "CIRC2": circ2,
    "THETA": theta,
}


def fixture(name):
    """Fixture curve by (case-insensitive) name."""
    try:
        return FIXTURES[name.upper()]()
    except KeyError:
        raise KeyError(f"unknown fixture {name!r}; choose from {', '.join(FIXTURES)}") from None

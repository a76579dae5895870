"""Seeded random objects for property tests and the ``verify`` command.

Every generator takes a :class:`random.Random`; the same seed always yields
the same objects.  Edge functions get up to three interior breakpoints with
integer slopes in ``[-3, 3]``.
"""

import math
import random
from fractions import Fraction

from . import fixtures
from .chipfire import cf_point, cf_tail
from .curve import Point, canonical_vertices, chain_locate, injectivity_radius, tail_chain
from .ext import is_inf
from .morphism import (
    circle_rotation,
    combinatorial_maps,
    line_affine,
    star_map,
    star_rays,
)
from .ratfun import bottom, constant, from_breakpoints

MAX_SLOPE = 3
DEFAULT_SEED = 20240601


def rand_rational(rng, lo, hi, den=4):
    """A rational in the closed interval ``[lo, hi]`` with denominator
    dividing ``den`` times that of the bounds."""
    lo, hi = Fraction(lo), Fraction(hi)
    d = den * lo.denominator * hi.denominator
    a, b = int(lo * d), int(hi * d)
    return Fraction(rng.randint(a, b), d)


def _interior(rng, lo, hi, k):
    """Up to ``k`` distinct rationals strictly between ``lo`` and ``hi``."""
    out = set()
    for _ in range(k):
        t = rand_rational(rng, lo, hi, 8)
        if lo < t < hi:
            out.add(t)
    return sorted(out)


def _finite_edge(rng, length, a, b):
    """Breakpoints from ``(0, a)`` to ``(length, b)`` with slopes in
    ``[-3, 3]``; needs ``|b - a| <= 3 length``."""
    for _ in range(8):
        ts = [Fraction(0)] + _interior(rng, 0, length, rng.randint(0, 3))
        vals = [a]
        for t0, t1 in zip(ts, ts[1:]):
            vals.append(vals[-1] + rng.randint(-MAX_SLOPE, MAX_SLOPE) * (t1 - t0))
        lam = length - ts[-1]
        need = (b - vals[-1]) / lam
        if abs(need) > MAX_SLOPE:
            continue
        if need.denominator == 1:
            return list(zip(ts, vals)) + [(length, b)]
        # split the last stretch between two slopes bracketing the average
        hi = rng.randint(math.ceil(need), MAX_SLOPE)
        lo = rng.randint(-MAX_SLOPE, math.floor(need))
        x = (b - vals[-1] - lo * lam) / (hi - lo)
        return list(zip(ts, vals)) + [(ts[-1] + x, vals[-1] + hi * x), (length, b)]
    # up at +3, then down at -3
    x = (b - a + MAX_SLOPE * length) / (2 * MAX_SLOPE)
    pts = {Fraction(0): a, x: a + MAX_SLOPE * x, length: b}
    return sorted(pts.items())


def _infinite_edge(rng, a):
    ts = [Fraction(0)] + _interior(rng, 0, 4, rng.randint(0, 3))
    vals = [a]
    for t0, t1 in zip(ts, ts[1:]):
        vals.append(vals[-1] + rng.randint(-MAX_SLOPE, MAX_SLOPE) * (t1 - t0))
    return list(zip(ts, vals)), rng.randint(-MAX_SLOPE, MAX_SLOPE)


def random_function(curve, rng, p_bottom=0.0):
    """A random element of Rat(curve); bottom with probability ``p_bottom``."""
    if rng.random() < p_bottom:
        return bottom(curve)
    if not curve.edges:
        return constant(curve, rand_rational(rng, -3, 3))
    finite = [e.length for e in curve.edges.values() if not is_inf(e.length)]
    spread = min(finite) * MAX_SLOPE / 2 if finite else Fraction(3)
    spread = min(spread, Fraction(3))
    vals = {v: rand_rational(rng, -spread, spread) for v in curve.vertices
            if v not in curve.inf_points}
    data = {}
    for eid, e in curve.edges.items():
        if e.is_infinite:
            data[eid] = _infinite_edge(rng, vals[e.u])
        else:
            data[eid] = (_finite_edge(rng, e.length, vals[e.u], vals[e.v]), None)
    return from_breakpoints(curve, data)


def random_point(curve, rng, finite=True):
    """A random point; vertices come up about a third of the time."""
    if not curve.edges:
        return Point(vertex=curve.vertices[0])
    verts = [v for v in curve.vertices if not (finite and v in curve.inf_points)]
    if rng.random() < 1 / 3:
        return Point(vertex=rng.choice(verts))
    eid = rng.choice(sorted(curve.edges))
    e = curve.edges[eid]
    hi = Fraction(6) if e.is_infinite else e.length
    t = rand_rational(rng, 0, hi, 8)
    while not 0 < t < hi:
        t = rand_rational(rng, 0, hi, 8)
    return curve.point(eid, t)


def random_interior_point(curve, rng):
    """A random finite point that is not a canonical vertex."""
    canon = set(canonical_vertices(curve))
    while True:
        p = random_point(curve, rng)
        if p not in canon:
            return p


def random_probe(curve, rng):
    """A chip-firing probe: a point move, or a tail move when the curve has
    points at infinity (so that the minimum is -inf)."""
    if curve.inf_points and rng.random() < 1 / 2:
        x = Point(vertex=rng.choice(sorted(curve.inf_points)))
        y = chain_locate(curve, tail_chain(curve, x), rand_rational(rng, Fraction(1, 2), 4))
        return cf_tail(curve, y, x)
    x = random_point(curve, rng)
    rad = injectivity_radius(curve, x)
    eps = rand_rational(rng, Fraction(1, 8), min(rad, Fraction(2)) if not is_inf(rad) else 2)
    return cf_point(curve, x, eps)


# -- maps ------------------------------------------------------------------------------

MAP_FAMILIES = ("aut:CIRC2", "aut:THETA", "aut:LINE", "aut:STAR3",
                "dil:RAY", "dil:LINE", "dil:STAR3")
FACTORS = (Fraction(1, 2), Fraction(2), Fraction(3))


def random_map(rng, family=None):
    """A random validated map from one of the families used by the
    acceptance criteria.  Returns ``(label, map)``."""
    family = family or rng.choice(MAP_FAMILIES)
    kind, name = family.split(":")
    curve = fixtures.fixture(name)
    if kind == "aut":
        if name == "CIRC2":
            theta = rand_rational(rng, 0, 2, 4)
            reflect = rng.random() < 1 / 2
            return f"{family} theta={theta} reflect={reflect}", circle_rotation(curve, theta, reflect)
        if name == "THETA":
            maps = combinatorial_maps(curve, 1)
            i = rng.randrange(len(maps))
            return f"{family} #{i}", maps[i]
        if name == "LINE":
            shift = rand_rational(rng, -3, 3, 4)
            flip = rng.random() < 1 / 2
            return f"{family} shift={shift} flip={flip}", line_affine(curve, 1, flip, shift)
        perm = list(range(len(star_rays(curve))))
        rng.shuffle(perm)
        return f"{family} perm={perm}", star_map(curve, perm)
    r = rng.choice(FACTORS)
    if name == "LINE":
        shift = rand_rational(rng, -2, 2, 4)
        flip = rng.random() < 1 / 2
        return f"{family} r={r} shift={shift} flip={flip}", line_affine(curve, r, flip, shift)
    perm = list(range(len(star_rays(curve))))
    rng.shuffle(perm)
    return f"{family} r={r} perm={perm}", star_map(curve, perm, r)


def map_corpus(seed=DEFAULT_SEED, n=20):
    """``n`` random maps covering every family at least once."""
    rng = random.Random(seed)
    out = [random_map(rng, fam) for fam in MAP_FAMILIES]
    while len(out) < n:
        out.append(random_map(rng))
    return out[:n]

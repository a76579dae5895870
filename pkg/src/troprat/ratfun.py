"""The semifield Rat(Γ) of tropical rational functions on a curve.

A non-bottom function is stored edge by edge as its breakpoints
``(offset, value)``; on an infinite edge the breakpoints stop at a finite
offset ``T`` and ``tail`` gives the (integer) slope from ``T`` towards the
point at infinity.  Functions are kept in canonical form (no breakpoint
between two equal slopes), so equality is structural.
"""

from bisect import bisect_right
from dataclasses import dataclass
from fractions import Fraction

from .curve import Point, chain_position, directions_at, distance, injectivity_radius, tail_chain, walk
from .errors import (
    BadProbeGeometry,
    BottomFunction,
    CurveMismatch,
    FunctionError,
    InvertBottom,
    NonIntegerSlope,
    PlusInfinityConstant,
    PointNotOnCurve,
)
from .ext import INF, NEG_INF, fmt_ext, is_inf, to_ext


def _slope(t0, v0, t1, v1):
    s = (v1 - v0) / (t1 - t0)
    if s.denominator != 1:
        raise NonIntegerSlope(f"slope {s} between offsets {t0} and {t1} is not an integer")
    return s.numerator


@dataclass(frozen=True)
class EdgeFn:
    offsets: tuple
    values: tuple
    tail: int = None

    def slopes(self):
        o, v = self.offsets, self.values
        return [_slope(o[i], v[i], o[i + 1], v[i + 1]) for i in range(len(o) - 1)]

    def value(self, t):
        o, v = self.offsets, self.values
        if is_inf(t):
            if self.tail > 0:
                return INF
            if self.tail < 0:
                return NEG_INF
            return v[-1]
        i = bisect_right(o, t) - 1
        if i == len(o) - 1:
            if t == o[-1]:
                return v[-1]
            return v[-1] + self.tail * (t - o[-1])
        return v[i] + (v[i + 1] - v[i]) * (t - o[i]) / (o[i + 1] - o[i])

    @property
    def at_start(self):
        return self.values[0]

    @property
    def at_end(self):
        if self.tail is None:
            return self.values[-1]
        return self.value(INF)

    def first_slope(self):
        if len(self.offsets) == 1:
            return self.tail
        return _slope(self.offsets[0], self.values[0], self.offsets[1], self.values[1])

    def last_slope(self):
        if self.tail is not None:
            return self.tail
        o, v = self.offsets, self.values
        return _slope(o[-2], v[-2], o[-1], v[-1])


def _canonical_edge(points, tail):
    """Drop breakpoints where the slope does not change."""
    points = sorted(points)
    slopes = [_slope(*points[i], *points[i + 1]) for i in range(len(points) - 1)]
    if tail is not None:
        slopes.append(tail)
    keep = [points[0]]
    for i in range(1, len(points)):
        last = i == len(points) - 1
        if last and tail is None:
            keep.append(points[i])
        elif i < len(slopes) and slopes[i] != slopes[i - 1]:
            keep.append(points[i])
    return EdgeFn(tuple(t for t, _ in keep), tuple(v for _, v in keep), tail)


class RatFun:
    """An element of Rat(Γ).  ``pieces is None`` encodes the bottom element."""

    __slots__ = ("curve", "pieces", "vertex_values")

    def __init__(self, curve, pieces, vertex_values=None):
        self.curve = curve
        self.pieces = pieces
        if pieces is None:
            self.vertex_values = None
            return
        if vertex_values is None:
            vertex_values = {}
            for eid, piece in pieces.items():
                e = curve.edges[eid]
                for v, val in ((e.u, piece.at_start), (e.v, piece.at_end)):
                    if v in vertex_values and vertex_values[v] != val:
                        raise FunctionError(f"values disagree at vertex {v}")
                    vertex_values[v] = val
        self.vertex_values = vertex_values

    @property
    def is_bottom(self):
        return self.pieces is None

    def __eq__(self, other):
        if not isinstance(other, RatFun):
            return NotImplemented
        return (self.curve == other.curve and self.pieces == other.pieces
                and self.vertex_values == other.vertex_values)

    def __hash__(self):
        if self.pieces is None:
            return hash(None)
        return hash(tuple(sorted(self.pieces.items())))

    def __repr__(self):
        if self.is_bottom:
            return "RatFun(-inf)"
        return f"RatFun({len(self.pieces)} edges, max={max_value(self)})"

    def __call__(self, p):
        return eval_at(self, p)


def from_breakpoints(curve, data):
    """Build a function from raw per-edge data.

    ``data`` maps edge ids to ``(points, tail)`` where ``points`` is a list of
    ``(offset, value)`` pairs.  Finite edges need breakpoints at both ends;
    infinite edges need one at offset 0 and a tail slope.
    """
    if not curve.edges:
        raise FunctionError("use constant() on a singleton curve")
    if set(data) != set(curve.edges):
        raise FunctionError("function data must cover every edge exactly once")
    pieces = {}
    for eid, (points, tail) in data.items():
        e = curve.edges[eid]
        pts = sorted((to_ext(t), to_ext(v)) for t, v in points)
        if not pts or pts[0][0] != 0:
            raise FunctionError(f"edge {eid} needs a breakpoint at offset 0")
        if len({t for t, _ in pts}) != len(pts):
            raise FunctionError(f"edge {eid} has repeated offsets")
        if any(is_inf(v) or is_inf(t) for t, v in pts):
            raise FunctionError("breakpoints must be finite; infinity is reached through the tail")
        if e.is_infinite:
            if tail is None or int(tail) != tail:
                raise FunctionError(f"infinite edge {eid} needs an integer tail slope")
            tail = int(tail)
        else:
            if tail is not None:
                raise FunctionError(f"finite edge {eid} cannot have a tail slope")
            if pts[-1][0] != e.length:
                raise FunctionError(f"edge {eid} needs a breakpoint at its far end")
        if pts[-1][0] > e.length or pts[0][0] < 0:
            raise FunctionError(f"breakpoint outside edge {eid}")
        pieces[eid] = _canonical_edge(pts, tail)
    return RatFun(curve, pieces)


def _sampled(curve, offsets, value_at):
    """Function with breakpoints among ``offsets[eid]`` (plus the edge ends).

    ``value_at(eid, t)`` must be exact at finite offsets.  On infinite edges
    the caller guarantees linearity beyond the largest offset, and the tail
    slope is read off one unit further out.
    """
    pieces = {}
    for eid, e in curve.edges.items():
        ts = {Fraction(0)}
        ts.update(t for t in offsets.get(eid, ()) if not is_inf(t) and 0 <= t <= e.length)
        tail = None
        if e.is_infinite:
            far = max(ts)
            tail = value_at(eid, far + 1) - value_at(eid, far)
            if tail.denominator != 1:
                raise NonIntegerSlope(f"tail slope {tail} on {eid}")
            tail = tail.numerator
        else:
            ts.add(e.length)
        pts = [(t, value_at(eid, t)) for t in sorted(ts)]
        pieces[eid] = _canonical_edge(pts, tail)
    return RatFun(curve, pieces)


# -- construction ------------------------------------------------------------------

def constant(curve, c):
    c = to_ext(c)
    if c == INF:
        raise PlusInfinityConstant("+inf is not an element of the tropical semifield")
    if c == NEG_INF:
        return RatFun(curve, None)
    if not curve.edges:
        return RatFun(curve, {}, {v: c for v in curve.vertices})
    pieces = {}
    for eid, e in curve.edges.items():
        if e.is_infinite:
            pieces[eid] = EdgeFn((Fraction(0),), (c,), 0)
        else:
            pieces[eid] = EdgeFn((Fraction(0), e.length), (c, c))
    return RatFun(curve, pieces)


def bottom(curve):
    return RatFun(curve, None)


def is_constant(f):
    return f.is_bottom or max_value(f) == min_value(f)


# -- evaluation ------------------------------------------------------------------

def eval_at(f, p):
    f.curve.check(p)
    if f.is_bottom:
        return NEG_INF
    if p.vertex is not None:
        return f.vertex_values[p.vertex]
    return f.pieces[p.edge].value(p.offset)


def _edge_value(f, eid, t):
    if f.is_bottom:
        return NEG_INF
    return f.pieces[eid].value(t)


# -- semifield operations ----------------------------------------------------------

def _same_curve(f, g):
    if f.curve is not g.curve and f.curve != g.curve:
        raise CurveMismatch("functions live on different curves")


def _crossings(pf, pg, offsets):
    """Offsets where the graphs of two edge functions cross between
    consecutive entries of ``offsets`` (and beyond the last one)."""
    out = []
    diffs = [pf.value(t) - pg.value(t) for t in offsets]
    for i in range(len(offsets) - 1):
        a, b = diffs[i], diffs[i + 1]
        if (a < 0 < b) or (b < 0 < a):
            t0, t1 = offsets[i], offsets[i + 1]
            out.append(t0 + a * (t1 - t0) / (a - b))
    if pf.tail is not None:
        ds = pf.tail - pg.tail
        if ds != 0:
            t = offsets[-1] - diffs[-1] / ds
            if t > offsets[-1]:
                out.append(t)
    return out


def _union_offsets(f, g, eid):
    return sorted(set(f.pieces[eid].offsets) | set(g.pieces[eid].offsets))


def oplus(f, g):
    """Tropical sum: pointwise maximum."""
    _same_curve(f, g)
    if f.is_bottom:
        return g
    if g.is_bottom:
        return f
    curve = f.curve
    if not curve.edges:
        return _singleton(curve, max(_only(f), _only(g)))
    offsets = {}
    for eid in curve.edges:
        base = _union_offsets(f, g, eid)
        offsets[eid] = base + _crossings(f.pieces[eid], g.pieces[eid], base)
    return _sampled(curve, offsets,
                    lambda eid, t: max(f.pieces[eid].value(t), g.pieces[eid].value(t)))


def odot(f, g):
    """Tropical product: pointwise sum, extended continuously to infinity."""
    _same_curve(f, g)
    if f.is_bottom or g.is_bottom:
        return bottom(f.curve)
    curve = f.curve
    if not curve.edges:
        return _singleton(curve, _only(f) + _only(g))
    offsets = {eid: _union_offsets(f, g, eid) for eid in curve.edges}
    return _sampled(curve, offsets,
                    lambda eid, t: f.pieces[eid].value(t) + g.pieces[eid].value(t))


def oinv(f):
    """Tropical inverse: negation."""
    if f.is_bottom:
        raise InvertBottom("-inf has no multiplicative inverse")
    if not f.curve.edges:
        return _singleton(f.curve, -_only(f))
    pieces = {
        eid: EdgeFn(p.offsets, tuple(-v for v in p.values), None if p.tail is None else -p.tail)
        for eid, p in f.pieces.items()
    }
    return RatFun(f.curve, pieces, {v: -x for v, x in f.vertex_values.items()})


def opow(f, n):
    """``f`` to the tropical power ``n`` (an integer)."""
    if n == 0:
        return constant(f.curve, 0)
    if f.is_bottom:
        if n < 0:
            raise InvertBottom("-inf has no multiplicative inverse")
        return f
    if not f.curve.edges:
        return _singleton(f.curve, n * _only(f))
    pieces = {
        eid: EdgeFn(p.offsets, tuple(n * v for v in p.values), None if p.tail is None else n * p.tail)
        for eid, p in f.pieces.items()
    }
    return RatFun(f.curve, pieces)


def osum(curve, fs):
    out = bottom(curve)
    for f in fs:
        out = oplus(out, f)
    return out


def min_with(f, c):
    """Pointwise ``min(f, c)``, computed as ``(f^{-1} (+) (-c))^{-1}``."""
    c = to_ext(c)
    return oinv(oplus(oinv(f), constant(f.curve, -c)))


def leq(g, f):
    """``g <= f`` in the order of the idempotent semiring: ``f (+) g == f``."""
    return oplus(f, g) == f


def _only(f):
    (value,) = f.vertex_values.values()
    return value


def _singleton(curve, value):
    return RatFun(curve, {}, {v: value for v in curve.vertices})


def equals(f, g):
    _same_curve(f, g)
    return f == g


# -- extrema -------------------------------------------------------------------------

def _all_values(f):
    vals = list(f.vertex_values.values())
    for p in f.pieces.values():
        vals.extend(p.values)
    return vals


def max_value(f):
    if f.is_bottom:
        return NEG_INF
    return max(_all_values(f))


def min_value(f):
    if f.is_bottom:
        return NEG_INF
    return min(_all_values(f))


@dataclass(frozen=True)
class Locus:
    """A closed subset of a curve given as maximal closed edge intervals
    ``(edge, a, b)`` with ``a < b`` plus the isolated points."""

    points: frozenset
    intervals: tuple

    def single_point(self):
        if not self.intervals and len(self.points) == 1:
            return next(iter(self.points))
        return None

    def __str__(self):
        parts = sorted(str(p) for p in self.points)
        parts += [f"{e}[{fmt_ext(a)},{fmt_ext(b)}]" for e, a, b in self.intervals]
        return "{" + ", ".join(parts) + "}"


def _level_set(f, level):
    curve = f.curve
    intervals = []
    points = set()
    touched = set()
    for eid in sorted(f.pieces):
        p = f.pieces[eid]
        e = curve.edges[eid]
        o, v = p.offsets, p.values
        spans = []
        for i in range(len(o) - 1):
            if v[i] == level and v[i + 1] == level:
                spans.append([o[i], o[i + 1]])
        if p.tail == 0 and v[-1] == level:
            spans.append([o[-1], INF])
        merged = []
        for a, b in spans:
            if merged and merged[-1][1] == a:
                merged[-1][1] = b
            else:
                merged.append([a, b])
        for a, b in merged:
            intervals.append((eid, a, b))
            if a == 0:
                touched.add(e.u)
            if b == e.length:
                touched.add(e.v)
        for t, val in zip(o, v):
            if val == level and 0 < t < e.length and not any(a <= t <= b for a, b in merged):
                points.add(Point(edge=eid, offset=t))
    for vtx, val in f.vertex_values.items():
        if val == level and vtx not in touched:
            points.add(Point(vertex=vtx))
    return Locus(frozenset(points), tuple(intervals))


def argmax_set(f):
    if f.is_bottom:
        raise BottomFunction("the bottom element has no argmax")
    return _level_set(f, max_value(f))


def argmin_set(f):
    if f.is_bottom:
        raise BottomFunction("the bottom element has no argmin")
    return _level_set(f, min_value(f))


# -- divisors ---------------------------------------------------------------------------

class Divisor:
    """A finite formal sum of points with nonzero integer orders."""

    __slots__ = ("_orders",)

    def __init__(self, orders=None):
        self._orders = {p: int(n) for p, n in (orders or {}).items() if n != 0}

    def __getitem__(self, p):
        return self._orders.get(p, 0)

    def __iter__(self):
        return iter(self._orders)

    def __len__(self):
        return len(self._orders)

    def items(self):
        return sorted(self._orders.items(), key=lambda kv: kv[0].sort_key())

    def __eq__(self, other):
        if not isinstance(other, Divisor):
            return NotImplemented
        return self._orders == other._orders

    def __hash__(self):
        return hash(frozenset(self._orders.items()))

    def __add__(self, other):
        out = dict(self._orders)
        for p, n in other._orders.items():
            out[p] = out.get(p, 0) + n
        return Divisor(out)

    def __neg__(self):
        return Divisor({p: -n for p, n in self._orders.items()})

    def __sub__(self, other):
        return self + (-other)

    def degree(self):
        return sum(self._orders.values())

    def zeros(self):
        return {p: n for p, n in self._orders.items() if n > 0}

    def poles(self):
        return {p: -n for p, n in self._orders.items() if n < 0}

    def pushforward(self, fn):
        out = {}
        for p, n in self._orders.items():
            q = fn(p)
            out[q] = out.get(q, 0) + n
        return Divisor(out)

    def __repr__(self):
        body = ", ".join(f"{p}: {n:+d}" for p, n in self.items())
        return "Divisor({" + body + "})"


def divisor(f):
    """Orders of zeros (positive) and poles (negative): the sum of outgoing
    slopes at each point."""
    if f.is_bottom:
        raise BottomFunction("the bottom element has no divisor")
    curve = f.curve
    orders = {}

    def add(p, n):
        orders[p] = orders.get(p, 0) + n

    for eid, p in f.pieces.items():
        e = curve.edges[eid]
        slopes = p.slopes()
        if p.tail is not None:
            slopes.append(p.tail)
        add(Point(vertex=e.u), slopes[0])
        add(Point(vertex=e.v), -slopes[-1])
        for i in range(1, len(p.offsets)):
            if i < len(slopes):
                add(Point(edge=eid, offset=p.offsets[i]), slopes[i] - slopes[i - 1])
    return Divisor(orders)


# -- irredundant representations and the probe conditions ---------------------------------

def is_irredundant(f, parts):
    for g in parts:
        _same_curve(f, g)
    if osum(f.curve, parts) != f:
        return False
    for j in range(len(parts)):
        rest = parts[:j] + parts[j + 1:]
        if osum(f.curve, rest) == f:
            return False
    return True


def _zeros_on_half_edge(g, d, reach):
    curve = g.curve
    count = 0
    for z, n in divisor(g).zeros().items():
        s = distance(curve, d.base, z)
        if s == 0 or s > reach:
            continue
        try:
            if walk(curve, d, s) == z:
                count += 1
        except PointNotOnCurve:
            continue  # z lies beyond a branch point in this direction
    return count


def star_clauses(parts, x, eps):
    """The three clauses of the point-probe condition, as booleans:
    every part has maximum 0, minimum ``-eps``, and exactly one zero on each
    half-edge of ``x`` within distance ``eps``."""
    eps = to_ext(eps)
    if not parts:
        raise BadProbeGeometry("need at least one part")
    curve = parts[0].curve
    if curve.is_at_infinity(x):
        raise BadProbeGeometry("the point probe needs a finite point")
    if not (0 < eps <= injectivity_radius(curve, x)):
        raise BadProbeGeometry("eps must lie in (0, injectivity radius]")
    if any(g.is_bottom for g in parts):
        return (False, False, False)
    c1 = all(max_value(g) == 0 for g in parts)
    c2 = all(min_value(g) == -eps for g in parts)
    dirs = directions_at(curve, x)
    c3 = all(_zeros_on_half_edge(g, d, eps) == 1 for g in parts for d in dirs)
    return (c1, c2, c3)


def check_star(parts, x, eps):
    return all(star_clauses(parts, x, eps))


def star_star_clauses(parts, y, x):
    """Clauses of the tail-probe condition: every part has maximum ``inf``,
    minimum 0 and exactly one zero on ``[y, x)``."""
    if not parts:
        raise BadProbeGeometry("need at least one part")
    curve = parts[0].curve
    if not curve.is_at_infinity(x):
        raise BadProbeGeometry(f"{x} is not a point at infinity")
    chain = tail_chain(curve, x)
    pos = chain_position(curve, chain, y)
    if curve.is_at_infinity(y) or not pos:
        raise BadProbeGeometry(f"{y} is not a finite point on the edge ending at {x}")
    start = pos[0]
    if any(g.is_bottom for g in parts):
        return (False, False, False)
    c1 = all(max_value(g) == INF for g in parts)
    c2 = all(min_value(g) == 0 for g in parts)

    def on_segment(z):
        if z == x:
            return False
        zp = chain_position(curve, chain, z)
        return bool(zp) and zp[-1] >= start

    c3 = all(sum(1 for z in divisor(g).zeros() if on_segment(z)) == 1 for g in parts)
    return (c1, c2, c3)


def check_star_star(parts, y, x):
    return all(star_star_clauses(parts, y, x))

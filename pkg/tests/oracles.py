"""Independent reference computations used to check the library.

None of these share code paths with the implementation beyond point
construction: distances enumerate simple paths, function values are compared
pointwise, and divisor orders come from finite differences.
"""

from fractions import Fraction

from troprat.curve import Point, subdivide
from troprat.ext import INF, NEG_INF, is_inf


def brute_distance(curve, p, q):
    """Shortest path length by enumerating every simple path of the curve
    subdivided at ``p`` and ``q``."""
    if p == q:
        return Fraction(0)
    if curve.is_at_infinity(p) or curve.is_at_infinity(q):
        return INF
    cuts = {}
    for x in (p, q):
        if x.vertex is None:
            cuts.setdefault(x.edge, []).append(x.offset)
    sub, lift = subdivide(curve, cuts)
    a, b = lift(p).vertex, lift(q).vertex
    adj = {v: [] for v in sub.vertices}
    for e in sub.model.edges:
        if e.is_infinite or e.is_loop:
            continue
        adj[e.u].append((e.v, e.length))
        adj[e.v].append((e.u, e.length))
    best = [INF]

    def dfs(v, seen, acc):
        if acc >= best[0]:
            return
        if v == b:
            best[0] = acc
            return
        for w, length in adj[v]:
            if w not in seen:
                dfs(w, seen | {w}, acc + length)

    dfs(a, {a}, Fraction(0))
    return best[0]


def sample_offsets(curve, eid, *fns, extra=()):
    """Breakpoints of ``fns`` on ``eid`` plus midpoints between consecutive
    ones and a few points further out on an infinite edge."""
    e = curve.edges[eid]
    ts = {Fraction(0)}
    ts.update(extra)
    for f in fns:
        if f is not None and not f.is_bottom and f.pieces:
            ts.update(f.pieces[eid].offsets)
    if not e.is_infinite:
        ts.add(e.length)
    ts = sorted(t for t in ts if 0 <= t <= e.length and not is_inf(t))
    out = set(ts)
    out.update((a + b) / 2 for a, b in zip(ts, ts[1:]))
    if e.is_infinite:
        far = ts[-1]
        out.update({far + Fraction(1, 3), far + 1, far + 7})
    return sorted(out)


def sample_points(curve, *fns, extra=()):
    if not curve.edges:
        return [Point(vertex=v) for v in curve.vertices]
    pts = [Point(vertex=v) for v in curve.vertices]
    for eid in curve.edges:
        for t in sample_offsets(curve, eid, *fns, extra=extra):
            pts.append(curve.point(eid, t))
    return list(dict.fromkeys(pts))


def pointwise_max(f, g, p):
    return max(f(p), g(p))


def pointwise_sum(f, g, p):
    a, b = f(p), g(p)
    if NEG_INF in (a, b):
        return NEG_INF
    if is_inf(a) and is_inf(b) and a != b:
        raise AssertionError("opposite infinities at one point")
    return a + b


def brute_subgraph_distance(curve, sub, p):
    """Distance from ``p`` to a subgraph: zero inside it, otherwise the
    distance to the nearest interval endpoint or isolated point."""
    if p.vertex is None:
        for eid, a, b in sub.intervals:
            if eid == p.edge and a <= p.offset <= b:
                return Fraction(0)
    targets = set(sub.points)
    for eid, a, b in sub.intervals:
        targets.add(curve.point(eid, a))
        if not is_inf(b):
            targets.add(curve.point(eid, b))
    for eid, a, b in sub.intervals:
        e = curve.edges[eid]
        for v, t in ((e.u, 0), (e.v, e.length)):
            if a <= t <= b and p == Point(vertex=v):
                return Fraction(0)
    return min(brute_distance(curve, p, x) for x in targets)


def cf_value(curve, sub, l, p):
    d = brute_subgraph_distance(curve, sub, p)
    return -min(l, d)


def finite_difference_order(f, p):
    """Sum of outgoing slopes of ``f`` at a finite point, by sampling a
    small step along each half-edge."""
    curve = f.curve
    total = 0
    for eid, e in curve.edges.items():
        offs = {Fraction(0), *f.pieces[eid].offsets}
        if not e.is_infinite:
            offs.add(e.length)
        if p.edge == eid:
            offs.add(p.offset)
        offs = sorted(offs)
        gaps = [b - a for a, b in zip(offs, offs[1:])]
        h = min(gaps) / 8 if gaps else Fraction(1, 8)
        piece = f.pieces[eid]
        here = []
        if p.vertex is not None:
            if e.u == p.vertex:
                here.append((Fraction(0), +1))
            if e.v == p.vertex and not e.is_infinite:
                here.append((e.length, -1))
        elif p.edge == eid:
            here.extend([(p.offset, +1), (p.offset, -1)])
        for t, sign in here:
            total += (piece.value(t + sign * h) - piece.value(t)) / h
    return total


def order_at_infinity(f, x):
    """Order at a point at infinity: minus the eventual slope towards it."""
    for eid, e in f.curve.edges.items():
        if e.is_infinite and e.v == x.vertex:
            return -f.pieces[eid].tail
    raise AssertionError(f"{x} is not a point at infinity")


def pointwise_geq(f, g):
    """``f >= g`` everywhere: at sampled points, and beyond the last
    breakpoint of each infinite edge where both are affine."""
    curve = f.curve
    if not all(f(p) >= g(p) for p in sample_points(curve, f, g)):
        return False
    if f.is_bottom or g.is_bottom:
        return True
    for eid, e in curve.edges.items():
        if e.is_infinite and f.pieces[eid].tail < g.pieces[eid].tail:
            return False
    return True

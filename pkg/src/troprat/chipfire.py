"""Chip-firing moves ``CF(S; l)(x) = -min(l, dist(x, S))`` and the two probe
shapes used to locate points through a semiring isomorphism."""

import heapq
from dataclasses import dataclass
from fractions import Fraction
from itertools import count

from .curve import Point, chain_boundaries, chain_position, tail_chain
from .errors import (
    EmptySubgraph,
    IsolatedInfinityComponent,
    NotAPointAtInfinity,
    PointAtInfinity,
    PointNotOnTailEdge,
    SubgraphError,
)
from .ext import INF, fmt_ext, is_inf, to_ext
from .ratfun import _sampled, constant


@dataclass(frozen=True)
class Subgraph:
    """A compact subset: closed edge intervals ``(edge, a, b)`` with ``a < b``
    (``b`` may be ``INF`` on an infinite edge) plus isolated points."""

    curve: object
    intervals: tuple
    points: frozenset

    def __str__(self):
        parts = sorted(str(p) for p in self.points)
        parts += [f"{e}[{fmt_ext(a)},{fmt_ext(b)}]" for e, a, b in self.intervals]
        return "{" + ", ".join(parts) + "}"


def make_subgraph(curve, intervals=(), points=()):
    """Normalize intervals and points into a :class:`Subgraph`.

    Overlapping or touching intervals on an edge are merged; points inside an
    interval are dropped; degenerate intervals become points.
    """
    by_edge = {}
    pts = set()
    for eid, a, b in intervals:
        e = curve.edge(eid)
        a, b = to_ext(a), to_ext(b)
        if a > b:
            a, b = b, a
        if a < 0 or b > e.length or is_inf(a):
            raise SubgraphError(f"interval [{fmt_ext(a)}, {fmt_ext(b)}] is outside edge {eid}")
        if a == b:
            pts.add(curve.point(eid, a))
        else:
            by_edge.setdefault(eid, []).append([a, b])
    for p in points:
        pts.add(curve.check(p))
    merged = []
    touched = set()
    for eid in sorted(by_edge):
        e = curve.edges[eid]
        spans = sorted(by_edge[eid])
        out = [spans[0]]
        for a, b in spans[1:]:
            if a <= out[-1][1]:
                out[-1][1] = max(out[-1][1], b)
            else:
                out.append([a, b])
        for a, b in out:
            merged.append((eid, a, b))
            if a == 0:
                touched.add(e.u)
            if b == e.length:
                touched.add(e.v)

    def inside(p):
        if p.vertex is not None:
            return p.vertex in touched
        return any(eid == p.edge and a <= p.offset <= b for eid, a, b in merged)

    pts = {p for p in pts if not inside(p)}
    if not merged and not pts:
        raise EmptySubgraph("the subgraph is empty")
    for p in pts:
        if curve.is_at_infinity(p):
            raise IsolatedInfinityComponent(f"{p} would be a component consisting of a point at infinity")
    return Subgraph(curve, tuple(merged), frozenset(pts))


def whole_curve(curve):
    if not curve.edges:
        return Subgraph(curve, (), frozenset(Point(vertex=v) for v in curve.vertices))
    return make_subgraph(curve, [(eid, 0, e.length) for eid, e in curve.edges.items()])


def _vertex_distances(curve, sub):
    """Multi-source Dijkstra: distance from every finite vertex to ``sub``."""
    dist = {v: INF for v in curve.vertices if v not in curve.inf_points}
    seeds = {}

    def seed(v, d):
        if v in dist and d < seeds.get(v, INF):
            seeds[v] = d

    for eid, a, b in sub.intervals:
        e = curve.edges[eid]
        seed(e.u, a)
        if not e.is_infinite:
            seed(e.v, e.length - b)
    for p in sub.points:
        if p.vertex is not None:
            seed(p.vertex, Fraction(0))
        else:
            e = curve.edges[p.edge]
            seed(e.u, p.offset)
            if not e.is_infinite:
                seed(e.v, e.length - p.offset)
    tie = count()
    heap = [(d, next(tie), v) for v, d in seeds.items()]
    heapq.heapify(heap)
    while heap:
        d, _, v = heapq.heappop(heap)
        if d >= dist[v]:
            continue
        dist[v] = d
        for eid, _sign in curve.incident(v):
            e = curve.edges[eid]
            if e.is_infinite:
                continue
            w = e.v if e.u == v else e.u
            nd = d + e.length
            if nd < dist[w]:
                heapq.heappush(heap, (nd, next(tie), w))
    return dist


def distance_function(curve, sub):
    """``dist(., sub)`` on each edge as a sampler plus candidate breakpoints."""
    vd = _vertex_distances(curve, sub)
    local = {}
    for eid, a, b in sub.intervals:
        local.setdefault(eid, []).append((a, b))
    for p in sub.points:
        if p.vertex is None:
            local.setdefault(p.edge, []).append((p.offset, p.offset))

    def value(eid, t):
        e = curve.edges[eid]
        best = vd[e.u] + t if not is_inf(vd[e.u]) else INF
        if not e.is_infinite and not is_inf(vd[e.v]):
            best = min(best, vd[e.v] + e.length - t)
        for a, b in local.get(eid, ()):
            if a <= t <= b:
                return Fraction(0)
            best = min(best, a - t if t < a else t - b)
        return best

    def candidates(eid, extra_levels=()):
        e = curve.edges[eid]
        up = []    # lines c + t
        down = []  # lines c - t
        flat = [Fraction(0)] + [c for c in extra_levels if not is_inf(c)]
        if not is_inf(vd[e.u]):
            up.append(vd[e.u])
        if not e.is_infinite and not is_inf(vd[e.v]):
            down.append(vd[e.v] + e.length)
        ts = [Fraction(0)]
        for a, b in local.get(eid, ()):
            ts.extend([a, b] if not is_inf(b) else [a])
            down.append(a)
            if not is_inf(b):
                up.append(-b)
        for cu in up:
            for cd in down:
                ts.append((cd - cu) / 2)
            for c in flat:
                ts.append(c - cu)
        for cd in down:
            for c in flat:
                ts.append(cd - c)
        return [t for t in ts if 0 <= t <= e.length]

    return value, candidates


def cf(curve, sub, l):
    """The chip-firing move by ``sub`` and ``l`` (a positive rational or INF)."""
    l = to_ext(l)
    if not (l > 0):
        raise SubgraphError("l must be positive")
    if not curve.edges:
        return constant(curve, 0)
    value, candidates = distance_function(curve, sub)
    offsets = {eid: candidates(eid, (l,)) for eid in curve.edges}
    return _sampled(curve, offsets, lambda eid, t: -min(l, value(eid, t)))


def cf_point(curve, x, eps):
    """``CF({x}; eps)`` for a finite point ``x``."""
    curve.check(x)
    if curve.is_at_infinity(x):
        raise PointAtInfinity(f"{x} is a point at infinity")
    return cf(curve, make_subgraph(curve, points=[x]), eps)


def tail_complement(curve, y, x):
    """The subgraph ``Γ \\ (y, x]`` for a point at infinity ``x`` and a finite
    point ``y`` on the canonical edge ending at ``x``."""
    curve.check(y)
    curve.check(x)
    if not curve.is_at_infinity(x):
        raise NotAPointAtInfinity(f"{x} is not a point at infinity")
    chain = tail_chain(curve, x)
    pos = chain_position(curve, chain, y)
    if curve.is_at_infinity(y) or not pos:
        raise PointNotOnTailEdge(f"{y} is not a finite point on the edge ending at {x}")
    s = pos[0]
    on_chain = set(chain.edge_ids)
    intervals = [(eid, 0, e.length) for eid, e in curve.edges.items() if eid not in on_chain]
    bounds = chain_boundaries(curve, chain)
    for k, (eid, fwd) in enumerate(chain.steps):
        e = curve.edges[eid]
        lo, hi = bounds[k], bounds[k + 1]
        if hi <= s:
            intervals.append((eid, 0, e.length))
        elif lo < s:
            local = s - lo
            intervals.append((eid, 0, local) if fwd else (eid, e.length - local, e.length))
    points = [] if intervals else [y]
    return make_subgraph(curve, intervals, points)


def cf_tail(curve, y, x):
    """``CF(Γ \\ (y, x]; INF)``: zero off the segment, slope -1 from ``y``
    towards ``x`` and ``-inf`` at ``x``."""
    return cf(curve, tail_complement(curve, y, x), INF)

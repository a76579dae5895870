"""Tropical curves as metric graphs with exact rational edge lengths.

A curve is stored through one of its models: a finite connected multigraph
whose edges carry a positive rational length or ``INF``.  Edges of infinite
length are leaf edges; their leaf end is the point at infinity.  Internally
every infinite edge is oriented ``u -> v`` with ``v`` the infinite end, so an
offset on an infinite edge is always measured from its finite end.
"""

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property

from .errors import (
    DisconnectedGraph,
    EmptyGraph,
    InfiniteNonLeafEdge,
    MalformedModel,
    MissingInfiniteEnd,
    PointAtInfinity,
    PointNotOnCurve,
)
from .ext import INF, fmt_ext, is_inf, to_ext


@dataclass(frozen=True)
class Edge:
    id: str
    u: str
    v: str
    length: object
    inf_end: str = None

    @property
    def is_loop(self):
        return self.u == self.v

    @property
    def is_infinite(self):
        return is_inf(self.length)


@dataclass(frozen=True)
class Model:
    vertices: tuple
    edges: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(self.vertices))
        object.__setattr__(self, "edges", tuple(self.edges))


@dataclass(frozen=True)
class Point:
    """A location on a curve: a vertex, or an interior offset on an edge.

    Use :meth:`TropicalCurve.point` to build canonical instances; endpoint
    offsets collapse to vertex points and the point at infinity of an
    infinite edge is its infinite-end vertex.
    """

    vertex: str = None
    edge: str = None
    offset: Fraction = None

    @classmethod
    def at(cls, vertex):
        return cls(vertex=vertex)

    @property
    def is_vertex(self):
        return self.vertex is not None

    def __str__(self):
        if self.vertex is not None:
            return self.vertex
        return f"{self.edge}@{fmt_ext(self.offset)}"

    def sort_key(self):
        if self.vertex is not None:
            return (0, self.vertex, Fraction(0))
        return (1, self.edge, self.offset)


@dataclass(frozen=True)
class Direction:
    """A half-edge at ``base``: leave along ``edge`` increasing (+1) or
    decreasing (-1) the edge offset."""

    base: Point
    edge: str
    sign: int


@dataclass(frozen=True)
class Chain:
    """A maximal path through valence-2 vertices between two canonical
    vertices; ``steps`` lists ``(edge id, forward)`` pairs."""

    start: str
    end: str
    steps: tuple
    length: object

    @property
    def edge_ids(self):
        return tuple(e for e, _ in self.steps)

    @property
    def id(self):
        return min(self.edge_ids)


def _connected(vertices, edges):
    adj = {v: [] for v in vertices}
    for e in edges:
        adj[e.u].append(e.v)
        adj[e.v].append(e.u)
    start = vertices[0]
    seen = {start}
    todo = deque([start])
    while todo:
        x = todo.popleft()
        for y in adj[x]:
            if y not in seen:
                seen.add(y)
                todo.append(y)
    return len(seen) == len(vertices)


def build_curve(model, infinite_ends=None):
    """Validate ``model`` and return the tropical curve it presents.

    ``infinite_ends`` maps edge ids of infinite edges to the endpoint that
    is identified with infinity; it overrides ``Edge.inf_end``.
    """
    infinite_ends = dict(infinite_ends or {})
    vertices = tuple(model.vertices)
    if not vertices:
        raise EmptyGraph("a model needs at least one vertex")
    if len(set(vertices)) != len(vertices):
        raise MalformedModel("duplicate vertex ids")
    vset = set(vertices)
    ids = [e.id for e in model.edges]
    if len(set(ids)) != len(ids):
        raise MalformedModel("duplicate edge ids")
    if vset & set(ids):
        raise MalformedModel("vertex and edge ids must be distinct")
    for name in list(vset) + ids:
        if "@" in str(name):
            raise MalformedModel(f"id {name!r} may not contain '@'")
    unknown = set(infinite_ends) - set(ids)
    if unknown:
        raise MalformedModel(f"infinite_ends names unknown edges {sorted(unknown)}")

    degree = {v: 0 for v in vertices}
    for e in model.edges:
        if e.u not in vset or e.v not in vset:
            raise MalformedModel(f"edge {e.id} has an unknown endpoint")
        degree[e.u] += 1
        degree[e.v] += 1

    edges = []
    for e in model.edges:
        length = to_ext(e.length)
        if not (length > 0):
            raise MalformedModel(f"edge {e.id} must have positive length")
        end = infinite_ends.get(e.id, e.inf_end)
        if not is_inf(length):
            if end is not None:
                raise MalformedModel(f"finite edge {e.id} cannot have an infinite end")
            edges.append(Edge(e.id, e.u, e.v, length))
            continue
        if end is None:
            raise MissingInfiniteEnd(f"infinite edge {e.id} needs a designated infinite end")
        if end not in (e.u, e.v):
            raise MalformedModel(f"infinite end {end!r} is not an endpoint of {e.id}")
        if e.is_loop or degree[end] != 1:
            raise InfiniteNonLeafEdge(
                f"edge {e.id} has infinite length but its end {end!r} is not a leaf end")
        other = e.v if end == e.u else e.u
        edges.append(Edge(e.id, other, end, INF, end))

    if not _connected(vertices, edges):
        raise DisconnectedGraph("the model graph is not connected")
    return TropicalCurve(Model(vertices, edges))


class TropicalCurve:
    """An immutable, validated tropical curve.  Build with :func:`build_curve`."""

    def __init__(self, model):
        self.model = model
        self.vertices = model.vertices
        self.edges = {e.id: e for e in model.edges}
        self.inf_points = frozenset(e.v for e in model.edges if e.is_infinite)
        inc = {v: [] for v in self.vertices}
        for e in model.edges:
            inc[e.u].append((e.id, +1))
            inc[e.v].append((e.id, -1))
        self._incident = inc

    def __eq__(self, other):
        if self is other:
            return True
        return isinstance(other, TropicalCurve) and self.model == other.model

    def __hash__(self):
        return hash(self.model)

    def __repr__(self):
        return f"TropicalCurve({len(self.vertices)} vertices, {len(self.edges)} edges)"

    # -- points --------------------------------------------------------------

    def edge(self, eid):
        try:
            return self.edges[eid]
        except KeyError:
            raise PointNotOnCurve(f"no edge {eid!r}") from None

    def point(self, eid, offset):
        """Canonical point at ``offset`` along edge ``eid``."""
        e = self.edge(eid)
        t = to_ext(offset)
        if t == 0:
            return Point(vertex=e.u)
        if t == e.length:
            return Point(vertex=e.v)
        if is_inf(t) or t < 0 or t > e.length:
            raise PointNotOnCurve(f"offset {fmt_ext(t)} is outside edge {eid}")
        return Point(edge=eid, offset=t)

    def vertex_point(self, v):
        if v not in self._incident:
            raise PointNotOnCurve(f"no vertex {v!r}")
        return Point(vertex=v)

    def parse_point(self, text):
        """Parse ``"v3"``, ``"e0@5/2"`` or ``"e0@inf"``."""
        text = text.strip()
        if "@" in text:
            eid, off = text.split("@", 1)
            return self.point(eid, off)
        return self.vertex_point(text)

    def check(self, p):
        if p.vertex is not None:
            if p.vertex not in self._incident:
                raise PointNotOnCurve(f"no vertex {p.vertex!r}")
            return p
        e = self.edge(p.edge)
        if not (0 < p.offset < e.length) or is_inf(p.offset):
            raise PointNotOnCurve(f"{p} is not an interior point of {p.edge}")
        return p

    def is_at_infinity(self, p):
        return p.vertex is not None and p.vertex in self.inf_points

    def incident(self, v):
        """``(edge id, sign)`` pairs at vertex ``v``; a loop appears twice."""
        return self._incident[v]

    def degree(self, v):
        return len(self._incident[v])

    def edge_position(self, p):
        """Some ``(edge id, offset)`` representing ``p``, or ``None`` for an
        isolated vertex."""
        if p.vertex is None:
            return p.edge, p.offset
        inc = self._incident[p.vertex]
        if not inc:
            return None
        eid, sign = inc[0]
        return eid, (Fraction(0) if sign > 0 else self.edges[eid].length)

    def anchors(self, p):
        """Finite vertices reachable from ``p`` without crossing a vertex,
        with their distances."""
        if p.vertex is not None:
            return [(p.vertex, Fraction(0))]
        e = self.edges[p.edge]
        out = [(e.u, p.offset)]
        if not e.is_infinite:
            out.append((e.v, e.length - p.offset))
        return out

    @cached_property
    def _vdist(self):
        finite = [v for v in self.vertices if v not in self.inf_points]
        d = {a: {b: (Fraction(0) if a == b else INF) for b in finite} for a in finite}
        for e in self.model.edges:
            if e.is_infinite or e.is_loop:
                continue
            if e.length < d[e.u][e.v]:
                d[e.u][e.v] = d[e.v][e.u] = e.length
        for k in finite:
            dk = d[k]
            for a in finite:
                dak = d[a][k]
                if is_inf(dak):
                    continue
                da = d[a]
                for b in finite:
                    cand = dak + dk[b]
                    if cand < da[b]:
                        da[b] = cand
        return d

    @cached_property
    def canonical(self):
        return _canonical_structure(self)


# -- basic invariants ----------------------------------------------------------

def valence(curve, p):
    curve.check(p)
    if p.vertex is None:
        return 2
    return curve.degree(p.vertex)


def genus(curve):
    return len(curve.edges) - len(curve.vertices) + 1


def distance(curve, p, q):
    """Exact shortest-path distance; ``INF`` whenever a point at infinity is
    involved and the points differ."""
    curve.check(p)
    curve.check(q)
    if p == q:
        return Fraction(0)
    if curve.is_at_infinity(p) or curve.is_at_infinity(q):
        return INF
    vd = curve._vdist
    best = INF
    if p.edge is not None and p.edge == q.edge:
        best = abs(p.offset - q.offset)
    for a, da in curve.anchors(p):
        row = vd[a]
        for b, db in curve.anchors(q):
            cand = da + row[b] + db
            if cand < best:
                best = cand
    return best


def directions_at(curve, p):
    curve.check(p)
    if curve.is_at_infinity(p):
        raise PointAtInfinity(f"{p} is a point at infinity")
    if p.vertex is None:
        return [Direction(p, p.edge, +1), Direction(p, p.edge, -1)]
    return [Direction(p, eid, sign) for eid, sign in curve.incident(p.vertex)]


def _start_offset(curve, d):
    if d.base.vertex is None:
        return d.base.offset
    e = curve.edges[d.edge]
    return Fraction(0) if d.sign > 0 else e.length


def walk(curve, d, s):
    """The point reached by travelling ``s`` along direction ``d``, passing
    straight through vertices of valence 2.

    Raises ``PointNotOnCurve`` if the walk would have to choose a branch or
    run off a leaf.
    """
    eid, sign, t = d.edge, d.sign, _start_offset(curve, d)
    remaining = to_ext(s)
    while True:
        e = curve.edges[eid]
        room = (e.length - t) if sign > 0 else t
        if remaining <= room:
            return curve.point(eid, t + sign * remaining if not is_inf(remaining) else INF)
        remaining -= room
        w = e.v if sign > 0 else e.u
        if curve.degree(w) != 2 or w in curve.inf_points:
            raise PointNotOnCurve("walk leaves the valence-2 stretch of the curve")
        # the other edge-end at w; for a loop this is the same edge reversed
        ends = list(curve.incident(w))
        ends.remove((eid, -sign))
        eid, sign = ends[0]
        t = Fraction(0) if sign > 0 else curve.edges[eid].length


def _walk_to_branch(curve, d, stop):
    """Distance travelled from ``d`` until a vertex in ``stop`` (or a vertex of
    valence != 2) is reached, together with the steps taken."""
    eid, sign, t = d.edge, d.sign, _start_offset(curve, d)
    dist = Fraction(0)
    steps = []
    while True:
        e = curve.edges[eid]
        steps.append((eid, sign > 0))
        dist = dist + ((e.length - t) if sign > 0 else t)
        w = e.v if sign > 0 else e.u
        if w in stop or curve.degree(w) != 2:
            return dist, w, steps
        ends = list(curve.incident(w))
        ends.remove((eid, -sign))
        eid, sign = ends[0]
        t = Fraction(0) if sign > 0 else curve.edges[eid].length


# -- canonical model -------------------------------------------------------------

@dataclass
class _Canonical:
    vertices: tuple
    chains: tuple
    kind: str = "general"
    chain_of_edge: dict = field(default_factory=dict)


def _canonical_structure(curve):
    if not curve.edges:
        return _Canonical(tuple(curve.vertices), (), "singleton")
    kept = {v for v in curve.vertices if curve.degree(v) != 2}
    kind = "general"
    if not kept:
        first = min(curve.edges)
        kept = {curve.edges[first].u}
        kind = "circle"
    elif kept <= curve.inf_points and len(kept) == 2 and genus(curve) == 0:
        first = min(e.id for e in curve.model.edges if e.is_infinite)
        kept.add(curve.edges[first].u)
        kind = "line"

    chains = []
    used = set()
    for v in sorted(kept):
        for eid, sign in curve.incident(v):
            if eid in used:
                continue
            length, w, steps = _walk_to_branch(curve, Direction(Point(vertex=v), eid, sign), kept)
            used.update(e for e, _ in steps)
            start = v
            if v in curve.inf_points:
                # keep infinite ends at the far end of a chain
                steps = [(e, not fwd) for e, fwd in reversed(steps)]
                start, w = w, v
            chains.append(Chain(start, w, tuple(steps), length))
    chains.sort(key=lambda c: c.id)
    by_edge = {}
    for c in chains:
        for e in c.edge_ids:
            by_edge[e] = c
    return _Canonical(tuple(sorted(kept)), tuple(chains), kind, by_edge)


def canonical_vertices(curve):
    return [Point(vertex=v) for v in curve.canonical.vertices]


def canonical_chains(curve):
    return list(curve.canonical.chains)


def canonical_model(curve):
    """The model whose vertices are the points of valence != 2 (with the
    circle and doubly infinite path conventions).  Edge ids are the smallest
    original edge id along each merged chain."""
    can = curve.canonical
    edges = []
    for c in can.chains:
        inf_end = c.end if c.end in curve.inf_points else None
        edges.append(Edge(c.id, c.start, c.end, c.length, inf_end))
    return Model(can.vertices, tuple(edges))


def canonical_curve(curve):
    return build_curve(canonical_model(curve))


def chain_locate(curve, chain, s):
    """Point at distance ``s`` from ``chain.start`` along ``chain``."""
    s = to_ext(s)
    if s < 0 or s > chain.length:
        raise PointNotOnCurve("position outside chain")
    if s == 0:
        return Point(vertex=chain.start)
    if s == chain.length:
        return Point(vertex=chain.end)
    acc = Fraction(0)
    for eid, fwd in chain.steps:
        e = curve.edges[eid]
        if s <= acc + e.length:
            local = s - acc
            return curve.point(eid, local if fwd else e.length - local)
        acc += e.length
    raise AssertionError("unreachable")


def chain_boundaries(curve, chain):
    """Cumulative positions of the vertices along ``chain`` (start and end
    included)."""
    out = [Fraction(0)]
    for eid, _ in chain.steps:
        out.append(out[-1] + curve.edges[eid].length)
    return out


def chain_position(curve, chain, p):
    """Distances from ``chain.start`` at which ``chain`` passes through ``p``
    (a list: a loop chain passes its end vertex twice)."""
    out = []
    acc = Fraction(0)
    for eid, fwd in chain.steps:
        e = curve.edges[eid]
        if p.vertex is None:
            if p.edge == eid:
                out.append(acc + (p.offset if fwd else e.length - p.offset))
        else:
            first, last = (e.u, e.v) if fwd else (e.v, e.u)
            if first == p.vertex and acc == 0:
                out.append(acc)
            if last == p.vertex:
                out.append(acc + e.length)
        acc = acc + e.length
    return sorted(set(out))


def tail_chain(curve, x):
    """The canonical chain ending at the point at infinity ``x``."""
    if not curve.is_at_infinity(x):
        raise PointAtInfinity(f"{x} is not a point at infinity")
    for c in curve.canonical.chains:
        if c.end == x.vertex:
            return c
    raise AssertionError("every point at infinity ends a canonical chain")


# -- injectivity radius and star test ---------------------------------------------

def injectivity_radius(curve, p):
    """Supremum of radii for which the ball around ``p`` is a star of
    valence-2 segments meeting only at ``p``."""
    curve.check(p)
    if curve.is_at_infinity(p):
        raise PointAtInfinity(f"{p} is a point at infinity")
    if curve.canonical.kind == "circle":
        return sum(e.length for e in curve.model.edges) / 2
    best = INF
    for d in directions_at(curve, p):
        dist, w, steps = _walk_to_branch(curve, d, set())
        if w in curve.inf_points:
            continue
        if p.vertex == w:
            # a loop back to p: the two ends of the ball meet halfway
            dist = dist / 2
        best = min(best, dist)
    return best


def is_star_infinite(curve):
    """True when every canonical edge has infinite length.

    The singleton curve counts as star-infinite: its rational functions are
    the constants, which admit the dilations ``t -> r t``.
    """
    if not curve.edges:
        return True
    return all(is_inf(c.length) for c in curve.canonical.chains)


# -- subdivision -------------------------------------------------------------------

def subdivide(curve, cuts):
    """Insert vertices at the given interior offsets.

    ``cuts`` maps edge ids to iterables of offsets.  Returns the new curve and
    a function lifting points of ``curve`` to points of the new curve.  New
    edges are named ``"<edge>.<k>"`` and new vertices ``"<edge>:<k>"``.
    """
    vertices = list(curve.vertices)
    edges = []
    table = {}
    for e in curve.model.edges:
        offs = sorted({to_ext(t) for t in cuts.get(e.id, ())})
        for t in offs:
            if not (0 < t < e.length) or is_inf(t):
                raise PointNotOnCurve(f"cut {fmt_ext(t)} is not interior to {e.id}")
        if not offs:
            edges.append(e)
            table[e.id] = [(Fraction(0), e.id)]
            continue
        names = [f"{e.id}:{k}" for k in range(1, len(offs) + 1)]
        vertices.extend(names)
        ends = [e.u] + names + [e.v]
        bounds = [Fraction(0)] + offs + [e.length]
        table[e.id] = []
        for k in range(len(bounds) - 1):
            length = bounds[k + 1] - bounds[k] if not is_inf(bounds[k + 1]) else INF
            inf_end = e.v if (k == len(bounds) - 2 and e.is_infinite) else None
            sub = Edge(f"{e.id}.{k}", ends[k], ends[k + 1], length, inf_end)
            edges.append(sub)
            table[e.id].append((bounds[k], sub.id))
    new = build_curve(Model(vertices, edges))

    def lift(p):
        if p.vertex is not None:
            return Point(vertex=p.vertex)
        pieces = table[p.edge]
        for start, sid in reversed(pieces):
            if p.offset >= start:
                return new.point(sid, p.offset - start)
        raise AssertionError("unreachable")

    return new, lift


def loopless_subdivision(curve):
    """Subdivide so the model has no loops (every loop gets two new vertices)."""
    cuts = {}
    for e in curve.model.edges:
        if e.is_loop:
            cuts[e.id] = [e.length / 3, 2 * e.length / 3]
    return subdivide(curve, cuts)

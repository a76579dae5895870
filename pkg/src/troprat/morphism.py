"""Expansive maps between tropical curves, plus harmonic-morphism checks.

Star-shaped curves also get their automorphism groups here.

An r-expansive map is stored on a subdivision of the source: each
:class:`Piece` sends ``[a, b]`` on a source edge affinely, with stretch ``r``,
onto a stretch of a single target edge starting at offset ``c``.
"""

from bisect import bisect_right
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations

from .curve import (
    Point,
    canonical_chains,
    canonical_vertices,
    chain_boundaries,
    chain_locate,
    chain_position,
    distance,
    is_star_infinite,
    subdivide,
)
from .errors import (
    CurveMismatch,
    Discontinuous,
    FactorViolated,
    InfinityNotPreserved,
    LoopyModel,
    MalformedMap,
    MapError,
    NotBijective,
    NotHarmonic,
    NotStarInfinite,
)
from .ext import INF, NEG_INF, fmt_ext, is_inf, to_ext


@dataclass(frozen=True)
class Piece:
    src_edge: str
    a: Fraction
    b: object
    dst_edge: str
    c: Fraction
    reversed: bool = False

    def image_offset(self, t, r):
        if is_inf(t):
            return NEG_INF if self.reversed else INF
        step = r * (t - self.a)
        return self.c - step if self.reversed else self.c + step

    def image_range(self, r):
        lo, hi = self.image_offset(self.a, r), self.image_offset(self.b, r)
        return (hi, lo) if self.reversed else (lo, hi)

    def preimage_offset(self, s, r):
        if is_inf(s):
            return INF
        return self.a + ((self.c - s) if self.reversed else (s - self.c)) / r


class ExpansiveMap:
    """A continuous bijection scaling finite distances by ``r``.

    Construct through :func:`make_expansive` (validating) or the factories in
    this module.
    """

    def __init__(self, source, target, r, pieces):
        self.source = source
        self.target = target
        self.r = Fraction(r)
        self.pieces = tuple(sorted(pieces, key=lambda p: (p.src_edge, p.a)))
        by_edge = {}
        for p in self.pieces:
            by_edge.setdefault(p.src_edge, []).append(p)
        self._by_edge = by_edge
        self._starts = {e: [p.a for p in ps] for e, ps in by_edge.items()}
        self._inverse = None

    def __repr__(self):
        return f"ExpansiveMap(r={fmt_ext(self.r)}, {len(self.pieces)} pieces)"

    def piece_at(self, eid, t):
        ps = self._by_edge[eid]
        i = max(bisect_right(self._starts[eid], t) - 1, 0)
        if is_inf(t):
            i = len(ps) - 1
        return ps[i]

    def __call__(self, p):
        return apply(self, p)


def apply(m, p):
    """Image of the point ``p`` under ``m``."""
    m.source.check(p)
    pos = m.source.edge_position(p)
    if pos is None:
        return Point(vertex=m.target.vertices[0])
    eid, t = pos
    piece = m.piece_at(eid, t)
    return m.target.point(piece.dst_edge, piece.image_offset(t, m.r))


def apply_inverse(m, q):
    return apply(inverse(m), q)


def _nodes(m):
    """Source points where pieces start or end, with their images under
    each adjacent piece."""
    out = {}
    for piece in m.pieces:
        for t in (piece.a, piece.b):
            p = m.source.point(piece.src_edge, t)
            img = m.target.point(piece.dst_edge, piece.image_offset(t, m.r))
            out.setdefault(p, set()).add(img)
    return out


def _piece_samples(m):
    pts = []
    for piece in m.pieces:
        mid = piece.a + 1 if is_inf(piece.b) else (piece.a + piece.b) / 2
        pts.append(m.source.point(piece.src_edge, mid))
    return pts


def make_expansive(source, target, r, pieces):
    """Validate the piece data and return the map.

    Raises ``MalformedMap``, ``FactorViolated``, ``Discontinuous``,
    ``NotBijective`` or ``InfinityNotPreserved``.
    """
    r = to_ext(r)
    if is_inf(r) or not (r > 0):
        raise MalformedMap("the expansion factor must be a positive rational")
    pieces = [Piece(p.src_edge, to_ext(p.a), to_ext(p.b), p.dst_edge, to_ext(p.c), bool(p.reversed))
              for p in pieces]
    m = ExpansiveMap(source, target, r, pieces)

    if not source.edges or not target.edges:
        if pieces:
            raise MalformedMap("a singleton curve carries no pieces")
        if bool(source.edges) != bool(target.edges) or len(source.vertices) != len(target.vertices):
            raise NotBijective("a singleton can only map onto a singleton")
        return m

    # every source edge is partitioned by its pieces
    for eid in source.edges:
        if eid not in m._by_edge:
            raise MalformedMap(f"source edge {eid} is not covered")
    for eid, ps in m._by_edge.items():
        e = source.edges.get(eid)
        if e is None:
            raise MalformedMap(f"unknown source edge {eid}")
        if ps[0].a != 0 or ps[-1].b != e.length:
            raise MalformedMap(f"pieces do not cover edge {eid}")
        for p, q in zip(ps, ps[1:]):
            if p.b != q.a:
                raise MalformedMap(f"pieces on {eid} overlap or leave a gap")
        for p in ps:
            if not (p.a < p.b) or is_inf(p.a):
                raise MalformedMap(f"bad source range on {eid}")

    images = {}
    for p in m.pieces:
        f = target.edges.get(p.dst_edge)
        if f is None:
            raise MalformedMap(f"unknown target edge {p.dst_edge}")
        if is_inf(p.b) and (p.reversed or not f.is_infinite):
            raise InfinityNotPreserved(f"the infinite end of {p.src_edge} is not sent to infinity")
        lo, hi = p.image_range(r)
        if lo < 0 or hi > f.length or (is_inf(hi) and not is_inf(p.b)):
            raise FactorViolated(
                f"piece of {p.src_edge} stretched by {fmt_ext(r)} does not fit in {p.dst_edge}")
        images.setdefault(p.dst_edge, []).append((lo, hi))

    nodes = _nodes(m)
    for p, imgs in nodes.items():
        if len(imgs) > 1:
            raise Discontinuous(f"{p} has several images: {sorted(map(str, imgs))}")

    for eid, f in target.edges.items():
        spans = sorted(images.get(eid, ()))
        if not spans or spans[0][0] != 0 or spans[-1][1] != f.length:
            raise NotBijective(f"target edge {eid} is not covered exactly once")
        for (a0, b0), (a1, b1) in zip(spans, spans[1:]):
            if b0 != a1:
                raise NotBijective(f"images overlap or leave a gap on target edge {eid}")
    seen = {}
    for p, imgs in nodes.items():
        (img,) = imgs
        if img in seen:
            raise NotBijective(f"{seen[img]} and {p} both map to {img}")
        seen[img] = p

    for v in source.inf_points:
        if not target.is_at_infinity(apply(m, Point(vertex=v))):
            raise InfinityNotPreserved(f"point at infinity {v} maps to a finite point")
    if len(source.inf_points) != len(target.inf_points):
        raise InfinityNotPreserved("the points at infinity are not matched bijectively")

    samples = [p for p in list(nodes) + _piece_samples(m) if not source.is_at_infinity(p)]
    imgs = [apply(m, p) for p in samples]
    for i in range(len(samples)):
        for j in range(i + 1, len(samples)):
            d = distance(source, samples[i], samples[j])
            d2 = distance(target, imgs[i], imgs[j])
            if d2 != r * d:
                raise FactorViolated(
                    f"dist({imgs[i]}, {imgs[j]}) = {fmt_ext(d2)} but r*dist({samples[i]}, "
                    f"{samples[j]}) = {fmt_ext(r * d)}")
    return m


# -- groupoid structure ------------------------------------------------------------------

def inverse(m):
    if m._inverse is None:
        pieces = []
        for p in m.pieces:
            lo, hi = p.image_range(m.r)
            start = p.b if p.reversed else p.a
            pieces.append(Piece(p.dst_edge, lo, hi, p.src_edge, start, p.reversed))
        inv = ExpansiveMap(m.target, m.source, 1 / m.r, pieces)
        inv._inverse = m
        m._inverse = inv
    return m._inverse


def compose(m2, m1):
    """``m2 ∘ m1`` (apply ``m1`` first)."""
    if m1.target != m2.source:
        raise CurveMismatch("the target of the first map is not the source of the second")
    r = m2.r * m1.r
    if not m1.source.edges:
        return ExpansiveMap(m1.source, m2.target, r, ())
    pieces = []
    for p in m1.pieces:
        lo, hi = p.image_range(m1.r)
        for q in m2._by_edge[p.dst_edge]:
            s, t = max(lo, q.a), min(hi, q.b)
            if not s < t:
                continue
            # preimages of the overlap ends on p's source edge
            u, w = p.preimage_offset(s, m1.r), p.preimage_offset(t, m1.r)
            alpha, beta = min(u, w), max(u, w)
            mid_img = p.image_offset(alpha, m1.r)
            start = q.image_offset(mid_img, m2.r)
            pieces.append(Piece(p.src_edge, alpha, beta, q.dst_edge, start, p.reversed != q.reversed))
    return ExpansiveMap(m1.source, m2.target, r, pieces)


def identity(curve):
    pieces = [Piece(eid, Fraction(0), e.length, eid, Fraction(0), False)
              for eid, e in curve.edges.items()]
    return ExpansiveMap(curve, curve, 1, pieces)


def sample_points(curve):
    """A deterministic finite skeleton: canonical vertices plus two points on
    every canonical chain."""
    pts = list(canonical_vertices(curve))
    for c in canonical_chains(curve):
        if is_inf(c.length):
            marks = [Fraction(1), Fraction(5, 2)]
        else:
            marks = [c.length / 3, c.length / 2]
        pts.extend(chain_locate(curve, c, s) for s in marks)
    out = []
    for p in pts:
        if p not in out:
            out.append(p)
    return out


def same_action(m1, m2, samples=None):
    """Whether two maps agree pointwise (checked on all piece nodes and
    piece samples of both maps)."""
    if m1.source != m2.source or m1.target != m2.target:
        return False
    if m1.r != m2.r:
        return False
    pts = set(samples or ())
    for m in (m1, m2):
        pts.update(_nodes(m))
        pts.update(_piece_samples(m))
    if not pts:
        pts = {Point(vertex=v) for v in m1.source.vertices}
    return all(apply(m1, p) == apply(m2, p) for p in pts)


def is_automorphism(m):
    if m.source != m.target:
        raise CurveMismatch("an automorphism maps a curve to itself")
    return m.r == 1


# -- building maps from canonical chains -------------------------------------------------

def _step_index(bounds, lo, hi):
    for k in range(len(bounds) - 1):
        if bounds[k] <= lo and hi <= bounds[k + 1]:
            return k
    raise MalformedMap("segment crosses a vertex")


def chain_segment_pieces(source, target, r, seg):
    """Pieces for one chain segment ``(src_chain, s0, s1, dst_chain, d0,
    reversed)``: chain position ``s`` in ``[s0, s1]`` goes to position
    ``d0 +- r (s - s0)`` on ``dst_chain``."""
    sc, s0, s1, dc, d0, rev = seg
    s0, s1, d0 = to_ext(s0), to_ext(s1), to_ext(d0)
    sign = -1 if rev else 1
    sb = chain_boundaries(source, sc)
    db = chain_boundaries(target, dc)

    def img(s):
        if is_inf(s):
            return NEG_INF if rev else INF
        return d0 + sign * r * (s - s0)

    cuts = {s0, s1}
    cuts.update(x for x in sb if s0 < x < s1)
    for y in db:
        if is_inf(y):
            continue
        s = s0 + sign * (y - d0) / r
        if s0 < s < s1:
            cuts.add(s)
    cuts = sorted(cuts)
    pieces = []
    for p, q in zip(cuts, cuts[1:]):
        k = _step_index(sb, p, q)
        eid, fwd = sc.steps[k]
        e = source.edges[eid]
        if fwd:
            a, b, pos_a = p - sb[k], (q - sb[k]) if not is_inf(q) else INF, p
        else:
            a, b, pos_a = e.length - (q - sb[k]), e.length - (p - sb[k]), q
        ylo, yhi = sorted((img(p), img(q)))
        j = _step_index(db, ylo, yhi)
        did, dfwd = dc.steps[j]
        f = target.edges[did]
        y = img(pos_a)
        c = (y - db[j]) if dfwd else f.length - (y - db[j])
        direction = (1 if fwd else -1) * sign * (1 if dfwd else -1)
        pieces.append(Piece(eid, a, b, did, c, direction < 0))
    return pieces


def from_chain_segments(source, target, r, segments, validate=True):
    r = to_ext(r)
    pieces = []
    for seg in segments:
        pieces.extend(chain_segment_pieces(source, target, r, seg))
    if validate:
        return make_expansive(source, target, r, pieces)
    return ExpansiveMap(source, target, r, pieces)


def circle_rotation(curve, theta, reflect=False):
    """Rotation of a circle by ``theta`` (optionally followed by the
    reflection fixing the canonical vertex's image)."""
    (chain,) = canonical_chains(curve)
    if chain.start != chain.end:
        raise MapError("not a circle")
    C = chain.length
    theta = to_ext(theta) % C
    if not reflect:
        segs = [(chain, 0, C - theta, chain, theta, False), (chain, C - theta, C, chain, 0, False)]
    else:
        segs = [(chain, 0, theta, chain, theta, True), (chain, theta, C, chain, C, True)]
    segs = [s for s in segs if s[1] < s[2]]
    return from_chain_segments(curve, curve, 1, segs)


def star_rays(curve):
    if not curve.edges or not is_star_infinite(curve):
        raise NotStarInfinite("the curve is not a star of infinite rays")
    return canonical_chains(curve)


def star_map(curve, perm, r=1):
    """Send ray ``i`` onto ray ``perm[i]`` with stretch ``r``, fixing the
    centre."""
    rays = star_rays(curve)
    if sorted(perm) != list(range(len(rays))):
        raise MapError("perm must be a permutation of the ray indices")
    segs = [(rays[i], 0, INF, rays[perm[i]], 0, False) for i in range(len(rays))]
    return from_chain_segments(curve, curve, r, segs)


def _line_chains(curve):
    rays = star_rays(curve)
    if len(rays) != 2:
        raise MapError("not a doubly infinite path")
    return rays


def line_point(curve, y):
    """The point with real coordinate ``y``; the first canonical chain is the
    negative half-line."""
    neg, pos = _line_chains(curve)
    y = to_ext(y)
    return chain_locate(curve, pos, y) if y >= 0 else chain_locate(curve, neg, -y)


def line_coordinate(curve, p):
    neg, pos = _line_chains(curve)
    hits = chain_position(curve, pos, p)
    if hits:
        return hits[0]
    return -chain_position(curve, neg, p)[0]


def line_affine(curve, r=1, flip=False, shift=0):
    """The map ``y -> (-1)^flip * r * y + shift`` of the doubly infinite path."""
    neg, pos = _line_chains(curve)
    r, shift = to_ext(r), to_ext(shift)
    sigma = -1 if flip else 1
    y0 = -shift / (sigma * r)
    cuts = sorted({Fraction(0), y0})
    reals = [(NEG_INF, cuts[0])] + list(zip(cuts, cuts[1:])) + [(cuts[-1], INF)]
    segs = []
    for alpha, beta in reals:
        if not alpha < beta:
            continue
        inner = beta - 1 if is_inf(alpha) else (alpha + 1 if is_inf(beta) else (alpha + beta) / 2)
        src_pos = inner >= 0
        # source chain parameter s runs from s0 to s1
        if src_pos:
            sc, s0, s1, y_at_s0, dyds = pos, alpha, beta, alpha, 1
        else:
            sc, s0, s1, y_at_s0, dyds = neg, -beta, -alpha, beta, -1
        z_inner = sigma * r * inner + shift
        dst_pos = z_inner >= 0
        z0 = sigma * r * y_at_s0 + shift
        dc, d0, dpos = (pos, z0, 1) if dst_pos else (neg, -z0, -1)
        rev = dyds * sigma * dpos < 0
        segs.append((sc, s0, s1, dc, d0, rev))
    return from_chain_segments(curve, curve, r, segs)


def translation(curve, x):
    return line_affine(curve, 1, False, x)


def inversion(curve, about=0):
    """Reflection of the doubly infinite path about the point ``about``."""
    return line_affine(curve, 1, True, 2 * to_ext(about))


def line_dilation(curve, r):
    return line_affine(curve, r, False, 0)


def line_fixed_point(m):
    """The unique finite fixed point of an ``r``-expansive self-map of the
    doubly infinite path with ``r != 1``: ``phi(0)/(1-r)`` when the ends are
    kept, ``phi(0)/(1+r)`` when they are swapped."""
    curve = m.source
    if m.r == 1:
        raise MapError("a 1-expansive map need not have a unique fixed point")
    phi0 = line_coordinate(curve, apply(m, line_point(curve, 0)))
    neg, pos = _line_chains(curve)
    keeps = apply(m, Point(vertex=pos.end)) == Point(vertex=pos.end)
    return phi0 / (1 - m.r) if keeps else phi0 / (1 + m.r)


# -- automorphism groups of star-shaped curves ----------------------------------------------

def singleton_dilation(curve, r):
    return ExpansiveMap(curve, curve, to_ext(r), ())


def star_aut_generators(curve):
    """Generators of Aut(Γ) for a star of infinite rays: adjacent ray
    transpositions when there are n != 2 rays, the unit translation and the
    inversion about the centre when n = 2."""
    if not curve.edges:
        if not is_star_infinite(curve):
            raise NotStarInfinite("the curve is not a star of infinite rays")
        return [identity(curve)]
    rays = star_rays(curve)
    n = len(rays)
    if n == 1:
        return [identity(curve)]
    if n == 2:
        return [translation(curve, 1), inversion(curve)]
    gens = []
    for i in range(n - 1):
        perm = list(range(n))
        perm[i], perm[i + 1] = perm[i + 1], perm[i]
        gens.append(star_map(curve, perm))
    return gens


def group_closure(generators, limit=10000):
    """All maps generated by ``generators`` under composition (a finite group
    is assumed; ``limit`` guards against infinite ones)."""
    if not generators:
        return []
    curve = generators[0].source
    ident = identity(curve) if curve.edges else singleton_dilation(curve, 1)
    probe = sample_points(curve)

    def key(m):
        return (m.r, tuple(apply(m, p) for p in probe))

    found = {key(ident): ident}
    todo = deque([ident])
    while todo:
        m = todo.popleft()
        for g in generators:
            h = compose(g, m)
            k = key(h)
            if k not in found:
                found[k] = h
                todo.append(h)
                if len(found) > limit:
                    raise MapError("closure exceeds limit; the group may be infinite")
    return list(found.values())


def has_nonunit_dilation(curve):
    """``(True, witness)`` with a 2-expansive self-map when the curve is
    star-infinite, else ``(False, None)``."""
    if not is_star_infinite(curve):
        return False, None
    if not curve.edges:
        return True, singleton_dilation(curve, 2)
    return True, star_map(curve, list(range(len(star_rays(curve)))), 2)


def combinatorial_maps(curve, r):
    """All validated ``r``-expansive self-maps that send canonical chains
    onto canonical chains affinely (the symmetries of the canonical model
    rescaled by ``r``)."""
    r = to_ext(r)
    if not curve.edges:
        return [singleton_dilation(curve, r)]
    verts = curve.canonical.vertices
    chains = canonical_chains(curve)
    out = []
    for image in permutations(verts):
        sigma = dict(zip(verts, image))
        if any(curve.degree(v) != curve.degree(sigma[v]) or
               ((v in curve.inf_points) != (sigma[v] in curve.inf_points)) for v in verts):
            continue
        for segs in _assign_chains(curve, chains, sigma, r, 0, set()):
            try:
                out.append(from_chain_segments(curve, curve, r, segs))
            except MapError:
                continue
    return out


def _assign_chains(curve, chains, sigma, r, k, used):
    if k == len(chains):
        yield []
        return
    c = chains[k]
    want = c.length if is_inf(c.length) else r * c.length
    for j, d in enumerate(chains):
        if j in used or d.length != want:
            continue
        options = []
        if (sigma[c.start], sigma[c.end]) == (d.start, d.end):
            options.append((c, 0, c.length, d, 0, False))
        if not is_inf(c.length) and (sigma[c.start], sigma[c.end]) == (d.end, d.start):
            options.append((c, 0, c.length, d, d.length, True))
        for seg in options:
            for rest in _assign_chains(curve, chains, sigma, r, k + 1, used | {j}):
                yield [seg] + rest


# -- finite harmonic morphisms ----------------------------------------------------------------

@dataclass(frozen=True)
class HarmonicMorphismData:
    source: object
    target: object
    vertex_map: dict
    edge_map: dict
    edge_degrees: dict
    degree: int = None


def verify_harmonic(data):
    """Check the four harmonic-morphism clauses and return the degree."""
    src, tgt = data.source, data.target
    if not src.edges and not tgt.edges:
        d = data.degree
        if not isinstance(d, int) or d < 1:
            raise NotHarmonic(3, "a singleton map needs a declared positive degree")
        return d
    for c in (src, tgt):
        if any(e.is_loop for e in c.model.edges):
            raise LoopyModel("harmonic morphisms are checked on loopless models")
    vmap, emap, degs = data.vertex_map, data.edge_map, data.edge_degrees

    for v in src.vertices:
        if vmap.get(v) not in tgt.vertices:
            raise NotHarmonic(1, f"vertex {v} does not map to a vertex")
    for eid, e in src.edges.items():
        f = tgt.edges.get(emap.get(eid))
        if f is None:
            raise NotHarmonic(2, f"edge {eid} does not map to an edge")
        if {vmap[e.u], vmap[e.v]} != {f.u, f.v}:
            raise NotHarmonic(2, f"endpoints of {eid} do not map to the endpoints of {f.id}")
    for eid, e in src.edges.items():
        d = degs.get(eid)
        if not isinstance(d, int) or isinstance(d, bool) or d < 1:
            raise NotHarmonic(3, f"edge {eid} needs a positive integer stretch, got {d!r}")
        f = tgt.edges[emap[eid]]
        if e.is_infinite != f.is_infinite or (not e.is_infinite and f.length != d * e.length):
            raise NotHarmonic(3, f"{f.id} does not have {d} times the length of {eid}")

    local = {}
    for v in src.vertices:
        sums = {}
        for fid, _ in tgt.incident(vmap[v]):
            sums[fid] = 0
        for eid, _ in src.incident(v):
            sums[emap[eid]] = sums.get(emap[eid], 0) + degs[eid]
        values = set(sums.values())
        if len(values) != 1:
            raise NotHarmonic(4, f"the local degree at {v} depends on the target edge: {sums}")
        local[v] = values.pop()
    totals = {w: 0 for w in tgt.vertices}
    for v, d in local.items():
        totals[vmap[v]] += d
    values = set(totals.values())
    if len(values) != 1 or 0 in values:
        raise NotHarmonic(4, f"fibre degrees differ between target vertices: {totals}")
    return values.pop()


def harmonic_data(m):
    """Loopless model data for an expansive map with integer factor, obtained
    by subdividing at piece boundaries and piece midpoints."""
    if m.r.denominator != 1:
        raise MapError("only integer factors give integer edge stretches")
    src, tgt = m.source, m.target
    if not src.edges:
        return HarmonicMorphismData(src, tgt, {src.vertices[0]: tgt.vertices[0]}, {}, {}, int(m.r))
    scuts, tcuts = {}, {}
    marks = []
    for piece in m.pieces:
        mid = piece.a + 1 if is_inf(piece.b) else (piece.a + piece.b) / 2
        for t in (piece.a, mid, piece.b):
            p = src.point(piece.src_edge, t)
            marks.append(p)
            if p.vertex is None:
                scuts.setdefault(p.edge, []).append(p.offset)
            q = apply(m, p)
            if q.vertex is None:
                tcuts.setdefault(q.edge, []).append(q.offset)
    S, lift_s = subdivide(src, scuts)
    T, lift_t = subdivide(tgt, tcuts)
    vmap = {}
    for p in marks + [Point(vertex=v) for v in src.vertices]:
        vmap[lift_s(p).vertex] = lift_t(apply(m, p)).vertex
    emap = {}
    for piece in m.pieces:
        for lo, hi in _halves(piece):
            inner = lo + 1 if is_inf(hi) else (lo + hi) / 2
            sp = lift_s(src.point(piece.src_edge, inner))
            tp = lift_t(apply(m, src.point(piece.src_edge, inner)))
            emap[sp.edge] = tp.edge
    degs = {eid: int(m.r) for eid in S.edges}
    return HarmonicMorphismData(S, T, vmap, emap, degs)


def _halves(piece):
    mid = piece.a + 1 if is_inf(piece.b) else (piece.a + piece.b) / 2
    return [(piece.a, mid), (mid, piece.b)]

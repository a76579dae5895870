"""Semiring isomorphisms ``Rat(Γ1) -> Rat(Γ2)``.

Two directions are covered.  :func:`pullback` turns an r-expansive map into
the isomorphism ``f -> (r f) ∘ φ^{-1}``.  :func:`recover_map` goes the other
way: it treats an isomorphism as a black box, reads off ``r`` from the image
of the constant 1, and locates the image of each sample point by probing with
chip-firing moves.
"""

from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from fractions import Fraction

from .chipfire import cf_point, cf_tail
from .curve import (
    Point,
    canonical_chains,
    canonical_vertices,
    chain_locate,
    chain_position,
    distance,
    injectivity_radius,
    tail_chain,
    valence,
)
from .errors import (
    ArgmaxAtInfinity,
    CurveMismatch,
    MissingCanonicalSamples,
    MultipleInfinitePoles,
    NonConstantImageOfConstant,
    NonPositiveFactor,
    ProbeDivergence,
    RecoveryError,
    TropicalError,
    ValenceMismatch,
)
from .ext import NEG_INF, ext_scale, fmt_ext, is_inf, to_ext
from .morphism import apply as apply_map, inverse
from .ratfun import (
    _sampled,
    argmax_set,
    argmin_set,
    bottom,
    constant,
    divisor,
    is_constant,
    max_value,
    min_value,
    odot,
    oplus,
)

EPS_RETRY_BUDGET = 64
TAIL_RETRY_BUDGET = 32


class SemifieldMapOracle(ABC):
    """A map ``Rat(source) -> Rat(target)`` queried one function at a time.

    Implementations must be pure; recovery only ever calls :meth:`apply`.
    """

    source = None
    target = None

    @abstractmethod
    def apply(self, f):
        ...

    def __call__(self, f):
        return self.apply(f)


class PullbackMap(SemifieldMapOracle):
    """``f -> (r f) ∘ φ^{-1}`` for an r-expansive map φ."""

    def __init__(self, phi):
        self.phi = phi
        self.r = phi.r
        self.source = phi.source
        self.target = phi.target
        self._inv = inverse(phi)

    def apply(self, f):
        if f.curve != self.source:
            raise CurveMismatch("function is not on the source curve")
        if f.is_bottom:
            return bottom(self.target)
        r = self.r
        if not self.target.edges:
            (value,) = f.vertex_values.values()
            return constant(self.target, r * value)
        offsets = {}
        for q in self._inv.pieces:
            src = f.pieces[q.dst_edge]
            ts = offsets.setdefault(q.src_edge, [])
            ts.append(q.a)
            if not is_inf(q.b):
                ts.append(q.b)
            lo, hi = q.image_range(self._inv.r)
            for s in src.offsets:
                if lo <= s <= hi:
                    ts.append(q.preimage_offset(s, self._inv.r))

        def value_at(eid, t):
            q = self._inv.piece_at(eid, t)
            return r * f.pieces[q.dst_edge].value(q.image_offset(t, self._inv.r))

        return _sampled(self.target, offsets, value_at)


class ComposedOracle(SemifieldMapOracle):
    """``second ∘ first``."""

    def __init__(self, second, first):
        if first.target != second.source:
            raise CurveMismatch("oracles do not compose")
        self.first, self.second = first, second
        self.source, self.target = first.source, second.target

    def apply(self, f):
        return self.second.apply(self.first.apply(f))


class CorruptedOracle(SemifieldMapOracle):
    """``base`` with the image of the single function ``victim`` shifted by
    the constant ``delta``; a negative control for the law checks."""

    def __init__(self, base, victim, delta=Fraction(1, 7)):
        self.base, self.victim, self.delta = base, victim, to_ext(delta)
        self.source, self.target = base.source, base.target

    def apply(self, f):
        g = self.base.apply(f)
        if f == self.victim and not g.is_bottom:
            g = odot(g, constant(self.target, self.delta))
        return g


def pullback(phi):
    return PullbackMap(phi)


# -- recovery -------------------------------------------------------------------------

def recover_factor(psi):
    """``r = psi(1)``, checked to be a positive constant with
    ``psi(t) = r t`` for a few more constants."""
    g = psi.apply(constant(psi.source, 1))
    if g.is_bottom or not is_constant(g):
        raise NonConstantImageOfConstant("the image of the constant 1 is not a constant")
    r = max_value(g)
    if is_inf(r) or r <= 0:
        raise NonPositiveFactor(f"psi(1) = {fmt_ext(r)} is not positive")
    for t in (Fraction(-1), Fraction(2), Fraction(1, 3)):
        if psi.apply(constant(psi.source, t)) != constant(psi.target, r * t):
            raise NonConstantImageOfConstant(f"psi({fmt_ext(t)}) is not the constant {fmt_ext(r * t)}")
    return r


@dataclass
class Probe:
    """One probe attempt.  For point probes ``param`` is ε and ``locus`` the
    argmax set; for tail probes they are dist(y, last vertex) and the argmin
    set."""

    param: object
    locus: str
    accepted: bool
    note: str = ""
    tail: bool = False

    def to_json(self):
        keys = ("y_distance", "argmin") if self.tail else ("eps", "argmax")
        return {keys[0]: fmt_ext(self.param), keys[1]: self.locus,
                "accepted": self.accepted, "note": self.note}


def recover_point(psi, x, r=None):
    """Image of the finite point ``x``: probe with ``CF({x}; eps)`` and accept
    once the image is ``CF({x'}; r eps)`` for a single finite point ``x'`` of
    the same valence.  Returns ``(x', transcript)``."""
    src, tgt = psi.source, psi.target
    src.check(x)
    if r is None:
        r = recover_factor(psi)
    if not src.edges:
        return Point(vertex=tgt.vertices[0]), []
    eps = min(injectivity_radius(src, x), Fraction(1)) / 2
    transcript = []
    for _ in range(EPS_RETRY_BUDGET):
        f = cf_point(src, x, eps)
        g = psi.apply(f)
        if g.is_bottom:
            transcript.append(Probe(eps, "-", False, "image is bottom"))
            eps /= 2
            continue
        peak = argmax_set(g)
        xp = peak.single_point()
        if xp is None:
            transcript.append(Probe(eps, str(peak), False, "argmax is not a single point"))
            eps /= 2
            continue
        if tgt.is_at_infinity(xp):
            transcript.append(Probe(eps, str(peak), False, "argmax at infinity"))
            raise ArgmaxAtInfinity(f"probe image of {x} peaks at the point at infinity {xp}")
        expected = cf_point(tgt, xp, r * eps)
        if g != expected:
            transcript.append(Probe(eps, str(peak), False, "image is not a point chip-firing move"))
            eps /= 2
            continue
        if valence(src, x) != valence(tgt, xp):
            transcript.append(Probe(eps, str(peak), False, "valence mismatch"))
            raise ValenceMismatch(f"val({x}) = {valence(src, x)} but val({xp}) = {valence(tgt, xp)}")
        transcript.append(Probe(eps, str(peak), True))
        return xp, transcript
    raise ProbeDivergence(f"no acceptable probe for {x} within {EPS_RETRY_BUDGET} attempts")


def recover_point_at_infinity(psi, x, r=None):
    """Image of the point at infinity ``x``, found by probing with
    ``CF(Γ1 \\ (y, x]; inf)``.  Returns ``(x', (y, y'), transcript)``."""
    src, tgt = psi.source, psi.target
    if r is None:
        r = recover_factor(psi)
    chain = tail_chain(src, x)
    transcript = []
    s = Fraction(1)
    for _ in range(TAIL_RETRY_BUDGET):
        y = chain_locate(src, chain, s)
        g = psi.apply(cf_tail(src, y, x))
        if g.is_bottom or min_value(g) != NEG_INF:
            transcript.append(Probe(s, "-", False, "image does not reach -inf", tail=True))
            s *= 2
            continue
        low = argmin_set(g)
        poles = [p for p in low.points if tgt.is_at_infinity(p)]
        if len(poles) > 1:
            raise MultipleInfinitePoles(f"probe image for {x} tends to -inf at {len(poles)} points")
        xp = low.single_point()
        if xp is None or not tgt.is_at_infinity(xp):
            transcript.append(Probe(s, str(low), False, "argmin is not a single point at infinity", tail=True))
            s *= 2
            continue
        yp, _ = recover_point(psi, y, r)
        if not chain_position(tgt, tail_chain(tgt, xp), yp) or g != cf_tail(tgt, yp, xp):
            transcript.append(Probe(s, str(low), False, "image is not the tail move from y'", tail=True))
            s *= 2
            continue
        transcript.append(Probe(s, str(low), True, tail=True))
        return xp, (y, yp), transcript
    raise ProbeDivergence(f"no acceptable tail probe for {x} within {TAIL_RETRY_BUDGET} attempts")


@dataclass
class RecoveryReport:
    factor: object = None
    pairs: list = field(default_factory=list)
    transcripts: dict = field(default_factory=dict)
    anchors: dict = field(default_factory=dict)
    diagnostics: list = field(default_factory=list)
    success: bool = False

    def image_of(self, p):
        for x, xp in self.pairs:
            if x == p:
                return xp
        raise KeyError(p)

    def to_json(self):
        return {
            "success": self.success,
            "r": None if self.factor is None else fmt_ext(self.factor),
            "pairs": [[str(x), str(xp)] for x, xp in self.pairs],
            "anchors": {str(k): [str(y), str(yp)] for k, (y, yp) in self.anchors.items()},
            "probes": {str(k): [p.to_json() for p in v] for k, v in self.transcripts.items()},
            "diagnostics": list(self.diagnostics),
        }


def recover_map(psi, samples):
    """Recover the expansive map behind ``psi`` on ``samples``, which must
    contain every canonical vertex of the source curve."""
    src, tgt = psi.source, psi.target
    samples = list(dict.fromkeys(src.check(p) for p in samples))
    missing = [p for p in canonical_vertices(src) if p not in samples]
    if missing:
        raise MissingCanonicalSamples(
            "samples must include all canonical vertices; missing " + ", ".join(map(str, missing)))
    report = RecoveryReport()
    try:
        r = recover_factor(psi)
    except RecoveryError as exc:
        report.diagnostics.append(f"factor: {exc}")
        return report
    report.factor = r
    for x in samples:
        try:
            if src.is_at_infinity(x):
                xp, anchor, trans = recover_point_at_infinity(psi, x, r)
                report.anchors[x] = anchor
            else:
                xp, trans = recover_point(psi, x, r)
        except TropicalError as exc:
            report.diagnostics.append(f"{x}: {type(exc).__name__}: {exc}")
            continue
        report.pairs.append((x, xp))
        report.transcripts[x] = trans
    ok = len(report.pairs) == len(samples)
    for i, (x, xp) in enumerate(report.pairs):
        for y, yp in report.pairs[i + 1:]:
            want = ext_scale(r, distance(src, x, y))
            got = distance(tgt, xp, yp)
            if got != want:
                ok = False
                report.diagnostics.append(
                    f"dist({xp}, {yp}) = {fmt_ext(got)} but r*dist({x}, {y}) = {fmt_ext(want)}")
    images = [xp for _, xp in report.pairs]
    if len(set(images)) != len(images):
        ok = False
        report.diagnostics.append("two samples recovered to the same point")
    report.success = ok
    return report


# -- verification suites ----------------------------------------------------------------

@dataclass
class LawCheck:
    ok: bool
    law: str = None
    witness: object = None

    def __bool__(self):
        return self.ok


def check_hom_laws(psi, f, g):
    """Exact check that ``psi`` preserves (+), (.), bottom and the constant 0
    on the pair ``(f, g)``."""
    src, tgt = psi.source, psi.target
    pf, pg = psi.apply(f), psi.apply(g)
    if psi.apply(oplus(f, g)) != oplus(pf, pg):
        return LawCheck(False, "oplus", (f, g))
    if psi.apply(odot(f, g)) != odot(pf, pg):
        return LawCheck(False, "odot", (f, g))
    if psi.apply(bottom(src)) != bottom(tgt):
        return LawCheck(False, "bottom", None)
    if psi.apply(constant(src, 0)) != constant(tgt, 0):
        return LawCheck(False, "zero", None)
    return LawCheck(True)


def check_lemma4(psi, f, r=None):
    """Max and min of ``psi(f)`` are ``r`` times those of ``f``."""
    if r is None:
        r = recover_factor(psi)
    g = psi.apply(f)
    return (max_value(g) == ext_scale(r, max_value(f))
            and min_value(g) == ext_scale(r, min_value(f)))


def check_divisor_correspondence(psi, phi, f):
    """``div(psi(f))`` is the pushforward of ``div(f)`` along ``phi``."""
    g = psi.apply(f)
    if f.is_bottom or g.is_bottom:
        return f.is_bottom and g.is_bottom
    return divisor(g) == divisor(f).pushforward(lambda p: apply_map(phi, p))


def shrink_image_identity(psi, f, delta, r=None):
    """``psi(f (+) -delta) == psi(f) (+) -r delta``."""
    if r is None:
        r = recover_factor(psi)
    delta = to_ext(delta)
    lhs = psi.apply(oplus(f, constant(psi.source, -delta)))
    rhs = oplus(psi.apply(f), constant(psi.target, -r * delta))
    return lhs == rhs


def default_samples(curve, extra=()):
    """Canonical vertices, one interior point per canonical chain, and
    ``extra``."""
    pts = list(canonical_vertices(curve))
    for c in canonical_chains(curve):
        s = Fraction(1) if is_inf(c.length) else c.length / 2
        pts.append(chain_locate(curve, c, s))
    pts.extend(extra)
    return list(dict.fromkeys(pts))


__all__ = [
    "SemifieldMapOracle", "PullbackMap", "ComposedOracle", "CorruptedOracle", "pullback", "recover_factor",
    "recover_point", "recover_point_at_infinity", "recover_map", "RecoveryReport",
    "check_hom_laws", "check_lemma4", "check_divisor_correspondence", "LawCheck",
    "shrink_image_identity", "default_samples",
]

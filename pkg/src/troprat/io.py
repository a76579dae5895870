"""JSON encodings of curves, functions, maps, subgraphs and harmonic data.

Rationals are strings (``"5/2"``, ``"3"``, ``"inf"``), so a parse followed by
a print is byte-identical to the input whenever the input was itself printed
by this module.  Nested curves may be given inline or as a file path.
"""

import json
from pathlib import Path

from .chipfire import make_subgraph
from .curve import Edge, Model, build_curve
from .errors import MalformedMap, MalformedModel, TropicalError
from .ext import fmt_ext, to_ext
from .morphism import HarmonicMorphismData, Piece, make_expansive
from .ratfun import bottom, constant, from_breakpoints


class FormatError(TropicalError):
    """Input that is not valid JSON for the expected document type."""


def dumps(doc):
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def _load(src, base=None):
    """A JSON document from a dict, a JSON string or a path."""
    if isinstance(src, dict):
        return src
    if isinstance(src, Path) or (isinstance(src, str) and not src.lstrip().startswith("{")):
        path = Path(src)
        if base is not None and not path.is_absolute():
            path = Path(base) / path
        try:
            text = path.read_text()
        except OSError as exc:
            raise FormatError(f"cannot read {path}: {exc.strerror}") from None
        return _parse_text(text, str(path))
    return _parse_text(src, "<string>")


def _parse_text(text, where):
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"{where}: {exc}") from None
    if not isinstance(doc, dict):
        raise FormatError(f"{where}: expected a JSON object")
    return doc


def _field(doc, key, kind="document"):
    try:
        return doc[key]
    except (KeyError, TypeError):
        raise FormatError(f"{kind} is missing {key!r}") from None


# -- curves -----------------------------------------------------------------------------

def curve_to_json(curve):
    edges = []
    for e in curve.model.edges:
        item = {"id": e.id, "ends": [e.u, e.v], "length": fmt_ext(e.length)}
        if e.inf_end is not None:
            item["inf_end"] = e.inf_end
        edges.append(item)
    return {"vertices": list(curve.vertices), "edges": edges}


def curve_from_json(src, base=None):
    doc = _load(src, base)
    edges = []
    for item in doc.get("edges", []):
        ends = _field(item, "ends", "edge")
        if not isinstance(ends, list) or len(ends) != 2:
            raise MalformedModel(f"edge {item.get('id')!r} needs exactly two ends")
        edges.append(Edge(str(_field(item, "id", "edge")), str(ends[0]), str(ends[1]),
                          to_ext(_field(item, "length", "edge")), item.get("inf_end")))
    return build_curve(Model([str(v) for v in _field(doc, "vertices", "curve")], edges))


def _curve_ref(doc, key, base):
    ref = _field(doc, key)
    if isinstance(ref, str):
        return curve_from_json(ref, base)
    return curve_from_json(ref)


# -- functions --------------------------------------------------------------------------

def function_to_json(f):
    doc = {"curve": curve_to_json(f.curve), "bottom": f.is_bottom}
    if f.is_bottom:
        return doc
    if not f.curve.edges:
        (value,) = set(f.vertex_values.values())
        doc["value"] = fmt_ext(value)
        return doc
    segs = {}
    for eid in sorted(f.pieces):
        piece = f.pieces[eid]
        seg = {"breaks": [{"at": fmt_ext(t), "value": fmt_ext(v)}
                          for t, v in zip(piece.offsets, piece.values)]}
        if piece.tail is not None:
            seg["tail_slope"] = piece.tail
        segs[eid] = seg
    doc["segments"] = segs
    return doc


def function_from_json(src, base=None, curve=None):
    doc = _load(src, base)
    if curve is None:
        curve = _curve_ref(doc, "curve", base)
    if doc.get("bottom", False):
        return bottom(curve)
    if not curve.edges:
        return constant(curve, _field(doc, "value", "function"))
    data = {}
    for eid, seg in _field(doc, "segments", "function").items():
        pts = [(_field(b, "at", "break"), _field(b, "value", "break")) for b in _field(seg, "breaks", "segment")]
        data[eid] = (pts, seg.get("tail_slope"))
    return from_breakpoints(curve, data)


# -- subgraphs ------------------------------------------------------------------------------

def subgraph_from_json(src, curve, base=None):
    """``{"intervals": [[edge, a, b], ...], "points": ["v0", "e1@1/2", ...]}``."""
    doc = _load(src, base)
    intervals = [tuple(iv) for iv in doc.get("intervals", [])]
    points = [curve.parse_point(p) for p in doc.get("points", [])]
    return make_subgraph(curve, intervals, points)


# -- maps ----------------------------------------------------------------------------------

def map_to_json(m):
    pieces = [{"src_edge": p.src_edge, "src_range": [fmt_ext(p.a), fmt_ext(p.b)],
               "dst_edge": p.dst_edge, "dst_start": fmt_ext(p.c), "reversed": p.reversed}
              for p in m.pieces]
    return {"source": curve_to_json(m.source), "target": curve_to_json(m.target),
            "r": fmt_ext(m.r), "pieces": pieces}


def map_from_json(src, base=None):
    doc = _load(src, base)
    source = _curve_ref(doc, "source", base)
    target = _curve_ref(doc, "target", base)
    pieces = []
    for item in doc.get("pieces", []):
        rng = _field(item, "src_range", "piece")
        if not isinstance(rng, list) or len(rng) != 2:
            raise MalformedMap("src_range needs two entries")
        pieces.append(Piece(str(_field(item, "src_edge", "piece")), to_ext(rng[0]), to_ext(rng[1]),
                            str(_field(item, "dst_edge", "piece")),
                            to_ext(_field(item, "dst_start", "piece")), bool(item.get("reversed", False))))
    return make_expansive(source, target, to_ext(_field(doc, "r", "map")), pieces)


# -- harmonic morphism data ---------------------------------------------------------------

def harmonic_to_json(data):
    doc = {"source": curve_to_json(data.source), "target": curve_to_json(data.target),
           "vertex_map": dict(sorted(data.vertex_map.items())),
           "edge_map": dict(sorted(data.edge_map.items())),
           "edge_degrees": dict(sorted(data.edge_degrees.items()))}
    if data.degree is not None:
        doc["degree"] = data.degree
    return doc


def harmonic_from_json(src, base=None):
    doc = _load(src, base)
    # degrees are passed through unchecked so clause (3) can report bad values
    return HarmonicMorphismData(
        _curve_ref(doc, "source", base), _curve_ref(doc, "target", base),
        dict(doc.get("vertex_map", {})), dict(doc.get("edge_map", {})),
        dict(doc.get("edge_degrees", {})), doc.get("degree"))


def points_from_text(text, curve):
    """One point per non-empty line; ``#`` starts a comment."""
    out = []
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            out.append(curve.parse_point(line))
    return out


__all__ = [
    "FormatError", "dumps", "curve_to_json", "curve_from_json", "function_to_json",
    "function_from_json", "subgraph_from_json", "map_to_json", "map_from_json",
    "harmonic_to_json", "harmonic_from_json", "points_from_text",
]

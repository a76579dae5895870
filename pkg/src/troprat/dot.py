"""Graphviz export for figures."""

from .curve import Point
from .ext import fmt_ext


def _label(x):
    return fmt_ext(x).replace("inf", "∞").replace("-", "−")


def _order(n):
    return f"+{n}" if n > 0 else f"−{-n}"


def _quote(s):
    return '"' + str(s).replace("\\", "\\\\").replace('"', '\\"') + '"'


def export_dot(curve, f=None, divisor=None):
    """A DOT graph of ``curve``.

    Edges are labeled with their lengths; with ``f`` the breakpoints
    ``offset:value`` follow (a bottom function labels every edge "−∞");
    with ``divisor`` each support point gets its order, interior points
    becoming extra small nodes.
    """
    lines = ["graph curve {", "  node [shape=circle];"]
    orders = dict(divisor.items()) if divisor is not None else {}
    for v in curve.vertices:
        n = orders.get(Point(vertex=v))
        attrs = [f"label={_quote(v if n is None else f'{v} {_order(n)}')}"]
        if v in curve.inf_points:
            attrs.append("shape=doublecircle")
        lines.append(f"  {_quote(v)} [{', '.join(attrs)}];")
    for p, n in sorted(orders.items(), key=lambda kv: kv[0].sort_key()):
        if p.vertex is None:
            lines.append(f"  {_quote(str(p))} [shape=point, xlabel={_quote(_order(n))}];")
    for eid in sorted(curve.edges):
        e = curve.edges[eid]
        label = _label(e.length)
        if f is not None:
            if f.is_bottom:
                label += " | −∞"
            else:
                piece = f.pieces[eid]
                bps = " ".join(f"{_label(t)}:{_label(v)}" for t, v in zip(piece.offsets, piece.values))
                if piece.tail is not None:
                    bps += f" tail {piece.tail}"
                label += " | " + bps
        inner = sorted((p for p in orders if p.edge == eid), key=lambda p: p.offset)
        chain = [e.u] + [str(p) for p in inner] + [e.v]
        for k in range(len(chain) - 1):
            attrs = f" [label={_quote(label)}]" if k == 0 else ""
            lines.append(f"  {_quote(chain[k])} -- {_quote(chain[k + 1])}{attrs};")
    lines.append("}")
    return "\n".join(lines) + "\n"


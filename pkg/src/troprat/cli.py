"""Command-line front end.

Every subcommand prints JSON (or DOT / a bare number where noted) to stdout,
or to ``--out``.  Exit status is 0 on success, 1 on a domain error (with an
error document on stdout) and 2 on a usage error.  Curve arguments accept a
path or, when no such file exists, a fixture name such as ``star3.json`` or
``THETA``.
"""

import argparse
import json
import random
import sys
from pathlib import Path

from . import fixtures
from .chipfire import cf, cf_point, cf_tail
from .curve import canonical_curve, genus, is_star_infinite
from .dot import export_dot
from .errors import BottomFunction, CurveMismatch, TropicalError
from .ext import fmt_ext, to_ext
from .io import (
    FormatError,
    curve_from_json,
    curve_to_json,
    dumps,
    function_from_json,
    function_to_json,
    harmonic_from_json,
    map_from_json,
    map_to_json,
    points_from_text,
    subgraph_from_json,
)
from .morphism import (
    compose,
    group_closure,
    harmonic_data,
    has_nonunit_dilation,
    is_automorphism,
    star_aut_generators,
    verify_harmonic,
)
from .randgen import DEFAULT_SEED, random_function, random_probe
from .ratfun import argmax_set, argmin_set, divisor, max_value, min_value, odot, oinv, oplus
from .semiso import (
    check_divisor_correspondence,
    check_hom_laws,
    check_lemma4,
    default_samples,
    pullback,
    recover_map,
)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(2, f"{self.prog}: error: {message}\n")


def _read_doc(path):
    """Parsed JSON from ``path``, falling back to a bundled fixture name."""
    p = Path(path)
    if p.exists():
        try:
            return json.loads(p.read_text()), p.parent
        except json.JSONDecodeError as exc:
            raise FormatError(f"{path}: {exc}") from None
    name = p.stem.upper()
    if name in fixtures.FIXTURES:
        return curve_to_json(fixtures.fixture(name)), None
    raise FormatError(f"no such file or fixture: {path}")


def _curve(path):
    doc, _ = _read_doc(path)
    return curve_from_json(doc)


def _function(path, curve=None):
    doc, base = _read_doc(path)
    f = function_from_json(doc, base)
    if curve is not None and f.curve != curve:
        raise CurveMismatch(f"{path} is a function on a different curve")
    return f


def _map(path):
    doc, base = _read_doc(path)
    return map_from_json(doc, base)


def _divisor_json(d):
    return {str(p): n for p, n in sorted(d.items(), key=lambda kv: kv[0].sort_key())}


# -- subcommands ------------------------------------------------------------------------

def cmd_genus(a):
    return str(genus(_curve(a.curve))) + "\n"


def cmd_canonical_model(a):
    return dumps(curve_to_json(canonical_curve(_curve(a.curve))))


def cmd_eval(a):
    f = _function(a.fn)
    return dumps({pt: fmt_ext(f(f.curve.parse_point(pt))) for pt in a.at})


def _binary(op):
    def run(a):
        f = _function(a.fn)
        g = _function(a.fn2, f.curve)
        return dumps(function_to_json(op(f, g)))
    return run


def cmd_oinv(a):
    return dumps(function_to_json(oinv(_function(a.fn))))


def cmd_divisor(a):
    f = _function(a.fn)
    if f.is_bottom:
        raise BottomFunction("the bottom function has no divisor")
    d = divisor(f)
    return dumps({"degree": d.degree(), "orders": _divisor_json(d)})


def cmd_extrema(a):
    f = _function(a.fn)
    doc = {"max": fmt_ext(max_value(f)), "min": fmt_ext(min_value(f))}
    if not f.is_bottom:
        doc["argmax"] = str(argmax_set(f))
        doc["argmin"] = str(argmin_set(f))
    return dumps(doc)


def cmd_cf(a):
    curve = _curve(a.curve)
    doc, base = _read_doc(a.sub)
    return dumps(function_to_json(cf(curve, subgraph_from_json(doc, curve, base), to_ext(a.l))))


def cmd_cf_point(a):
    curve = _curve(a.curve)
    return dumps(function_to_json(cf_point(curve, curve.parse_point(a.x), to_ext(a.eps))))


def cmd_cf_tail(a):
    curve = _curve(a.curve)
    return dumps(function_to_json(cf_tail(curve, curve.parse_point(a.y), curve.parse_point(a.x))))


def cmd_check_expansive(a):
    m = _map(a.map)
    doc = {"valid": True, "r": fmt_ext(m.r), "pieces": len(m.pieces)}
    if m.source == m.target:
        doc["automorphism"] = is_automorphism(m)
    return dumps(doc)


def cmd_compose(a):
    return dumps(map_to_json(compose(_map(a.second), _map(a.first))))


def cmd_check_harmonic(a):
    if a.data:
        doc, base = _read_doc(a.data)
        data = harmonic_from_json(doc, base)
    else:
        data = harmonic_data(_map(a.map))
    return dumps({"harmonic": True, "degree": verify_harmonic(data)})


def cmd_aut(a):
    curve = _curve(a.curve)
    gens = star_aut_generators(curve)
    doc = {"generators": len(gens)}
    if len(curve.edges) != 2:
        doc["closure_size"] = len(group_closure(gens))
    if a.generators:
        doc["maps"] = [map_to_json(g) for g in gens]
    return dumps(doc)


def cmd_classify(a):
    curve = _curve(a.curve)
    has, witness = has_nonunit_dilation(curve)
    doc = {"star_infinite": is_star_infinite(curve), "nonunit_dilation": has}
    if witness is not None:
        doc["witness_r"] = fmt_ext(witness.r)
    return dumps(doc)


def cmd_pullback(a):
    psi = pullback(_map(a.map))
    return dumps(function_to_json(psi.apply(_function(a.fn, psi.source))))


def cmd_recover(a):
    m = _map(a.map)
    extra = points_from_text(Path(a.samples).read_text(), m.source) if a.samples else []
    psi = pullback(m)
    del m  # recovery only sees the oracle
    return dumps(recover_map(psi, default_samples(psi.source, extra)).to_json())


def cmd_verify(a):
    phi = _map(a.map)
    psi = pullback(phi)
    rng = random.Random(a.seed)
    failures = []
    for i in range(a.trials):
        if a.suite == "homlaws":
            f = random_function(psi.source, rng, 0.05)
            g = random_function(psi.source, rng, 0.05)
            res = check_hom_laws(psi, f, g)
            if not res:
                failures.append({"trial": i, "law": res.law, "f": function_to_json(f),
                                 "g": function_to_json(g)})
            continue
        if a.suite == "lemma4" and psi.source.edges and rng.random() < 1 / 4:
            f = random_probe(psi.source, rng)
        else:
            f = random_function(psi.source, rng)
        ok = check_lemma4(psi, f, phi.r) if a.suite == "lemma4" else check_divisor_correspondence(psi, phi, f)
        if not ok:
            failures.append({"trial": i, "f": function_to_json(f)})
    return dumps({"suite": a.suite, "trials": a.trials, "seed": a.seed,
                  "passed": not failures, "failures": failures})


def cmd_export_dot(a):
    curve = _curve(a.curve)
    f = _function(a.fn, curve) if a.fn else None
    d = None
    if a.divisor_of:
        g = _function(a.divisor_of, curve)
        d = divisor(g) if not g.is_bottom else None
    return export_dot(curve, f, d)


# -- parser ---------------------------------------------------------------------------------

def _global_flags(suppress):
    # subcommands repeat the global flags; SUPPRESS keeps them from
    # overwriting a value given before the subcommand name
    dflt = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--seed", type=int, default=dflt(DEFAULT_SEED), help="random seed")
    p.add_argument("--trials", type=int, default=dflt(100), help="trial count for verify")
    p.add_argument("--out", default=dflt(None), help="write output to this file instead of stdout")
    return p


def build_parser():
    parser = _Parser(prog="troprat", description="Exact tropical rational function toolkit.",
                     parents=[_global_flags(False)])
    common = _global_flags(True)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, func, help_text):
        p = sub.add_parser(name, help=help_text, parents=[common])
        p.set_defaults(func=func)
        return p

    add("genus", cmd_genus, "first Betti number").add_argument("--curve", required=True)
    add("canonical-model", cmd_canonical_model, "canonical model as curve JSON").add_argument("--curve", required=True)

    p = add("eval", cmd_eval, "evaluate a function at points")
    p.add_argument("--fn", required=True)
    p.add_argument("--at", required=True, nargs="+", help="points such as v0, e0@5/2, e0@inf")
    for name, op in (("oplus", oplus), ("odot", odot)):
        p = add(name, _binary(op), f"tropical {'sum' if name == 'oplus' else 'product'}")
        p.add_argument("--fn", required=True)
        p.add_argument("--fn2", required=True)
    add("oinv", cmd_oinv, "multiplicative inverse").add_argument("--fn", required=True)
    add("divisor", cmd_divisor, "zeros and poles").add_argument("--fn", required=True)
    add("extrema", cmd_extrema, "extreme values with their loci").add_argument("--fn", required=True)

    p = add("cf", cmd_cf, "chip-firing move by a subgraph")
    p.add_argument("--curve", required=True)
    p.add_argument("--sub", required=True)
    p.add_argument("--l", required=True)
    p = add("cf-point", cmd_cf_point, "chip-firing move by a point")
    p.add_argument("--curve", required=True)
    p.add_argument("--x", required=True)
    p.add_argument("--eps", required=True)
    p = add("cf-tail", cmd_cf_tail, "chip-firing move cutting off a tail")
    p.add_argument("--curve", required=True)
    p.add_argument("--y", required=True)
    p.add_argument("--x", required=True)

    add("check-expansive", cmd_check_expansive, "validate a map").add_argument("--map", required=True)
    p = add("compose", cmd_compose, "composition second o first")
    p.add_argument("--first", required=True)
    p.add_argument("--second", required=True)
    p = add("check-harmonic", cmd_check_harmonic, "verify a harmonic morphism and print its degree")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--data", help="harmonic morphism data JSON")
    g.add_argument("--map", help="expansive map with integer factor")
    p = add("aut", cmd_aut, "automorphism group of a star-shaped curve")
    p.add_argument("--curve", required=True)
    p.add_argument("--generators", action="store_true", help="include the generator maps")
    add("classify", cmd_classify, "star-shaped test and non-unit dilations").add_argument("--curve", required=True)

    p = add("pullback", cmd_pullback, "apply the induced semiring isomorphism")
    p.add_argument("--map", required=True)
    p.add_argument("--fn", required=True)
    p = add("recover", cmd_recover, "recover a map from its semiring isomorphism")
    p.add_argument("--map", required=True)
    p.add_argument("--samples", help="file with one extra sample point per line")
    p = add("verify", cmd_verify, "randomized verification suites")
    p.add_argument("--map", required=True)
    p.add_argument("--suite", required=True, choices=["lemma4", "cor3", "homlaws"])
    p = add("export-dot", cmd_export_dot, "Graphviz rendering")
    p.add_argument("--curve", required=True)
    p.add_argument("--fn")
    p.add_argument("--divisor-of", help="label the divisor of this function")
    return parser


def run(argv=None, stdout=None):
    stdout = stdout or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        text = args.func(args)
    except TropicalError as exc:
        stdout.write(dumps(exc.to_json()))
        return 1
    except (ValueError, TypeError, KeyError, OSError) as exc:
        stdout.write(dumps(FormatError(str(exc)).to_json()))
        return 1
    if args.out:
        Path(args.out).write_text(text)
    else:
        stdout.write(text)
    return 0


def main(argv=None):
    try:
        return run(argv)
    except SystemExit as exc:
        return exc.code


if __name__ == "__main__":
    sys.exit(main())

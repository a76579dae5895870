"""Exact rational functions on tropical curves together with the semiring
isomorphisms induced by expansive maps between the curves."""

from .chipfire import Subgraph, cf, cf_point, cf_tail, make_subgraph, tail_complement, whole_curve
from .curve import (
    Edge,
    Model,
    Point,
    TropicalCurve,
    build_curve,
    canonical_curve,
    canonical_model,
    canonical_vertices,
    directions_at,
    distance,
    genus,
    injectivity_radius,
    is_star_infinite,
    subdivide,
    valence,
)
from .dot import export_dot
from .errors import TropicalError
from .ext import INF, NEG_INF, fmt_ext, to_ext
from .morphism import (
    ExpansiveMap,
    HarmonicMorphismData,
    Piece,
    apply,
    apply_inverse,
    compose,
    group_closure,
    has_nonunit_dilation,
    identity,
    inverse,
    is_automorphism,
    make_expansive,
    star_aut_generators,
    verify_harmonic,
)
from .ratfun import (
    Divisor,
    RatFun,
    argmax_set,
    argmin_set,
    bottom,
    constant,
    divisor,
    eval_at,
    from_breakpoints,
    max_value,
    min_value,
    odot,
    oinv,
    oplus,
)
from .semiso import (
    ComposedOracle,
    CorruptedOracle,
    PullbackMap,
    RecoveryReport,
    SemifieldMapOracle,
    check_divisor_correspondence,
    check_hom_laws,
    check_lemma4,
    pullback,
    recover_factor,
    recover_map,
    recover_point,
    recover_point_at_infinity,
)

__version__ = "0.1.0"

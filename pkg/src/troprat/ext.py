"""Exact rationals extended by +inf and -inf.

Finite values are always :class:`fractions.Fraction`; the two infinities are
the float constants ``INF`` and ``NEG_INF`` so that ordinary comparisons and
``max``/``min`` work unchanged.  Arithmetic that could produce ``inf - inf``
goes through :func:`ext_add`, which refuses it.
"""

import math
from fractions import Fraction

from .errors import UndefinedSum

INF = math.inf
NEG_INF = -math.inf


def is_inf(x):
    return isinstance(x, float) and math.isinf(x)


def to_ext(x):
    """Parse ``x`` (str, int, Fraction, or +-inf) into an extended rational."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, float):
        if math.isinf(x):
            return x
        raise TypeError(f"refusing inexact float {x!r}; pass a string like '1/3'")
    if isinstance(x, str):
        s = x.strip()
        if s in ("inf", "+inf", "∞", "+∞"):
            return INF
        if s in ("-inf", "−inf", "-∞", "−∞"):
            return NEG_INF
        return Fraction(s.replace("−", "-"))
    raise TypeError(f"cannot interpret {x!r} as an extended rational")


def to_rational(x):
    """Like :func:`to_ext` but rejects the infinities."""
    v = to_ext(x)
    if is_inf(v):
        raise ValueError(f"expected a finite rational, got {x!r}")
    return v


def ext_add(a, b):
    if is_inf(a) and is_inf(b) and a != b:
        raise UndefinedSum("(+inf) + (-inf) is undefined")
    if is_inf(a):
        return a
    if is_inf(b):
        return b
    return a + b


def ext_neg(a):
    return -a


def ext_scale(r, a):
    """``r * a`` for a positive rational ``r``; infinities are fixed."""
    if r <= 0:
        raise ValueError("scale factor must be positive")
    return a if is_inf(a) else r * a


def fmt_ext(x):
    """Canonical text form: ``"inf"``, ``"-inf"``, ``"p/q"`` or ``"n"``."""
    if is_inf(x):
        return "inf" if x > 0 else "-inf"
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"

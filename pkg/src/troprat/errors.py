"""Exception hierarchy.

Every domain error derives from :class:`TropicalError` so the CLI can turn
it into a machine-readable error record.
"""


class TropicalError(Exception):
    """Base class for all domain errors raised by troprat."""

    def to_json(self):
        return {"error": type(self).__name__, "message": str(self)}


# -- extended rationals ------------------------------------------------------

class UndefinedSum(TropicalError, ArithmeticError):
    pass


# -- curves -------------------------------------------------------------------

class CurveError(TropicalError):
    pass


class MalformedModel(CurveError):
    pass


class EmptyGraph(CurveError):
    pass


class DisconnectedGraph(CurveError):
    pass


class InfiniteNonLeafEdge(CurveError):
    pass


class MissingInfiniteEnd(CurveError):
    pass


class PointNotOnCurve(CurveError):
    pass


class PointAtInfinity(CurveError):
    pass


class CurveMismatch(TropicalError):
    pass


# -- rational functions ------------------------------------------------------

class FunctionError(TropicalError):
    pass


class PlusInfinityConstant(FunctionError):
    pass


class InvertBottom(FunctionError):
    pass


class BottomFunction(FunctionError):
    pass


class NonIntegerSlope(FunctionError):
    pass


class BadProbeGeometry(FunctionError):
    pass


# -- chip firing ---------------------------------------------------------------

class SubgraphError(TropicalError):
    pass


class EmptySubgraph(SubgraphError):
    pass


class IsolatedInfinityComponent(SubgraphError):
    pass


class NotAPointAtInfinity(TropicalError):
    pass


class PointNotOnTailEdge(TropicalError):
    pass


# -- maps ----------------------------------------------------------------------

class MapError(TropicalError):
    pass


class MalformedMap(MapError):
    pass


class Discontinuous(MapError):
    pass


class NotBijective(MapError):
    pass


class FactorViolated(MapError):
    pass


class InfinityNotPreserved(MapError):
    pass


class NotStarInfinite(MapError):
    pass


class LoopyModel(MapError):
    pass


class NotHarmonic(MapError):
    """A harmonic-morphism clause failed; ``clause`` is its number (1-4)."""

    def __init__(self, clause, message):
        super().__init__(f"clause ({clause}): {message}")
        self.clause = clause

    def to_json(self):
        out = super().to_json()
        out["clause"] = self.clause
        return out


# -- recovery --------------------------------------------------------------------

class RecoveryError(TropicalError):
    pass


class NonConstantImageOfConstant(RecoveryError):
    pass


class NonPositiveFactor(RecoveryError):
    pass


class ProbeDivergence(RecoveryError):
    pass


class ValenceMismatch(RecoveryError):
    pass


class ArgmaxAtInfinity(RecoveryError):
    pass


class MultipleInfinitePoles(RecoveryError):
    pass


class MissingCanonicalSamples(RecoveryError):
    pass

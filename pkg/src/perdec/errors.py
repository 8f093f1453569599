"""Exception hierarchy for the decoupling toolkit."""

from __future__ import annotations


class PerdecError(Exception):
    """Base class for all package errors."""


class NotInRing(PerdecError):
    """A rational function fell outside the proper stable ring."""


# alias used where the operand is a whole matrix or system
NotOverS = NotInRing


class ImproperEntry(NotInRing):
    """An entry has numerator degree above denominator degree."""


class ZeroElement(PerdecError):
    """Order or normal form was requested for the zero element."""


class ZeroDivisor(PerdecError, ZeroDivisionError):
    """Ring or field division by the zero element."""


class BadRange(PerdecError, ValueError):
    """A time or index argument falls outside its admissible range."""


class ParseError(PerdecError, ValueError):
    """A system file is malformed; the message carries field context."""


class ShapeError(PerdecError, ValueError):
    """Matrix dimensions violate the periodic shape rules."""


class UnsupportedFactor(PerdecError):
    """A polynomial factor cannot be split exactly by the shipped machinery."""


class StructureError(PerdecError):
    """A matrix violates the block structure an operation requires."""


class DimensionMismatch(PerdecError):
    """Input and output counts do not fit the requested synthesis path."""


class LengthMismatch(PerdecError):
    """Two integer lists that must align elementwise have different lengths."""


class SingularMatrix(PerdecError):
    """A matrix that must be invertible is not."""


class SingularDeltaStar(SingularMatrix):
    """The reduced diagonal-selection matrix is singular.

    Signals an output-reachability violation upstream.
    """


class ZeroColumn(PerdecError):
    """A diagonal column of the normal form has no nonzero entry."""


class NotSolvable(PerdecError):
    """The decoupling problem has no solution of the requested kind."""


class NotStable(PerdecError):
    """A system (open or closed loop) fails the stability test."""


class NotOutputReachable(PerdecError):
    """A system fails the output reachability rank test."""


class ConstructionFailed(PerdecError):
    """A synthesis step could not produce a verified compensator.

    ``step`` names the stage that failed so callers can report it.
    """

    def __init__(self, step: str, detail: str = ""):
        self.step = step
        self.detail = detail
        msg = step if not detail else f"{step}: {detail}"
        super().__init__(msg)


class Inconclusive(PerdecError):
    """The search bound was exhausted before a verdict was reached."""


# alias used where the exhausted bound is an explicit iteration cap
BoundExceeded = Inconclusive


class NotFound(NotSolvable):
    """Candidate-list enumeration completed without a feasible choice."""


class NoConstantSolution(ConstructionFailed):
    """Gain-matching equations admit no constant solution at all."""

    def __init__(self, detail: str = ""):
        super().__init__("constant-solve", detail)


class NotBlockDiagonal(ConstructionFailed):
    """Gain-matching equations solve only with forbidden cross-channel terms."""

    def __init__(self, detail: str = ""):
        super().__init__("block-diagonal-solve", detail)

"""Typed refusals raised by the exact engine and the numeric oracle."""


class EngineError(Exception):
    """Base class for everything this package raises on purpose."""


class ZeroPolynomialError(EngineError):
    """Operation undefined for the identically-zero polynomial."""


class CircleVanishingError(EngineError):
    """Symbol has a zero or pole on the unit circle where none is allowed."""


class CircleZeroOuterError(EngineError):
    """Inner-outer split refused: a circle zero leaves no invertible outer part."""


class UnboundedSymbolError(EngineError):
    """Symbol has a pole on the unit circle, so it is not in L-infinity."""


class DegenerateSymbolError(EngineError):
    """Symbol is identically zero (or a pair member is)."""


class BothSidedCircleZerosError(EngineError):
    """Both reduced symbols vanish somewhere on the circle; the exact engine
    declines this case -- use the numeric oracle estimate instead."""


class TrivialityNotEstablishedError(EngineError):
    """The closed-form kernel needs the auxiliary intersection space proved
    trivial first, and the sufficient criteria were inconclusive."""


class NotInKernelError(EngineError):
    """Element fails the canonical-form membership test."""


class AmbientMismatchError(EngineError):
    """Kernel spaces live in different ambients (H2+ vs H2-)."""


class PoleTooCloseError(EngineError):
    """Multiplier pole too close to the circle for the requested truncation."""


class ParseError(EngineError):
    """Symbol expression rejected, with position information."""

    def __init__(self, message, position=None):
        super().__init__(message if position is None
                         else f"{message} (at position {position})")
        self.position = position


class IllSeparatedKernelWarning(UserWarning):
    """Numeric null space has no clear spectral gap at the cutoff."""

"""Exception hierarchy shared by all ilpk modules."""


class IlpkError(Exception):
    """Base class for all errors raised by this package."""


class ModelError(IlpkError):
    """Invalid model data or violated operation precondition."""


class ArithmeticOverflowError(IlpkError):
    """A value left the signed 64-bit range the model guarantees."""


class ResourceCapError(IlpkError):
    """An instance exceeded a configured resource cap (see ilpk.caps)."""


class DecompositionError(IlpkError):
    """A supplied tree/nice/protrusion decomposition is unusable."""


class NotTotallyUnimodularError(IlpkError):
    """A residual matrix required to be totally unimodular is not."""


class LpError(IlpkError):
    """Invalid input to the exact LP feasibility checker."""


class ParseError(IlpkError):
    """Malformed instance document, .td file, or graph file."""

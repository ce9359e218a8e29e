"""Exception hierarchy shared by all modules."""


class SniError(Exception):
    """Base class for every error raised by this package."""


class InvalidInput(SniError, ValueError):
    """Arguments violate an operation's preconditions."""


class DivisionByZero(SniError, ZeroDivisionError):
    pass


class SingularSystem(SniError):
    """Linear system has column-rank deficiency, so no unique solution."""


class InconsistentSystem(SniError):
    pass


class NotDecodable(SniError):
    """Wanted row lies in the span of the interference rows."""


class NotDivisible(InvalidInput):
    pass


class InvalidDims(InvalidInput):
    pass


class NotInS(InvalidInput):
    """(a, b) fails the gcd membership test."""


class ConditionViolated(InvalidInput):
    """Zero-padding parameters fail the scalar-code gcd condition."""


class DimensionMismatch(InvalidInput):
    pass


class MissingSideInfo(SniError):
    pass


class SingularWindow(SingularSystem):
    """A decoding window of the encoding matrix is not invertible."""


class SchemaError(InvalidInput):
    """Input file does not match the expected JSON layout."""

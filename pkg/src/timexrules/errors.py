"""Exception types shared across the package."""


class TemporalError(ValueError):
    """Base class for every error raised on temporal values or operations."""


class UnsupportedValueForm(TemporalError):
    """A TIMEX3 value string outside the supported grammar."""


class WrongKind(TemporalError):
    """An instant-only helper received a duration or reference."""


class IncomparableRange(TemporalError):
    """A value lacks a field needed to compare or truncate it."""


class KindMismatch(TemporalError):
    """An operation cannot apply to the running value."""


class FieldOverflow(TemporalError):
    """A field value falls outside its bounds."""


class EmptySequenceOnDuration(TemporalError):
    """A duration-typed sequence contains no Add operation."""


class UnboundVariable(TemporalError):
    """An operation still carries a variable slot at execution time."""


class KindConflict(TemporalError):
    """Merged rules produce operations of incompatible value kinds."""


class NoSequenceFound(Exception):
    """Capture found no operation sequence from base to target."""


class Unnormalizable(Exception):
    """No rule and no segmentation cover could normalize an expression."""


class EmptyCorpus(ValueError):
    pass


class CorpusError(Exception):
    pass


class MalformedXml(CorpusError):
    pass


class MissingDct(CorpusError):
    pass


class BadLine(CorpusError):
    def __init__(self, lineno, message="wrong column count"):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


def _bare(exc: BaseException) -> BaseException:
    """Detach an exception from its frames so it can be cached cheaply."""
    exc.__traceback__ = None
    exc.__context__ = None
    exc.__cause__ = None
    return exc

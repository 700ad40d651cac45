"""Exception hierarchy."""


class CobreakError(Exception):
    """Base class for all errors raised by this package."""


class ValidationError(CobreakError, ValueError):
    """An input violates a declared invariant (shape, hermiticity, trace...)."""


class ArgumentError(CobreakError, ValueError):
    """An argument is outside the domain an operation accepts."""


class DomainError(CobreakError, ValueError):
    """A computed object falls outside the physical domain (e.g. not PSD)."""


class ConsistencyError(CobreakError, RuntimeError):
    """Two representations or decision routes disagree."""


class PreconditionError(CobreakError, ValueError):
    """An operation was called on an input it is not defined for."""


class SpecParseError(CobreakError, ValueError):
    """A channel specification file is malformed.

    Attributes:
        field: dotted path of the offending field, if known.
        line: 1-based line number, if known.
    """

    def __init__(self, message, field=None, line=None):
        self.field = field
        self.line = line
        where = []
        if line is not None:
            where.append(f"line {line}")
        if field is not None:
            where.append(f"field '{field}'")
        prefix = f"[{', '.join(where)}] " if where else ""
        super().__init__(prefix + message)

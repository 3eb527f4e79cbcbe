"""Exception types shared by all nounforge modules."""


class NounforgeError(Exception):
    """Base class for every error raised on purpose by this package."""


class ParseError(NounforgeError, ValueError):
    """Input text does not follow one of the file formats.

    ``lineno`` is 1-based and may be None when the error is not tied to a line.
    """

    def __init__(self, message, lineno=None):
        self.lineno = lineno
        if lineno is not None:
            message = "line %d: %s" % (lineno, message)
        super().__init__(message)


class ValidationError(NounforgeError, ValueError):
    """A value was well-formed but violates a structural invariant."""


class DomainError(NounforgeError, ValueError):
    """An operation was called outside its precondition."""

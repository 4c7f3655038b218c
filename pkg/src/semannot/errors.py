"""Exception hierarchy shared by all annotator modules."""


class AnnotatorError(Exception):
    """Base class for every error raised by this package."""


class SpanBoundsError(AnnotatorError):
    """An annotation span does not fit the document text."""


class ParseError(AnnotatorError):
    """A resource file (thesaurus, lexical database, ...) is malformed."""

    def __init__(self, message, path=None, line=None):
        self.path = path
        self.line = line
        where = ""
        if path is not None:
            where = f" [{path}" + (f":{line}" if line is not None else "") + "]"
        super().__init__(message + where)


class LoadError(AnnotatorError):
    """A required resource file or directory is missing or unreadable."""


class ValidationError(AnnotatorError):
    """Input data violates a structural constraint (duplicate URI, ...)."""


class UnknownConceptError(AnnotatorError, KeyError):
    """A concept URI was requested that the index does not contain."""

    def __str__(self):
        # KeyError repr()s its single argument; keep a plain message.
        return Exception.__str__(self)


class NormalizationError(AnnotatorError):
    """A query label cannot be normalized (empty or whitespace-only)."""


class ConfigurationError(AnnotatorError):
    """The settings file is missing, malformed, or incomplete."""


class NetworkError(AnnotatorError):
    """Base class for failures talking to an external knowledge source.

    ``label`` is filled in by annotators that know which query label was
    in flight when the failure happened.
    """

    label = None

    def __str__(self):
        base = super().__str__()
        if self.label is not None:
            return f"{base} (while querying label {self.label!r})"
        return base


class TransportError(NetworkError):
    """HTTP-level failure: unexpected status code or connection problem."""

    def __init__(self, message, status=None):
        super().__init__(message)
        self.status = status


class ThrottledEndpointError(NetworkError):
    """The endpoint kept answering 503 until the retry budget ran out."""

    def __init__(self, message, attempts):
        super().__init__(message)
        self.attempts = attempts


class EndpointUnreachableError(NetworkError):
    """The concept-mapper endpoint refused the connection or timed out."""


class ProtocolError(NetworkError):
    """A remote peer sent a frame or body this client cannot parse."""

"""Exception types shared across the engine."""


class SwayError(Exception):
    """Base class for all engine errors."""


class MalformedSvg(SwayError):
    """Input is not well-formed XML / SVG. Carries the parser position when known."""

    def __init__(self, message, position=None):
        super().__init__(message)
        self.position = position  # (line, column) or None


class MissingViewBox(SwayError):
    """Root svg element has no viewBox and no usable width/height."""


class DegenerateGeometry(SwayError):
    """Element has no renderable outline (e.g. an empty group)."""


class NonNumericAttribute(SwayError):
    """A data attribute exists but cannot be parsed as a real number."""


class BudgetTooSmall(SwayError):
    """Even the minimal condensed document exceeds the token budget."""


class UnknownEasing(SwayError):
    pass


class DegenerateLine(SwayError):
    """Projection line with coincident endpoints."""


class DegeneratePath(SwayError):
    """Sketch polyline with zero total length."""


class EmptyGroup(SwayError):
    """Selector matched no elements where at least one is required."""


class UnknownTrack(SwayError):
    pass


class InvalidDuration(SwayError):
    pass


class MissingAssignment(SwayError):
    """A timeline track has no weight assignment for its group."""


class EmptyTimeline(SwayError):
    pass


class UnsupportedVersion(SwayError):
    """Animation program format_version not supported by this build."""


class SchemaViolation(SwayError):
    """Structured input violates its schema. `path` points at the offending field."""

    def __init__(self, message, path):
        super().__init__(f"{path}: {message}")
        self.path = path


class UnbakeableFeature(SwayError):
    """Timeline uses features that cannot be frozen into static CSS."""

    def __init__(self, features):
        super().__init__("unbakeable: " + ", ".join(features))
        self.features = list(features)


class ClientError(SwayError):
    """Model client transport failure or timeout."""


class NoJsonFound(SwayError):
    """Model reply contained no parseable JSON object."""


class UnknownSession(SwayError):
    pass


class UnknownVersion(SwayError):
    pass


class BusySession(SwayError):
    """A generation is already in flight for this session."""


class InvalidScheme(SwayError):
    """Coordination scheme violates one of its invariants."""

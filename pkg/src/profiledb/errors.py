"""Exception types shared across the package."""


class ProfileDBError(Exception):
    """Base class for all errors raised by this package."""


class FormatError(ProfileDBError):
    """Malformed input text (tagged lines, data files, import blocks)."""


class MissingResource(ProfileDBError):
    """A required resource (lexicon, rule table) was not loaded."""


class ParseError(ProfileDBError):
    """Syntax error in a pattern definition file."""

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class DanglingRef(ProfileDBError):
    """A pattern references a name with no definition."""

    def __init__(self, name: str):
        super().__init__(f"undefined pattern reference {name!r}")
        self.name = name


class CycleError(ProfileDBError):
    """A reference graph (pattern set or taxonomy) contains a cycle."""

    def __init__(self, cycle: list[str]):
        super().__init__("cycle: " + " -> ".join(cycle))
        self.cycle = cycle


class EmptyEntity(ProfileDBError):
    """Entity word list was empty or contained an empty word."""


class UnresolvedAnchor(ProfileDBError):
    """A category rule points at a word that is not a taxonomy node."""


class StorageError(ProfileDBError):
    """Profile store could not persist or load data."""


class UnknownCategory(ProfileDBError):
    """A query filter named a category that is not configured."""


class UnparsableDescription(ProfileDBError):
    """Description tokens do not fit the noun-phrase shape."""


class UnsupportedEntityShape(ProfileDBError):
    """Entity token sequence too long to build a name structure."""


class NotAggregatable(ProfileDBError):
    """Two structures do not share a common title and cannot be merged."""


class UnrealizableFD(ProfileDBError):
    """A feature structure lacks a feature the realizer needs."""

    def __init__(self, feature: str):
        super().__init__(f"cannot realize: missing feature {feature!r}")
        self.feature = feature


class BindError(ProfileDBError):
    """Service could not bind its configured address."""


class ConfigError(ProfileDBError):
    """Service configuration is invalid."""


class FetchError(ProfileDBError):
    """A news source could not be read."""

    def __init__(self, source: str, reason: str):
        super().__init__(f"source {source!r}: {reason}")
        self.source = source
        self.reason = reason

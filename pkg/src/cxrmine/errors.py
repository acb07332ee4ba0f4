"""Exception hierarchy shared across the package."""


class CxrMineError(Exception):
    """Base class for every domain error raised by this package.

    ``table_id`` is attached by the mining loop when an error can be
    traced back to one candidate score table; it is ``None`` otherwise.
    """

    table_id = None


class IllegalDiagnosis(CxrMineError):
    """A diagnosis code or label outside the legal set for its source."""


class IncompatibleTables(CxrMineError):
    """Score tables that cannot be combined (experiment or epoch differ)."""


class IngestError(CxrMineError):
    """A fatal problem while parsing a score-table CSV."""

    def __init__(self, issue):
        super().__init__(f"row {issue.row_number}: {issue.kind.value}: {issue.detail}")
        self.issue = issue


class SchemaError(IngestError):
    """The CSV header does not match the seven-column template."""


class EmptyNode(CxrMineError):
    """Entropy requested for a node with no samples."""


class TooFewSamples(CxrMineError):
    """An operation that needs at least two records got fewer."""


class EmptyDataset(CxrMineError):
    """Tree fitting requested on an empty record set."""


class TreeParseError(CxrMineError):
    """Malformed or schema-violating serialized tree."""


class ShapeError(CxrMineError):
    """Paired sequences of mismatched length."""


class EmptyInput(CxrMineError):
    """A metric requested over zero observations."""


class DegenerateLabels(CxrMineError):
    """AUC requested for truths containing only one class."""


class DegenerateSplit(CxrMineError):
    """A train/test split that would leave the training side empty."""


class ConfigError(CxrMineError):
    """Invalid configuration value."""


class IoError(CxrMineError):
    """A report or artifact destination could not be written."""


class EmptyImage(CxrMineError):
    """An image operation received a zero-sized image."""


class BadDimensions(CxrMineError):
    """A resize target with a non-positive width or height."""

"""Exception types shared across the package."""


class QGraphError(Exception):
    """Base class for qgraphs errors."""


class GenerationError(QGraphError):
    """Random graph generation exhausted its rejection budget."""


class NumericalError(QGraphError):
    """A numerical routine failed to converge or produced invalid output."""


class DegenerateCaseError(QGraphError):
    """A closed-form fast path hit a degenerate configuration and the
    caller should fall back to the general solver."""


class BoundViolationError(QGraphError):
    """A theorem bound that must hold on valid inputs was violated."""


class SchemaError(QGraphError):
    """A persisted artifact has the wrong schema or version."""

"""Exception types shared across the package."""


class CoefficientRangeError(ValueError):
    """An index tuple lies outside the range where a coefficient is defined."""


class DomainError(ValueError):
    """A precondition on an algebraic or numerical argument is violated."""


class ConfigurationError(ValueError):
    """A run configuration cannot be satisfied (e.g. missing symbol binding)."""


class ShapeError(ValueError):
    """Operands live on different grids or have incompatible shapes."""


class ParseError(ValueError):
    """Syntax error in a closed-form expression; ``column`` is 1-based."""

    def __init__(self, message, column):
        super().__init__(f"{message} at column {column}")
        self.column = column

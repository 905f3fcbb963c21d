"""Exception types shared across the package."""


class DomainError(ValueError):
    """A parameter lies outside the region where a formula is valid."""

    def __init__(self, message, field=None):
        super().__init__(message)
        self.field = field


class SingularInputError(DomainError):
    """Zero distance with a zero path-loss offset."""


class QuadratureError(ArithmeticError):
    """Adaptive quadrature ran out of refinements before meeting tolerance."""

    def __init__(self, message, value=None, error=None):
        super().__init__(message)
        self.value = value
        self.error = error


class ConfigError(ValueError):
    """Malformed or invalid experiment configuration."""

    def __init__(self, message, field=None, line=None):
        super().__init__(message)
        self.field = field
        self.line = line

    def as_dict(self):
        return {"type": type(self).__name__, "field": self.field,
                "line": self.line, "message": str(self)}

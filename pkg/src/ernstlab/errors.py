"""Exception types raised across the package."""


class ErnstLabError(Exception):
    """Base class for all errors raised by ernstlab."""


class DomainError(ErnstLabError, ValueError):
    """A function was evaluated outside its admissible domain.

    Attributes:
        function: name of the offending function or operation.
        point: the offending argument (first one found, for array input).
    """

    def __init__(self, function, point, detail=""):
        self.function = function
        self.point = point
        msg = f"{function}: argument {point!r} outside domain"
        if detail:
            msg += f" ({detail})"
        super().__init__(msg)


class PoleError(DomainError):
    """A fractional-linear map or trigonometric reciprocal hit a pole."""


class QuadratureError(ErnstLabError, ArithmeticError):
    """Adaptive quadrature failed to reach its tolerance within the interval cap."""


class NotInSpanError(ErnstLabError, ValueError):
    """A vector field is not a linear combination of the symmetry basis.

    Attributes:
        residual: the component of the field that could not be matched.
    """

    def __init__(self, residual):
        self.residual = residual
        super().__init__(f"vector field not in span of X1..X5; unmatched part: {residual}")


class ConfigError(ErnstLabError, ValueError):
    """Invalid scenario configuration."""

"""Exception types shared across the package."""


class SetvarError(Exception):
    """Base class for all errors raised by setvar."""


class DimensionMismatch(SetvarError, ValueError):
    pass


class UnsupportedBody(SetvarError, ValueError):
    """Raised for bodies outside the supported representations (d > 3, etc.)."""


class UnsupportedVariantMix(SetvarError, ValueError):
    pass


class QuadratureUnavailable(SetvarError, ValueError):
    pass


class BadExponent(SetvarError, ValueError):
    pass


# Young-Loeve bound requires alpha + 1/p > 1; same failure, different name in reports.
BadExponents = BadExponent


class WindowNotOnGrid(SetvarError, ValueError):
    pass


class NodesNotOnGrid(SetvarError, ValueError):
    pass


NodeNotOnGrid = NodesNotOnGrid


class GridMismatch(SetvarError, ValueError):
    pass


class NoConvergence(SetvarError, RuntimeError):
    def __init__(self, message, value=None, defect=None, levels=None):
        super().__init__(message)
        self.value = value
        self.defect = defect
        self.levels = levels


class BoundaryPoint(SetvarError, ValueError):
    pass


class BadRho(SetvarError, ValueError):
    pass


class SizeTooLarge(SetvarError, ValueError):
    pass


class NotPositiveDefinite(SetvarError, ArithmeticError):
    pass


class DifferenceNotExist(SetvarError, ValueError):
    """Forward Hukuhara difference fails at a grid cell."""

    def __init__(self, index, message=None):
        super().__init__(message or f"Hukuhara difference does not exist at cell {index}")
        self.index = index


class UnknownSuite(SetvarError, KeyError):
    pass


class InvalidConfig(SetvarError, ValueError):
    def __init__(self, field, message):
        super().__init__(f"{field}: {message}")
        self.field = field


class NonIntegrableSingularityWarning(UserWarning):
    pass


class ExponentWarning(UserWarning):
    """Grid-estimated exponents violate an integrability condition."""

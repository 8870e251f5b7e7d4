"""Exception types shared across the package."""


class InvalidParameter(ValueError):
    """Construction parameters outside the supported range."""


class AlgebraMismatch(ValueError):
    """Binary operation applied to elements of different algebras."""


class SingularElement(ArithmeticError):
    """Inversion of an element whose norm vanishes."""


class ConstructionError(RuntimeError):
    """A build step failed an internal exactness or search bound."""

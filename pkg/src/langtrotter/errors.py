"""Exception types raised across the package."""


class LangTrotterError(ValueError):
    """Base class; subclasses ValueError so callers can catch either."""


class EmptyRangeError(LangTrotterError):
    pass


class InvalidModulusError(LangTrotterError):
    """Modulus is not of the shape an operation supports (even, composite, too large...)."""


class DomainError(LangTrotterError):
    pass


class NoInverseError(DomainError):
    pass


class SingularCurveError(DomainError):
    pass


class CriterionInapplicableError(DomainError):
    """The residue criterion needs all four coefficients to be units mod p."""


class InvalidDiscriminantError(DomainError):
    pass


class ResourceError(RuntimeError):
    """A requested computation exceeds the configured memory budget."""

"""Exception types shared across the package."""


class SteerkitError(Exception):
    """Base class for all steerkit errors."""


class ValidationError(SteerkitError):
    """A state or parameter set failed validation.

    The offending magnitude (largest violation found) is kept on the
    ``magnitude`` attribute so callers can report it.
    """

    def __init__(self, message, magnitude=None):
        super().__init__(message)
        self.magnitude = magnitude


class NotHermitian(ValidationError):
    pass


class TraceNotOne(ValidationError):
    pass


class NotPositive(ValidationError):
    pass


class UnknownFamily(SteerkitError):
    pass


class ParamOutOfDomain(SteerkitError):
    pass


class SteeredStateSingular(SteerkitError):
    """The steered party's reduced state is too close to a pure state
    for the inverse-square-root map to be meaningful."""


class UnphysicalAssemblage(SteerkitError):
    """An assemblage observable violates effect positivity beyond tolerance."""


class DomainError(SteerkitError):
    """A radicand went negative beyond tolerance; signals unphysical input."""


class SharpBiasedDegenerate(SteerkitError):
    """Named condition: F underflows while the bias x does not.

    The objective never raises this (the point is reported with a large
    negative sentinel instead); the class exists so the condition has a
    catchable name if a caller wants to re-raise on sentinel results.
    """


class NonFiniteObjective(SteerkitError):
    """Every probed point of a min-max search evaluated non-finite."""


class DegenerateWeight(SteerkitError):
    """A hidden-state weight denominator is too close to zero."""

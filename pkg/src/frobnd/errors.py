"""Exception hierarchy for frobnd."""


class FrobndError(Exception):
    """Base class for all errors raised by this package."""


class ValidationError(FrobndError):
    """The defining vectors violate a structural requirement."""


class ZeroVector(ValidationError):
    pass


class NotFullRank(ValidationError):
    pass


class NoHalfSpace(ValidationError):
    pass


class NotCoplanar(ValidationError):
    pass


class NotInSemigroup(FrobndError):
    pass


class NumericalError(FrobndError):
    """A numerical procedure failed to deliver a certified answer."""


class RegionGrowthExceeded(NumericalError):
    pass


class BetaNotInterior(NumericalError):
    pass


class GaugeUnavailable(NumericalError):
    pass


class NoConvergence(NumericalError):
    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class HorizonTooSmall(ValueError, FrobndError):
    pass


class IterationTooLarge(FrobndError):
    pass


class InconclusiveSampling(NumericalError):
    pass


class SingularTransform(ValidationError):
    pass


class EmptyRepresentationSet(FrobndError):
    pass

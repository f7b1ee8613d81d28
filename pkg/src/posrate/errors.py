"""Exception types raised across the toolkit."""


class DimensioningError(Exception):
    """Base class for every error raised by posrate."""


class ConfigError(DimensioningError, ValueError):
    pass


class MissingField(ConfigError):
    pass


class UnitOutOfRange(ConfigError):
    pass


class DomainError(DimensioningError, ValueError):
    pass


class EmptySpectrum(DomainError):
    pass


class AlphaMismatch(DomainError):
    pass


class BeamHorizonError(DomainError):
    """The far edge of the beam cone never reaches the ground."""


class NoConvergence(DimensioningError, ArithmeticError):
    pass


class NumericalInconsistency(DimensioningError, ArithmeticError):
    pass


class StepTooLarge(NumericalInconsistency):
    pass


class NonPositiveInformation(DimensioningError, ArithmeticError):
    """Bayesian information J_B <= 0, so the bound is undefined."""


class Infeasible(DimensioningError):
    pass

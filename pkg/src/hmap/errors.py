"""Exception hierarchy shared by every hmap module."""


class HmapError(ValueError):
    """Base class for all library errors."""


class DomainError(HmapError):
    """A point or parameter lies outside the admissible range (e.g. |z| >= 1)."""


class UnsupportedOrder(HmapError):
    pass


class DegenerateDerivative(HmapError):
    """A derivative that must be nonzero vanishes (h'(z) = 0, F'(z) = 0, ...)."""


class DegenerateMap(HmapError):
    """Constant maps, or maps whose lambda_f vanishes where positivity is required."""


class DegenerateDilatation(HmapError):
    """1 - omega vanishes (or nearly so) on the sampling grid."""


class SingularAffine(HmapError):
    pass


class DilatationBoundViolated(HmapError):
    pass


class InadmissibleParameters(HmapError):
    pass


class InjectivityFailure(HmapError):
    def __init__(self, message, pair=None):
        super().__init__(message)
        self.pair = pair


class Disconnected(HmapError):
    pass


class ArgWrap(HmapError):
    """The tracked argument of F'/phi' reached +-pi along a radius."""


class ConfigError(HmapError):
    """Malformed map description, family description or run configuration."""

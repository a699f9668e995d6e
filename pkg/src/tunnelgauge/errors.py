"""Exception hierarchy shared by all tunnelgauge modules."""


class TunnelGaugeError(Exception):
    """Base class for every error raised by this package."""


class InvalidSpec(TunnelGaugeError, ValueError):
    """A barrier or sweep description violates its invariants."""


class NonPropagatingLead(TunnelGaugeError, ValueError):
    """The energy does not exceed the potential of one of the leads."""


class AtInterface(TunnelGaugeError, ValueError):
    """A local current was requested exactly at a potential step."""


class GridTooCoarse(TunnelGaugeError, ValueError):
    pass


class MethodUnavailable(TunnelGaugeError, ValueError):
    pass


class DivergentDeltaL(TunnelGaugeError, ArithmeticError):
    """dT/dl vanishes, so the first-order position uncertainty diverges."""


class NoPositiveRoot(TunnelGaugeError, ArithmeticError):
    pass


class NonPositiveEnergy(TunnelGaugeError, ValueError):
    pass


class NonPositiveInput(TunnelGaugeError, ValueError):
    pass


class UnknownPreset(TunnelGaugeError, KeyError):
    pass

"""Exception hierarchy shared by every module of the package."""


class BatteryError(Exception):
    """Base class for all errors raised by csbattery."""


class InvalidParams(BatteryError, ValueError):
    """A model parameter failed validation.

    ``field`` names the offending parameter.
    """

    def __init__(self, field, message):
        super().__init__(f"{field}: {message}")
        self.field = field


class NonPositiveB(InvalidParams):
    pass


class OutOfRangeM(InvalidParams):
    pass


class NonPositiveCount(InvalidParams):
    pass


class NonFiniteEnergy(InvalidParams):
    pass


class ConvergenceFailure(BatteryError):
    pass


class WrongCellCount(BatteryError, ValueError):
    pass


class UnsupportedRegime(BatteryError, ValueError):
    """A closed form was requested outside the parameter regime it holds in."""


class EmptyGrid(BatteryError, ValueError):
    pass


class NoChargingPossible(BatteryError):
    """The charging objective is identically zero (A == 0 or m == 0)."""


class DegenerateFilling(BatteryError, ValueError):
    pass


class TooLarge(BatteryError, ValueError):
    pass


class PropertyViolation(BatteryError, AssertionError):
    """A checked property failed; ``counterexample`` holds the offending data."""

    def __init__(self, message, counterexample=None):
        super().__init__(message)
        self.counterexample = counterexample

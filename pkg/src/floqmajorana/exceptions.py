"""
Exception hierarchy shared by every floqmajorana module.

Input problems derive from InvalidInputError (also a ValueError), numerical
contract failures from NumericalContractError (also a RuntimeError). The CLI
maps the first family to exit code 2 and the second to exit code 3.
"""


class FloquetMajoranaError(Exception):
    """Root of all errors raised by floqmajorana."""


class InvalidInputError(FloquetMajoranaError, ValueError):
    pass


class NumericalContractError(FloquetMajoranaError, RuntimeError):
    pass


# Input errors

class InvalidParameters(InvalidInputError):
    pass


class OverridesPresent(InvalidInputError):
    pass


class UnknownSchedule(InvalidInputError):
    pass


class OddDuration(InvalidInputError):
    pass


class ClosureViolation(InvalidInputError):
    pass


class IncompatibleModes(InvalidInputError):
    pass


class UnsupportedWidth(InvalidInputError):
    pass


class TooLarge(InvalidInputError):
    pass


# Numerical contract failures

class WrongDegeneracy(NumericalContractError):
    pass


class GaugeAmbiguity(NumericalContractError):
    pass


class GapClosed(NumericalContractError):
    pass


class NonIntegerResult(NumericalContractError):
    pass


class LeakageTooLarge(NumericalContractError):
    pass


class SubspaceDimensionChanged(NumericalContractError):
    pass


class ZeroProbabilityBranch(NumericalContractError):
    pass


class GapClosedByBreaking(NumericalContractError):
    pass


class NonGaussianMeasurement(NumericalContractError):
    pass

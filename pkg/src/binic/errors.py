"""Exception types raised across the package."""


class BinicError(Exception):
    pass


class ZeroForm(BinicError):
    pass


class DegenerateForm(BinicError):
    pass


class NonInvertible(BinicError):
    pass


class IndexOutOfRange(BinicError):
    pass


class DegenerateInput(BinicError):
    pass


class IncompatibleForms(BinicError):
    pass


class OrientationError(BinicError):
    pass


class NonIntegralOutput(BinicError):
    pass


class FormVanishesModP(BinicError):
    pass


class InseparableType(BinicError):
    pass


class TooLarge(BinicError):
    pass


class PrecisionTooLow(BinicError):
    pass


class PrecisionExhausted(BinicError):
    pass


class NonConvergence(BinicError):
    def __init__(self, msg, residual=None):
        super().__init__(msg)
        self.residual = residual


class EffortExceeded(BinicError):
    def __init__(self, msg, partial=None):
        super().__init__(msg)
        self.partial = partial


class Unknown(BinicError):
    """A three-valued test could not decide within its configured bounds."""


class CheckFailed(BinicError):
    """An internal consistency assertion did not hold."""

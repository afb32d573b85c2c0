"""Exception types shared across the package."""


class DegenerateCodeError(ValueError):
    """Generator matrix spans only the zero codeword."""


class InconsistentInputError(ValueError):
    """Known bits contradict the parity checks even over the erased span."""


class UnknownCodeError(KeyError):
    """Requested component code is not in the registry."""


class InfeasibleRateError(ValueError):
    """Ensemble parameters give a non-positive design rate."""


class NumericalInstabilityError(RuntimeError):
    """The differential-equation integrator left its admissible region."""

"""Exception hierarchy.

Everything raised deliberately by the library derives from ``GeoIonError`` so
the command line can map physics/validation failures to exit code 1.
"""


class GeoIonError(Exception):
    """Base class for all library errors."""


class DimensionError(GeoIonError, ValueError):
    pass


class KindError(GeoIonError, ValueError):
    """Operator does not have the required kind (hermitian / unitary)."""


class SingularityError(GeoIonError, ValueError):
    """Perturbative formula evaluated at a real (resonant) phonon excitation."""


class CalibrationError(GeoIonError, RuntimeError):
    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = dict(diagnostics or {})


class PreconditionError(GeoIonError, ValueError):
    pass


class StepBoundError(GeoIonError, ValueError):
    """Integrator step violates dt * ||H||_max <= 0.1."""


class TruncationError(GeoIonError, RuntimeError):
    """Population reached the top Fock level of the truncated phonon space."""


class NumericalError(GeoIonError, RuntimeError):
    pass


class CyclicityError(GeoIonError, ValueError):
    """Evolution is not cyclic; phase of the return overlap is undefined."""


class ResolutionError(GeoIonError, ValueError):
    """Path sampling too coarse or path not closed."""

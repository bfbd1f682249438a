"""Exception hierarchy shared by all modules."""


class QutritWitnessError(Exception):
    """Base class for all errors raised by this package."""


class DimensionError(QutritWitnessError, ValueError):
    """An operator or vector has the wrong shape."""


class NotHermitianError(QutritWitnessError, ValueError):
    """A matrix that must be Hermitian is not."""


class InvalidStateError(QutritWitnessError, ValueError):
    """A density operator or state vector violates its invariants."""

    def __init__(self, message, eigenvalue=None):
        super().__init__(message)
        self.eigenvalue = eigenvalue


class ConvergenceError(QutritWitnessError, RuntimeError):
    """An iterative procedure ran out of iterations."""


class NotAWitnessError(QutritWitnessError, ValueError):
    """The operator has negative expectation on some product state."""

    def __init__(self, message, extremum=None):
        super().__init__(message)
        self.extremum = extremum


class AffineDependenceError(QutritWitnessError, ValueError):
    """Points passed to a hyperplane fit do not span a hyperplane."""

    def __init__(self, message, dependency=None):
        super().__init__(message)
        self.dependency = dependency


class FamilyMismatchError(QutritWitnessError, ValueError):
    """A witness and a set of points refer to different coordinate families."""


class NotExpressibleError(QutritWitnessError, ValueError):
    """An operator has support outside the requested coefficient family."""


class RefinementError(ConvergenceError):
    """Facet refinement failed; ``trace`` holds every iteration so far."""

    def __init__(self, message, trace=None, best=None):
        super().__init__(message)
        self.trace = trace if trace is not None else []
        self.best = best


class OrbitCapError(QutritWitnessError, RuntimeError):
    """Orbit generation exceeded the configured size cap."""


class WitnessFileError(QutritWitnessError, ValueError):
    """Malformed witness file."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line

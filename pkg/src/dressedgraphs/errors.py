"""Exception hierarchy shared by the solver, the ensemble runner and the CLI."""


class GraphError(Exception):
    """Base class for all errors raised by this package."""


class ValidationError(GraphError, ValueError):
    """A graph or configuration violates its invariants."""


class UnsupportedTopologyError(ValidationError):
    """The operation is not defined for the given topology."""


class DomainError(GraphError, ValueError):
    """A function was evaluated outside its domain."""


class SolverFailure(GraphError):
    """Root finding could not produce the requested number of eigenvalues.

    ``trace`` holds the (density, root count) history of the adaptive scan.
    """

    def __init__(self, message, trace=None):
        super().__init__(message)
        self.trace = list(trace or [])


class DegeneracyError(GraphError):
    """Two eigenvalues coincide to within the degeneracy tolerance."""


class InconsistentStateError(GraphError):
    """An assembled eigenstate fails its boundary conditions."""


class QuadratureError(GraphError):
    """Composite Gauss-Legendre integration did not converge."""


class InsufficientBasisError(GraphError):
    """Too few states to form the requested sum over states."""


class ConfigError(ValidationError):
    """Bad ensemble, export or CLI configuration."""

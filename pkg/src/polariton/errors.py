"""Exception types raised by the library."""


class DomainError(ValueError):
    """An argument lies outside the domain of an operation."""


class ConvergenceError(RuntimeError):
    """An iterative solver failed to converge."""


class SpectralLeakageError(RuntimeError):
    """A frequency window is too narrow for a Fourier inversion."""

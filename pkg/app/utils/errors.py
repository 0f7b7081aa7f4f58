"""Typed errors raised across the toolkit.

Each class carries the process exit code that ``main.py`` uses when the
error escapes a CLI run.
"""


class DickeError(Exception):
    """Base class for every error raised by the toolkit."""

    exit_code: int = 1


class ConfigError(DickeError):
    """Invalid parameters, inconsistent bases or malformed config files."""

    exit_code = 2


class ConvergenceError(DickeError):
    """A truncated basis or spectrum cannot represent the requested state."""

    exit_code = 3


class TruncationError(ConvergenceError):
    """Weight leaks into the truncation guard band above tolerance."""


class CoverageError(ConvergenceError):
    """Converged eigenstates do not capture enough of a state's weight."""


class NumericalError(DickeError):
    """A numerical routine failed or produced an unusable result."""

    exit_code = 4


class EigensolverError(NumericalError):
    """Non-symmetric input or eigensolver failure."""


class BlochConstraintError(NumericalError):
    """A phase-space point lies outside the Bloch disk Q^2 + P^2 <= 4."""


class ZeroVolumeError(NumericalError):
    """A shell at or below the ground-state energy, or a distribution with no support on it."""


class ShellEdgeError(NumericalError):
    """No real q-root exists for a requested displacement on the shell."""


class NormalizationError(NumericalError):
    """A probability vector or mass does not sum to one."""


class ResolutionError(NumericalError):
    """A quadrature grid is coarser than the coherent-state width floor."""

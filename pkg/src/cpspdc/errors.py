"""Exception hierarchy shared by all modules.

The CLI maps these onto process exit codes: validation problems exit
with 2, solver failures with 3, and I/O problems with 4.
"""


class CpspdcError(Exception):
    """Base class for all toolkit errors."""

    exit_code = 1


class ValidationError(CpspdcError):
    """Bad input: unknown crystal, out-of-range wavelength, malformed file."""

    exit_code = 2


class DispersionRangeError(ValidationError):
    """Wavelength outside a Sellmeier model's validity range."""


class GridSpanError(ValidationError):
    """A spectral feature touches the grid boundary (span too small)."""


class SolverError(CpspdcError):
    """Root bracketing or refinement failed."""

    exit_code = 3


class IoError(CpspdcError):
    """File could not be read or written."""

    exit_code = 4

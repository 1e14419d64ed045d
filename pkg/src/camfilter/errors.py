"""Exception types shared across the toolkit.

All subclass ValueError so callers that only care about "bad input"
can catch one base class.
"""


class GridMismatchError(ValueError):
    """Two spectral quantities live on different wavelength grids."""


class SpectralRangeError(ValueError):
    """A target grid reaches outside the source data (no extrapolation)."""


class SingularMatrixError(ValueError):
    """A sensor matrix is rank deficient where full rank is required."""

    def __init__(self, label, detail=""):
        self.label = label
        msg = f"matrix {label!r} is rank deficient"
        if detail:
            msg += f": {detail}"
        super().__init__(msg)


class InvalidFilterError(ValueError):
    """A filter transmittance violates 0 < f <= 1."""


class NearSingularFilterError(InvalidFilterError):
    """A transmittance is below the floor that keeps diag(f) invertible."""


class ProjectionFailureError(ValueError):
    """Alternating projection could not reach the basis+box feasible set."""


class ParseError(ValueError):
    """A spectral data file failed validation; carries the file line."""

    def __init__(self, path, line, message):
        self.path = str(path)
        self.line = line
        super().__init__(f"{path}:{line}: {message}")

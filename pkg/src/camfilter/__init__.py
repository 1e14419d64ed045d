"""camfilter: design color prefilters that make cameras more colorimetric.

A camera's RGB sensitivities and the human observer's color matching
functions each span a 3-dimensional subspace of spectral space. This
package solves for the transmittance of a physical filter that, placed in
front of the camera, maximizes the Vora-Value similarity between the two
subspaces, and evaluates solved filters with a CIELAB color-difference
experiment. See the demos/ directory of the source distribution for
worked walkthroughs of each capability.
"""

from .colorimetry import (DeltaEStats, FilterEvaluator, Scene, TriResponse,
                          delta_e_stats, evaluate_filter, fit_correction,
                          illuminant_whites, render_responses, xyz_to_lab)
from .errors import (GridMismatchError, InvalidFilterError,
                     NearSingularFilterError, ParseError,
                     ProjectionFailureError, SingularMatrixError,
                     SpectralRangeError)
from .luther import LutherSolution, luther_filter
from .optimize import (AscentConfig, AscentTrace, BoxBounds, backtracking_step,
                       default_initial_filter, gradient_ascent_unconstrained,
                       project_feasible, projected_gradient_ascent)
from .spectral import (DEFAULT_GRID, BasisExpansion, FilterTransmittance,
                       SensorSet, SpectralGrid, Spectrum, cosine_basis,
                       full_rank_check, resample)
from .vora import (EPS_F, Projector, fd_gradient_oracle, filtered_vora_value,
                   projector, vora_gradient_c, vora_gradient_f, vora_value)

__version__ = "0.1.0"

__all__ = [
    "AscentConfig", "AscentTrace", "BasisExpansion", "BoxBounds",
    "DEFAULT_GRID", "DeltaEStats", "EPS_F", "FilterEvaluator",
    "FilterTransmittance", "GridMismatchError", "InvalidFilterError",
    "LutherSolution", "NearSingularFilterError", "ParseError",
    "ProjectionFailureError", "Projector", "Scene", "SensorSet",
    "SingularMatrixError", "SpectralGrid", "SpectralRangeError", "Spectrum",
    "TriResponse", "backtracking_step", "cosine_basis", "default_initial_filter",
    "delta_e_stats", "evaluate_filter", "fd_gradient_oracle",
    "filtered_vora_value", "fit_correction", "full_rank_check",
    "gradient_ascent_unconstrained", "illuminant_whites", "luther_filter",
    "project_feasible", "projected_gradient_ascent", "projector",
    "render_responses", "resample", "vora_gradient_c", "vora_gradient_f",
    "vora_value", "xyz_to_lab",
]

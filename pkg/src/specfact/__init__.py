"""Spectral factorization of matrix-valued Laurent polynomial densities.

Computes causal factors F with ``F F^adj`` reproducing a Hermitian density
on the unit circle, through scalar canonical factors, a triangular
pre-factorization, and polynomial unitary completions, with certified
residual and unitarity diagnostics.
"""

from .completion import (
    CompletionInput,
    CompletionSystem,
    SolutionBundle,
    build_system,
    solve_columns,
    unitarize,
    unitary_completion,
)
from .displacement import (
    COMPILED_KERNEL,
    DisplacementGenerator,
    dense_from_generator,
    displacement_of,
    generators,
    structured_solve,
)
from .errors import (
    InputFormatError,
    NumericalBreakdownError,
    PreconditionError,
    SpectralFactorError,
)
from .factorization import (
    Diagnostics,
    FactorizationConfig,
    FactorizationResult,
    StepDiagnostics,
    canonicalize,
    convergence_sweep,
    factorize,
)
from .laurent import (
    GridSamples,
    LaurentMatrix,
    LaurentPoly,
    coeffs_from_grid,
    coeffs_from_samples,
    det_laurent,
    eval_grid,
    hermitian_on_circle,
    project_minus,
    project_plus,
    project_window,
    residual_metric,
)
from .scalar import ScalarFactorParams, diagonal_factors, scalar_spectral_factor
from .triangular import TriangularFactor, solve_last_row, triangular_factor

__version__ = "0.1.0"

__all__ = [
    "COMPILED_KERNEL",
    "CompletionInput",
    "CompletionSystem",
    "Diagnostics",
    "DisplacementGenerator",
    "FactorizationConfig",
    "FactorizationResult",
    "GridSamples",
    "InputFormatError",
    "LaurentMatrix",
    "LaurentPoly",
    "NumericalBreakdownError",
    "PreconditionError",
    "ScalarFactorParams",
    "SolutionBundle",
    "SpectralFactorError",
    "StepDiagnostics",
    "TriangularFactor",
    "build_system",
    "canonicalize",
    "coeffs_from_grid",
    "coeffs_from_samples",
    "convergence_sweep",
    "dense_from_generator",
    "det_laurent",
    "displacement_of",
    "diagonal_factors",
    "eval_grid",
    "factorize",
    "generators",
    "hermitian_on_circle",
    "project_minus",
    "project_plus",
    "project_window",
    "residual_metric",
    "scalar_spectral_factor",
    "solve_columns",
    "solve_last_row",
    "structured_solve",
    "triangular_factor",
    "unitarize",
    "unitary_completion",
]

"""Extremal singular values of multivariate Vandermonde matrices on the torus."""
import os as _os

# Thread caps only take effect if set before numpy loads its BLAS.
if _os.environ.get("VANDAL_THREADS", "").isdigit():
    for _var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS", "MKL_NUM_THREADS"):
        _os.environ.setdefault(_var, _os.environ["VANDAL_THREADS"])

from .bounds import (
    BoundReport,
    all_bounds,
    cluster_specialization_bound,
    equispaced_exact,
    ingham_bound,
    ingham_threshold,
    kernel_bound,
    lower_bounds,
    separated_bounds,
    sharpness_upper,
    small_r_bound,
    table1,
    table2,
    trivial_bounds,
)
from .errors import (
    ConvergenceError,
    FeasibilityError,
    NoPairsError,
    PreconditionError,
    ResourceCapError,
    VandalError,
)
from .localizer import (
    PoissonDiagnostic,
    PsiParams,
    phi_hat,
    poisson_check,
    positivity_threshold,
    psi_at_zero,
    psi_eval,
    psi_hat,
    psi_hat_at_zero,
    ratio_closed_form,
    ratio_lower_bounds,
)
from .torus import (
    NodeSet,
    gen_equispaced,
    gen_grid_subset,
    gen_quasi_grid,
    gen_random_separated,
    separation,
    wrap_distance,
)
from .vandermonde import SpectralResult, VandermondeSpec, build_matrix, gram_matrix, spectrum

__version__ = "0.1.0"

__all__ = [
    "BoundReport",
    "all_bounds",
    "cluster_specialization_bound",
    "equispaced_exact",
    "ingham_bound",
    "ingham_threshold",
    "kernel_bound",
    "lower_bounds",
    "separated_bounds",
    "sharpness_upper",
    "small_r_bound",
    "table1",
    "table2",
    "trivial_bounds",
    "ConvergenceError",
    "FeasibilityError",
    "NoPairsError",
    "PreconditionError",
    "ResourceCapError",
    "VandalError",
    "PoissonDiagnostic",
    "PsiParams",
    "phi_hat",
    "poisson_check",
    "positivity_threshold",
    "psi_at_zero",
    "psi_eval",
    "psi_hat",
    "psi_hat_at_zero",
    "ratio_closed_form",
    "ratio_lower_bounds",
    "NodeSet",
    "gen_equispaced",
    "gen_grid_subset",
    "gen_quasi_grid",
    "gen_random_separated",
    "separation",
    "wrap_distance",
    "SpectralResult",
    "VandermondeSpec",
    "build_matrix",
    "gram_matrix",
    "spectrum",
]

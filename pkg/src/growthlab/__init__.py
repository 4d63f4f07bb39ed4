"""growthlab: numerical laboratory for u_t + Delta^2 u = det(D^2 u) + lambda f.

Grid calculus, energy landscape and Nehari classification, clamped-plate
eigenpairs, the mountain-pass level, adaptive IMEX evolution with blow-up
detection, the radial disk problem, and a reproducible experiment harness.
"""

from .grid import (
    DIRICHLET,
    Field2D,
    Grid2D,
    NAVIER,
    biharmonic,
    clamped_bump,
    gradient,
    hessian_det,
    integrate,
    laplacian,
    random_clamped_field,
    sample,
    zero_field,
)
from .energy import (
    NehariClass,
    NormBundle,
    cubic_pairing_residual,
    energy_J,
    gradient_square_residual,
    holder_gap,
    nehari_classify,
    nonlinear_I,
    norms,
)
from .spectral import SpectralField, from_physical, spectrum, to_physical
from .eigen import EigenBasis, dirichlet_eigenpairs, poincare_ratio, project_low_modes
from .mountain_pass import (
    MountainPassEstimate,
    MountainPassOptions,
    embedding_constant,
    minimize_level,
    ray_peak_level,
    stationary_solution,
)
from .evolution import (
    Diagnostics,
    EvolveOptions,
    FateVerdict,
    detect_blowup,
    dissipation_residuals,
    monotonicity_monitor,
    simulate,
    step_imex,
)
from .radial import (
    RadialField,
    RadialOptions,
    amplitude_sweep,
    blowup_functional,
    blowup_functional_byparts,
    functional_ode_residual,
    radial_operators,
    simulate_radial,
)
from .checkpoint import CheckpointError, load_checkpoint, save_checkpoint
from .config import ConfigError, ExperimentConfig, parse_config, render_config
from .experiments import run_experiment

__version__ = "0.1.0"

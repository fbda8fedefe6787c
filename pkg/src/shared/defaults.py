from __future__ import annotations

# Centralized default values for the numerics and the command-line front end.
# Single source of truth for defaults across the library, RunConfig and the tests.

# Finite differences
FD_DEFAULT_STENCIL_ORDER = 2
FD_ORDER4_STEP = 1e-3
FD_MAX_MIXED_ORDER = 4
MAX_J_ALPHA = 4

# Exponential integral
EI_SERIES_MAX_TERMS = 500
EI_SERIES_NEGATIVE_LIMIT = 1.0
EI_ASYMPTOTIC_THRESHOLD = 40.0
EI_CONTINUED_FRACTION_MAX_ITER = 500
EI_ORACLE_EPSREL = 1e-13
EI_ORACLE_LIMIT = 200

# Root finding
ROOT_RELATIVE_TOLERANCE = 1e-12
DOMAIN_SCAN_MAX_DOUBLINGS = 200

# Kepler demo system (figure parameters)
KEPLER_GM = 1.0
KEPLER_MASS = 1.0
KEPLER_LAMBDA = 1.0
KEPLER_ETA = -1
KEPLER_C2 = 0.0

# Rotation-curve grid
GRID_R_MIN = 0.2
GRID_R_MAX = 200.0
GRID_SAMPLES = 256
GRID_KIND = "log"
OUTPUT_FORMAT = "csv"
OUTPUT_SIGNIFICANT_DIGITS = 17

# Residual suite
RESIDUAL_ENERGY_FACTOR = 1.0
RESIDUAL_NONLINEAR_SAMPLES = 32
RESIDUAL_NONLINEAR_FD_STEP = 1e-4
RESIDUAL_INNER_FRACTION = 0.8
TOLERANCE_LINEAR_RESIDUAL = 1e-8
TOLERANCE_RADIAL_RESIDUAL = 1e-10
TOLERANCE_NONLINEAR_RADIAL = 1e-6
TOLERANCE_U_ADD_FD = 1e-6
TOLERANCE_U_ADD_NONLINEAR = 1e-4
TOLERANCE_VIRIAL = 1e-10

# SVG figure
PLOT_WIDTH_PX = 800
PLOT_HEIGHT_PX = 600
PLOT_HASH_SALT = "scale-dynamics"

# Environment
CONFIG_PATH_ENV_VAR = "SCALE_DYNAMICS_CONFIG"

import logging

# --- Numerical Tolerances ---
# Two actions closer than this (absolute, per component) are the same action
ACTION_TOL = 1e-9
# Grid points within this of the maximum utility count as tied optima
UTILITY_TIE_TOL = 1e-9
# Slack allowed in f(a) + f(b) <= f(a ^ b) + f(a v b)
SUPERMODULAR_TOL = 1e-9
# A sampled cross-partial below -CROSS_PARTIAL_TOL is a violation
CROSS_PARTIAL_TOL = 1e-6
# Finite-difference step as a fraction of the interval width
FD_STEP_FRACTION = 1e-4

# --- Best Response Solver ---
DEFAULT_GRID_POINTS = 201
DEFAULT_REFINE_ROUNDS = 3
DEFAULT_REFINE_SHRINK = 0.1
# Off by default: the vertex is read from utility differences, so it is not
# invariant under affine rescaling of utilities
DEFAULT_PARABOLIC_POLISH = False

# --- Dynamics ---
DEFAULT_FIX_TOL = 1e-6
DEFAULT_MAX_ITERS = 10_000
CYCLE_WINDOW = 100
DEFAULT_MAX_DRAWS = 64

# --- Enumeration Caps ---
ENUMERATION_CAP = 10 ** 7
# Lattice checks are quadratic in the joint space size
LATTICE_CAP = 2_000
# Sync best-response iterations used to polish a grid Nash candidate
POLISH_ITERS = 100

# --- Diagnostics Sampling ---
DEFAULT_SUPERMODULAR_PAIRS = 500
DEFAULT_CROSS_PARTIAL_POINTS = 50
DEFAULT_BR_PROFILES = 100
DEFAULT_BR_ALPHAS = (1.5, 2.0)

# --- Reports ---
SPEC_VERSION = "1"
TRACE_SIGNIFICANT_DIGITS = 12

# --- Logging ---
LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'
DEFAULT_LOG_LEVEL = logging.WARNING

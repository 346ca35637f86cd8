"""Shared numerical and runtime configuration for qcore."""
import os

from dotenv import load_dotenv

load_dotenv()

ARTIFACT_VERSION = "0.1.0"

# ============================================================================
# Capacity Limits
# ============================================================================
DENSE_CAP = int(os.getenv("QCORE_DENSE_CAP", "16000"))  # Max N_B for dense diagonalization
MAX_BASIS_DIM = int(os.getenv("QCORE_MAX_BASIS_DIM", "3000000"))  # Memory budget for band bases
MAX_BASIS_SITES = 32
FULL_HAMILTONIAN_MAX_SITES = 14  # Full 2^n operator, validation only
PROJECTION_CHECK_MAX_SITES = 12  # Dense diagonalization of the full operator

# ============================================================================
# Eigensolver
# ============================================================================
SOLVER_TOL = float(os.getenv("QCORE_SOLVER_TOL", "1e-10"))  # Residual tolerance ||Hv - lv||
ITERATIVE_MAX_ITER = int(os.getenv("QCORE_ITERATIVE_MAX_ITER", "20000"))
ITERATIVE_START_SEED = 20001  # Fixed start vector for reproducible Lanczos runs
DEGENERACY_TOL = 1e-12  # Eigenvalue gaps below this are flagged degenerate

# ============================================================================
# Level Statistics
# ============================================================================
ETA_S0 = 0.4729  # First crossing of the Poisson and Wigner surmise densities
ETA_BOOTSTRAP_SAMPLES = 200
ETA_BOOTSTRAP_SEED = 7
MIN_LEVELS_PER_WINDOW = 50  # Below this eta-vs-energy windows get a warning

# ============================================================================
# Fermi-Dirac Fits & Temperatures
# ============================================================================
FD_BETA_MAX = 1e3  # |beta| bound, in units of 1/delta
FD_BETA_MIN = 1e-2  # Smallest nonzero |beta| on the coarse grid
FD_GRID_POINTS = 129  # beta = 0 plus 64 log-spaced points of each sign
FD_REFINE_TOL = 1e-6
FD_BRACKET_WIDTH = 10.0  # mu bracket half-padding, in units of 1/|beta|
NORMALIZATION_TOL = 1e-8
CANONICAL_BETA_MAX = 1e3

# ============================================================================
# Chaos / Thermalization Border Constants
# ============================================================================
C_CHAOS = 3.7  # J_c n / delta from the eta crossing
C_THERMAL = 3.2  # J_t n / delta from the sigma_FD crossing

# ============================================================================
# Runtime
# ============================================================================
DEFAULT_THREADS = int(os.getenv("QCORE_THREADS", "1"))
DEFAULT_OUT_DIR = os.getenv("QCORE_OUT_DIR", "output")
LOG_DIR = os.getenv("QCORE_LOG_DIR", "logs")
LOG_LEVEL = os.getenv("QCORE_LOG_LEVEL", "INFO")
CSV_SIGNIFICANT_DIGITS = 12

import os
import logging
from dotenv import load_dotenv

logger = logging.getLogger(__name__)

# Optional overrides from a local .env file; nothing here is required.
load_dotenv()


def _env_float(name: str, default: float) -> float:
    raw = os.getenv(f"CASIMIR_{name}")
    if raw is None or raw == "":
        return default
    try:
        value = float(raw)
    except ValueError:
        logger.warning(f"Ignoring CASIMIR_{name}={raw!r}: not a number, using {default}")
        return default
    logger.debug(f"CASIMIR_{name} overridden to {value}")
    return value


def _env_int(name: str, default: int) -> int:
    return int(_env_float(name, float(default)))


# Regime thresholds for the series evaluators
SMALL_X_MAX = _env_float("SMALL_X_MAX", 0.1)
LARGE_X_MIN = _env_float("LARGE_X_MIN", 10.0)
SMALL_KAPPA_MAX = _env_float("SMALL_KAPPA_MAX", 0.2)
LARGE_KAPPA_MIN = _env_float("LARGE_KAPPA_MIN", 25.0)
PAIRWISE_KAPPA_MAX = _env_float("PAIRWISE_KAPPA_MAX", 0.5)

# Where F, G switch from Ci/si composition to the large-x series
F_SERIES_SWITCH = _env_float("F_SERIES_SWITCH", 30.0)
# Higher derivatives cancel more strongly, so they switch later
DERIVATIVE_SERIES_SWITCH = _env_float("DERIVATIVE_SERIES_SWITCH", 40.0)
MAX_DERIVATIVE_ORDER = 6

# Quadrature
DEFAULT_TOL = _env_float("DEFAULT_TOL", 1e-10)
QUAD_LIMIT = _env_int("QUAD_LIMIT", 200)

# delta_n = DELTA_START * DELTA_RATIO**n, n = 0..DELTA_COUNT-1
DELTA_START = _env_float("DELTA_START", 1e-2)
DELTA_RATIO = _env_float("DELTA_RATIO", 0.5)
DELTA_COUNT = _env_int("DELTA_COUNT", 7)
EXTRAPOLATION_ORDER = _env_int("EXTRAPOLATION_ORDER", 3)

# Sweep driver
SWEEP_WORKERS = _env_int("SWEEP_WORKERS", 4)

# Bounds on RunConfig.tol
MIN_TOL = 1e-12
MAX_TOL = 1e-2

import os
from pathlib import Path

import platformdirs


RESSOURCES_PATH = Path(__file__).parent.parent / "ressources"
G7_NETWORK_PATH = RESSOURCES_PATH / "g7.edges"
G7_LEADERS_PATH = RESSOURCES_PATH / "g7.leaders"
SWITCHING_SCHEDULE_PATH = RESSOURCES_PATH / "switching.schedule"
PROGRAM_NAME = "fsn-selector"
DEBUG = os.environ.get("FSN_SELECTOR_DEBUG", "") not in ("", "0")
CONFIG_PATH = Path(platformdirs.user_config_path(PROGRAM_NAME) / "config.toml")
MAX_RECENT_FILES = 12

# Numerical defaults.
DEFAULT_SEED = 2019
DEFAULT_TOL = 1e-12
DEFAULT_RATIO_TOL = 1e-9
DEFAULT_EPS = 1e-8
DEFAULT_GUARD = 1e-6
DEFAULT_CONFIRM_TICKS = 10
DEFAULT_H = 0.01
DEFAULT_T_END = 100.0
DEFAULT_K_END = 300
DEFAULT_INPUT = 0.1
MAX_ITER_CAP = 10**6
# h * max_i [L_B]_ii must not exceed this value.
STABILITY_LIMIT = 0.5
# Rates below this scale are treated as numerically converged.
UNDERFLOW = 1e-300
# Slack on the non-strict convergence rate comparison.
RATE_TOLERANCE = 1e-10
CONSENSUS_BAND = 1e-3
# Horizons of the distributed neighbor selection (time, iterations).
DEFAULT_SELECTION_T_END = 300.0
DEFAULT_SELECTION_K_END = 3000

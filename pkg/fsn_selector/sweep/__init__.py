from fsn_selector.sweep.checks import InstanceReport, check_instance
from fsn_selector.sweep.sweep_worker import run_sweep

__all__ = ["InstanceReport", "check_instance", "run_sweep"]

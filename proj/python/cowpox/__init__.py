"""Agent-based and mean-field simulator of jailbreak spread and Cowpox cures.

Scenario values may be given as Python values; they are converted to the
text form used by scenario files (lists become comma-separated).
"""

from . import _cowpox
from ._cowpox import (
    ConfigError,
    cowpox_rhs,
    integrate_cowpox,
    integrate_sir,
    read_metrics_csv,
    scenario_keys,
    sir_rhs,
    stationary_class,
)

__version__ = _cowpox.__version__

METRICS_COLUMNS = (
    "round",
    "current_rate",
    "cumulative_rate",
    "beta_t",
    "alpha_q",
    "recovered",
    "carriers_virus",
    "carriers_cure",
    "detections",
)


def _text(value):
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (list, tuple)):
        return ",".join(_text(v) for v in value)
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _values(config):
    return {str(k): _text(v) for k, v in (config or {}).items()}


def resolve_scenario(config=None):
    """Defaults overridden by `config`, validated, as key -> text."""
    return _cowpox.resolve_scenario(_values(config))


def load_scenario(path):
    return _cowpox.load_scenario(str(path))


def run(config=None, replicate=0):
    """Metrics columns of one replicate."""
    return _cowpox.run(_values(config), replicate)


def run_replicates(config=None, jobs=0):
    return _cowpox.run_replicates(_values(config), jobs)


def run_to_dir(config, out, events=False):
    return _cowpox.run_to_dir(_values(config), str(out), events)


def compare(run_dir):
    return _cowpox.compare(str(run_dir))


__all__ = [
    "ConfigError",
    "METRICS_COLUMNS",
    "compare",
    "cowpox_rhs",
    "integrate_cowpox",
    "integrate_sir",
    "load_scenario",
    "read_metrics_csv",
    "resolve_scenario",
    "run",
    "run_replicates",
    "run_to_dir",
    "scenario_keys",
    "sir_rhs",
    "stationary_class",
]

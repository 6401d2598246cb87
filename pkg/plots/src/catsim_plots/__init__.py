"""Figure rendering for catsim outputs, fed purely by its files."""

from .figures import plot_curves, plot_snapshots
from .io import (
    METRIC_COLUMNS,
    SchemaError,
    find_runs,
    read_config,
    read_grid_csv,
    read_metrics,
    read_pgm,
    run_label,
    snapshot_times,
)

__version__ = "0.1.0"

__all__ = [
    "plot_curves",
    "plot_snapshots",
    "METRIC_COLUMNS",
    "SchemaError",
    "find_runs",
    "read_config",
    "read_grid_csv",
    "read_metrics",
    "read_pgm",
    "run_label",
    "snapshot_times",
    "__version__",
]

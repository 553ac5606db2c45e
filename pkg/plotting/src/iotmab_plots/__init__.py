"""Figure rendering for iotmab CSV output (timeseries panels and gain curves)."""

from .csvio import SchemaError, read_summary, read_timeseries
from .figures import DEFAULT_STYLES, PlotSpec, plot_gains, plot_timeseries

__version__ = "0.1.0"

__all__ = [
    "DEFAULT_STYLES",
    "PlotSpec",
    "SchemaError",
    "plot_gains",
    "plot_timeseries",
    "read_summary",
    "read_timeseries",
]

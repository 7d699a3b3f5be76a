"""Result records produced by simulations and oracle runs.

These objects carry the raw data (trajectories) as well as the summaries written to
disk by the command line.
"""

import csv
import logging
import math
from typing import List, Optional

import numpy as np

from .core import DataObject
from .switching import SwitchingSignal

log = logging.getLogger(__name__)

CSV_HEADER = ["t", "norm_x", "log_norm_x"]


def format_float(value):
    """Format a float with full double precision (17 significant digits)."""

    value = float(value)

    if math.isnan(value):
        return "nan"

    if math.isinf(value):
        return "inf" if value > 0 else "-inf"

    return f"{value:.17g}"


class Trajectory(DataObject):
    """States `x(0..T)` of a switched system under one signal."""

    times: List[int]
    states: np.ndarray
    norms: List[float]

    @property
    def T(self):
        """Return the final time of this trajectory."""
        return self.times[-1]

    def log_norms(self):
        """Return `ln ||x(t)||`, with `-inf` where the state vanishes."""
        return [math.log(norm) if norm > 0 else -math.inf for norm in self.norms]

    def write_csv(self, fp):
        """Write `t,norm_x,log_norm_x` rows to the open text file `fp`."""

        writer = csv.writer(fp, lineterminator="\n")
        writer.writerow(CSV_HEADER)

        for t, norm, log_norm in zip(self.times, self.norms, self.log_norms()):
            writer.writerow([t, format_float(norm), format_float(log_norm)])


class DecayFit(DataObject):
    """A least-squares line through `(t, ln ||x(t)||)`."""

    rate: float
    intercept: float
    r2: float


class RunRecord(DataObject):
    """Statistics for a single Monte Carlo run."""

    run: int
    x0: List[float]
    signal: SwitchingSignal
    max_ratio: float
    divergent: bool
    fit: Optional[DecayFit] = None
    trajectory: Optional[Trajectory] = None

    def to_api(self):
        """Convert to a JSON-safe form, leaving out the raw trajectory."""

        data = super().to_api()
        data.pop("trajectory", None)
        data["signal"] = self.signal.to_api()

        return data


class MonteCarloSummary(DataObject):
    """Aggregate statistics over Monte Carlo runs."""

    num_runs: int = 0
    divergent_runs: int = 0
    threshold: float
    min_rate: Optional[float] = None
    max_rate: Optional[float] = None
    mean_rate: Optional[float] = None
    max_ratio: Optional[float] = None
    runs: List[RunRecord] = []

    def to_api(self):
        """Convert to a JSON-safe form with per-run records."""

        data = super().to_api()
        data["runs"] = [run.to_api() for run in self.runs]

        return data


class OracleReport(DataObject):
    """Result of checking a certificate against every admissible product."""

    max_len: int
    lam: float
    c: float
    products_checked: int = 0
    violations: int = 0
    worst_ratio: float = 0.0
    worst_margin: Optional[float] = None
    worst_norm: Optional[float] = None
    worst_bound: Optional[float] = None
    worst_signal: Optional[SwitchingSignal] = None

    @property
    def sound(self):
        """Determine if no product exceeded the certified bound."""
        return self.violations == 0

    def to_api(self):
        """Convert to a JSON-safe form."""

        data = super().to_api()
        data["sound"] = self.sound

        if self.worst_signal is not None:
            data["worst_signal"] = self.worst_signal.to_api()

        return data

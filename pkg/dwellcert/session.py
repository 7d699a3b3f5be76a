"""Provides a single entry point for analysing one switched family."""

import logging
import math

from . import certifier, family, simulator
from .core import AssumptionViolated, SignalError
from .switching import periodic_signal

log = logging.getLogger(__name__)


class Session(object):
    """An analysis session bound to one `SwitchedFamily`."""

    def __init__(self, fam):
        """Initialize the session and classify the family.

        :param fam: the `SwitchedFamily` under analysis
        """
        self.family = fam
        self.partition = family.classify(fam)
        self._params = None

        log.info(
            "Initialized session :: N=%d d=%d delta=%d Delta=%d",
            fam.N,
            fam.d,
            fam.delta,
            fam.Delta,
        )

    @property
    def params(self):
        """Return the derived parameters (computed on first access).

        :raises AssumptionViolated: if no admissible `m` exists
        """

        if self._params is None:
            self._params = family.derive(self.family, self.partition)

        return self._params

    def classify(self):
        """Return the partition, norms, radii and the `(m, rho)` selection."""

        fam = self.family

        report = {
            "N": fam.N,
            "d": fam.d,
            "delta": fam.delta,
            "Delta": fam.Delta,
            "stable": self.partition.stable,
            "unstable": self.partition.unstable,
            "spectral_radii": fam.radii(),
            "norms": fam.norms(),
            "M": fam.max_norm(),
        }

        try:
            m, rho = family.find_m_rho(fam, self.partition)
        except AssumptionViolated as err:
            report["assumption_violated"] = str(err)
        else:
            report["m"] = m
            report["rho"] = rho
            report["stable_power_norms"] = family.stable_power_norms(
                fam, self.partition
            )

        return report

    def certify(self, lam=None):
        """Certify the family, searching for the decay rate if `lam` is None."""
        return certifier.certify(self.family, lam=lam, part=self.partition)

    def monte_carlo(self, num_signals, horizon, x0_box, seed=0, workers=1):
        """Run the Monte Carlo experiment over restricted random signals."""

        return simulator.monte_carlo(
            self.family,
            self.partition,
            self.params,
            num_signals=num_signals,
            horizon=horizon,
            x0_box=x0_box,
            seed=seed,
            workers=workers,
        )

    def simulate_periodic(self, pattern, x0, horizon):
        """Simulate one periodic signal that covers `horizon` steps."""

        for index, _ in pattern:
            if index not in self.family.indices:
                raise SignalError(f"pattern index out of range: {index}")

        period = periodic_signal(pattern).horizon
        sig = periodic_signal(pattern, repetitions=math.ceil(horizon / period))

        log.info("simulating periodic signal :: %s", pattern)

        return simulator.run_single(self.family, sig, x0, horizon)

    def oracle(self, cert, max_len):
        """Check `cert` against every restricted product up to `max_len`."""

        return simulator.oracle_check(
            self.family, self.partition, self.params, cert, max_len
        )

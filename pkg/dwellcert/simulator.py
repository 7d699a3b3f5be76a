"""Trajectories, Monte Carlo experiments and the certificate oracle."""

import logging
import math
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import linalg
from .core import CertificationError, SimulationError
from .records import (
    DecayFit,
    MonteCarloSummary,
    OracleReport,
    RunRecord,
    Trajectory,
)
from .switching import check_enumeration_length, enumerate_signals, random_signal

log = logging.getLogger(__name__)

# a run is divergent once ||x(t)|| exceeds this multiple of ||x0||
DIVERGENCE_THRESHOLD = 1e6

# fewest positive samples accepted by `fit_decay`
MIN_FIT_SAMPLES = 10

# relative slack when comparing a product norm against its bound
ORACLE_SLACK = 1e-12


def _as_state(fam, x0):
    x0 = np.array(x0, dtype=np.float64)

    if x0.shape != (fam.d,):
        raise SimulationError(f"x0 must have dimension {fam.d}, got shape {x0.shape}")

    return x0


def simulate(fam, sig, x0, T=None):
    """Run `x(t+1) = A_sigma(t) x(t)` for `t = 0..T-1`.

    :param T: final time (defaults to the signal horizon)
    """

    x0 = _as_state(fam, x0)

    if T is None:
        T = sig.horizon

    sigma = sig.indices(T)

    states = np.empty((T + 1, fam.d), dtype=np.float64)
    states[0] = x0

    for t, index in enumerate(sigma):
        states[t + 1] = fam[index] @ states[t]

    norms = [float(norm) for norm in np.linalg.norm(states, axis=1)]

    return Trajectory(times=list(range(T + 1)), states=states, norms=norms)


def product_norms(fam, sig, T=None):
    """Return `||A_sigma(t-1) ... A_sigma(0)||` for `t = 1..T`."""

    if T is None:
        T = sig.horizon

    product = linalg.identity(fam.d)
    norms = []

    for index in sig.indices(T):
        product = fam[index] @ product
        norms.append(linalg.spectral_norm(product))

    return norms


def fit_decay(norms, start=1):
    """Fit `ln norms[t] = rate * t + intercept` by least squares.

    Samples before `start` and zero norms are left out.

    :returns: a `DecayFit` with the slope, intercept and coefficient of determination
    """

    samples = [
        (t, math.log(norm))
        for t, norm in enumerate(norms)
        if t >= start and norm > 0 and math.isfinite(norm)
    ]

    if len(samples) < MIN_FIT_SAMPLES:
        raise SimulationError(
            f"need {MIN_FIT_SAMPLES} positive samples to fit, got {len(samples)}"
        )

    t, y = (np.array(col, dtype=np.float64) for col in zip(*samples))

    rate, intercept = np.polyfit(t, y, 1)

    residual = y - (rate * t + intercept)
    ss_res = float(np.sum(residual**2))
    ss_tot = float(np.sum((y - np.mean(y)) ** 2))

    r2 = 1.0 if ss_tot == 0.0 else 1.0 - ss_res / ss_tot

    return DecayFit(rate=float(rate), intercept=float(intercept), r2=r2)


def run_single(fam, sig, x0, T=None, run=0, threshold=DIVERGENCE_THRESHOLD):
    """Simulate one signal and collect its statistics."""

    traj = simulate(fam, sig, x0, T)
    x0_norm = traj.norms[0]

    if x0_norm > 0:
        max_ratio = max(traj.norms) / x0_norm
    else:
        max_ratio = 0.0

    try:
        fit = fit_decay(traj.norms)
    except SimulationError as err:
        log.debug("run %d :: no decay fit (%s)", run, err)
        fit = None

    return RunRecord(
        run=run,
        x0=[float(x) for x in traj.states[0]],
        signal=sig,
        max_ratio=max_ratio,
        divergent=max_ratio > threshold,
        fit=fit,
        trajectory=traj,
    )


def summarize(runs, threshold=DIVERGENCE_THRESHOLD):
    """Aggregate run records; the result does not depend on their order."""

    runs = sorted(runs, key=lambda rec: rec.run)
    rates = [rec.fit.rate for rec in runs if rec.fit is not None]

    summary = MonteCarloSummary(
        num_runs=len(runs),
        divergent_runs=sum(1 for rec in runs if rec.divergent),
        threshold=threshold,
        runs=runs,
    )

    if runs:
        summary.max_ratio = max(rec.max_ratio for rec in runs)

    if rates:
        summary.min_rate = min(rates)
        summary.max_rate = max(rates)
        summary.mean_rate = math.fsum(rates) / len(rates)

    return summary


def monte_carlo(
    fam,
    part,
    dp,
    num_signals,
    horizon,
    x0_box,
    seed=0,
    threshold=DIVERGENCE_THRESHOLD,
    workers=1,
):
    """Simulate random restricted signals from random initial states.

    Run `k` draws its signal and its `x0` (uniform on `[-x0_box, x0_box]^d`) from a
    generator seeded with `(seed, k)`, so every run is reproducible on its own.

    :param workers: number of threads used to execute the runs
    """

    def execute(run):
        rng = np.random.default_rng([seed, run])
        x0 = rng.uniform(-x0_box, x0_box, size=fam.d)
        sig = random_signal(fam, part, dp, horizon, rng)

        return run_single(fam, sig, x0, horizon, run=run, threshold=threshold)

    log.info("running %d Monte Carlo signals (horizon %d)", num_signals, horizon)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            runs = list(pool.map(execute, range(num_signals)))
    else:
        runs = [execute(run) for run in range(num_signals)]

    summary = summarize(runs, threshold)

    log.info(
        "Monte Carlo complete :: %d runs, %d divergent",
        summary.num_runs,
        summary.divergent_runs,
    )

    return summary


def oracle_check(fam, part, dp, cert, max_len):
    """Check `||W|| <= c e^(-lambda |W|)` for every restricted product up to `max_len`.

    :raises CertificationError: if `cert` does not certify the family
    :raises SignalError: if `max_len` is out of range
    """

    if not cert.certified:
        raise CertificationError("no certificate to check")

    check_enumeration_length(fam, part, dp, max_len, restricted=True)

    report = OracleReport(max_len=max_len, lam=cert.lam, c=cert.c)
    powers = {}

    def segment_power(index, dwell):
        key = (index, dwell)

        if key not in powers:
            powers[key] = linalg.mat_pow(fam[index], dwell)

        return powers[key]

    for length in range(1, max_len + 1):
        bound = cert.bound(length)

        for sig in enumerate_signals(fam, part, dp, length, restricted=True):
            product = linalg.identity(fam.d)

            for seg in sig.segments:
                product = segment_power(seg.index, seg.dwell) @ product

            norm = linalg.spectral_norm(product)
            ratio = norm / bound

            report.products_checked += 1

            if norm > bound * (1.0 + ORACLE_SLACK):
                report.violations += 1

            if report.worst_signal is None or ratio > report.worst_ratio:
                report.worst_ratio = ratio
                report.worst_margin = bound - norm
                report.worst_norm = norm
                report.worst_bound = bound
                report.worst_signal = sig

    if report.sound:
        log.info("oracle :: %d products within bound", report.products_checked)
    else:
        log.warning(
            "oracle :: %d of %d products exceed the certified bound",
            report.violations,
            report.products_checked,
        )

    return report

"""Unit tests for trajectories, Monte Carlo runs and the certificate oracle."""

import math
import random
import statistics

import numpy as np
import pytest

from dwellcert import certifier, family, simulator, switching
from dwellcert.core import CertificationError, SignalError, SimulationError
from dwellcert.family import SwitchedFamily
from dwellcert.switching import SwitchingSignal, periodic_signal, random_signal


def test_simulate_shape(ex2):
    """A trajectory holds `T + 1` states."""

    sig = SwitchingSignal[[(1, 2), (2, 3)]]
    traj = simulator.simulate(ex2, sig, [1.0, 1.0])

    assert traj.T == 5
    assert traj.times == [0, 1, 2, 3, 4, 5]
    assert traj.states.shape == (6, 2)
    assert traj.norms[0] == pytest.approx(math.sqrt(2))


def test_simulate_diagonal_exact(ex2):
    """Diagonal dynamics scale each coordinate independently."""

    sig = SwitchingSignal[[(1, 2), (2, 3)]]
    traj = simulator.simulate(ex2, sig, [1.0, 1.0])

    assert traj.states[-1][0] == pytest.approx(0.92**2 * 1.24**3)
    assert traj.states[-1][1] == pytest.approx(0.77**2 * 0.89**3)


def test_simulate_bad_state(ex2):
    """The initial state must match the family dimension."""

    with pytest.raises(SimulationError):
        simulator.simulate(ex2, SwitchingSignal[[(1, 2)]], [1.0, 2.0, 3.0])


def test_simulate_is_linear(ex3, classified):
    """Scaling the initial state scales the whole trajectory."""

    fam, part, dp = classified(ex3)
    sig = periodic_signal([(1, 2), (2, 3)], repetitions=20)

    base = simulator.simulate(fam, sig, [0.3, -1.7])
    scaled = simulator.simulate(fam, sig, [0.3 * -4.5, -1.7 * -4.5])

    assert np.allclose(scaled.states, -4.5 * base.states, rtol=1e-10, atol=0)


def test_state_bounded_by_product(ex1, classified):
    """`||x(t)|| <= ||W_t|| ||x0||` at every step."""

    fam, part, dp = classified(ex1)
    rng = np.random.default_rng(3)

    for seed in range(20):
        sig = random_signal(fam, part, dp, 60, seed)
        x0 = rng.uniform(-10, 10, size=2)

        traj = simulator.simulate(fam, sig, x0, 60)
        products = simulator.product_norms(fam, sig, 60)

        for t in range(1, 61):
            bound = products[t - 1] * traj.norms[0]
            assert traj.norms[t] <= bound * (1 + 1e-9)


def test_product_norms_diagonal(ex2):
    """Product norms of the diagonal family follow the first coordinate."""

    sig = SwitchingSignal[[(2, 3), (1, 2)]]
    norms = simulator.product_norms(ex2, sig)

    assert norms[0] == pytest.approx(1.24)
    assert norms[4] == pytest.approx(1.24**3 * 0.92**2)


def test_fit_decay_exact():
    """An exact exponential is fit perfectly."""

    norms = [0.9**t for t in range(50)]
    fit = simulator.fit_decay(norms)

    assert fit.rate == pytest.approx(math.log(0.9))
    assert fit.intercept == pytest.approx(0.0, abs=1e-9)
    assert fit.r2 == pytest.approx(1.0)


def test_fit_decay_constant():
    """A flat series has zero rate and a perfect fit."""

    fit = simulator.fit_decay([1.0] * 20)

    assert fit.rate == pytest.approx(0.0, abs=1e-12)
    assert fit.r2 == 1.0


def test_fit_decay_too_short():
    """At least ten positive samples are needed."""

    with pytest.raises(SimulationError):
        simulator.fit_decay([1.0] * 10)

    with pytest.raises(SimulationError):
        simulator.fit_decay([1.0] + [0.0] * 30)


def test_run_single_zero_state(ex2):
    """A zero initial state stays at rest."""

    sig = periodic_signal([(1, 2), (2, 3)], repetitions=5)
    rec = simulator.run_single(ex2, sig, [0.0, 0.0], 25)

    assert rec.max_ratio == 0.0
    assert not rec.divergent
    assert rec.fit is None


def test_counterexample_diverges(ex1):
    """Periodic dwell-3 switching destabilizes the counterexample."""

    sig = periodic_signal([(1, 3), (2, 3)], repetitions=67)

    rec = simulator.run_single(ex1, sig, [-1.0, 1.0], 200)
    assert rec.max_ratio > 1e3
    assert rec.fit.rate > 0

    sig = periodic_signal([(1, 3), (2, 3)], repetitions=67 * 2)

    rec = simulator.run_single(ex1, sig, [-1.0, 1.0], 400)
    assert rec.divergent


def test_stabilized_decays(stabilized):
    """The same signal stabilizes the alternative unstable partner."""

    sig = periodic_signal([(1, 3), (2, 3)], repetitions=67)
    rec = simulator.run_single(stabilized, sig, [-1.0, 1.0], 200)

    assert not rec.divergent
    assert rec.fit.rate < 0


def test_monte_carlo_is_deterministic(ex3, classified):
    """The same seed gives the same summary."""

    fam, part, dp = classified(ex3)

    one = simulator.monte_carlo(fam, part, dp, 20, 50, 100.0, seed=5)
    two = simulator.monte_carlo(fam, part, dp, 20, 50, 100.0, seed=5)
    other = simulator.monte_carlo(fam, part, dp, 20, 50, 100.0, seed=6)

    assert one.to_api() == two.to_api()
    assert one.to_api() != other.to_api()


def test_monte_carlo_threads(ex3, classified):
    """Running in parallel does not change the result."""

    fam, part, dp = classified(ex3)

    serial = simulator.monte_carlo(fam, part, dp, 30, 40, 10.0, seed=1)
    threaded = simulator.monte_carlo(fam, part, dp, 30, 40, 10.0, seed=1, workers=4)

    assert serial.to_api() == threaded.to_api()


def test_summarize_order_independent(ex3, classified):
    """Aggregation does not depend on the order of the runs."""

    fam, part, dp = classified(ex3)
    summary = simulator.monte_carlo(fam, part, dp, 25, 40, 10.0, seed=2)

    runs = list(summary.runs)
    random.Random(11).shuffle(runs)

    assert simulator.summarize(runs).to_api() == summary.to_api()


def test_monte_carlo_empty(ex2, classified):
    """Zero signals give an empty summary."""

    fam, part, dp = classified(ex2)
    summary = simulator.monte_carlo(fam, part, dp, 0, 200, 100.0)

    assert summary.num_runs == 0
    assert summary.divergent_runs == 0
    assert summary.mean_rate is None
    assert summary.runs == []


def test_monte_carlo_initial_states(ex2, classified):
    """Initial states are drawn from the box."""

    fam, part, dp = classified(ex2)
    summary = simulator.monte_carlo(fam, part, dp, 50, 10, 3.0, seed=4)

    for rec in summary.runs:
        assert all(-3.0 <= x <= 3.0 for x in rec.x0)


def test_monte_carlo_contractive(contractive, classified):
    """Certified contractive families never exceed their overshoot constant."""

    fam, part, dp = classified(contractive)
    cert = certifier.certify(fam, part=part)
    summary = simulator.monte_carlo(fam, part, dp, 100, 200, 100.0, seed=0)

    assert cert.certified
    assert summary.divergent_runs == 0
    assert summary.max_rate < 0
    assert summary.max_ratio <= cert.c


def test_monte_carlo_dominant(dominant, classified):
    """A dominant stable subsystem keeps every run bounded."""

    fam, part, dp = classified(dominant)
    cert = certifier.certify(fam, 0.001, part)
    summary = simulator.monte_carlo(fam, part, dp, 100, 200, 100.0, seed=0)

    assert cert.certified
    assert summary.divergent_runs == 0
    assert summary.max_ratio <= cert.c
    assert summary.max_rate < 0


@pytest.mark.parametrize("name", ["ex2", "ex3"])
def test_monte_carlo_published_examples_grow(name, request, classified):
    """Random restricted signals make the published examples grow."""

    fam, part, dp = classified(request.getfixturevalue(name))
    summary = simulator.monte_carlo(fam, part, dp, 200, 200, 100.0, seed=0)

    rates = [rec.fit.rate for rec in summary.runs]

    assert statistics.median(rates) > 0


def test_oracle_requires_certificate(ex1, classified):
    """There is nothing to check without a certificate."""

    fam, part, dp = classified(ex1)
    cert = certifier.certify(fam, part=part)

    with pytest.raises(CertificationError, match="no certificate to check"):
        simulator.oracle_check(fam, part, dp, cert, 5)


def test_oracle_rejects_long_horizons(contractive, classified):
    """Horizons beyond the enumeration limit fail before any product is built."""

    fam, part, dp = classified(contractive)
    cert = certifier.certify(fam, part=part)
    count = switching.count_signals(fam, part, dp, 31, restricted=True)

    with pytest.raises(SignalError, match=f"\\({count} signals"):
        simulator.oracle_check(fam, part, dp, cert, 31)

    with pytest.raises(SignalError):
        simulator.oracle_check(fam, part, dp, cert, 0)


def test_oracle_contractive(contractive, classified):
    """The best certificate of a contractive family holds on every product."""

    fam, part, dp = classified(contractive)
    cert = certifier.certify(fam, part=part)
    report = simulator.oracle_check(fam, part, dp, cert, 15)

    assert report.sound
    assert report.products_checked > 0
    assert report.worst_ratio <= 1.0
    assert report.worst_signal is not None


def test_oracle_dominant(dominant, classified):
    """A dominant stable subsystem satisfies its certificate."""

    fam, part, dp = classified(dominant)
    cert = certifier.certify(fam, 0.001, part)
    report = simulator.oracle_check(fam, part, dp, cert, 20)

    assert report.sound
    assert report.worst_margin >= 0


def test_oracle_random_certifiable_families():
    """Random strongly contractive diagonal families pass the oracle."""

    rng = np.random.default_rng(21)

    for _ in range(5):
        stable = np.diag(rng.uniform(-0.3, 0.3, size=2))
        unstable = np.diag(rng.uniform(1.0, 1.1, size=2))
        unstable[0, 0] = 1.05

        fam = SwitchedFamily[[stable, unstable], 2, 3]
        part = family.classify(fam)
        dp = family.derive(fam, part)
        cert = certifier.certify(fam, 0.001, part)

        assert cert.verdict == certifier.Verdict.CERTIFIED_THEOREM1
        assert simulator.oracle_check(fam, part, dp, cert, 15).sound


@pytest.mark.parametrize("name", ["ex2", "ex3"])
def test_oracle_published_examples_violated(name, request, classified):
    """The published certificates fail on long restricted products."""

    fam, part, dp = classified(request.getfixturevalue(name))
    cert = certifier.certify(fam, 0.001, part)
    report = simulator.oracle_check(fam, part, dp, cert, 20)

    assert cert.certified
    assert not report.sound
    assert report.violations > 0
    assert report.worst_ratio > 1.0


def test_oracle_diagonal_witness(ex2, classified):
    """Alternating unstable dwell 3 with stable dwell 2 exceeds the bound."""

    fam, part, dp = classified(ex2)
    cert = certifier.certify(fam, 0.001, part)

    sig = SwitchingSignal[[(2, 3), (1, 2)] * 3 + [(2, 3)]]
    norm = simulator.product_norms(fam, sig)[-1]

    assert sig.horizon == 18
    assert norm == pytest.approx(1.24**12 * 0.92**6)
    assert norm > cert.bound(18)

"""Fixtures for dwellcert unit tests.

The reference families match the built-in catalog.  Two extra families have known
closed-form behaviour and are used wherever a certificate must actually hold:

  - `contractive`: every subsystem is Schur stable and diagonal, so every product
    has norm at most `0.7^length`.
  - `dominant`: a strongly contractive stable subsystem next to a mildly unstable
    one; every restricted product up to length 25 stays below its bound.
"""

import json
import logging

import pytest

from dwellcert import catalog, family
from dwellcert.family import SwitchedFamily

# keep logging output to a minimum for testing
logging.basicConfig(level=logging.INFO)


CONTRACTIVE = {
    "matrices": [[[0.5, 0.0], [0.0, 0.6]], [[0.7, 0.0], [0.0, 0.3]]],
    "delta": 1,
    "Delta": 3,
}

DOMINANT = {
    "matrices": [[[0.2, 0.0], [0.0, 0.3]], [[1.1, 0.0], [0.0, 1.05]]],
    "delta": 2,
    "Delta": 3,
}


@pytest.fixture
def ex1():
    """Return the counterexample family."""
    return catalog.example_family("ex1")


@pytest.fixture
def ex2():
    """Return the diagonal (commuting) family."""
    return catalog.example_family("ex2")


@pytest.fixture
def ex3():
    """Return the perturbed (non-commuting) family."""
    return catalog.example_family("ex3")


@pytest.fixture
def stabilized():
    """Return the counterexample with its stabilized unstable partner."""
    return SwitchedFamily.parse_obj(catalog.STABILIZED_EXAMPLE)


@pytest.fixture
def contractive():
    """Return a family with no unstable subsystems."""
    return SwitchedFamily.parse_obj(CONTRACTIVE)


@pytest.fixture
def dominant():
    """Return a family where the stable subsystem dominates."""
    return SwitchedFamily.parse_obj(DOMINANT)


@pytest.fixture
def classified():
    """Return a helper that yields `(family, partition, params)`."""

    def analyze(fam):
        part = family.classify(fam)
        return fam, part, family.derive(fam, part)

    return analyze


@pytest.fixture
def config_file(tmp_path):
    """Return a helper that writes a configuration file and returns its path."""

    def write(data, name="config.json"):
        path = tmp_path / name
        path.write_text(data if isinstance(data, str) else json.dumps(data))
        return str(path)

    return write

"""Unit tests for the configuration parser."""

import json

import pytest

from dwellcert import catalog
from dwellcert.core import ConfigError
from dwellcert.parser import (
    Config,
    ConfigParser,
    load_config,
    parse_pattern,
    parse_vector,
)

DIAGONAL = dict(catalog.EXAMPLES["ex2"], **{"lambda": 0.001})


def test_parse_dict():
    """Parse a configuration dict with defaults."""

    config = ConfigParser().parse(DIAGONAL)

    assert config.lam == 0.001
    assert config.seed == 0
    assert config.horizon == 200
    assert config.num_signals == 1000
    assert config.x0_box == 100.0
    assert config.x0 is None


def test_parse_string():
    """Parse a JSON document."""

    config = ConfigParser().parse(json.dumps(DIAGONAL))
    fam = config.family()

    assert fam.N == 2
    assert fam.delta == 2
    assert fam.Delta == 3


def test_parse_file(config_file):
    """Parse a file and remember its name."""

    path = config_file(DIAGONAL, name="diag.json")
    parser = ConfigParser()

    with open(path) as fp:
        parser.parse(fp)

    assert parser.name == "diag.json"
    assert parser.config.lam == 0.001


def test_load_config(config_file):
    """Load a configuration from a path."""

    config = load_config(config_file(DIAGONAL))

    assert isinstance(config, Config)


def test_load_missing_config(tmp_path):
    """Missing files are I/O errors."""

    with pytest.raises(OSError):
        load_config(str(tmp_path / "missing.json"))


def test_malformed_json():
    """Broken JSON is a configuration error."""

    with pytest.raises(ConfigError, match="malformed"):
        ConfigParser().parse('{"matrices": [')


def test_not_an_object():
    """The document must be an object."""

    with pytest.raises(ConfigError):
        ConfigParser().parse("[1, 2, 3]")


def test_unknown_field():
    """Unknown fields are rejected."""

    with pytest.raises(ConfigError):
        ConfigParser().parse(dict(DIAGONAL, colour="blue"))


def test_invalid_family():
    """Dwell bounds must satisfy `delta < Delta`."""

    with pytest.raises(ConfigError, match="invalid family"):
        ConfigParser().parse(dict(DIAGONAL, Delta=2))


def test_ragged_matrix():
    """Matrices must be square."""

    data = dict(DIAGONAL, matrices=[[[1.0, 0.0], [0.0]], [[1.0, 0.0], [0.0, 1.0]]])

    with pytest.raises(ConfigError):
        ConfigParser().parse(data)


@pytest.mark.parametrize(
    "field,value",
    [("lambda", 0.0), ("lambda", -1.0), ("horizon", 0), ("num_signals", -1)],
)
def test_invalid_values(field, value):
    """Reject out-of-range experiment settings."""

    with pytest.raises(ConfigError):
        ConfigParser().parse(dict(DIAGONAL, **{field: value}))


@pytest.mark.parametrize(
    "field,value",
    [("delta", 2.5), ("Delta", 3.0), ("delta", "2"), ("horizon", 10.5), ("seed", True)],
)
def test_non_integer_values(field, value):
    """Integer settings are not coerced from other types."""

    with pytest.raises(ConfigError):
        ConfigParser().parse(dict(DIAGONAL, **{field: value}))


def test_parse_pattern():
    """Parse a periodic pattern."""

    assert parse_pattern("1:3,2:3") == [(1, 3), (2, 3)]
    assert parse_pattern(" 2 : 1 , 1 : 4 ") == [(2, 1), (1, 4)]


def test_parse_pattern_errors():
    """Reject empty and malformed patterns."""

    with pytest.raises(ConfigError):
        parse_pattern("")

    with pytest.raises(ConfigError):
        parse_pattern("1-3")

    with pytest.raises(ConfigError):
        parse_pattern("1:3,")


@pytest.mark.parametrize("text", ["1:0,2:3", "1:0,2:0", "0:3,2:3"])
def test_parse_pattern_zero(text):
    """Indices and dwells below 1 are rejected."""

    with pytest.raises(ConfigError, match="start at 1"):
        parse_pattern(text)


def test_parse_vector():
    """Parse comma separated vectors."""

    assert parse_vector("-1,1") == [-1.0, 1.0]

    with pytest.raises(ConfigError):
        parse_vector("a,b")

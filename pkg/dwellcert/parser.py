"""Parsers for configuration documents and command line values.

A configuration is a single JSON document, for example:

    ```
    {
        "matrices": [
            [[-0.92, 0.0], [0.0, 0.77]],
            [[1.24, 0.0], [0.0, 0.89]]
        ],
        "delta": 2,
        "Delta": 3,
        "lambda": 0.001
    }
    ```

Matrices are row-major and subsystem indices are 1-based in all derived output.
"""

import json
import logging
import re
from os.path import basename
from typing import List, Optional

from pydantic import (
    Extra,
    Field,
    StrictInt,
    ValidationError,
    root_validator,
    validator,
)

from .core import ConfigError, DataObject, DwellCertError
from .family import SwitchedFamily

log = logging.getLogger(__name__)

# one "index:dwell" item of a periodic pattern
pattern_item_re = re.compile(r"^\s*(\d+)\s*:\s*(\d+)\s*$")


class Config(DataObject):
    """Parsed configuration for a family and its experiments."""

    class Config:
        """Reject unknown fields and accept `lambda` by alias."""

        extra = Extra.forbid
        allow_population_by_field_name = True

    matrices: List[List[List[float]]]
    delta: StrictInt
    Delta: StrictInt
    lam: Optional[float] = Field(None, alias="lambda")
    seed: StrictInt = 0
    horizon: StrictInt = 200
    num_signals: StrictInt = 1000
    x0_box: float = 100.0
    x0: Optional[List[float]] = None

    @validator("lam")
    def valid_lambda(cls, value):
        """Decay rates must be positive."""
        assert value is None or value > 0, "lambda must be positive"
        return value

    @validator("horizon")
    def valid_horizon(cls, value):
        """Simulations need at least one step."""
        assert value >= 1, "horizon must be at least 1"
        return value

    @validator("num_signals")
    def valid_num_signals(cls, value):
        """The number of signals cannot be negative."""
        assert value >= 0, "num_signals must be nonnegative"
        return value

    @validator("x0_box")
    def valid_x0_box(cls, value):
        """The initial-state box must have a positive half width."""
        assert value > 0, "x0_box must be positive"
        return value

    @root_validator(skip_on_failure=True)
    def valid_family(cls, values):
        """Make sure the matrices and dwell bounds form a valid family."""

        try:
            SwitchedFamily(
                matrices=values["matrices"],
                delta=values["delta"],
                Delta=values["Delta"],
            )
        except (ValidationError, DwellCertError) as err:
            raise ValueError(f"invalid family: {err}")

        return values

    def family(self):
        """Return the `SwitchedFamily` described by this configuration."""
        return SwitchedFamily[self.matrices, self.delta, self.Delta]


class ConfigParser:
    """Parse JSON configuration documents into a `Config`."""

    def __init__(self):
        """Initialize an empty parser."""
        self.name = None
        self.config = None

    def parse(self, data):
        """Parse the given data (a string, an open file or a dict).

        If the data has a `name` (e.g. an open file) it is kept for reporting.
        """

        if hasattr(data, "name"):
            self.name = basename(data.name)

        if hasattr(data, "read"):
            data = data.read()

        if isinstance(data, (str, bytes)):
            try:
                data = json.loads(data)
            except json.JSONDecodeError as err:
                raise ConfigError(f"malformed JSON: {err}")

        if not isinstance(data, dict):
            raise ConfigError("configuration must be a JSON object")

        try:
            self.config = Config.parse_obj(data)
        except ValidationError as err:
            raise ConfigError(f"invalid configuration: {err}")

        log.debug("parsed configuration :: %s", self.name or "<data>")

        return self.config


def load_config(path):
    """Load and parse the configuration file at `path`.

    Errors reading the file are raised as `OSError`; problems with its content
    are raised as `ConfigError`.
    """

    with open(path) as fp:
        return ConfigParser().parse(fp)


def parse_pattern(text):
    """Parse a periodic pattern such as `"1:3,2:3"` into `(index, dwell)` pairs."""

    if text is None or not text.strip():
        raise ConfigError("empty periodic pattern")

    pairs = []

    for item in text.split(","):
        match = pattern_item_re.match(item)

        if match is None:
            raise ConfigError(f"invalid pattern item: '{item}'")

        index, dwell = int(match.group(1)), int(match.group(2))

        if index < 1 or dwell < 1:
            raise ConfigError(f"pattern indices and dwells start at 1: '{item}'")

        pairs.append((index, dwell))

    return pairs


def parse_vector(text):
    """Parse a comma separated vector such as `"-1,1"`."""

    try:
        return [float(item) for item in text.split(",")]
    except ValueError:
        raise ConfigError(f"invalid vector: '{text}'")

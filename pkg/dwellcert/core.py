"""Base classes and errors shared across dwellcert."""

import logging
import math
from enum import Enum

import numpy as np
from pydantic import BaseModel
from pydantic.main import ModelMetaclass

log = logging.getLogger(__name__)


class DwellCertError(Exception):
    """Base class for all errors raised by dwellcert."""

    def __init__(self, message):
        """Initialize the error with a supplied message."""
        super().__init__(message)


class LinalgError(DwellCertError):
    """Raised for invalid matrices or failed numerical routines."""


class FamilyError(DwellCertError):
    """Raised when a switched family violates its invariants."""


class CertificationError(DwellCertError):
    """Raised when a certificate cannot be computed."""


class AssumptionViolated(CertificationError):
    """Raised when no dwell length makes the stable subsystems contractive."""


class SignalError(DwellCertError):
    """Raised for switching signals that cannot be built or enumerated."""


class SimulationError(DwellCertError):
    """Raised when a simulation or fit cannot be carried out."""


class ConfigError(DwellCertError):
    """Raised when configuration data cannot be parsed."""


def make_api_safe(data):
    """Recursively convert the given data to a JSON-safe form.

    numpy arrays and scalars become lists and Python numbers; non-finite floats are
    rendered as strings since JSON has no literal for them.
    """

    if isinstance(data, np.ndarray):
        return make_api_safe(data.tolist())

    if isinstance(data, np.bool_):
        return bool(data)

    if isinstance(data, np.integer):
        return int(data)

    if isinstance(data, (float, np.floating)):
        value = float(data)

        if not math.isfinite(value):
            return str(value)

        return value

    if isinstance(data, Enum):
        return data.value

    if isinstance(data, dict):
        return {
            (name.value if isinstance(name, Enum) else name): make_api_safe(value)
            for name, value in data.items()
        }

    if isinstance(data, (list, tuple)):
        return [make_api_safe(value) for value in data]

    if isinstance(data, (set, frozenset)):
        return [make_api_safe(value) for value in sorted(data)]

    return data


class ComposableObject(ModelMetaclass):
    """Presents a meta class that composes objects using simple values.

    This allows callers to build data objects without knowing their field layout,
    e.g. a switching signal from its (index, dwell) pairs:

    ```python
    # using the constructor:
    sig = SwitchingSignal(segments=[Segment(1, 3), Segment(2, 3)])

    # using a composable object:
    sig = SwitchingSignal[[(1, 3), (2, 3)]]
    ```

    Classes that support composition in this way must implement `__compose__`.
    """

    def __getitem__(self, params):
        """Return an instance of the class by composing using the given params."""

        if not hasattr(self, "__compose__"):
            raise NotImplementedError(f"{self} does not support object composition")

        compose = self.__compose__

        if type(params) is tuple:
            return compose(*params)

        return compose(params)


class DataObject(BaseModel, metaclass=ComposableObject):
    """The base for all dwellcert data objects."""

    class Config:
        """Allow numpy arrays as field values."""

        arbitrary_types_allowed = True

    def to_api(self):
        """Convert to a JSON-safe representation."""

        data = self.dict(exclude_none=True, by_alias=True)

        return make_api_safe(data)

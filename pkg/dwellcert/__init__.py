"""Certify exponential stability of switched linear systems under dwell-time limits."""

import logging

from .family import SwitchedFamily
from .parser import Config, ConfigParser
from .session import Session
from .version import __version__

log = logging.getLogger(__name__)

__all__ = ["__version__", "analyze"]


def analyze(source, delta=None, Delta=None):
    """Open an analysis session for a family, a `Config` or a configuration dict.

    A list of matrices needs the dwell bounds as well, e.g.
    `analyze(matrices, delta=2, Delta=3)`.
    """

    if isinstance(source, SwitchedFamily):
        fam = source
    elif isinstance(source, Config):
        fam = source.family()
    elif isinstance(source, dict):
        fam = ConfigParser().parse(source).family()
    else:
        fam = SwitchedFamily[source, delta, Delta]

    log.debug("opening session for %d subsystems", fam.N)

    return Session(fam)

"""Consistent version information for dwellcert."""

import logging
import os

log = logging.getLogger(__name__)

__version__ = "0.1.0"

# when running from a local checkout, append the commit information

try:

    import git

    basedir = os.path.dirname(os.path.abspath(__file__)) + "/.."

    try:
        repo = git.Repo(basedir, search_parent_directories=True)
        head = repo.head.commit

        __version__ = f"{__version__}-{head.hexsha[:7]}"

        if repo.is_dirty():
            __version__ = f"{__version__}+"

    except (git.InvalidGitRepositoryError, ValueError):
        pass

except ModuleNotFoundError:
    pass

log.debug("dwellcert-%s", __version__)

"""Main entry point for dwellcert."""

import sys

from .cli import main

sys.exit(main())

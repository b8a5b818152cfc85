"""Module entry point for ``python -m corefeval``."""

import sys

from .cli import main

sys.exit(main(sys.argv[1:]))

"""Allows `python -m errbridge`."""

import sys

from .cli import main

sys.exit(main())

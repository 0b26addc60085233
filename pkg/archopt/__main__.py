"""Run the command line interface with ``python -m archopt``."""

import sys

from archopt.cli import main

sys.exit(main())

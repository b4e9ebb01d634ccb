"""Run the command-line interface with `python -m costbench`."""

import sys

from costbench.cli import main

sys.exit(main())

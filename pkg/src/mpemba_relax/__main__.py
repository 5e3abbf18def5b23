"""Entry point for `python -m mpemba_relax` and the mpemba-relax script."""

from __future__ import annotations

import sys

from mpemba_relax.cli import main as cli_main


def main() -> None:
    sys.exit(cli_main())


if __name__ == "__main__":
    main()

"""Relaxation engine for quantum Mpemba crossings in open quantum systems."""

from importlib.metadata import version

from mpemba_relax.errors import MpembaError

__version__ = version("mpemba-relax")
__all__ = ["MpembaError", "__version__"]

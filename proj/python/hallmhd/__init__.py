"""Spectral mild-solution solver for the Hall-MHD system."""

from ._hallmhd import *  # noqa: F401,F403
from ._hallmhd import ConfigError, Grid, run

__all__ = [name for name in dir() if not name.startswith("_")]

"""Quantum trajectories of a measured, driven pendulum."""

from ._qtraj import *  # noqa: F401,F403
from ._qtraj import ConfigError, IntegrityError, NumericError  # noqa: F401

__version__ = "0.1.0"

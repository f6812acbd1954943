"""Weak-value measurement simulator: pointer Fock space, post-selection,
photon + atomic-ensemble implementation and kappa estimation."""

from ._core import *  # noqa: F401,F403
from ._core import __version__  # noqa: F401

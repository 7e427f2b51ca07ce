"""Verification toolkit for contextuality, nonlocality and joint-measurability bounds.

The library computes classical (noncontextual / Bell-local / preparation-
noncontextual) bounds by exhaustive enumeration and linear feasibility,
evaluates the matching quantum constructions by the Born rule, checks
sum-of-squares optimality certificates, derives joint-measurability
thresholds for noisy spin observables, analyses frustration of signed
correlation networks, and runs seeded Monte Carlo game simulations.
"""

__version__ = "0.1.0"

from . import classical, games, numkit, povm, quantum, scenario, signet
from .tolerances import NUM_TOL, STRUCT_TOL

__all__ = [
    "__version__",
    "classical",
    "games",
    "numkit",
    "povm",
    "quantum",
    "scenario",
    "signet",
    "NUM_TOL",
    "STRUCT_TOL",
]

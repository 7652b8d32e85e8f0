"""Equilibria of competing contest designers who each pick a contest to attract contestants."""

from .contests import (
    GammaProfile,
    PiecewiseTullockSpec,
    TullockSpec,
    apa,
    is_full_rent_dissipation,
    is_mdu,
    mrd_subset,
    tullock_gamma,
)
from .designer import CCGInstance, designer_utility, enumerate_equilibria, evaluate_profile, is_equilibrium
from .participation import beta, solve_participation, solve_symmetric_equilibrium_mdu
from .scenario import Scenario, bundled

__all__ = [
    "CCGInstance",
    "GammaProfile",
    "PiecewiseTullockSpec",
    "Scenario",
    "TullockSpec",
    "apa",
    "beta",
    "bundled",
    "designer_utility",
    "enumerate_equilibria",
    "evaluate_profile",
    "is_equilibrium",
    "is_full_rent_dissipation",
    "is_mdu",
    "mrd_subset",
    "solve_participation",
    "solve_symmetric_equilibrium_mdu",
    "tullock_gamma",
]

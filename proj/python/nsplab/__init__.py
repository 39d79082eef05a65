"""Python access to the nsplab numerics core."""

from ._core import (
    BurgersWave,
    Grid1D,
    NumericalError,
    OneFluidParams,
    TwoFluidParams,
    ValidationError,
    __version__,
    burgers_value,
    decay_slope,
    greens_matrix,
    mode_decay_rate,
    profile,
    profile_twofluid,
    psi_potential,
    riemann_fan,
    simulate,
    solve_poisson_boltzmann,
    spectral_mode,
)

__all__ = [
    "BurgersWave",
    "Grid1D",
    "NumericalError",
    "OneFluidParams",
    "TwoFluidParams",
    "ValidationError",
    "burgers_value",
    "decay_slope",
    "greens_matrix",
    "mode_decay_rate",
    "profile",
    "profile_twofluid",
    "psi_potential",
    "riemann_fan",
    "simulate",
    "solve_poisson_boltzmann",
    "spectral_mode",
]

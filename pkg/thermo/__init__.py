"""Thermalization diagnostics: occupations, Fermi-Dirac fits, temperatures and scale estimates."""
from thermo.analysis import analyze_eigenstates, single_particle_energies
from thermo.fermi_dirac import fd_fit, fd_mu_solve, fd_occupations, sigma_fd, sigma_s, sigma_s_series
from thermo.occupations import eigenstate_entropy, occupation_matrix, occupation_numbers
from thermo.temperatures import dos_fit, t_canonical, t_thermodynamic
from thermo.theory import theory_estimates
from thermo.types import (
    CanonicalTemperature,
    DosFit,
    EigenstateAnalysis,
    FDFit,
    OccupationProfile,
    TemperatureSet,
    TheoryEstimates,
)

__all__ = [
    "CanonicalTemperature",
    "DosFit",
    "EigenstateAnalysis",
    "FDFit",
    "OccupationProfile",
    "TemperatureSet",
    "TheoryEstimates",
    "analyze_eigenstates",
    "dos_fit",
    "eigenstate_entropy",
    "fd_fit",
    "fd_mu_solve",
    "fd_occupations",
    "occupation_matrix",
    "occupation_numbers",
    "sigma_fd",
    "sigma_s",
    "sigma_s_series",
    "single_particle_energies",
    "t_canonical",
    "t_thermodynamic",
    "theory_estimates",
]

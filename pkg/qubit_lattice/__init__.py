"""Disordered qubit lattice: geometry, disorder, band bases and Hamiltonians."""
from qubit_lattice.basis import band_dimension, build_band_basis, central_band_filling
from qubit_lattice.disorder import sample_disorder
from qubit_lattice.hamiltonian import build_band_hamiltonian, build_full_hamiltonian, shifted_energy
from qubit_lattice.lattice import build_lattice, default_lattice_shape
from qubit_lattice.projection import validate_projection
from qubit_lattice.types import (
    BandBasis,
    BandHamiltonian,
    DisorderRealization,
    LatticeSpec,
    ModelParams,
    ProjectionCheck,
)

__all__ = [
    "BandBasis",
    "BandHamiltonian",
    "DisorderRealization",
    "LatticeSpec",
    "ModelParams",
    "ProjectionCheck",
    "band_dimension",
    "build_band_basis",
    "build_band_hamiltonian",
    "build_full_hamiltonian",
    "build_lattice",
    "central_band_filling",
    "default_lattice_shape",
    "sample_disorder",
    "shifted_energy",
    "validate_projection",
]

"""Type definitions for thermalization diagnostics."""
from dataclasses import dataclass

import numpy as np
from pydantic import BaseModel, Field


@dataclass(frozen=True)
class OccupationProfile:
    """Site occupations n_i of one eigenstate."""
    m: int  # level index, ascending energy within the band
    occupations: np.ndarray  # (n,) in [0, 1]
    energy: float  # band-relative E_m
    shifted_energy: float  # E'_m
    excitation: float | None  # E'_m - E'_0, None when the band ground state is unknown
    entropy: float  # S_q in bits


@dataclass(frozen=True)
class FDFit:
    """Constrained Fermi-Dirac fit n_i ~ 1 / (exp(beta (eps_i - mu)) + 1)."""
    beta: float
    mu: float
    t_fd: float  # 1/beta, +inf at beta = 0
    sigma_fd: float
    fitted: np.ndarray
    flat: bool = False


@dataclass(frozen=True)
class CanonicalTemperature:
    beta: float
    t_can: float
    flag: str | None = None  # "infinite", "below_spectrum", "above_spectrum", "beyond_bracket"


@dataclass(frozen=True)
class DosFit:
    """Gaussian density of states by moment matching on E'."""
    mean: float
    sigma2: float


@dataclass(frozen=True)
class TemperatureSet:
    t_fd: float
    t_can: float | None
    t_th: float | None
    flags: tuple[str, ...] = ()


@dataclass(frozen=True)
class EigenstateAnalysis:
    """Everything the drivers report about one eigenstate."""
    profile: OccupationProfile
    fit: FDFit
    temperatures: TemperatureSet
    e_over_b: float | None


class TheoryEstimates(BaseModel):
    """Analytic scales of the disordered lattice."""
    n: int = Field(description="Number of qubits.")
    delta: float = Field(description="Detuning width.")
    J: float = Field(description="Coupling amplitude.")
    J_c: float = Field(description="Chaos border C_chaos * delta / n.")
    J_t: float = Field(description="Thermalization border C_thermal * delta / n.")
    delta_c: float = Field(description="Spacing of directly coupled states, delta / n.")
    delta_n_scaling: float = Field(description="Multi-qubit level spacing n^1.5 2^-n delta.")
    delta_n_empirical: float | None = Field(default=None, description="Mean central-window gap of a supplied spectrum.")
    gamma_bw: float = Field(description="Breit-Wigner width J^2 n / delta.")
    tau_chi: float = Field(description="Chaotic destruction time 1 / gamma_bw.")
    n_b: int = Field(description="Central band dimension C(n, n // 2).")
    n_eff: float | None = Field(default=None, description="Effective number of excited qubits sqrt(n dE / delta).")

    def to_rows(self) -> list[tuple[str, float | None]]:
        return [(name, value) for name, value in self.model_dump().items()]

"""Per-eigenstate thermalization analysis used by the experiment drivers."""
import logging

import numpy as np

from eigensolve.types import SpectrumResult
from qubit_lattice.hamiltonian import shifted_energy
from qubit_lattice.types import BandBasis, DisorderRealization
from spectral.statistics import energy_over_bandwidth
from thermo.fermi_dirac import fd_fit
from thermo.occupations import occupation_numbers
from thermo.temperatures import dos_fit, t_canonical, t_thermodynamic, temperature_set
from thermo.types import EigenstateAnalysis

logger = logging.getLogger(__name__)


def single_particle_energies(real: DisorderRealization, delta: float) -> np.ndarray:
    """eps_i = delta_i + delta/2, in [0, delta]."""
    return np.asarray(real.deltas) + delta / 2.0


def analyze_eigenstates(
    spectrum: SpectrumResult,
    basis: BandBasis,
    real: DisorderRealization,
    levels: list[int],
    delta: float = 1.0,
    want_tcan: bool = True,
    ground_energy: float | None = None,
) -> list[EigenstateAnalysis]:
    """Occupations, Fermi-Dirac fit and temperatures for selected eigenstates.

    Canonical and thermodynamic temperatures and E/B need the whole band, so
    they are only reported for dense spectra.

    Args:
        spectrum: Spectrum with eigenvectors.
        basis: Band basis of the eigenvectors.
        real: Disorder realization the spectrum belongs to.
        levels: Indices into spectrum.eigenvalues.
        delta: Detuning width.
        want_tcan: Solve for T_can (dense spectra only).
        ground_energy: Band ground energy E_0 when the spectrum does not contain it.

    Returns:
        One EigenstateAnalysis per requested level.
    """
    if spectrum.eigenvectors is None:
        raise ValueError("eigenstate analysis needs eigenvectors")
    eigs = spectrum.eigenvalues
    bad = [m for m in levels if not 0 <= m < eigs.size]
    if bad:
        raise ValueError(f"levels {bad} outside the {eigs.size} available eigenstates")

    epsilons = single_particle_energies(real, delta)
    eprimes = dos = relative = None
    if spectrum.is_full:
        eprimes = shifted_energy(eigs, real.sum_deltas)
        dos = dos_fit(eprimes)
        relative = energy_over_bandwidth(eigs)
        ground_energy = float(eigs[0])
    elif ground_energy is None and spectrum.side == "lowest":
        ground_energy = float(eigs[0])

    results = []
    for m in levels:
        energy = float(eigs[m])
        profile = occupation_numbers(
            spectrum.eigenvectors[:, m],
            basis,
            m=m,
            energy=energy,
            sum_deltas=real.sum_deltas,
            ground_energy=ground_energy,
        )
        fit = fd_fit(profile.occupations, epsilons, basis.n_up, delta)
        canonical = t_canonical(eigs, eprimes, energy) if (eprimes is not None and want_tcan) else None
        t_th = t_thermodynamic(dos, profile.shifted_energy) if dos is not None else None
        results.append(
            EigenstateAnalysis(
                profile=profile,
                fit=fit,
                temperatures=temperature_set(fit, canonical, t_th),
                e_over_b=None if relative is None else float(relative[m]),
            )
        )
    logger.debug(f"Analyzed {len(results)} eigenstates of N_B={basis.dimension}")
    return results

"""Two-lead S-matrix of a tight-binding chain by wave-function matching.

Both leads are semi-infinite flat wires with hopping ``t0`` and onsite
``2 t0``. Amplitudes are referenced at the lead interfaces (sites ``0`` and
``N``), so a perfect wire of length ``L`` transmits with phase ``k L``.
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import kernels
from .hamiltonian import Chain

ENERGY_WINDOW_FRACTION = 0.5
RETRY_FACTOR = 1.0 + 1e-12


class EvanescentEnergyError(ValueError):
    """Energy outside the open propagating band of the leads."""


class SolverError(RuntimeError):
    pass


def lead_momentum(energy, t0, a):
    """Lead wave number ``k`` with ``E = 2 t0 (1 - cos ka)``, in ``(0, pi/a)``."""
    e = np.asarray(energy, dtype=float)
    if np.any(~(e > 0.0)) or np.any(~(e < 4.0 * t0)):
        raise EvanescentEnergyError(f"energy outside the propagating band (0, {4.0 * t0:g})")
    k = np.arccos(1.0 - e / (2.0 * t0)) / a
    return float(k) if k.ndim == 0 else k


def group_velocity(energy, t0, a):
    k = lead_momentum(energy, t0, a)
    return 2.0 * t0 * a * np.sin(np.asarray(k) * a)


def max_energy(chain: Chain) -> float:
    """Upper edge of the default spectral window, half of the lead bandwidth.

    The solver itself accepts the whole open band; sweeps stay below this
    edge so the lattice dispersion remains close to the continuum one.
    """
    return ENERGY_WINDOW_FRACTION * 4.0 * chain.t0


def unitarity_defect(s):
    s = np.asarray(s)
    eye = np.eye(2)
    prod = np.conj(np.swapaxes(s, -1, -2)) @ s
    return np.max(np.abs(prod - eye), axis=(-2, -1))


@dataclass(frozen=True, eq=False)
class SMatrixPoint:
    energy: float
    s: np.ndarray
    k: float
    unitarity_defect: float

    @property
    def r_l(self):
        return self.s[0, 0]

    @property
    def t_r(self):
        return self.s[0, 1]

    @property
    def t_l(self):
        return self.s[1, 0]

    @property
    def r_r(self):
        return self.s[1, 1]

    @property
    def reciprocity_defect(self):
        return float(np.max(np.abs(self.s - self.s.T)))

    @property
    def det(self):
        return complex(np.linalg.det(self.s))


def smatrix_array(chain: Chain, energies, threads: int = 1, backend=None) -> np.ndarray:
    """S-matrices for many energies at once, shape ``(m, 2, 2)``.

    Energies are split into contiguous chunks handed to a thread pool; each
    energy is solved independently, so the result does not depend on the
    number of threads.
    """
    energies = np.atleast_1d(np.asarray(energies, dtype=float))
    lead_momentum(energies, chain.t0, chain.a)

    def run(chunk):
        return kernels.smatrix_batch(chain.onsite, chain.hopping, chain.t0, chunk, backend)

    threads = max(1, int(threads))
    if threads == 1 or energies.size < 2 * threads:
        s = run(energies)
    else:
        chunks = np.array_split(energies, threads)
        with ThreadPoolExecutor(max_workers=threads) as pool:
            s = np.concatenate(list(pool.map(run, chunks)), axis=0)

    bad = ~np.all(np.isfinite(s), axis=(1, 2))
    if np.any(bad):
        # an exactly hit pole: nudge the energy once
        retry = kernels.smatrix_batch(chain.onsite, chain.hopping, chain.t0, energies[bad] * RETRY_FACTOR, backend)
        if not np.all(np.isfinite(retry)):
            raise SolverError(f"singular wave-matching system at E = {energies[bad][0]:.17g}")
        s[bad] = retry
    return s


def solve_smatrix(chain: Chain, energy: float, backend=None) -> SMatrixPoint:
    s = smatrix_array(chain, [energy], backend=backend)[0]
    return SMatrixPoint(
        energy=float(energy),
        s=s,
        k=lead_momentum(energy, chain.t0, chain.a),
        unitarity_defect=float(unitarity_defect(s)),
    )


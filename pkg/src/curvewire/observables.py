"""Transmission, Friedel phase and time delays from S-matrix data.

All quantities are in atomic units; :class:`Spectrum` exposes meV/fs views.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from .hamiltonian import Chain
from .scattering import SMatrixPoint, smatrix_array
from .units import au_to_fs, hartree_to_mev, mev_to_hartree

N_CHANNELS = 2
DELAY_REL_STEP = 1e-4
DELAY_MIN_STEP = mev_to_hartree(1e-4)
DELAY_TOL = 1e-3
DELAY_MAX_HALVINGS = 6


class DelayConvergenceWarning(RuntimeWarning):
    pass


def _as_smatrices(points):
    if isinstance(points, np.ndarray):
        return points.reshape(-1, 2, 2)
    return np.array([p.s if isinstance(p, SMatrixPoint) else p for p in points], dtype=complex).reshape(-1, 2, 2)


def transmission_reflection(s):
    """``(T, R) = (|S21|^2, |S11|^2)`` for incidence from the left lead.

    Accepts an :class:`SMatrixPoint`, a single 2x2 matrix or a stack of them.
    """
    if isinstance(s, SMatrixPoint):
        s = s.s
    s = np.asarray(s)
    t = np.abs(s[..., 1, 0]) ** 2
    r = np.abs(s[..., 0, 0]) ** 2
    if t.ndim == 0:
        return float(t), float(r)
    return t, r


def friedel_phase(points) -> np.ndarray:
    """Cumulatively unwrapped ``arg det S`` over an ordered energy grid."""
    dets = np.linalg.det(_as_smatrices(points))
    return np.unwrap(np.angle(dets))


def _stencil_delay(chain, energies, steps, threads):
    pts = np.concatenate([energies - steps, energies + steps])
    s = smatrix_array(chain, pts, threads=threads)
    det = np.linalg.det(s)
    m = energies.size
    dphi = np.angle(det[m:] / det[:m])
    return dphi / (N_CHANNELS * 2.0 * steps)


def wigner_delays(
    chain: Chain,
    energies,
    rel_step=DELAY_REL_STEP,
    min_step=DELAY_MIN_STEP,
    tol=DELAY_TOL,
    max_halvings=DELAY_MAX_HALVINGS,
    threads=1,
):
    """Wigner delays ``(hbar/N) dPhi_F/dE`` by central differences.

    The step starts at ``max(rel_step * E, min_step)`` and is halved until
    two successive estimates agree to ``tol`` (relative). Returns the delays
    and a boolean mask of points that converged.
    """
    energies = np.atleast_1d(np.asarray(energies, dtype=float))
    steps = np.maximum(rel_step * energies, min_step)
    steps = np.minimum(steps, 0.5 * energies)
    tau = _stencil_delay(chain, energies, steps, threads)
    converged = np.zeros(energies.size, dtype=bool)
    todo = np.arange(energies.size)
    for _ in range(max_halvings):
        steps[todo] *= 0.5
        finer = _stencil_delay(chain, energies[todo], steps[todo], threads)
        ok = np.abs(finer - tau[todo]) <= tol * np.abs(finer)
        tau[todo] = finer
        converged[todo[ok]] = True
        todo = todo[~ok]
        if todo.size == 0:
            break
    return tau, converged


def wigner_delay(chain: Chain, energy: float, dE: float | None = None) -> float:
    kw = {} if dE is None else {"rel_step": 0.0, "min_step": dE}
    tau, ok = wigner_delays(chain, [energy], **kw)
    if not ok[0]:
        warnings.warn(f"Wigner delay at E={energy:g} did not converge", DelayConvergenceWarning, stacklevel=2)
    return float(tau[0])


def classical_delay(energy, arc_length, mass=1.0):
    """Free-flight time ``sqrt(m0 / 2E) * D`` along the wire."""
    energy = np.asarray(energy, dtype=float)
    if np.any(energy <= 0) or arc_length <= 0:
        raise ValueError("classical delay needs E > 0 and D > 0")
    out = np.sqrt(mass / (2.0 * energy)) * arc_length
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True, eq=False)
class Spectrum:
    """Energy-resolved transport data (atomic units)."""

    energies: np.ndarray
    T: np.ndarray
    R: np.ndarray
    phase_f: np.ndarray
    tau_w: np.ndarray
    tau_c: np.ndarray
    flags: tuple = ()
    metadata: dict = field(default_factory=dict)

    def __len__(self):
        return self.energies.size

    @property
    def energies_mev(self):
        return hartree_to_mev(self.energies)

    @property
    def tau_w_fs(self):
        return au_to_fs(self.tau_w)

    @property
    def tau_c_fs(self):
        return au_to_fs(self.tau_c)

    @property
    def flagged(self):
        return [i for i, f in enumerate(self.flags) if f != "ok"]

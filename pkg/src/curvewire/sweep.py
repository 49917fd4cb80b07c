"""Spectral sweeps, resolution control and width scans."""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .geometry import Profile, arc_length
from .hamiltonian import build_chain, lead_hopping
from .observables import (
    DELAY_MAX_HALVINGS,
    DELAY_REL_STEP,
    DELAY_TOL,
    N_CHANNELS,
    Spectrum,
    classical_delay,
    transmission_reflection,
    wigner_delays,
)
from .scattering import ENERGY_WINDOW_FRACTION, smatrix_array
from .units import hartree_to_mev, mev_to_hartree

log = logging.getLogger(__name__)

DEFAULT_INTERVALS = 5000
PHASE_STEP_LIMIT = 0.5 * math.pi


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class HartmanSettings:
    stretches: tuple = (0.5, 0.75, 1.0, 1.25, 1.5)
    probe_mev: float = 50.0
    mode: str = "both"

    def __post_init__(self):
        object.__setattr__(self, "stretches", tuple(float(s) for s in self.stretches))
        if not self.stretches or any(s <= 0 for s in self.stretches):
            raise ConfigError("hartman.stretches must be a non-empty list of positive factors")
        if not self.probe_mev > 0:
            raise ConfigError("hartman.probe_meV must be positive")
        if self.mode not in ("both", "sigma"):
            raise ConfigError("hartman.mode must be 'both' or 'sigma'")


@dataclass(frozen=True)
class SweepConfig:
    profile: Profile
    e_min_mev: float = 0.5
    e_max_mev: float = 120.0
    n_energies: int = 600
    spacing: str = "log"
    lattice_constant: float | None = None
    auto_converge: bool = False
    convergence_tol: float = 1e-4
    max_resolution_halvings: int = 3
    delay_rel_step: float = DELAY_REL_STEP
    delay_min_step_mev: float = 1e-4
    delay_tol: float = DELAY_TOL
    delay_max_halvings: int = DELAY_MAX_HALVINGS
    refine_max_depth: int = 10
    refine_floor_mev: float = 1e-7
    mass: float = 1.0
    threads: int = 1
    hartman: HartmanSettings = field(default_factory=HartmanSettings)

    def __post_init__(self):
        if not self.e_min_mev > 0:
            raise ConfigError("energy.e_min_meV must be > 0")
        if not self.e_max_mev > self.e_min_mev:
            raise ConfigError("energy.e_max_meV must exceed energy.e_min_meV")
        if self.n_energies < 2:
            raise ConfigError("energy.n must be >= 2")
        if self.spacing not in ("log", "linear"):
            raise ConfigError("energy.spacing must be 'log' or 'linear'")
        if self.lattice_constant is not None and not self.lattice_constant > 0:
            raise ConfigError("lattice.a must be positive")
        if not self.mass > 0:
            raise ConfigError("mass must be positive")
        if self.threads < 1:
            raise ConfigError("threads must be >= 1")
        e_top = hartree_to_mev(ENERGY_WINDOW_FRACTION * 4.0 * lead_hopping(self.resolved_lattice_constant, self.mass))
        if not self.e_max_mev < e_top:
            raise ConfigError(f"energy.e_max_meV must stay below {e_top:g} meV for this lattice constant")

    @property
    def resolved_lattice_constant(self):
        if self.lattice_constant is not None:
            return self.lattice_constant
        return self.profile.length / DEFAULT_INTERVALS

    def energy_grid(self):
        """Base grid in Hartree."""
        lo, hi = mev_to_hartree(self.e_min_mev), mev_to_hartree(self.e_max_mev)
        if self.spacing == "log":
            return np.geomspace(lo, hi, self.n_energies)
        return np.linspace(lo, hi, self.n_energies)

    def delay_kwargs(self):
        return dict(
            rel_step=self.delay_rel_step,
            min_step=mev_to_hartree(self.delay_min_step_mev),
            tol=self.delay_tol,
            max_halvings=self.delay_max_halvings,
            threads=self.threads,
        )


def _needs_refinement(energies, dets, tau):
    de = np.diff(energies)
    predicted = N_CHANNELS * 0.5 * (tau[1:] + tau[:-1]) * de
    wrapped = np.angle(dets[1:] / dets[:-1])
    return (np.abs(predicted) >= PHASE_STEP_LIMIT) | (np.abs(wrapped - predicted) >= PHASE_STEP_LIMIT)


def run_spectrum(config: SweepConfig, lattice_constant: float | None = None, energies=None) -> Spectrum:
    """Transmission, Friedel phase and delays on a refined energy grid.

    Intervals whose Friedel phase would advance by more than pi/2 (judged
    from the local delays) are bisected; intervals that reach the floor step
    are flagged rather than refined further.
    """
    a = lattice_constant or config.resolved_lattice_constant
    chain = build_chain(config.profile, a, config.mass)
    grid = config.energy_grid() if energies is None else np.asarray(energies, dtype=float)
    dkw = config.delay_kwargs()
    floor = mev_to_hartree(config.refine_floor_mev)

    s = smatrix_array(chain, grid, threads=config.threads)
    tau, ok = wigner_delays(chain, grid, **dkw)
    phase_flag = np.zeros(grid.size, dtype=bool)

    for _ in range(config.refine_max_depth):
        dets = np.linalg.det(s)
        bad = _needs_refinement(grid, dets, tau)
        tiny = np.diff(grid) < floor
        phase_flag[:-1] |= bad & tiny
        phase_flag[1:] |= bad & tiny
        split = np.flatnonzero(bad & ~tiny)
        if split.size == 0:
            break
        mids = 0.5 * (grid[split] + grid[split + 1])
        s_new = smatrix_array(chain, mids, threads=config.threads)
        tau_new, ok_new = wigner_delays(chain, mids, **dkw)
        order = np.argsort(np.concatenate([grid, mids]), kind="stable")
        grid = np.concatenate([grid, mids])[order]
        s = np.concatenate([s, s_new])[order]
        tau = np.concatenate([tau, tau_new])[order]
        ok = np.concatenate([ok, ok_new])[order]
        phase_flag = np.concatenate([phase_flag, np.zeros(mids.size, dtype=bool)])[order]
        log.debug("refined %d intervals", split.size)
    else:
        phase_flag[:-1] |= _needs_refinement(grid, np.linalg.det(s), tau)

    t, r = transmission_reflection(s)
    phase = np.unwrap(np.angle(np.linalg.det(s)))
    dist = arc_length(config.profile, 0.0, config.profile.length)
    tau_c = classical_delay(grid, dist, config.mass)

    flags = []
    for good, pf in zip(ok, phase_flag):
        tags = ([] if good else ["delay"]) + (["phase"] if pf else [])
        flags.append("+".join(tags) if tags else "ok")

    metadata = {
        "profile": config.profile.describe(),
        "lattice_constant": chain.a,
        "n_sites": chain.n_sites,
        "arc_length": dist,
        "backend": kernels.BACKEND,
        "n_base_energies": int(config.n_energies if energies is None else len(energies)),
        "flagged_energies_meV": [float(hartree_to_mev(e)) for e, f in zip(grid, flags) if f != "ok"],
    }
    arrays = [grid, t, r, phase, tau, tau_c]
    for arr in arrays:
        arr.setflags(write=False)
    return Spectrum(*arrays, flags=tuple(flags), metadata=metadata)


def transmission_on_grid(config: SweepConfig, lattice_constant: float, energies) -> np.ndarray:
    chain = build_chain(config.profile, lattice_constant, config.mass)
    return transmission_reflection(smatrix_array(chain, energies, threads=config.threads))[0]


def converge_resolution(config: SweepConfig):
    """Halve the lattice constant until ``max |dT| < convergence_tol``.

    Returns ``(a_final, spectrum)``. The spectrum metadata records the
    history and whether the tolerance was reached.
    """
    grid = config.energy_grid()
    a = config.resolved_lattice_constant
    t_prev = transmission_on_grid(config, a, grid)
    history = []
    converged = False
    for _ in range(config.max_resolution_halvings):
        a_next = 0.5 * a
        t_next = transmission_on_grid(config, a_next, grid)
        change = float(np.max(np.abs(t_next - t_prev)))
        history.append({"a": a_next, "max_dT": change})
        a, t_prev = a_next, t_next
        if change < config.convergence_tol:
            converged = True
            break
    if not converged:
        log.warning("resolution did not converge after %d halvings", config.max_resolution_halvings)
    spectrum = run_spectrum(config, lattice_constant=a)
    spectrum.metadata["resolution_converged"] = converged
    spectrum.metadata["resolution_history"] = history
    return a, spectrum


@dataclass(frozen=True)
class HartmanRow:
    stretch: float
    arc_length: float
    tau_w: float
    tau_c: float
    converged: bool


@dataclass(frozen=True)
class HartmanScan:
    probe_energy: float
    rows: tuple
    skipped: tuple
    slope: float
    intercept: float
    residual_max: float
    classical_slope: float

    @property
    def delay_range(self):
        taus = [r.tau_w for r in self.rows]
        return float(np.ptp(taus)) if taus else 0.0

    @property
    def relative_residual(self):
        rng = self.delay_range
        return self.residual_max / rng if rng > 0 else float("nan")

    @property
    def slope_error(self):
        return abs(self.slope - self.classical_slope) / self.classical_slope


def hartman_scan(
    base_profile: Profile,
    stretch_factors,
    probe_mev: float,
    mode: str = "both",
    lattice_constant: float | None = None,
    mass: float = 1.0,
    threads: int = 1,
) -> HartmanScan:
    """Wigner delay at a fixed energy for a family of stretched profiles.

    All profiles share the base domain and lattice constant. A stretched
    profile that is no longer flat at the domain ends is skipped.
    """
    a = lattice_constant or base_profile.length / DEFAULT_INTERVALS
    energy = mev_to_hartree(probe_mev)
    rows, skipped = [], []
    for c in sorted(float(c) for c in stretch_factors):
        try:
            prof = base_profile.stretched(c, mode) if hasattr(base_profile, "stretched") else base_profile
            chain = build_chain(prof, a, mass)
        except ValueError as exc:
            skipped.append((c, str(exc)))
            log.info("skipping stretch %g: %s", c, exc)
            continue
        tau, ok = wigner_delays(chain, [energy], threads=threads)
        dist = arc_length(prof, 0.0, prof.length)
        rows.append(HartmanRow(c, dist, float(tau[0]), classical_delay(energy, dist, mass), bool(ok[0])))

    d = np.array([r.arc_length for r in rows])
    t = np.array([r.tau_w for r in rows])
    if len(rows) >= 2 and np.ptp(d) > 0:
        slope, intercept = np.polyfit(d, t, 1)
        residual = float(np.max(np.abs(t - (slope * d + intercept))))
    else:
        slope = intercept = residual = float("nan")
    return HartmanScan(
        probe_energy=energy,
        rows=tuple(rows),
        skipped=tuple(skipped),
        slope=float(slope),
        intercept=float(intercept),
        residual_max=residual,
        classical_slope=math.sqrt(mass / (2.0 * energy)),
    )

"""Oracle checks run by ``curvewire validate``."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .geometry import Flat
from .hamiltonian import build_chain
from .observables import transmission_reflection, wigner_delays
from .oracle import (
    analytic_square_well_T,
    delta_impurity_chain,
    delta_impurity_T,
    random_chain,
    square_well_chain,
    transfer_matrix_smatrix,
)
from .scattering import group_velocity, smatrix_array, unitarity_defect
from .units import mev_to_hartree

SQUARE_WELL_DEPTH_MEV = -20.0
SQUARE_WELL_WIDTH = 200.0
SQUARE_WELL_A = 0.1


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    value: float
    tolerance: float

    def line(self):
        status = "PASS" if self.passed else "FAIL"
        return f"{status}  {self.name}: {self.value:.3e} (tolerance {self.tolerance:g})"


def flat_wire_check(length=1000.0, threads=1):
    chain = build_chain(Flat(length), length / 5000)
    e = mev_to_hartree(np.geomspace(1.0, 100.0, 200))
    t, _ = transmission_reflection(smatrix_array(chain, e, threads=threads))
    tau, _ = wigner_delays(chain, e, threads=threads)
    free = chain.length / group_velocity(e, chain.t0, chain.a)
    return [
        Check("flat wire |T - 1|", bool(np.max(np.abs(t - 1)) < 1e-10), float(np.max(np.abs(t - 1))), 1e-10),
        Check(
            "flat wire tau_W vs L/v_g (relative)",
            bool(np.max(np.abs(tau / free - 1)) < 1e-3),
            float(np.max(np.abs(tau / free - 1))),
            1e-3,
        ),
    ]


def delta_impurity_check():
    worst = 0.0
    for strength in (0.05, 0.3, -0.7):
        chain = delta_impurity_chain(strength)
        e = np.linspace(0.1, 3.9, 39) * chain.t0
        t, _ = transmission_reflection(smatrix_array(chain, e))
        worst = max(worst, float(np.max(np.abs(t - delta_impurity_T(e, strength, chain.t0)))))
    return [Check("delta impurity T vs closed form", worst < 1e-6, worst, 1e-6)]


def square_well_check(a=SQUARE_WELL_A):
    depth = mev_to_hartree(SQUARE_WELL_DEPTH_MEV)
    chain = square_well_chain(depth, SQUARE_WELL_WIDTH, a)
    e = mev_to_hartree(np.linspace(0.5, 100.0, 100))
    t, _ = transmission_reflection(smatrix_array(chain, e))
    ref = analytic_square_well_T(e, depth, SQUARE_WELL_WIDTH)
    worst = float(np.max(np.abs(t / ref - 1)))
    return [Check("square well T vs continuum (relative)", worst < 1e-3, worst, 1e-3)]


def transfer_matrix_check(n_chains=50, seed=20240601):
    rng = np.random.default_rng(seed)
    worst, worst_u = 0.0, 0.0
    for _ in range(n_chains):
        chain = random_chain(rng, int(rng.integers(10, 201)))
        e = np.array([0.1, 0.7, 1.6, 2.5, 3.9]) * chain.t0
        s = smatrix_array(chain, e)
        ref = np.array([transfer_matrix_smatrix(chain, x).s_ref for x in e])
        worst = max(worst, float(np.max(np.abs(s - ref))))
        worst_u = max(worst_u, float(np.max(unitarity_defect(s))))
    return [
        Check("wave matching vs transfer matrix (max entry)", worst < 1e-8, worst, 1e-8),
        Check("random chains unitarity defect", worst_u < 1e-10, worst_u, 1e-10),
    ]


def run_validation(threads=1):
    checks = []
    checks += flat_wire_check(threads=threads)
    checks += delta_impurity_check()
    checks += square_well_check()
    checks += transfer_matrix_check()
    return checks

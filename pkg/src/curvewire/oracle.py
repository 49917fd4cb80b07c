"""Independent reference solvers for cross-checking the production path.

These are deliberately simple and slow. The transfer-matrix route shares
no code with the wave-matching kernel beyond the chain arrays.
"""
from __future__ import annotations

from dataclasses import dataclass

import mpmath
import numpy as np

from .hamiltonian import Chain, lead_hopping

TM_MAX_SITES = 200
TM_BAND = (0.1, 3.9)
ORACLE_BASE_DIGITS = 30


class OracleRegimeError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class OracleResult:
    energy: float
    s_ref: np.ndarray
    method: str


def transfer_matrix_smatrix(chain: Chain, energy: float) -> OracleResult:
    """S-matrix from the product of site-by-site 2x2 transfer matrices.

    Wave functions in the leads are written as ``A e^{ikja} + B e^{-ikja}``
    (left, origin at site 0) and ``C e^{ik(j-N)a} + D e^{-ik(j-N)a}`` (right,
    origin at site N), so phases are referenced at the two interfaces.
    """
    t0, a, n = chain.t0, chain.a, chain.n_sites
    if n > TM_MAX_SITES:
        raise OracleRegimeError(f"transfer matrix limited to {TM_MAX_SITES} sites, chain has {n}")
    if not (TM_BAND[0] * t0 <= energy <= TM_BAND[1] * t0):
        raise OracleRegimeError(f"energy outside the oracle regime [{TM_BAND[0]}, {TM_BAND[1]}] t0")
    # growing and decaying solutions can differ by ~10 per site; carry enough digits
    with mpmath.workdps(ORACLE_BASE_DIGITS + 2 * n):
        en, tt = mpmath.mpf(energy), mpmath.mpf(t0)
        ka = mpmath.acos(1 - en / (2 * tt))
        e = mpmath.expj(ka)
        hop = [tt] + [mpmath.mpf(h) for h in chain.hopping] + [tt]
        # propagate (psi_{j-1}, psi_j) from j = 0 to j = N + 1; all entries real
        p00, p01, p10, p11 = mpmath.mpf(1), mpmath.mpf(0), mpmath.mpf(0), mpmath.mpf(1)
        for i in range(n):
            # -h_{i-1} psi_{i-1} + eps_i psi_i - h_i psi_{i+1} = E psi_i
            q10 = -hop[i] / hop[i + 1]
            q11 = (mpmath.mpf(chain.onsite[i]) - en) / hop[i + 1]
            p00, p01, p10, p11 = p10, p11, q10 * p00 + q11 * p10, q10 * p01 + q11 * p11
        p = mpmath.matrix([[p00, p01], [p10, p11]])
        # (psi_{-1}, psi_0) = W_l (A, B);  (psi_N, psi_{N+1}) = W_r (C, D)
        w_l = mpmath.matrix([[1 / e, e], [1, 1]])
        w_r = mpmath.matrix([[1, 1], [e, 1 / e]])
        m = mpmath.inverse(w_r) * p * w_l
        m00, m01, m10, m11 = m[0, 0], m[0, 1], m[1, 0], m[1, 1]
        s = np.array(
            [
                [complex(-m10 / m11), complex(1 / m11)],
                [complex(m00 - m01 * m10 / m11), complex(m01 / m11)],
            ]
        )
    if not np.all(np.isfinite(s)):
        raise OracleRegimeError("transfer matrix product overflowed")
    return OracleResult(float(energy), s, "transfer_matrix")


def analytic_square_well_T(energy, depth, width, mass=1.0):
    """Continuum transmission through a rectangular well of ``depth < 0``."""
    if not depth < 0:
        raise ValueError("depth must be negative")
    if not (width > 0 and np.all(np.asarray(energy) > 0)):
        raise ValueError("width and energy must be positive")
    energy = np.asarray(energy, dtype=float)
    v = abs(depth)
    k2 = np.sqrt(2.0 * mass * (energy + v))
    t = 1.0 / (1.0 + v * v * np.sin(k2 * width) ** 2 / (4.0 * energy * (energy + v)))
    return float(t) if t.ndim == 0 else t


def delta_impurity_T(energy, strength, t0):
    """Transmission past a single lattice site shifted by ``strength``."""
    ka = np.arccos(1.0 - np.asarray(energy, dtype=float) / (2.0 * t0))
    return 1.0 / (1.0 + (strength / (2.0 * t0 * np.sin(ka))) ** 2)


def square_well_chain(depth, width, a, margin=None, mass=1.0) -> Chain:
    """Flat chain with ``round(width/a)`` interior sites shifted by ``depth``."""
    t0 = lead_hopping(a, mass)
    n_well = int(round(width / a))
    margin = n_well if margin is None else int(round(margin / a))
    n = n_well + 2 * margin
    onsite = np.full(n, 2.0 * t0)
    onsite[margin : margin + n_well] += depth
    return Chain(a=a, onsite=onsite, hopping=np.full(n - 1, t0), mass=mass, descriptor={"kind": "square_well"})


def delta_impurity_chain(strength, n_sites=51, a=1.0, mass=1.0) -> Chain:
    t0 = lead_hopping(a, mass)
    onsite = np.full(n_sites, 2.0 * t0)
    onsite[n_sites // 2] += strength
    return Chain(a=a, onsite=onsite, hopping=np.full(n_sites - 1, t0), mass=mass, descriptor={"kind": "delta"})


def random_chain(rng: np.random.Generator, n_sites: int, a=1.0, mass=1.0) -> Chain:
    """Short chain with onsite shifts in ``[-t0/10, t0/10]`` and hoppings in ``[0.8 t0, t0]``.

    The outermost sites and bonds are kept lead-like, as every Chain requires.
    """
    t0 = lead_hopping(a, mass)
    onsite = 2.0 * t0 + rng.uniform(-0.1, 0.1, n_sites) * t0
    hopping = rng.uniform(0.8, 1.0, n_sites - 1) * t0
    onsite[[0, -1]] = 2.0 * t0
    hopping[[0, -1]] = t0
    return Chain(a=a, onsite=onsite, hopping=hopping, mass=mass, descriptor={"kind": "random"})

"""Nearest-neighbour tight-binding chain for the effective equation.

Sites sit at ``x_i = i * a`` for ``i = 0..N`` with ``N * a = L``. Hoppings
are evaluated at mid-bonds, ``t_eff(x) = t0 / (1 + f'(x)^2)`` with
``t0 = 1 / (2 m0 a^2)``, and the onsite energy is
``V_eff(x_i) + t_eff(x_i - a/2) + t_eff(x_i + a/2)``. Bonds that reach outside
``[0, L]`` belong to the leads and carry ``t0``.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp

from .geometry import FLATNESS_TOL, Profile, ProfileError, effective_potential, eval_profile

MIN_INTERVALS = 100
BOUNDARY_TOL = 1e-8


class ChainError(ValueError):
    pass


def lead_hopping(a, mass=1.0):
    return 1.0 / (2.0 * mass * a * a)


@dataclass(frozen=True, eq=False)
class Chain:
    """Discretised scattering region between two flat leads (atomic units).

    ``onsite`` has one entry per site, ``hopping[i]`` couples sites ``i`` and
    ``i + 1`` and is stored positive (the matrix element is ``-hopping``).
    """

    a: float
    onsite: np.ndarray
    hopping: np.ndarray
    mass: float = 1.0
    x: np.ndarray | None = None
    descriptor: dict = field(default_factory=dict)

    def __post_init__(self):
        onsite = np.array(self.onsite, dtype=float)
        hopping = np.array(self.hopping, dtype=float)
        if onsite.ndim != 1 or onsite.size < 2:
            raise ChainError("chain needs at least two sites")
        if hopping.shape != (onsite.size - 1,):
            raise ChainError("hopping must have n_sites - 1 entries")
        if not self.a > 0:
            raise ChainError("lattice constant must be positive")
        t0 = self.t0
        if not np.all(np.isfinite(onsite)):
            raise ChainError("onsite energies must be finite")
        if not (np.all(hopping > 0) and np.all(hopping <= t0 * (1.0 + 1e-12))):
            raise ChainError("hoppings must lie in (0, t0]")
        tol = BOUNDARY_TOL * t0
        for name, idx, bond in (("left", 0, 0), ("right", -1, -1)):
            if abs(onsite[idx] - 2.0 * t0) >= tol or abs(hopping[bond] - t0) >= tol:
                raise ChainError(f"{name} boundary of the chain does not match the flat lead")
        x = np.arange(onsite.size) * self.a if self.x is None else np.array(self.x, dtype=float)
        for arr in (onsite, hopping, x):
            arr.setflags(write=False)
        object.__setattr__(self, "onsite", onsite)
        object.__setattr__(self, "hopping", hopping)
        object.__setattr__(self, "x", x)

    @property
    def t0(self):
        return lead_hopping(self.a, self.mass)

    @property
    def n_sites(self):
        return self.onsite.size

    @property
    def length(self):
        """Distance between the two lead interfaces."""
        return (self.n_sites - 1) * self.a

    def as_matrix(self):
        """Hamiltonian of the isolated scattering region as a sparse matrix."""
        return sp.diags([-self.hopping, self.onsite, -self.hopping], [-1, 0, 1], format="csr")


def hopping_at(profile: Profile, x_mid, a, mass=1.0):
    _, f1, _, _ = eval_profile(profile, x_mid)
    return lead_hopping(a, mass) / (1.0 + np.square(f1))


def _bond_hopping(profile, x_mid, a, mass):
    # bonds outside the domain belong to the flat leads
    x_mid = np.asarray(x_mid, dtype=float)
    inside = (x_mid >= 0.0) & (x_mid <= profile.length)
    t = np.full(x_mid.shape, lead_hopping(a, mass))
    if np.any(inside):
        t[inside] = hopping_at(profile, x_mid[inside], a, mass)
    return t


def onsite_at(profile: Profile, x_i, a, mass=1.0):
    x_i = np.asarray(x_i, dtype=float)
    _, f1, f2, f3 = eval_profile(profile, x_i)
    mean_t = 0.5 * (_bond_hopping(profile, x_i - 0.5 * a, a, mass) + _bond_hopping(profile, x_i + 0.5 * a, a, mass))
    out = effective_potential(f1, f2, f3, mass) + 2.0 * mean_t
    return float(out) if out.ndim == 0 else out


def build_chain(profile: Profile, a: float, mass: float = 1.0) -> Chain:
    """Discretise ``profile`` with lattice constant close to ``a``.

    The lattice constant is snapped to ``L / round(L / a)`` so that the last
    site lands on the right interface.
    """
    n_int = int(round(profile.length / a))
    if n_int < MIN_INTERVALS:
        raise ChainError(f"need L/a >= {MIN_INTERVALS}, got {profile.length / a:.1f}")
    a = profile.length / n_int
    for name, x in (("left", 0.0), ("right", profile.length)):
        slope = profile.derivatives(np.asarray(x))[1]
        if not abs(float(slope)) < FLATNESS_TOL:
            raise ProfileError(f"profile is not flat at the {name} endpoint x={x:g}")
    x = np.arange(n_int + 1) * a
    x[-1] = profile.length
    hopping = hopping_at(profile, x[:-1] + 0.5 * a, a, mass)
    onsite = onsite_at(profile, x, a, mass)
    return Chain(a=a, onsite=onsite, hopping=hopping, mass=mass, x=x, descriptor=profile.describe())

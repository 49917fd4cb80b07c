"""Quantum transport along curved one-dimensional wires.

A planar wire profile ``f(x)`` is turned into a position-dependent-mass
Schrödinger problem, discretised on a tight-binding chain between two flat
leads, and solved for the 2x2 S-matrix. From it follow transmission
spectra, the Friedel phase and the Wigner time delay.
"""
__version__ = "0.1.0"

from .geometry import (
    DoubleGaussian,
    Flat,
    SingleGaussian,
    Tabulated,
    arc_length,
    eval_profile,
    geometry_field,
    reference_double_gaussian,
    reference_single_gaussian,
)
from .hamiltonian import Chain, build_chain
from .kernels import BACKEND
from .observables import Spectrum, classical_delay, friedel_phase, transmission_reflection, wigner_delay
from .scattering import SMatrixPoint, lead_momentum, solve_smatrix
from .sweep import SweepConfig, converge_resolution, hartman_scan, run_spectrum

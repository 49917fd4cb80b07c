import math

import numpy as np
import pytest

from curvewire import kernels
from curvewire.geometry import Flat
from curvewire.hamiltonian import build_chain, lead_hopping
from curvewire.scattering import (
    EvanescentEnergyError,
    SolverError,
    group_velocity,
    lead_momentum,
    smatrix_array,
    solve_smatrix,
    unitarity_defect,
)
from curvewire.units import mev_to_hartree


def test_lead_momentum_examples():
    t0, a = 0.7, 0.5
    assert lead_momentum(2 * t0, t0, a) * a == pytest.approx(math.pi / 2)
    e = 1e-8 * t0
    assert lead_momentum(e, t0, a) == pytest.approx(math.sqrt(e / t0) / a, rel=1e-7)
    for bad in (0.0, 4 * t0, -1.0, 5 * t0):
        with pytest.raises(EvanescentEnergyError):
            lead_momentum(bad, t0, a)
    assert group_velocity(2 * t0, t0, a) == pytest.approx(2 * t0 * a)


def test_flat_chain_transmits_with_phase_kl():
    chain = build_chain(Flat(200.0), 0.2)
    for e_mev in (1.0, 17.0, 80.0):
        p = solve_smatrix(chain, mev_to_hartree(e_mev))
        assert abs(p.r_l) < 1e-10 and abs(p.r_r) < 1e-10
        assert abs(abs(p.t_l) - 1) < 1e-10
        phase = np.angle(p.t_l * np.exp(-1j * p.k * chain.length))
        assert abs(phase) < 1e-9
        assert p.det == pytest.approx(-np.exp(2j * p.k * chain.length), abs=1e-9)


def test_smatrix_invariants_on_default_grid(single_gaussian, double_pairs):
    e = mev_to_hartree(np.geomspace(0.5, 120, 600))
    for prof in (single_gaussian, double_pairs[0.15]["odd"]):
        chain = build_chain(prof, prof.length / 5000)
        s = smatrix_array(chain, e, threads=2)
        assert np.max(unitarity_defect(s)) < 1e-10
        assert np.max(np.abs(s - np.swapaxes(s, 1, 2))) < 1e-8
        assert np.max(np.abs(np.abs(np.linalg.det(s)) - 1)) < 1e-9
        # mirror-symmetric chains reflect equally from both sides
        assert np.max(np.abs(np.abs(s[:, 0, 0]) - np.abs(s[:, 1, 1]))) < 1e-9


def test_smatrix_point_fields(single_gaussian):
    chain = build_chain(single_gaussian, single_gaussian.length / 1000)
    p = solve_smatrix(chain, mev_to_hartree(30.0))
    assert p.s.shape == (2, 2)
    assert p.unitarity_defect < 1e-10
    assert p.reciprocity_defect < 1e-8
    assert p.k == pytest.approx(lead_momentum(p.energy, chain.t0, chain.a))


def test_single_gaussian_transparent_at_100mev(single_gaussian):
    chain = build_chain(single_gaussian, single_gaussian.length / 5000)
    p = solve_smatrix(chain, mev_to_hartree(100.0))
    assert abs(p.t_l) ** 2 > 0.99


def test_pole_retry(monkeypatch):
    chain = build_chain(Flat(50.0), 0.1)
    real = kernels.smatrix_batch
    calls = []

    def flaky(onsite, hopping, t0, energies, backend=None):
        calls.append(np.array(energies))
        out = real(onsite, hopping, t0, energies, backend)
        if len(calls) == 1:
            out[0] = np.nan
        return out

    monkeypatch.setattr(kernels, "smatrix_batch", flaky)
    s = smatrix_array(chain, [0.01, 0.02])
    assert np.all(np.isfinite(s))
    assert calls[1][0] == pytest.approx(0.01 * (1 + 1e-12), rel=0, abs=1e-18)


def test_repeated_pole_raises(monkeypatch):
    chain = build_chain(Flat(50.0), 0.1)

    def broken(onsite, hopping, t0, energies, backend=None):
        return np.full((len(energies), 2, 2), np.nan + 0j)

    monkeypatch.setattr(kernels, "smatrix_batch", broken)
    with pytest.raises(SolverError):
        smatrix_array(chain, [0.01])


def test_whole_band_accepted():
    chain = build_chain(Flat(20.0), 0.1)
    t0 = lead_hopping(chain.a)
    s = smatrix_array(chain, np.array([0.01, 1.0, 3.99]) * t0)
    assert np.max(unitarity_defect(s)) < 1e-10

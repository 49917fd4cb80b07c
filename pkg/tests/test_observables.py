import math
import warnings

import numpy as np
import pytest

from curvewire.geometry import Flat, arc_length, reference_double_gaussian
from curvewire.hamiltonian import build_chain
from curvewire.observables import (
    DelayConvergenceWarning,
    classical_delay,
    friedel_phase,
    transmission_reflection,
    wigner_delay,
    wigner_delays,
)
from curvewire.scattering import group_velocity, lead_momentum, smatrix_array, solve_smatrix
from curvewire.units import au_to_fs, mev_to_hartree

# located by maximising T of the even s = 0.15 L double Gaussian (a = L/5000) near 5.7 meV
RESONANCE_EVEN_015_MEV = 5.712048349078517
# 50-digit evaluation with the mpmath arc length of the padded single-Gaussian domain
TAU_C_50MEV_FS = 499.19073586909490492


@pytest.fixture(scope="module")
def flat_chain():
    return build_chain(Flat(1000.0), 0.2)


def test_transmission_reflection_flat(flat_chain):
    t, r = transmission_reflection(solve_smatrix(flat_chain, mev_to_hartree(10.0)))
    assert t == pytest.approx(1.0, abs=1e-10)
    assert r == pytest.approx(0.0, abs=1e-10)


def test_transmission_reflection_stack(single_gaussian):
    chain = build_chain(single_gaussian, single_gaussian.length / 2000)
    s = smatrix_array(chain, mev_to_hartree(np.geomspace(0.5, 120, 64)))
    t, r = transmission_reflection(s)
    assert np.max(np.abs(t + r - 1)) < 1e-10
    assert np.all((t >= 0) & (t <= 1 + 1e-12))


def test_friedel_phase_single_point(single_gaussian):
    chain = build_chain(single_gaussian, single_gaussian.length / 2000)
    p = solve_smatrix(chain, mev_to_hartree(7.0))
    phase = friedel_phase([p])
    assert phase.shape == (1,)
    assert phase[0] == pytest.approx(np.angle(np.linalg.det(p.s)))
    assert -math.pi < phase[0] <= math.pi


def test_friedel_phase_flat_increment(flat_chain):
    e = mev_to_hartree(np.linspace(1.0, 100.0, 4000))
    phase = friedel_phase(smatrix_array(flat_chain, e))
    k = lead_momentum(e, flat_chain.t0, flat_chain.a)
    np.testing.assert_allclose(phase - phase[0], 2 * flat_chain.length * (k - k[0]), rtol=0, atol=1e-8)
    assert np.all(np.abs(np.diff(phase)) < math.pi)


def test_flat_delay_is_free_flight(flat_chain):
    e = mev_to_hartree(np.geomspace(1.0, 100.0, 80))
    tau, ok = wigner_delays(flat_chain, e)
    assert ok.all()
    free = flat_chain.length / group_velocity(e, flat_chain.t0, flat_chain.a)
    assert np.max(np.abs(tau / free - 1)) < 1e-3


def test_wigner_delay_explicit_step(flat_chain):
    e = mev_to_hartree(20.0)
    free = flat_chain.length / group_velocity(e, flat_chain.t0, flat_chain.a)
    assert wigner_delay(flat_chain, e, dE=mev_to_hartree(1e-3)) == pytest.approx(free, rel=1e-3)


def test_unconverged_delay_warns(flat_chain, monkeypatch):
    import curvewire.observables as obs

    calls = iter(range(1000))
    monkeypatch.setattr(obs, "_stencil_delay", lambda *a, **k: np.array([float(next(calls) + 1)]))
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        wigner_delay(flat_chain, mev_to_hartree(20.0))
    assert any(issubclass(w.category, DelayConvergenceWarning) for w in caught)


def test_classical_delay_scaling():
    assert classical_delay(0.01, 100.0) / classical_delay(0.02, 100.0) == pytest.approx(math.sqrt(2))
    assert classical_delay(0.01, 300.0) == pytest.approx(3 * classical_delay(0.01, 100.0))
    with pytest.raises(ValueError):
        classical_delay(0.0, 1.0)


def test_classical_matches_flat_delay_in_continuum_limit():
    e = mev_to_hartree(5.0)
    gaps = []
    for a in (0.8, 0.4, 0.2):
        chain = build_chain(Flat(400.0), a)
        tau = wigner_delays(chain, [e])[0][0]
        gaps.append(abs(tau / classical_delay(e, chain.length) - 1))
    assert gaps[0] > gaps[1] > gaps[2]
    assert gaps[2] < 1e-4


def test_classical_delay_pinned(single_gaussian):
    d = arc_length(single_gaussian, 0.0, single_gaussian.length)
    assert au_to_fs(classical_delay(mev_to_hartree(50.0), d)) == pytest.approx(TAU_C_50MEV_FS, rel=1e-10)


def test_single_gaussian_delay_examples(single_gaussian):
    chain = build_chain(single_gaussian, single_gaussian.length / 5000)
    d = arc_length(single_gaussian, 0.0, single_gaussian.length)
    for e_mev, close in ((50.0, True), (2.0, False)):
        e = mev_to_hartree(e_mev)
        gap = abs(wigner_delay(chain, e) / classical_delay(e, d) - 1)
        assert (gap < 0.05) == close


def test_double_gaussian_resonance_pinned():
    prof = reference_double_gaussian(0.15, "even")
    chain = build_chain(prof, prof.length / 5000)
    e = mev_to_hartree(RESONANCE_EVEN_015_MEV + np.array([-0.01, 0.0, 0.01]))
    t, _ = transmission_reflection(smatrix_array(chain, e))
    assert t[1] > 0.999
    assert t[1] > t[0] and t[1] > t[2]
    assert RESONANCE_EVEN_015_MEV < 60

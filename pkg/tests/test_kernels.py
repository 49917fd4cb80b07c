import numpy as np
import pytest

from curvewire import kernels
from curvewire.hamiltonian import build_chain
from curvewire.oracle import random_chain
from curvewire.scattering import smatrix_array
from curvewire.units import mev_to_hartree

needs_cython = pytest.mark.skipif("cython" not in kernels.AVAILABLE, reason="compiled kernel not built")


def test_backend_reported():
    assert kernels.BACKEND in kernels.AVAILABLE


@needs_cython
def test_backends_agree_random_chains():
    rng = np.random.default_rng(7)
    for _ in range(20):
        chain = random_chain(rng, int(rng.integers(5, 300)))
        e = rng.uniform(0.05, 3.95, 40) * chain.t0
        a = smatrix_array(chain, e, backend="cython")
        b = smatrix_array(chain, e, backend="numpy")
        assert np.max(np.abs(a - b)) < 1e-12


@needs_cython
def test_backends_agree_reference_profile(single_gaussian):
    chain = build_chain(single_gaussian, single_gaussian.length / 5000)
    e = mev_to_hartree(np.geomspace(0.5, 120, 50))
    a = smatrix_array(chain, e, backend="cython")
    b = smatrix_array(chain, e, backend="numpy")
    assert np.max(np.abs(a - b)) < 1e-10


@pytest.mark.parametrize("backend", sorted(kernels.AVAILABLE))
def test_thread_count_independent(single_gaussian, backend):
    chain = build_chain(single_gaussian, single_gaussian.length / 2000)
    e = mev_to_hartree(np.geomspace(0.5, 120, 97))
    ref = smatrix_array(chain, e, threads=1, backend=backend)
    for threads in (2, 3, 8):
        assert np.array_equal(smatrix_array(chain, e, threads=threads, backend=backend), ref)

"""NumPy implementation of the wave-matching kernel.

For energy ``E`` in the lead band, ``cos ka = 1 - E/(2 t0)`` and each lead
adds the self-energy ``-t0 exp(ika)`` to its boundary site. With
``M = E - H - Sigma`` and ``gamma = 2 t0 sin ka``, the flux-normalised
S-matrix is ``S = -1 + i gamma G`` restricted to the two boundary sites,
``G = M^-1``.

Only four entries of ``G`` are needed. A left-to-right elimination sweep
gives ``G_NN = 1/l_N`` and ``G_N0 = G_NN prod(-h_i / l_i)``, where ``l_i`` are
the pivots; the mirrored sweep gives ``G_00`` and ``G_0N``. The pivots are
inverse surface Green's functions of an open system, so their imaginary
part never vanishes inside the band and no pivoting is required.

Loops run over sites; energies are vectorised.
"""
import numpy as np


def smatrix_batch(onsite, hopping, t0, energies):
    onsite = np.asarray(onsite, dtype=float)
    hopping = np.asarray(hopping, dtype=float)
    energy = np.asarray(energies, dtype=float)
    n = onsite.size
    eps = energy / (2.0 * t0)
    c = 1.0 - eps
    s = np.sqrt(eps * (2.0 - eps))
    lead = t0 * (c + 1j * s)
    igamma = 1j * (2.0 * t0 * s)

    left = energy - onsite[0] + lead
    prod_l = np.ones_like(left)
    for i in range(1, n):
        g = 1.0 / left
        h = hopping[i - 1]
        prod_l = prod_l * (-h * g)
        b = energy - onsite[i]
        if i == n - 1:
            b = b + lead
        left = b - h * h * g

    right = energy - onsite[n - 1] + lead
    prod_r = np.ones_like(right)
    for i in range(n - 2, -1, -1):
        g = 1.0 / right
        h = hopping[i]
        prod_r = prod_r * (-h * g)
        b = energy - onsite[i]
        if i == 0:
            b = b + lead
        right = b - h * h * g

    out = np.empty((energy.size, 2, 2), dtype=complex)
    out[:, 0, 0] = igamma / right - 1.0
    out[:, 0, 1] = igamma * prod_r / right
    out[:, 1, 0] = igamma * prod_l / left
    out[:, 1, 1] = igamma / left - 1.0
    return out

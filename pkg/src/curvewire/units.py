"""Unit conventions.

All internal computation is in Hartree atomic units (hbar = m_e = a_0 = 1).
Energies cross the I/O boundary in meV and times in femtoseconds.
"""

HARTREE_MEV = 27211.386
AU_TIME_FS = 0.02418884
HBAR = 1.0
ELECTRON_MASS = 1.0


def mev_to_hartree(e_mev):
    return e_mev / HARTREE_MEV


def hartree_to_mev(e_ha):
    return e_ha * HARTREE_MEV


def au_to_fs(t_au):
    return t_au * AU_TIME_FS


def fs_to_au(t_fs):
    return t_fs / AU_TIME_FS


UNIT_CONVENTIONS = {
    "internal": "Hartree atomic units (hbar = m_e = a_0 = 1)",
    "length": "bohr (a_0)",
    "energy_io": "meV",
    "time_io": "fs",
    "hartree_meV": HARTREE_MEV,
    "au_time_fs": AU_TIME_FS,
}

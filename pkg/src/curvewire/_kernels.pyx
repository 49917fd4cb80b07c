# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled wave-matching kernel.

Same algorithm as ``curvewire._kernels_py``; see that module for the
derivation of the recursions. Each site recursion is a chain of dependent
complex divisions, so energies are swept in blocks of ``BLOCK`` to keep
independent recursions in flight; arithmetic is spelled out in real parts.
"""
import numpy as np
cimport numpy as cnp
from libc.math cimport sqrt

cnp.import_array()

cdef enum:
    BLOCK = 8


cdef void _sweep(const double[::1] onsite, const double[::1] hopping, double t0,
                 const double* en, Py_ssize_t nb, bint forward,
                 double* dr, double* di, double* pr, double* pi) noexcept nogil:
    """Boundary diagonal ``d`` and hopping product ``p`` of one directed sweep."""
    cdef Py_ssize_t n = onsite.shape[0]
    cdef Py_ssize_t step, i, j, bond
    cdef double lr[BLOCK]
    cdef double li[BLOCK]
    cdef double qr[BLOCK]
    cdef double qi[BLOCK]
    cdef double ls[BLOCK]
    cdef double eps, den, gr, gi, h, h2, tr, ti, e
    for j in range(nb):
        eps = en[j] / (2.0 * t0)
        ls[j] = t0 * sqrt(eps * (2.0 - eps))
        i = 0 if forward else n - 1
        lr[j] = en[j] - onsite[i] + t0 * (1.0 - eps)
        li[j] = ls[j]
        qr[j] = 1.0
        qi[j] = 0.0
    for step in range(1, n):
        i = step if forward else n - 1 - step
        bond = i - 1 if forward else i
        h = hopping[bond]
        h2 = h * h
        for j in range(nb):
            den = lr[j] * lr[j] + li[j] * li[j]
            gr = lr[j] / den
            gi = -li[j] / den
            tr = -h * (qr[j] * gr - qi[j] * gi)
            ti = -h * (qr[j] * gi + qi[j] * gr)
            qr[j] = tr
            qi[j] = ti
            lr[j] = en[j] - onsite[i] - h2 * gr
            li[j] = -h2 * gi
    for j in range(nb):
        # the far boundary site also couples to its lead
        eps = en[j] / (2.0 * t0)
        dr[j] = lr[j] + t0 * (1.0 - eps)
        di[j] = li[j] + ls[j]
        pr[j] = qr[j]
        pi[j] = qi[j]


cdef void _solve_block(const double[::1] onsite, const double[::1] hopping, double t0,
                       const double* en, Py_ssize_t nb, double complex* out) noexcept nogil:
    cdef double ldr[BLOCK]
    cdef double ldi[BLOCK]
    cdef double lpr[BLOCK]
    cdef double lpi[BLOCK]
    cdef double rdr[BLOCK]
    cdef double rdi[BLOCK]
    cdef double rpr[BLOCK]
    cdef double rpi[BLOCK]
    cdef Py_ssize_t j
    cdef double eps, gam, den
    cdef double complex il, ir
    _sweep(onsite, hopping, t0, en, nb, True, ldr, ldi, lpr, lpi)
    _sweep(onsite, hopping, t0, en, nb, False, rdr, rdi, rpr, rpi)
    for j in range(nb):
        eps = en[j] / (2.0 * t0)
        gam = 2.0 * t0 * sqrt(eps * (2.0 - eps))
        # i*gamma / d for both sweep directions
        den = ldr[j] * ldr[j] + ldi[j] * ldi[j]
        il = (gam * ldi[j] + 1j * gam * ldr[j]) / den
        den = rdr[j] * rdr[j] + rdi[j] * rdi[j]
        ir = (gam * rdi[j] + 1j * gam * rdr[j]) / den
        out[4 * j + 0] = ir - 1.0
        out[4 * j + 1] = ir * (rpr[j] + 1j * rpi[j])
        out[4 * j + 2] = il * (lpr[j] + 1j * lpi[j])
        out[4 * j + 3] = il - 1.0


def smatrix_batch(onsite, hopping, double t0, energies):
    """S-matrices ``(m, 2, 2)`` for a real tridiagonal chain with flat leads."""
    cdef const double[::1] on = np.ascontiguousarray(onsite, dtype=np.float64)
    cdef const double[::1] hop = np.ascontiguousarray(hopping, dtype=np.float64)
    cdef const double[::1] en = np.ascontiguousarray(energies, dtype=np.float64)
    cdef Py_ssize_t m = en.shape[0]
    out = np.empty((m, 2, 2), dtype=np.complex128)
    cdef double complex[:, :, ::1] res = out
    cdef Py_ssize_t k, nb
    if m == 0:
        return out
    k = 0
    with nogil:
        while k < m:
            nb = m - k if m - k < BLOCK else BLOCK
            _solve_block(on, hop, t0, &en[k], nb, &res[k, 0, 0])
            k += nb
    return out

# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled hot loops.  Must stay numerically interchangeable with ``_pykernels``."""

import numpy as np
cimport numpy as cnp
from libc.math cimport cos

cnp.import_array()


def hom_rates(weights, detunings, dphase, delays, double mu):
    cdef const double[::1] w = np.ascontiguousarray(weights, dtype=np.float64)
    cdef const double[::1] v = np.ascontiguousarray(detunings, dtype=np.float64)
    cdef const double[::1] dphi = np.ascontiguousarray(dphase, dtype=np.float64)
    cdef const double[::1] tau = np.ascontiguousarray(delays, dtype=np.float64)
    cdef Py_ssize_t n = w.shape[0], m = tau.shape[0], j, k
    cdef double acc, t2
    out_arr = np.empty(m, dtype=np.float64)
    cdef double[::1] out = out_arr
    with nogil:
        for j in range(m):
            t2 = 2.0 * tau[j]
            acc = 0.0
            for k in range(n):
                acc += w[k] * (1.0 - mu * cos(t2 * v[k] + dphi[k]))
            out[j] = acc
    return out_arr


def orth_probability(amplitude, upper, lower, double dv):
    cdef const double complex[:, :, ::1] a = np.ascontiguousarray(amplitude, dtype=np.complex128)
    cdef const double complex[:, :, ::1] u = np.ascontiguousarray(upper, dtype=np.complex128)
    cdef const double complex[:, :, ::1] l = np.ascontiguousarray(lower, dtype=np.complex128)
    cdef Py_ssize_t n = a.shape[0], k, p, q
    cdef double complex hv, vh
    cdef double total = 0.0
    with nogil:
        for k in range(n):
            # (U A L^T)[0,1] and [1,0]
            hv = 0.0
            vh = 0.0
            for p in range(2):
                for q in range(2):
                    hv = hv + u[k, 0, p] * a[k, p, q] * l[k, 1, q]
                    vh = vh + u[k, 1, p] * a[k, p, q] * l[k, 0, q]
            total += hv.real * hv.real + hv.imag * hv.imag + vh.real * vh.real + vh.imag * vh.imag
    return total * dv

# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled Monte Carlo kernels; see ``_kernels_py`` for the reference version."""
import numpy as np
cimport numpy as cnp
from libc.math cimport cos, pow, M_PI

cnp.import_array()


cdef inline double _received(double dist, double angle, double orient, double fade,
                             double eta, double eps, double d_tx, double n_tx,
                             double d_rx, double n_rx) noexcept nogil:
    cdef double g = 1.0 / (pow(dist, eta) + eps)
    cdef double tx = 1.0 + d_tx * cos(n_tx * (angle + M_PI - orient))
    cdef double rx = 1.0 + d_rx * cos(n_rx * angle)
    return fade * g * tx * rx


def interference(const cnp.int64_t[::1] offsets, const double[::1] dist,
                 const double[::1] angle, const double[::1] orient,
                 const double[::1] fade, double eta, double eps,
                 double d_tx, double n_tx, double d_rx, double n_rx):
    cdef Py_ssize_t ntrials = offsets.shape[0] - 1
    out_arr = np.zeros(ntrials, dtype=np.float64)
    cdef double[::1] out = out_arr
    cdef Py_ssize_t j, k
    cdef double acc
    with nogil:
        for j in range(ntrials):
            acc = 0.0
            for k in range(offsets[j], offsets[j + 1]):
                acc = acc + _received(dist[k], angle[k], orient[k], fade[k],
                                      eta, eps, d_tx, n_tx, d_rx, n_rx)
            out[j] = acc
    return out_arr


def degree_counts(const cnp.int64_t[::1] offsets, const double[::1] dist,
                  const double[::1] angle, const double[::1] orient,
                  const double[::1] fade, double eta, double eps,
                  double d_tx, double n_tx, double d_rx, double n_rx,
                  double power, double noise, double gamma, double threshold):
    cdef Py_ssize_t ntrials = offsets.shape[0] - 1
    cdef Py_ssize_t npts = dist.shape[0]
    out_arr = np.zeros(ntrials, dtype=np.int64)
    cdef cnp.int64_t[::1] out = out_arr
    terms_arr = np.empty(npts, dtype=np.float64)
    cdef double[::1] terms = terms_arr
    cdef Py_ssize_t j, k
    cdef double total, signal, others
    cdef cnp.int64_t count
    with nogil:
        for j in range(ntrials):
            total = 0.0
            for k in range(offsets[j], offsets[j + 1]):
                terms[k] = _received(dist[k], angle[k], orient[k], fade[k],
                                     eta, eps, d_tx, n_tx, d_rx, n_rx)
                total = total + terms[k]
            count = 0
            for k in range(offsets[j], offsets[j + 1]):
                signal = power * terms[k]
                others = power * (total - terms[k])
                if signal / (noise + gamma * others) >= threshold:
                    count += 1
            out[j] = count
    return out_arr

# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels: incremental power sweeps and the smoothed max objective.

Same interface and renormalization cadence as powersum._kernels_py; the
backend module picks whichever import succeeds.
"""
from libc.math cimport cos, sin, sqrt, exp, log, fmod

import numpy as np

RENORM_EVERY = 1024
BACKEND_NAME = "compiled"

cdef double TWO_PI = 6.283185307179586476925287
cdef long long _RENORM = 1024


cdef inline void _init_powers(const double[::1] angles, double mult,
                              double* wr, double* wi) noexcept nogil:
    cdef Py_ssize_t k
    cdef double f
    for k in range(angles.shape[0]):
        f = fmod(angles[k] * mult, 1.0)
        wr[k] = cos(TWO_PI * f)
        wi[k] = sin(TWO_PI * f)


def sweep_max(const double[::1] weights, const double[::1] angles, long long m):
    """Max of |sum_k b_k z_k^nu| over nu = 1..m, with the smallest attaining nu."""
    cdef Py_ssize_t n = angles.shape[0]
    cdef double[::1] wr = np.empty(n)
    cdef double[::1] wi = np.empty(n)
    cdef double[::1] zr = np.empty(n)
    cdef double[::1] zi = np.empty(n)
    cdef double sr, si, a, best = -1.0, tr, nrm
    cdef long long nu, arg = 0
    cdef Py_ssize_t k
    with nogil:
        _init_powers(angles, 1.0, &zr[0], &zi[0])
        for k in range(n):
            wr[k] = zr[k]
            wi[k] = zi[k]
        for nu in range(1, m + 1):
            sr = 0.0
            si = 0.0
            for k in range(n):
                sr += weights[k] * wr[k]
                si += weights[k] * wi[k]
            a = sr * sr + si * si
            if a > best:
                best = a
                arg = nu
            for k in range(n):
                tr = wr[k] * zr[k] - wi[k] * zi[k]
                wi[k] = wr[k] * zi[k] + wi[k] * zr[k]
                wr[k] = tr
            if nu % _RENORM == 0:
                for k in range(n):
                    nrm = sqrt(wr[k] * wr[k] + wi[k] * wi[k])
                    wr[k] /= nrm
                    wi[k] /= nrm
    return sqrt(best), arg


def sweep_abs_sq(const double[::1] weights, const double[::1] angles,
                 long long start, long long count):
    """|sum_k b_k z_k^nu|^2 for nu = start, ..., start+count-1."""
    cdef Py_ssize_t n = angles.shape[0]
    out_arr = np.empty(count)
    cdef double[::1] out = out_arr
    cdef double[::1] wr = np.empty(n)
    cdef double[::1] wi = np.empty(n)
    cdef double[::1] zr = np.empty(n)
    cdef double[::1] zi = np.empty(n)
    cdef double sr, si, tr, nrm
    cdef long long i
    cdef Py_ssize_t k
    with nogil:
        _init_powers(angles, 1.0, &zr[0], &zi[0])
        _init_powers(angles, <double> start, &wr[0], &wi[0])
        for i in range(count):
            sr = 0.0
            si = 0.0
            for k in range(n):
                sr += weights[k] * wr[k]
                si += weights[k] * wi[k]
            out[i] = sr * sr + si * si
            for k in range(n):
                tr = wr[k] * zr[k] - wi[k] * zi[k]
                wi[k] = wr[k] * zi[k] + wi[k] * zr[k]
                wr[k] = tr
            if (i + 1) % _RENORM == 0:
                for k in range(n):
                    nrm = sqrt(wr[k] * wr[k] + wi[k] * wi[k])
                    wr[k] /= nrm
                    wi[k] /= nrm
    return out_arr


cdef double _lse_grad(const double[::1] angles, long long m, double tau,
                      double[::1] v, double[::1] wr, double[::1] wi,
                      double[::1] zr, double[::1] zi,
                      double[::1] grad) noexcept nogil:
    """Smoothed value; gradient written into `grad`.  Buffers caller-owned."""
    cdef Py_ssize_t n = angles.shape[0]
    cdef double sr, si, tr, nrm, vmax, z, p, coef
    cdef long long nu
    cdef Py_ssize_t k
    _init_powers(angles, 1.0, &zr[0], &zi[0])
    for k in range(n):
        wr[k] = zr[k]
        wi[k] = zi[k]
        grad[k] = 0.0
    vmax = -1.0
    for nu in range(1, m + 1):
        sr = 0.0
        si = 0.0
        for k in range(n):
            sr += wr[k]
            si += wi[k]
        v[nu - 1] = sr * sr + si * si
        if v[nu - 1] > vmax:
            vmax = v[nu - 1]
        for k in range(n):
            tr = wr[k] * zr[k] - wi[k] * zi[k]
            wi[k] = wr[k] * zi[k] + wi[k] * zr[k]
            wr[k] = tr
        if nu % _RENORM == 0:
            for k in range(n):
                nrm = sqrt(wr[k] * wr[k] + wi[k] * wi[k])
                wr[k] /= nrm
                wi[k] /= nrm
    z = 0.0
    for nu in range(m):
        z += exp((v[nu] - vmax) / tau)
    # second pass: softmax-weighted gradient, powers regenerated in place
    for k in range(n):
        wr[k] = zr[k]
        wi[k] = zi[k]
    for nu in range(1, m + 1):
        sr = 0.0
        si = 0.0
        for k in range(n):
            sr += wr[k]
            si += wi[k]
        p = exp((v[nu - 1] - vmax) / tau) / z
        coef = -2.0 * TWO_PI * (<double> nu) * p
        for k in range(n):
            # Im(conj(S) * w_k) = sr*wi_k - si*wr_k
            grad[k] += coef * (sr * wi[k] - si * wr[k])
        for k in range(n):
            tr = wr[k] * zr[k] - wi[k] * zi[k]
            wi[k] = wr[k] * zi[k] + wi[k] * zr[k]
            wr[k] = tr
        if nu % _RENORM == 0:
            for k in range(n):
                nrm = sqrt(wr[k] * wr[k] + wi[k] * wi[k])
                wr[k] /= nrm
                wi[k] /= nrm
    return vmax + tau * log(z)


def lse_objective(const double[::1] angles, long long m, double tau):
    """Smoothed maximum tau*log sum_nu exp(|S(nu)|^2/tau) and its angle gradient."""
    cdef Py_ssize_t n = angles.shape[0]
    grad_arr = np.empty(n)
    cdef double[::1] grad = grad_arr
    cdef double[::1] v = np.empty(m)
    cdef double[::1] wr = np.empty(n)
    cdef double[::1] wi = np.empty(n)
    cdef double[::1] zr = np.empty(n)
    cdef double[::1] zi = np.empty(n)
    cdef double value
    with nogil:
        value = _lse_grad(angles, m, tau, v, wr, wi, zr, zi, grad)
    return value, grad_arr


def descent_run(const double[::1] angles0, long long m, long long iters,
                double step0, double step_decay,
                double tau0, double tau_min, double tau_decay):
    """Normalized-gradient descent on the smoothed objective (see _kernels_py)."""
    cdef Py_ssize_t n = angles0.shape[0]
    th_arr = np.array(angles0, dtype=np.float64)
    cdef double[::1] th = th_arr
    cdef double[::1] grad = np.empty(n)
    cdef double[::1] v = np.empty(m)
    cdef double[::1] wr = np.empty(n)
    cdef double[::1] wi = np.empty(n)
    cdef double[::1] zr = np.empty(n)
    cdef double[::1] zi = np.empty(n)
    cdef double step = step0, tau = tau0, norm, x
    cdef long long t
    cdef Py_ssize_t k
    with nogil:
        for t in range(iters):
            if t != 0 and t % 100 == 0:
                tau = tau * tau_decay
                if tau < tau_min:
                    tau = tau_min
            _lse_grad(th, m, tau, v, wr, wi, zr, zi, grad)
            norm = 0.0
            for k in range(n):
                norm += grad[k] * grad[k]
            norm = sqrt(norm)
            if norm > 0.0:
                for k in range(n):
                    x = th[k] - (step / norm) * grad[k]
                    x = fmod(x, 1.0)
                    if x < 0.0:
                        x += 1.0
                    if x >= 1.0:
                        x = 0.0
                    th[k] = x
            step *= step_decay
    return th_arr

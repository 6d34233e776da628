"""Pure-numpy kernels: incremental power sweeps and the smoothed max objective.

powersum._kernels (the Cython extension) implements the same four functions;
powersum.backend exposes whichever is available.  Both backends keep the same
renormalization cadence so drift behaviour matches.
"""
import math

import numpy as np

RENORM_EVERY = 1024
BACKEND_NAME = "python"

_TWO_PI = 2.0 * math.pi


def sweep_max(weights, angles, m):
    """Max of |sum_k b_k z_k^nu| over nu = 1..m, with the smallest attaining nu.

    Powers advance by one complex rotation per step; every RENORM_EVERY steps
    all accumulated powers are rescaled to unit modulus.
    """
    z = np.exp(2j * np.pi * angles)
    w = z.copy()  # z^nu, starting at nu = 1
    best = -1.0
    arg = 0
    for nu in range(1, m + 1):
        s = np.dot(weights, w)
        a = s.real * s.real + s.imag * s.imag
        if a > best:
            best = a
            arg = nu
        w *= z
        if nu % RENORM_EVERY == 0:
            w /= np.abs(w)
    return math.sqrt(best), arg


def sweep_abs_sq(weights, angles, start, count):
    """|sum_k b_k z_k^nu|^2 for nu = start, ..., start+count-1 (incremental sweep)."""
    z = np.exp(2j * np.pi * angles)
    w = np.exp(2j * np.pi * np.mod(angles * float(start), 1.0))  # z^start
    out = np.empty(count)
    for i in range(count):
        s = np.dot(weights, w)
        out[i] = s.real * s.real + s.imag * s.imag
        w *= z
        if (i + 1) % RENORM_EVERY == 0:
            w /= np.abs(w)
    return out


_BLOCK = 8192


def lse_objective(angles, m, tau):
    """Smoothed maximum tau*log sum_nu exp(|S(nu)|^2 / tau) and its angle gradient.

    Computed with the usual max shift, so the value is exact up to rounding
    even when |S|^2 / tau overflows exp.  The gradient combines the softmax
    weights with d|S(nu)|^2/dtheta_k = -4*pi*nu*Im(conj(S(nu)) e(theta_k nu)).
    """
    n = angles.size
    nus = np.arange(1, m + 1, dtype=np.float64)
    svals = np.empty(m, dtype=np.complex128)
    for lo in range(0, m, _BLOCK):
        hi = min(lo + _BLOCK, m)
        block = np.exp(2j * np.pi * np.outer(nus[lo:hi], angles))
        svals[lo:hi] = block.sum(axis=1)
    v = svals.real**2 + svals.imag**2
    vmax = v.max()
    wexp = np.exp((v - vmax) / tau)
    z = wexp.sum()
    value = vmax + tau * math.log(z)
    p = wexp / z
    grad = np.zeros(n)
    pn = p * nus
    for lo in range(0, m, _BLOCK):
        hi = min(lo + _BLOCK, m)
        block = np.exp(2j * np.pi * np.outer(nus[lo:hi], angles))
        grad += pn[lo:hi] @ (svals[lo:hi].conj()[:, None] * block).imag
    grad *= -4.0 * np.pi
    return value, grad


def descent_run(angles0, m, iters, step0, step_decay, tau0, tau_min, tau_decay):
    """Normalized-gradient descent on the smoothed objective.

    The step length (in turns) decays geometrically each iteration; the
    temperature decays geometrically every 100 iterations down to tau_min.
    Returns the final iterate reduced to [0, 1).
    """
    th = np.array(angles0, dtype=np.float64)
    step = step0
    tau = tau0
    for t in range(iters):
        if t and t % 100 == 0:
            tau = max(tau * tau_decay, tau_min)
        _, g = lse_objective(th, m, tau)
        norm = math.sqrt(float(g @ g))
        if norm > 0.0:
            th -= (step / norm) * g
            np.mod(th, 1.0, out=th)
            th[th >= 1.0] = 0.0
        step *= step_decay
    return th

"""numba-compiled kernels; same contracts as ``_numpy``."""

import numpy as np
from numba import njit


@njit(cache=True)
def _row_form(re, im, c, s):
    n = re.shape[0]
    acc = 0.0
    for j in range(n):
        acc += re[j, j]
    off = 0.0
    for j in range(n):
        for k in range(j + 1, n):
            cd = c[j] * c[k] + s[j] * s[k]   # cos(theta_j - theta_k)
            sd = s[j] * c[k] - c[j] * s[k]   # sin(theta_j - theta_k)
            off += re[j, k] * cd - im[j, k] * sd
    return acc + 2.0 * off


@njit(cache=True)
def _qform_batch(re, im, phases):
    m, n = phases.shape
    out = np.empty(m)
    c = np.empty(n)
    s = np.empty(n)
    for r in range(m):
        for j in range(n):
            c[j] = np.cos(phases[r, j])
            s[j] = np.sin(phases[r, j])
        out[r] = _row_form(re, im, c, s)
    return out


@njit(cache=True)
def _grad(re, im, theta):
    n = theta.shape[0]
    c = np.cos(theta)
    s = np.sin(theta)
    g = np.zeros(n)
    for j in range(n):
        for k in range(n):
            if j == k:
                continue
            cd = c[j] * c[k] + s[j] * s[k]
            sd = s[j] * c[k] - c[j] * s[k]
            # d/dtheta_j of Re(rho_jk e^{i(theta_j-theta_k)}), doubled for the (k, j) twin
            g[j] += -2.0 * (re[j, k] * sd + im[j, k] * cd)
    return _row_form(re, im, c, s), g


@njit(cache=True)
def _linear_sweep(re, im, offsets, thetas):
    n = offsets.shape[0]
    m = thetas.shape[0]
    out = np.empty(m)
    c = np.empty(n)
    s = np.empty(n)
    for r in range(m):
        for j in range(n):
            ph = (j + 1) * thetas[r] + offsets[j]
            c[j] = np.cos(ph)
            s[j] = np.sin(ph)
        out[r] = _row_form(re, im, c, s)
    return out


@njit(cache=True)
def _torus_grid(re, im, per_axis):
    n = re.shape[0]
    dims = n - 1
    total = 1
    for _ in range(dims):
        total *= per_axis
    step = 2.0 * np.pi / per_axis
    ct = np.cos(step * np.arange(per_axis))
    st = np.sin(step * np.arange(per_axis))
    out = np.empty(total)
    c = np.empty(n)
    s = np.empty(n)
    c[0] = 1.0
    s[0] = 0.0
    for idx in range(total):
        rem = idx
        for a in range(dims - 1, -1, -1):
            d = rem % per_axis
            rem //= per_axis
            c[a + 1] = ct[d]
            s[a + 1] = st[d]
        out[idx] = _row_form(re, im, c, s)
    return out


def _split(rho):
    rho = np.ascontiguousarray(rho, dtype=np.complex128)
    return np.ascontiguousarray(rho.real), np.ascontiguousarray(rho.imag)


def quadratic_form_batch(rho, phases):
    re, im = _split(rho)
    return _qform_batch(re, im, np.ascontiguousarray(phases, dtype=np.float64))


def intensity_grad(rho, theta):
    re, im = _split(rho)
    val, g = _grad(re, im, np.ascontiguousarray(theta, dtype=np.float64))
    return float(val), g


def linear_sweep(rho, offsets, thetas):
    re, im = _split(rho)
    return _linear_sweep(re, im, np.ascontiguousarray(offsets, dtype=np.float64),
                         np.ascontiguousarray(thetas, dtype=np.float64))


def torus_grid_values(rho, per_axis):
    re, im = _split(rho)
    if re.shape[0] == 1:
        return np.array([re[0, 0]])
    return _torus_grid(re, im, int(per_axis))

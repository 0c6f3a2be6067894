"""Pure-numpy reference kernels.

Every function here has a numba twin in ``_numba`` with the same signature.
``rho`` is always the effective (decohered) complex matrix; intensities are
returned without the |alpha|^2 factor.
"""

import numpy as np

_CHUNK = 1 << 16


def quadratic_form_batch(rho, phases):
    """sum_jk rho_jk exp(i(theta_j - theta_k)) for each row of ``phases``."""
    u = np.exp(1j * np.asarray(phases, dtype=np.float64))
    return np.einsum("mj,jk,mk->m", u, rho, u.conj(), optimize=True).real


def intensity_grad(rho, theta):
    """Value and gradient of the quadratic form at one phase vector."""
    u = np.exp(1j * np.asarray(theta, dtype=np.float64))
    w = rho @ u.conj()            # w_j = sum_k rho_jk conj(u_k)
    val = np.vdot(u.conj(), w).real
    # d/dtheta_m: i u_m w_m + conj(...) -> -2 Im(u_m w_m)
    grad = -2.0 * np.imag(u * w)
    return val, grad


def linear_sweep(rho, offsets, thetas):
    """Quadratic form along theta_k = k*theta + offset_k for each theta."""
    n = rho.shape[0]
    k = np.arange(1, n + 1, dtype=np.float64)
    phases = np.outer(np.asarray(thetas, dtype=np.float64), k) + offsets
    return quadratic_form_batch(rho, phases)


def torus_grid_values(rho, per_axis):
    """Quadratic form on the uniform grid over paths 2..n with theta_1 = 0.

    Flat index order is C order over (theta_2, ..., theta_n).
    """
    n = rho.shape[0]
    dims = n - 1
    total = per_axis ** dims
    out = np.empty(total, dtype=np.float64)
    step = 2.0 * np.pi / per_axis
    strides = per_axis ** np.arange(dims - 1, -1, -1)
    for start in range(0, total, _CHUNK):
        idx = np.arange(start, min(start + _CHUNK, total))
        digits = (idx[:, None] // strides[None, :]) % per_axis
        phases = np.zeros((idx.size, n))
        phases[:, 1:] = digits * step
        out[start:start + idx.size] = quadratic_form_batch(rho, phases)
    return out

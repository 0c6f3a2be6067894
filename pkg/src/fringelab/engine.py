"""Detector-channel intensities and their extrema over the phase space.

The channel probability under equal overlap alpha with every path is

    I = |alpha|^2 * sum_jk rho'_jk exp(i(theta_j - theta_k)),

with rho' the reduced (decohered) state. Independent phase models are
extremized over the (n-1)-torus with theta_1 pinned to 0; linear models
over the single parameter theta.
"""

from __future__ import annotations

import csv
import io
import warnings
from dataclasses import dataclass
from typing import TextIO

import numpy as np
from scipy.optimize import brentq, minimize, minimize_scalar
from scipy.stats import qmc

from . import kernels
from .core import DensityMatrix, IndependentPhases, LinearPhases, Scenario
from .errors import DimensionError, UnsupportedOperationError

TWO_PI = 2.0 * np.pi
DEFAULT_SWEEP_GRID = 4096
ABSORB_TOL = 1e-10
TIE_TOL = 1e-12
ORACLE_MAX_POINTS = 30_000_000


@dataclass(frozen=True, eq=False)
class IntensityPattern:
    thetas: np.ndarray
    intensities: np.ndarray
    scenario: Scenario

    def to_csv(self, fh: TextIO | None = None) -> str:
        """Write ``theta,intensity`` rows with 12 significant digits; returns the text."""
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["theta", "intensity"])
        for t, v in zip(self.thetas, self.intensities):
            w.writerow([f"{t:.12g}", f"{v:.12g}"])
        text = buf.getvalue()
        if fh is not None:
            fh.write(text)
        return text


@dataclass(frozen=True, eq=False)
class ExtremaResult:
    i_max: float
    i_min: float
    argmax: np.ndarray
    argmin: np.ndarray
    i_inc: float
    absorbable: bool
    theta_max: float | None = None
    theta_min: float | None = None


def _wrap(theta):
    t = np.mod(theta, TWO_PI)
    return np.where(np.abs(t - TWO_PI) < 1e-9, 0.0, t)


def absorb_phases(rho_eff: np.ndarray, tol: float = ABSORB_TOL) -> np.ndarray | None:
    """Find phi with rho_eff_jk = |rho_eff_jk| exp(i(phi_j - phi_k)), or None.

    Entries with modulus below ``tol`` impose no constraint.
    """
    r = np.asarray(rho_eff)
    n = r.shape[0]
    phi = np.full(n, np.nan)
    mag = np.abs(r)
    for root in range(n):
        if not np.isnan(phi[root]):
            continue
        phi[root] = 0.0
        stack = [root]
        while stack:
            j = stack.pop()
            for k in range(n):
                if k == j or mag[j, k] <= tol or not np.isnan(phi[k]):
                    continue
                # rho_jk = |rho_jk| e^{i(phi_j - phi_k)}
                phi[k] = phi[j] - np.angle(r[j, k])
                stack.append(k)
    model = mag * np.exp(1j * (phi[:, None] - phi[None, :]))
    if np.max(np.abs(model - r)) > tol:
        return None
    return phi


def closed_form_max(rho_eff: np.ndarray, alpha_sq: float = 1.0) -> float:
    """|alpha|^2 (1 + sum_{j!=k} |rho_jk|): the all-cosines-plus-one intensity."""
    mag = np.abs(rho_eff)
    return float(alpha_sq * (1.0 + mag.sum() - np.trace(mag)))


def intensity(s: Scenario) -> float:
    """Channel probability for the scenario's current phase setting."""
    rho = s.effective_state().entries
    th = s.phases.path_phases()
    val = s.alpha_sq * kernels.quadratic_form_batch(rho, th[None, :])[0]
    return max(float(val), 0.0)


def sweep(s: Scenario, grid: int = 360) -> IntensityPattern:
    """Sample a linear phase model at ``grid`` uniform theta values on [0, 2pi)."""
    if not s.is_linear:
        raise UnsupportedOperationError("sweep needs a linear phase model; independent phases have no single sweep parameter")
    if grid < 2:
        raise ValueError("grid must be at least 2")
    thetas = TWO_PI * np.arange(grid) / grid
    vals = s.alpha_sq * kernels.linear_sweep(s.effective_state().entries, s.phases.offsets, thetas)
    return IntensityPattern(thetas, np.maximum(vals, 0.0), s)


# ---------------------------------------------------------------- torus search

def _start_points(dims: int, count: int) -> np.ndarray:
    # fixed scrambled Sobol set: deterministic across runs
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        pts = qmc.Sobol(dims, scramble=True, seed=20240611).random(count)
    return TWO_PI * pts


def _pick(values: np.ndarray, points: np.ndarray, sign: float) -> int:
    """Index of the best value; near-ties go to the lexicographically lowest angles."""
    best = np.min(sign * values)
    tied = np.flatnonzero(sign * values <= best + TIE_TOL)
    keys = [tuple(np.round(points[i], 9)) for i in tied]
    return int(tied[min(range(len(tied)), key=keys.__getitem__)])


def _descend(rho: np.ndarray, sign: float, n_starts: int | None):
    """Multi-start BFGS on sign*I over theta_2..theta_n; returns (value, full phases)."""
    n = rho.shape[0]
    dims = n - 1
    if n_starts is None:
        n_starts = max(32, 16 * dims)

    def f(x):
        th = np.concatenate(([0.0], x))
        v, g = kernels.intensity_grad(rho, th)
        return sign * v, sign * g[1:]

    ends = np.empty((n_starts, dims))
    vals = np.empty(n_starts)
    for i, x0 in enumerate(_start_points(dims, n_starts)):
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            res = minimize(f, x0, jac=True, method="BFGS",
                           options={"gtol": 1e-12, "xrtol": 1e-12, "maxiter": 2000})
        ends[i] = _wrap(res.x)
        vals[i] = sign * f(res.x)[0]
    best = _pick(vals, ends, sign)
    return float(vals[best]), np.concatenate(([0.0], ends[best]))


def _grid_local_extrema(values: np.ndarray, sign: float, limit: int) -> np.ndarray:
    """Flat indices of periodic grid points no worse than every axis neighbour."""
    v = sign * values
    mask = np.ones(values.shape, dtype=bool)
    for ax in range(values.ndim):
        mask &= v <= np.roll(v, 1, axis=ax)
        mask &= v <= np.roll(v, -1, axis=ax)
    flat = np.flatnonzero(mask.ravel())
    if flat.size == 0:
        flat = np.array([int(np.argmin(v))])
    order = np.argsort(v.ravel()[flat], kind="stable")
    return flat[order[:limit]]


def _refine_1d(f, df, t0: float, h: float) -> tuple[float, float]:
    """Bounded Brent on the value, then a bracketed root of the derivative.

    Values alone pin a smooth extremum only to ~sqrt(eps) in theta; the
    derivative crosses zero linearly, so brentq resolves it to ~1e-15.
    """
    a, b = t0 - h, t0 + h
    res = minimize_scalar(f, bounds=(a, b), method="bounded",
                          options={"xatol": 1e-12, "maxiter": 500})
    t, fv = (float(res.x), float(res.fun)) if res.fun <= f(t0) else (t0, float(f(t0)))
    ga, gb = df(a), df(b)
    if ga < 0.0 < gb:
        root = brentq(df, a, b, xtol=1e-15, rtol=4 * np.finfo(float).eps, maxiter=200)
        fr = float(f(root))
        if fr <= fv + 1e-15:
            t, fv = float(root), fr
    return t, fv


def _linear_extreme(s: Scenario, rho: np.ndarray, sign: float, grid: int):
    offsets = s.phases.offsets
    thetas = TWO_PI * np.arange(grid) / grid
    vals = kernels.linear_sweep(rho, offsets, thetas)
    h = TWO_PI / grid
    k = np.arange(1, s.n + 1, dtype=np.float64)

    def f(t):
        return sign * kernels.linear_sweep(rho, offsets, np.array([t]))[0]

    def df(t):
        # chain rule through theta_k = k*theta + offset_k
        _, g = kernels.intensity_grad(rho, k * t + offsets)
        return sign * float(g @ k)

    cands = _grid_local_extrema(vals, sign, limit=8)
    ts = np.empty(cands.size)
    fs = np.empty(cands.size)
    for i, c in enumerate(cands):
        t, fv = _refine_1d(f, df, thetas[c], h)
        ts[i] = _wrap(t)
        fs[i] = sign * fv
    best = _pick(fs, ts[:, None], sign)
    return float(fs[best]), float(ts[best])


def extremize(s: Scenario, grid: int = DEFAULT_SWEEP_GRID,
              n_starts: int | None = None) -> ExtremaResult:
    """Maximum and minimum channel intensity over the scenario's phase freedom."""
    rho = np.asarray(s.effective_state().entries)
    a2 = s.alpha_sq
    n = s.n
    closed = closed_form_max(rho, a2)
    if n == 1:
        z = np.zeros(1)
        return ExtremaResult(a2, a2, z, z.copy(), a2, True,
                             0.0 if s.is_linear else None, 0.0 if s.is_linear else None)

    if s.is_linear:
        if grid < DEFAULT_SWEEP_GRID:
            raise ValueError(f"linear extremization needs at least {DEFAULT_SWEEP_GRID} grid points")
        vmax, tmax = _linear_extreme(s, rho, -1.0, grid)
        vmin, tmin = _linear_extreme(s, rho, 1.0, grid)
        i_max = a2 * vmax
        i_min = max(a2 * vmin, 0.0)
        absorbable = abs(i_max - closed) <= 1e-9 * max(1.0, closed)
        return ExtremaResult(i_max, i_min, s.phases.path_phases(tmax), s.phases.path_phases(tmin),
                             a2, absorbable, tmax, tmin)

    phi = absorb_phases(rho)
    if phi is not None:
        i_max = closed
        argmax = _wrap(-(phi - phi[0]))
    else:
        vmax, argmax = _descend(rho, -1.0, n_starts)
        i_max = a2 * vmax
    vmin, argmin = _descend(rho, 1.0, n_starts)
    return ExtremaResult(float(i_max), max(a2 * vmin, 0.0), argmax, argmin, a2, phi is not None)


def extremize_oracle(s: Scenario, per_axis: int = 200, polish: bool = False) -> ExtremaResult:
    """Exhaustive grid extrema, used to bound ``extremize`` in tests.

    With ``polish`` the eight best grid-local extrema are refined by
    derivative-free Nelder-Mead, independent of the production search.
    """
    rho = np.asarray(s.effective_state().entries)
    a2 = s.alpha_sq
    n = s.n
    if per_axis < 2:
        raise ValueError("per_axis must be at least 2")
    closed = closed_form_max(rho, a2)

    if s.is_linear:
        offsets = s.phases.offsets
        thetas = TWO_PI * np.arange(per_axis) / per_axis
        vals = kernels.linear_sweep(rho, offsets, thetas)

        def at(t):
            return kernels.linear_sweep(rho, offsets, np.atleast_1d(t).astype(float))[0]

        grid_pts = thetas[:, None]
        shape = (per_axis,)
    else:
        if n > 5:
            raise DimensionError("oracle grid supports at most 5 paths")
        if per_axis ** (n - 1) > ORACLE_MAX_POINTS:
            raise DimensionError(f"oracle grid of {per_axis}^{n - 1} points is too large")
        vals = kernels.torus_grid_values(rho, per_axis)
        shape = (per_axis,) * (n - 1)

        def at(x):
            th = np.concatenate(([0.0], np.atleast_1d(x)))
            return kernels.quadratic_form_batch(rho, th[None, :])[0]

        axes = np.indices(shape).reshape(n - 1, -1).T if n > 1 else np.zeros((1, 0))
        grid_pts = axes * (TWO_PI / per_axis)

    out = {}
    for sign in (1.0, -1.0):
        idx = int(np.argmin(sign * vals))
        best_v, best_x = float(vals[idx]), grid_pts[idx]
        if polish and grid_pts.shape[1] > 0:
            cands = _grid_local_extrema(vals.reshape(shape), sign, limit=8)
            for c in cands:
                res = minimize(lambda x: sign * at(x), grid_pts[c], method="Nelder-Mead",
                               options={"xatol": 1e-10, "fatol": 1e-14, "maxiter": 4000})
                if sign * res.fun < sign * best_v - TIE_TOL:
                    best_v, best_x = float(sign * res.fun), _wrap(res.x)
        out[sign] = (best_v, np.atleast_1d(best_x))

    (vmin, xmin), (vmax, xmax) = out[1.0], out[-1.0]
    if s.is_linear:
        tmin, tmax = float(xmin[0]), float(xmax[0])
        argmin, argmax = s.phases.path_phases(tmin), s.phases.path_phases(tmax)
    else:
        tmin = tmax = None
        argmin = np.concatenate(([0.0], xmin))
        argmax = np.concatenate(([0.0], xmax))
    i_max = a2 * vmax
    absorbable = abs(i_max - closed) <= 1e-6 * max(1.0, closed)
    return ExtremaResult(i_max, max(a2 * vmin, 0.0), argmax, argmin, a2, absorbable, tmax, tmin)


def two_path_scenario(rho: DensityMatrix, alpha_sq: float = 1.0) -> Scenario:
    """Independent-phase scenario for a (blocked) state, used by the pairwise protocol."""
    return Scenario(rho, IndependentPhases.zeros(rho.n), None, alpha_sq)


def linear_scenario(rho: DensityMatrix, offsets=None, gram=None, alpha_sq: float = 1.0) -> Scenario:
    off = np.zeros(rho.n) if offsets is None else offsets
    return Scenario(rho, LinearPhases(off), gram, alpha_sq)

"""Path-basis states, ancilla overlaps, phase models and state transformations.

All objects are immutable; the numpy buffers they hold are flagged read-only.
Path indices exposed to users are 1-based.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence, Union

import numpy as np

from .errors import (
    DegenerateBlockError,
    DimensionError,
    NormalizationError,
    ValidationError,
)

HERMITIAN_TOL = 1e-12
TRACE_TOL = 1e-12
PSD_FLOOR = -1e-10
NORM_TOL = 1e-12
PURITY_TOL = 1e-9


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=np.complex128, copy=True)
    a.setflags(write=False)
    return a


def _check_square(a: np.ndarray, what: str) -> None:
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] < 1:
        raise DimensionError(f"{what} must be a non-empty square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValidationError(f"{what} has non-finite entries")


def _check_hermitian_psd(a: np.ndarray, what: str) -> None:
    err = np.max(np.abs(a - a.conj().T))
    if err > HERMITIAN_TOL:
        raise ValidationError(f"{what} is not Hermitian (max deviation {err:.3e})")
    # symmetrized copy only for the eigenvalue test; stored data is untouched
    lo = np.linalg.eigvalsh(0.5 * (a + a.conj().T)).min()
    if lo < PSD_FLOOR:
        raise ValidationError(f"{what} is not positive semidefinite (min eigenvalue {lo:.3e})")


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Quanton state in the path basis, entries rho_jk."""

    entries: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.entries)
        _check_square(a, "density matrix")
        a = _frozen(a)
        _check_hermitian_psd(a, "density matrix")
        tr = np.trace(a)
        if abs(tr - 1.0) > TRACE_TOL:
            raise ValidationError(f"density matrix trace is {tr.real:.15g}, expected 1")
        object.__setattr__(self, "entries", a)

    @property
    def n(self) -> int:
        return self.entries.shape[0]

    @property
    def populations(self) -> np.ndarray:
        return self.entries.diagonal().real.copy()

    def purity_defect(self) -> float:
        """Max-abs entry of rho^2 - rho."""
        r = self.entries
        return float(np.max(np.abs(r @ r - r)))

    def is_pure(self, tol: float = PURITY_TOL) -> bool:
        return self.purity_defect() < tol

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.entries, dtype=dtype)

    def __repr__(self) -> str:
        return f"DensityMatrix(n={self.n})"


@dataclass(frozen=True, eq=False)
class GramMatrix:
    """Ancilla overlaps Gamma_jk = <chi_j|chi_k>."""

    entries: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.entries)
        _check_square(a, "Gram matrix")
        a = _frozen(a)
        diag_err = np.max(np.abs(a.diagonal() - 1.0))
        if diag_err > HERMITIAN_TOL:
            raise ValidationError("Gram matrix must have unit diagonal (normalized ancilla states)")
        _check_hermitian_psd(a, "Gram matrix")
        if np.max(np.abs(a)) > 1.0 + 1e-10:
            raise ValidationError("Gram matrix overlaps must satisfy |Gamma_jk| <= 1")
        object.__setattr__(self, "entries", a)

    @property
    def n(self) -> int:
        return self.entries.shape[0]

    @classmethod
    def ones(cls, n: int) -> "GramMatrix":
        return cls(np.ones((n, n)))

    @classmethod
    def identity(cls, n: int) -> "GramMatrix":
        return cls(np.eye(n))

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.entries, dtype=dtype)

    def __repr__(self) -> str:
        return f"GramMatrix(n={self.n})"


def _angles(values, what: str) -> np.ndarray:
    a = np.array(values, dtype=np.float64, copy=True).reshape(-1)
    if not np.all(np.isfinite(a)):
        raise ValidationError(f"{what} must be finite")
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class IndependentPhases:
    """Each path phase theta_k set independently (radians)."""

    thetas: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "thetas", _angles(self.thetas, "path phases"))

    @property
    def n(self) -> int:
        return self.thetas.size

    def path_phases(self) -> np.ndarray:
        return self.thetas.copy()

    @classmethod
    def zeros(cls, n: int) -> "IndependentPhases":
        return cls(np.zeros(n))


@dataclass(frozen=True, eq=False)
class LinearPhases:
    """Constrained model theta_k = k * theta + offset_k with k = 1..n."""

    offsets: np.ndarray
    theta: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "offsets", _angles(self.offsets, "phase offsets"))
        if not np.isfinite(self.theta):
            raise ValidationError("theta must be finite")
        object.__setattr__(self, "theta", float(self.theta))

    @property
    def n(self) -> int:
        return self.offsets.size

    def path_phases(self, theta: float | None = None) -> np.ndarray:
        t = self.theta if theta is None else theta
        return np.arange(1, self.n + 1) * t + self.offsets

    def at(self, theta: float) -> "LinearPhases":
        return LinearPhases(self.offsets, theta)

    @classmethod
    def plain(cls, n: int, theta: float = 0.0) -> "LinearPhases":
        return cls(np.zeros(n), theta)


PhaseModel = Union[IndependentPhases, LinearPhases]


@dataclass(frozen=True, eq=False)
class Scenario:
    """A state, optional ancilla overlaps, a phase model and detector coupling |alpha|^2."""

    state: DensityMatrix
    phases: PhaseModel
    gram: GramMatrix | None = None
    alpha_sq: float = 1.0
    name: str = field(default="", compare=False)

    def __post_init__(self):
        n = self.state.n
        if self.phases.n != n:
            raise DimensionError(f"phase model has {self.phases.n} paths, state has {n}")
        if self.gram is not None and self.gram.n != n:
            raise DimensionError(f"Gram matrix has {self.gram.n} paths, state has {n}")
        if not (np.isfinite(self.alpha_sq) and self.alpha_sq > 0):
            raise ValidationError("alpha_sq must be positive")

    @property
    def n(self) -> int:
        return self.state.n

    @property
    def is_linear(self) -> bool:
        return isinstance(self.phases, LinearPhases)

    def effective_state(self) -> DensityMatrix:
        """Reduced quanton state after tracing out the ancilla."""
        if self.gram is None:
            return self.state
        return decohere(self.state, self.gram)

    def replace(self, **changes) -> "Scenario":
        kw = dict(state=self.state, phases=self.phases, gram=self.gram,
                  alpha_sq=self.alpha_sq, name=self.name)
        kw.update(changes)
        return Scenario(**kw)


def from_pure_amplitudes(amps: Sequence[complex]) -> DensityMatrix:
    """Rank-1 density matrix rho_jk = a_j * conj(a_k)."""
    a = np.asarray(amps, dtype=np.complex128).reshape(-1)
    norm = np.sum(np.abs(a) ** 2)
    if abs(norm - 1.0) > NORM_TOL:
        raise NormalizationError(f"amplitudes have squared norm {norm:.15g}, expected 1")
    return DensityMatrix(np.outer(a, a.conj()))


def _as_phase_vector(phases, n: int) -> np.ndarray:
    if isinstance(phases, (IndependentPhases, LinearPhases)):
        if phases.n != n:
            raise DimensionError(f"phase model has {phases.n} paths, state has {n}")
        return phases.path_phases()
    v = _angles(phases, "path phases")
    if v.size != n:
        raise DimensionError(f"got {v.size} phases for {n} paths")
    return v


def apply_phases(rho: DensityMatrix, phases) -> DensityMatrix:
    """Shift path j by theta_j: rho_jk -> rho_jk * exp(i(theta_j - theta_k)).

    ``phases`` is a phase model or a plain vector of per-path angles.
    """
    th = _as_phase_vector(phases, rho.n)
    u = np.exp(1j * th)
    return DensityMatrix(rho.entries * np.outer(u, u.conj()))


def decohere(rho: DensityMatrix, gram: GramMatrix) -> DensityMatrix:
    """Partial trace over the ancilla: rho_jk -> rho_jk * <chi_k|chi_j> = rho_jk * conj(Gamma_jk)."""
    if gram.n != rho.n:
        raise DimensionError(f"Gram matrix has {gram.n} paths, state has {rho.n}")
    return DensityMatrix(rho.entries * gram.entries.conj())


def block_paths(rho: DensityMatrix, i: int, j: int) -> DensityMatrix:
    """Open only paths i and j (1-based) and renormalize the surviving 2x2 block."""
    n = rho.n
    if i == j:
        raise ValidationError("path pair must be distinct")
    for p in (i, j):
        if not 1 <= p <= n:
            raise DimensionError(f"path index {p} outside 1..{n}")
    r = rho.entries
    a, b = r[i - 1, i - 1].real, r[j - 1, j - 1].real
    s = a + b
    if s <= 0.0:
        raise DegenerateBlockError(f"paths {i} and {j} carry no population")
    off = r[i - 1, j - 1] / s
    p = a / s
    # second population as 1 - p keeps the trace exactly one
    block = np.array([[p, off], [np.conj(off), 1.0 - p]], dtype=np.complex128)
    return DensityMatrix(block)


def gram_from_ancilla_states(states) -> GramMatrix:
    """Gram matrix of explicit ancilla vectors, one per row."""
    s = np.asarray(states, dtype=np.complex128)
    if s.ndim != 2:
        raise DimensionError("ancilla states must be an (n, m) array")
    norms = np.sum(np.abs(s) ** 2, axis=1)
    bad = np.flatnonzero(np.abs(norms - 1.0) > NORM_TOL)
    if bad.size:
        raise NormalizationError(
            f"ancilla state {bad[0] + 1} has squared norm {norms[bad[0]]:.15g}")
    g = s.conj() @ s.T
    # the diagonal is 1 up to rounding of the norm check; pin it
    np.fill_diagonal(g, 1.0)
    g = 0.5 * (g + g.conj().T)
    return GramMatrix(g)


def permute(rho: DensityMatrix, perm: Sequence[int]) -> DensityMatrix:
    """Relabel paths: new path k is old path perm[k] (0-based permutation)."""
    p = np.asarray(perm)
    return DensityMatrix(rho.entries[np.ix_(p, p)])

"""Wave-nature quantifiers: fringe contrast, l1 coherence, the coherence-based
visibility, pairwise blocking and pure-state path distinguishability."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .core import DensityMatrix, GramMatrix, Scenario, block_paths, decohere
from .engine import ExtremaResult, extremize, two_path_scenario
from .errors import (
    DegenerateBlockError,
    DimensionError,
    MeasureInapplicableError,
    UndefinedVisibilityError,
    UnsupportedOperationError,
    ValidationError,
)

RANGE_TOL = 1e-10


def _clip_unit(x: float) -> float:
    if x < -RANGE_TOL or x > 1.0 + RANGE_TOL:
        raise ValidationError(f"measure value {x!r} outside [0, 1]")
    return min(max(x, 0.0), 1.0)


def visibility_traditional(i_max: float, i_min: float) -> float:
    """Fringe contrast (I_max - I_min) / (I_max + I_min)."""
    if i_min < -RANGE_TOL or i_max < i_min - RANGE_TOL:
        raise ValidationError(f"need i_max >= i_min >= 0, got ({i_max}, {i_min})")
    total = i_max + i_min
    if total <= 0.0:
        raise UndefinedVisibilityError("contrast undefined for an all-dark pattern")
    return _clip_unit((i_max - i_min) / total)


def l1_coherence(rho: DensityMatrix) -> float:
    """Normalized l1 norm of the off-diagonal part, sum_{j!=k} |rho_jk| / (n - 1)."""
    n = rho.n
    if n < 2:
        raise DimensionError("coherence needs at least two paths")
    mag = np.abs(rho.entries)
    return float((mag.sum() - np.trace(mag)) / (n - 1))


def visibility_new(i_max: float, i_inc: float, n: int, absorbable: bool = True) -> float:
    """Primary-maximum excess over the incoherent baseline, (I_max - I_inc) / ((n - 1) I_inc).

    Only meaningful when all interference cosines can reach +1 together;
    pass ``absorbable=False`` (e.g. from ``ExtremaResult``) to get the refusal.
    """
    if not absorbable:
        raise MeasureInapplicableError(
            "path phases are constrained so the cosines cannot all reach +1; "
            "the primary maximum does not encode the coherence")
    if n < 2:
        raise DimensionError("needs at least two paths")
    if i_inc <= 0.0:
        raise ValidationError("incoherent intensity must be positive")
    return (i_max - i_inc) / ((n - 1) * i_inc)


def visibility_new_of(s: Scenario, ext: ExtremaResult | None = None) -> float:
    ext = extremize(s) if ext is None else ext
    return visibility_new(ext.i_max, ext.i_inc, s.n, ext.absorbable)


def two_path_visibility(rho: DensityMatrix, i: int, j: int) -> float:
    """Contrast with only paths i, j open: 2|rho_ij| / (rho_ii + rho_jj)."""
    if i == j:
        raise ValidationError("path pair must be distinct")
    n = rho.n
    for p in (i, j):
        if not 1 <= p <= n:
            raise DimensionError(f"path index {p} outside 1..{n}")
    r = rho.entries
    s = r[i - 1, i - 1].real + r[j - 1, j - 1].real
    if s <= 0.0:
        raise DegenerateBlockError(f"paths {i} and {j} carry no population")
    return _clip_unit(2.0 * abs(r[i - 1, j - 1]) / s)


def pairwise_coherence(rho: DensityMatrix) -> float:
    """Population-weighted sum of pair visibilities, divided by n - 1.

    Dark pairs contribute zero weight.
    """
    n = rho.n
    if n < 2:
        raise DimensionError("coherence needs at least two paths")
    pops = rho.populations
    total = 0.0
    for i, j in itertools.combinations(range(1, n + 1), 2):
        w = pops[i - 1] + pops[j - 1]
        if w > 0.0:
            total += w * two_path_visibility(rho, i, j)
    return total / (n - 1)


def pairwise_average(rho: DensityMatrix) -> float:
    """Unweighted mean pair visibility; equals the coherence for equal populations."""
    n = rho.n
    pairs = list(itertools.combinations(range(1, n + 1), 2))
    return sum(two_path_visibility(rho, i, j) for i, j in pairs) / len(pairs)


@dataclass(frozen=True)
class PairResult:
    i: int
    j: int
    weight: float
    visibility: float | None
    i_max: float | None = None
    i_min: float | None = None
    note: str = ""


@dataclass(frozen=True)
class PairwiseProtocol:
    pairs: list[PairResult]
    reconstructed: float
    unweighted_average: float | None
    direct: float

    @property
    def discrepancy(self) -> float:
        return abs(self.reconstructed - self.direct)


def simulate_pairwise(rho: DensityMatrix, alpha_sq: float = 1.0) -> PairwiseProtocol:
    """Block all but two paths at a time and read each contrast off the engine.

    Unlike ``pairwise_coherence`` this never uses the closed-form pair
    visibility: each blocked 2x2 state is extremized numerically.
    """
    n = rho.n
    if n < 2:
        raise DimensionError("pairwise protocol needs at least two paths")
    pops = rho.populations
    rows = []
    for i, j in itertools.combinations(range(1, n + 1), 2):
        w = float(pops[i - 1] + pops[j - 1])
        try:
            blocked = block_paths(rho, i, j)
        except DegenerateBlockError:
            rows.append(PairResult(i, j, 0.0, None, note="dark pair, weight 0"))
            continue
        ext = extremize(two_path_scenario(blocked, alpha_sq))
        v = visibility_traditional(ext.i_max, ext.i_min)
        rows.append(PairResult(i, j, w, v, ext.i_max, ext.i_min))
    recon = sum(r.weight * r.visibility for r in rows if r.visibility is not None) / (n - 1)
    lit = [r.visibility for r in rows if r.visibility is not None]
    avg = sum(lit) / len(rows) if len(lit) == len(rows) else None
    return PairwiseProtocol(rows, recon, avg, l1_coherence(rho))


def distinguishability_pure(rho: DensityMatrix, gram: GramMatrix) -> float:
    """Unambiguous-discrimination path distinguishability for a pure quanton state.

    D_Q = 1 - sum_{j!=k} sqrt(rho_jj rho_kk) |Gamma_jk| / (n - 1).
    """
    if not rho.is_pure():
        raise UnsupportedOperationError("D_Q is only defined here for pure quanton states")
    if gram.n != rho.n:
        raise DimensionError("Gram matrix and state dimensions differ")
    n = rho.n
    if n < 2:
        raise DimensionError("needs at least two paths")
    p = rho.populations
    w = np.sqrt(np.outer(p, p)) * np.abs(gram.entries)
    return _clip_unit(float(1.0 - (w.sum() - np.trace(w)) / (n - 1)))


@dataclass
class MeasureReport:
    v_traditional: float | None
    v_new: float | None
    coherence: float
    d_q: float | None
    absorbable_phases: bool
    reasons: dict[str, str] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "v_traditional": self.v_traditional,
            "v_new": self.v_new,
            "coherence": self.coherence,
            "d_q": self.d_q,
            "absorbable_phases": self.absorbable_phases,
            "reason": "; ".join(f"{k}: {v}" for k, v in sorted(self.reasons.items())) or None,
        }


def measure_report(s: Scenario, ext: ExtremaResult | None = None) -> MeasureReport:
    """All quantifiers for the reduced state the detector actually sees."""
    ext = extremize(s) if ext is None else ext
    reasons = {}
    try:
        v = visibility_traditional(ext.i_max, ext.i_min)
    except UndefinedVisibilityError as exc:
        v, reasons["v_traditional"] = None, str(exc)
    try:
        vn = visibility_new(ext.i_max, ext.i_inc, s.n, ext.absorbable)
    except MeasureInapplicableError as exc:
        vn, reasons["v_new"] = None, str(exc)
    coh = l1_coherence(s.effective_state())
    d_q = None
    if s.gram is None:
        reasons["d_q"] = "no ancilla Gram matrix supplied"
    else:
        try:
            d_q = distinguishability_pure(s.state, s.gram)
        except UnsupportedOperationError as exc:
            reasons["d_q"] = str(exc)
    return MeasureReport(v, vn, coh, d_q, ext.absorbable, reasons)


def decohered_coherence(rho: DensityMatrix, gram: GramMatrix) -> float:
    return l1_coherence(decohere(rho, gram))

"""n-path interference with controllable decoherence.

Fringe contrast, l1 coherence, the coherence-based visibility, pairwise
blocking and duality relations on a common density-matrix model.
"""

__version__ = "0.1.0"

from .core import (
    DensityMatrix,
    GramMatrix,
    IndependentPhases,
    LinearPhases,
    Scenario,
    apply_phases,
    block_paths,
    decohere,
    from_pure_amplitudes,
    gram_from_ancilla_states,
)
from .engine import ExtremaResult, IntensityPattern, extremize, extremize_oracle, intensity, sweep
from .measures import (
    MeasureReport,
    distinguishability_pure,
    l1_coherence,
    pairwise_coherence,
    two_path_visibility,
    visibility_new,
    visibility_traditional,
)

__all__ = [
    "DensityMatrix", "GramMatrix", "IndependentPhases", "LinearPhases", "Scenario",
    "apply_phases", "block_paths", "decohere", "from_pure_amplitudes", "gram_from_ancilla_states",
    "ExtremaResult", "IntensityPattern", "extremize", "extremize_oracle", "intensity", "sweep",
    "MeasureReport", "distinguishability_pure", "l1_coherence", "pairwise_coherence",
    "two_path_visibility", "visibility_new", "visibility_traditional",
]

"""Wave-particle duality inequalities, evaluated on supplied measure values.

Every relation has bound 1. Particle-side quantities whose formulas live
outside this package (which-path distinguishability D, predictability P) are
accepted as inputs.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass

from .errors import ValidationError

VALID_TOL = 1e-10
SATURATION_TOL = 1e-9

RELATIONS = ("englert", "gy", "threeslit", "dq_c", "d2_c2", "p2_c2")


@dataclass(frozen=True)
class DualityCheck:
    relation: str
    lhs: float
    bound: float
    slack: float
    holds: bool
    saturated: bool

    def to_dict(self) -> dict:
        d = asdict(self)
        d.pop("bound")
        return d


def _lhs(relation: str, wave: float, particle: float) -> float:
    if relation in ("englert", "gy", "d2_c2", "p2_c2"):
        return particle * particle + wave * wave
    if relation == "dq_c":
        return particle + wave
    if relation == "threeslit":
        return particle + 2.0 * wave / (3.0 - wave)
    raise ValidationError(f"unknown relation {relation!r}; expected one of {RELATIONS}")


def check(relation: str, wave: float, particle: float) -> DualityCheck:
    """Evaluate one relation; ``wave`` is V or C, ``particle`` is D, D_Q or P."""
    for name, x in (("wave", wave), ("particle", particle)):
        if not (-VALID_TOL <= x <= 1.0 + VALID_TOL):
            raise ValidationError(f"{name} value {x!r} outside [0, 1]")
    lhs = _lhs(relation, wave, particle)
    slack = 1.0 - lhs
    return DualityCheck(relation, lhs, 1.0, slack, slack >= -VALID_TOL, abs(slack) < SATURATION_TOL)

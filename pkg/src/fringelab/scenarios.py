"""Built-in scenarios and the JSON scenario document format.

Document layout::

    {
      "n": 4,
      "state": {"type": "pure", "amplitudes": [{"re": 0.5, "im": 0}, ...]}
             | {"type": "density", "entries": [[{"re": .., "im": ..}, ...], ...]},
      "gram": {"type": "matrix", "entries": [[...]]}
            | {"type": "ancilla_states", "dim": 2, "states": [[...], ...]},   # optional
      "phase_model": {"type": "independent", "thetas": [...]}                 # thetas optional
                   | {"type": "linear", "offsets": [0, 0, 0, "pi"], "theta": 0},
      "alpha_sq": 1.0                                                         # optional
    }

Angles are radians, given as numbers or as exact multiples of pi written
like "pi", "-pi/2" or "2*pi/3".
"""

from __future__ import annotations

import json
import re
from pathlib import Path
from typing import Any, Callable

import numpy as np

from .core import (
    DensityMatrix,
    GramMatrix,
    IndependentPhases,
    LinearPhases,
    Scenario,
    from_pure_amplitudes,
    gram_from_ancilla_states,
)
from .errors import FringelabError, ScenarioParseError

# ------------------------------------------------------------------ reference states


def three_path_state(lam: float) -> DensityMatrix:
    """Three-path state with off-diagonals -lam, +lam, -lam (all over 3)."""
    return DensityMatrix(np.array([[1.0, -lam, lam],
                                   [-lam, 1.0, -lam],
                                   [lam, -lam, 1.0]]) / 3.0)


def three_path_gram() -> GramMatrix:
    """Paths 1 and 2 share an ancilla state, path 3 is tagged orthogonally."""
    return gram_from_ancilla_states([[1, 0], [1, 0], [0, 1]])


def uniform_four_path() -> DensityMatrix:
    return from_pure_amplitudes([0.5, 0.5, 0.5, 0.5])


def path4_detector_gram() -> GramMatrix:
    """Detector that only tells whether the quanton took path 4."""
    return gram_from_ancilla_states([[1, 0], [1, 0], [1, 0], [0, 1]])


PI_FLIP_OFFSETS = (0.0, 0.0, 0.0, np.pi)


def bimonte3(lam: float = 0.5) -> Scenario:
    return Scenario(three_path_state(lam), IndependentPhases.zeros(3), name=f"bimonte3({lam:g})")


def mw4() -> Scenario:
    return Scenario(uniform_four_path(), LinearPhases.plain(4), path4_detector_gram(), name="mw4")


def piflip4() -> Scenario:
    return Scenario(uniform_four_path(), LinearPhases(PI_FLIP_OFFSETS), name="piflip4")


def ancilla4() -> Scenario:
    return Scenario(uniform_four_path(), LinearPhases(PI_FLIP_OFFSETS), path4_detector_gram(),
                    name="ancilla4")


def dark() -> Scenario:
    return Scenario(DensityMatrix(np.eye(4) / 4), LinearPhases.plain(4), name="dark")


def pure2() -> Scenario:
    a = 1 / np.sqrt(2)
    return Scenario(from_pure_amplitudes([a, a]), IndependentPhases.zeros(2), name="pure2")


BUILTINS: dict[str, Callable[..., Scenario]] = {
    "bimonte3": bimonte3,
    "mw4": mw4,
    "piflip4": piflip4,
    "ancilla4": ancilla4,
    "dark": dark,
    "pure2": pure2,
}


def builtin(name: str, lam: float | None = None) -> Scenario:
    if name not in BUILTINS:
        raise KeyError(name)
    if name == "bimonte3":
        return bimonte3(0.5 if lam is None else lam)
    return BUILTINS[name]()


# ------------------------------------------------------------------ parsing

_PI_RE = re.compile(
    r"^\s*(?P<sign>[+-])?\s*(?P<num>\d+(?:\.\d*)?)?\s*\*?\s*pi\s*(?:/\s*(?P<den>\d+(?:\.\d*)?))?\s*$")


def parse_angle(value: Any, where: str) -> float:
    if isinstance(value, bool):
        raise ScenarioParseError("angle must be a number or a multiple of 'pi'", where)
    if isinstance(value, (int, float)):
        return float(value)
    if isinstance(value, str):
        m = _PI_RE.match(value)
        if m:
            x = np.pi * float(m["num"] or 1.0) / float(m["den"] or 1.0)
            return -x if m["sign"] == "-" else x
        try:
            return float(value)
        except ValueError:
            pass
    raise ScenarioParseError(f"cannot read angle {value!r}", where)


def _complex(value: Any, where: str) -> complex:
    if isinstance(value, bool):
        raise ScenarioParseError("expected {re, im} or a number", where)
    if isinstance(value, (int, float)):
        return complex(value)
    if isinstance(value, dict):
        extra = set(value) - {"re", "im"}
        if extra:
            raise ScenarioParseError(f"unexpected keys {sorted(extra)}", where)
        try:
            return complex(float(value.get("re", 0.0)), float(value.get("im", 0.0)))
        except (TypeError, ValueError):
            raise ScenarioParseError("re/im must be numbers", where) from None
    raise ScenarioParseError("expected {re, im} or a number", where)


def _vector(items: Any, where: str) -> np.ndarray:
    if not isinstance(items, list):
        raise ScenarioParseError("expected a list", where)
    return np.array([_complex(v, f"{where}[{i}]") for i, v in enumerate(items)])


def _matrix(rows: Any, n: int, where: str) -> np.ndarray:
    if not isinstance(rows, list) or len(rows) != n:
        raise ScenarioParseError(f"expected {n} rows", where)
    out = []
    for i, row in enumerate(rows):
        v = _vector(row, f"{where}[{i}]")
        if v.size != n:
            raise ScenarioParseError(f"expected {n} entries", f"{where}[{i}]")
        out.append(v)
    return np.array(out)


def _require(doc: dict, key: str, where: str) -> Any:
    if not isinstance(doc, dict):
        raise ScenarioParseError("expected an object", where)
    if key not in doc:
        raise ScenarioParseError(f"missing key '{key}'", where or "<root>")
    return doc[key]


def _guard(where: str, build: Callable[[], Any]) -> Any:
    # domain validation errors get anchored to the key that produced them
    try:
        return build()
    except ScenarioParseError:
        raise
    except FringelabError as exc:
        raise ScenarioParseError(str(exc), where) from None


def scenario_from_dict(doc: Any, name: str = "") -> Scenario:
    if not isinstance(doc, dict):
        raise ScenarioParseError("scenario document must be an object", "<root>")
    n = _require(doc, "n", "")
    if isinstance(n, bool) or not isinstance(n, int) or n < 1:
        raise ScenarioParseError("n must be a positive integer", "n")

    st = _require(doc, "state", "")
    kind = _require(st, "type", "state")
    if kind == "pure":
        amps = _vector(_require(st, "amplitudes", "state"), "state.amplitudes")
        if amps.size != n:
            raise ScenarioParseError(f"expected {n} amplitudes, got {amps.size}", "state.amplitudes")
        state = _guard("state.amplitudes", lambda: from_pure_amplitudes(amps))
    elif kind == "density":
        ent = _matrix(_require(st, "entries", "state"), n, "state.entries")
        state = _guard("state.entries", lambda: DensityMatrix(ent))
    else:
        raise ScenarioParseError(f"unknown state type {kind!r} (pure | density)", "state.type")

    gram = None
    g = doc.get("gram")
    if g is not None:
        gkind = g.get("type", "matrix") if isinstance(g, dict) else None
        if gkind in ("matrix", "gram"):
            ent = _matrix(_require(g, "entries", "gram"), n, "gram.entries")
            gram = _guard("gram.entries", lambda: GramMatrix(ent))
        elif gkind == "ancilla_states":
            rows = _require(g, "states", "gram")
            if not isinstance(rows, list) or len(rows) != n:
                raise ScenarioParseError(f"expected {n} ancilla states", "gram.states")
            vecs = [_vector(r, f"gram.states[{i}]") for i, r in enumerate(rows)]
            dim = g.get("dim", vecs[0].size if vecs else 0)
            for i, v in enumerate(vecs):
                if v.size != dim:
                    raise ScenarioParseError(f"expected dimension {dim}", f"gram.states[{i}]")
            gram = _guard("gram.states", lambda: gram_from_ancilla_states(np.array(vecs)))
        else:
            raise ScenarioParseError("gram must be {type: matrix | ancilla_states}", "gram")

    pm = doc.get("phase_model", {"type": "independent"})
    pkind = _require(pm, "type", "phase_model")
    if pkind == "independent":
        raw = pm.get("thetas", [0.0] * n)
        if not isinstance(raw, list) or len(raw) != n:
            raise ScenarioParseError(f"expected {n} thetas", "phase_model.thetas")
        phases = IndependentPhases([parse_angle(v, f"phase_model.thetas[{i}]") for i, v in enumerate(raw)])
    elif pkind == "linear":
        raw = pm.get("offsets", [0.0] * n)
        if not isinstance(raw, list) or len(raw) != n:
            raise ScenarioParseError(f"expected {n} offsets", "phase_model.offsets")
        offs = [parse_angle(v, f"phase_model.offsets[{i}]") for i, v in enumerate(raw)]
        theta = parse_angle(pm.get("theta", 0.0), "phase_model.theta")
        phases = LinearPhases(offs, theta)
    else:
        raise ScenarioParseError(f"unknown phase model {pkind!r} (independent | linear)", "phase_model.type")

    alpha_sq = doc.get("alpha_sq", 1.0)
    if isinstance(alpha_sq, bool) or not isinstance(alpha_sq, (int, float)) or not alpha_sq > 0:
        raise ScenarioParseError("alpha_sq must be a positive number", "alpha_sq")
    return _guard("<root>", lambda: Scenario(state, phases, gram, float(alpha_sq), name=name))


def load_scenario(path: str | Path) -> Scenario:
    p = Path(path)
    try:
        text = p.read_text()
    except OSError as exc:
        raise ScenarioParseError(f"cannot read file: {exc.strerror}", str(p)) from None
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioParseError(exc.msg, f"{p}: line {exc.lineno} column {exc.colno}") from None
    return scenario_from_dict(doc, name=p.stem)


def resolve(spec: str, lam: float | None = None) -> Scenario:
    """A built-in scenario name or a path to a scenario document."""
    if spec in BUILTINS:
        return builtin(spec, lam)
    return load_scenario(spec)


def _cx(z: complex) -> dict:
    return {"re": float(z.real), "im": float(z.imag)}


def _angle_out(x: float) -> float | str:
    # exact pi offsets round-trip as text so regression values stay exact
    for mult, text in ((1, "pi"), (-1, "-pi")):
        if x == mult * np.pi:
            return text
    return float(x)


def scenario_to_dict(s: Scenario) -> dict:
    doc: dict[str, Any] = {
        "n": s.n,
        "state": {"type": "density", "entries": [[_cx(z) for z in row] for row in s.state.entries]},
    }
    if s.gram is not None:
        doc["gram"] = {"type": "matrix", "entries": [[_cx(z) for z in row] for row in s.gram.entries]}
    if isinstance(s.phases, LinearPhases):
        doc["phase_model"] = {"type": "linear", "offsets": [_angle_out(x) for x in s.phases.offsets],
                              "theta": s.phases.theta}
    else:
        doc["phase_model"] = {"type": "independent", "thetas": [float(x) for x in s.phases.thetas]}
    doc["alpha_sq"] = s.alpha_sq
    return doc

"""Regression of the reference numeric values against the engine.

Every check rebuilds its scenario from the reference matrices and compares
engine output with the exact rational at ``RATIONAL_TOL``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Mapping

import numpy as np

from . import scenarios as sc
from .core import decohere
from .duality import check
from .engine import extremize
from .measures import (
    distinguishability_pure,
    l1_coherence,
    simulate_pairwise,
    visibility_new_of,
    visibility_traditional,
)

RATIONAL_TOL = 1e-9
LAMBDAS = (0.1, 0.3, 0.5, 0.75, 0.9, 1.0)


@dataclass(frozen=True)
class CheckResult:
    key: str
    title: str
    expected: str
    observed: str
    passed: bool


def _close(a: float, b: float) -> bool:
    return abs(a - b) <= RATIONAL_TOL


def _contrast(s) -> tuple[float, object]:
    e = extremize(s)
    return visibility_traditional(e.i_max, e.i_min), e


def _f(x: float) -> str:
    return f"{x:.12g}"


def default_scenarios() -> dict[str, Callable]:
    return dict(sc.BUILTINS)


def run_suite(scenarios: Mapping[str, Callable] | None = None) -> list[CheckResult]:
    """Run all checks; ``scenarios`` may override built-in constructors (negative controls)."""
    b = default_scenarios()
    if scenarios:
        b.update(scenarios)
    out: list[CheckResult] = []

    def add(key, title, expected, observed, ok):
        out.append(CheckResult(key, title, expected, observed, bool(ok)))

    # three-path contrast and its decohered counterpart
    errs, errs_d, ordered, v_max = [], [], True, 0.0
    for lam in LAMBDAS:
        s = b["bimonte3"](lam)
        v, _ = _contrast(s)
        vd, _ = _contrast(s.replace(gram=sc.three_path_gram()))
        errs.append(abs(v - 3 * lam / (2 + lam)))
        errs_d.append(abs(vd - 2 * lam / 3))
        ordered &= vd < v
        v_max = max(v_max, v, vd)
    add("three_path_v", "three-path V = 3l/(2+l) over lambda grid", "max err <= 1e-9",
        f"max err {max(errs):.3g}", max(errs) <= RATIONAL_TOL)
    add("three_path_v_decohered", "decohered V' = 2l/3 and V' < V", "max err <= 1e-9, ordered",
        f"max err {max(errs_d):.3g}, ordered={ordered}", max(errs_d) <= RATIONAL_TOL and ordered)
    add("three_path_bounded", "no contrast above 1 (the 4l/3 formula would exceed it)", "<= 1",
        f"max V {_f(v_max)}; 4l/3 at l=1 is {_f(4 / 3)}", v_max <= 1 + 1e-10)

    mw = b["mw4"]()
    bare = mw.replace(gram=None)
    v0, e0 = _contrast(bare)
    add("uniform4", "four-path uniform: I_max=4, I_min=0, V=1", "4, 0, 1",
        f"{_f(e0.i_max)}, {_f(e0.i_min)}, {_f(v0)}",
        _close(e0.i_max, 4) and _close(e0.i_min, 0) and _close(v0, 1))

    v1, e1 = _contrast(mw)
    add("uniform4_detector", "path-4 detector: I'_max=5/2 at 0, I'_min=1/4 at 2pi/3, V'=9/11",
        "5/2 @ 0, 1/4 @ 2.0943951024, 9/11",
        f"{_f(e1.i_max)} @ {_f(e1.theta_max)}, {_f(e1.i_min)} @ {_f(e1.theta_min)}, {_f(v1)}",
        _close(e1.i_max, 2.5) and _close(e1.i_min, 0.25) and _close(v1, 9 / 11)
        and abs(e1.theta_min - 2 * np.pi / 3) < 1e-6 and min(e1.theta_max, 2 * np.pi - e1.theta_max) < 1e-6)

    pf = b["piflip4"]()
    vp, ep = _contrast(pf)
    add("piflip", "pi-flip: I_max=7/4 at pi/3, I_min=1/4 at 2pi/3, V=3/4",
        "7/4 @ 1.0471975512, 1/4 @ 2.0943951024, 3/4",
        f"{_f(ep.i_max)} @ {_f(ep.theta_max)}, {_f(ep.i_min)} @ {_f(ep.theta_min)}, {_f(vp)}",
        _close(ep.i_max, 1.75) and _close(ep.i_min, 0.25) and _close(vp, 0.75))

    va, _ = _contrast(b["ancilla4"]())
    add("paradox", "pi-flip with path-4 detector: V' = 9/11 > V", "9/11 > V",
        f"{_f(va)} vs {_f(vp)}", _close(va, 9 / 11) and va > vp)

    c = l1_coherence(pf.state)
    add("coherence_pure", "coherence of the uniform four-path state", "1", _f(c), _close(c, 1))
    cd = l1_coherence(decohere(pf.state, sc.path4_detector_gram()))
    add("coherence_decohered", "coherence after the path-4 detector", "1/2", _f(cd), _close(cd, 0.5))

    vn0, vn1 = visibility_new_of(bare), visibility_new_of(mw)
    cm0, cm1 = l1_coherence(bare.state), l1_coherence(mw.effective_state())
    add("new_visibility", "V_C equals C before and after detection", "1 = 1, 1/2 = 1/2",
        f"{_f(vn0)} = {_f(cm0)}, {_f(vn1)} = {_f(cm1)}",
        _close(vn0, cm0) and _close(vn1, cm1) and _close(vn0, 1) and _close(vn1, 0.5))

    pw = simulate_pairwise(mw.effective_state(), mw.alpha_sq)
    avg = pw.unweighted_average if pw.unweighted_average is not None else float("nan")
    add("pairwise", "average two-path visibility recovers C'", "1/2",
        f"avg {_f(avg)}, weighted {_f(pw.reconstructed)}",
        _close(avg, 0.5) and _close(pw.reconstructed, 0.5))

    dq = distinguishability_pure(mw.state, mw.gram)
    dc = check("dq_c", cm1, dq)
    add("dq_saturation", "D_Q + C' saturates for the pure detector scenario", "D_Q=1/2, sum 1",
        f"D_Q {_f(dq)}, sum {_f(dc.lhs)}", _close(dq, 0.5) and dc.saturated)
    return out


def format_table(results: list[CheckResult]) -> str:
    lines = []
    w = max(len(r.title) for r in results)
    for i, r in enumerate(results, 1):
        tag = "PASS" if r.passed else "FAIL"
        lines.append(f"{i:2d}  {tag}  {r.title:<{w}}  expected {r.expected}; observed {r.observed}")
    n_ok = sum(r.passed for r in results)
    lines.append(f"{n_ok}/{len(results)} checks pass")
    return "\n".join(lines) + "\n"

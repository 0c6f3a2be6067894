"""fringelab command line.

Exit codes: 0 ok, 1 scenario parse error, 2 unsupported operation,
3 regression failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .criteria import certify, coherence_functional, constant_functional, contrast_functional
from .duality import check
from .engine import extremize, sweep
from .errors import (
    FringelabError,
    ScenarioParseError,
    UnsupportedOperationError,
    ValidationError,
)
from .measures import measure_report, simulate_pairwise
from .scenarios import BUILTINS, resolve
from .suite import format_table, run_suite

EXIT_OK, EXIT_PARSE, EXIT_UNSUPPORTED, EXIT_REGRESSION = 0, 1, 2, 3
PAIRWISE_TOL = 1e-9


def _load(args):
    return resolve(args.scenario, args.lam)


def _emit_json(obj) -> None:
    json.dump(obj, sys.stdout, indent=2, sort_keys=False)
    sys.stdout.write("\n")


def cmd_pattern(args) -> int:
    s = _load(args)
    pattern = sweep(s, args.grid)
    if args.out:
        with open(args.out, "w", newline="") as fh:
            pattern.to_csv(fh)
    else:
        pattern.to_csv(sys.stdout)
    return EXIT_OK


def _extrema_dict(e) -> dict:
    return {
        "i_max": e.i_max,
        "i_min": e.i_min,
        "i_inc": e.i_inc,
        "theta_max": e.theta_max,
        "theta_min": e.theta_min,
        "argmax": [float(x) for x in e.argmax],
        "argmin": [float(x) for x in e.argmin],
    }


def analyze(s) -> dict:
    """Extrema, measures and applicable duality checks for one scenario."""
    ext = extremize(s)
    rep = measure_report(s, ext)
    doc = {
        "scenario": s.name or None,
        "n": s.n,
        "alpha_sq": s.alpha_sq,
        "extrema": _extrema_dict(ext),
        "measures": rep.to_dict(),
        "coherent_reference": None,
        "duality": [],
    }
    if s.gram is not None:
        ref = s.replace(gram=None)
        doc["coherent_reference"] = measure_report(ref).to_dict()
    if rep.d_q is not None:
        doc["duality"].append(check("dq_c", rep.coherence, rep.d_q).to_dict())
        if s.n == 3 and rep.v_traditional is not None:
            doc["duality"].append(check("threeslit", rep.v_traditional, rep.d_q).to_dict())
    return doc


def _fmt(x) -> str:
    return "n/a" if x is None else f"{x:.12g}"


def cmd_analyze(args) -> int:
    doc = analyze(_load(args))
    if args.json:
        _emit_json(doc)
        return EXIT_OK
    m, e = doc["measures"], doc["extrema"]
    print(f"scenario: {doc['scenario'] or args.scenario}  (n={doc['n']}, |alpha|^2={doc['alpha_sq']:g})")
    print(f"I_max = {_fmt(e['i_max'])}   I_min = {_fmt(e['i_min'])}   I_inc = {_fmt(e['i_inc'])}")
    if e["theta_max"] is not None:
        print(f"theta_max = {_fmt(e['theta_max'])}   theta_min = {_fmt(e['theta_min'])}")
    print(f"V   = {_fmt(m['v_traditional'])}")
    print(f"V_C = {_fmt(m['v_new'])}")
    print(f"C   = {_fmt(m['coherence'])}")
    print(f"D_Q = {_fmt(m['d_q'])}")
    print(f"phases absorbable: {m['absorbable_phases']}")
    if m["reason"]:
        print(f"notes: {m['reason']}")
    ref = doc["coherent_reference"]
    if ref is not None:
        print(f"without the ancilla: V = {_fmt(ref['v_traditional'])}, C = {_fmt(ref['coherence'])}")
    for d in doc["duality"]:
        flag = "saturated" if d["saturated"] else ("holds" if d["holds"] else "VIOLATED")
        print(f"duality {d['relation']}: lhs = {_fmt(d['lhs'])}, slack = {d['slack']:.3g} ({flag})")
    return EXIT_OK


def cmd_pairwise(args) -> int:
    s = _load(args)
    rho = s.effective_state()
    res = simulate_pairwise(rho, s.alpha_sq)
    ok = res.discrepancy <= PAIRWISE_TOL
    if args.json:
        _emit_json({
            "scenario": s.name or None,
            "pairs": [{"i": p.i, "j": p.j, "weight": p.weight, "visibility": p.visibility,
                       "i_max": p.i_max, "i_min": p.i_min, "note": p.note or None} for p in res.pairs],
            "reconstructed": res.reconstructed,
            "unweighted_average": res.unweighted_average,
            "direct": res.direct,
            "agree": ok,
        })
    else:
        print(f"{'i':>3} {'j':>3} {'weight':>14} {'V_ij':>14}")
        for p in res.pairs:
            v = "dark" if p.visibility is None else f"{p.visibility:.12g}"
            extra = f"  ({p.note})" if p.note else ""
            print(f"{p.i:>3} {p.j:>3} {p.weight:>14.12g} {v:>14}{extra}")
        print(f"weighted reconstruction C = {res.reconstructed:.12g}")
        if res.unweighted_average is not None:
            print(f"unweighted pair average   = {res.unweighted_average:.12g}")
        print(f"direct l1 coherence     C = {res.direct:.12g}")
        print(f"agreement within {PAIRWISE_TOL:g}: {'yes' if ok else 'NO'}")
    return EXIT_OK if ok else EXIT_REGRESSION


def cmd_paper_suite(args) -> int:
    results = run_suite()
    sys.stdout.write(format_table(results))
    failed = [r.key for r in results if not r.passed]
    if failed:
        sys.stdout.write("failed: " + ", ".join(failed) + "\n")
        return EXIT_REGRESSION
    return EXIT_OK


def cmd_certify(args) -> int:
    if args.measure == "coherence":
        m = coherence_functional()
    elif args.measure == "zero":
        m = constant_functional(0.0)
    else:
        offsets = None
        if args.measure == "contrast-piflip":
            offsets = [0.0] * (args.n - 1) + [np.pi]
        m = contrast_functional(offsets)
    starts = args.search_starts
    if starts is None:
        # contrast functionals run an optimizer per evaluation; skip the search by default
        starts = 3 if args.measure in ("coherence", "zero") else 0
    v = certify(m, args.n, args.samples, args.seed, search_starts=starts)
    if args.json:
        _emit_json(v.to_dict())
    else:
        print(f"{v.measure} on n={v.n} paths, {v.samples} samples, seed {v.seed}")
        for k, r in v.criteria.items():
            print(f"  {k:<34} {r.status:<13} {r.detail}")
    return EXIT_OK if v.passed else EXIT_REGRESSION


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="fringelab", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def scenario_args(sp):
        sp.add_argument("scenario", help=f"scenario JSON file or built-in: {', '.join(BUILTINS)}")
        sp.add_argument("--lambda", dest="lam", type=float, default=None,
                        help="coherence parameter for bimonte3 (default 0.5)")

    sp = sub.add_parser("pattern", help="emit theta,intensity CSV for a linear phase model")
    scenario_args(sp)
    sp.add_argument("--grid", type=int, default=360)
    sp.add_argument("--out", type=Path, default=None)
    sp.set_defaults(func=cmd_pattern)

    sp = sub.add_parser("analyze", help="visibilities, coherence, D_Q and duality checks")
    scenario_args(sp)
    sp.add_argument("--json", action="store_true")
    sp.set_defaults(func=cmd_analyze)

    sp = sub.add_parser("pairwise", help="simulate the two-open-paths protocol")
    scenario_args(sp)
    sp.add_argument("--json", action="store_true")
    sp.set_defaults(func=cmd_pairwise)

    sp = sub.add_parser("paper-suite", help="regression of the reference numeric values")
    sp.set_defaults(func=cmd_paper_suite)

    sp = sub.add_parser("certify", help="run the visibility-criteria harness on a measure")
    sp.add_argument("measure", choices=["coherence", "zero", "contrast", "contrast-piflip"])
    sp.add_argument("--n", type=int, default=4)
    sp.add_argument("--samples", type=int, default=200)
    sp.add_argument("--seed", type=int, default=7)
    sp.add_argument("--search-starts", type=int, default=None,
                    help="multi-start searches per direction for criterion 5")
    sp.add_argument("--json", action="store_true")
    sp.set_defaults(func=cmd_certify)
    return p


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        # argparse uses 2 for usage errors; 2 is reserved for unsupported operations here
        return EXIT_PARSE if exc.code == 2 else int(exc.code or 0)
    try:
        return args.func(args)
    except ScenarioParseError as exc:
        print(f"fringelab: parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except UnsupportedOperationError as exc:
        print(f"fringelab: unsupported: {exc}", file=sys.stderr)
        return EXIT_UNSUPPORTED
    except (ValidationError, FringelabError, ValueError) as exc:
        print(f"fringelab: error: {exc}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())

"""Command-line surface.

Subcommands::

    tau -p P -d D [--oracle]            partition level function
    bound --delta D --sep S -p P        rationality/separability bound report
    construct --family A|B -i I [-j J] [-l L] --emit PATH
    construct --delta D --emit PATH     tower attaining the bound at delta D
    analyze PATH [--format json|text]   verify and report a tower document
    sharpness --max-d N [--jobs J]      bound-attainment sweep
    pencil [--checks ...] [--max-deg D] [--field-exp E]

Exit codes: 0 all checks pass, 1 a check failed, 2 usage or format error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Optional

from . import documents, pencil as pc
from .combinatorics import separability_bound, tau_bruteforce, tau_closed
from .constructions import (
    FamilyAParams,
    FamilyBParams,
    build,
    decompose_target,
    sharpness_sweep,
)
from .errors import FrobdescError, SchemaError
from .expr import ParseError
from .fields import Fq
from .tower import analyze, genus_drop_check

USAGE_ERROR = 2
CHECK_FAILED = 1


def _build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(prog="frobdesc", description=__doc__)
    sub = top.add_subparsers(dest="command", required=True)

    p_tau = sub.add_parser("tau", help="partition level function")
    p_tau.add_argument("-p", type=int, required=True)
    p_tau.add_argument("-d", type=int, required=True)
    p_tau.add_argument("--oracle", action="store_true",
                       help="cross-check against the brute-force enumeration")

    p_bound = sub.add_parser("bound", help="separability/rationality bound")
    p_bound.add_argument("--delta", type=int, required=True)
    p_bound.add_argument("--sep", type=int, default=1)
    p_bound.add_argument("-p", type=int, required=True)

    p_con = sub.add_parser("construct", help="emit a tower document")
    p_con.add_argument("--family", choices=["A", "B"])
    p_con.add_argument("-i", type=int)
    p_con.add_argument("-j", type=int, default=0)
    p_con.add_argument("-l", type=int, default=0)
    p_con.add_argument("--delta", type=int)
    p_con.add_argument("--emit", required=True, metavar="PATH")

    p_an = sub.add_parser("analyze", help="analyze a tower document")
    p_an.add_argument("path")
    p_an.add_argument("--format", choices=["json", "text"], default="text")

    p_sh = sub.add_parser("sharpness", help="bound-attainment sweep")
    p_sh.add_argument("--max-d", type=int, required=True)
    p_sh.add_argument("--jobs", type=int,
                      default=int(os.environ.get("FROBDESC_JOBS", "1")))

    p_pc = sub.add_parser("pencil", help="quartic pencil checks")
    p_pc.add_argument(
        "--checks",
        default="invariants,intersection,diophantine,maps,singular",
        help="comma-separated subset of: invariants,intersection,diophantine,maps,singular",
    )
    p_pc.add_argument("--max-deg", type=int, default=4,
                      help="degree bound for the diophantine search")
    p_pc.add_argument("--field-exp", type=int, default=4,
                      help="exponent e of the large field F_{2^e} for sweeps")
    return top


def _cmd_tau(args) -> int:
    value = tau_closed(args.d, args.p)
    if args.oracle:
        oracle = tau_bruteforce(args.d, args.p)
        if oracle != value:
            print(f"MISMATCH: closed form {value}, enumeration {oracle}")
            return CHECK_FAILED
    print(value)
    return 0


def _cmd_bound(args) -> int:
    report = separability_bound(args.delta, args.sep, args.p)
    print(f"p {report.p}")
    print(f"delta {report.delta}")
    print(f"sep {report.sep}")
    print(f"d_prime {report.d_prime}")
    print(f"bound_level {report.bound_level}")
    run = report.consecutive_run
    print(f"consecutive_run {'none' if run is None else run}")
    print(f"improved_case {report.improved_case}")
    return 0


def _cmd_construct(args) -> int:
    if (args.family is None) == (args.delta is None):
        print("construct: give exactly one of --family or --delta", file=sys.stderr)
        return USAGE_ERROR
    if args.family is not None:
        if args.i is None:
            print("construct: --family needs -i", file=sys.stderr)
            return USAGE_ERROR
        params = (
            FamilyAParams(args.i, args.j, args.l)
            if args.family == "A"
            else FamilyBParams(args.i)
        )
    else:
        params = decompose_target(args.delta)
    spec = build(params)
    if args.emit == "-":
        print(documents.dumps(documents.tower_to_document(spec)), end="")
    else:
        documents.save_tower(spec, args.emit)
        print(f"wrote {args.emit}")
    return 0


def _cmd_analyze(args) -> int:
    spec = documents.load_tower(args.path)
    trace = analyze(spec)
    if args.format == "json":
        print(documents.dumps(documents.trace_to_document(trace, spec)), end="")
    else:
        print(documents.render_trace_text(trace))
    return CHECK_FAILED if trace.certificates.unresolved else 0


def _cmd_sharpness(args) -> int:
    report = sharpness_sweep(args.max_d, jobs=max(1, args.jobs))
    print(report.render())
    return 0 if report.all_ok else CHECK_FAILED


def _pencil_invariants(field_big: Fq) -> list[tuple[str, bool, str]]:
    F2 = Fq(2)
    rows = []
    rows.append(("surface inverse-substitution identity",
                 pc.PencilData(F2).inverse_substitution_vanishes(), "symbolic"))
    rows.append(("strangeness (Y-partial vanishes)",
                 pc.strangeness_check(F2) and pc.strangeness_check(field_big),
                 "symbolic, any c"))
    rows.append(("char-0 negative control",
                 pc.strangeness_char0_control(), "integer coefficients"))
    rows.append(("bad fibre is (Y^2 + XZ)^2",
                 pc.bad_fibre_square_check(F2), "symbolic"))
    genus = pc.arithmetic_genus_plane_quartic()
    rows.append(("fiber arithmetic genus = 3", genus == 3, "genus-degree formula"))
    spec = documents.load_bundled_tower("pencil")
    trace = analyze(spec)
    rows.append(("generic fibre singularity trace delta = (3,1,0,0)",
                 trace.deltas == (3, 1, 0, 0), "tower engine"))
    rows.append(("genus hint matches genus-degree value",
                 spec.genus_hint == genus, "cross-module"))
    rows.append(("genus drop 3 -> 0 accounted for",
                 bool(genus_drop_check(trace, genus, 0)), "unique singular prime"))
    return rows


def _pencil_intersection() -> list[tuple[str, bool, str]]:
    graph = pc.load_dual_graph()
    si = pc.solve_self_intersections(graph)
    report = pc.model_classification_checks(graph)
    rows = [
        ("strict transform E has E.E = -4", si["E"] == -4, "zero-pairing solve"),
        ("fifteen (-2)-components",
         sum(1 for v in si.values() if v == -2) == 15, "zero-pairing solve"),
        ("no (-1)-component: relatively minimal", report.minimal, "contractibility"),
        ("(-2)-chain is a 15-vertex path", report.a15_path, "graph shape"),
        ("section pairing = 1", report.section_pairing == 1, "transverse section"),
        ("fiber self-pairing = 0", report.quadratic_form_zero, "quadratic form"),
    ]
    return rows


def _pencil_diophantine(max_deg: int) -> list[tuple[str, bool, str]]:
    rows = []
    for q in (2, 4):
        inst = pc.DiophantineInstance(max_deg, q)
        sols = pc.diophantine_search(inst)
        rows.append((
            f"no further rational points over F_{q}",
            sols == [],
            f"verified up to degree {max_deg} in F_{q}[t]; "
            "a bounded search, not a proof at this scale",
        ))
    return rows


def _pencil_maps(field_big: Fq) -> list[tuple[str, bool, str]]:
    F4 = Fq(4)
    rows = []
    ok = pc.homogeneity_sweep(F4, F4.zero) and pc.homogeneity_sweep(F4, F4.one)
    gen = field_big.elem(2) if field_big.q > 2 else field_big.one
    ok_big = pc.homogeneity_sweep(field_big, gen)
    rows.append(("homogeneity transform on all non-singular points",
                 ok and ok_big, f"exhaustive over F_4 and F_{field_big.q}"))
    rows.append(("inverse map symbolic + sampled vanishing",
                 pc.inverse_map_identity_check(Fq(2)), "50 seeded samples in F_16"))
    rows.append(("non-smooth locus X = 0, T0 Z^4 + T1 Y^4 = 0",
                 pc.nonsmooth_locus_check(Fq(2)) and pc.nonsmooth_locus_check(field_big),
                 "all fiber parameters + bad fibre point"))
    return rows


def _pencil_singular(field_big: Fq) -> list[tuple[str, bool, str]]:
    rows = []
    for F in (Fq(4), field_big):
        ok = True
        for c in F.elements():
            rep = pc.singular_point_report(F, c)
            ok = ok and rep.unique_over_field
            ok = ok and rep.multiplicity == pc.expected_multiplicity(F, c)
        rows.append((
            f"unique singular point (0:1:c^(1/4)) over F_{F.q}",
            ok,
            f"exhaustive over all c and all points of P^2(F_{F.q})",
        ))
    return rows


UNTESTED_NOTES = (
    "tangent line at the singular point meets the quartic only there: "
    "a closure-point statement, recorded as an untested observation",
    "bitangent dichotomy for c != 0: closure-point statement, untested",
    "H.H = -1 comes from the planar contraction sequence; stored as a "
    "documented datum, not derivable from the fiber graph alone",
)


def _cmd_pencil(args) -> int:
    wanted = [c.strip() for c in args.checks.split(",") if c.strip()]
    known = {"invariants", "intersection", "diophantine", "maps", "singular"}
    bad = set(wanted) - known
    if bad:
        print(f"pencil: unknown checks {sorted(bad)}", file=sys.stderr)
        return USAGE_ERROR
    field_big = Fq(1 << args.field_exp)
    rows: list[tuple[str, bool, str]] = []
    if "invariants" in wanted:
        rows += _pencil_invariants(field_big)
    if "intersection" in wanted:
        rows += _pencil_intersection()
    if "diophantine" in wanted:
        rows += _pencil_diophantine(args.max_deg)
    if "maps" in wanted:
        rows += _pencil_maps(field_big)
    if "singular" in wanted:
        rows += _pencil_singular(field_big)
    width = max(len(name) for name, _, _ in rows)
    for name, ok, note in rows:
        print(f"{'ok ' if ok else 'FAIL'} {name:<{width}}  [{note}]")
    print("notes (not machine-checked):")
    for note in UNTESTED_NOTES:
        print(f"  - {note}")
    return 0 if all(ok for _, ok, _ in rows) else CHECK_FAILED


def main(argv: Optional[list[str]] = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as err:
        return err.code if isinstance(err.code, int) else USAGE_ERROR
    handlers = {
        "tau": _cmd_tau,
        "bound": _cmd_bound,
        "construct": _cmd_construct,
        "analyze": _cmd_analyze,
        "sharpness": _cmd_sharpness,
        "pencil": _cmd_pencil,
    }
    try:
        return handlers[args.command](args)
    except (SchemaError, ParseError, json.JSONDecodeError) as err:
        print(f"format error: {err}", file=sys.stderr)
        return USAGE_ERROR
    except FileNotFoundError as err:
        print(f"format error: {err}", file=sys.stderr)
        return USAGE_ERROR
    except ValueError as err:
        print(f"usage error: {err}", file=sys.stderr)
        return USAGE_ERROR
    except FrobdescError as err:
        print(f"check failed: {err}", file=sys.stderr)
        return CHECK_FAILED


def console_main() -> None:
    sys.exit(main())


if __name__ == "__main__":
    console_main()

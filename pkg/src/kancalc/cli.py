"""Command-line front end.

Every subcommand builds a Report; the report is printed as text or, with
--json, as a schema-versioned JSON object, and the process exits with the
report's status: 0 true/success, 1 property false, 2 invalid input,
3 enumeration budget exceeded.
"""
from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path
from typing import Any, Optional, Sequence

from kancalc import logger
from kancalc.components.core import Cone, FinCat, FinFunctor, colimit, limit, product
from kancalc.components.filtered import SHAPES, check_con_le, filt_commute_check, filter_report
from kancalc.components.formats import SUFFIXES, Workspace, category_dot, dumps, load, poset_dot, to_dot
from kancalc.components.grothendieck import CatDiagram, colax_limit, lax_limit, twisted_arrows
from kancalc.components.harness import run_suite
from kancalc.components.ind import (
    check_presheaf_of_fully_faithful,
    ind_hom,
    ind_presentation,
    is_ind_object,
    karoubi_identification,
    pullback_failure_demo,
)
from kancalc.components.nerve import check_simplicial_identities, check_v_swap, nerve, v_replacement
from kancalc.components.poset import Poset, as_category
from kancalc.components.presheaf import SetFunctor, check_cofinal, check_final, colim_set, lim_set
from kancalc.config.configuration import ConfigurationManager
from kancalc.constants import EXIT_BUDGET, EXIT_FALSE, EXIT_INVALID, EXIT_OK, HARNESS_SUITES
from kancalc.entity.artifact_entity import Report
from kancalc.exception.exception import BoundExceeded, CustomException, ValidationError
from kancalc.utils.common import canonical_key


def plain(x: Any) -> Any:
    """A JSON-ready, deterministically ordered rendering of a result value."""
    if x is None or isinstance(x, (bool, int, float, str)):
        return x
    if isinstance(x, Cone):
        return x.name()
    if isinstance(x, FinFunctor):
        return {
            "name": x.name,
            "objects": {a: x.ob(a) for a in x.dom.objects},
            "morphisms": {f: x.mor(f) for f in x.dom.non_identities()},
        }
    if isinstance(x, (FinCat, Poset, SetFunctor, CatDiagram)):
        return x.name
    if isinstance(x, dict):
        return {str(k): plain(v) for k, v in sorted(x.items(), key=lambda kv: canonical_key(str(kv[0])))}
    if isinstance(x, (set, frozenset)):
        return [plain(v) for v in sorted(x, key=lambda v: canonical_key(str(v)))]
    if isinstance(x, (list, tuple)):
        return [plain(v) for v in x]
    return str(x)


def _report(kind: str, ok: bool, witness: Any = None, data: dict = None) -> Report:
    return Report(kind, ok, plain(witness), plain(data or {}), EXIT_OK if ok else EXIT_FALSE, tuple(sys.argv[1:]))


def render(report: Report, as_json: bool) -> str:
    if as_json:
        return json.dumps(report.to_dict(), sort_keys=True, indent=2) + "\n"
    lines = [f"{report.kind}: {'true' if report.ok else 'false'}"]
    if report.witness is not None:
        lines.append(f"witness: {json.dumps(report.witness, sort_keys=True)}")
    for key in sorted(report.data, key=canonical_key):
        lines.append(f"{key}: {json.dumps(report.data[key], sort_keys=True)}")
    return "\n".join(lines) + "\n"


class _Loader:
    """Reads each input file once into a shared workspace."""

    def __init__(self, args):
        self.ws = Workspace()
        self.loaded = {}
        for path in getattr(args, "context", None) or []:
            self.read(path)

    def read(self, path: str) -> list:
        key = str(Path(path).resolve())
        if key not in self.loaded:
            self.loaded[key] = load(path, self.ws)
        return self.loaded[key]

    def entity(self, path: str, kind: str = None):
        kind = kind or SUFFIXES.get(Path(path).suffix)
        matching = [e for k, _, e in self.read(path) if kind is None or k == kind]
        if not matching:
            raise ValidationError(f"{path} contains no {kind} section")
        return matching[-1]

    def category(self, path: str) -> FinCat:
        entity = self.entity(path)
        if isinstance(entity, Poset):
            return as_category(entity)
        if not isinstance(entity, FinCat):
            raise ValidationError(f"{path} does not define a category or poset")
        return entity


# ---------------------------------------------------------------- subcommands

def cmd_load(args, budget):
    files = _Loader(args)
    loaded = []
    for path in args.paths:
        loaded += files.read(path)
    if args.dot:
        return None, to_dot(loaded[-1][2])
    if not args.json:
        return None, "\n".join(dumps(e) for _, _, e in loaded)
    counts = {}
    for kind, _, _ in loaded:
        counts[kind] = counts.get(kind, 0) + 1
    names = [f"{kind} {name}" for kind, name, _ in loaded]
    return _report("load", True, None, {"entities": names, "counts": counts}), None


def cmd_colim(args, budget):
    entity = _Loader(args).entity(args.diagram)
    if isinstance(entity, SetFunctor):
        result = lim_set(entity) if args.limit else colim_set(entity)
        kind = "lim" if args.limit else "colim"
        return _report(kind, True, None, {"elements": list(result.elements), "size": len(result.elements)}), None
    if not isinstance(entity, FinFunctor):
        raise ValidationError(f"{args.diagram} defines neither a functor nor a Set-valued functor")
    cone = limit(entity) if args.limit else colimit(entity)
    kind = "limit" if args.limit else "colimit"
    if cone is None:
        return _report(kind, False, None, {"diagram": entity.name}), None
    return _report(kind, True, cone.vertex, {"cone": cone.name(), "legs": dict(cone.legs)}), None


def cmd_check(args, budget):
    files = _Loader(args)
    if args.property == "filtered":
        C = files.category(args.target)
        rep = filter_report(C, args.level, budget.shape_budget, args.shapes)
        data = {"karoubi_terminal": rep.karoubi_terminal, "level": rep.level_checked, "level_ok": rep.level_ok,
                "consistent": rep.consistent}
        return _report("filtered", rep.exact_filtered, rep.witness, data), None
    if args.property == "cofinal":
        F = files.entity(args.functor, "functor")
        ok, bad = check_final(F) if args.final else check_cofinal(F)
        return _report("final" if args.final else "cofinal", ok, bad, {"functor": F.name}), None
    if args.property == "con-le":
        I = files.category(args.index)
        X = files.entity(args.setfun, "setfun")
        r = check_con_le(I, X)
        data = {k: r[k] for k in ("elements_filtered", "colim_is_point", "colim")}
        return _report("con-le", r["ok"], None, data), None
    # commute: X lives on I x J, registered under the name IxJ before X is read
    I = files.category(args.index)
    J = files.category(args.shape)
    name = f"{I.name}x{J.name}"
    if name not in files.ws.categories:
        files.ws.categories[name] = product(I, J).category
    X = files.entity(args.setfun, "setfun")
    r = filt_commute_check(I, J, X)
    data = {"filtered": r["filtered"], "left": r["left"], "right": r["right"]}
    return _report("commute", r["bijective"], r["witness"], data), None


def cmd_nerve(args, budget):
    C = _Loader(args).category(args.target)
    dim = args.dim if args.dim is not None else ConfigurationManager().get_nerve_config().truncation
    N = nerve(C, dim)
    data = {"counts": N.counts(), "truncation": dim}
    if args.list:
        data["chains"] = {str(k): list(N.chains[k]) for k in range(dim + 1)}
    return _report("nerve", check_simplicial_identities(N), None, data), None


def cmd_vc(args, budget):
    C = _Loader(args).category(args.target)
    vrep = v_replacement(C)
    if args.dot:
        return None, poset_dot(vrep.vposet)
    collapse = sorted(((a, b) for a, b in vrep.zero_part.leq if a != b),
                      key=lambda p: (canonical_key(p[0]), canonical_key(p[1])))
    data = {
        "points": len(vrep.vposet.elements),
        "relations": len(vrep.vposet.leq) - len(vrep.vposet.elements),
        "q": dict(vrep.q.obj_map),
        "collapse": [f"{a}<={b}" for a, b in collapse],
    }
    return _report("vc", check_v_swap(C), None, data), None


def cmd_lax_limit(args, budget):
    D = _Loader(args).entity(args.diagram, "diagram")
    S = (colax_limit(D) if args.colax else lax_limit(D)).sections
    if args.dot:
        return None, category_dot(S)
    data = {"objects": len(S.objects), "morphisms": len(S.morphisms),
            "sections": {o: dict(S.payload[o].obj_map) for o in S.objects}}
    return _report("colax-limit" if args.colax else "lax-limit", True, None, data), None


def cmd_tw(args, budget):
    I = _Loader(args).category(args.target)
    tw = twisted_arrows(I)
    if args.dot:
        return None, category_dot(tw.category)
    data = {"objects": len(tw.category.objects), "morphisms": len(tw.category.morphisms)}
    return _report("tw", tw.elements_iso, None, data), None


def cmd_ind(args, budget):
    files = _Loader(args)
    if args.action == "hom":
        A = ind_presentation(files.entity(args.A, "functor"))
        B = ind_presentation(files.entity(args.B, "functor"))
        hom = ind_hom(A, B)
        r = check_presheaf_of_fully_faithful(A, B)
        data = {"size": len(hom.elements), "elements": list(hom.elements), "presheaf_hom": r["presheaf_hom"]}
        return _report("ind-hom", r["ok"], None, data), None
    if args.action == "recognize":
        rec = is_ind_object(files.entity(args.setfun, "setfun"))
        data = {"index_objects": len(rec.presentation.index.objects) if rec.presentation else None}
        return _report("ind-recognize", rec.ok, rec.witness, data), None
    if args.action == "karoubi-id":
        r = karoubi_identification(files.category(args.target), args.bound, budget.enumeration_ceiling)
        return _report("karoubi-id", r["ok"], None, {k: v for k, v in r.items() if k != "ok"}), None
    r = pullback_failure_demo(args.N)
    return _report("prod-demo", r["ok"], None, {k: v for k, v in r.items() if k != "ok"}), None


def cmd_harness(args, budget):
    cfg = ConfigurationManager().get_harness_config(
        args.suite,
        workers=args.workers,
        enumeration_ceiling=budget.enumeration_ceiling,
        max_objects=args.max_obj,
        max_morphisms=args.max_mor,
        max_poset_size=args.max_size,
        value_bound=args.value_bound,
        shapes=args.shapes,
    )
    result = run_suite(cfg)
    data = {"instances": result.instances, "passed": result.passed, "suite": result.suite}
    data.update(result.data)
    return _report("harness", result.ok, result.counterexample, data), None


COMMANDS = {
    "load": cmd_load,
    "colim": cmd_colim,
    "check": cmd_check,
    "nerve": cmd_nerve,
    "vc": cmd_vc,
    "lax-limit": cmd_lax_limit,
    "tw": cmd_tw,
    "ind": cmd_ind,
    "harness": cmd_harness,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable report (schema 1)")
    common.add_argument("--dot", action="store_true", help="Graphviz output where the command has a graph")
    common.add_argument("--budget", type=int, default=None, help="enumeration ceiling (overrides KANCALC_BUDGET)")
    common.add_argument("-L", "--context", action="append", metavar="FILE",
                        help="load FILE first so later files can refer to its entities")
    common.add_argument("--time", action="store_true", help="report elapsed time on stderr")

    parser = argparse.ArgumentParser(prog="kancalc", description="Finite category theory engine")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("load", parents=[common], help="load, validate and print normalized files")
    p.add_argument("paths", nargs="+")

    p = sub.add_parser("colim", parents=[common], help="colimit of a diagram or a Set-valued functor")
    p.add_argument("-d", "--diagram", required=True)
    p.add_argument("--limit", action="store_true", help="compute the limit instead")

    p = sub.add_parser("check", help="decide a property")
    checks = p.add_subparsers(dest="property", required=True)
    c = checks.add_parser("filtered", parents=[common])
    c.add_argument("target")
    c.add_argument("--level", type=int, default=None)
    c.add_argument("--shapes", choices=SHAPES, default="dim1")
    c = checks.add_parser("cofinal", parents=[common])
    c.add_argument("-F", "--functor", required=True)
    c.add_argument("--final", action="store_true")
    c = checks.add_parser("con-le", parents=[common])
    c.add_argument("-I", "--index", required=True)
    c.add_argument("-X", "--setfun", required=True)
    c = checks.add_parser("commute", parents=[common])
    c.add_argument("-I", "--index", required=True)
    c.add_argument("-J", "--shape", required=True)
    c.add_argument("-X", "--setfun", required=True)

    p = sub.add_parser("nerve", parents=[common], help="truncated nerve")
    p.add_argument("target")
    p.add_argument("--dim", type=int, default=None)
    p.add_argument("--list", action="store_true", help="list the chains")

    p = sub.add_parser("vc", parents=[common], help="the poset V(C) with q and its collapse layer")
    p.add_argument("target")

    p = sub.add_parser("lax-limit", parents=[common], help="lax or co-lax limit of a diagram")
    p.add_argument("-D", "--diagram", required=True)
    p.add_argument("--colax", action="store_true")

    p = sub.add_parser("tw", parents=[common], help="twisted arrow category")
    p.add_argument("target")

    p = sub.add_parser("ind", help="Ind-object shadows")
    acts = p.add_subparsers(dest="action", required=True)
    a = acts.add_parser("hom", parents=[common])
    a.add_argument("-A", required=True)
    a.add_argument("-B", required=True)
    a = acts.add_parser("recognize", parents=[common])
    a.add_argument("-X", "--setfun", required=True)
    a = acts.add_parser("karoubi-id", parents=[common])
    a.add_argument("target")
    a.add_argument("--bound", type=int, default=2)
    a = acts.add_parser("prod-demo", parents=[common])
    a.add_argument("-N", type=int, default=4)

    p = sub.add_parser("harness", parents=[common], help="run a lemma suite over the corpus")
    p.add_argument("suite", choices=HARNESS_SUITES)
    p.add_argument("--max-obj", type=int, default=None)
    p.add_argument("--max-mor", type=int, default=None)
    p.add_argument("--max-size", type=int, default=None)
    p.add_argument("--value-bound", type=int, default=None)
    p.add_argument("--shapes", choices=SHAPES, default=None)
    p.add_argument("--workers", type=int, default=None)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    start = time.perf_counter()
    text = None
    try:
        budget = ConfigurationManager().get_budget_config(args.budget)
        report, text = COMMANDS[args.command](args, budget)
    except BoundExceeded as e:
        logger.error(f"budget exceeded: {e.message}")
        report = Report("error", False, None, {"error": "BoundExceeded", "message": e.message}, EXIT_BUDGET)
    except CustomException as e:
        logger.error(f"{type(e).__name__}: {e.message}")
        report = Report("error", False, None, {"error": type(e).__name__, "message": e.message}, EXIT_INVALID)
    if args.time:
        sys.stderr.write(f"elapsed: {time.perf_counter() - start:.3f}s\n")
    if text is not None:
        sys.stdout.write(text)
        return EXIT_OK
    sys.stdout.write(render(report, args.json))
    return report.exit_code


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()

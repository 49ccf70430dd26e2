"""Command-line front end.

Exit codes: 0 for affirmative verdicts, 1 for negative ones, 2 for errors
(bad input, failed validation of an input object, exceeded budgets), so
shell pipelines can branch on mathematical outcomes.  Reports are JSON on
stdout and byte-for-byte reproducible; timings are opt-in because they
would break that.
"""

from __future__ import annotations

import argparse
import json
import sys
import time

from .core import (Budget, BudgetExceeded, HdtsMap, WeakHdts, boundary,
                   clique, cube, double, interval, is_cubical,
                   is_isomorphism, pure_transition, validate)
from .precub import (LsPrecubSet, PrecubMap, check_hda, precub_boundary,
                     precub_cube, precub_free, sh_reflect, validate_presheaf)
from .ops import coreflect_cubical, cubify
from .realize import nerve as nerve_fn, realize as realize_fn
from .homotopy import (GeneratorFamily, bls_reflect, cellularize,
                       csa1_reflect, homotopic, lambda_generate, weak_equiv,
                       weak_equiv_precub_localized)
from .serial import (dump_json, export_dot, hdts_to_data, load_any,
                     map_to_data, precub_to_data, render_witness)


def _budget(args) -> Budget:
    if getattr(args, "budget", None):
        return Budget(max_transitions=args.budget, max_nodes=args.budget)
    return Budget()


def _emit(args, report: dict, payload=None, code: int = 0) -> int:
    if payload is not None:
        if args.out:
            dump_json(payload, args.out)
            report["out"] = args.out
        else:
            report["result"] = json.loads(dump_json(payload))
    if getattr(args, "timings", False):
        report["elapsed_ms"] = int((time.monotonic() - args._t0) * 1000)
    sys.stdout.write(json.dumps(report, indent=2, sort_keys=True) + "\n")
    return code


def _load_checked(path: str, budget: Budget):
    obj = load_any(path)
    if isinstance(obj, WeakHdts):
        v = validate(obj, budget)
        if not v:
            raise ValueError(f"invalid system: {v.reason}")
    elif isinstance(obj, LsPrecubSet):
        v = validate_presheaf(obj)
        if not v:
            raise ValueError(f"invalid precubical set: {v.reason}")
    return obj


def cmd_validate(args) -> int:
    obj = load_any(args.path)
    if isinstance(obj, WeakHdts):
        v = validate(obj, _budget(args))
        kind = "hdts"
    elif isinstance(obj, LsPrecubSet):
        v = validate_presheaf(obj)
        kind = "precub"
    else:
        v = None
        kind = "map"
    report = {"verb": "validate", "kind": kind}
    if v is None:
        report["ok"] = True  # maps are validated on load
        return _emit(args, report, code=0)
    report.update(ok=bool(v), reason=v.reason,
                  witness=render_witness(v.witness))
    return _emit(args, report, code=0 if v else 1)


def cmd_info(args) -> int:
    obj = _load_checked(args.path, _budget(args))
    if isinstance(obj, WeakHdts):
        report = {
            "verb": "info", "kind": "hdts",
            "sigma": list(obj.sigma),
            "states": len(obj.states),
            "actions": len(obj.actions),
            "transitions": len(obj.transitions),
            "max_arity": obj.max_arity,
            "cubical": bool(is_cubical(obj)),
        }
    elif isinstance(obj, LsPrecubSet):
        report = {
            "verb": "info", "kind": "precub",
            "sigma": list(obj.sigma),
            "dim_bound": obj.dim,
            "cells": [len(obj.cells_at(n)) for n in range(obj.dim + 1)],
            "hda": bool(check_hda(obj)),
        }
    else:
        report = {"verb": "info", "kind": "map"}
    return _emit(args, report)


def cmd_cube(args) -> int:
    labels = tuple(args.labels)
    sigma = tuple(args.sigma) if args.sigma else None
    if args.precub:
        if args.kind == "cube":
            obj = precub_cube(labels, sigma)
        elif args.kind == "boundary":
            obj = precub_boundary(labels, sigma)
        elif args.kind == "free":
            obj = precub_free({l: l for l in labels}, sigma,
                              args.dim_bound or 3)
        else:
            raise ValueError(f"kind {args.kind!r} has no precubical form")
    else:
        if args.kind == "cube":
            obj = cube(labels, sigma)
        elif args.kind == "boundary":
            obj = boundary(labels, sigma)
        elif args.kind == "pure":
            obj = pure_transition(labels, sigma)
        elif args.kind == "double":
            (x,) = labels
            obj = double(x, sigma)
        elif args.kind == "clique":
            obj = clique({l: l for l in labels}, sigma, args.dim_bound or 4)
        elif args.kind == "interval":
            obj = interval(labels or sigma, args.dim_bound or 4)
        else:
            raise ValueError(f"unknown kind {args.kind!r}")
    return _emit(args, {"verb": "cube", "kind": args.kind}, payload=obj)


def cmd_realize(args) -> int:
    k = _load_checked(args.path, _budget(args))
    if not isinstance(k, LsPrecubSet):
        raise ValueError("realize expects a precubical set")
    x = realize_fn(k, _budget(args))
    return _emit(args, {"verb": "realize"}, payload=x)


def cmd_nerve(args) -> int:
    x = _load_checked(args.path, _budget(args))
    if not isinstance(x, WeakHdts):
        raise ValueError("nerve expects a transition system")
    dim = args.dim_bound if args.dim_bound is not None else x.max_arity
    k = nerve_fn(x, dim, _budget(args))
    return _emit(args, {"verb": "nerve", "dim_bound": dim}, payload=k)


def cmd_cubify(args) -> int:
    x = _load_checked(args.path, _budget(args))
    apex, counit = cubify(x, _budget(args))
    report = {"verb": "cubify", "counit_iso": bool(is_isomorphism(counit))}
    return _emit(args, report, payload=apex)


def cmd_coreflect(args) -> int:
    x = _load_checked(args.path, _budget(args))
    sub, _ = coreflect_cubical(x, _budget(args))
    return _emit(args, {"verb": "coreflect", "unchanged": sub == x},
                 payload=sub)


def cmd_csa1(args) -> int:
    x = _load_checked(args.path, _budget(args))
    reflected, unit = csa1_reflect(x, _budget(args))
    report = {"verb": "csa1", "identity_unit": bool(is_isomorphism(unit))}
    return _emit(args, report, payload=reflected)


def cmd_bls(args) -> int:
    x = _load_checked(args.path, _budget(args))
    reflected, unit = bls_reflect(x, _budget(args))
    report = {"verb": "bls", "identity_unit": bool(is_isomorphism(unit))}
    return _emit(args, report, payload=reflected)


def cmd_sh(args) -> int:
    k = _load_checked(args.path, _budget(args))
    reflected, unit = sh_reflect(k)
    merged = k.size() - reflected.size()
    return _emit(args, {"verb": "sh", "cells_merged": merged},
                 payload=reflected)


def cmd_check_hda(args) -> int:
    k = _load_checked(args.path, _budget(args))
    v = check_hda(k)
    report = {"verb": "check-hda", "ok": bool(v),
              "witness": render_witness(v.witness)}
    return _emit(args, report, code=0 if v else 1)


def cmd_equiv(args) -> int:
    f = load_any(args.path)
    if isinstance(f, PrecubMap):
        if args.model != "localized":
            raise ValueError("precubical maps only carry the localized "
                             "equivalence")
        v = weak_equiv_precub_localized(f, _budget(args))
    elif isinstance(f, HdtsMap):
        model = {"cts+": "cts_plus"}.get(args.model, args.model)
        v = weak_equiv(f, model, _budget(args))
    else:
        raise ValueError("equiv expects a map file")
    report = {"verb": "equiv", "model": args.model, "ok": bool(v),
              "reason": v.reason, "witness": render_witness(v.witness)}
    return _emit(args, report, code=0 if v else 1)


def cmd_homotopic(args) -> int:
    f = load_any(args.path)
    g = load_any(args.other)
    if not (isinstance(f, HdtsMap) and isinstance(g, HdtsMap)):
        raise ValueError("homotopic expects two transition-system maps")
    v = homotopic(f, g)
    report = {"verb": "homotopic", "ok": bool(v), "reason": v.reason}
    return _emit(args, report, code=0 if v else 1)


def cmd_cellularize(args) -> int:
    f = load_any(args.path)
    if not isinstance(f, HdtsMap):
        raise ValueError("cellularize expects a transition-system map")
    fact = cellularize(f, _budget(args))
    cells = []
    for cell in fact.cells:
        cells.append({
            "generator": cell.generator,
            "attach": json.loads(dump_json(cell.attach)),
            "stage": json.loads(dump_json(cell.stage)),
        })
    report = {
        "verb": "cellularize",
        "cells": cells,
        "cell_count": len(fact.cells),
        "terminal_iso": json.loads(dump_json(fact.terminal_iso)),
        "replay_ok": fact.replay_ok(),
    }
    return _emit(args, report, code=0 if report["replay_ok"] else 2)


def cmd_lambda(args) -> int:
    sigma = tuple(args.labels) or ("x",)
    fam = GeneratorFamily(args.family, sigma, args.dim_bound or 1).members()
    slice_ = lambda_generate(sigma, [], fam, args.depth or 0,
                             _budget(args))
    report = {
        "verb": "lambda",
        "family": args.family,
        "depth": args.depth or 0,
        "members": [m.name for m in slice_],
        "count": len(slice_),
    }
    return _emit(args, report)


def cmd_dot(args) -> int:
    obj = _load_checked(args.path, _budget(args))
    if isinstance(obj, (HdtsMap, PrecubMap)):
        raise ValueError("dot expects an object, not a map")
    text = export_dot(obj, args.out)
    if not args.out:
        sys.stdout.write(text)
        return 0
    return _emit(args, {"verb": "dot", "out": args.out})


def build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="hdts",
        description="Finite higher dimensional transition systems and "
                    "labelled symmetric precubical sets")
    sub = top.add_subparsers(dest="verb", required=True)

    def common(p, path=True):
        if path:
            p.add_argument("path", help="input JSON file")
        p.add_argument("--out", help="write the result object/file here")
        p.add_argument("--budget", type=int, help="derivation/search cap")
        p.add_argument("--dim-bound", type=int, dest="dim_bound",
                       help="dimension bound where applicable")
        p.add_argument("--timings", action="store_true",
                       help="include wall-clock time in the report")

    for verb, fn in [("validate", cmd_validate), ("info", cmd_info),
                     ("realize", cmd_realize), ("nerve", cmd_nerve),
                     ("cubify", cmd_cubify), ("coreflect", cmd_coreflect),
                     ("csa1", cmd_csa1), ("bls", cmd_bls), ("sh", cmd_sh),
                     ("check-hda", cmd_check_hda), ("dot", cmd_dot)]:
        p = sub.add_parser(verb)
        common(p)
        p.set_defaults(fn=fn)

    p = sub.add_parser("cube", help="construct a standard object")
    p.add_argument("labels", nargs="*", help="label word")
    p.add_argument("--kind", default="cube",
                   choices=["cube", "boundary", "pure", "double", "clique",
                            "interval", "free"])
    p.add_argument("--precub", action="store_true",
                   help="build the precubical version")
    p.add_argument("--sigma", nargs="*", help="ambient alphabet")
    common(p, path=False)
    p.set_defaults(fn=cmd_cube)

    p = sub.add_parser("equiv", help="decide a weak equivalence")
    p.add_argument("--model", default="cts",
                   choices=["cts", "cts+", "cts_plus", "localized"])
    common(p)
    p.set_defaults(fn=cmd_equiv)

    p = sub.add_parser("homotopic", help="decide cylinder homotopy")
    p.add_argument("path", help="first map JSON file")
    p.add_argument("other", help="second map JSON file")
    common(p, path=False)
    p.set_defaults(fn=cmd_homotopic)

    p = sub.add_parser("cellularize", help="factor a cofibration into cells")
    common(p)
    p.set_defaults(fn=cmd_cellularize)

    p = sub.add_parser("lambda", help="enumerate a fibrancy test slice")
    p.add_argument("--labels", nargs="*", default=[])
    p.add_argument("--depth", type=int, default=0)
    p.add_argument("--family", default="I_hdts",
                   choices=["I_hdts", "I_plus"])
    common(p, path=False)
    p.set_defaults(fn=cmd_lambda)

    return top


def run(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    args._t0 = time.monotonic()
    try:
        return args.fn(args)
    except (ValueError, KeyError, OSError, json.JSONDecodeError) as exc:
        sys.stdout.write(json.dumps(
            {"verb": args.verb, "error": str(exc)}, indent=2, sort_keys=True)
            + "\n")
        return 2
    except BudgetExceeded as exc:
        sys.stdout.write(json.dumps(
            {"verb": args.verb, "error": str(exc), "budget_exceeded": True},
            indent=2, sort_keys=True) + "\n")
        return 2


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()

"""Command-line front-end: bound / construct / check / search / audit /
lubell subcommands with structured, reproducible output.

Structured output is one JSON object on stdout, with exact rationals printed
as "p/q" strings (never floats) and a run record (argv, version, seed, input
digests, wall time) attached; replaying a record reproduces byte-identical
output apart from wall_time.  Exit codes: 0 success, 1 domain errors
(validation, range), 2 usage errors.  Human-readable messages go to stderr.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import time
from fractions import Fraction

from . import __version__
from .audits import (
    alpha_audit,
    audit_S_lemma,
    audit_fork_lambda,
    estimate_lubell,
    estimate_matches_exact,
    weighted_chain_average,
)
from .bounds import EXACT, bound_params, evaluate_bound
from .configs import build_named, load_config, parse_config_id
from .constructions import complement_family, diamond_levels, kt_construction, middle_levels
from .detector import find_violation
from .lattice import Family, elems_of, lubell
from .search import EXACT_STATUS_GUARD, SearchProblem, exact_max_family

WORKERS_ENV = "FORBIDPOSET_WORKERS"


def _default_workers() -> int:
    raw = os.environ.get(WORKERS_ENV, "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def _rat(x) -> str:
    return str(Fraction(x))


def _load_family(path: str) -> tuple[Family, dict]:
    with open(path, "rb") as fh:
        data = fh.read()
    family = Family.loads(data.decode("utf-8"))
    digest = {"path": path, "sha256": hashlib.sha256(data).hexdigest()}
    return family, digest


def _load_configs(spec: str) -> tuple:
    """Named id like "diamond(4)", or a path to a JSON ConfigSet file."""
    if os.path.exists(spec):
        with open(spec, "rb") as fh:
            data = fh.read()
        cfg = load_config(data.decode("utf-8"))
        return cfg, [{"path": spec, "sha256": hashlib.sha256(data).hexdigest()}]
    return build_named(parse_config_id(spec)), []


def _emit(obj: dict, args, text_lines) -> None:
    if args.format == "structured":
        print(json.dumps(obj))
    else:
        for line in text_lines(obj):
            print(line)


def _run_record(argv, seed, inputs, wall_time) -> dict:
    return {
        "argv": list(argv),
        "version": __version__,
        "seed": seed,
        "inputs": list(inputs),
        "wall_time": wall_time,
    }


# -- subcommand handlers -----------------------------------------------------


def _cmd_bound(args, parser) -> dict:
    names = bound_params(args.id)
    params = {}
    for key in ("n", "m", "s", "t", "h"):
        val = getattr(args, key)
        if key in names:
            if val is None:
                parser.error(f"bound {args.id!r} requires --{key}")
            params[key] = val
        elif val is not None:
            parser.error(f"bound {args.id!r} does not take --{key}")
    res = evaluate_bound(args.id, **params)
    return {
        "command": "bound",
        "id": args.id,
        "params": params,
        "value": _rat(res.value),
        "exactness": res.exactness,
        "validity": res.validity,
        "source": res.source,
    }


def _bound_text(obj) -> list[str]:
    return [
        f"{obj['id']}({', '.join(f'{k}={v}' for k, v in obj['params'].items())}) "
        f"= {obj['value']}  [{obj['exactness']}; {obj['validity']}; {obj['source']}]"
    ]


def _cmd_construct(args, parser):
    inputs = []
    if args.name == "kt":
        if args.n is None:
            parser.error("construct kt requires --n")
        family = kt_construction(args.n)
    elif args.name == "middle":
        if args.n is None or args.r is None:
            parser.error("construct middle requires --n and --r")
        family = middle_levels(args.n, args.r)
    elif args.name == "diamond":
        if args.n is None or args.m is None:
            parser.error("construct diamond requires --n and --m")
        family = diamond_levels(args.n, args.m)
    elif args.name == "complement":
        if args.family is None:
            parser.error("construct complement requires --family")
        base, digest = _load_family(args.family)
        inputs.append(digest)
        family = complement_family(base)
    else:  # pragma: no cover - argparse choices guard this
        parser.error(f"unknown construction {args.name!r}")
    return family, inputs


def _cmd_check(args) -> tuple[dict, list]:
    family, digest = _load_family(args.family)
    configs, cfg_inputs = _load_configs(args.config)
    mode = "induced" if args.induced else "standard"
    hit = find_violation(family, configs, mode)
    obj = {
        "command": "check",
        "config": args.config,
        "mode": mode,
        "family": {"n": family.n, "size": len(family)},
        "avoiding": hit is None,
        "violation": None,
    }
    if hit is not None:
        idx, emb = hit
        poset = configs.configs[idx]
        obj["violation"] = {
            "poset_index": idx,
            "poset_name": poset.name,
            "assignment": list(emb.assignment),
            "sets": [list(elems_of(m)) for m in emb.masks(family)],
        }
    return obj, [digest] + cfg_inputs


def _check_text(obj) -> list[str]:
    lines = [f"avoiding: {str(obj['avoiding']).lower()}"]
    if obj["violation"] is not None:
        v = obj["violation"]
        sets = "; ".join(",".join(map(str, s)) if s else "-" for s in v["sets"])
        lines.append(f"violation: poset #{v['poset_index']} ({v['poset_name']}) -> {sets}")
    return lines


def _cmd_search(args, parser) -> tuple[dict, list]:
    if args.n > EXACT_STATUS_GUARD and not args.allow_slow:
        parser.error(
            f"exact search beyond n={EXACT_STATUS_GUARD} needs --allow-slow "
            "(status will be a lower bound only)"
        )
    configs, cfg_inputs = _load_configs(args.config)
    theorem_bound = None
    if args.theorem_bound is not None:
        names = bound_params(args.theorem_bound)
        params = {"n": args.n}
        for key in ("m", "s", "t", "h"):
            val = getattr(args, key)
            if key in names:
                if val is None:
                    parser.error(f"theorem bound {args.theorem_bound!r} requires --{key}")
                params[key] = val
        theorem_bound = evaluate_bound(args.theorem_bound, **params)
        if theorem_bound.exactness != EXACT:
            parser.error(f"theorem bound {args.theorem_bound!r} is not exact")
    problem = SearchProblem(
        n=args.n,
        configs=configs,
        mode="induced" if args.induced else "standard",
        symmetry=args.symmetry == "on",
        theorem_bound=theorem_bound,
        time_limit=args.time_limit,
        include_empty_and_full=not args.exclude_empty_and_full,
        workers=args.workers,
    )
    start = time.monotonic()
    result = exact_max_family(problem)
    wall = time.monotonic() - start
    obj = {
        "command": "search",
        "n": args.n,
        "config": args.config,
        "mode": problem.mode,
        "best_size": result.best_size,
        "status": result.status,
        "witness": result.witness.to_json_obj(),
        "nodes": result.nodes_explored,
        "prunes": result.prunes,
        "wall_time": wall,
    }
    return obj, cfg_inputs


def _search_text(obj) -> list[str]:
    return [
        f"best_size: {obj['best_size']} ({obj['status']})",
        f"nodes: {obj['nodes']}, prunes: {obj['prunes']}, wall_time: {obj['wall_time']:.3f}s",
        "witness: " + " ".join(",".join(map(str, s)) if s else "-" for s in obj["witness"]["sets"]),
    ]


def _cmd_audit(args, parser) -> tuple[dict, list, int | None]:
    family, digest = _load_family(args.family)
    seed = None
    if args.kind == "lubell":
        seed = args.seed
        report = estimate_lubell(family, args.trials, args.seed, args.workers)
        obj = {
            "command": "audit",
            "kind": "lubell",
            "trials": report.trials,
            "mean": report.mean,
            "std_error": report.std_error,
            "exact_target": _rat(report.exact_target),
            "within_5_sigma": estimate_matches_exact(report),
        }
    elif args.kind == "weighted":
        value = weighted_chain_average(family)
        obj = {
            "command": "audit",
            "kind": "weighted",
            "value": _rat(value),
            "family_size": len(family),
            "identity_holds": value == len(family),
        }
    elif args.kind == "fork":
        if args.s is None:
            parser.error("audit fork requires --s")
        report = audit_fork_lambda(family, args.s)
        obj = {
            "command": "audit",
            "kind": "fork",
            "s": report.s,
            "k": report.k,
            "band_size": report.band_size,
            "lambda_band": _rat(report.lambda_band),
            "main_bound": _rat(report.main_bound),
            "smallest_c": _rat(report.smallest_c),
            "hard_bound": _rat(report.hard_bound),
            "passed": report.passed,
        }
    elif args.kind == "slemma":
        report = audit_S_lemma(family)
        failures = [list(elems_of(e.mask)) for e in report.entries if not e.ok]
        obj = {
            "command": "audit",
            "kind": "slemma",
            "n": report.n,
            "subsets_checked": len(report.entries),
            "passed": report.passed,
            "failures": failures,
        }
    else:  # alpha
        report = alpha_audit(family)
        counts = [
            {"set": list(elems_of(mask)), "count": count} for mask, count in report.counts.items()
        ]
        obj = {
            "command": "audit",
            "kind": "alpha",
            "m": report.m,
            "threshold": report.threshold,
            "assigned_total": report.assigned_total,
            "unassigned": report.unassigned,
            "exceptions": [list(elems_of(m)) for m in report.exceptions],
            "unexpected_below": [list(elems_of(m)) for m in report.unexpected_below],
            "counts": counts,
        }
    return obj, [digest], seed


def _audit_text(obj) -> list[str]:
    skip = {"command", "kind", "counts"}
    lines = [f"audit {obj['kind']}:"]
    for key, val in obj.items():
        if key not in skip:
            lines.append(f"  {key}: {val}")
    return lines


def _cmd_lubell(args) -> tuple[dict, list]:
    family, digest = _load_family(args.family)
    obj = {
        "command": "lubell",
        "n": family.n,
        "size": len(family),
        "value": _rat(lubell(family)),
    }
    return obj, [digest]


# -- parser ------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="forbidposet",
        description="Forbidden colored-poset patterns in the Boolean lattice.",
    )
    parser.add_argument("--version", action="version", version=f"forbidposet {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_format(p):
        p.add_argument(
            "--format", choices=("structured", "text"), default="structured",
            help="structured JSON (default) or human-readable text",
        )

    p_bound = sub.add_parser("bound", help="evaluate a closed-form bound")
    p_bound.add_argument("id", help="bound id, e.g. kt, butterfly, diamond_restricted")
    for key in ("n", "m", "s", "t", "h"):
        p_bound.add_argument(f"--{key}", type=int)
    add_format(p_bound)

    p_con = sub.add_parser("construct", help="emit an extremal construction")
    p_con.add_argument("name", choices=("kt", "middle", "diamond", "complement"))
    p_con.add_argument("--n", type=int)
    p_con.add_argument("--r", type=int, help="band width for 'middle'")
    p_con.add_argument("--m", type=int, help="middle count for 'diamond'")
    p_con.add_argument("--family", help="input family file for 'complement'")
    add_format(p_con)
    p_con.set_defaults(format="text")  # the family text format is the native output

    p_check = sub.add_parser("check", help="test a family against a configuration")
    p_check.add_argument("--family", required=True)
    p_check.add_argument("--config", required=True, help="named id or config file")
    p_check.add_argument("--induced", action="store_true")
    add_format(p_check)

    p_search = sub.add_parser("search", help="exact maximum avoiding family")
    p_search.add_argument("--n", type=int, required=True)
    p_search.add_argument("--config", required=True, help="named id or config file")
    p_search.add_argument("--induced", action="store_true")
    p_search.add_argument("--time-limit", type=float, default=None)
    p_search.add_argument("--symmetry", choices=("on", "off"), default="on")
    p_search.add_argument("--theorem-bound", default=None, help="exact bound id for early stop")
    p_search.add_argument("--exclude-empty-and-full", action="store_true")
    p_search.add_argument("--allow-slow", action="store_true")
    p_search.add_argument("--workers", type=int, default=_default_workers())
    for key in ("m", "s", "t", "h"):
        p_search.add_argument(f"--{key}", type=int, help="parameter for --theorem-bound")
    add_format(p_search)

    p_audit = sub.add_parser("audit", help="chain-counting audits")
    p_audit.add_argument("kind", choices=("lubell", "weighted", "fork", "slemma", "alpha"))
    p_audit.add_argument("--family", required=True)
    p_audit.add_argument("--trials", type=int, default=100000)
    p_audit.add_argument("--seed", type=int, default=0)
    p_audit.add_argument("--s", type=int, help="fork width for 'fork'")
    p_audit.add_argument("--workers", type=int, default=_default_workers())
    add_format(p_audit)

    p_lub = sub.add_parser("lubell", help="exact Lubell function of a family")
    p_lub.add_argument("--family", required=True)
    add_format(p_lub)

    return parser


def main(argv=None) -> int:
    if argv is None:
        argv = sys.argv[1:]
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    start = time.monotonic()
    try:
        if args.command == "bound":
            obj = _cmd_bound(args, parser)
            obj["run"] = _run_record(argv, None, [], time.monotonic() - start)
            _emit(obj, args, _bound_text)
        elif args.command == "construct":
            family, inputs = _cmd_construct(args, parser)
            if args.format == "text":
                sys.stdout.write(f"n={family.n}\n")
                for mask in family.members:
                    sys.stdout.write(",".join(map(str, elems_of(mask))) + "\n" if mask else "-\n")
            else:
                obj = {"command": "construct", "name": args.name, "family": family.to_json_obj()}
                obj["run"] = _run_record(argv, None, inputs, time.monotonic() - start)
                print(json.dumps(obj))
        elif args.command == "check":
            obj, inputs = _cmd_check(args)
            obj["run"] = _run_record(argv, None, inputs, time.monotonic() - start)
            _emit(obj, args, _check_text)
        elif args.command == "search":
            obj, inputs = _cmd_search(args, parser)
            obj["run"] = _run_record(argv, None, inputs, time.monotonic() - start)
            _emit(obj, args, _search_text)
        elif args.command == "audit":
            obj, inputs, seed = _cmd_audit(args, parser)
            obj["run"] = _run_record(argv, seed, inputs, time.monotonic() - start)
            _emit(obj, args, _audit_text)
        elif args.command == "lubell":
            obj, inputs = _cmd_lubell(args)
            obj["run"] = _run_record(argv, None, inputs, time.monotonic() - start)
            _emit(obj, args, lambda o: [f"lubell = {o['value']}  (n={o['n']}, size={o['size']})"])
        else:  # pragma: no cover
            parser.error(f"unknown command {args.command!r}")
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())

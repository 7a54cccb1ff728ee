"""Command-line entry point: ``projcross <subcommand> ...``."""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
from fractions import Fraction
from pathlib import Path

from .core import Params, ParamsError, VertexId, params_from_rationals
from .drawing import build_auxiliary, project
from .engine import TYPES, count_crossings, responsibility
from .formulas import (
    all_type_counts,
    constants,
    f_eval,
    pcr_exact,
    rational_json,
    taut_green_brown,
    theorem1_chain,
)
from .geodesics import estimate_expected_crossings, estimate_pair_probability
from .optimize import minimize_f, minimize_lattice
from .render import RenderConfig, render_auxiliary

log = logging.getLogger("projcross")

EXIT_OK, EXIT_MISMATCH, EXIT_CONFIG = 0, 1, 2


class ConfigError(ValueError):
    pass


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not a rational: {text!r}") from exc


def _params(args) -> Params:
    if args.k is None:
        raise ConfigError("--k is required")
    if args.alpha is not None or args.beta is not None:
        if args.a is not None or args.b is not None:
            raise ConfigError("give either --a/--b or --alpha/--beta, not both")
        if args.alpha is None or args.beta is None:
            raise ConfigError("--alpha and --beta must be given together")
        return params_from_rationals(args.k, args.alpha, args.beta)
    if args.a is None or args.b is None:
        raise ConfigError("--a and --b (or --alpha and --beta) are required")
    return Params(args.k, args.a, args.b)


def _config(args) -> dict:
    return {
        key: (str(v) if isinstance(v, (Fraction, Path)) else v)
        for key, v in sorted(vars(args).items())
        if key != "func"
    }


def _csv(rows: list[list]) -> str:
    buf = io.StringIO()
    csv.writer(buf, lineterminator="\n").writerows(rows)
    return buf.getvalue()


def _emit(args, doc: dict, csv_text: str | None = None) -> None:
    if args.format == "csv" and csv_text is not None:
        text = csv_text
    else:
        doc = {**doc, "config": _config(args)}
        text = json.dumps(doc, indent=2) + "\n"
    if args.out:
        Path(args.out).write_text(text)
    if not args.quiet and not args.out:
        sys.stdout.write(text)


def cmd_count(args) -> int:
    p = _params(args)
    cb = count_crossings(build_auxiliary(p), threads=args.threads)
    _emit(args, cb.to_json(), cb.to_csv())
    return EXIT_OK


def cmd_exact(args) -> int:
    p = _params(args)
    counts = all_type_counts(p)
    doc = {
        "schema": "projcross-counts/1",
        "kind": "closed-form",
        "params": p.as_dict(),
        "A": counts,
        "pcr_exact": pcr_exact(p),
    }
    rows = [["type", "A"]] + [[t, counts[t]] for t in TYPES] + [["pcr_exact", doc["pcr_exact"]]]
    _emit(args, doc, _csv(rows))
    return EXIT_OK


def _verify_one(p: Params, threads: int) -> dict:
    aux = build_auxiliary(p)
    adj = project(aux)
    engine = count_crossings(aux, threads=threads)
    closed = all_type_counts(p)
    per_type = {
        t: {"engine": engine.counts_a[t], "closed_form": closed[t], "equal": engine.counts_a[t] == closed[t]}
        for t in TYPES
    }
    per_type["green-brown"]["taut_form"] = taut_green_brown(p)
    ok = all(v["equal"] for v in per_type.values()) and engine.total_d == pcr_exact(p)
    return {
        "params": p.as_dict(),
        "complete_graph": adj.is_complete(),
        "types": per_type,
        "total_D": {"engine": engine.total_d, "closed_form": pcr_exact(p)},
        "equal": ok,
    }


def cmd_verify(args) -> int:
    if args.lattice is not None:
        cases = [Params(k, a, b) for k in range(1, args.lattice + 1)
                 for a in range(2 * k + 1) for b in range(2 * k + 1)]
    else:
        cases = [_params(args)]
    reports = [_verify_one(p, args.threads) for p in cases]
    ok = all(r["equal"] and r["complete_graph"] for r in reports)
    mismatched = [r for r in reports if not r["equal"]]
    for r in mismatched:
        bad = [t for t, v in r["types"].items() if not v["equal"]]
        log.info("mismatch at k=%(k)s a=%(a)s b=%(b)s", r["params"])
        log.info("  types: %s", ", ".join(bad))
    if mismatched:
        log.warning("%d of %d parameter sets disagree with the closed forms", len(mismatched), len(reports))
    rows = [["k", "a", "b", "type", "engine", "closed_form", "equal"]]
    for r in reports:
        pp = r["params"]
        for t, v in r["types"].items():
            rows.append([pp["k"], pp["a"], pp["b"], t, v["engine"], v["closed_form"], v["equal"]])
    doc = {
        "schema": "projcross-counts/1",
        "kind": "verification",
        "cases": len(reports),
        "mismatches": sum(not r["equal"] for r in reports),
        "pass": ok,
        "reports": reports,
    }
    _emit(args, doc, _csv(rows))
    return EXIT_OK if ok else EXIT_MISMATCH


def cmd_f_eval(args) -> int:
    if args.alpha is None or args.beta is None:
        raise ConfigError("--alpha and --beta are required")
    try:
        value = f_eval(args.alpha, args.beta)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    doc = {"schema": "projcross-formula/1", "alpha": str(args.alpha), "beta": str(args.beta),
           "f": rational_json(value)}
    _emit(args, doc, _csv([["alpha", "beta", "f", "decimal"],
                           [str(args.alpha), str(args.beta), str(value), doc["f"]["decimal"]]]))
    return EXIT_OK


def cmd_minimize(args) -> int:
    if args.lattice is not None:
        if args.lattice < 1:
            raise ConfigError("--lattice must be positive")
        res = minimize_lattice(args.lattice, diagonal=args.diagonal)
    else:
        if args.grid_step <= 0 or args.refine_rounds < 0:
            raise ConfigError("--grid-step must be positive and --refine-rounds non-negative")
        res = minimize_f(args.grid_step, args.refine_rounds, threads=args.threads)
    doc = res.to_json()
    _emit(args, doc, _csv([["method", "alpha", "beta", "value", "evaluations"],
                           [res.method, str(res.argmin[0]), str(res.argmin[1]), str(res.value),
                            res.evaluations]]))
    return EXIT_OK


def cmd_montecarlo(args) -> int:
    if args.n is not None or args.drawings is not None:
        if args.n is None or args.drawings is None:
            raise ConfigError("--n and --drawings must be given together")
        if args.n < 4 or args.drawings < 1:
            raise ConfigError("need n >= 4 and at least one drawing")
        est = estimate_expected_crossings(args.model, args.n, args.drawings, args.seed, args.threads)
    else:
        if args.samples < 1:
            raise ConfigError("--samples must be positive")
        est = estimate_pair_probability(args.model, args.samples, args.seed, args.threads)
    _emit(args, est.to_json(), est.to_csv())
    return EXIT_OK


def cmd_responsibility(args) -> int:
    p = _params(args)
    rep = responsibility(build_auxiliary(p), method=args.method)
    _emit(args, rep.to_json(), rep.to_csv())
    return EXIT_OK


def _vertex(text: str) -> VertexId:
    cls, idx = text[0].upper(), text[1:]
    if cls not in "UVW" or not idx.isdigit():
        raise argparse.ArgumentTypeError(f"vertex must look like v0, w3 or u12, got {text!r}")
    return VertexId(cls, int(idx))


def cmd_render(args) -> int:
    p = _params(args)
    aux = build_auxiliary(p)
    cfg = RenderConfig(
        colors=frozenset(args.colors) if args.colors else None,
        vertices=frozenset(VertexId(v.cls, v.index % p.m) for v in args.filter) if args.filter else None,
        polygon=args.polygon,
        labels=args.labels,
    )
    counts = count_crossings(aux) if args.legend else None
    svg = render_auxiliary(aux, cfg, counts)
    if args.out:
        Path(args.out).write_text(svg)
    elif not args.quiet:
        sys.stdout.write(svg)
    return EXIT_OK


def cmd_theorem1(args) -> int:
    chain = theorem1_chain()
    doc = {"schema": "projcross-theorem1/1", **chain, "constants": constants()}
    if not args.quiet and args.format != "json":
        sys.stdout.write(
            f"f(11/10,1)  = {chain['f(11/10,1)']['value']} = {chain['f(11/10,1)']['decimal']}\n"
            f"threshold   = {chain['threshold']['decimal']}\n"
            f"1/(8 pi^2) in [{chain['elkies_density']['lo']['decimal']}, "
            f"{chain['elkies_density']['hi']['decimal']}]\n"
            f"f(11/10,1) < 0.0126: {chain['f_below_threshold']}\n"
            f"0.0126 < 1/(8 pi^2): {chain['threshold_below_elkies']}\n"
            f"{'PASS' if chain['pass'] else 'FAIL'}\n"
        )
        if args.out:
            Path(args.out).write_text(json.dumps({**doc, "config": _config(args)}, indent=2) + "\n")
    else:
        _emit(args, doc)
    return EXIT_OK if chain["pass"] else EXIT_MISMATCH


def _add_params(sp: argparse.ArgumentParser) -> None:
    sp.add_argument("--k", type=int, help="size parameter, n = 8k + 2")
    sp.add_argument("--a", type=int, help="integer level alpha*k")
    sp.add_argument("--b", type=int, help="integer level beta*k")
    sp.add_argument("--alpha", type=_fraction, help="alpha as p/q")
    sp.add_argument("--beta", type=_fraction, help="beta as p/q")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--out", type=Path)
    common.add_argument("--quiet", action="store_true")
    common.add_argument("--threads", type=int, default=1)
    common.add_argument("--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="projcross", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("count", parents=[common], help="crossing breakdown by the engine")
    _add_params(sp)
    sp.set_defaults(func=cmd_count)

    sp = sub.add_parser("exact", parents=[common], help="closed-form crossing counts")
    _add_params(sp)
    sp.set_defaults(func=cmd_exact)

    sp = sub.add_parser("verify", parents=[common], help="engine vs closed forms")
    _add_params(sp)
    sp.add_argument("--lattice", type=int, metavar="KMAX", help="check every k <= KMAX and every (a, b)")
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("f-eval", parents=[common], help="exact density f(alpha, beta)")
    sp.add_argument("--alpha", type=_fraction)
    sp.add_argument("--beta", type=_fraction)
    sp.set_defaults(func=cmd_f_eval)

    sp = sub.add_parser("minimize", parents=[common], help="minimise f or the exact count")
    sp.add_argument("--grid-step", type=_fraction, default=Fraction(1, 10))
    sp.add_argument("--refine-rounds", type=int, default=30)
    sp.add_argument("--lattice", type=int, metavar="K", help="scan all (a, b) for this k instead")
    sp.add_argument("--diagonal", action="store_true", help="restrict the lattice scan to a = b")
    sp.set_defaults(func=cmd_minimize)

    sp = sub.add_parser("montecarlo", parents=[common], help="random geodesic drawings")
    sp.add_argument("--model", choices=("sphere", "projective"), required=True)
    sp.add_argument("--samples", type=int, default=10**6)
    sp.add_argument("--seed", type=int, default=42)
    sp.add_argument("--n", type=int)
    sp.add_argument("--drawings", type=int)
    sp.set_defaults(func=cmd_montecarlo)

    sp = sub.add_parser("responsibility", parents=[common], help="per-vertex responsibility in D")
    _add_params(sp)
    sp.add_argument("--method", choices=("orbit", "exhaustive"), default="orbit")
    sp.set_defaults(func=cmd_responsibility)

    sp = sub.add_parser("render", parents=[common], help="SVG of the auxiliary model")
    _add_params(sp)
    sp.add_argument("--filter", type=_vertex, nargs="+", help="keep edges incident with these vertices")
    sp.add_argument("--colors", nargs="+", choices=("green", "red", "brown", "blue", "black"))
    sp.add_argument("--polygon", action="store_true", help="draw the identification polygon")
    sp.add_argument("--labels", action="store_true")
    sp.add_argument("--legend", action="store_true", help="annotate with engine crossing counts")
    sp.set_defaults(func=cmd_render)

    sp = sub.add_parser("theorem1", parents=[common], help="check f(11/10,1) < 0.0126 < 1/(8 pi^2)")
    sp.set_defaults(func=cmd_theorem1, format="text")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    if args.threads < 1:
        parser.error("--threads must be at least 1")
    try:
        return args.func(args)
    except (ConfigError, ParamsError) as exc:
        print(f"projcross {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())

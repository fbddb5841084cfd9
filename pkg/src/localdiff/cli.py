"""``localdiff`` command line: construct, diffs, energy, verify, search, check.

Exit codes: 0 ok / property holds, 1 usage error, 2 property violated,
3 inconclusive (sampled), 4 internal invariant failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction
from pathlib import Path
from typing import Optional

from . import __version__
from .checks import run_battery
from .constructions import (
    BaryCubeSpec,
    GAPSpec,
    ProbeConfig,
    ProjectedCubeSpec,
    arithmetic_progression,
    bary_cube,
    generalized_ap,
    probabilistic_construction,
    projected_cube,
)
from .energy import check_lemma_chain, dumbbell_energy
from .errors import InvariantViolation, LocalDiffError
from .search import THREADS_ENV, exact_g, g_table, table_to_csv
from .setcore import (
    NumberSet,
    difference_set,
    format_set_text,
    parse_set_text,
    parse_value,
    set_to_json_list,
    sum_set,
)
from .verify import (
    congruent_double_dumbbells_instance,
    congruent_dumbbells_instance,
    find_k_ap,
    local_min_diffs,
    same_diff_pairs_instance,
    small_doubling_subsets,
)

SCHEMA_VERSION = 1

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_VIOLATED = 2
EXIT_INCONCLUSIVE = 3
EXIT_INTERNAL = 4

KINDS = (
    "ap",
    "projected-cube",
    "gap",
    "bary-cube",
    "probabilistic",
    "same-diff-pairs",
    "congruent-dumbbells",
    "congruent-double-dumbbells",
)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _rational_list(text: str) -> list[Fraction]:
    return [parse_value(x) for x in text.replace(",", " ").split()]


def _int_range(text: str) -> list[int]:
    """``"3:6"`` (inclusive) or ``"3,4,6"``."""
    if ":" in text:
        lo, hi = text.split(":")
        return list(range(int(lo), int(hi) + 1))
    return [int(x) for x in text.replace(",", " ").split()]


def build_parser() -> argparse.ArgumentParser:
    default_threads = int(os.environ.get(THREADS_ENV, "1") or 1)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "csv", "text"), default=None)
    common.add_argument("--output", "-o", help="write the report here instead of stdout")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--threads", type=int, default=default_threads)

    p = _Parser(prog="localdiff", description="Difference sets with local properties.")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    c = sub.add_parser("construct", parents=[common], help="build a set")
    c.add_argument("--kind", choices=KINDS)
    c.add_argument("--spec", help="JSON spec file; command-line flags override it")
    c.add_argument("--n", type=int)
    c.add_argument("--start")
    c.add_argument("--step")
    c.add_argument("--i", type=int)
    c.add_argument("--base")
    c.add_argument("--deltas", help="comma separated rationals")
    c.add_argument("--steps", help="GAP steps, comma separated")
    c.add_argument("--lengths", help="GAP lengths, comma separated")
    c.add_argument("--b", type=int)
    c.add_argument("--k", type=int)
    c.add_argument("--c", type=int)
    c.add_argument("--N", type=int)
    c.add_argument("--repair-mode", choices=("exact", "sampled"))
    c.add_argument("--samples", type=int)
    c.add_argument("--no-strict", action="store_true")
    c.add_argument("--log", help="write the repair log JSON here (probabilistic kind)")

    d = sub.add_parser("diffs", parents=[common], help="difference and sum set of a set file")
    d.add_argument("--input", "-i", required=True)
    d.add_argument("--profile", action="store_true", help="include the full representation counts")

    e = sub.add_parser("energy", parents=[common], help="dumbbell and additive energies")
    e.add_argument("--input", "-i", required=True)
    e.add_argument("--moment", type=int, default=2)
    e.add_argument("--lemma-chain", action="store_true")
    e.add_argument("--allow-empty", action="store_true")
    e.add_argument("--no-double", action="store_true")

    v = sub.add_parser("verify", parents=[common], help="check a local property or find witnesses")
    v.add_argument("--input", "-i", required=True)
    v.add_argument("--check", choices=("local", "ap", "small-doubling"), default="local")
    v.add_argument("--k", type=int, required=True)
    v.add_argument("--ell", type=int)
    v.add_argument("--bound", type=int)
    v.add_argument("--mode", choices=("diff", "sum"), default="diff")
    v.add_argument("--budget", type=int, default=10**6)
    v.add_argument("--samples", type=int, default=10_000)

    s = sub.add_parser("search", parents=[common], help="exact g(n,k,l) over a bounded span")
    s.add_argument("--n", type=int)
    s.add_argument("--n-range")
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--ell", type=int)
    s.add_argument("--ell-range")
    s.add_argument("--max-span", type=int)
    s.add_argument("--checkpoint")

    sub.add_parser("check", parents=[common], help="run the identity / inequality battery")
    return p


# ---------------------------------------------------------------------------


def _resolved(args) -> dict:
    return {k: v for k, v in sorted(vars(args).items()) if v is not None and k != "func"}


def _emit(args, payload_text: str) -> None:
    if args.output:
        Path(args.output).write_text(payload_text, encoding="utf-8")
    else:
        sys.stdout.write(payload_text)


def _report(args, report: dict, text_lines: list[str]) -> None:
    fmt = args.format or "json"
    config = _resolved(args)
    if fmt == "json":
        payload = {"schema_version": SCHEMA_VERSION, "command": args.command, "config": config, "report": report}
        _emit(args, json.dumps(payload, indent=2, default=str) + "\n")
    elif fmt == "text":
        head = [f"# localdiff {args.command} config: {json.dumps(config, default=str)}"]
        _emit(args, "\n".join(head + text_lines) + "\n")
    else:
        raise UsageError(f"format {fmt} is not available for {args.command}")


def _load(args) -> NumberSet:
    path = Path(args.input)
    if not path.exists():
        raise UsageError(f"no such file: {path}")
    return parse_set_text(path.read_text(encoding="utf-8"))


def _spec_value(args, spec: dict, name: str, default=None):
    val = getattr(args, name, None)
    if val is not None:
        return val
    return spec.get(name, default)


def _construct(args) -> int:
    spec = json.loads(Path(args.spec).read_text()) if args.spec else {}
    kind = args.kind or spec.get("kind")
    if kind not in KINDS:
        raise UsageError("--kind (or a spec file with \"kind\") is required")
    get = lambda name, default=None: _spec_value(args, spec, name, default)  # noqa: E731
    log = None
    extra: dict = {"kind": kind}
    if kind == "ap":
        A = arithmetic_progression(int(get("n", 2)), parse_value(str(get("start", 0))), parse_value(str(get("step", 1))))
    elif kind == "projected-cube":
        deltas = get("deltas")
        if deltas is None:
            A = projected_cube(ProjectedCubeSpec.standard(int(get("i", 1)), parse_value(str(get("base", 0)))))
        else:
            ds = _rational_list(deltas) if isinstance(deltas, str) else [parse_value(str(x)) for x in deltas]
            A = projected_cube(ProjectedCubeSpec(parse_value(str(get("base", 0))), tuple(ds)))
    elif kind == "gap":
        steps, lengths = get("steps"), get("lengths")
        if steps is None or lengths is None:
            raise UsageError("gap needs --steps and --lengths")
        steps = _rational_list(steps) if isinstance(steps, str) else [parse_value(str(x)) for x in steps]
        lengths = _int_range(lengths) if isinstance(lengths, str) else [int(x) for x in lengths]
        A, proper = generalized_ap(GAPSpec(parse_value(str(get("base", 0))), tuple(steps), tuple(lengths)))
        extra["proper"] = proper
    elif kind == "bary-cube":
        A = bary_cube(BaryCubeSpec(int(get("b", 2)), int(get("i", 1))))
    elif kind == "probabilistic":
        cfg = ProbeConfig(
            n=int(get("n")), k=int(get("k")), c=int(get("c", 2)), N=get("N"),
            seed=int(get("seed", 0)), repair_mode=get("repair_mode", "exact"),
            samples=int(get("samples", 100_000)), strict=not (args.no_strict or spec.get("strict") is False),
        )
        A, log = probabilistic_construction(cfg)
        extra["repair_log"] = log.to_dict()
        if args.log:
            Path(args.log).write_text(json.dumps(log.to_dict(), indent=2) + "\n")
    else:
        k = int(get("k"))
        builder = {
            "same-diff-pairs": same_diff_pairs_instance,
            "congruent-dumbbells": congruent_dumbbells_instance,
            "congruent-double-dumbbells": congruent_double_dumbbells_instance,
        }[kind]
        res = builder(k)
        A = res.instance
        extra["bound"] = {"predicted": res.predicted, "achieved": res.achieved, "matches": res.matches}

    fmt = args.format or "text"
    config = _resolved(args)
    if fmt == "json":
        payload = {"schema_version": SCHEMA_VERSION, "command": "construct", "config": config,
                   "set": set_to_json_list(A), **extra}
        _emit(args, json.dumps(payload, indent=2, default=str) + "\n")
    elif fmt == "text":
        header = [f"localdiff construct config: {json.dumps(config, default=str)}"]
        header += [f"{key}: {json.dumps(val, default=str)}" for key, val in extra.items() if key != "kind"]
        _emit(args, format_set_text(A, header))
    else:
        raise UsageError("construct emits text or json")
    return EXIT_OK


def _diffs(args) -> int:
    A = _load(args)
    prof = difference_set(A)
    sums = sum_set(A)
    report = {"n": len(A), "difference_count": prof.size, "sum_count": sums.size, "pairs": prof.total,
              "max_representations": prof.max_count()}
    if args.profile:
        report["profile"] = {str(d): c for d, c in prof.entries.items()}
    lines = [f"|A| = {len(A)}", f"|A-A| = {prof.size}", f"|A+A| = {sums.size}"]
    _report(args, report, lines)
    return EXIT_OK


def _energy(args) -> int:
    A = _load(args)
    rep = dumbbell_energy(A, args.moment, include_double=not args.no_double)
    report = {"energy": rep.to_dict()}
    lines = [f"{k} = {v}" for k, v in rep.to_dict().items()]
    if args.lemma_chain:
        lc = check_lemma_chain(A, allow_empty=args.allow_empty)
        report["lemma_chain"] = lc.to_dict()
        lines += [f"lemma_chain.{k} = {v}" for k, v in lc.to_dict().items()]
        if not lc.all_hold:
            _report(args, report, lines)
            return EXIT_INTERNAL
    _report(args, report, lines)
    return EXIT_OK


def _verify(args) -> int:
    A = _load(args)
    if args.check == "ap":
        wit = find_k_ap(A, args.k)
        report = {"k": args.k, "found": wit is not None, "witness": None if wit is None else [str(x) for x in wit]}
        _report(args, report, [f"k-AP: {report['witness']}"])
        return EXIT_VIOLATED if wit is not None else EXIT_OK
    if args.check == "small-doubling":
        if args.bound is None:
            raise UsageError("--bound is required for small-doubling")
        scan = small_doubling_subsets(A, args.k, args.bound, args.mode, args.budget, args.samples, args.seed)
        _report(args, scan.to_dict(), [f"witnesses = {len(scan)}", f"exhaustive = {scan.exhaustive}"])
        if scan.witnesses:
            return EXIT_VIOLATED
        return EXIT_OK if scan.exhaustive else EXIT_INCONCLUSIVE
    if args.ell is None:
        raise UsageError("--ell is required for the local check")
    rep = local_min_diffs(A, args.k, args.budget, args.samples, args.seed)
    verdict = rep.satisfies(args.ell)
    report = rep.to_dict()
    report["ell"] = args.ell
    report["holds"] = verdict
    lines = [f"min |A'-A'| over {args.k}-subsets = {rep.min_diffs}", f"exhaustive = {rep.exhaustive}",
             f"holds(ell={args.ell}) = {verdict}"]
    _report(args, report, lines)
    if verdict is None:
        return EXIT_INCONCLUSIVE
    return EXIT_OK if verdict else EXIT_VIOLATED


def _search(args) -> int:
    if args.n_range or args.ell_range:
        ns = _int_range(args.n_range) if args.n_range else ([args.n] if args.n else [])
        ells = _int_range(args.ell_range) if args.ell_range else ([args.ell] if args.ell else [])
        outs = g_table(ns, args.k, ells, args.max_span, args.checkpoint, threads=args.threads)
        fmt = args.format or "csv"
        if fmt == "csv":
            _emit(args, table_to_csv(outs, [f"localdiff search config: {json.dumps(_resolved(args))}"]))
        else:
            _report(args, {"rows": [o.to_dict() for o in outs]}, [str(o.to_row()) for o in outs])
        return EXIT_OK
    if args.n is None or args.ell is None:
        raise UsageError("search needs --n and --ell (or --n-range / --ell-range)")
    out = exact_g(args.n, args.k, args.ell, args.max_span, threads=args.threads)
    if (args.format or "json") == "csv":
        _emit(args, table_to_csv([out], [f"localdiff search config: {json.dumps(_resolved(args))}"]))
    else:
        _report(args, out.to_dict(), [f"g({out.n},{out.k},{out.ell}) = {out.value} ({out.caveat})",
                                      f"witness = {out.witness}"])
    return EXIT_OK


def _check(args) -> int:
    results = run_battery(args.seed)
    failed = [r for r in results if not r.passed and not r.finding]
    report = {"passed": not failed,
              "results": [{"name": r.name, "passed": r.passed, "finding": r.finding, "detail": r.detail}
                          for r in results]}
    _report(args, report, [r.line() for r in results])
    return EXIT_OK if not failed else EXIT_INTERNAL


COMMANDS = {
    "construct": _construct,
    "diffs": _diffs,
    "energy": _energy,
    "verify": _verify,
    "search": _search,
    "check": _check,
}


def main(argv: Optional[list[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except InvariantViolation as exc:
        print(f"localdiff: internal invariant failure: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except (UsageError, LocalDiffError, ValueError, KeyError, json.JSONDecodeError) as exc:
        print(f"localdiff: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())

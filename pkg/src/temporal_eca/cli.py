"""Command-line entry point: ``temporal-eca <subcommand> ...``."""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import time
from typing import Any, Sequence

from . import __version__, algebra, engine, reproduce, synthesis, universality
from .errors import DomainError
from .rulespace import as_rule, enumerate_families, family_of
from .temporal import parse

FORMATS = ("text", "json", "csv")
PROPERTIES = ("o", "i", "ii", "iii", "iv")
LONG_RUN_ENV = "TEMPORAL_ECA_LONG_RUN"
TABLE_FAMILIES = (0, 2, 3, 9, 22, 27, 57, 128, 136, 140, 160)


class UsageError(Exception):
    pass


def _jsonable(value: Any) -> Any:
    if isinstance(value, bool) or value is None or isinstance(value, (float, str)):
        return value
    if isinstance(value, int):
        return str(value) if abs(value) >= 1 << 53 else value
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple, set, frozenset)):
        items = sorted(value) if isinstance(value, (set, frozenset)) else value
        return [_jsonable(v) for v in items]
    return str(value)


def _emit(args, record: dict, text: str | None = None, rows: list[dict] | None = None) -> None:
    if getattr(args, "timing", False):
        record["wall_time"] = round(time.perf_counter() - args._start, 6)
    if args.format == "json":
        body = {"command": args.command, "version": __version__, **record}
        print(json.dumps(_jsonable(body), indent=2))
    elif args.format == "csv":
        rows = rows if rows is not None else [record]
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
        writer.writeheader()
        for row in rows:
            writer.writerow({k: " ".join(map(str, v)) if isinstance(v, (list, tuple)) else v
                             for k, v in row.items()})
        sys.stdout.write(buf.getvalue())
    else:
        print(text if text is not None else "\n".join(f"{k}: {v}" for k, v in record.items()))


def _need(args, *names: str) -> None:
    for name in names:
        if getattr(args, name.replace("-", "_")) is None:
            raise UsageError(f"--{name} is required for {args.command}")


def _rules(args) -> list:
    _need(args, "rule")
    rules = [parse(r) for r in args.rule]
    n = rules[0].n
    if args.n is not None and args.n != n:
        raise UsageError(f"--n {args.n} does not match rule length {n}")
    return rules


def _function(args) -> synthesis.FunctionTable:
    _need(args, "function")
    text = args.function.strip()
    if text.startswith("["):
        f = synthesis.FunctionTable.from_values(json.loads(text))
        if args.n is not None and args.n != f.n:
            raise UsageError(f"--n {args.n} does not match table length {1 << f.n}")
        return f
    _need(args, "n")
    return synthesis.builtin(text, args.n, args.k, args.sub_mode)


def cmd_simulate(args) -> int:
    _need(args, "eca", "input")
    rules = _rules(args)
    n = rules[0].n
    start = engine.parse_config(args.input, n)
    if len(rules) == 1:
        out = engine.iterate(args.eca, rules[0], start, args.tau)
    else:
        out = start
        for _ in range(args.tau):
            out = engine.apply_sequence(args.eca, rules, out)
    record = {"eca": args.eca, "n": n, "rules": [r.symbols for r in rules],
              "input": str(start), "tau": args.tau, "output": str(out), "value": out.value}
    _emit(args, record, str(out))
    return 0


def cmd_map(args) -> int:
    _need(args, "eca")
    rules = _rules(args)
    n = rules[0].n
    smap = engine.sequence_map(args.eca, rules, n)
    table = smap.tolist()
    record = {"eca": args.eca, "n": n, "rules": [r.symbols for r in rules], "table": table}
    text = "\n".join(f"{v:0{n}b} -> {w:0{n}b}" for v, w in enumerate(table))
    rows = [{"v": v, "w": w} for v, w in enumerate(table)]
    _emit(args, record, text, rows)
    return 0


def cmd_orbit(args) -> int:
    _need(args, "eca", "input")
    rules = _rules(args)
    n = rules[0].n
    start = engine.parse_config(args.input, n)
    info = engine.orbit(engine.sequence_map(args.eca, rules, n), start.value)
    record = {"eca": args.eca, "n": n, "rules": [r.symbols for r in rules], "input": str(start),
              "preperiod": info.preperiod, "period": info.period, "visited": sorted(info.visited)}
    _emit(args, record, f"preperiod {info.preperiod} period {info.period} visited {len(info.visited)}")
    return 0


def cmd_property(args) -> int:
    sync = not args.exclude_sync
    if args.table:
        ecas = [int(x) for x in args.ecas.split(",")] if args.ecas else list(TABLE_FAMILIES)
        ns = [int(x) for x in args.ns.split(",")] if args.ns else ([args.n] if args.n else [4, 8])
        rows = [{"family": r.family, "n": r.n, "o_max": r.o_max, "i_min": r.i_min}
                for r in universality.universality_table(ecas, ns, include_sync=sync,
                                                         include_start=args.include_start)]
        text = "\n".join(f"{r['family']} n={r['n']} o_max={r['o_max']} i_min={r['i_min']}" for r in rows)
        _emit(args, {"rows": rows}, text, rows)
        return 0
    _need(args, "eca", "n", "which")
    eca, n = args.eca, args.n
    record: dict[str, Any] = {"eca": eca, "n": n, "property": args.which}
    if args.which in ("o", "i"):
        fn = universality.property_o if args.which == "o" else universality.property_i
        rep = fn(eca, n, include_sync=sync, include_start=args.include_start)
        record.update(value=rep.value, witness=rep.witness, holds=rep.holds)
    elif args.which == "ii":
        if args.input is not None:
            v = engine.parse_config(args.input, n).value
            tau = universality.property_ii_tau(eca, n, v, args.tau_max, include_sync=sync)
            record.update(value=tau, witness=v)
        else:
            rep = universality.property_ii(eca, n, args.tau_max, include_sync=sync)
            per = list(rep.per_source)
            witness = per.index(rep.max_tau) if rep.max_tau is not None else None
            record.update(value=rep.max_tau, witness=witness, per_source=per)
    elif args.which == "iii":
        record.update(value=universality.property_iii_tau(eca, n, args.tau_max, include_sync=sync),
                      witness=None)
    else:
        certs = [universality.period_certificate(eca, n, v, include_sync=sync) for v in range(1 << n)]
        record.update(value=all(c.verified for c in certs), witness=None,
                      per=[c.per for c in certs])
    record["tau_max"] = args.tau_max
    _emit(args, record, "none" if record["value"] is None else str(record["value"]))
    return 0


def cmd_group(args) -> int:
    _need(args, "eca", "n")
    rep = algebra.rule_group(args.eca, args.n, args.generators, args.degree_cap)
    record = {"eca": args.eca, "n": args.n, "generator_set": args.generators,
              "generator_count": rep.generator_count, "order": str(rep.order),
              "classification": rep.classification}
    if args.triples:
        record["triple"] = algebra.minimal_generating_triples(
            args.eca, args.n, degree_cap=args.degree_cap, generator_set=args.generators)
    _emit(args, record, f"{rep.order} ({rep.classification})")
    return 0


def cmd_profile(args) -> int:
    if args.function is not None:
        table = _function(args).table
        n = int(table.size).bit_length() - 1
        source: dict[str, Any] = {"function": args.function}
    else:
        _need(args, "eca")
        rules = _rules(args)
        n = rules[0].n
        table = engine.sequence_map(args.eca, rules, n).table
        source = {"eca": args.eca, "rules": [r.symbols for r in rules]}
    prof = algebra.multiplicity_profile(table)
    info = algebra.permutation_info(table)
    record = {**source, "n": n, "at": prof.at, "sharp": prof.sharp, "image_size": prof.image_size,
              "pair_sum": prof.pair_sum, "bijective": info.bijective, "parity": info.parity}
    text = " ".join(f"@({k})={v}" for k, v in prof.at.items())
    if info.bijective:
        text += f" bijective {info.parity}"
    _emit(args, record, text)
    return 0


def cmd_families(args) -> int:
    fams = [family_of(args.eca)] if args.eca is not None else list(enumerate_families())
    rows = [{"canonical": f.canonical.code, "members": sorted(f.members)} for f in fams]
    text = "\n".join("{" + ", ".join(map(str, r["members"])) + "}" for r in rows)
    _emit(args, {"families": rows}, text, rows)
    return 0


def cmd_check_representable(args) -> int:
    f = _function(args)
    verdict = synthesis.representable(f)
    record = verdict.as_dict()
    if verdict.representable and not f.is_identity and f.n >= 4 and verdict.slack is not None:
        plan = synthesis.merge_plan(f)
        record.update(applications=plan.applications, batched_applications=plan.batched_applications)
    _emit(args, record, f"{verdict.case} representable={verdict.representable}")
    return 0


def cmd_synthesize(args) -> int:
    f = _function(args)
    cert = synthesis.synthesize(f, args.eca if args.eca is not None else 57,
                                depth=args.depth, frontier_cap=args.frontier_cap)
    record = {"eca": cert.eca.code, "n": f.n, "length": len(cert.rules), "rules": cert.words,
              "verified": synthesis.verify_certificate(cert)}
    _emit(args, record, json.dumps(cert.words))
    return 0


def cmd_verify_paper(args) -> int:
    checks = reproduce.run_checks(args.scope, args.long_run)
    record = {"scope": args.scope, "long_run": args.long_run,
              "checks": [c.as_dict() for c in checks]}
    rows = [{k: v for k, v in c.as_dict().items() if k not in ("expected", "computed")} for c in checks]
    _emit(args, record, "\n".join(c.line() for c in checks), rows)
    return 0 if all(c.passed or c.skipped for c in checks) else 1


COMMANDS = {
    "simulate": cmd_simulate, "map": cmd_map, "orbit": cmd_orbit, "property": cmd_property,
    "group": cmd_group, "profile": cmd_profile, "families": cmd_families,
    "check-representable": cmd_check_representable, "synthesize": cmd_synthesize,
    "verify-paper": cmd_verify_paper,
}


def _eca(text: str) -> int:
    try:
        return as_rule(int(text)).code
    except (ValueError, DomainError) as exc:
        raise argparse.ArgumentTypeError(f"invalid Wolfram code {text!r}") from exc


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return value


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=FORMATS, default="text")
    common.add_argument("--threads", type=_positive, help=f"worker threads (default from ${engine.THREADS_ENV})")
    common.add_argument("--timing", action="store_true", help="add wall time to the output record")
    common.add_argument("--long-run", action="store_true",
                        default=os.environ.get(LONG_RUN_ENV, "") not in ("", "0"))

    parser = argparse.ArgumentParser(prog="temporal-eca",
                                     description="Asynchronous elementary CA with temporal update rules.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name: str, help_text: str) -> argparse.ArgumentParser:
        return sub.add_parser(name, parents=[common], help=help_text)

    def rule_args(p):
        p.add_argument("--eca", type=_eca)
        p.add_argument("--rule", action="append", help="temporal word; repeat for a sequence ('=' for simultaneous)")
        p.add_argument("--n", type=int)

    def function_args(p):
        p.add_argument("--function", help="builtin name or JSON array of 2^n values")
        p.add_argument("--n", type=int)
        p.add_argument("--k", type=int)
        p.add_argument("--sub-mode", choices=synthesis.SUB_MODES, default="literal")

    p = add("simulate", "run sweeps from one configuration")
    rule_args(p)
    p.add_argument("--input", help="bit string (cell 0 first) or decimal value")
    p.add_argument("--tau", type=int, default=1)

    p = add("map", "print the state map of a rule or rule sequence")
    rule_args(p)

    p = add("orbit", "preperiod and period of one configuration")
    rule_args(p)
    p.add_argument("--input")

    p = add("property", "pattern-universality properties")
    p.add_argument("--eca", type=_eca)
    p.add_argument("--n", type=int)
    p.add_argument("--which", choices=PROPERTIES)
    p.add_argument("--input", help="single source for --which ii")
    p.add_argument("--tau-max", type=_positive, default=universality.DEFAULT_TAU_MAX)
    p.add_argument("--exclude-sync", action="store_true", help="drop the all-simultaneous rule")
    p.add_argument("--include-start", action="store_true", help="count tau = 0 in reach sets")
    p.add_argument("--table", action="store_true", help="family table of (o) max and (i) min counts")
    p.add_argument("--ecas", help="comma-separated codes for --table")
    p.add_argument("--ns", help="comma-separated cell counts for --table")

    p = add("group", "order of the group generated by bijective rule maps")
    p.add_argument("--eca", type=_eca)
    p.add_argument("--n", type=int)
    p.add_argument("--generators", choices=algebra.GENERATOR_SETS, default="bijective")
    p.add_argument("--degree-cap", type=_positive, default=algebra.DEFAULT_DEGREE_CAP)
    p.add_argument("--triples", action="store_true", help="also search a 3-rule generating subset")

    p = add("profile", "multiplicity profile of a rule sequence or function")
    rule_args(p)
    p.add_argument("--function")
    p.add_argument("--k", type=int)
    p.add_argument("--sub-mode", choices=synthesis.SUB_MODES, default="literal")

    p = add("families", "symmetry families of Wolfram codes")
    p.add_argument("--eca", type=_eca)

    p = add("check-representable", "representability verdict for a target function")
    function_args(p)

    p = add("synthesize", "find a rule sequence realising a function")
    function_args(p)
    p.add_argument("--eca", type=_eca)
    p.add_argument("--depth", type=_positive, default=synthesis.DEFAULT_DEPTH)
    p.add_argument("--frontier-cap", type=_positive, default=synthesis.DEFAULT_FRONTIER_CAP)

    p = add("verify-paper", "run the reproduction checks")
    p.add_argument("--scope", choices=reproduce.SCOPES, default="fast")
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    args._start = time.perf_counter()
    if args.threads:
        os.environ[engine.THREADS_ENV] = str(args.threads)
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"{parser.prog} {args.command}: error: {exc}", file=sys.stderr)
        return 2
    except (DomainError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

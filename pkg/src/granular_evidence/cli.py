"""Command-line interface.

Exit codes: 0 computed (a "not combinable" verdict is a result, not an
error), 2 invalid input, 3 total conflict in ``combine``, 4 a configured
size limit was exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Optional, Sequence

from . import ballbox, combinability, combination, query
from .core import GranularDistribution, distribution_from_dict, format_mass, parse_mass
from .errors import GranularError, LimitExceeded, TotalConflict
from .relation import GranularRelation, conflict_free, relation_from_dict, summarize

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_CONFLICT = 3
EXIT_LIMIT = 4


class InputError(Exception):
    pass


def _load_json(path: str):
    try:
        return json.loads(Path(path).read_text())
    except FileNotFoundError:
        raise InputError(f"{path}: file not found") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON: {exc}") from None


def _load_any(path: str):
    data = _load_json(path)
    try:
        if isinstance(data, dict) and "rows" in data:
            return relation_from_dict(data)
        return distribution_from_dict(data)
    except GranularError as exc:
        raise InputError(f"{path}: {type(exc).__name__}: {exc}") from None


def _load_distribution(path: str) -> GranularDistribution:
    obj = _load_any(path)
    if not isinstance(obj, GranularDistribution):
        raise InputError(f"{path}: expected a distribution, got a relation")
    return obj


def _load_relation(path: str) -> GranularRelation:
    obj = _load_any(path)
    if not isinstance(obj, GranularRelation):
        raise InputError(f"{path}: expected a relation, got a distribution")
    return obj


def _labels(text: Optional[str]) -> list[str]:
    if not text:
        return []
    return [t.strip() for t in text.split(",") if t.strip()]


def _pair(text: str, flag: str) -> tuple[str, str]:
    parts = _labels(text)
    if len(parts) != 2:
        raise InputError(f"{flag} expects two comma-separated values, got {text!r}")
    return parts[0], parts[1]


def _fmt_set(labels) -> str:
    return "{" + ",".join(labels) + "}"


def _table(headers: Sequence[str], rows: Sequence[Sequence[object]]) -> str:
    cells = [list(map(str, headers))] + [[str(c) for c in r] for r in rows]
    widths = [max(len(r[k]) for r in cells) for k in range(len(headers))]
    lines = ["  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() for r in cells]
    lines.insert(1, "  ".join("-" * w for w in widths))
    return "\n".join(lines)


def _dist_table(dist_dict: dict) -> str:
    return _table(["set", "mass"], [(_fmt_set(f["set"]), f["mass"]) for f in dist_dict["focal"]])


def _emit(args, payload: dict, table: str) -> None:
    if args.format == "json":
        print(json.dumps(payload, indent=2))
    else:
        print(table)


def cmd_summarize(args) -> int:
    rel = _load_relation(args.relation)
    try:
        dist = summarize(rel, args.column)
    except GranularError as exc:
        raise InputError(f"{args.relation}: {exc}") from None
    payload = dist.to_dict()
    _emit(args, payload, _dist_table(payload))
    return EXIT_OK


def cmd_query(args) -> int:
    obj = _load_any(args.input)
    q = _labels(args.query)
    try:
        if isinstance(obj, GranularRelation):
            if not args.column:
                raise InputError("--column is required for a relation input")
            res = query.necessity_possibility_rel(obj, args.column, q)
        else:
            if args.counts:
                raise InputError("--counts needs a relation input (distributions carry no counts)")
            res = query.query_distribution(obj, q)
    except GranularError as exc:
        raise InputError(f"{args.input}: {exc}") from None
    payload = {
        "query": q,
        "necessity": format_mass(res.necessity),
        "possibility": format_mass(res.possibility),
    }
    rows = [("necessity", payload["necessity"]), ("possibility", payload["possibility"])]
    if args.counts:
        payload.update(certain_count=res.certain_count, possible_count=res.possible_count, total=res.total)
        rows += [("certain_count", res.certain_count), ("possible_count", res.possible_count), ("total", res.total)]
    _emit(args, payload, f"Q = {_fmt_set(q)}\n" + _table(["measure", "value"], rows))
    return EXIT_OK


def cmd_conflict_free(args) -> int:
    rel = _load_relation(args.relation)
    x, y = _pair(args.columns, "--columns")
    try:
        report = conflict_free(rel, x, y)
    except GranularError as exc:
        raise InputError(f"{args.relation}: {exc}") from None
    payload = {"conflict_free": report.ok, "offending": list(report.offending)}
    text = "conflict-free" if report.ok else "offending rows: " + ", ".join(report.offending)
    _emit(args, payload, text)
    return EXIT_OK


def _result_table(res_dict: dict) -> str:
    un = _table(["set", "mass"], [(_fmt_set(f["set"]), f["mass"]) for f in res_dict["unnormalized"]])
    return (
        f"conflict K = {res_dict['conflict']}\n\nunnormalized\n{un}\n\nnormalized\n"
        + _dist_table(res_dict["normalized"])
    )


def cmd_combine(args) -> int:
    dists = [_load_distribution(p) for p in args.inputs]
    try:
        res = combination.combine_n(dists)
    except TotalConflict as exc:
        payload = {
            "error": "TotalConflict",
            "conflict": format_mass(exc.conflict),
            "unnormalized": [{"set": list(g.labels), "mass": format_mass(m)} for g, m in exc.unnormalized],
            "step": exc.step,
        }
        print(json.dumps(payload, indent=2))
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFLICT
    except GranularError as exc:
        raise InputError(str(exc)) from None
    payload = res.to_dict()
    _emit(args, payload, _result_table(payload))
    return EXIT_OK


def cmd_check(args) -> int:
    g = _load_distribution(args.g)
    h = _load_distribution(args.h)
    try:
        result = combinability.combinable(g, h)
        k = combination.conflict_mass(g, h)
        suff = combinability.sufficient_noncombinable(g, h)
    except GranularError as exc:
        raise InputError(str(exc)) from None
    payload: dict = {"combinable": result.feasible, "conflict": format_mass(k)}
    if result.feasible:
        payload["joint"] = [[i, j, format_mass(r)] for i, j, r in result.joint.entries()]
        payload["witness_rows"] = len(result.witness)
        if args.witness_out:
            Path(args.witness_out).write_text(json.dumps(result.witness.to_dict(), indent=2))
    else:
        payload["certificate"] = result.certificate.to_dict()
    payload["sufficient_condition"] = (
        {"triggered": True, "side": suff.side, "index": suff.index} if suff.triggered else {"triggered": False}
    )
    if args.oracle:
        oracle = combinability.gale_oracle(g, h, witness=False)
        payload["oracle_combinable"] = oracle.feasible
        payload["oracle_agrees"] = oracle.feasible == result.feasible

    lines = [f"combinable: {'yes' if result.feasible else 'no'}", f"conflict K = {payload['conflict']}"]
    if result.feasible:
        lines.append(_table(["G focal", "H focal", "joint mass"], [
            (_fmt_set(g.focal[i][0].labels), _fmt_set(h.focal[j][0].labels), format_mass(r))
            for i, j, r in result.joint.entries()
        ]))
        lines.append(f"witness relation: {payload['witness_rows']} rows")
    else:
        c = result.certificate
        lines.append(
            f"violating set on {c.side}: "
            + ", ".join(_fmt_set(g.focal[i][0].labels) for i in c.indices)
            + f"  supply {format_mass(c.supply)} > reachable demand {format_mass(c.reachable_demand)}"
        )
    if args.oracle:
        lines.append(f"oracle agrees: {payload['oracle_agrees']}")
    _emit(args, payload, "\n".join(lines))
    return EXIT_OK


def cmd_simulate(args) -> int:
    dists = [_load_distribution(p) for p in args.inputs]
    if len(dists) > 2:
        raise InputError("simulate takes one distribution (with --query) or two (combination)")
    creds = None
    if args.discount:
        parts = _labels(args.discount)
        try:
            values = [parse_mass(p) for p in parts]
        except GranularError as exc:
            raise InputError(f"--discount: {exc}") from None
        if len(values) == 1 and len(dists) == 1:
            values.append(values[0])
        if len(values) != 2:
            raise InputError("--discount expects aG,aH")
        try:
            creds = tuple(combination.Credibility(v) for v in values)
        except ValueError as exc:
            raise InputError(f"--discount: {exc}") from None
    try:
        cfg = ballbox.SimConfig(samples=args.samples, seed=args.seed, credibilities=creds, workers=args.workers)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    try:
        if len(dists) == 1:
            if args.query is None:
                raise InputError("--query is required when simulating a single distribution")
            report = ballbox.estimate_query(dists[0], _labels(args.query), cfg)
        else:
            report = ballbox.simulate_combination(dists[0], dists[1], cfg)
    except GranularError as exc:
        raise InputError(str(exc)) from None
    payload = report.to_dict()
    if report.rejected is None:
        table = _table(["estimate", "value"], [
            ("belief", f"{report.empirical_belief:.6f}"),
            ("possibility", f"{report.empirical_possibility:.6f}"),
            ("samples", report.samples),
        ])
    else:
        table = (
            f"conflict rate {report.empirical_conflict_rate:.6f} "
            f"({report.rejected} of {report.samples} rejected)\n"
            + _table(["set", "frequency"], [
                (_fmt_set(g.labels), f"{f:.6f}") for g, f in report.empirical_combined.items()
            ])
        )
        if report.all_rejected:
            print("warning: all sampled pairs conflict (AllRejected)", file=sys.stderr)
    _emit(args, payload, table)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "table"), default="json")

    parser = argparse.ArgumentParser(
        prog="granular-ds",
        description="Granular (relational) Dempster-Shafer evidence: queries, combination, combinability.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("summarize", parents=[common], help="summarize a relation column into a distribution")
    p.add_argument("relation")
    p.add_argument("--column", required=True)
    p.set_defaults(func=cmd_summarize)

    p = sub.add_parser("query", parents=[common], help="necessity/possibility (belief/plausibility) of a query")
    p.add_argument("input", help="relation or distribution JSON")
    p.add_argument("--query", required=True, help="comma-separated labels; empty string for the empty set")
    p.add_argument("--column")
    p.add_argument("--counts", action="store_true", help="also print raw individual counts")
    p.set_defaults(func=cmd_query)

    p = sub.add_parser("conflict-free", parents=[common], help="test a relation's two columns for conflict")
    p.add_argument("relation")
    p.add_argument("--columns", required=True, help="X,Y")
    p.set_defaults(func=cmd_conflict_free)

    p = sub.add_parser("combine", parents=[common], help="Dempster's rule over one or more distributions")
    p.add_argument("inputs", nargs="+")
    p.set_defaults(func=cmd_combine)

    p = sub.add_parser("check", parents=[common], help="decide combinability of two distributions")
    p.add_argument("g")
    p.add_argument("h")
    p.add_argument("--oracle", action="store_true", help="cross-check with the subset-enumeration oracle")
    p.add_argument("--witness-out", help="write the witness parent relation here when combinable")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("simulate", parents=[common], help="ball-box Monte Carlo estimates")
    p.add_argument("inputs", nargs="+", help="one distribution (with --query) or two (combination)")
    p.add_argument("--samples", type=int, default=200_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--discount", help="credibilities aG,aH")
    p.add_argument("--query")
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_simulate)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except LimitExceeded as exc:
        print(f"error: limit exceeded: {exc}", file=sys.stderr)
        return EXIT_LIMIT


if __name__ == "__main__":
    sys.exit(main())

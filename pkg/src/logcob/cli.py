"""``logcob`` command line entry point."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Any, Sequence

from . import cobordism, dtseries, logchern, varieties
from .dtseries import format_rational
from .errors import LogcobError
from .logchern import Partition


class ParseError(LogcobError):
    pass


def load_pair(source: str) -> varieties.SncPair:
    if source.startswith("builtin:"):
        return varieties.builtin(source[len("builtin:"):])
    path = Path(source)
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except OSError as exc:
        raise ParseError(f"cannot read {source}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise ParseError(f"{source} is not valid JSON: {exc.msg} (line {exc.lineno})") from None
    try:
        return varieties.pair_from_json(data)
    except (TypeError, AttributeError, ValueError) as exc:
        raise ParseError(f"{source}: malformed descriptor ({exc})") from None


def _partition(text: str) -> Partition:
    try:
        return Partition.parse(text)
    except ValueError as exc:
        raise ParseError(f"bad partition {text!r}: {exc}") from None


def _table(rows: Sequence[Sequence[str]]) -> list[str]:
    widths = [max(len(r[i]) for r in rows) for i in range(len(rows[0]))]
    return ["  ".join(cell.ljust(w) for cell, w in zip(r, widths)).rstrip() for r in rows]


# ---------------------------------------------------------------------------
# Commands: each returns (exit status, text lines, json payload)
# ---------------------------------------------------------------------------


def cmd_nu(args):
    p = load_pair(args.pair)
    a, b = logchern.nu_tensor(p), logchern.nu_closed_form(p)
    value = logchern.nu(p)
    payload = {"value": format_rational(value), "routes": {"tensor": format_rational(a), "c3-c1c2": format_rational(b)}}
    return 0, [format_rational(value)], payload


def cmd_clambda(args):
    p = load_pair(args.pair)
    lam = _partition(args.lam) if args.lam else None
    if lam is None:
        values = {str(l): logchern.c_lambda(p, l) for l in logchern.partitions(p.dimension)}
        lines = [f"c{k} = {format_rational(v)}" for k, v in values.items()]
        return 0, lines, {"values": {k: format_rational(v) for k, v in values.items()}}
    value = logchern.c_lambda(p, lam)
    return 0, [format_rational(value)], {"lambda": str(lam), "value": format_rational(value)}


def cmd_alpha(args):
    p = load_pair(args.pair)
    lam = _partition(args.lam or "")
    value = logchern.alpha(p, args.i, args.k, lam)
    return 0, [format_rational(value)], {"i": args.i, "k": args.k, "lambda": str(lam), "value": format_rational(value)}


def cmd_zseries(args):
    p = load_pair(args.pair)
    s = dtseries.z_series(p, args.order, args.sign_convention)
    payload = {
        "nu": format_rational(logchern.nu(p)),
        "sign_convention": args.sign_convention,
        "coefficients": [format_rational(c) for c in s.coeffs],
    }
    return 0, [str(s)], payload


def cmd_macmahon(args):
    s = dtseries.macmahon(args.order)
    payload: dict[str, Any] = {"coefficients": [format_rational(c) for c in s.coeffs]}
    line = str(s)
    status = 0
    if args.verify_oracle:
        upto = min(args.order, dtseries.ORACLE_LIMIT)
        bad = [n for n in range(upto + 1) if dtseries.plane_partition_count(n) != s[n]]
        ok = not bad
        note = "ok" if ok else f"mismatch at n={bad}"
        if args.order > upto:
            note += f", checked up to q^{upto}"
        line += f" (oracle: {note})"
        payload["oracle"] = {"ok": ok, "checked_up_to": upto, "mismatches": bad}
        status = 0 if ok else 1
    return status, [line], payload


def _relation_lines(rel: cobordism.Relation) -> list[str]:
    lines = [f"relation ({rel.provenance}):", f"  lhs: {rel.lhs}"]
    for j, (c, p) in enumerate(rel.rhs):
        lead = "  rhs: " if j == 0 else "     + "
        lines.append(f"{lead}{format_rational(c)} * {p}")
    return lines


def cmd_relation(args):
    p = load_pair(args.pair)
    rel = cobordism.normal_cone_relation(p, args.component)
    lines = _relation_lines(rel)
    payload: dict[str, Any] = {"relation": rel.to_json()}
    status = 0
    if args.check:
        report = cobordism.check_relation(rel)
        rows = [("invariant", "lhs", "rhs", "status")]
        rows += [(r.invariant, format_rational(r.lhs), format_rational(r.rhs), "pass" if r.ok else "FAIL") for r in report.rows]
        lines += _table(rows)
        lines.append(f"overall: {'pass' if report.passed else 'FAIL'}")
        payload["check"] = {
            "passed": report.passed,
            "rows": [
                {"invariant": r.invariant, "lhs": format_rational(r.lhs), "rhs": format_rational(r.rhs), "ok": r.ok}
                for r in report.rows
            ],
        }
        status = 0 if report.passed else 1
    return status, lines, payload


def cmd_decompose(args):
    p = load_pair(args.pair)
    d = cobordism.decompose3(p, basis=args.basis)
    lines = ["generator invariant matrix (rows: invariants, columns: generators):"]
    rows = [("",) + d.generators]
    rows += [(name,) + tuple(format_rational(x) for x in row) for name, row in zip(d.invariant_names, d.matrix)]
    lines += ["  " + line for line in _table(rows)]
    lines.append(f"rank: {d.rank}")
    lines.append("coefficients:")
    lines += [f"  {g}: {format_rational(c)}" for g, c in zip(d.generators, d.coefficients)]
    lines.append("audit:")
    rows = [("invariant", "direct", "from generators", "status")]
    rows += [(r.invariant, format_rational(r.lhs), format_rational(r.rhs), "pass" if r.ok else "FAIL") for r in d.residuals]
    lines += ["  " + line for line in _table(rows)]
    lines.append(f"  Z series to q^{d.z_order}: {'pass' if d.z_ok else 'FAIL'}")
    payload = {
        "basis": args.basis,
        "generators": list(d.generators),
        "coefficients": {g: format_rational(c) for g, c in zip(d.generators, d.coefficients)},
        "invariants": list(d.invariant_names),
        "matrix": [[format_rational(x) for x in row] for row in d.matrix],
        "rank": d.rank,
        "audit": [
            {"invariant": r.invariant, "direct": format_rational(r.lhs), "reconstructed": format_rational(r.rhs), "ok": r.ok}
            for r in d.residuals
        ],
        "z_ok": d.z_ok,
        "verified": d.verified,
    }
    return (0 if d.verified else 1), lines, payload


def cmd_validate(args):
    p = load_pair(args.pair)
    results = varieties.validate_pair(p)
    ok = all(r.ok for r in results)
    lines = [f"{r.component}: {r.check}: {'ok' if r.ok else 'FAIL'}{' (' + r.detail + ')' if r.detail else ''}" for r in results]
    lines.append(f"valid: {'yes' if ok else 'no'}")
    payload = {
        "valid": ok,
        "checks": [{"component": r.component, "check": r.check, "ok": r.ok, "detail": r.detail} for r in results],
    }
    return (0 if ok else 1), lines, payload


def cmd_list_builtins(args):
    table = varieties.builtin_pairs()
    lines = [f"{name}: {p}" for name, p in table.items()]
    return 0, lines, {"builtins": {name: str(p) for name, p in table.items()}}


def cmd_show(args):
    p = load_pair(args.pair)
    data = varieties.pair_to_json(p)
    return 0, [json.dumps(data, indent=2, sort_keys=True)], {"pair": data}


COMMANDS = {
    "nu": cmd_nu,
    "clambda": cmd_clambda,
    "alpha": cmd_alpha,
    "zseries": cmd_zseries,
    "macmahon": cmd_macmahon,
    "relation": cmd_relation,
    "decompose": cmd_decompose,
    "validate": cmd_validate,
    "list-builtins": cmd_list_builtins,
    "show": cmd_show,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit machine-readable JSON")
    pair = argparse.ArgumentParser(add_help=False)
    pair.add_argument("--pair", required=True, help="builtin:NAME or a JSON descriptor file")

    parser = argparse.ArgumentParser(prog="logcob", description="Exact log Chern numbers, relations and Z series.")
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("nu", parents=[common, pair], help="integral of c3(T^log x K^log)")
    p = sub.add_parser("clambda", parents=[common, pair], help="log Chern numbers")
    p.add_argument("--lambda", dest="lam", help="partition such as 2,1 (all partitions if omitted)")
    p = sub.add_parser("alpha", parents=[common, pair], help="stratum invariant")
    p.add_argument("--i", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--lambda", dest="lam", default="", help="partition, empty for the empty partition")
    p = sub.add_parser("zseries", parents=[common, pair], help="degree-zero series M(-q)^nu")
    p.add_argument("--order", type=int, default=dtseries.DEFAULT_ORDER)
    p.add_argument("--sign-convention", choices=["minus-q", "plus-q"], default="minus-q")
    p = sub.add_parser("macmahon", parents=[common], help="MacMahon function coefficients")
    p.add_argument("--order", type=int, default=dtseries.DEFAULT_ORDER)
    p.add_argument("--verify-oracle", action="store_true", help="compare with plane partition enumeration")
    p = sub.add_parser("relation", parents=[common, pair], help="normal cone relation for one component")
    p.add_argument("--component", required=True)
    p.add_argument("--check", action="store_true", help="check additivity of every invariant")
    p = sub.add_parser("decompose", parents=[common, pair], help="decompose a threefold pair over the generators")
    p.add_argument("--basis", choices=sorted(cobordism.GENERATORS), default="standard")
    sub.add_parser("validate", parents=[common, pair], help="check restriction maps of a pair")
    sub.add_parser("list-builtins", parents=[common], help="list the builtin pairs")
    sub.add_parser("show", parents=[common, pair], help="print a pair as JSON")
    return parser


def run(argv: Sequence[str] | None = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    args = build_parser().parse_args(argv)
    try:
        status, lines, payload = COMMANDS[args.command](args)
    except LogcobError as exc:
        info = {"type": exc.kind, "module": exc.module, "message": str(exc)}
        if args.json:
            print(json.dumps({"command": args.command, "error": info}, sort_keys=True), file=out)
        else:
            print(f"error [{exc.module}] {exc.kind}: {exc}", file=err)
        return 1
    if args.json:
        body = {"command": args.command, **payload}
        if hasattr(args, "pair"):
            body["pair_source"] = args.pair
        print(json.dumps(body, sort_keys=True), file=out)
    else:
        for line in lines:
            print(line, file=out)
    return status


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()

"""Command-line interface: ``codegraphs <command> [options] <file>``."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Sequence

from .analysis import analyze, tail_biting_partition
from .builders import SpannedGenerator, generator_realization, parity_check_realization, product_trellis
from .duality import dualize
from .errors import CodeGraphError, DocumentError, InvalidRealizationError, PreconditionError
from .io import dumps_canonical, export_dot, parse, serialize, to_document
from .linalg import MatrixGF, PrimeField
from .realization import Realization, drop_trivial_states
from .reduction import minimize_cycle_free, reduce_trim_proper, state_space_oracle

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_PRECONDITION = 2
EXIT_USAGE = 64


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # noqa: D401 - argparse hook
        raise _UsageError(f"{self.format_usage()}{self.prog}: error: {message}")


def _global_flags(parser: argparse.ArgumentParser, suppress: bool) -> None:
    default = argparse.SUPPRESS if suppress else None
    parser.add_argument("--field", type=int, default=default, metavar="P", help="reinterpret the document over GF(P)")
    parser.add_argument(
        "--drop-trivial-states", action="store_true", default=argparse.SUPPRESS if suppress else False,
        help="delete zero-dimensional states after loading",
    )
    parser.add_argument(
        "--explicit-inverters", action="store_true", default=argparse.SUPPRESS if suppress else False,
        help="show dual sign inverters as separate constraints",
    )
    parser.add_argument(
        "--json", action="store_true", default=argparse.SUPPRESS if suppress else False,
        help="machine-readable output",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="codegraphs", description="Analyze and reduce normal linear realizations.")
    _global_flags(parser, suppress=False)
    common = argparse.ArgumentParser(add_help=False)
    _global_flags(common, suppress=True)
    sub = parser.add_subparsers(dest="command", metavar="command", parser_class=_Parser)
    sub.required = True

    def cmd(name: str, help_text: str, with_file: bool = True, with_out: bool = False):
        p = sub.add_parser(name, help=help_text, parents=[common])
        if with_file:
            p.add_argument("file", help="realization document (JSON)")
        if with_out:
            p.add_argument("-o", "--output", help="write the resulting realization here")
        return p

    cmd("analyze", "full analysis report")
    cmd("dualize", "dual realization", with_out=True)
    cmd("reduce", "trim and merge until trim and proper", with_out=True)
    cmd("minimize", "minimal realization of a cycle-free graph", with_out=True)
    cmd("behavior", "generator matrix of the full behavior")
    cmd("oracle", "minimal state dimension at every edge cut (cycle-free only)")
    cmd("export-dot", "normal graph in DOT")
    cmd("partition", "coset decomposition of a tail-biting trellis")
    b = cmd("build", "construct a realization", with_file=False, with_out=True)
    b.add_argument("kind", choices=["gen", "pc", "product"])
    b.add_argument("--matrix", help="JSON {field, rows} for gen/pc")
    b.add_argument("--spec", help="JSON {field, n, tail_biting, generators} for product")
    return parser


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise DocumentError(f"cannot read {path}: {exc.strerror}") from None


def _load(args) -> Realization:
    r = parse(_read(args.file), field_override=args.field)
    if args.drop_trivial_states:
        r = drop_trivial_states(r)
    return r


def _emit_realization(r: Realization, args, out) -> None:
    text = serialize(r)
    if getattr(args, "output", None):
        Path(args.output).write_text(text)
    else:
        out.write(text)


def _fmt_bool(v: bool) -> str:
    return "true" if v else "false"


def _cmd_analyze(args, out) -> None:
    rep = analyze(_load(args)).to_dict()
    if args.json:
        out.write(dumps_canonical(rep))
        return
    for key in ("observable", "controllable", "controllability_defect", "dim_behavior", "dim_code",
                "sum_dim_constraints", "sum_dim_states"):
        v = rep[key]
        out.write(f"{key}: {_fmt_bool(v) if isinstance(v, bool) else v}\n")
    out.write(f"unobservable_basis: {rep['unobservable_basis']}\n")
    for key in ("trim", "proper", "state_trim", "branch_trim"):
        flags = " ".join(f"{k}={_fmt_bool(v)}" for k, v in rep[key].items())
        out.write(f"{key}: {flags}\n")
    topo = rep["topology"]
    shape = "path" if topo["is_path"] else "cycle-free" if topo["is_cycle_free"] else \
        "single cycle" if topo["is_single_cycle"] else "cyclic"
    out.write(f"graph: {shape}\n")


def _steps_output(r_out: Realization, steps, args, out, kind: str) -> None:
    dims = {s.id: s.dim for s in r_out.states}
    if args.json:
        doc = {"command": kind, "steps": [s.to_dict() for s in steps], "state_dims": dims,
               "realization": to_document(r_out)}
        out.write(dumps_canonical(doc))
    else:
        for s in steps:
            out.write(f"{s}\n")
        out.write(f"steps: {len(steps)}\n")
        out.write("final dims: " + ",".join(str(d) for d in dims.values()) + "\n")
    if args.output:
        Path(args.output).write_text(serialize(r_out))


def _cmd_reduce(args, out) -> None:
    r_out, steps = reduce_trim_proper(_load(args))
    _steps_output(r_out, steps, args, out, "reduce")


def _cmd_minimize(args, out) -> None:
    r_out, steps = minimize_cycle_free(_load(args))
    _steps_output(r_out, steps, args, out, "minimize")


def _cmd_dualize(args, out) -> None:
    _emit_realization(dualize(_load(args), explicit_inverters=args.explicit_inverters), args, out)


def _cmd_behavior(args, out) -> None:
    r = _load(args)
    b = r.behavior
    labels = [f"{v}:{r.var_dims[v]}" for v in r.symbol_ids + r.state_ids]
    rows = b.code.generators.tolist()
    if args.json:
        out.write(dumps_canonical({"blocks": labels, "dim": b.dim, "generators": rows}))
        return
    out.write("blocks: " + " ".join(labels) + "\n")
    out.write(f"dim: {b.dim}\n")
    for row in rows:
        parts = r.structure.split(row)
        out.write(" | ".join("".join(str(x) for x in parts[v]) or "-" for v in r.symbol_ids + r.state_ids) + "\n")


def _cmd_oracle(args, out) -> None:
    r = _load(args)
    code = r.behavior.symbols()
    dims = {s.id: state_space_oracle(code, r, s.id) for s in r.states}
    if args.json:
        out.write(dumps_canonical({"oracle_dims": dims, "state_dims": {s.id: s.dim for s in r.states}}))
        return
    for s in r.states:
        out.write(f"{s.id}: oracle {dims[s.id]}, current {s.dim}\n")


def _cmd_export_dot(args, out) -> None:
    out.write(export_dot(_load(args)))


def _cmd_partition(args, out) -> None:
    part = tail_biting_partition(_load(args)).to_dict()
    if args.json:
        out.write(dumps_canonical(part))
        return
    out.write(part["message"] + "\n")
    if "zero_subbehavior" in part:
        z = part["zero_subbehavior"]
        out.write(f"zero subbehavior: dim {z['dim']}\n")
        for w in z["members"] or []:
            out.write("  " + "".join(map(str, w)) + "\n")
        for c in part["cosets"]:
            out.write(f"coset alpha={c['alpha']}:\n")
            for w in c["members"] or [c["representative"]]:
                out.write("  " + "".join(map(str, w)) + "\n")


def _load_json(path: str) -> dict:
    text = _read(path)
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"{path}: syntax error at line {exc.lineno}, column {exc.colno}: {exc.msg}") from None


def _cmd_build(args, out) -> None:
    if args.kind in ("gen", "pc"):
        if not args.matrix:
            raise _UsageError("build gen|pc needs --matrix")
        doc = _load_json(args.matrix)
        try:
            p = args.field or doc["field"]
            m = MatrixGF(PrimeField(p), doc["rows"])
        except (KeyError, TypeError, ValueError) as exc:
            raise DocumentError(f"{args.matrix}: bad matrix document ({exc})") from None
        r = generator_realization(m) if args.kind == "gen" else parity_check_realization(m)
    else:
        if not args.spec:
            raise _UsageError("build product needs --spec")
        doc = _load_json(args.spec)
        try:
            gens = [
                SpannedGenerator(g["word"], g.get("start", 0), g.get("end", 0), g.get("whole_axis", False))
                for g in doc["generators"]
            ]
            r = product_trellis(doc["n"], gens, p=args.field or doc.get("field", 2),
                                tail_biting=doc.get("tail_biting", True))
        except (KeyError, TypeError) as exc:
            raise DocumentError(f"{args.spec}: bad product spec ({exc})") from None
    if args.drop_trivial_states:
        r = drop_trivial_states(r)
    _emit_realization(r, args, out)


COMMANDS = {
    "analyze": _cmd_analyze,
    "dualize": _cmd_dualize,
    "reduce": _cmd_reduce,
    "minimize": _cmd_minimize,
    "behavior": _cmd_behavior,
    "oracle": _cmd_oracle,
    "export-dot": _cmd_export_dot,
    "partition": _cmd_partition,
    "build": _cmd_build,
}


def main(argv: Sequence[str] | None = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        COMMANDS[args.command](args, out)
    except _UsageError as exc:
        err.write(f"{exc}\n")
        return EXIT_USAGE
    except (DocumentError, InvalidRealizationError) as exc:
        err.write(f"error: {exc}\n")
        return EXIT_INVALID
    except PreconditionError as exc:
        err.write(f"precondition failed: {exc}\n")
        return EXIT_PRECONDITION
    except CodeGraphError as exc:
        err.write(f"error: {exc}\n")
        return EXIT_INVALID
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())

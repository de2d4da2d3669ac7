"""Command-line front end.

Exit codes: 0 success, 1 usage error, 2 bad input (unreadable or malformed
matrix, invalid configuration), 3 numeric failure.
"""

from __future__ import annotations

import argparse
import configparser
import json
import sys
from pathlib import Path

from . import __version__
from .greedy import greedy_assignment
from .lap_solver import solve, verify_certificate
from .matrix_core import MatrixFormatError, read_matrix
from .experiments.reports import KINDS, SCHEMAS, ParameterError, build_report
from .experiments.streams import fresh_seed

EXIT_OK, EXIT_USAGE, EXIT_INPUT, EXIT_NUMERIC = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on usage errors; 2 is reserved for bad input here
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


# ------------------------------------------------------------ matrix commands


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _document(fields: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(fields, indent=2) + "\n"
    lines = []
    for key, value in fields.items():
        if isinstance(value, list):
            value = " ".join("-" if v is None else str(v) for v in value)
        elif isinstance(value, bool):
            value = "true" if value else "false"
        elif isinstance(value, float):
            value = repr(value)
        lines.append(f"{key}: {value}")
    return "\n".join(lines) + "\n"


def cmd_solve(args) -> int:
    matrix = read_matrix(args.matrix, args.input_format)
    result, diag = solve(matrix, args.objective)
    fields = {
        "value": result.value,
        "assignment": result.permutation.one_based(),
        "objective": result.objective,
        "certificate": "verified" if verify_certificate(matrix, result, diag) else "failed",
        "augmenting_paths": int(diag.augmenting_paths),
    }
    _emit(_document(fields, args.format), args.out)
    return EXIT_OK if fields["certificate"] == "verified" else EXIT_NUMERIC


def cmd_greedy(args) -> int:
    matrix = read_matrix(args.matrix, args.input_format)
    result = greedy_assignment(matrix)
    fields = {"greedy": result.value, "assignment": result.permutation.one_based()}
    if args.compare:
        optimum, _ = solve(matrix, "max")
        fields["optimum"] = optimum.value
        fields["gap"] = optimum.value - result.value
    _emit(_document(fields, args.format), args.out)
    return EXIT_OK


# -------------------------------------------------------- experiment command


def _flag(key: str) -> str:
    return "--" + key.replace("_", "-")


def read_config(path, kind: str) -> dict:
    """Flat ``key = value`` pairs from ``[common]`` then ``[<kind>]``; later wins."""
    parser = configparser.ConfigParser(interpolation=None)
    parser.optionxform = str
    try:
        with open(path) as fh:
            parser.read_file(fh)
    except configparser.Error as exc:
        raise ParameterError(f"{path}: {exc}") from None
    out = {}
    for section in ("common", kind):
        if parser.has_section(section):
            out.update({k.replace("-", "_"): v for k, v in parser.items(section)})
    return out


def cmd_experiment(args) -> int:
    kind = args.kind
    raw = read_config(args.config, kind) if args.config else {}
    workers = raw.pop("workers", None)
    for key in SCHEMAS[kind]:
        value = getattr(args, key, None)
        if value is not None:
            raw[key] = value
    if args.workers is not None:
        workers = args.workers
    try:
        workers = int(workers) if workers is not None else 1
    except ValueError:
        raise ParameterError(f"bad value for 'workers': {workers!r}") from None
    if "seed" in SCHEMAS[kind] and raw.get("seed") is None:
        raw["seed"] = fresh_seed()
        print(f"seed: {raw['seed']}", file=sys.stderr)
    report = build_report(kind, raw, workers)
    _emit(report.render(args.format), args.out)
    return EXIT_OK


def _add_experiment_parser(sub, kind: str, name: str | None = None):
    p = sub.add_parser(name or kind, help=f"run the {kind} experiment")
    p.set_defaults(func=cmd_experiment, kind=kind)
    p.add_argument("--config", help="INI file; keys from [common] and [%s]" % kind)
    p.add_argument("--workers", type=int, help="worker processes (does not change results)")
    p.add_argument("--out", help="write the report here instead of stdout")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    for key in SCHEMAS[kind]:
        p.add_argument(_flag(key), dest=key, metavar=key.upper())
    return p


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="randassign", description="Random assignment optima and their asymptotics.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    for name, func, help_text in (("solve", cmd_solve, "solve one assignment problem exactly"),
                                  ("greedy", cmd_greedy, "row-by-row greedy assignment")):
        p = sub.add_parser(name, help=help_text)
        p.set_defaults(func=func)
        p.add_argument("matrix", help="matrix file (CSV rows or JSON {n, m, data})")
        p.add_argument("--input-format", choices=("csv", "json"), help="default: detect")
        p.add_argument("--format", choices=("text", "json"), default="text")
        p.add_argument("--out")
        if name == "solve":
            p.add_argument("--objective", choices=("max", "min"), default="max")
        else:
            p.add_argument("--compare", action="store_true", help="also solve exactly and report the gap")

    exp = sub.add_parser("experiment", help="run a Monte Carlo or analytic experiment")
    kinds = exp.add_subparsers(dest="kind", required=True, parser_class=_Parser, metavar="KIND")
    for kind in KINDS:
        _add_experiment_parser(kinds, kind)
    _add_experiment_parser(sub, "rate-function")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (OSError, MatrixFormatError, ParameterError) as exc:
        print(f"randassign: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (ArithmeticError, FloatingPointError) as exc:
        print(f"randassign: numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except ValueError as exc:
        print(f"randassign: error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())

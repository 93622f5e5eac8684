"""Batch command-line front end.

Exit codes: 0 success, 1 domain failure (infeasible marginals, non-member
table, failed property), 2 input error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
from dataclasses import dataclass

import numpy as np

from . import frechet
from .core import NumericMode
from .cumulative import ContingencyTable
from .matrix import ShapeMismatchError, TropicalMatrix, m_ldiv, m_rdiv
from .serialize import format_number, grid_to_json, tropical_to_json
from .verify import run_verification

EXIT_OK, EXIT_DOMAIN, EXIT_INPUT = 0, 1, 2


class InputError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    command: str
    input: str | None = None
    output: str | None = None
    format: str = "json"
    mode: NumericMode = NumericMode.exact()
    seed: int | None = None
    count: int | None = None
    side: str = "left"
    iterations: int = 100
    max_size: int = 20

    @classmethod
    def from_args(cls, args: argparse.Namespace) -> "RunConfig":
        mode = (NumericMode.exact() if args.mode == "exact"
                else NumericMode.floating(args.epsilon))
        return cls(args.command, args.input, args.output, args.format, mode, args.seed,
                   args.count, args.side, args.iterations, args.max_size)


# -- input ----------------------------------------------------------------------

def _read_text(path: str | None) -> str:
    if path is None or path == "-":
        return sys.stdin.read()
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc


def _csv_blocks(text: str) -> list[list[list[str]]]:
    """Rows of a CSV document, grouped into blank-line separated blocks."""
    blocks, current = [], []
    for row in csv.reader(io.StringIO(text)):
        cells = [c.strip() for c in row if c.strip() != ""]
        if not cells or cells[0].startswith("#"):
            if current:
                blocks.append(current)
                current = []
            continue
        current.append(cells)
    if current:
        blocks.append(current)
    return blocks


def load_document(path: str | None) -> dict:
    """Parse JSON ``{"p", "q", "table"}`` or CSV (p line, q line, table rows)."""
    text = _read_text(path)
    if text.lstrip().startswith("{"):
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise InputError(f"invalid JSON: {exc}") from exc
        if not isinstance(doc, dict):
            raise InputError("JSON input must be an object")
        return doc
    rows = [r for block in _csv_blocks(text) for r in block]
    if len(rows) < 2:
        raise InputError("CSV input needs a line of row marginals and a line of column marginals")
    doc = {"p": rows[0], "q": rows[1]}
    if len(rows) > 2:
        doc["table"] = rows[2:]
    return doc


def _marginals(doc: dict, mode: NumericMode) -> frechet.FrechetInstance:
    if "p" not in doc or "q" not in doc:
        raise InputError("input must provide marginals 'p' and 'q'")
    try:
        return frechet.FrechetInstance.from_marginals(doc["p"], doc["q"], mode)
    except frechet.InfeasibleInstanceError:
        raise
    except (ValueError, TypeError, ArithmeticError) as exc:
        raise InputError(f"bad marginals: {exc}") from exc


def _table(rows, mode: NumericMode) -> ContingencyTable:
    try:
        return ContingencyTable.from_values(rows, mode)
    except (ValueError, TypeError, ArithmeticError) as exc:
        raise InputError(f"bad table: {exc}") from exc


def _tropical(rows, mode: NumericMode, name: str) -> TropicalMatrix:
    try:
        return TropicalMatrix.from_rows(rows, mode)
    except (ValueError, TypeError, ArithmeticError) as exc:
        raise InputError(f"bad matrix {name}: {exc}") from exc


# -- output ---------------------------------------------------------------------

def _csv_text(doc: dict) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    for key, value in doc.items():
        if isinstance(value, list) and value and isinstance(value[0], list):
            writer.writerow([f"# {key}"])
            writer.writerows(value)
        elif isinstance(value, list):
            writer.writerow([key, *value])
        elif isinstance(value, dict):
            writer.writerow([key, json.dumps(value, sort_keys=True)])
        else:
            writer.writerow([key, value])
    return buf.getvalue()


def emit(doc: dict, config: RunConfig):
    if config.format == "json":
        text = json.dumps(doc, indent=2) + "\n"
    else:
        text = _csv_text(doc)
    if config.output is None or config.output == "-":
        sys.stdout.write(text)
    else:
        with open(config.output, "w", encoding="utf-8") as fh:
            fh.write(text)


def _sigma(inst: frechet.FrechetInstance):
    return format_number(inst.sigma, inst.mode.is_exact)


def bounds_document(inst: frechet.FrechetInstance, res: frechet.BoundsResult) -> dict:
    return {
        "n": inst.n,
        "m": inst.m,
        "sigma": _sigma(inst),
        "p": grid_to_json(inst.p),
        "q": grid_to_json(inst.q),
        "upper_cumulative": grid_to_json(res.upper_cumulative),
        "lower_cumulative": grid_to_json(res.lower_cumulative),
        "upper_table": grid_to_json(res.upper_table),
        "lower_table": grid_to_json(res.lower_table),
    }


# -- commands -------------------------------------------------------------------

def cmd_bounds(config: RunConfig) -> int:
    inst = _marginals(load_document(config.input), config.mode)
    emit(bounds_document(inst, frechet.compute_bounds(inst)), config)
    return EXIT_OK


def _report(F: ContingencyTable, inst, bounds) -> dict:
    classical = frechet.check_membership_classical(F, inst)
    tropical = frechet.check_membership_tropical(F, inst)
    entry = {"classical": classical, "tropical": tropical, "agree": classical == tropical,
             "member": classical and tropical, "sandwich": None}
    if entry["member"]:
        rep = frechet.sandwich_check(F, inst, bounds)
        entry["sandwich"] = {
            "lower_ok": rep.lower_ok,
            "upper_ok": rep.upper_ok,
            "lower_violation": list(rep.lower_violation) if rep.lower_violation else None,
            "upper_violation": list(rep.upper_violation) if rep.upper_violation else None,
        }
    return entry


def cmd_check(config: RunConfig) -> int:
    doc = load_document(config.input)
    inst = _marginals(doc, config.mode)
    names = ["table"] if "table" in doc else [k for k in ("upper_table", "lower_table") if k in doc]
    if not names:
        raise InputError("input has no 'table' to check")
    bounds = frechet.compute_bounds(inst)
    reports = {}
    for name in names:
        F = _table(doc[name], inst.mode)
        try:
            reports[name] = _report(F, inst, bounds)
        except ShapeMismatchError as exc:
            raise InputError(str(exc)) from exc
    good = all(r["member"] and r["agree"] and r["sandwich"]["lower_ok"] and r["sandwich"]["upper_ok"]
               for r in reports.values())
    emit({"n": inst.n, "m": inst.m, "sigma": _sigma(inst), "tables": reports, "member": good},
         config)
    return EXIT_OK if good else EXIT_DOMAIN


def cmd_sample(config: RunConfig) -> int:
    inst = _marginals(load_document(config.input), config.mode)
    count = 1 if config.count is None else config.count
    seed = 0 if config.seed is None else config.seed
    bounds = frechet.compute_bounds(inst)
    rng = np.random.default_rng(seed)
    samples = []
    for k in range(count):
        F = frechet.random_feasible(inst, int(rng.integers(2**63)))
        entry = _report(F, inst, bounds)
        samples.append({"index": k, "table": grid_to_json(F), **entry})
    passed = all(s["member"] and s["sandwich"]["lower_ok"] and s["sandwich"]["upper_ok"]
                 for s in samples)
    emit({"n": inst.n, "m": inst.m, "sigma": _sigma(inst), "seed": seed, "count": count,
          "samples": samples, "all_passed": passed}, config)
    return EXIT_OK if passed else EXIT_DOMAIN


def cmd_verify(config: RunConfig) -> int:
    seed = 0 if config.seed is None else config.seed
    results = run_verification(config.iterations, config.max_size, seed)
    ok = all(r.ok for r in results)
    if config.format == "json":
        emit({"seed": seed, "iterations": config.iterations, "passed": ok,
              "suites": [{"name": r.name, "passed": r.passed, "failed": r.failed,
                          "counterexample": r.counterexample} for r in results]}, config)
    else:
        lines = []
        for r in results:
            verdict = "PASS" if r.ok else "FAIL"
            lines.append(f"{r.name}: {r.passed}/{r.total} passed [{verdict}]")
            if r.counterexample is not None:
                lines.append("counterexample: " + json.dumps(r.counterexample, sort_keys=True))
        lines.append("all suites passed" if ok else "some suites FAILED")
        text = "\n".join(lines) + "\n"
        if config.output is None or config.output == "-":
            sys.stdout.write(text)
        else:
            with open(config.output, "w", encoding="utf-8") as fh:
                fh.write(text)
    return EXIT_OK if ok else EXIT_DOMAIN


def cmd_residuate(config: RunConfig) -> int:
    text = _read_text(config.input)
    names = ("A", "B") if config.side == "left" else ("D", "C")
    if text.lstrip().startswith("{"):
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise InputError(f"invalid JSON: {exc}") from exc
        if not all(k in doc for k in names):
            raise InputError(f"{config.side} residuation needs matrices {names[0]!r} and {names[1]!r}")
        first, second = doc[names[0]], doc[names[1]]
    else:
        blocks = _csv_blocks(text)
        if len(blocks) != 2:
            raise InputError("CSV input needs two blank-line separated matrices")
        first, second = blocks
    X = _tropical(first, config.mode, names[0])
    Y = _tropical(second, config.mode, names[1])
    try:
        result = m_ldiv(X, Y) if config.side == "left" else m_rdiv(X, Y)
    except ShapeMismatchError as exc:
        raise InputError(str(exc)) from exc
    emit({"side": config.side, "rows": result.rows, "cols": result.cols,
          "result": tropical_to_json(result)}, config)
    return EXIT_OK


COMMANDS = {
    "bounds": cmd_bounds,
    "check": cmd_check,
    "sample": cmd_sample,
    "verify": cmd_verify,
    "residuate": cmd_residuate,
}


def _nonneg_int(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError("must be nonnegative")
    return value


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--input", help="input file (default: stdin)")
    common.add_argument("--output", help="output file (default: stdout)")
    common.add_argument("--format", choices=("csv", "json"), default="json")
    common.add_argument("--mode", choices=("exact", "float"), default="exact")
    common.add_argument("--epsilon", type=float, default=1e-9,
                        help="absolute tolerance in float mode")
    common.add_argument("--seed", type=int)
    common.add_argument("--count", type=_nonneg_int)
    common.add_argument("--side", choices=("left", "right"), default="left")
    common.add_argument("--iterations", type=_nonneg_int, default=100,
                        help="cases per verification suite")
    common.add_argument("--max-size", type=_nonneg_int, default=20,
                        help="largest marginal length used by verify")

    parser = argparse.ArgumentParser(
        prog="maxplus-frechet",
        description="Fréchet bounds for contingency tables via max-plus algebra.")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("bounds", parents=[common], help="upper and lower bounds of the class")
    sub.add_parser("check", parents=[common], help="membership and sandwich report for a table")
    sub.add_parser("sample", parents=[common], help="random member tables with sandwich verdicts")
    sub.add_parser("verify", parents=[common], help="run the randomized self-verification suites")
    sub.add_parser("residuate", parents=[common], help="A\\B (left) or D/C (right)")
    return parser


def main(argv=None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s: %(message)s")
    args = build_parser().parse_args(argv)
    if args.mode == "float" and not args.epsilon >= 0:
        print("error: --epsilon must be nonnegative", file=sys.stderr)
        return EXIT_INPUT
    config = RunConfig.from_args(args)
    try:
        return COMMANDS[config.command](config)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except frechet.InfeasibleInstanceError as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())

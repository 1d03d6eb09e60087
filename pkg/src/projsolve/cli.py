"""Command-line front end: parse system files, run a pipeline stage, and
report JSON (or text) on stdout.

Output on stdout is a deterministic function of the inputs and the seed;
wall-clock timing goes to stderr so repeated runs stay byte-identical.
Exit codes: 0 success, 2 parse error, 3 positive-dimensional system,
4 certification failure.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass

from .dyadic import ComplexBox, Dyadic, DyadicInterval
from .elimination import LinearForm, hidden_var_resultant, certify_strong
from .errors import (
    CertificationError,
    NoPreimageError,
    NonSquareSystemError,
    NotZeroDimensionalError,
    PolynomialSyntaxError,
    ProjsolveError,
)
from .gridsep import find_separating_block
from .isolation import RootSet, isolate
from .polynomials import (
    PolynomialSystem,
    UniPoly,
    format_polynomial,
    parse_system_text,
)
from .slf import build_slf_family
from .solver import SolutionBox, solve

__all__ = ["RunConfig", "parse_system_file", "emit_report", "main"]

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_POSITIVE_DIMENSIONAL = 3
EXIT_CERTIFICATION = 4


@dataclass
class RunConfig:
    command: str
    precision_bits: int = 53
    seed: int = 0
    format: str = "json"
    check: bool = False

    def __post_init__(self):
        if self.precision_bits < 1:
            raise ValueError("precision must be at least 1")


def parse_system_file(path: str) -> PolynomialSystem:
    """Read the canonical one-polynomial-per-line syntax from a file, or
    from stdin when path is '-'."""
    if path == "-":
        text = sys.stdin.read()
    else:
        with open(path, "r", encoding="utf-8") as handle:
            text = handle.read()
    return parse_system_text(text)


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------


def _interval_json(iv: DyadicInterval) -> list[str]:
    return [str(iv.lo), str(iv.hi)]


def _box_json(box: ComplexBox) -> dict:
    return {"re": _interval_json(box.re), "im": _interval_json(box.im)}


def _rootset_json(rs: RootSet) -> list[dict]:
    return [
        {"box": _box_json(r.box), "multiplicity": r.multiplicity} for r in rs.roots
    ]


def _solution_json(sol: SolutionBox) -> dict:
    return {"coordinates": [_box_json(c) for c in sol.coordinates]}


def emit_report(result: dict, config: RunConfig) -> str:
    """Serialize a stage result; JSON is canonical (sorted keys, fixed
    separators) so identical runs emit identical bytes."""
    payload = {
        "command": config.command,
        "precision": config.precision_bits,
        "seed": config.seed,
    }
    payload.update(result)
    if config.format == "json":
        return json.dumps(payload, sort_keys=True, separators=(",", ": "), indent=1)
    lines = [f"{k}: {v}" for k, v in payload.items()]
    return "\n".join(lines)


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def _single_unipoly(system: PolynomialSystem) -> UniPoly:
    if system.num_vars != 1:
        raise PolynomialSyntaxError("expected a single univariate polynomial")
    return system.polys[0].to_unipoly()


def _cmd_roots(args, config: RunConfig) -> dict:
    lines = [
        line.split("#", 1)[0].strip()
        for line in _read_lines(args.file)
        if line.split("#", 1)[0].strip() and not line.startswith("vars")
    ]
    if len(lines) != 1:
        raise PolynomialSyntaxError("roots expects exactly one polynomial")
    system = parse_system_text("vars 1\n" + lines[0])
    poly = _single_unipoly(system)
    rs = isolate(poly, config.precision_bits)
    return {"roots": _rootset_json(rs), "degree": poly.degree}


def _read_lines(path: str) -> list[str]:
    if path == "-":
        return sys.stdin.read().splitlines()
    with open(path, "r", encoding="utf-8") as handle:
        return handle.read().splitlines()


def _cmd_grid_sep(args, config: RunConfig) -> dict:
    lines = [
        line.split("#", 1)[0].strip()
        for line in _read_lines(args.file)
        if line.split("#", 1)[0].strip() and not line.startswith("vars")
    ]
    if len(lines) != 2:
        raise PolynomialSyntaxError("grid-sep expects exactly two polynomials")
    polys = [
        parse_system_text("vars 1\n" + line).polys[0].to_unipoly() for line in lines
    ]
    x_set = isolate(polys[0], 8)
    y_set = isolate(polys[1], 8)
    block = find_separating_block(x_set, y_set, args.block)
    return {
        "s_star": block.s_star,
        "block_length": block.block_length,
        "search_range_max": block.search_range_max,
    }


def _cmd_eliminate(args, config: RunConfig) -> dict:
    system = parse_system_file(args.file)
    try:
        coeffs = tuple(int(c) for c in args.form.split(","))
    except ValueError:
        raise PolynomialSyntaxError("--form expects comma-separated integers")
    if len(coeffs) != system.num_vars:
        raise PolynomialSyntaxError("--form length must match the variable count")
    pivot = next((i for i, c in enumerate(coeffs) if c == 1), None)
    if pivot is None:
        raise PolynomialSyntaxError("--form needs a coefficient exactly 1 as pivot")
    form = LinearForm(coeffs, pivot)
    result = hidden_var_resultant(system, form, seed=config.seed)
    strong = certify_strong(result, system)
    return {
        "coefficients": [str(c) for c in result.polynomial.coeffs],
        "degree": result.polynomial.degree,
        "strong": strong.value,
        "form": list(form.coefficients),
    }


def _cmd_slf(args, config: RunConfig) -> dict:
    system = parse_system_file(args.file)
    family = build_slf_family(system, seed=config.seed)
    return {
        "a0": list(family.family.a0),
        "a1": list(family.family.a1),
        "block": {"start": family.block_start, "length": family.block_length},
        "oracle_calls": family.oracle_calls,
    }


def _cmd_solve(args, config: RunConfig) -> dict:
    system = parse_system_file(args.file)
    result = solve(
        system, quality=config.precision_bits, seed=config.seed, check=True
    )
    report = {
        "solutions": [_solution_json(s) for s in result.solutions],
        "count": len(result.solutions),
        "oracle_calls": result.oracle_calls,
        "infinity_transform": list(result.transform.lambdas),
        "dropped_at_infinity": result.dropped_at_infinity,
    }
    if result.form is not None:
        report["separating_form"] = list(result.form.coefficients)
    return report


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="projsolve",
        description="certified solving of zero-dimensional integer polynomial "
        "systems by projection",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("file", help="system file (canonical syntax), or - for stdin")
        p.add_argument("--precision", type=int, default=53, metavar="BITS")
        p.add_argument("--seed", type=int, default=0, metavar="U64")
        p.add_argument("--format", choices=("json", "text"), default="json")
        p.add_argument("--check", action="store_true",
                       help="re-certify reported output, fail nonzero on violation")

    p_roots = sub.add_parser("roots", help="isolate all complex roots of one polynomial")
    common(p_roots)
    p_elim = sub.add_parser("eliminate", help="elimination polynomial along a form")
    common(p_elim)
    p_elim.add_argument("--form", required=True, metavar="C1,C2,...",
                        help="integer coefficients of the linear form")
    p_grid = sub.add_parser("grid-sep", help="separating block for a root grid")
    common(p_grid)
    p_grid.add_argument("--block", type=int, default=1, metavar="C",
                        help="length of the separating block")
    p_slf = sub.add_parser("slf", help="separating linear form family for a system")
    common(p_slf)
    p_solve = sub.add_parser("solve", help="all complex solutions as certified boxes")
    common(p_solve)
    return parser


_HANDLERS = {
    "roots": _cmd_roots,
    "eliminate": _cmd_eliminate,
    "grid-sep": _cmd_grid_sep,
    "slf": _cmd_slf,
    "solve": _cmd_solve,
}


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    config = RunConfig(
        command=args.command,
        precision_bits=args.precision,
        seed=args.seed,
        format=args.format,
        check=getattr(args, "check", False),
    )
    started = time.monotonic()
    try:
        result = _HANDLERS[args.command](args, config)
    except (PolynomialSyntaxError, NonSquareSystemError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except NotZeroDimensionalError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_POSITIVE_DIMENSIONAL
    except (CertificationError, NoPreimageError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CERTIFICATION
    print(emit_report(result, config))
    elapsed = time.monotonic() - started
    print(f"elapsed: {elapsed:.3f}s", file=sys.stderr)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())

"""Command-line surface: urn reports, law suites, counterexamples, integrals.

Exit codes: 0 ok, 1 usage or input error, 2 a mathematically anchored
verdict failed, 3 a law suite found a counterexample.  Same seed and flags
yield byte-identical output.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import asdict, dataclass
from fractions import Fraction
from typing import Optional

from . import laws
from .category import monad_counterexample
from .choquet import are_comonotonic, choquet_integral
from .core import Number, is_exact
from .ellsberg import EllsbergReport, UrnParams, ellsberg_report
from .spacefile import load_space_file
from .uncertainty import UncertaintySpace, xi

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_VERDICT = 2
EXIT_LAW = 3


@dataclass(frozen=True)
class RunConfig:
    """Reproducibility block embedded in every JSON report."""

    command: str
    seed: int = 0
    trials: int = 1
    backend: str = "rational"
    tolerance: float = 1e-9
    format: str = "json"
    out: Optional[str] = None

    def __post_init__(self):
        if self.tolerance <= 0:
            raise ValueError("tolerance must be positive")
        if self.trials < 1:
            raise ValueError("trials must be at least 1")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def format_number(x: Number, backend: str) -> str:
    if backend == "rational" and is_exact(x):
        return str(Fraction(x))
    return f"{float(x):.12g}"


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _report_payload(report: EllsbergReport, config: RunConfig) -> dict:
    return {
        "config": asdict(config),
        "variant": report.variant,
        "layer": report.layer,
        "params": {"big_n": report.params.big_n,
                   "alpha": format_number(report.params.alpha, config.backend),
                   "u1": format_number(report.params.u1, config.backend)},
        "points": list(report.point_labels),
        "values": {name: [format_number(v, config.backend) for v in vals]
                   for name, vals in report.values.items()},
        "f1_vs_f2": report.f1_vs_f2,
        "f3_vs_f4": report.f3_vs_f4,
        "verdict": report.verdict,
        "paradox_represented": report.paradox_represented,
    }


def _to_json(payload: dict) -> str:
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def _report_csv(report: EllsbergReport, config: RunConfig) -> str:
    lines = ["act,point,value"]
    for act, point, value in report.rows():
        lines.append(f"{act},{point},{format_number(value, config.backend)}")
    return "\n".join(lines) + "\n"


def _parse_scalar(text: str, backend: str) -> Number:
    value = Fraction(text)
    return float(value) if backend == "float" else value


def cmd_ellsberg(args) -> int:
    config = RunConfig(command="ellsberg", seed=args.seed, backend=args.backend,
                       tolerance=args.tolerance, format=args.format, out=args.out)
    try:
        params = UrnParams(big_n=args.big_n,
                           alpha=_parse_scalar(args.alpha, args.backend),
                           u1=_parse_scalar(args.u1, args.backend))
        report = ellsberg_report(args.variant, params, args.layer)
    except (ValueError, AssertionError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE
    if args.format == "csv":
        _emit(_report_csv(report, config), args.out)
    else:
        _emit(_to_json(_report_payload(report, config)), args.out)
    alpha_one = report.params.alpha == 1
    if alpha_one and report.verdict != "equalities":
        return EXIT_VERDICT
    if not alpha_one and report.verdict != "supports modal preference":
        return EXIT_VERDICT
    return EXIT_OK


def cmd_laws(args) -> int:
    config = RunConfig(command=f"laws {args.suite}", seed=args.seed,
                       trials=args.trials, backend=args.backend,
                       tolerance=args.tolerance, format=args.format, out=args.out)
    runner = laws.SUITES[args.suite]
    kwargs = {"seed": args.seed}
    if args.suite in ("choquet", "dirac", "substitution", "unc-maps"):
        kwargs["trials"] = args.trials
    if args.suite == "monad":
        kwargs.update(trials=args.trials, grid=args.grid,
                      space_size=args.space_size, depth=args.depth)
    if args.suite == "retraction":
        kwargs.update(grid=args.grid, space_size=args.space_size, depth=args.depth)
    report = runner(**kwargs)
    payload = {"config": asdict(config), **report.to_dict()}
    _emit(_to_json(payload), args.out)
    return EXIT_OK if report.passed else EXIT_LAW


def cmd_counterexample(args) -> int:
    config = RunConfig(command=f"counterexample {args.which}",
                       backend=args.backend, tolerance=args.tolerance,
                       format=args.format, out=args.out)
    if args.which == "comonotonic":
        from .core import Act, FiniteSpace, additive_capacity

        space = FiniteSpace(("A1", "A2", "A3"))
        us = UncertaintySpace(space, (
            ("u1", additive_capacity(space, [Fraction(1, 3)] * 3)),
            ("u2", additive_capacity(space,
                                     [Fraction(1, 2), Fraction(1, 8), Fraction(3, 8)])),
        ))
        f = Act(space, (11, 1, 0))
        g = Act(space, (11, 10, 0))
        xf, xg = xi(us, f), xi(us, g)
        d_f = xf.values[0] - xf.values[1]
        d_g = xg.values[0] - xg.values[1]
        payload = {
            "config": asdict(config),
            "inputs_comonotonic": are_comonotonic(f, g),
            "difference_f": format_number(d_f, "rational"),
            "difference_g": format_number(d_g, "rational"),
            "product": format_number(d_f * d_g, "rational"),
            "images_comonotonic": are_comonotonic(xf, xg),
        }
        _emit(_to_json(payload), args.out)
        expected = (d_f == Fraction(-13, 8) and d_g == Fraction(1, 4)
                    and d_f * d_g == Fraction(-13, 32)
                    and are_comonotonic(f, g) and not are_comonotonic(xf, xg))
        return EXIT_OK if expected else EXIT_LAW

    if args.beta is None:
        sys.stderr.write("error: counterexample monad requires --beta\n")
        return EXIT_USAGE
    beta = _parse_scalar(args.beta, args.backend)
    try:
        result = monad_counterexample(beta)
    except ValueError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE
    payload = {
        "config": asdict(config),
        "beta": format_number(result.beta, args.backend),
        "average_then_integrate": format_number(result.lhs, args.backend),
        "integrate_expectations": format_number(result.rhs, args.backend),
        "difference": format_number(result.difference, args.backend),
        "difference_formula": format_number(result.difference_formula, args.backend),
        "printed_count": result.printed_count,
        "actual_count": result.actual_count,
    }
    _emit(_to_json(payload), args.out)
    tol = 0 if is_exact(result.difference) else config.tolerance
    matches = abs(result.difference - result.difference_formula) <= tol
    if result.beta == 1:
        matches = matches and result.difference == 0
    return EXIT_OK if matches else EXIT_LAW


def cmd_choquet(args) -> int:
    try:
        loaded = load_space_file(args.space_file, backend=args.backend)
        capacity = loaded.capacities[args.capacity]
        act = loaded.acts[args.act]
    except (KeyError, ValueError, OSError, json.JSONDecodeError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE
    value = choquet_integral(capacity, act)
    _emit(format_number(value, args.backend) + "\n", args.out)
    return EXIT_OK


def _add_common(parser) -> None:
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--trials", type=int, default=500)
    parser.add_argument("--backend", choices=("rational", "float"),
                        default="rational")
    parser.add_argument("--tolerance", type=float, default=1e-9)
    parser.add_argument("--format", choices=("json", "csv"), default="json")
    parser.add_argument("--out", default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="choquet-tower",
                     description="hierarchical uncertainty computations")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ellsberg", help="layered urn report")
    p.add_argument("--variant", choices=("X", "Y", "Z"), required=True)
    p.add_argument("--big-n", dest="big_n", type=int, required=True)
    p.add_argument("--alpha", required=True)
    p.add_argument("--u1", required=True)
    p.add_argument("--layer", type=int, choices=(1, 2, 3), required=True)
    _add_common(p)
    p.set_defaults(fn=cmd_ellsberg)

    p = sub.add_parser("laws", help="run a seeded law suite")
    p.add_argument("suite", choices=sorted(laws.SUITES))
    p.add_argument("--grid", type=int, default=2)
    p.add_argument("--depth", type=int, default=3)
    p.add_argument("--space-size", dest="space_size", type=int, default=2)
    _add_common(p)
    p.set_defaults(fn=cmd_laws)

    p = sub.add_parser("counterexample", help="reproduce a counterexample")
    p.add_argument("which", choices=("comonotonic", "monad"))
    p.add_argument("--beta", default=None)
    _add_common(p)
    p.set_defaults(fn=cmd_counterexample)

    p = sub.add_parser("choquet", help="integrate an act from a space file")
    p.add_argument("space_file")
    p.add_argument("capacity")
    p.add_argument("act")
    _add_common(p)
    p.set_defaults(fn=cmd_choquet)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    return args.fn(args)


if __name__ == "__main__":
    sys.exit(main())

"""``elabc`` command line: profile | sample | coverage | compare.

Exit status is 0 on success, 1 for usage errors and 2 for runtime
failures.
"""

from __future__ import annotations

import argparse
import json
import sys

from .errors import AbcElError
from .harness import (ENTROPY_ALIASES, KINDS, METHODS, ExperimentSpec,
                      SpecError, run)
from .models import MODELS, SUMMARY_SETS

EXIT_OK, EXIT_USAGE, EXIT_RUNTIME = 0, 1, 2

DEFAULT_OUT = {"profile": "profile.csv", "sample": "chain.csv",
               "coverage": "coverage.csv", "compare": "compare.csv"}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.format_usage()}{self.prog}: error: {message}")


def _grid(text: str):
    try:
        a, b, n = text.split(":")
        return float(a), float(b), int(n)
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"grid must be low:high:count, got {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    models_help = "; ".join(f"{k}: {', '.join(v)}"
                            for k, v in SUMMARY_SETS.items())
    parser = _Parser(prog="elabc", description=(
        "Likelihood-free inference with the abcEL posterior."))
    sub = parser.add_subparsers(dest="kind", metavar="{" + ",".join(KINDS)
                                + "}", parser_class=_Parser)
    for kind in KINDS:
        p = sub.add_parser(kind, help=f"run a {kind} experiment")
        p.add_argument("--config", help="JSON file mirroring the experiment "
                       "spec; flags override its values")
        p.add_argument("--model", choices=sorted(MODELS))
        p.add_argument("--summaries", action="append", help=(
            "summary set, or comma-separated statistics; repeat for several "
            f"configurations ({models_help})"))
        p.add_argument("--m", type=int, help="replicates per evaluation")
        p.add_argument("--seed", type=int)
        p.add_argument("--out", help="output CSV path")
        p.add_argument("--entropy", choices=("kl", "gaussian", "none"))
        p.add_argument("--k", type=int, help="neighbours for --entropy kl")
        p.add_argument("--full", action="store_true", default=None,
                       help="full-scale chain lengths (50k + 50k)")
        p.add_argument("--iterations", type=int)
        p.add_argument("--burn-in", type=int, dest="burn_in")
        p.add_argument("--replicates", type=int)
        p.add_argument("--grid", type=_grid, help="low:high:count")
        p.add_argument("--repeats", type=int)
        p.add_argument("--methods", help="comma-separated subset of "
                       + ",".join(METHODS))
        p.add_argument("--n-obs", type=int, dest="n_obs",
                       help="observations per dataset (nodes for graphs)")
        p.add_argument("--workers", type=int)
        p.add_argument("--init", choices=("abc", "prior", "truth"))
        p.add_argument("--no-tune", action="store_false", dest="tune",
                       default=None, help="skip pilot tuning")
    return parser


def spec_from_args(args) -> ExperimentSpec:
    values = {}
    if args.config:
        try:
            with open(args.config) as fh:
                values = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read config {args.config}: {exc}")
        if not isinstance(values, dict):
            raise UsageError("config must be a JSON object")
    values.pop("kind", None)
    for key, val in vars(args).items():
        if key in ("config", "kind") or val is None:
            continue
        values[key] = val
    if "methods" in values and isinstance(values["methods"], str):
        values["methods"] = tuple(s for s in values["methods"].split(",")
                                  if s)
    for key in ("summaries", "grid", "methods", "proposal_sd"):
        if isinstance(values.get(key), list):
            values[key] = tuple(values[key])
    if "model" not in values:
        raise UsageError(f"--model is required; valid: {sorted(MODELS)}")
    if values.get("entropy") is not None and values["entropy"] not in \
            ENTROPY_ALIASES:
        raise UsageError(f"unknown entropy {values['entropy']!r}")
    try:
        return ExperimentSpec(kind=args.kind, **values)
    except TypeError as exc:
        raise UsageError(str(exc)) from None


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.kind is None:
            raise UsageError(parser.format_usage()
                             + "elabc: error: a subcommand is required")
        spec = spec_from_args(args)
    except UsageError as exc:
        msg = str(exc)
        if "usage:" not in msg:
            msg = f"{parser.format_usage()}elabc: error: {msg}"
        print(msg, file=sys.stderr)
        return EXIT_USAGE
    except SpecError as exc:
        print(f"{parser.format_usage()}elabc: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    out = spec.out or DEFAULT_OUT[spec.kind]
    try:
        result = run(spec)
        paths = result.write(out)
    except (AbcElError, ValueError, OSError) as exc:
        print(f"elabc: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    print(f"{result.summary_line()} -> {', '.join(str(p) for p in paths)}")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())

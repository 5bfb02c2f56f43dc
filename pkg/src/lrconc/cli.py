"""Command-line interface.

Subcommands ``curve``, ``roc``, ``summary``, ``empirical`` and ``selftest``.
Results go to stdout (or ``--out``); diagnostics go to stderr.

Exit codes:
    0  success
    1  selftest failure or numerical failure
    2  bad arguments, distribution literal, unsupported pair or score file
    3  atom in the likelihood-ratio distribution (strict mode)
    4  support error
"""

from __future__ import annotations

import argparse
import json
import sys
import warnings
from dataclasses import dataclass
from pathlib import Path

from . import io
from .conc import DEFAULT_GRID, auc_from_phi, concentration, roc_opt, summarize
from .dist import length_biased
from .empirical import Label, ScoreSample, empirical_concentration, mann_whitney_auc
from .errors import AtomError, LrConcError, ParseError, SupportError, UnsupportedFamily, UnsupportedPair
from .lrdist import DEFAULT_MC_N, DistributionPair, build_lr_distribution
from .selftest import format_table, run_checks

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_CONFIG = 2
EXIT_ATOM = 3
EXIT_SUPPORT = 4

LENGTH_BIASED = "length-biased"


@dataclass(frozen=True)
class RunConfig:
    x_spec: str
    y_spec: str
    backend: str = "auto"
    mc_n: int = DEFAULT_MC_N
    seed: int = 0
    grid: int = DEFAULT_GRID
    strict_atoms: bool = True
    output: str | None = None
    format: str = "csv"

    def pair(self) -> DistributionPair:
        x = io.parse_distribution(self.x_spec)
        y = length_biased(x) if self.y_spec.strip() == LENGTH_BIASED else io.parse_distribution(self.y_spec)
        return DistributionPair(x, y)


def _write(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _config(args) -> RunConfig:
    return RunConfig(
        x_spec=args.x,
        y_spec=args.y,
        backend=args.backend,
        mc_n=args.mc_n,
        seed=args.seed,
        grid=args.grid,
        strict_atoms=not args.lenient_atoms,
        output=args.out,
        format=args.format,
    )


def _curve_and_summary(cfg: RunConfig):
    lrd = build_lr_distribution(cfg.pair(), cfg.backend, mc_n=cfg.mc_n, seed=cfg.seed, strict=cfg.strict_atoms)
    curve = concentration(lrd, cfg.grid)
    return curve, summarize(curve)


def cmd_curve(cfg: RunConfig) -> int:
    curve, summary = _curve_and_summary(cfg)
    text = io.curve_to_json(curve, summary) if cfg.format == "json" else io.curve_to_csv(curve)
    _write(text, cfg.output)
    return EXIT_OK


def cmd_roc(cfg: RunConfig) -> int:
    curve, summary = _curve_and_summary(cfg)
    roc = roc_opt(curve)
    text = io.curve_to_json(roc, summary) if cfg.format == "json" else io.curve_to_csv(roc)
    _write(text, cfg.output)
    return EXIT_OK


def cmd_summary(cfg: RunConfig) -> int:
    _, summary = _curve_and_summary(cfg)
    _write(json.dumps(summary.as_dict()) + "\n", cfg.output)
    return EXIT_OK


def cmd_empirical(x_file: str, y_file: str, grid: int, fmt: str, out: str | None) -> int:
    xs = ScoreSample(io.read_scores(x_file), Label.POPULATION_X)
    ys = ScoreSample(io.read_scores(y_file), Label.POPULATION_Y)
    curve = empirical_concentration(xs, ys, grid)
    aucs = {"plug_in_auc": auc_from_phi(curve), "mann_whitney_auc": mann_whitney_auc(xs, ys)}
    if fmt == "json":
        _write(io.curve_to_json(curve, extra=aucs), out)
    else:
        _write(io.curve_to_csv(curve), out)
        print(" ".join(f"{k}={v!r}" for k, v in aucs.items()), file=sys.stderr)
    return EXIT_OK


def cmd_selftest(seed: int, mc_n: int) -> int:
    checks = run_checks(seed=seed, mc_n=mc_n)
    sys.stdout.write(format_table(checks))
    return EXIT_OK if all(c.passed for c in checks) else EXIT_FAILURE


def _positive_int(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return v


def _seed(text: str) -> int:
    v = int(text, 0)
    if not 0 <= v < 2**64:
        raise argparse.ArgumentTypeError("seed must fit in 64 bits")
    return v


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lrconc",
        description="Concentration function, optimal ROC curve and AUC of two populations.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=_seed, default=0, help="64-bit seed (default 0)")
    common.add_argument("--grid", type=_positive_int, default=DEFAULT_GRID, help="grid intervals (default 1024)")
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--out", default=None, help="output path (default stdout)")

    model = argparse.ArgumentParser(add_help=False)
    model.add_argument("--x", required=True, help="X law, e.g. 'exp(rate=2)'")
    model.add_argument("--y", required=True, help="Y law, or 'length-biased' for the size-biased X")
    model.add_argument("--backend", choices=("auto", "analytic", "monte-carlo"), default="auto")
    model.add_argument("--mc-n", type=_positive_int, default=DEFAULT_MC_N, help="Monte Carlo draws per population")
    model.add_argument("--lenient-atoms", action="store_true", help="warn instead of failing on atoms")

    for name, help_ in (
        ("curve", "concentration curve p,phi"),
        ("roc", "optimal ROC curve q,roc"),
        ("summary", "AUC, generalized Gini and identity residual as JSON"),
    ):
        sub.add_parser(name, parents=[model, common], help=help_)

    emp = sub.add_parser("empirical", parents=[common], help="plug-in curve from two score files")
    emp.add_argument("--x-scores", required=True, help="scores from population X")
    emp.add_argument("--y-scores", required=True, help="scores from population Y")

    st = sub.add_parser("selftest", help="run the built-in closed-form checks")
    st.add_argument("--seed", type=_seed, default=0)
    st.add_argument("--mc-n", type=_positive_int, default=DEFAULT_MC_N)
    return parser


def _warn_line(message, category, filename, lineno, file=None, line=None):
    print(f"lrconc: warning: {message}", file=sys.stderr)


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    with warnings.catch_warnings():
        warnings.simplefilter("always")
        warnings.showwarning = _warn_line
        return _dispatch(args)


def _dispatch(args) -> int:
    try:
        if args.command == "selftest":
            return cmd_selftest(args.seed, args.mc_n)
        if args.command == "empirical":
            return cmd_empirical(args.x_scores, args.y_scores, args.grid, args.format, args.out)
        cfg = _config(args)
        return {"curve": cmd_curve, "roc": cmd_roc, "summary": cmd_summary}[args.command](cfg)
    except AtomError as exc:
        print(f"lrconc: atom error: {exc}", file=sys.stderr)
        return EXIT_ATOM
    except SupportError as exc:
        print(f"lrconc: support error: {exc}", file=sys.stderr)
        return EXIT_SUPPORT
    except (ParseError, UnsupportedFamily, UnsupportedPair, ValueError) as exc:
        print(f"lrconc: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except LrConcError as exc:
        print(f"lrconc: {exc}", file=sys.stderr)
        return EXIT_FAILURE


if __name__ == "__main__":
    sys.exit(main())

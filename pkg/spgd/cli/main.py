from __future__ import annotations

import argparse
import logging
import sys
import typing

from spgd import __version__
from spgd.types import CouplingKind, Family, Method, UnivariateKind

from . import commands
from .errors import EXIT_OK, handle_errors
from .options import CommandParser, box, float_list, int_list, seed_list


def _fit_options(cmd: CommandParser) -> None:
    cmd.add("--data", help="training CSV with header s1..sd,f")
    cmd.add("--domain", type=box, help="box lo:hi,lo:hi,... (default: bounding box of the data)")
    cmd.add("--method", default=Method.SPGD.value, choices=[m.value for m in Method], help="regression variant")
    cmd.add("--family", default=Family.CHEBYSHEV.value, choices=[f.value for f in Family], help="polynomial basis")
    cmd.add("--degree-init", type=int, default=1, help="degree of the first modes")
    cmd.add("--degree-max", type=int, default=4, help="largest degree modal adaptivity may reach")
    cmd.add("--alpha", type=float_list, help="elastic net mixing, one value or a comma separated grid")
    cmd.add("--lambda-grid", help="log:lo:hi:n relative to lambda_max, or v1,v2,... absolute")
    cmd.add("--select", default="cv:5", help="cv:K, split:R, one-se:K or train")
    cmd.add("--sparse-dims", help="1-based comma separated dimensions, or auto")
    cmd.add("--sparse-degree", type=int, help="degree of the penalized dimensions")
    cmd.add("--chi-lim", type=int_list, help="support size cap, one value or one per dimension")
    cmd.add("--max-modes", type=int, default=20, help="largest number of modes")
    cmd.add("--patience-modes", type=int, default=2, help="consecutive rejected steps before stopping")
    cmd.add("--tol-fp", type=float, default=1e-6, help="fixed point tolerance")
    cmd.add("--max-fp-iters", type=int, default=50, help="fixed point sweep cap")
    cmd.add("--per-dimension-lambda", action="store_true", help="scale the penalty per dimension")
    cmd.add("--regularize-dense", action="store_true", help="elastic net on the non-sparse dimensions")
    cmd.add("--debug", action="store_true", help="assert objective descent in every direction solve")
    cmd.add("--seed", type=int, default=0, help="seed of folds and restarts")
    cmd.add("--no-concurrent", action="store_true", help="score candidates sequentially")
    cmd.add("--out", help="model JSON")
    cmd.add("--report", help="fit report JSON")


def _predict_options(cmd: CommandParser) -> None:
    cmd.add("--model", help="model JSON written by fit or anova")
    cmd.add("--data", help="CSV with header s1..sd[,f]")
    cmd.add("--out", help="prediction CSV")


def _benchmark_options(cmd: CommandParser) -> None:
    cmd.add("--case", help="case id or all")
    cmd.add("--seeds", type=seed_list, help="0,1,2 or 1..5 (default: the case's seeds)")
    cmd.add("--n-train", type=int, help="training points")
    cmd.add("--n-test", type=int, help="test points")
    cmd.add("--out", help="report JSON")
    cmd.add("--plots", help="directory for plot CSVs")
    cmd.add("--no-concurrent", action="store_true", help="run seeds sequentially")


def _anova_options(cmd: CommandParser) -> None:
    cmd.add("--data", help="CSV containing the anchor and cross samples")
    cmd.add("--domain", type=box, help="box lo:hi,lo:hi,... for --data")
    cmd.add("--case", help="sample a registered case function instead of reading data")
    cmd.add("--anchor", help="center or comma separated coordinates")
    cmd.add("--cross-counts", type=int_list, help="cross samples per dimension (default: 10)")
    cmd.add("--coupling-points", type=int, default=4, help="LHS samples for the coupling term")
    cmd.add("--push-to-boundary", action="store_true", help="move coupling samples toward the faces")
    cmd.add("--univariate", default=UnivariateKind.SPLINE.value, choices=[u.value for u in UnivariateKind])
    cmd.add("--coupling", choices=[c.value for c in CouplingKind], help="coupling model (default: by dimension)")
    cmd.add("--coupling-degree", type=int, default=2, help="degree of the dense coupling")
    cmd.add("--sobol", type=int, default=0, help="Monte Carlo samples for Sobol indices")
    cmd.add("--test", type=int, default=0, help="LHS test points for --case")
    cmd.add("--seed", type=int, default=0)
    cmd.add("--no-concurrent", action="store_true", help="sample cross directions sequentially")
    cmd.add("--out", help="model JSON")


def _sindy_options(cmd: CommandParser) -> None:
    cmd.add("--system", default="lorenz", choices=["lorenz"])
    cmd.add("--samples", type=int, default=102, help="trajectory samples used for identification")
    cmd.add("--split", type=float, default=0.8, help="construction share of the samples")
    cmd.add("--stls-threshold", type=float, default=0.1, help="sequential thresholding cutoff")
    cmd.add("--dt", type=float, default=0.001, help="integration step")
    cmd.add("--horizon", type=float, default=20.0, help="integration time")
    cmd.add("--seed", type=int, default=0)
    cmd.add("--out", help="output directory")


COMMANDS: dict[str, tuple[str, typing.Callable[[CommandParser], None], typing.Callable[..., int]]] = {
    "fit": ("Fit a separated regression model to a CSV dataset", _fit_options, commands.cmd_fit),
    "predict": ("Evaluate a saved model on CSV points", _predict_options, commands.cmd_predict),
    "benchmark": ("Run benchmark cases and check their acceptance gates", _benchmark_options, commands.cmd_benchmark),
    "anova": ("Fit an anchored ANOVA model", _anova_options, commands.cmd_anova),
    "sindy": ("Identify a dynamical system from trajectory samples", _sindy_options, commands.cmd_sindy),
}


def build_parser() -> tuple[argparse.ArgumentParser, dict[str, CommandParser]]:
    parser = argparse.ArgumentParser(prog="spgd", description="Sparse separated-representation regression.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="count", default=0, help="more logging, repeatable")
    parser.add_argument("-q", "--quiet", action="store_true", help="only log errors")
    subparsers = parser.add_subparsers(dest="command")

    parsers = {}
    for name, (description, add_options, _) in COMMANDS.items():
        sub = subparsers.add_parser(name, help=description, description=description)
        sub.add_argument("--config", help="key = value file; flags given on the command line win")
        cmd = CommandParser(sub)
        add_options(cmd)
        parsers[name] = cmd
    return parser, parsers


def configure_logging(verbose: int, quiet: bool) -> None:
    if quiet:
        level = logging.ERROR
    elif verbose >= 2:
        level = logging.DEBUG
    elif verbose == 1:
        level = logging.INFO
    else:
        level = logging.WARNING
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s", force=True)
    logging.captureWarnings(True)


@handle_errors
def run(args: argparse.Namespace, cmd: CommandParser) -> int:
    cmd.apply_config(args, args.config)
    cmd.finalize(args)
    return COMMANDS[args.command][2](args)


def main(argv: typing.Optional[typing.Sequence[str]] = None) -> int:
    parser, parsers = build_parser()
    args = parser.parse_args(argv)
    configure_logging(args.verbose, args.quiet)
    if args.command is None:
        parser.print_help()
        return EXIT_OK
    return run(args, parsers[args.command])


if __name__ == "__main__":
    sys.exit(main())

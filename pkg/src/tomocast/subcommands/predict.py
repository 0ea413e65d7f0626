"""Predict the evolved observable Ψ_t(A) at an arbitrary time

The predicted channel averages the unitary evolution over every Hamiltonian
consistent with the tomography set, weighting the lattice of admissible
Hamiltonians with the chosen prior. The result is written as a JSON matrix.

--method selects the evaluation: the closed blockwise formula (default), the
brute-force enumeration of lattice vectors, or Monte-Carlo sampling of admissible
Hamiltonians. --choi instead reports a complete-positivity certificate of Ψ_t.
"""
import argparse
from pathlib import Path

from tomocast import EXIT_INVALID, EXIT_OK, Console, oracles, predictor, render
from tomocast.errors import ConfigError, CptpError
from tomocast.subcommands import (
    add_input_args,
    add_output_arg,
    add_prior_args,
    load_input,
    positive_int,
    prior_from_args,
    seed_from_args,
)
from tomocast.utils import load_matrix

METHODS = ("closed", "bruteforce", "montecarlo")


def handler(args: argparse.Namespace, console: Console) -> int:
    """Predict an evolved observable"""
    seed = seed_from_args(args)
    channel = predictor.build_channel(
        load_input(args),
        prior_from_args(args),
        q_max=args.qmax,
        rtol=args.rtol,
        cluster_tol=args.cluster_tol,
        tol=args.tol,
        search_bound=args.search_bound,
        seed=seed,
    )
    render.print_warnings(console, channel.warnings)

    if args.choi:
        certificate = predictor.choi(channel, args.t)
        render.emit(
            console,
            render.to_json(
                {
                    "t": args.t,
                    "weight": predictor.weight(channel, args.t),
                    "min_eigenvalue": certificate.min_eigenvalue,
                    "trace_residual": certificate.trace_residual,
                    "hermiticity_residual": certificate.hermiticity_residual,
                    "cptp": certificate.is_cptp(),
                }
            ),
            args.output,
        )

        if certificate.is_cptp():
            return EXIT_OK

        render.print_diagnostic(
            console,
            CptpError(
                args.t,
                certificate.min_eigenvalue,
                certificate.trace_residual,
                certificate.hermiticity_residual,
            ),
        )
        return EXIT_INVALID

    if args.observable is None:
        raise ConfigError("--observable is required unless --choi is given")

    observable = load_matrix(args.observable)

    match args.method:
        case "bruteforce":
            result = oracles.bruteforce_prediction(channel, args.t, observable)
        case "montecarlo":
            result, stderr = oracles.mc_prediction(
                channel, args.t, observable, args.samples, seed
            )
            console.err.print(f"standard error: {render.format_number(stderr)}")
        case _:
            result = predictor.apply(channel, args.t, observable)

    render.emit(console, render.matrix_json(result), args.output)

    return EXIT_OK


def parse_args(parser: argparse.ArgumentParser) -> None:
    """Set subcommand arguments"""
    add_input_args(parser)
    add_prior_args(parser)
    parser.add_argument("--t", "-t", type=float, required=True, help="time")
    parser.add_argument(
        "--observable", type=Path, default=None, help="observable A (matrix JSON)"
    )
    parser.add_argument(
        "--method", choices=METHODS, default="closed", help="evaluation method"
    )
    parser.add_argument(
        "--samples",
        type=positive_int,
        default=10_000,
        help="Monte-Carlo sample count",
    )
    parser.add_argument(
        "--choi",
        action="store_true",
        default=False,
        help="report the Choi-matrix certificate instead of Ψ_t(A)",
    )
    add_output_arg(parser)

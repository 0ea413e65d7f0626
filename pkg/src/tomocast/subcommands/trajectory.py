"""Evolve a density matrix over a time grid

Writes CSV with one row per time: t, the real and imaginary parts of every entry
of ρ(t) in row-major order, and the purity Tr ρ². The grid is "start:step:stop"
with the stop inclusive, or a single time.
"""
import argparse
from pathlib import Path

import numpy as np

from tomocast import EXIT_OK, Console, predictor, render
from tomocast.subcommands import (
    add_input_args,
    add_output_arg,
    add_prior_args,
    load_input,
    prior_from_args,
    seed_from_args,
)
from tomocast.utils import load_matrix, parse_time_grid


def header(dim: int) -> list[str]:
    """CSV column names for a 𝔡×𝔡 state"""
    columns = ["t"]

    for i in range(dim):
        for j in range(dim):
            columns.extend([f"re_{i}_{j}", f"im_{i}_{j}"])

    return columns + ["purity"]


def handler(args: argparse.Namespace, console: Console) -> int:
    """Evolve a state over a time grid"""
    times = parse_time_grid(args.times)
    channel = predictor.build_channel(
        load_input(args),
        prior_from_args(args),
        q_max=args.qmax,
        rtol=args.rtol,
        cluster_tol=args.cluster_tol,
        tol=args.tol,
        search_bound=args.search_bound,
        seed=seed_from_args(args),
    )
    render.print_warnings(console, channel.warnings)
    states = predictor.trajectory(channel, load_matrix(args.state), times)
    rows = []

    for time, state in zip(times, states):
        interleaved = np.stack([state.real, state.imag], axis=-1).reshape(-1)
        purity = np.trace(state @ state).real
        rows.append([time, *interleaved, purity])

    render.emit(console, render.to_csv(header(channel.dim), rows), args.output)

    return EXIT_OK


def parse_args(parser: argparse.ArgumentParser) -> None:
    """Set subcommand arguments"""
    add_input_args(parser)
    add_prior_args(parser)
    parser.add_argument(
        "--times", "-t", required=True, help='time grid, "start:step:stop" or a time'
    )
    parser.add_argument(
        "--state", type=Path, required=True, help="initial density matrix (JSON)"
    )
    add_output_arg(parser)

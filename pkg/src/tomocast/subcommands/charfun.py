"""Tabulate the squared characteristic function of a prior

Writes CSV rows (t, |φ(t)|²) on an evenly spaced grid over [0, 2π·periods],
endpoints included. |φ(2πγt)|² is the weight the predicted channel gives the
unitary part of the evolution.
"""
import argparse

import numpy as np

from tomocast import EXIT_OK, Console, distributions, render
from tomocast.subcommands import (
    add_output_arg,
    add_prior_args,
    positive_float,
    positive_int,
    prior_from_args,
)


def squared_table(
    dist: distributions.PriorDistribution, points: int, periods: float
) -> tuple[np.ndarray, np.ndarray]:
    """The grid and |φ|² on it"""
    grid = np.linspace(0, 2 * np.pi * periods, points)

    return grid, np.abs(distributions.char_fn(dist, grid)) ** 2


def handler(args: argparse.Namespace, console: Console) -> int:
    """Tabulate |φ(t)|² for a prior"""
    grid, values = squared_table(prior_from_args(args), args.grid, args.periods)
    render.emit(console, render.to_csv(["t", "phi_sq"], zip(grid, values)), args.output)

    return EXIT_OK


def parse_args(parser: argparse.ArgumentParser) -> None:
    """Set subcommand arguments"""
    add_prior_args(parser)
    parser.add_argument(
        "--grid", type=positive_int, default=1000, help="number of grid points"
    )
    parser.add_argument(
        "--periods",
        type=positive_float,
        default=1.0,
        help="grid length in units of 2π",
    )
    add_output_arg(parser)

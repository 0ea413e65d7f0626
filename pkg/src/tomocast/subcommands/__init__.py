"""Subcommands for tomocast

A "subcommand" for tomocast is a Python module that has the following interface:

    There must be a function named "handler" with the following signature::

        def handler(args: argparse.Namespace, console: tomocast.Console) -> int:

    The handler is the function called from the cli to handle the subcommand. It is
    passed the command-line arguments (args) and a pair of rich Consoles for output
    and diagnostics. It returns the process exit status.

    There must also be a "parse_args" function with the following signature::

        def parse_args(parser: argparse.ArgumentParser) -> None:

    The parse_args is called by the cli. It is responsible for creating the
    subcommand's command-line arguments. In actuality it is passed a sub-parser
    instance.
"""
import argparse
from pathlib import Path

from tomocast import distributions, hamiltonian, rational, snapshot
from tomocast.errors import ConfigError
from tomocast.utils import SEED_ENVVAR, resolve_seed


def positive_float(value: str) -> float:
    """argparse type for strictly positive reals"""
    try:
        number = float(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {value!r}") from None

    if not number > 0:
        raise argparse.ArgumentTypeError(f"must be positive: {value!r}")

    return number


def positive_int(value: str) -> int:
    """argparse type for strictly positive integers"""
    try:
        number = int(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {value!r}") from None

    if number < 1:
        raise argparse.ArgumentTypeError(f"must be positive: {value!r}")

    return number


def add_input_args(parser: argparse.ArgumentParser) -> None:
    """Set the tomography input and analysis tolerance arguments"""
    parser.add_argument(
        "--input", "-i", type=Path, required=True, help="tomography set (JSON)"
    )
    parser.add_argument(
        "--qmax",
        type=positive_int,
        default=rational.DEFAULT_QMAX,
        help="largest denominator accepted for the time ratios",
    )
    parser.add_argument(
        "--rtol",
        type=positive_float,
        default=rational.DEFAULT_RTOL,
        help="relative tolerance for the time ratios",
    )
    parser.add_argument(
        "--tol",
        type=positive_float,
        default=hamiltonian.DEFAULT_ADMISSIBILITY_TOL,
        help="admissibility tolerance",
    )
    parser.add_argument(
        "--cluster-tol",
        type=positive_float,
        default=snapshot.DEFAULT_CLUSTER_TOL,
        help="joint-eigenphase clustering tolerance",
    )
    parser.add_argument(
        "--search-bound",
        type=positive_int,
        default=hamiltonian.DEFAULT_SEARCH_BOUND,
        help="branches searched when the times are not rationally related",
    )
    add_seed_arg(parser)


def add_seed_arg(parser: argparse.ArgumentParser) -> None:
    """Set the --seed argument"""
    parser.add_argument(
        "--seed",
        type=int,
        default=None,
        help=f"random seed (default: ${SEED_ENVVAR} or 0)",
    )


def add_prior_args(parser: argparse.ArgumentParser, required: bool = True) -> None:
    """Set the prior distribution arguments"""
    parser.add_argument(
        "--family",
        "-f",
        choices=[family.value for family in distributions.Family],
        required=required,
        help="prior distribution family",
    )
    parser.add_argument(
        "--a",
        type=float,
        default=None,
        help="parameter a (exponential, cauchy, normal)",
    )
    parser.add_argument(
        "--m",
        type=int,
        default=None,
        help="parameter m (truncated-uniform, semicircular, binomial)",
    )
    parser.add_argument(
        "--pmf",
        type=Path,
        default=None,
        help='{"k": weight} JSON file for the custom family',
    )


def add_output_arg(parser: argparse.ArgumentParser, what: str = "file") -> None:
    """Set the --output argument"""
    parser.add_argument(
        "--output",
        "-o",
        type=Path,
        default=None,
        help=f"write to this {what} instead of standard output",
    )


def prior_from_args(args: argparse.Namespace) -> distributions.PriorDistribution:
    """Return the prior distribution given on the command line"""
    if args.family == distributions.Family.CUSTOM.value:
        if args.pmf is None:
            raise ConfigError("the custom family needs --pmf")
        return distributions.load_pmf(args.pmf)

    return distributions.PriorDistribution.from_params(args.family, a=args.a, m=args.m)


def load_input(args: argparse.Namespace) -> snapshot.TomographySet:
    """Read the tomography set named by --input"""
    with open(args.input, "rb") as source:
        return snapshot.load_tomography(source)


def seed_from_args(args: argparse.Namespace) -> int:
    """The --seed value, falling back to the environment"""
    return resolve_seed(args.seed)

"""Search for a distant Hamiltonian that reproduces the data

For irrationally related times, H = Ĥ + (2πr/τ₁)K with K of integer spectrum
matches every measured propagator to within epsilon for suitable r, while
‖H − Ĥ‖ grows with r. Writes JSON {r, residuals, distance, hamiltonian}.
"""
import argparse
from pathlib import Path

from tomocast import EXIT_OK, Console, hamiltonian, oracles, rational, render, snapshot
from tomocast.subcommands import (
    add_input_args,
    add_output_arg,
    load_input,
    positive_float,
    positive_int,
    seed_from_args,
)
from tomocast.utils import load_matrix


def handler(args: argparse.Namespace, console: Console) -> int:
    """Find a distant admissible-looking Hamiltonian"""
    tomography = load_input(args)
    decomp = snapshot.shared_eigenspaces(
        tomography, args.cluster_tol, seed_from_args(args)
    )
    structure = rational.rationalize(tomography.times, args.qmax, args.rtol)
    hhat = hamiltonian.extract_min_norm_hamiltonian(
        decomp, structure, tomography.times, args.tol, args.search_bound
    )
    k_operator = None if args.k_operator is None else load_matrix(args.k_operator)
    result = oracles.diophantine_adversary(
        tomography,
        decomp,
        hhat,
        args.epsilon,
        args.rmax,
        k_operator=k_operator,
        beta=args.beta,
    )
    render.emit(
        console,
        render.to_json(
            {
                "r": result.r,
                "residuals": list(result.unitary_residuals),
                "distance": result.hamiltonian_distance,
                "hamiltonian": result.matrix,
            }
        ),
        args.output,
    )

    return EXIT_OK


def parse_args(parser: argparse.ArgumentParser) -> None:
    """Set subcommand arguments"""
    add_input_args(parser)
    parser.add_argument(
        "--epsilon", type=positive_float, default=0.1, help="propagator tolerance"
    )
    parser.add_argument(
        "--rmax", type=positive_int, default=100_000, help="largest r searched"
    )
    parser.add_argument(
        "--beta",
        type=float,
        default=0.0,
        help="require ‖H − Ĥ‖ to exceed this distance",
    )
    parser.add_argument(
        "--k-operator",
        type=Path,
        default=None,
        help="integer-spectrum K (matrix JSON); default: a rank-one projector",
    )
    add_output_arg(parser)

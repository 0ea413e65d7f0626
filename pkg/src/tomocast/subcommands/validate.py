"""Check a tomography set for consistency

Reports the shared eigenspace decomposition, the rational structure of the
measurement times and, for every block, the minimal-norm energy reproducing its
phases. Exits with status 2 when some block admits no energy.
"""
import argparse

from tomocast import EXIT_INVALID, EXIT_OK, Console, rational, render, snapshot
from tomocast.errors import NotConsistentError
from tomocast.subcommands import (
    add_input_args,
    add_output_arg,
    load_input,
    seed_from_args,
)


def handler(args: argparse.Namespace, console: Console) -> int:
    """Validate a tomography set"""
    tomography = load_input(args)
    decomp = snapshot.shared_eigenspaces(
        tomography, args.cluster_tol, seed_from_args(args)
    )
    structure = rational.rationalize(tomography.times, args.qmax, args.rtol)
    report = snapshot.validate_consistency(
        tomography, decomp, structure, args.tol, args.search_bound
    )

    if args.table:
        console.out.print(render.block_table(decomp, report))
        console.out.print(
            f"[header]Consistent:[/header] {render.format_status(report.consistent)}"
        )
    else:
        render.emit(
            console,
            render.to_json(
                {
                    "consistent": report.consistent,
                    "kappa": decomp.kappa,
                    "dims": list(decomp.dims),
                    "rational": structure.rational,
                    "ratios": [list(ratio) for ratio in structure.ratios],
                    "lcm_q": structure.lcm_q,
                    "gamma": structure.gamma,
                    "block_energies": list(report.block_energies),
                    "residuals": list(report.residuals),
                    "warnings": list(report.warnings),
                }
            ),
            args.output,
        )

    render.print_warnings(console, report.warnings)

    if report.consistent:
        return EXIT_OK

    failed = report.failed_blocks()
    render.print_diagnostic(
        console,
        NotConsistentError(failed[0], report.residuals[failed[0]]),
        failed_blocks=failed,
        residuals=list(report.residuals),
    )

    return EXIT_INVALID


def parse_args(parser: argparse.ArgumentParser) -> None:
    """Set subcommand arguments"""
    add_input_args(parser)
    parser.add_argument(
        "--table",
        action="store_true",
        default=False,
        help="show the block decomposition as a table instead of JSON",
    )
    add_output_arg(parser)

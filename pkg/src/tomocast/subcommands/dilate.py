"""Dilate a Kraus operator set to a system-bath unitary

Reads {"n_s": int, "n_e": int, "operators": [matrix, ...]} and writes a unitary U
on the system-bath space with ⟨iα|U|j0⟩ = ⟨i|E_α|j⟩. The free columns are filled
from the seed, so different seeds give different members of the same equivalence
class.
"""
import argparse
from pathlib import Path

from tomocast import EXIT_OK, Console, dilation, render
from tomocast.subcommands import add_output_arg, add_seed_arg, seed_from_args


def handler(args: argparse.Namespace, console: Console) -> int:
    """Dilate Kraus operators to a unitary"""
    kraus = dilation.load_kraus(args.kraus)
    unitary = dilation.kraus_to_unitary(kraus, seed_from_args(args))
    render.emit(console, render.matrix_json(unitary), args.output)

    return EXIT_OK


def parse_args(parser: argparse.ArgumentParser) -> None:
    """Set subcommand arguments"""
    parser.add_argument(
        "--kraus", "-k", type=Path, required=True, help="Kraus operator set (JSON)"
    )
    add_seed_arg(parser)
    add_output_arg(parser)

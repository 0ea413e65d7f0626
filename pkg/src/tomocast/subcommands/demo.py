"""Tabulate |φ(t)|² over [0, 4π] for every built-in family

Writes one CSV per family into the --output directory, with a column t and one
column per parameter value, then prints a summary table of the files written.
"""
import argparse
from pathlib import Path

import numpy as np
from rich import box
from rich.table import Table

from tomocast import EXIT_OK, Console, distributions, render
from tomocast.subcommands import positive_int
from tomocast.subcommands.charfun import squared_table

Family = distributions.Family

DEMO_PARAMS: dict[Family, tuple[str, tuple[int | float, ...]]] = {
    Family.EXPONENTIAL: ("a", (0.5, 1.0, 2.0)),
    Family.TRUNCATED_UNIFORM: ("m", (1, 2, 4)),
    Family.SEMICIRCULAR: ("m", (1, 2, 4)),
    Family.CAUCHY: ("a", (0.5, 1.0, 2.0)),
    Family.BINOMIAL: ("m", (1, 3, 6)),
    Family.NORMAL: ("a", (0.1, 0.5, 1.0)),
}
DEMO_PERIODS = 2.0


def demo_distributions(family: Family) -> list[distributions.PriorDistribution]:
    """The priors tabulated for the given family"""
    name, values = DEMO_PARAMS[family]

    return [
        distributions.PriorDistribution.from_params(family, **{name: value})
        for value in values
    ]


def handler(args: argparse.Namespace, console: Console) -> int:
    """Tabulate |φ(t)|² for the built-in families"""
    args.output.mkdir(parents=True, exist_ok=True)
    table = Table(
        title=f"{len(DEMO_PARAMS)} Families",
        box=box.ROUNDED,
        title_style="header",
        style="box",
    )
    table.add_column("Family", header_style="header")
    table.add_column("File", header_style="header")
    table.add_column("Curves", header_style="header")
    table.add_column("min |φ|²", justify="right", header_style="header")

    for family in DEMO_PARAMS:
        priors = demo_distributions(family)
        columns = [squared_table(prior, args.grid, DEMO_PERIODS) for prior in priors]
        grid = columns[0][0]
        rows = np.column_stack([grid, *(values for _, values in columns)])
        path = args.output / f"{family.value}.csv"
        path.write_text(
            render.to_csv(["t", *(prior.label() for prior in priors)], rows),
            encoding="utf-8",
        )
        table.add_row(
            family.value,
            f"[path]{path}[/path]",
            ", ".join(prior.label() for prior in priors),
            render.format_number(min(values.min() for _, values in columns)),
        )

    console.out.print(table)

    return EXIT_OK


def parse_args(parser: argparse.ArgumentParser) -> None:
    """Set subcommand arguments"""
    parser.add_argument(
        "--output",
        "-o",
        type=Path,
        default=Path("."),
        help="directory to write the CSV files into",
    )
    parser.add_argument(
        "--grid", type=positive_int, default=1000, help="number of grid points"
    )

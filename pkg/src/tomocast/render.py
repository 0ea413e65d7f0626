"""Utilities for rendering output"""
from __future__ import annotations

import csv
import io
import json
from pathlib import Path
from typing import TYPE_CHECKING, Any, Iterable, Sequence

import numpy as np
from rich import box
from rich.table import Table

from tomocast.errors import TomocastError
from tomocast.numkernel import ComplexMatrix
from tomocast.utils import encode_matrix

if TYPE_CHECKING:
    from tomocast import Console
    from tomocast.snapshot import BlockDecomposition, ConsistencyReport


def to_json(data: Any) -> str:
    """Serialize data, converting matrices to [[re, im], ...] nested lists"""

    def default(value: Any) -> Any:
        if isinstance(value, np.ndarray):
            if np.iscomplexobj(value) and value.ndim == 2:
                return encode_matrix(value)
            return value.tolist()
        if isinstance(value, (np.floating, np.integer)):
            return value.item()
        if isinstance(value, complex):
            return [value.real, value.imag]
        raise TypeError(f"{type(value).__name__} is not JSON serializable")

    return json.dumps(data, default=default, sort_keys=True)


def matrix_json(matrix: ComplexMatrix) -> str:
    """A single matrix as JSON"""
    return json.dumps(encode_matrix(matrix))


def to_csv(header: Sequence[str], rows: Iterable[Sequence[float]]) -> str:
    """Render rows as CSV with full float precision"""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)

    for row in rows:
        writer.writerow([repr(float(value)) for value in row])

    return buffer.getvalue()


def emit(console: Console, text: str, output: Path | None = None) -> None:
    """Write an artifact to `output` if given, else to the output console

    Artifacts are printed unstyled.
    """
    if output is not None:
        text = text if text.endswith("\n") else f"{text}\n"
        output.write_text(text, encoding="utf-8")
        return

    console.out.print(
        text.rstrip("\n"), markup=False, highlight=False, soft_wrap=True
    )


def print_warnings(console: Console, warnings: Iterable[str]) -> None:
    """Print warnings on the error console"""
    for warning in warnings:
        console.err.print(f"[warning]warning:[/warning] {warning}", highlight=False)


def print_diagnostic(console: Console, error: TomocastError, **extra: Any) -> None:
    """Print the error's JSON details, merged with `extra`, on the error console"""
    console.err.print(
        to_json({**error.details(), **extra}),
        markup=False,
        highlight=False,
        soft_wrap=True,
    )


def format_number(value: float) -> str:
    """Return the number rich'ly formatted"""
    return f"[number]{value:.6g}[/number]"


def format_status(ok: bool, yes: str = "ok", no: str = "FAIL") -> str:
    """Return a pass/fail marker rich'ly formatted"""
    return f"[ok]{yes}[/ok]" if ok else f"[fail]{no}[/fail]"


def block_table(decomp: BlockDecomposition, report: ConsistencyReport) -> Table:
    """Table of the shared eigenspaces, their phases and admissible energies"""
    table = Table(
        title=f"{decomp.kappa} Blocks",
        box=box.ROUNDED,
        title_style="header",
        style="box",
    )
    table.add_column("Block", justify="right", header_style="header")
    table.add_column("μ", justify="right", header_style="header")
    table.add_column("arg λ", header_style="header")
    table.add_column("ĥ", justify="right", header_style="header")
    table.add_column("Residual", justify="right", header_style="header")

    for i, block in enumerate(decomp.blocks):
        energy = report.block_energies[i]
        angles = ", ".join(f"{np.angle(phase):+.6f}" for phase in block.phases)
        table.add_row(
            str(i),
            str(block.dim),
            angles,
            (
                format_status(False, no="none")
                if energy is None
                else format_number(energy)
            ),
            format_number(report.residuals[i]),
        )

    return table

"""Utility functions"""
import json
import math
import os
from pathlib import Path
from typing import IO, Any

import numpy as np

from tomocast.errors import ConfigError, ParseError
from tomocast.numkernel import ComplexMatrix, RealVector, as_matrix

SEED_ENVVAR = "TOMOCAST_SEED"


def decode_matrix(rows: Any) -> ComplexMatrix:
    """Decode a row-major [[[re, im], ...], ...] nested list into a matrix"""
    try:
        array = np.array(rows, dtype=np.float64)
    except (TypeError, ValueError) as error:
        raise ParseError(f"malformed matrix: {error}") from None

    if array.ndim != 3 or array.shape[-1] != 2:
        raise ParseError(f"matrix entries must be [re, im] pairs, got {array.shape}")

    return as_matrix(array[..., 0] + 1j * array[..., 1])


def encode_matrix(matrix: ComplexMatrix) -> list[list[list[float]]]:
    """Encode a matrix as a row-major [[[re, im], ...], ...] nested list"""
    return [[[float(z.real), float(z.imag)] for z in row] for row in matrix]


def read_json(source: IO[bytes] | bytes | str | Path) -> Any:
    """Parse JSON from a byte stream, raw bytes or a file path"""
    try:
        if isinstance(source, Path):
            return json.loads(source.read_bytes())
        if isinstance(source, (bytes, str)):
            return json.loads(source)
        return json.load(source)
    except (json.JSONDecodeError, UnicodeDecodeError) as error:
        raise ParseError(f"invalid JSON: {error}") from None


def load_matrix(path: str | Path) -> ComplexMatrix:
    """Load a single matrix from a JSON file"""
    return decode_matrix(read_json(Path(path)))


def parse_time_grid(spec: str) -> RealVector:
    """Parse a "start:step:stop" grid (stop inclusive) or a single time

    A bare number is a one-point grid. Raise `ConfigError` when the step is not
    positive or the grid is empty.
    """
    try:
        parts = [float(part) for part in spec.split(":")]
    except ValueError:
        raise ConfigError(f"Invalid time grid: {spec!r}") from None

    if len(parts) == 1:
        return np.array(parts)

    if len(parts) != 3:
        raise ConfigError(f"Invalid time grid: {spec!r}")

    start, step, stop = parts

    if not step > 0:
        raise ConfigError(f"Time grid step must be positive: {spec!r}")

    if stop < start:
        raise ConfigError(f"Time grid is empty: {spec!r}")

    count = math.floor((stop - start) / step + 1e-9) + 1

    return start + step * np.arange(count)


def resolve_seed(seed: int | None) -> int:
    """Return the given seed, else $TOMOCAST_SEED, else 0"""
    if seed is not None:
        return seed

    value = os.getenv(SEED_ENVVAR, "0")

    try:
        return int(value)
    except ValueError:
        raise ConfigError(f"Invalid {SEED_ENVVAR}: {value!r}") from None

"""Tests for tomocast"""
# pylint: disable=protected-access
import argparse
import io
import math
import tempfile
import unittest
from fractions import Fraction
from pathlib import Path
from types import ModuleType
from typing import Sequence
from unittest import mock

import numpy as np
import rich.console
from rich.theme import Theme

from tomocast import Console, distributions, predictor, snapshot
from tomocast.numkernel import ComplexMatrix
from tomocast.theme import DEFAULT_THEME

DATA_DIR = Path(__file__).resolve().parent / "data"

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=np.complex128)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=np.complex128)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=np.complex128)


class TestCase(unittest.TestCase):
    """Custom test case for tomocast"""

    def setUp(self):
        super().setUp()

        self.console = mock.Mock(spec=Console, out=MockConsole(), err=MockConsole())

    def tmpdir(self) -> Path:
        """Return a temporary directory removed at test cleanup"""
        directory = tempfile.TemporaryDirectory()  # pylint: disable=consider-using-with
        self.addCleanup(directory.cleanup)

        return Path(directory.name)

    def write_tomography(self, tomography: snapshot.TomographySet) -> Path:
        """Write the set to a temporary JSON file and return its path"""
        path = self.tmpdir() / "set.json"
        path.write_bytes(snapshot.dump_tomography(tomography))

        return path

    def assert_matrix_equal(self, left, right, atol: float = 1e-10):
        """Assert two matrices agree entrywise to atol"""
        np.testing.assert_allclose(
            np.asarray(left), np.asarray(right), atol=atol, rtol=0
        )


def load_data(filename: str) -> bytes:
    """Read and return content from filename in the data directory"""
    return (DATA_DIR / filename).read_bytes()


def parse_args(module: ModuleType, argv: Sequence[str]) -> argparse.Namespace:
    """Parse argv with the given subcommand module's arguments"""
    parser = argparse.ArgumentParser()
    module.parse_args(parser)

    return parser.parse_args(list(argv))


def random_hermitian(dim: int, rng: np.random.Generator, scale: float = 1.0):
    """A random dim×dim Hermitian matrix"""
    shape = (dim, dim)
    matrix = rng.standard_normal(shape) + 1j * rng.standard_normal(shape)

    return scale * (matrix + matrix.conj().T) / 2


def random_unitary(dim: int, rng: np.random.Generator) -> ComplexMatrix:
    """A random dim×dim unitary"""
    q, _ = np.linalg.qr(random_hermitian(dim, rng) + 1j * np.eye(dim))

    return q


def random_density(dim: int, rng: np.random.Generator) -> ComplexMatrix:
    """A random full-rank density matrix"""
    shape = (dim, dim)
    ginibre = rng.standard_normal(shape) + 1j * rng.standard_normal(shape)
    rho = ginibre @ ginibre.conj().T

    return rho / np.trace(rho)


def lattice_hamiltonian(
    energies: Sequence[float], dims: Sequence[int], rng: np.random.Generator
) -> ComplexMatrix:
    """A Hamiltonian with the given block energies, block sizes and a random basis"""
    diagonal = np.repeat(np.asarray(energies, dtype=float), dims)
    basis = random_unitary(len(diagonal), rng)

    return basis @ np.diag(diagonal) @ basis.conj().T


def consistent_set(
    dims: Sequence[int],
    times: Sequence[float],
    rng: np.random.Generator,
    gamma: float | None = None,
) -> snapshot.TomographySet:
    """A set synthesized from a block Hamiltonian with well-separated energies

    Energies are drawn inside (−πγ, πγ] when `gamma` is given so that they are the
    minimal-norm branch.
    """
    kappa = len(dims)
    bound = np.pi * (gamma if gamma is not None else 1.0)
    grid = np.linspace(-0.8 * bound, 0.8 * bound, kappa + 2)[1:-1]
    energies = grid + rng.uniform(-0.05, 0.05, size=kappa) * bound / (kappa + 1)

    return snapshot.synthesize_tomography(
        lattice_hamiltonian(energies, dims, rng), times
    )


def random_dims(dim: int, rng: np.random.Generator) -> list[int]:
    """A random split of dim into block sizes"""
    kappa = int(rng.integers(1, dim + 1))
    cuts = np.sort(rng.choice(np.arange(1, dim), size=kappa - 1, replace=False))

    return np.diff([0, *cuts, dim]).tolist()


def random_rational_times(
    count: int, rng: np.random.Generator, max_denominator: int = 12
) -> tuple[list[float], float]:
    """Increasing times τ₁·p_j/q_j with q_j ≤ max_denominator, and their γ"""
    ratios = {Fraction(1)}

    while len(ratios) < count:
        q = int(rng.integers(1, max_denominator + 1))
        ratios.add(Fraction(int(rng.integers(q + 1, 4 * q + 1)), q))

    gamma = float(rng.uniform(0.5, 2.0))
    first = math.lcm(*(ratio.denominator for ratio in ratios)) / gamma

    return [first * float(ratio) for ratio in sorted(ratios)], gamma


def random_consistent_set(
    rng: np.random.Generator, max_dim: int = 6, max_times: int = 3
) -> snapshot.TomographySet:
    """A consistent set of random dimension, block structure and rational times"""
    dim = int(rng.integers(2, max_dim + 1))
    times, gamma = random_rational_times(int(rng.integers(1, max_times + 1)), rng)

    return consistent_set(random_dims(dim, rng), times, rng, gamma)


def random_matrix(dim: int, rng: np.random.Generator) -> ComplexMatrix:
    """A random dim×dim complex matrix"""
    return random_hermitian(dim, rng) + 1j * random_hermitian(dim, rng)


def qubit_channel(
    energy: float, dist: distributions.PriorDistribution, times=(1.0, 2.0)
) -> predictor.PredictedChannel:
    """Channel of a qubit with Ĥ = energy·σ_z"""
    return predictor.build_channel(
        snapshot.synthesize_tomography(energy * SIGMA_Z, times), dist
    )


class MockConsole:
    """Mock rich.console.Console

    Output goes to a StringIO readable with getvalue(); the default theme applies.
    """

    def __init__(self):
        self.string_io = io.StringIO()
        self.console = rich.console.Console(
            file=self.string_io, theme=Theme(DEFAULT_THEME), width=200
        )

    def print(self, *args, **kwargs):
        """Print to the buffer"""
        return self.console.print(*args, **kwargs)

    def getvalue(self) -> str:
        """Return everything printed so far"""
        return self.string_io.getvalue()

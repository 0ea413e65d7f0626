"""Tomography snapshots and their shared eigenspaces

A tomography set is the raw input: measurement times τ₁ < … < τ_M and the unitary
propagators U⁽ʲ⁾ measured at those times. A consistent set is mutually commuting,
so it splits the Hilbert space into maximal joint eigenspaces V_i on which every
U⁽ʲ⁾ acts as a phase λ_i⁽ʲ⁾.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import combinations
from typing import IO, TYPE_CHECKING, Any, Sequence

import numpy as np
import scipy.linalg
from scipy.sparse.csgraph import connected_components

from tomocast import hamiltonian
from tomocast.errors import (
    InconsistencyError,
    ParseError,
    TimeOrderError,
    UnitarityError,
)
from tomocast.numkernel import (
    ComplexMatrix,
    dagger,
    expm_i_herm,
    hs_norm,
    unitarity_residual,
)
from tomocast.utils import decode_matrix, encode_matrix, read_json

if TYPE_CHECKING:
    from tomocast.rational import RationalStructure

UNITARITY_TOL = 1e-8
DEFAULT_CLUSTER_TOL = 1e-7
NEAR_THRESHOLD_FACTOR = 10.0
MAX_REFINEMENTS = 8


@dataclass(frozen=True, eq=False)
class TomographySet:
    """Measurement times and the unitary propagators measured at them"""

    times: tuple[float, ...]
    unitaries: tuple[ComplexMatrix, ...]

    def __post_init__(self) -> None:
        if not self.times:
            raise TimeOrderError("at least one measurement time is required")

        if len(self.times) != len(self.unitaries):
            raise ParseError(
                f"{len(self.times)} times but {len(self.unitaries)} unitaries"
            )

        if not np.all(np.isfinite(self.times)):
            raise TimeOrderError(f"times must be finite, got {self.times}")

        if self.times[0] <= 0:
            raise TimeOrderError(f"times must be positive, got {self.times[0]}")

        for earlier, later in zip(self.times, self.times[1:]):
            if not later > earlier:
                raise TimeOrderError(f"times not strictly increasing: {self.times}")

        dim = self.unitaries[0].shape[0]
        for j, unitary in enumerate(self.unitaries):
            if unitary.shape != (dim, dim):
                raise ParseError(f"unitary {j} has shape {unitary.shape}")

            if (residual := unitarity_residual(unitary)) > UNITARITY_TOL:
                raise UnitarityError(j, residual)

    @property
    def dim(self) -> int:
        """Hilbert space dimension 𝔡"""
        return self.unitaries[0].shape[0]

    def __len__(self) -> int:
        return len(self.times)


@dataclass(frozen=True)
class Block:
    """A maximal joint eigenspace V_i: columns [start, start + dim) of the basis"""

    start: int
    dim: int
    phases: tuple[complex, ...]

    @property
    def indices(self) -> slice:
        """Slice selecting the block's basis columns"""
        return slice(self.start, self.start + self.dim)


@dataclass(frozen=True, eq=False)
class BlockDecomposition:
    """ℋ = ⊕ V_i with a basis Ω whose columns are grouped by block"""

    basis: ComplexMatrix
    blocks: tuple[Block, ...]
    warnings: tuple[str, ...] = field(default=())

    @property
    def kappa(self) -> int:
        """Number of blocks κ"""
        return len(self.blocks)

    @property
    def dim(self) -> int:
        """Hilbert space dimension 𝔡"""
        return self.basis.shape[0]

    @property
    def dims(self) -> tuple[int, ...]:
        """Block dimensions μ_i"""
        return tuple(block.dim for block in self.blocks)

    def labels(self) -> np.ndarray:
        """Block index of each basis column"""
        return np.repeat(np.arange(self.kappa), self.dims)

    def to_basis(self, matrix: ComplexMatrix) -> ComplexMatrix:
        """Ω†AΩ"""
        return dagger(self.basis) @ matrix @ self.basis

    def from_basis(self, matrix: ComplexMatrix) -> ComplexMatrix:
        """ΩAΩ†"""
        return self.basis @ matrix @ dagger(self.basis)

    def block_scalar_residual(self, unitary: ComplexMatrix, j: int) -> float:
        """‖Ω†UΩ − ⊕ λ_i⁽ʲ⁾𝟙‖_HS for the j-th propagator"""
        expected = np.diag(
            np.concatenate([[block.phases[j]] * block.dim for block in self.blocks])
        )
        return hs_norm(self.to_basis(unitary) - expected)


@dataclass(frozen=True)
class ConsistencyReport:
    """Outcome of validate_consistency()"""

    consistent: bool
    residuals: tuple[float, ...]
    block_energies: tuple[float | None, ...]
    warnings: tuple[str, ...] = ()

    def failed_blocks(self) -> list[int]:
        """Indices of the blocks with no admissible energy"""
        return [i for i, energy in enumerate(self.block_energies) if energy is None]


def load_tomography(source: IO[bytes] | bytes) -> TomographySet:
    """Read a tomography set from JSON

    The schema is {"times": [float, ...], "unitaries": [matrix, ...]} with
    matrices as row-major [[[re, im], ...], ...] nested lists.
    """
    data = read_json(source)

    if not isinstance(data, dict) or not {"times", "unitaries"} <= data.keys():
        raise ParseError('expected an object with "times" and "unitaries"')

    try:
        times = tuple(float(time) for time in data["times"])
    except (TypeError, ValueError):
        raise ParseError('"times" must be a list of numbers') from None

    if not isinstance(data["unitaries"], list):
        raise ParseError('"unitaries" must be a list of matrices')

    unitaries = tuple(decode_matrix(rows) for rows in data["unitaries"])

    return TomographySet(times=times, unitaries=unitaries)


def dump_tomography(tomography: TomographySet) -> bytes:
    """Serialize a tomography set to the JSON accepted by load_tomography()"""
    data: dict[str, Any] = {
        "times": list(tomography.times),
        "unitaries": [encode_matrix(unitary) for unitary in tomography.unitaries],
    }
    return json.dumps(data).encode("utf-8")


def synthesize_tomography(
    hamiltonian_matrix: ComplexMatrix, times: Sequence[float]
) -> TomographySet:
    """Forward model: U⁽ʲ⁾ = e^{−iτ_jH₀}"""
    return TomographySet(
        times=tuple(float(time) for time in times),
        unitaries=tuple(expm_i_herm(hamiltonian_matrix, time) for time in times),
    )


def _check_commuting(unitaries: Sequence[ComplexMatrix], tol: float) -> None:
    for j, k in combinations(range(len(unitaries)), 2):
        left, right = unitaries[j], unitaries[k]
        if (norm := hs_norm(left @ right - right @ left)) > tol:
            raise InconsistencyError(j, k, norm)


def _generic_basis(
    unitaries: Sequence[ComplexMatrix], rng: np.random.Generator
) -> ComplexMatrix:
    """Eigenbasis of a random real combination of the Hermitian and anti-Hermitian
    parts of the unitaries

    A generic combination separates joint eigenspaces with probability one.
    """
    dim = unitaries[0].shape[0]
    combination = np.zeros((dim, dim), dtype=np.complex128)

    for unitary in unitaries:
        real_part = (unitary + dagger(unitary)) / 2
        imag_part = (unitary - dagger(unitary)) / 2j
        c_real, c_imag = rng.uniform(-1.0, 1.0, size=2)
        combination += c_real * real_part + c_imag * imag_part

    _, vectors = scipy.linalg.eigh((combination + dagger(combination)) / 2)

    return vectors


def _joint_phases(
    unitaries: Sequence[ComplexMatrix], vectors: ComplexMatrix
) -> np.ndarray:
    """(columns, M) array of v†U⁽ʲ⁾v"""
    return np.stack(
        [
            np.einsum("ia,ij,ja->a", vectors.conj(), unitary, vectors)
            for unitary in unitaries
        ],
        axis=1,
    )


def _phase_distances(phases: np.ndarray) -> np.ndarray:
    """Pairwise max_j |λ_a⁽ʲ⁾ − λ_b⁽ʲ⁾|"""
    return np.abs(phases[:, np.newaxis, :] - phases[np.newaxis, :, :]).max(axis=2)


def _split(
    unitaries: Sequence[ComplexMatrix],
    tol: float,
    rng: np.random.Generator,
    depth: int = 0,
) -> list[ComplexMatrix]:
    """Split the space the (restricted) unitaries act on into joint eigenspaces

    Returns the orthonormal column blocks. Clusters that are not block-scalar to
    tolerance (a near-degenerate combination mixed two eigenspaces) are split again
    with fresh coefficients.
    """
    vectors = _generic_basis(unitaries, rng)
    phases = _joint_phases(unitaries, vectors)
    _, labels = connected_components(_phase_distances(phases) <= tol, directed=False)
    subspaces = []

    for label in np.unique(labels):
        subspace = vectors[:, labels == label]
        restricted = [dagger(subspace) @ unitary @ subspace for unitary in unitaries]
        scalar = all(
            hs_norm(block - np.trace(block) / len(block) * np.eye(len(block)))
            <= tol * np.sqrt(len(block))
            for block in restricted
        )

        if scalar or subspace.shape[1] == 1 or depth >= MAX_REFINEMENTS:
            subspaces.append(subspace)
        else:
            subspaces.extend(
                subspace @ part for part in _split(restricted, tol, rng, depth + 1)
            )

    return subspaces


def _fix_column_phases(vectors: ComplexMatrix) -> ComplexMatrix:
    """Rotate each column so its largest-magnitude entry is real and positive"""
    pivots = vectors[np.argmax(np.abs(vectors), axis=0), np.arange(vectors.shape[1])]

    return vectors * (pivots.conj() / np.abs(pivots))


def shared_eigenspaces(
    tomography: TomographySet, tol: float = DEFAULT_CLUSTER_TOL, seed: int = 0
) -> BlockDecomposition:
    """Compute the maximal joint eigenspace decomposition of the propagators

    Joint phase tuples are clustered by single linkage with a per-coordinate
    threshold `tol`. Blocks are ordered by their joint eigenphase angles.
    """
    unitaries = tomography.unitaries
    _check_commuting(unitaries, tol)

    rng = np.random.default_rng(seed)
    pieces = []

    for subspace in _split(unitaries, tol, rng):
        subspace = _fix_column_phases(subspace)
        traces = np.array(
            [np.trace(dagger(subspace) @ unitary @ subspace) for unitary in unitaries]
        )
        phases = traces / np.abs(traces)
        pieces.append((tuple(np.angle(phases)), subspace, phases))

    pieces.sort(key=lambda piece: piece[0])

    blocks = []
    start = 0
    for _, subspace, phases in pieces:
        dim = subspace.shape[1]
        blocks.append(
            Block(start=start, dim=dim, phases=tuple(complex(p) for p in phases))
        )
        start += dim

    basis = np.concatenate([subspace for _, subspace, _ in pieces], axis=1)

    return BlockDecomposition(
        basis=basis,
        blocks=tuple(blocks),
        warnings=_near_threshold_warnings(blocks, tol),
    )


def _near_threshold_warnings(blocks: Sequence[Block], tol: float) -> tuple[str, ...]:
    warnings = []

    for i, k in combinations(range(len(blocks)), 2):
        gap = max(
            abs(left - right) for left, right in zip(blocks[i].phases, blocks[k].phases)
        )
        if gap <= NEAR_THRESHOLD_FACTOR * tol:
            warnings.append(
                f"blocks {i} and {k} are separated by {gap:.3e}, within "
                f"{NEAR_THRESHOLD_FACTOR:g}x the clustering tolerance"
            )

    return tuple(warnings)


def validate_consistency(
    tomography: TomographySet,
    decomp: BlockDecomposition,
    structure: RationalStructure,
    tol: float = hamiltonian.DEFAULT_ADMISSIBILITY_TOL,
    search_bound: int = hamiltonian.DEFAULT_SEARCH_BOUND,
) -> ConsistencyReport:
    """Check that every block admits an energy reproducing its phases at all times

    Failures are reported, not raised.
    """
    branches = hamiltonian.branch_count(structure, search_bound)
    solutions = [
        hamiltonian.solve_block_energy(block.phases, tomography.times, branches, tol)
        for block in decomp.blocks
    ]

    return ConsistencyReport(
        consistent=all(solution.energy is not None for solution in solutions),
        residuals=tuple(solution.residual for solution in solutions),
        block_energies=tuple(solution.energy for solution in solutions),
        warnings=decomp.warnings,
    )

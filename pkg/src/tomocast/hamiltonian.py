"""Admissible Hamiltonians

A Hamiltonian H is admissible for a tomography set when e^{−iτ_jH} = U⁽ʲ⁾ for every
measurement. The distinguished one, Ĥ, is block-scalar on the shared eigenspaces and
has the minimal Hilbert-Schmidt norm. When the times are rationally related every
other admissible Hamiltonian is Ĥ shifted by 2πγ times a blockwise Hermitian
operator with integer spectrum.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import TYPE_CHECKING, Sequence

import numpy as np
import scipy.linalg

from tomocast import distributions
from tomocast.errors import ConfigError, DimensionError, NotConsistentError
from tomocast.numkernel import (
    ComplexMatrix,
    check_hermitian,
    dagger,
    expm_i_herm,
    haar_unitary,
    hs_norm,
)

if TYPE_CHECKING:
    from tomocast.rational import RationalStructure
    from tomocast.snapshot import BlockDecomposition, TomographySet

DEFAULT_ADMISSIBILITY_TOL = 1e-8
DEFAULT_SEARCH_BOUND = 256
MAX_BRANCHES = 10**6


@dataclass(frozen=True)
class BranchSolution:
    """Result of the branch search for a single block

    `energy` is None when no branch reproduces the phases to tolerance; `residual`
    is then the best residual seen.
    """

    energy: float | None
    residual: float
    passing: tuple[float, ...]


@dataclass(frozen=True, eq=False)
class AdmissibleHamiltonian:
    """Ĥ = Ω(⊕ ĥ_i𝟙_{μ_i})Ω†

    `gamma` is None when the times are not rationally related; the admissible family
    is then the singleton {Ĥ}.
    """

    block_energies: tuple[float, ...]
    matrix: ComplexMatrix
    gamma: float | None
    residuals: tuple[float, ...]


@dataclass(frozen=True, eq=False)
class AdmissibleFamilyElement:
    """H = Ĥ + 2πγ·ΩR†diag(k⃗)RΩ†"""

    base: AdmissibleHamiltonian
    k_vector: tuple[int, ...]
    rotations: tuple[ComplexMatrix, ...]
    matrix: ComplexMatrix


@dataclass(frozen=True)
class AdmissibilityReport:
    """Outcome of verify_admissible()"""

    ok: bool
    residuals: tuple[float, ...]


def branch_count(structure: RationalStructure, search_bound: int) -> int:
    """Number of logarithm branches to try per block

    This is LCM{q_j} for rationally related times and `search_bound` otherwise.
    """
    count = structure.lcm_q if structure.rational else search_bound

    if count is None or count < 1:
        raise ConfigError(f"invalid branch count {count}")

    if count > MAX_BRANCHES:
        raise ConfigError(
            f"branch search needs {count} branches; the limit is {MAX_BRANCHES}"
        )

    return count


def reduce_to_window(values: np.ndarray, width: float) -> np.ndarray:
    """Reduce values modulo `width` into the half-open window (−width/2, width/2]"""
    return values - width * np.ceil((values - width / 2) / width)


def solve_block_energy(
    phases: Sequence[complex],
    times: Sequence[float],
    branches: int,
    tol: float = DEFAULT_ADMISSIBILITY_TOL,
) -> BranchSolution:
    """Find the minimal-|ĥ| energy with e^{−iτ_jĥ} = λ⁽ʲ⁾ for every j

    The candidates (−arg λ⁽¹⁾ + 2πn)/τ₁, n = 0, …, branches − 1, are reduced into
    (−π·branches/τ₁, π·branches/τ₁]. Ties at equal |ĥ| go to the positive value.
    """
    times_array = np.asarray(times, dtype=np.float64)
    phases_array = np.asarray(phases, dtype=np.complex128)
    tau = times_array[0]

    candidates = (-np.angle(phases_array[0]) + 2 * np.pi * np.arange(branches)) / tau
    candidates = reduce_to_window(candidates, 2 * np.pi * branches / tau)
    predicted = np.exp(-1j * np.outer(candidates, times_array))
    residuals = np.abs(predicted - phases_array).max(axis=1)
    passing = candidates[residuals <= tol]

    if not passing.size:
        return BranchSolution(
            energy=None, residual=float(residuals.min()), passing=()
        )

    energy = min(passing, key=lambda h: (abs(h), -h))

    return BranchSolution(
        energy=float(energy),
        residual=float(residuals[candidates == energy][0]),
        passing=tuple(float(h) for h in passing),
    )


def extract_min_norm_hamiltonian(
    decomp: BlockDecomposition,
    structure: RationalStructure,
    times: Sequence[float],
    tol: float = DEFAULT_ADMISSIBILITY_TOL,
    search_bound: int = DEFAULT_SEARCH_BOUND,
) -> AdmissibleHamiltonian:
    """Return the block-scalar admissible Hamiltonian of minimal Hilbert-Schmidt norm

    Raise `NotConsistentError` for the first block with no passing branch.
    """
    branches = branch_count(structure, search_bound)
    energies = []
    residuals = []

    for i, block in enumerate(decomp.blocks):
        solution = solve_block_energy(block.phases, times, branches, tol)

        if solution.energy is None:
            raise NotConsistentError(i, solution.residual)

        energies.append(solution.energy)
        residuals.append(solution.residual)

    diagonal = np.repeat(energies, decomp.dims).astype(np.complex128)
    matrix = decomp.from_basis(np.diag(diagonal))

    return AdmissibleHamiltonian(
        block_energies=tuple(energies),
        matrix=(matrix + dagger(matrix)) / 2,
        gamma=structure.gamma if structure.rational else None,
        residuals=tuple(residuals),
    )


def admissible_family_element(
    base: AdmissibleHamiltonian,
    decomp: BlockDecomposition,
    k_vector: Sequence[int],
    rotations: Sequence[ComplexMatrix] | None = None,
) -> AdmissibleFamilyElement:
    """Build H = Ĥ + 2πγ·ΩR†diag(k⃗)RΩ† from explicit lattice data

    `rotations` holds one unitary per block (identity when omitted). A non-zero
    k⃗ needs rationally related times.
    """
    k_tuple = tuple(int(k) for k in k_vector)

    if len(k_tuple) != decomp.dim:
        raise DimensionError(
            "k_vector length must equal the dimension",
            expected=decomp.dim,
            got=len(k_tuple),
        )

    if rotations is None:
        rotations = [np.eye(dim, dtype=np.complex128) for dim in decomp.dims]

    if tuple(rotation.shape[0] for rotation in rotations) != decomp.dims:
        raise DimensionError(
            "rotations must match the block dimensions",
            expected=decomp.dims,
            got=tuple(rotation.shape for rotation in rotations),
        )

    if not any(k_tuple):
        matrix = base.matrix
    elif base.gamma is None:
        raise ConfigError(
            "times are not rationally related; the admissible family is {Ĥ}"
        )
    else:
        rotation = scipy.linalg.block_diag(*rotations)
        shift = dagger(rotation) @ np.diag(np.array(k_tuple, dtype=float)) @ rotation
        matrix = base.matrix + 2 * np.pi * base.gamma * decomp.from_basis(shift)
        matrix = (matrix + dagger(matrix)) / 2

    return AdmissibleFamilyElement(
        base=base,
        k_vector=k_tuple,
        rotations=tuple(np.asarray(rotation) for rotation in rotations),
        matrix=matrix,
    )


def sample_admissible(
    base: AdmissibleHamiltonian,
    decomp: BlockDecomposition,
    k_dist: distributions.PriorDistribution,
    seed: int | np.random.Generator,
) -> AdmissibleFamilyElement:
    """Draw an admissible Hamiltonian: k⃗ i.i.d. from `k_dist`, Haar R_i per block

    With irrationally related times the only admissible Hamiltonian is Ĥ and it
    is returned with k⃗ = 0.
    """
    rng = np.random.default_rng(seed)

    if base.gamma is None:
        return admissible_family_element(base, decomp, [0] * decomp.dim)

    k_vector = distributions.sample_k(k_dist, decomp.dim, rng)
    rotations = [haar_unitary(dim, rng) for dim in decomp.dims]

    return admissible_family_element(base, decomp, k_vector, rotations)


def verify_admissible(
    matrix: ComplexMatrix,
    tomography: TomographySet,
    tol: float = DEFAULT_ADMISSIBILITY_TOL,
) -> AdmissibilityReport:
    """Check ‖e^{−iτ_jH} − U⁽ʲ⁾‖_HS ≤ tol·√𝔡 for every measurement"""
    check_hermitian(matrix)

    if matrix.shape != (tomography.dim, tomography.dim):
        raise DimensionError(
            "Hamiltonian and propagators differ in dimension",
            expected=tomography.dim,
            got=matrix.shape,
        )

    residuals = tuple(
        hs_norm(expm_i_herm(matrix, time) - unitary)
        for time, unitary in zip(tomography.times, tomography.unitaries)
    )
    threshold = tol * math.sqrt(tomography.dim)

    return AdmissibilityReport(
        ok=all(residual <= threshold for residual in residuals), residuals=residuals
    )

"""The maximum-ignorance predicted evolution

Averaging e^{−itH}Ae^{itH} over the admissible Hamiltonians, with i.i.d. lattice
coordinates drawn from a prior and Haar-random block rotations, gives the channel

    Ψ_t(A) = w·e^{−itĤ}Ae^{itĤ} + (1 − w)[ΥP^C(A) + (𝟙 − Υ)P^B(A)],

where w = |φ(2πγt)|². It is evaluated block by block in the shared eigenbasis.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from tomocast import distributions, hamiltonian, rational, snapshot
from tomocast.errors import DimensionError
from tomocast.numkernel import (
    ComplexMatrix,
    as_matrix,
    check_density,
    hermiticity_residual,
)

CHOI_TOL = 1e-9
IRRATIONAL_WARNING = (
    "times are not rationally related: the prediction is the unitary evolution "
    "under the minimal-norm Hamiltonian and is highly non-robust without "
    "additional constraints"
)


@dataclass(frozen=True, eq=False)
class PredictedChannel:
    """The one-parameter family of CP maps Ψ_t for a tomography set"""

    decomp: snapshot.BlockDecomposition
    hhat: hamiltonian.AdmissibleHamiltonian
    dist: distributions.PriorDistribution
    gamma: float | None
    warnings: tuple[str, ...] = ()

    @property
    def dim(self) -> int:
        """Hilbert space dimension 𝔡"""
        return self.decomp.dim


@dataclass(frozen=True, eq=False)
class ChoiMatrix:
    """J = Σ_jk Ψ(|j⟩⟨k|) ⊗ |j⟩⟨k|, normalized to trace 𝔡"""

    matrix: ComplexMatrix
    dim: int

    @property
    def min_eigenvalue(self) -> float:
        """Smallest eigenvalue of the Hermitian part"""
        hermitian = (self.matrix + self.matrix.conj().T) / 2

        return float(np.linalg.eigvalsh(hermitian)[0])

    @property
    def trace_residual(self) -> float:
        """|Tr J − 𝔡|"""
        return float(abs(np.trace(self.matrix) - self.dim))

    @property
    def hermiticity_residual(self) -> float:
        """‖J − J†‖_HS"""
        return hermiticity_residual(self.matrix)

    def is_cptp(self, tol: float = CHOI_TOL) -> bool:
        """Complete positivity and trace preservation to tolerance"""
        return (
            self.hermiticity_residual <= tol
            and self.trace_residual <= tol
            and self.min_eigenvalue >= -tol
        )


def build_channel(
    tomography: snapshot.TomographySet,
    dist: distributions.PriorDistribution,
    *,
    q_max: int = rational.DEFAULT_QMAX,
    rtol: float = rational.DEFAULT_RTOL,
    cluster_tol: float = snapshot.DEFAULT_CLUSTER_TOL,
    tol: float = hamiltonian.DEFAULT_ADMISSIBILITY_TOL,
    search_bound: int = hamiltonian.DEFAULT_SEARCH_BOUND,
    seed: int = 0,
) -> PredictedChannel:
    """Run the pipeline from tomography data to the predicted channel

    Raise `InconsistencyError` or `NotConsistentError` when the data admits no
    Hamiltonian.
    """
    decomp = snapshot.shared_eigenspaces(tomography, cluster_tol, seed)
    structure = rational.rationalize(tomography.times, q_max, rtol)
    hhat = hamiltonian.extract_min_norm_hamiltonian(
        decomp, structure, tomography.times, tol, search_bound
    )
    warnings = decomp.warnings

    if not structure.rational:
        warnings += (IRRATIONAL_WARNING,)

    return PredictedChannel(
        decomp=decomp, hhat=hhat, dist=dist, gamma=hhat.gamma, warnings=warnings
    )


def _check_dim(matrix: ComplexMatrix, decomp: snapshot.BlockDecomposition) -> None:
    if matrix.shape != (decomp.dim, decomp.dim):
        raise DimensionError(
            "operator dimension differs from the tomography set",
            expected=decomp.dim,
            got=matrix.shape,
        )


def _same_block(decomp: snapshot.BlockDecomposition) -> np.ndarray:
    labels = decomp.labels()

    return labels[:, np.newaxis] == labels[np.newaxis, :]


def pinch_commutant(
    matrix: ComplexMatrix, decomp: snapshot.BlockDecomposition
) -> ComplexMatrix:
    """P^C: keep the diagonal blocks A_ii in the shared eigenbasis, zero the rest"""
    _check_dim(matrix, decomp)
    rotated = decomp.to_basis(matrix)

    return decomp.from_basis(np.where(_same_block(decomp), rotated, 0))


def _block_traces(rotated: ComplexMatrix, decomp: snapshot.BlockDecomposition) -> list:
    return [np.trace(rotated[block.indices, block.indices]) for block in decomp.blocks]


def project_bicommutant(
    matrix: ComplexMatrix, decomp: snapshot.BlockDecomposition
) -> ComplexMatrix:
    """P^B: replace each diagonal block by Tr(A_ii)/μ_i·𝟙 and zero the rest"""
    _check_dim(matrix, decomp)
    traces = _block_traces(decomp.to_basis(matrix), decomp)
    diagonal = np.repeat(
        [trace / block.dim for trace, block in zip(traces, decomp.blocks)],
        decomp.dims,
    )

    return decomp.from_basis(np.diag(diagonal))


def upsilon(decomp: snapshot.BlockDecomposition) -> ComplexMatrix:
    """Υ = ⊕ 1/(μ_i + 1)·𝟙_{V_i}"""
    diagonal = np.repeat([1 / (dim + 1) for dim in decomp.dims], decomp.dims)

    return decomp.from_basis(np.diag(diagonal.astype(np.complex128)))


def weight(channel: PredictedChannel, t: float) -> float:
    """w = |φ(2πγt)|², the surviving weight of the unitary part

    It is identically 1 when the times are not rationally related.
    """
    if channel.gamma is None:
        return 1.0

    return abs(distributions.char_fn(channel.dist, 2 * np.pi * channel.gamma * t)) ** 2


def apply(channel: PredictedChannel, t: float, matrix: ComplexMatrix) -> ComplexMatrix:
    """Ψ_t(A)

    Off-diagonal blocks pick up e^{−it(ĥ_i−ĥ_j)}·w and diagonal blocks become
    α_i·A_ii + (1 − α_i)Tr(A_ii)/μ_i·𝟙 with α_i = w + (1 − w)/(μ_i + 1). One-dimensional
    blocks are left untouched.
    """
    decomp = channel.decomp
    matrix = as_matrix(matrix)
    _check_dim(matrix, decomp)

    w = weight(channel, t)
    energies = np.repeat(channel.hhat.block_energies, decomp.dims)
    rotated = decomp.to_basis(matrix)
    result = w * np.exp(-1j * t * np.subtract.outer(energies, energies)) * rotated

    for block in decomp.blocks:
        piece = rotated[block.indices, block.indices]

        if block.dim == 1:
            result[block.indices, block.indices] = piece
            continue

        alpha = w + (1 - w) / (block.dim + 1)
        mixed = np.trace(piece) / block.dim * np.eye(block.dim)
        result[block.indices, block.indices] = alpha * piece + (1 - alpha) * mixed

    return decomp.from_basis(result)


def choi(channel: PredictedChannel, t: float) -> ChoiMatrix:
    """Choi matrix of Ψ_t"""
    dim = channel.dim
    matrix = np.zeros((dim * dim, dim * dim), dtype=np.complex128)

    for j in range(dim):
        for k in range(dim):
            unit = np.zeros((dim, dim), dtype=np.complex128)
            unit[j, k] = 1
            matrix += np.kron(apply(channel, t, unit), unit)

    return ChoiMatrix(matrix=matrix, dim=dim)


def trajectory(
    channel: PredictedChannel, rho0: ComplexMatrix, times: Sequence[float]
) -> list[ComplexMatrix]:
    """Evolve a density matrix: [Ψ_t(ρ₀) for t in times]

    Raise `StateError` when ρ₀ is not a density matrix.
    """
    rho0 = as_matrix(rho0)
    _check_dim(rho0, channel.decomp)
    check_density(rho0)

    return [apply(channel, t, rho0) for t in times]


def qubit_dephasing_form(
    z_operator: ComplexMatrix, a: float, w: float, t: float, matrix: ComplexMatrix
) -> ComplexMatrix:
    """Closed form for a qubit with two one-dimensional blocks and Ĥ = aẐ + b𝟙

    Ψ_t(A) = ½(A + ẐAẐ) + ½w(cos(2at)(A − ẐAẐ) − i·sin(2at)[Ẑ, A])
    """
    flipped = z_operator @ matrix @ z_operator
    commutator = z_operator @ matrix - matrix @ z_operator

    return (matrix + flipped) / 2 + w / 2 * (
        np.cos(2 * a * t) * (matrix - flipped) - 1j * np.sin(2 * a * t) * commutator
    )


def qubit_depolarizing_form(w: float, matrix: ComplexMatrix) -> ComplexMatrix:
    """Closed form for a qubit whose propagators are all proportional to 𝟙

    Ψ_t(A) = ⅓(1 + 2w)A + ⅔(1 − w)Tr(A)𝟙/2
    """
    return (1 + 2 * w) / 3 * matrix + 2 * (1 - w) / 3 * np.trace(matrix) * np.eye(2) / 2

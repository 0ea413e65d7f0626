"""Independent checks of the closed forms

Haar Monte-Carlo estimates, the closed-form adjoint averages, the Q involution and
the twirl onto span{id, Q}, the brute-force lattice enumeration of the predicted
channel and the diophantine adversary that defeats prediction from irrationally
related times.

Superoperators are column-stacking matrices: vec(BAB†) = (B̄ ⊗ B)vec(A).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
import numpy.typing as npt
import scipy.linalg

from tomocast import distributions, hamiltonian, snapshot
from tomocast.errors import BudgetError, ConfigError, DimensionError, SearchExhausted
from tomocast.numkernel import (
    ComplexMatrix,
    as_matrix,
    check_hermitian,
    check_same_dim,
    dagger,
    expm_i_herm,
    haar_unitaries,
    haar_unitary,
    herm_eig,
    hs_norm,
)
from tomocast.predictor import PredictedChannel

BRUTEFORCE_BUDGET = 10**7
BRUTEFORCE_TAIL = 1e-10
SHARD_SIZE = 4096
MIN_SAMPLES = 100
ADVERSARY_CHUNK = 65536
INTEGER_SPECTRUM_TOL = 1e-9


@dataclass(frozen=True)
class TwirlReport:
    """Twirl of a superoperator projected onto span{id, Q}

    `tolerance_sigma` is the standard error of the residual norm and
    `coefficient_sigma` that of the projected coefficients.
    """

    sample_count: int
    projected_coeffs: tuple[complex, complex]
    residual_norm: float
    tolerance_sigma: float
    coefficient_sigma: float


@dataclass(frozen=True, eq=False)
class AdversaryResult:
    """A Hamiltonian far from Ĥ whose propagators match the data to ε"""

    r: int
    matrix: ComplexMatrix
    unitary_residuals: tuple[float, ...]
    hamiltonian_distance: float


def haar_sample_unitary(n: int, seed: int) -> ComplexMatrix:
    """Haar-random n×n unitary, deterministic per seed"""
    if n < 1:
        raise ConfigError(f"dimension must be positive, got {n}")

    return haar_unitary(n, np.random.default_rng(seed))


def _adjoint_coefficients(matrix: ComplexMatrix) -> tuple[float, float]:
    """(a, b) with ∫ Ad_{WBW†} dη (A) = a·A + b·Tr(A)𝟙/𝔡"""
    dim = matrix.shape[0]
    trace_sq = abs(np.trace(matrix)) ** 2
    norm_sq = hs_norm(matrix) ** 2

    if dim == 1:
        return norm_sq, 0.0

    return (
        (dim * trace_sq - norm_sq) / (dim * (dim**2 - 1)),
        (dim * norm_sq - trace_sq) / (dim**2 - 1),
    )


def closed_adjoint_average(
    b_matrix: ComplexMatrix, a_matrix: ComplexMatrix
) -> ComplexMatrix:
    """Haar average of W B W† A W B† W†"""
    check_same_dim(b_matrix, a_matrix)
    a, b = _adjoint_coefficients(b_matrix)
    dim = a_matrix.shape[0]

    return a * a_matrix + b * np.trace(a_matrix) * np.eye(dim) / dim


def centralizer_coefficients(b_matrix: ComplexMatrix) -> tuple[float, float]:
    """(c_id, c_Q) with the averaged Ad_B equal to c_id·id + c_Q·Q"""
    a, b = _adjoint_coefficients(b_matrix)

    if b_matrix.shape[0] == 1:
        return a, 0.0

    return a + b / 2, b / 2


def _check_blocks(
    b_blocks: Sequence[ComplexMatrix], decomp: snapshot.BlockDecomposition
) -> None:
    shapes = tuple(block.shape for block in b_blocks)
    expected = tuple((dim, dim) for dim in decomp.dims)

    if shapes != expected:
        raise DimensionError(
            "block operators must match the block dimensions",
            expected=expected,
            got=shapes,
        )


def closed_blockwise_average(
    b_blocks: Sequence[ComplexMatrix],
    a_matrix: ComplexMatrix,
    decomp: snapshot.BlockDecomposition,
) -> ComplexMatrix:
    """Average of RBR†ARB†R† over R = ⊕R_i with independent Haar blocks

    B = ⊕B_i in the shared eigenbasis. Diagonal blocks follow the single-space
    average with (μ_i, B_i); off-diagonal blocks scale by Tr(B_i)conj(Tr(B_j))/(μ_iμ_j).
    """
    _check_blocks(b_blocks, decomp)
    check_same_dim(decomp.basis, a_matrix)
    rotated = decomp.to_basis(a_matrix)
    traces = np.array([np.trace(block) / block.shape[0] for block in b_blocks])
    result = np.outer(traces, traces.conj())[np.ix_(decomp.labels(), decomp.labels())]
    result = result * rotated

    for block, b_block in zip(decomp.blocks, b_blocks):
        piece = rotated[block.indices, block.indices]
        result[block.indices, block.indices] = closed_adjoint_average(b_block, piece)

    return decomp.from_basis(result)


def _mc_moments(
    sampler: Callable[[np.random.Generator, int], np.ndarray], count: int, seed: int
) -> tuple[np.ndarray, np.ndarray]:
    """Sample mean and entrywise standard error over independent shards

    Each shard of up to SHARD_SIZE draws gets its own child seed; shard totals are
    reduced with numpy's pairwise summation.
    """
    if count < MIN_SAMPLES:
        raise ConfigError(f"at least {MIN_SAMPLES} samples are required, got {count}")

    sizes = [SHARD_SIZE] * (count // SHARD_SIZE)
    if count % SHARD_SIZE:
        sizes.append(count % SHARD_SIZE)

    children = np.random.SeedSequence(seed).spawn(len(sizes))
    totals = []
    squares = []

    for size, child in zip(sizes, children):
        samples = sampler(np.random.default_rng(child), size)
        totals.append(samples.sum(axis=0))
        squares.append((np.abs(samples) ** 2).sum(axis=0))

    mean = np.sum(totals, axis=0) / count
    variance = np.maximum(np.sum(squares, axis=0) / count - np.abs(mean) ** 2, 0)

    return mean, np.sqrt(variance / (count - 1))


def mc_adjoint_average(
    b_matrix: ComplexMatrix, a_matrix: ComplexMatrix, count: int, seed: int
) -> tuple[ComplexMatrix, float]:
    """Monte-Carlo estimate of the Haar average of W B W† A W B† W†

    Returns the estimate and its largest entrywise standard error.
    """
    check_same_dim(b_matrix, a_matrix)
    dim = a_matrix.shape[0]

    def sampler(rng: np.random.Generator, size: int) -> np.ndarray:
        unitaries = haar_unitaries(dim, size, rng)
        conjugated = unitaries @ b_matrix @ unitaries.conj().transpose(0, 2, 1)

        return conjugated @ a_matrix @ conjugated.conj().transpose(0, 2, 1)

    mean, stderr = _mc_moments(sampler, count, seed)

    return mean, float(stderr.max())


def _block_haar(
    decomp: snapshot.BlockDecomposition, size: int, rng: np.random.Generator
) -> np.ndarray:
    """(size, 𝔡, 𝔡) stack of ⊕R_i with Haar R_i, in the shared eigenbasis"""
    stack = np.zeros((size, decomp.dim, decomp.dim), dtype=np.complex128)

    for block in decomp.blocks:
        stack[:, block.indices, block.indices] = haar_unitaries(block.dim, size, rng)

    return stack


def mc_blockwise_average(
    b_blocks: Sequence[ComplexMatrix],
    a_matrix: ComplexMatrix,
    decomp: snapshot.BlockDecomposition,
    count: int,
    seed: int,
) -> tuple[ComplexMatrix, float]:
    """Monte-Carlo counterpart of closed_blockwise_average()"""
    _check_blocks(b_blocks, decomp)
    check_same_dim(decomp.basis, a_matrix)
    b_matrix = scipy.linalg.block_diag(*b_blocks)
    rotated = decomp.to_basis(a_matrix)

    def sampler(rng: np.random.Generator, size: int) -> np.ndarray:
        rotations = _block_haar(decomp, size, rng)
        conjugated = rotations @ b_matrix @ rotations.conj().transpose(0, 2, 1)

        return conjugated @ rotated @ conjugated.conj().transpose(0, 2, 1)

    mean, stderr = _mc_moments(sampler, count, seed)

    return decomp.from_basis(mean), float(stderr.max())


def q_involution(matrix: ComplexMatrix) -> ComplexMatrix:
    """Q(A) = 2Tr(A)𝟙/𝔡 − A"""
    dim = matrix.shape[0]

    return 2 * np.trace(matrix) * np.eye(dim) / dim - matrix


def adjoint_superoperator(b_matrix: ComplexMatrix) -> ComplexMatrix:
    """Column-stacking matrix of Ad_B: A ↦ BAB†"""
    return np.kron(b_matrix.conj(), b_matrix)


def q_superoperator(dim: int) -> ComplexMatrix:
    """Column-stacking matrix of Q"""
    identity = np.eye(dim).reshape(-1, order="F")

    return 2 / dim * np.outer(identity, identity) - np.eye(dim * dim) + 0j


def apply_superoperator(
    superoperator: ComplexMatrix, matrix: ComplexMatrix
) -> ComplexMatrix:
    """Act with a column-stacking superoperator on a matrix"""
    dim = matrix.shape[0]

    if superoperator.shape != (dim * dim, dim * dim):
        raise DimensionError(
            "superoperator does not act on this matrix",
            expected=(dim * dim, dim * dim),
            got=superoperator.shape,
        )

    vector = superoperator @ matrix.reshape(-1, order="F")

    return vector.reshape((dim, dim), order="F")


def twirl_superoperator(
    superoperator: ComplexMatrix, count: int, seed: int
) -> TwirlReport:
    """Average Ad_W∘X∘Ad_W† over Haar W and project onto span{id, Q}

    Every twirl lies in the centralizer span{id, Q}, so the residual outside the
    span only carries statistical error.
    """
    square = superoperator.shape[0]
    dim = math.isqrt(square)

    if superoperator.shape != (square, square) or dim * dim != square:
        raise DimensionError(
            "superoperator must be 𝔡²×𝔡²", got=superoperator.shape
        )

    basis = np.stack([np.eye(square, dtype=np.complex128), q_superoperator(dim)])
    gram = np.einsum("aij,bij->ab", basis.conj(), basis)
    gram_inverse = np.linalg.inv(gram)
    components = 2 + square * square

    def sampler(rng: np.random.Generator, size: int) -> np.ndarray:
        unitaries = haar_unitaries(dim, size, rng)
        ads = np.einsum("cij,ckl->cikjl", unitaries.conj(), unitaries).reshape(
            size, square, square
        )
        twirled = ads @ superoperator @ ads.conj().transpose(0, 2, 1)
        overlaps = np.einsum("aij,cij->ca", basis.conj(), twirled)
        coeffs = overlaps @ gram_inverse.T
        residual = twirled - np.einsum("ca,aij->cij", coeffs, basis)
        packed = np.empty((size, components), dtype=np.complex128)
        packed[:, :2] = coeffs
        packed[:, 2:] = residual.reshape(size, -1)

        return packed

    mean, stderr = _mc_moments(sampler, count, seed)

    return TwirlReport(
        sample_count=count,
        projected_coeffs=(complex(mean[0]), complex(mean[1])),
        residual_norm=float(np.linalg.norm(mean[2:])),
        tolerance_sigma=float(np.linalg.norm(stderr[2:])),
        coefficient_sigma=float(stderr[:2].max()),
    )


def _lattice_support(
    dist: distributions.PriorDistribution,
) -> tuple[npt.NDArray[np.int64], npt.NDArray[np.float64]]:
    if dist.family.finite:
        support = dist.support()
    else:
        bound = distributions.tail_truncation(dist, BRUTEFORCE_TAIL)
        support = np.arange(-bound, bound + 1)

    return support, distributions.pmf(dist, support)


def bruteforce_prediction(
    channel: PredictedChannel,
    t: float,
    matrix: ComplexMatrix,
    budget: int = BRUTEFORCE_BUDGET,
) -> ComplexMatrix:
    """Ψ_t(A) by enumerating every lattice vector k⃗ of the prior's support

    For each k⃗ the Haar average over block rotations is exact: block i carries
    B_i = e^{−itĥ_i}diag(e^{−2πiγtk_a}) and the average depends on the B_i only
    through the traces T_i. The weighted moments Σ ℙ(k⃗)T_i·conj(T_j) are
    accumulated in chunks of the enumeration.
    """
    decomp = channel.decomp
    matrix = as_matrix(matrix)
    check_same_dim(decomp.basis, matrix)
    energies = np.array(channel.hhat.block_energies)
    dims = np.array(decomp.dims)

    if channel.gamma is None:
        unitary = expm_i_herm(channel.hhat.matrix, t)
        return unitary @ matrix @ dagger(unitary)

    support, weights = _lattice_support(channel.dist)
    terms = len(support) ** decomp.dim

    if terms > budget:
        raise BudgetError(terms, budget)

    phases = np.exp(-2j * np.pi * channel.gamma * t * support)
    membership = np.zeros((decomp.dim, decomp.kappa))
    membership[np.arange(decomp.dim), decomp.labels()] = 1
    radix = len(support) ** np.arange(decomp.dim)
    moments = np.zeros((decomp.kappa, decomp.kappa), dtype=np.complex128)

    for start in range(0, terms, SHARD_SIZE):
        index = np.arange(start, min(start + SHARD_SIZE, terms))
        digits = (index[:, np.newaxis] // radix) % len(support)
        probability = weights[digits].prod(axis=1)
        traces = (phases[digits] @ membership) * np.exp(-1j * t * energies)
        moments += np.einsum("c,ci,cj->ij", probability, traces, traces.conj())

    rotated = decomp.to_basis(matrix)
    scale = moments / np.outer(dims, dims)
    result = scale[np.ix_(decomp.labels(), decomp.labels())] * rotated

    for i, block in enumerate(decomp.blocks):
        piece = rotated[block.indices, block.indices]

        if block.dim == 1:
            result[block.indices, block.indices] = piece
            continue

        mu = block.dim
        trace_sq = moments[i, i].real
        a = (mu * trace_sq - mu) / (mu * (mu**2 - 1))
        b = (mu * mu - trace_sq) / (mu**2 - 1)
        result[block.indices, block.indices] = (
            a * piece + b * np.trace(piece) * np.eye(mu) / mu
        )

    return decomp.from_basis(result)


def mc_prediction(
    channel: PredictedChannel,
    t: float,
    matrix: ComplexMatrix,
    count: int,
    seed: int,
) -> tuple[ComplexMatrix, float]:
    """Monte-Carlo average of e^{−itH}Ae^{itH} over sampled admissible Hamiltonians

    Returns the estimate and its largest entrywise standard error.
    """
    matrix = as_matrix(matrix)
    check_same_dim(channel.decomp.basis, matrix)

    def sampler(rng: np.random.Generator, size: int) -> np.ndarray:
        samples = np.empty((size, *matrix.shape), dtype=np.complex128)

        for index in range(size):
            element = hamiltonian.sample_admissible(
                channel.hhat, channel.decomp, channel.dist, rng
            )
            unitary = expm_i_herm(element.matrix, t)
            samples[index] = unitary @ matrix @ dagger(unitary)

        return samples

    mean, stderr = _mc_moments(sampler, count, seed)

    return mean, float(stderr.max())


def default_adversary_operator(decomp: snapshot.BlockDecomposition) -> ComplexMatrix:
    """Rank-one projector onto the first basis vector of the largest block"""
    largest = max(decomp.blocks, key=lambda block: block.dim)
    vector = decomp.basis[:, largest.start]

    return np.outer(vector, vector.conj())


def _integer_spectrum(
    k_operator: ComplexMatrix, hhat: ComplexMatrix
) -> tuple[npt.NDArray[np.float64], ComplexMatrix]:
    check_hermitian(k_operator)
    eigenvalues, eigenvectors = herm_eig(k_operator)

    if np.abs(eigenvalues - np.rint(eigenvalues)).max() > INTEGER_SPECTRUM_TOL:
        raise ConfigError(f"K must have integer spectrum, got {eigenvalues}")

    if hs_norm(k_operator @ hhat - hhat @ k_operator) > INTEGER_SPECTRUM_TOL * max(
        1.0, hs_norm(hhat)
    ):
        raise ConfigError("K must commute with the minimal-norm Hamiltonian")

    return np.rint(eigenvalues), eigenvectors


def diophantine_adversary(
    tomography: snapshot.TomographySet,
    decomp: snapshot.BlockDecomposition,
    hhat: hamiltonian.AdmissibleHamiltonian,
    epsilon: float,
    r_max: int,
    k_operator: ComplexMatrix | None = None,
    beta: float = 0.0,
) -> AdversaryResult:
    """Find the first r ≤ r_max for which H = Ĥ + (2πr/τ₁)K reproduces every
    propagator to ε while ‖H − Ĥ‖_HS > β

    Raise `SearchExhausted` with the best r seen when no r qualifies.
    """
    if not epsilon > 0 or r_max < 1:
        raise ConfigError(f"need epsilon > 0 and r_max >= 1, got {epsilon}, {r_max}")

    if k_operator is None:
        k_operator = default_adversary_operator(decomp)

    check_same_dim(hhat.matrix, k_operator)
    spectrum, vectors = _integer_spectrum(k_operator, hhat.matrix)
    times = np.asarray(tomography.times)
    ratios = times / times[0]
    k_norm = hs_norm(k_operator)

    # C_j = V†e^{iτ_jĤ}U⁽ʲ⁾V; the residual is ‖diag(e^{−2πi·κ·frac(r·τ_j/τ₁)}) − C_j‖
    targets = np.stack(
        [
            dagger(vectors)
            @ dagger(expm_i_herm(hhat.matrix, time))
            @ unitary
            @ vectors
            for time, unitary in zip(tomography.times, tomography.unitaries)
        ]
    )
    diagonals = np.diagonal(targets, axis1=1, axis2=2)
    off_diagonal = np.sum(
        np.abs(targets[:, ~np.eye(len(spectrum), dtype=bool)]) ** 2, axis=1
    )
    best_r, best_residual = 0, math.inf

    for start in range(1, r_max + 1, ADVERSARY_CHUNK):
        rs = np.arange(start, min(start + ADVERSARY_CHUNK, r_max + 1))
        products = np.outer(rs, ratios)
        fractions = products - np.rint(products)
        phases = np.exp(-2j * np.pi * fractions[:, :, np.newaxis] * spectrum)
        squares = np.sum(np.abs(phases - diagonals) ** 2, axis=2)
        residuals = np.sqrt(squares + off_diagonal)
        worst = residuals.max(axis=1)
        distances = 2 * np.pi * rs / times[0] * k_norm
        passing = np.flatnonzero((worst <= epsilon) & (distances > beta))

        if passing.size:
            index = passing[0]
            r = int(rs[index])
            return AdversaryResult(
                r=r,
                matrix=hhat.matrix + 2 * np.pi * r / times[0] * k_operator,
                unitary_residuals=tuple(float(x) for x in residuals[index]),
                hamiltonian_distance=float(distances[index]),
            )

        candidate = int(worst.argmin())

        if worst[candidate] < best_residual:
            best_r, best_residual = int(rs[candidate]), float(worst[candidate])

    raise SearchExhausted(best_r, best_residual)

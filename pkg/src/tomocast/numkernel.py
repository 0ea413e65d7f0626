"""Dense complex matrix kernel

Eigendecompositions, exponentials of Hermitian operators, Hilbert-Schmidt geometry
and Haar-random unitaries. Everything here is a pure function of its arguments.
"""
from __future__ import annotations

from typing import Any, TypeAlias

import numpy as np
import numpy.typing as npt
import scipy.linalg

from tomocast.errors import (
    DimensionError,
    HermiticityError,
    StateError,
    TomocastError,
)

ComplexMatrix: TypeAlias = npt.NDArray[np.complex128]
RealVector: TypeAlias = npt.NDArray[np.float64]

HERMITICITY_RTOL = 1e-10
DENSITY_TOL = 1e-10


def as_matrix(data: Any) -> ComplexMatrix:
    """Return `data` as a square, finite complex matrix

    Raise `DimensionError` if it is not square (or empty) and `TomocastError` if
    it contains NaN or Inf.
    """
    matrix = np.array(data, dtype=np.complex128)

    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1] or matrix.shape[0] < 1:
        raise DimensionError("expected a non-empty square matrix", got=matrix.shape)

    if not np.all(np.isfinite(matrix)):
        raise TomocastError("matrix has non-finite entries")

    return matrix


def check_same_dim(left: ComplexMatrix, right: ComplexMatrix) -> None:
    """Raise DimensionError unless the two matrices have the same shape"""
    if left.shape != right.shape:
        raise DimensionError(
            "matrix dimensions differ", expected=left.shape, got=right.shape
        )


def dagger(matrix: ComplexMatrix) -> ComplexMatrix:
    """Conjugate transpose"""
    return matrix.conj().T


def hs_inner(left: ComplexMatrix, right: ComplexMatrix) -> complex:
    """Hilbert-Schmidt inner product Tr(A†B)"""
    check_same_dim(left, right)

    return complex(np.vdot(left, right))


def hs_norm(matrix: ComplexMatrix) -> float:
    """Hilbert-Schmidt (Frobenius) norm"""
    return float(np.linalg.norm(matrix))


def hermiticity_residual(matrix: ComplexMatrix) -> float:
    """‖H − H†‖_HS"""
    return hs_norm(matrix - dagger(matrix))


def unitarity_residual(matrix: ComplexMatrix) -> float:
    """‖U†U − 𝟙‖_HS"""
    return hs_norm(dagger(matrix) @ matrix - np.eye(matrix.shape[0]))


def check_hermitian(matrix: ComplexMatrix) -> None:
    """Raise HermiticityError unless ‖H − H†‖ ≤ 1e-10·‖H‖ (relative)"""
    residual = hermiticity_residual(matrix)

    if residual > HERMITICITY_RTOL * hs_norm(matrix):
        raise HermiticityError(residual)


def herm_eig(matrix: ComplexMatrix) -> tuple[RealVector, ComplexMatrix]:
    """Eigendecomposition H = Ω diag(λ) Ω† of a Hermitian matrix

    Eigenvalues are returned in ascending order.
    """
    check_hermitian(matrix)
    symmetric = (matrix + dagger(matrix)) / 2
    eigenvalues, eigenvectors = scipy.linalg.eigh(symmetric)

    return eigenvalues, eigenvectors


def expm_i_herm(matrix: ComplexMatrix, t: float) -> ComplexMatrix:
    """Return e^{−itH} for Hermitian H"""
    eigenvalues, eigenvectors = herm_eig(matrix)
    phases = np.exp(-1j * t * eigenvalues)

    return (eigenvectors * phases) @ dagger(eigenvectors)


def haar_unitaries(n: int, count: int, rng: np.random.Generator) -> ComplexMatrix:
    """Return a (count, n, n) stack of Haar-random unitaries

    Ginibre matrices are QR-factored and each column of Q is rotated by the phase of
    the matching diagonal entry of R; without that correction the QR output is not
    Haar distributed.
    """
    shape = (count, n, n)
    ginibre = (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(
        2
    )
    q, r = np.linalg.qr(ginibre)
    diagonal = np.diagonal(r, axis1=1, axis2=2)
    phases = diagonal / np.abs(diagonal)

    return q * phases[:, np.newaxis, :]


def haar_unitary(n: int, rng: np.random.Generator) -> ComplexMatrix:
    """Return a single n×n Haar-random unitary"""
    return haar_unitaries(n, 1, rng)[0]


def check_density(matrix: ComplexMatrix, tol: float = DENSITY_TOL) -> None:
    """Raise StateError unless the matrix is Hermitian, PSD and of unit trace"""
    if hermiticity_residual(matrix) > tol:
        raise StateError("state is not Hermitian")

    if abs(np.trace(matrix) - 1) > tol:
        raise StateError(f"state has trace {np.trace(matrix).real:.12g}, not 1")

    if (smallest := scipy.linalg.eigvalsh(matrix)[0]) < -tol:
        raise StateError(f"state has negative eigenvalue {smallest:.3e}")

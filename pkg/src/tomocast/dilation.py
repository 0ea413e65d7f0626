"""System-bath dilations of Kraus operator sets

Composite indices follow the Kronecker convention |iα⟩ ↦ i·n_e + α, system index
major. The bath starts in |0⟩, so the columns |j0⟩ of a dilation U are fixed by
the Kraus operators, ⟨iα|U|j0⟩ = ⟨i|E_α|j⟩, and the remaining columns are free.
"""
from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Any, Sequence

import numpy as np

from tomocast.errors import DimensionError, KrausError, ParseError
from tomocast.numkernel import (
    ComplexMatrix,
    dagger,
    haar_unitary,
    hs_norm,
    unitarity_residual,
)
from tomocast.utils import decode_matrix, encode_matrix, read_json

KRAUS_TOL = 1e-10
EQUIVALENCE_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class KrausSet:
    """Operator-sum representation {E_α} with a bath of dimension n_e

    Fewer than n_e operators are padded with zeros.
    """

    sys_dim: int
    env_dim: int
    operators: tuple[ComplexMatrix, ...]

    def __post_init__(self) -> None:
        if self.sys_dim < 1 or self.env_dim < 1:
            raise DimensionError(
                "dimensions must be positive", got=(self.sys_dim, self.env_dim)
            )

        if len(self.operators) > self.env_dim:
            raise DimensionError(
                "more Kraus operators than bath states",
                expected=self.env_dim,
                got=len(self.operators),
            )

        for operator in self.operators:
            if operator.shape != (self.sys_dim, self.sys_dim):
                raise DimensionError(
                    "Kraus operator has the wrong shape",
                    expected=(self.sys_dim, self.sys_dim),
                    got=operator.shape,
                )

        padding = (np.zeros((self.sys_dim, self.sys_dim), dtype=np.complex128),) * (
            self.env_dim - len(self.operators)
        )
        object.__setattr__(
            self,
            "operators",
            tuple(np.asarray(op, dtype=np.complex128) for op in self.operators)
            + padding,
        )

        if (residual := self.completeness_residual) > KRAUS_TOL:
            raise KrausError(residual)

    @property
    def completeness_residual(self) -> float:
        """‖Σ E_α†E_α − 𝟙‖_HS"""
        total = sum(dagger(op) @ op for op in self.operators)

        return hs_norm(total - np.eye(self.sys_dim))


def _fixed_columns(sys_dim: int, env_dim: int) -> np.ndarray:
    """Composite indices |j0⟩"""
    return np.arange(sys_dim) * env_dim


def _isometry(kraus: KrausSet) -> ComplexMatrix:
    """The n_s·n_e × n_s block column ⟨iα|V|j⟩ = ⟨i|E_α|j⟩"""
    stacked = np.stack(kraus.operators, axis=1)

    return stacked.reshape(kraus.sys_dim * kraus.env_dim, kraus.sys_dim)


def kraus_to_unitary(kraus: KrausSet, seed: int) -> ComplexMatrix:
    """Complete the Kraus isometry to a system-bath unitary

    The columns |j0⟩ hold the Kraus operators exactly; the rest is an orthonormal
    extension of seeded random vectors.
    """
    total = kraus.sys_dim * kraus.env_dim
    isometry = _isometry(kraus)
    rng = np.random.default_rng(seed)
    extension = rng.standard_normal((total, total - kraus.sys_dim)) + 1j * (
        rng.standard_normal((total, total - kraus.sys_dim))
    )
    q, _ = np.linalg.qr(np.concatenate([isometry, extension], axis=1))

    fixed = _fixed_columns(kraus.sys_dim, kraus.env_dim)
    free = np.setdiff1d(np.arange(total), fixed)
    unitary = np.empty((total, total), dtype=np.complex128)
    unitary[:, fixed] = isometry
    unitary[:, free] = q[:, kraus.sys_dim :]

    return unitary


def _check_composite(matrix: ComplexMatrix, sys_dim: int, env_dim: int) -> None:
    total = sys_dim * env_dim

    if matrix.shape != (total, total):
        raise DimensionError(
            "matrix does not act on the system-bath space",
            expected=(total, total),
            got=matrix.shape,
        )


def osr_from_unitary(unitary: ComplexMatrix, sys_dim: int, env_dim: int) -> KrausSet:
    """E_α = Tr_env[U(𝟙 ⊗ |0⟩⟨α|)], that is ⟨i|E_α|j⟩ = ⟨iα|U|j0⟩"""
    _check_composite(unitary, sys_dim, env_dim)
    columns = unitary[:, _fixed_columns(sys_dim, env_dim)]
    blocks = columns.reshape(sys_dim, env_dim, sys_dim)

    return KrausSet(
        sys_dim=sys_dim,
        env_dim=env_dim,
        operators=tuple(blocks[:, alpha, :] for alpha in range(env_dim)),
    )


def partial_trace_env(
    matrix: ComplexMatrix, sys_dim: int, env_dim: int
) -> ComplexMatrix:
    """Tr_env of an operator on the system-bath space"""
    _check_composite(matrix, sys_dim, env_dim)

    return np.einsum(
        "iaja->ij", matrix.reshape(sys_dim, env_dim, sys_dim, env_dim)
    )


def apply_kraus(kraus: KrausSet, rho: ComplexMatrix) -> ComplexMatrix:
    """Σ E_α ρ E_α†"""
    if rho.shape != (kraus.sys_dim, kraus.sys_dim):
        raise DimensionError(
            "state does not match the Kraus operators",
            expected=kraus.sys_dim,
            got=rho.shape,
        )

    return sum(op @ rho @ dagger(op) for op in kraus.operators)


def apply_dilation(
    unitary: ComplexMatrix, rho: ComplexMatrix, sys_dim: int, env_dim: int
) -> ComplexMatrix:
    """Tr_env[U(ρ ⊗ |0⟩⟨0|)U†]"""
    bath = np.zeros((env_dim, env_dim))
    bath[0, 0] = 1

    return partial_trace_env(
        unitary @ np.kron(rho, bath) @ dagger(unitary), sys_dim, env_dim
    )


def random_centralizer_element(sys_dim: int, env_dim: int, seed: int) -> ComplexMatrix:
    """An element of 𝟙 ⊕ U(n_s(n_e − 1)): identity on span{|j0⟩}, Haar elsewhere"""
    total = sys_dim * env_dim
    element = np.eye(total, dtype=np.complex128)
    free = np.setdiff1d(np.arange(total), _fixed_columns(sys_dim, env_dim))

    if free.size:
        rng = np.random.default_rng(seed)
        element[np.ix_(free, free)] = haar_unitary(free.size, rng)

    return element


def equivalence_check(
    unitary: ComplexMatrix,
    other: ComplexMatrix,
    sys_dim: int,
    env_dim: int,
    tol: float = EQUIVALENCE_TOL,
) -> bool:
    """Whether two dilations induce the same channel on 𝓑(ℋ_s) ⊗ |0⟩⟨0|

    Compares Tr_env[U(e_ij ⊗ |0⟩⟨0|)U†] for every matrix unit e_ij.
    """
    _check_composite(unitary, sys_dim, env_dim)
    _check_composite(other, sys_dim, env_dim)
    fixed = _fixed_columns(sys_dim, env_dim)

    def images(matrix: ComplexMatrix) -> np.ndarray:
        columns = matrix[:, fixed].reshape(sys_dim, env_dim, sys_dim)
        # out[i, j, a, b] = Σ_α ⟨aα|U|i0⟩·conj(⟨bα|U|j0⟩)
        return np.einsum("aki,bkj->ijab", columns, columns.conj())

    differences = images(unitary) - images(other)
    norms = np.sqrt(np.sum(np.abs(differences) ** 2, axis=(2, 3)))

    return bool(norms.max() <= tol)


def mix_kraus(kraus: KrausSet, mixing: ComplexMatrix) -> KrausSet:
    """F_k = Σ_j V_kj E_j for a unitary V on the bath"""
    if mixing.shape != (kraus.env_dim, kraus.env_dim):
        raise DimensionError(
            "mixing unitary must act on the bath",
            expected=(kraus.env_dim, kraus.env_dim),
            got=mixing.shape,
        )

    if unitarity_residual(mixing) > KRAUS_TOL:
        raise KrausError(unitarity_residual(mixing))

    stacked = np.stack(kraus.operators)

    return KrausSet(
        sys_dim=kraus.sys_dim,
        env_dim=kraus.env_dim,
        operators=tuple(np.einsum("kj,jab->kab", mixing, stacked)),
    )


def load_kraus(path: str | Path) -> KrausSet:
    """Read {"n_s": int, "n_e": int, "operators": [matrix, ...]} from JSON"""
    data: Any = read_json(Path(path))

    if not isinstance(data, dict) or not {"n_s", "n_e", "operators"} <= data.keys():
        raise ParseError('expected an object with "n_s", "n_e" and "operators"')

    try:
        sys_dim, env_dim = int(data["n_s"]), int(data["n_e"])
    except (TypeError, ValueError):
        raise ParseError('"n_s" and "n_e" must be integers') from None

    operators: Sequence[Any] = data["operators"]

    return KrausSet(
        sys_dim=sys_dim,
        env_dim=env_dim,
        operators=tuple(decode_matrix(rows) for rows in operators),
    )


def dump_kraus(kraus: KrausSet) -> dict[str, Any]:
    """The JSON-ready form accepted by load_kraus()"""
    return {
        "n_s": kraus.sys_dim,
        "n_e": kraus.env_dim,
        "operators": [encode_matrix(op) for op in kraus.operators],
    }

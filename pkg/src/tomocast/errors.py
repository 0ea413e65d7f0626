"""Exceptions raised by tomocast"""
from typing import Any


class TomocastError(Exception):
    """Base class for all tomocast errors"""

    def details(self) -> dict[str, Any]:
        """Return a JSON-serializable description of the error"""
        return {"error": type(self).__name__, "message": str(self)}


class ValidationError(TomocastError):
    """The input data failed a physical or consistency check

    The command-line interface exits with status 2 on these.
    """


class ParseError(TomocastError):
    """Input could not be parsed"""


class ConfigError(TomocastError):
    """Invalid parameters or configuration"""


class DimensionError(TomocastError):
    """Operands have incompatible shapes"""

    def __init__(self, message: str, expected: Any = None, got: Any = None) -> None:
        super().__init__(message)
        self.expected = expected
        self.got = got


class DistributionError(TomocastError):
    """Invalid prior distribution parameters"""


class BudgetError(TomocastError):
    """An enumeration would exceed its term budget"""

    def __init__(self, terms: int, budget: int) -> None:
        super().__init__(f"enumeration needs {terms} terms; budget is {budget}")
        self.terms = terms
        self.budget = budget


class SearchExhausted(TomocastError):
    """No candidate within the search range met the target"""

    def __init__(self, best_r: int, best_residual: float) -> None:
        super().__init__(
            f"search exhausted; best r={best_r} with residual {best_residual:.3e}"
        )
        self.best_r = best_r
        self.best_residual = best_residual

    def details(self) -> dict[str, Any]:
        return {
            **super().details(),
            "best_r": self.best_r,
            "best_residual": self.best_residual,
        }


class LcmOverflowError(TomocastError, OverflowError):
    """The least common multiple of the denominators exceeds 64 bits"""


class HermiticityError(ValidationError):
    """Matrix is not Hermitian to tolerance"""

    def __init__(self, residual: float) -> None:
        super().__init__(f"matrix is not Hermitian (residual {residual:.3e})")
        self.residual = residual

    def details(self) -> dict[str, Any]:
        return {**super().details(), "residual": self.residual}


class UnitarityError(ValidationError):
    """A propagator is not unitary to tolerance"""

    def __init__(self, j: int, residual: float) -> None:
        super().__init__(f"unitary {j} is not unitary (residual {residual:.3e})")
        self.j = j
        self.residual = residual

    def details(self) -> dict[str, Any]:
        return {**super().details(), "j": self.j, "residual": self.residual}


class TimeOrderError(ValidationError):
    """Measurement times are not positive and strictly increasing"""


class InconsistencyError(ValidationError):
    """Two propagators fail to commute"""

    def __init__(self, j: int, k: int, norm: float) -> None:
        super().__init__(
            f"unitaries {j} and {k} do not commute (commutator norm {norm:.3e})"
        )
        self.j = j
        self.k = k
        self.norm = norm

    def details(self) -> dict[str, Any]:
        return {**super().details(), "j": self.j, "k": self.k, "norm": self.norm}


class NotConsistentError(ValidationError):
    """No logarithm branch reproduces a block's phases at every time"""

    def __init__(self, block: int, residual: float) -> None:
        super().__init__(
            f"no admissible energy for block {block} (best residual {residual:.3e})"
        )
        self.block = block
        self.residual = residual

    def details(self) -> dict[str, Any]:
        return {**super().details(), "block": self.block, "residual": self.residual}


class KrausError(ValidationError):
    """Kraus operators violate completeness"""

    def __init__(self, residual: float) -> None:
        super().__init__(f"Kraus operators are not complete (residual {residual:.3e})")
        self.residual = residual

    def details(self) -> dict[str, Any]:
        return {**super().details(), "residual": self.residual}


class StateError(ValidationError):
    """Matrix is not a density matrix"""


class CptpError(ValidationError):
    """A predicted channel failed its Choi-matrix certificate"""

    def __init__(
        self,
        t: float,
        min_eigenvalue: float,
        trace_residual: float,
        hermiticity_residual: float,
    ) -> None:
        super().__init__(
            f"channel at t={t} is not CPTP (min eigenvalue {min_eigenvalue:.3e})"
        )
        self.t = t
        self.min_eigenvalue = min_eigenvalue
        self.trace_residual = trace_residual
        self.hermiticity_residual = hermiticity_residual

    def details(self) -> dict[str, Any]:
        return {
            **super().details(),
            "t": self.t,
            "min_eigenvalue": self.min_eigenvalue,
            "trace_residual": self.trace_residual,
            "hermiticity_residual": self.hermiticity_residual,
        }

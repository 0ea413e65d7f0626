"""Rational structure of the measurement-time grid

Every ratio τ_j/τ₁ is replaced by its best continued-fraction convergent p_j/q_j
with a bounded denominator. When all of them fit, the admissible Hamiltonians form
a lattice with frequency γ = LCM{q_j}/τ₁.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from tomocast.errors import ConfigError, LcmOverflowError

DEFAULT_QMAX = 64
DEFAULT_RTOL = 1e-9
INT64_MAX = 2**63 - 1


@dataclass(frozen=True)
class RationalStructure:
    """Normal-form ratios τ_j/τ₁ = p_j/q_j and the lattice they generate

    When `rational` is False the ratios hold the best convergents found and
    `lcm_q`/`gamma` are None.
    """

    ratios: tuple[tuple[int, int], ...]
    lcm_q: int | None
    gamma: float | None
    rational: bool


def continued_fraction(x: float, q_max: int) -> tuple[int, int]:
    """Return the last continued-fraction convergent p/q of x with q ≤ q_max"""
    if not (math.isfinite(x) and x > 0):
        raise ConfigError(f"continued_fraction needs a finite x > 0, got {x}")

    if q_max < 1:
        raise ConfigError(f"q_max must be at least 1, got {q_max}")

    remainder = Fraction(x)
    p_prev, q_prev = 1, 0
    term = math.floor(remainder)
    p, q = term, 1
    remainder -= term

    while remainder:
        remainder = 1 / remainder
        term = math.floor(remainder)
        remainder -= term
        p_next, q_next = term * p + p_prev, term * q + q_prev

        if q_next > q_max:
            break

        p_prev, q_prev, p, q = p, q, p_next, q_next

    return p, q


def checked_lcm(values: Sequence[int]) -> int:
    """LCM via pairwise gcd, raising LcmOverflowError beyond 2⁶³ − 1"""
    result = 1

    for value in values:
        result = result // math.gcd(result, value) * value

        if result > INT64_MAX:
            raise LcmOverflowError(f"LCM of denominators exceeds 2^63 - 1: {values}")

    return result


def rationalize(
    times: Sequence[float], q_max: int = DEFAULT_QMAX, tol: float = DEFAULT_RTOL
) -> RationalStructure:
    """Decide whether the times are rationally related at tolerance

    Each τ_j/τ₁ must lie within `tol` (relative) of a convergent with denominator
    at most `q_max`. Otherwise the structure is flagged irrational: finite-precision
    input cannot prove irrationality, so this is a modeling choice.
    """
    ratios = []
    rational = True

    for time in times:
        ratio = time / times[0]
        p, q = continued_fraction(ratio, q_max)
        ratios.append((p, q))

        if abs(ratio - p / q) > tol * ratio:
            rational = False

    for (p_prev, q_prev), (p, q) in zip(ratios, ratios[1:]):
        if rational and not Fraction(p, q) > Fraction(p_prev, q_prev):
            raise ConfigError(
                f"times {times} are indistinguishable at tolerance {tol} "
                f"with denominators up to {q_max}"
            )

    if not rational:
        return RationalStructure(
            ratios=tuple(ratios), lcm_q=None, gamma=None, rational=False
        )

    lcm_q = checked_lcm([q for _, q in ratios])

    return RationalStructure(
        ratios=tuple(ratios), lcm_q=lcm_q, gamma=lcm_q / times[0], rational=True
    )

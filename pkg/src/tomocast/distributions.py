"""Prior distributions on ℤ for the lattice coordinates of admissible Hamiltonians

Each family is symmetric, unimodal and centered at k = 0. Its characteristic function
φ(t) = Σ_k ℙ(k)e^{ikt} controls how fast the predicted evolution forgets the
measured propagators between measurement times.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache
from pathlib import Path
from typing import Any, Mapping

import numpy as np
import numpy.typing as npt
from scipy import stats

from tomocast.errors import ConfigError, DistributionError, ParseError
from tomocast.utils import read_json

SAMPLING_TAIL = 1e-16


class Family(Enum):
    """Distribution families"""

    DELTA = "delta"
    EXPONENTIAL = "exponential"
    TRUNCATED_UNIFORM = "truncated-uniform"
    SEMICIRCULAR = "semicircular"
    CAUCHY = "cauchy"
    BINOMIAL = "binomial"
    NORMAL = "normal"
    CUSTOM = "custom"

    @property
    def takes_a(self) -> bool:
        """Whether the family is parametrized by the positive real a"""
        return self in {Family.EXPONENTIAL, Family.CAUCHY, Family.NORMAL}

    @property
    def takes_m(self) -> bool:
        """Whether the family is parametrized by the nonnegative integer m"""
        return self in {Family.TRUNCATED_UNIFORM, Family.SEMICIRCULAR, Family.BINOMIAL}

    @property
    def finite(self) -> bool:
        """Whether the family has finite support"""
        return not self.takes_a


@dataclass(frozen=True)
class PriorDistribution:
    """A distribution ℙ(k) on the integers

    `custom_pmf` holds (k, weight) pairs for the Custom family; weights are
    normalized on construction.
    """

    family: Family
    a: float | None = None
    m: int | None = None
    custom_pmf: tuple[tuple[int, float], ...] = field(default=())

    def __post_init__(self) -> None:
        if self.family.takes_a:
            if self.a is None or not math.isfinite(self.a) or self.a <= 0:
                raise DistributionError(
                    f"{self.family.value} needs a > 0, got a={self.a}"
                )
        if self.family.takes_m:
            if self.m is None or int(self.m) != self.m or self.m < 0:
                raise DistributionError(
                    f"{self.family.value} needs an integer m >= 0, got m={self.m}"
                )
        if self.family is Family.CUSTOM:
            object.__setattr__(self, "custom_pmf", _normalize(self.custom_pmf))

    @classmethod
    def from_params(
        cls,
        family: str | Family,
        a: float | None = None,
        m: int | None = None,
        pmf: Mapping[int, float] | None = None,
    ) -> PriorDistribution:
        """Build a distribution from command-line style parameters"""
        try:
            family = Family(family)
        except ValueError:
            raise DistributionError(f"unknown distribution family {family!r}") from None

        custom = tuple(sorted((pmf or {}).items())) if family is Family.CUSTOM else ()

        return cls(
            family=family,
            a=a if family.takes_a else None,
            m=m if family.takes_m else None,
            custom_pmf=custom,
        )

    def label(self) -> str:
        """Short human-readable name such as binomial(m=3)"""
        if self.family.takes_a:
            return f"{self.family.value}(a={self.a:g})"
        if self.family.takes_m:
            return f"{self.family.value}(m={self.m})"
        return self.family.value

    def support(self) -> npt.NDArray[np.int64]:
        """The support of a finite family, in increasing order"""
        match self.family:
            case Family.DELTA:
                return np.zeros(1, dtype=np.int64)
            case Family.CUSTOM:
                return np.array([k for k, _ in self.custom_pmf], dtype=np.int64)
            case _ if self.family.takes_m:
                assert self.m is not None
                return np.arange(-self.m, self.m + 1, dtype=np.int64)

        raise DistributionError(f"{self.family.value} has infinite support")


def _normalize(
    weights: tuple[tuple[int, float], ...]
) -> tuple[tuple[int, float], ...]:
    if not weights:
        raise DistributionError("a custom pmf needs at least one entry")

    for k, weight in weights:
        if int(k) != k:
            raise DistributionError(f"custom pmf key {k!r} is not an integer")
        if not math.isfinite(weight) or weight < 0:
            raise DistributionError(f"custom pmf weight for k={k} is {weight}")

    total = math.fsum(weight for _, weight in weights)

    if total <= 0:
        raise DistributionError("custom pmf weights sum to zero")

    return tuple(
        sorted((int(k), weight / total) for k, weight in weights if weight > 0)
    )


def load_pmf(path: str | Path) -> PriorDistribution:
    """Read a Custom distribution from a {"k": weight, ...} JSON file"""
    data: Any = read_json(Path(path))

    if not isinstance(data, dict):
        raise ParseError('a pmf file must be a {"k": weight} object')

    try:
        pmf = {int(k): float(weight) for k, weight in data.items()}
    except (TypeError, ValueError):
        raise ParseError(f"invalid pmf entries in {path}") from None

    return PriorDistribution.from_params(Family.CUSTOM, pmf=pmf)


@lru_cache(maxsize=None)
def _semicircle_normalizer(m: int) -> float:
    ks = np.arange(-m, m + 1)

    return float(np.sqrt((m + 1) ** 2 - ks**2).sum())


@lru_cache(maxsize=None)
def _normal_normalizer(a: float) -> float:
    return float(_normal_series(np.zeros(1), a)[0])


def _normal_series(t: npt.NDArray[np.float64], a: float) -> npt.NDArray[np.float64]:
    """Σ_k e^{−ak²}e^{ikt}, summed directly or through its Poisson dual

    The dual √(π/a)·Σ_n e^{−(t+2πn)²/(4a)} converges faster when a < π.
    """
    if a >= math.pi:
        count = math.ceil(math.sqrt(40 / a)) + 1
        ks = np.arange(-count, count + 1)
        return (np.exp(-a * ks**2) * np.cos(np.outer(t, ks))).sum(axis=1)

    count = math.ceil(math.sqrt(160 * a) / math.pi) + 2
    ns = np.arange(-count, count + 1)
    wrapped = np.mod(t, 2 * np.pi)[:, np.newaxis] + 2 * np.pi * ns

    return math.sqrt(math.pi / a) * np.exp(-(wrapped**2) / (4 * a)).sum(axis=1)


def _cauchy_pmf(a: float, k: npt.NDArray[np.float64]) -> npt.NDArray[np.float64]:
    return math.tanh(a * math.pi) / math.pi * a / (a**2 + k**2)


def _frozen(dist: PriorDistribution) -> Any:
    """The scipy.stats discrete distribution for every family but Cauchy-Lorentz"""
    match dist.family:
        case Family.EXPONENTIAL:
            return stats.dlaplace(dist.a)
        case Family.TRUNCATED_UNIFORM:
            assert dist.m is not None
            return stats.randint(-dist.m, dist.m + 1)
        case Family.BINOMIAL:
            assert dist.m is not None
            return stats.binom(2 * dist.m, 0.5, loc=-dist.m)
        case Family.NORMAL:
            assert dist.a is not None
            bound = tail_truncation(dist, SAMPLING_TAIL)
            ks = np.arange(-bound, bound + 1)
            weights = np.exp(-dist.a * ks**2)
            return stats.rv_discrete(values=(ks, weights / weights.sum()))

    support = dist.support()

    return stats.rv_discrete(values=(support, pmf(dist, support)))


def pmf(dist: PriorDistribution, k: Any) -> Any:
    """ℙ(k), elementwise over integer arrays"""
    ks = np.asarray(k)

    match dist.family:
        case Family.DELTA:
            result = np.where(ks == 0, 1.0, 0.0)
        case Family.SEMICIRCULAR:
            assert dist.m is not None
            inside = np.abs(ks) <= dist.m
            radicand = np.where(inside, (dist.m + 1) ** 2 - ks**2, 0)
            result = np.sqrt(radicand) / _semicircle_normalizer(dist.m)
        case Family.CAUCHY:
            assert dist.a is not None
            result = _cauchy_pmf(dist.a, ks.astype(np.float64))
        case Family.NORMAL:
            assert dist.a is not None
            result = np.exp(-dist.a * ks.astype(np.float64) ** 2) / _normal_normalizer(
                dist.a
            )
        case Family.CUSTOM:
            table = dict(dist.custom_pmf)
            result = np.vectorize(lambda x: table.get(int(x), 0.0), otypes=[float])(ks)
        case _:
            result = _frozen(dist).pmf(ks)

    return float(result) if ks.ndim == 0 else np.asarray(result, dtype=np.float64)


def _finite_series(dist: PriorDistribution, t: npt.NDArray[np.float64]) -> Any:
    support = dist.support()
    weights = pmf(dist, support)

    return (weights * np.exp(1j * np.outer(t, support))).sum(axis=1)


def char_fn(dist: PriorDistribution, t: Any) -> Any:
    """φ(t) = Σ_k ℙ(k)e^{ikt}, elementwise over arrays of t"""
    ts = np.atleast_1d(np.asarray(t, dtype=np.float64))

    match dist.family:
        case Family.DELTA:
            result = np.ones_like(ts, dtype=np.complex128)
        case Family.EXPONENTIAL:
            assert dist.a is not None
            result = (np.cosh(dist.a) - 1) / (np.cosh(dist.a) - np.cos(ts)) + 0j
        case Family.TRUNCATED_UNIFORM:
            assert dist.m is not None
            width = 2 * dist.m + 1
            half = np.sin(ts / 2)
            singular = np.abs(half) < 1e-8
            closed = np.sin(width * ts / 2) / (width * np.where(singular, 1.0, half))
            result = np.where(singular, _finite_series(dist, ts), closed + 0j)
        case Family.CAUCHY:
            assert dist.a is not None
            # cosh(a(π − s))/cosh(aπ) with s = t mod 2π, written to avoid overflow
            x = dist.a * np.abs(np.pi - np.mod(ts, 2 * np.pi))
            y = dist.a * np.pi
            result = (
                np.exp(x - y) * (1 + np.exp(-2 * x)) / (1 + np.exp(-2 * y)) + 0j
            )
        case Family.BINOMIAL:
            assert dist.m is not None
            result = np.cos(ts / 2) ** (2 * dist.m) + 0j
        case Family.NORMAL:
            assert dist.a is not None
            result = _normal_series(ts, dist.a) / _normal_normalizer(dist.a) + 0j
        case _:
            result = _finite_series(dist, ts)

    return complex(result[0]) if np.ndim(t) == 0 else result


def tail_truncation(dist: PriorDistribution, eps: float) -> int:
    """Smallest K (up to a bound) with Σ_{|k|>K} ℙ(k) ≤ eps"""
    if not eps > 0:
        raise ConfigError(f"eps must be positive, got {eps}")

    if dist.family.finite:
        return int(np.abs(dist.support()).max())

    assert dist.a is not None
    a = dist.a

    match dist.family:
        case Family.EXPONENTIAL:
            scale = math.tanh(a / 2) * 2 / -math.expm1(-a)
            bound = max(0, math.ceil(math.log(scale / eps) / a))
            while bound > 0 and scale * math.exp(-a * (bound - 1)) <= eps:
                bound -= 1
            while scale * math.exp(-a * bound) > eps:
                bound += 1
            return bound
        case Family.CAUCHY:
            # 2·tanh(aπ)/π·(π/2 − arctan(K/a)) bounds the two tails
            angle = math.pi / 2 - eps * math.pi / (2 * math.tanh(a * math.pi))
            return max(0, math.ceil(a * math.tan(max(angle, 0.0))))

    bound = 0
    normalizer = _normal_normalizer(a)
    while (
        2 * math.exp(-a * (bound + 1) ** 2) / -math.expm1(-a) / normalizer > eps
    ):
        bound += 1

    return bound


def _sample_cauchy(a: float, n: int, rng: np.random.Generator) -> npt.NDArray[np.int64]:
    """Rejection sampling from the rounded continuous Cauchy(0, a)

    The envelope ratio ℙ(k)/P(round(x) = k) is bounded by its k = 0 value and by
    tanh(aπ)(a² + 9/4)/(a² + 1) for |k| ≥ 1.
    """

    def rounded_mass(k: npt.NDArray[np.float64]) -> npt.NDArray[np.float64]:
        return (np.arctan((k + 0.5) / a) - np.arctan((k - 0.5) / a)) / np.pi

    zero = np.zeros(1)
    ceiling = max(
        float(_cauchy_pmf(a, zero)[0] / rounded_mass(zero)[0]),
        math.tanh(a * math.pi) * (a**2 + 2.25) / (a**2 + 1),
    )
    draws: list[npt.NDArray[np.int64]] = []
    remaining = n

    while remaining > 0:
        proposals = np.rint(
            stats.cauchy.rvs(scale=a, size=2 * remaining, random_state=rng)
        )
        finite = proposals[np.abs(proposals) < 2**62]
        ratio = _cauchy_pmf(a, finite) / rounded_mass(finite) / ceiling
        accepted = finite[rng.uniform(size=finite.size) < ratio].astype(np.int64)
        draws.append(accepted[:remaining])
        remaining -= len(draws[-1])

    return np.concatenate(draws)


def sample_k(
    dist: PriorDistribution, n: int, seed: int | np.random.Generator
) -> npt.NDArray[np.int64]:
    """Draw n i.i.d. integers from `dist`, deterministically for a given seed"""
    if n < 1:
        raise ConfigError(f"sample size must be positive, got {n}")

    rng = np.random.default_rng(seed)

    if dist.family is Family.DELTA:
        return np.zeros(n, dtype=np.int64)

    if dist.family is Family.CAUCHY:
        assert dist.a is not None
        return _sample_cauchy(dist.a, n, rng)

    return np.asarray(_frozen(dist).rvs(size=n, random_state=rng), dtype=np.int64)

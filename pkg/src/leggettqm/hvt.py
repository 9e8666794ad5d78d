"""Hidden-variable subensemble models and their averages.

Two kinds of model are supported:

* :class:`DiscreteModel` -- finitely many hidden-variable values with explicit
  weights; averages are exact weighted sums.
* :class:`SubensembleModel` -- an arbitrary sampler for the hidden variable
  plus response functions; averages are seeded Monte Carlo estimates.

Responses must be exactly +1 or -1. They may depend on both analyzer
settings, so non-local models are allowed.
"""
from __future__ import annotations

import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
from typing import Any, Callable, Sequence

import numpy as np

from .errors import DomainError, NormalizationError, StructureError
from .inequality import DEFAULT_TOLERANCE, AverageTriple, InequalityReport, leggett_check
from .qcore import EPS, MeasurementSetting, SettingKind, as_setting

MIN_SAMPLES = 100
CHUNK_SIZE = 1 << 14
_SEED_MASK = (1 << 64) - 1

# batch sampler: (generator, n) -> n hidden-variable values in any container
Sampler = Callable[[np.random.Generator, int], Any]
# response: (own setting, other setting, lambda batch) -> array of +-1
Response = Callable[[Any, Any, Any], np.ndarray]


@dataclass(frozen=True)
class SubensembleModel:
    """A hidden-variable model for the pairs labelled by polarizations ``(u, v)``.

    ``response_a`` is called as ``response_a(a, b, lam)`` and ``response_b`` as
    ``response_b(b, a, lam)``, both on a whole batch of hidden-variable draws.
    ``closed_form(a, b)``, when given, returns the exact :class:`AverageTriple`.
    """

    u: Any
    v: Any
    sample_lambda: Sampler
    response_a: Response
    response_b: Response
    closed_form: Callable[[Any, Any], AverageTriple] | None = None
    name: str = "custom"


@dataclass(frozen=True)
class DiscreteModel:
    """Hidden variable taking finitely many values with fixed weights.

    Responses are called per point as ``response_a(a, b, label)`` and
    ``response_b(b, a, label)``.
    """

    labels: tuple
    weights: tuple[float, ...]
    response_a: Callable[[Any, Any, Any], int]
    response_b: Callable[[Any, Any, Any], int]

    def __post_init__(self):
        labels, weights = tuple(self.labels), tuple(float(w) for w in self.weights)
        if len(labels) != len(weights) or not labels:
            raise StructureError("labels and weights must be non-empty and of equal length")
        if any(w < 0 or not math.isfinite(w) for w in weights):
            raise NormalizationError("weights must be finite and non-negative")
        total = math.fsum(weights)
        if abs(total - 1.0) > EPS:
            raise NormalizationError(f"weights sum to {total!r}, not 1")
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "weights", weights)

    @classmethod
    def from_tables(cls, weights: Sequence[float], table_a: Sequence[int], table_b: Sequence[int]):
        """Model whose responses ignore the settings: point ``i`` gives ``table_a[i]``, ``table_b[i]``."""
        table_a, table_b = tuple(int(x) for x in table_a), tuple(int(x) for x in table_b)
        if not len(table_a) == len(table_b) == len(weights):
            raise StructureError("tables and weights must have equal length")
        return cls(
            labels=tuple(range(len(weights))),
            weights=tuple(weights),
            response_a=lambda a, b, i: table_a[i],
            response_b=lambda b, a, i: table_b[i],
        )


@dataclass(frozen=True)
class EstimateReport:
    triple: AverageTriple
    stderr_a: float
    stderr_b: float
    stderr_ab: float
    samples: int
    seed: int

    @property
    def max_stderr(self) -> float:
        return max(self.stderr_a, self.stderr_b, self.stderr_ab)

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True)


def _pm_one(value) -> int:
    if value not in (1, -1):
        raise DomainError(f"response must be +1 or -1, got {value!r}")
    return int(value)


def exact_averages(m: DiscreteModel, a, b) -> AverageTriple:
    """Weighted sums of A, B and AB over the model's points."""
    xs, ys = [], []
    for label in m.labels:
        xs.append(_pm_one(m.response_a(a, b, label)))
        ys.append(_pm_one(m.response_b(b, a, label)))
    w = m.weights
    return AverageTriple(
        math.fsum(wi * x for wi, x in zip(w, xs)),
        math.fsum(wi * y for wi, y in zip(w, ys)),
        math.fsum(wi * x * y for wi, x, y in zip(w, xs, ys)),
    )


def chunk_generator(seed: int, chunk: int) -> np.random.Generator:
    """Independent stream for one block of samples, fixed by ``(seed, chunk)``."""
    ss = np.random.SeedSequence(entropy=int(seed) & _SEED_MASK, spawn_key=(chunk,))
    return np.random.Generator(np.random.PCG64(ss))


def _as_pm_array(values, n: int) -> np.ndarray:
    arr = np.asarray(values)
    if arr.shape != (n,):
        raise StructureError(f"response returned shape {arr.shape}, expected ({n},)")
    if not np.all((arr == 1) | (arr == -1)):
        raise DomainError("responses must be exactly +1 or -1")
    return arr.astype(np.int64)


def _chunk_sums(m: SubensembleModel, a, b, seed: int, chunk: int, n: int) -> tuple[int, int, int]:
    lam = m.sample_lambda(chunk_generator(seed, chunk), n)
    xs = _as_pm_array(m.response_a(a, b, lam), n)
    ys = _as_pm_array(m.response_b(b, a, lam), n)
    return int(xs.sum()), int(ys.sum()), int((xs * ys).sum())


def _stderr(total: int, n: int) -> float:
    # sample std of +-1 values: sum of squares is n, so var = (n^2 - S^2) / (n (n - 1))
    return math.sqrt((n * n - total * total) / (n * (n - 1))) / math.sqrt(n)


def mc_averages(
    m: SubensembleModel, a, b, samples: int, seed: int, workers: int = 1
) -> EstimateReport:
    """Monte Carlo estimate of the three averages.

    Samples are drawn in fixed blocks of ``CHUNK_SIZE``, block ``k`` from its
    own stream derived from ``(seed, k)``. Sums of +-1 are exact integers, so
    the result does not depend on ``workers``.
    """
    if int(samples) != samples or samples < MIN_SAMPLES:
        raise DomainError(f"samples must be an integer >= {MIN_SAMPLES}, got {samples!r}")
    samples = int(samples)
    sizes = [min(CHUNK_SIZE, samples - start) for start in range(0, samples, CHUNK_SIZE)]
    job = lambda k: _chunk_sums(m, a, b, seed, k, sizes[k])  # noqa: E731
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(job, range(len(sizes))))
    else:
        parts = [job(k) for k in range(len(sizes))]
    sa, sb, sab = (sum(p[i] for p in parts) for i in range(3))
    return EstimateReport(
        triple=AverageTriple(sa / samples, sb / samples, sab / samples),
        stderr_a=_stderr(sa, samples),
        stderr_b=_stderr(sb, samples),
        stderr_ab=_stderr(sab, samples),
        samples=samples,
        seed=int(seed),
    )


def _angle(s) -> float:
    return as_setting(s, SettingKind.PHOTON_ANGLE).angle


def malus_pass_probability(polarization, analyzer) -> float:
    return math.cos(_angle(analyzer) - _angle(polarization)) ** 2


def malus_product_model(u, v) -> SubensembleModel:
    """Each photon passes its own analyzer independently with Malus probability.

    The hidden variable is a pair of uniforms ``(l1, l2)``; photon A gives +1
    iff ``l1 < cos^2(a - u)``, photon B gives +1 iff ``l2 < cos^2(b - v)``.
    Exact averages are ``2 cos^2(a - u) - 1``, ``2 cos^2(b - v) - 1`` and their
    product.
    """
    u = MeasurementSetting.photon(_angle(u))
    v = MeasurementSetting.photon(_angle(v))

    def sample(rng: np.random.Generator, n: int) -> np.ndarray:
        return rng.random((n, 2))

    def response_a(a, b, lam):
        return np.where(lam[:, 0] < malus_pass_probability(u, a), 1, -1)

    def response_b(b, a, lam):
        return np.where(lam[:, 1] < malus_pass_probability(v, b), 1, -1)

    def closed_form(a, b) -> AverageTriple:
        x = 2 * malus_pass_probability(u, a) - 1
        y = 2 * malus_pass_probability(v, b) - 1
        return AverageTriple(x, y, x * y)

    return SubensembleModel(u, v, sample, response_a, response_b, closed_form, name="malus")


def model_leggett_check(
    m: SubensembleModel | DiscreteModel,
    settings: Sequence[tuple[Any, Any]],
    samples: int = 100_000,
    seed: int = 42,
    tolerance: float | None = None,
    workers: int = 1,
) -> list[InequalityReport]:
    """Run the Leggett test for every ``(a, b)`` pair, in input order.

    Without an explicit ``tolerance``: discrete models use the analytic
    default, sampled models ``max(1e-9, 3 * largest stderr)``.
    """
    reports = []
    for a, b in settings:
        if isinstance(m, DiscreteModel):
            triple = exact_averages(m, a, b)
            tol = DEFAULT_TOLERANCE if tolerance is None else tolerance
        else:
            est = mc_averages(m, a, b, samples, seed, workers)
            triple = est.triple
            tol = max(DEFAULT_TOLERANCE, 3 * est.max_stderr) if tolerance is None else tolerance
        reports.append(leggett_check(triple, tol))
    return reports

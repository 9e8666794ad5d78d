"""Leggett's bounds on one-sided and pair averages, and quantum sweeps against them."""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from . import canonical
from .canonical import CanonicalState
from .errors import DomainError
from .qcore import (
    EPS,
    MeasurementSetting,
    as_setting,
    SettingKind,
    expectation,
    joint_expectation,
    observable_for,
    partial_trace,
)

DEFAULT_TOLERANCE = 1e-9


@dataclass(frozen=True)
class AverageTriple:
    """Averages of A, B and of the product AB over one ensemble."""

    av_a: float
    av_b: float
    av_ab: float

    def __post_init__(self):
        for name in ("av_a", "av_b", "av_ab"):
            value = float(getattr(self, name))
            if not (-1 - EPS <= value <= 1 + EPS):
                raise DomainError(f"{name}={value!r} is outside [-1, 1]")
            object.__setattr__(self, name, value)


@dataclass(frozen=True)
class InequalityReport:
    upper: float
    lower: float
    value: float
    margin_upper: float
    margin_lower: float
    satisfied: bool
    tolerance: float

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class SweepRow:
    delta: float
    av_a: float
    av_b: float
    av_ab_paper: float
    av_ab_oracle: float
    report_paper: InequalityReport
    report_oracle: InequalityReport

    @property
    def satisfied(self) -> bool:
        return self.report_paper.satisfied and self.report_oracle.satisfied


def pm_identity_check(a: int, b: int) -> bool:
    """Check ``1 - |A - B| == A*B == -1 + |A + B|`` for ``A, B`` in {-1, +1}."""
    for v in (a, b):
        if isinstance(v, bool) or v not in (-1, 1):
            raise DomainError(f"expected +1 or -1, got {v!r}")
    a, b = int(a), int(b)
    return 1 - abs(a - b) == a * b == -1 + abs(a + b)


def _check_unit_range(**values: float) -> None:
    for name, v in values.items():
        if not (-1 - EPS <= v <= 1 + EPS):
            raise DomainError(f"{name}={v!r} is outside [-1, 1]")


def leggett_bounds(av_a: float, av_b: float) -> tuple[float, float]:
    """Return ``(lower, upper)`` bounds on the pair average.

    >>> leggett_bounds(0.5, -0.5)
    (-1.0, 0.0)
    """
    av_a, av_b = float(av_a), float(av_b)
    _check_unit_range(av_a=av_a, av_b=av_b)
    return -1.0 + abs(av_a + av_b), 1.0 - abs(av_a - av_b)


def leggett_check(t: AverageTriple, tolerance: float = DEFAULT_TOLERANCE) -> InequalityReport:
    lower, upper = leggett_bounds(t.av_a, t.av_b)
    margin_upper = upper - t.av_ab
    margin_lower = t.av_ab - lower
    return InequalityReport(
        upper=upper,
        lower=lower,
        value=t.av_ab,
        margin_upper=margin_upper,
        margin_lower=margin_lower,
        satisfied=margin_upper >= -tolerance and margin_lower >= -tolerance,
        tolerance=float(tolerance),
    )


def leggett_satisfied(av_a, av_b, av_ab, tolerance: float = DEFAULT_TOLERANCE) -> np.ndarray:
    """Vectorized satisfaction test over arrays of averages."""
    av_a, av_b, av_ab = np.broadcast_arrays(*(np.asarray(x, dtype=float) for x in (av_a, av_b, av_ab)))
    upper = 1.0 - np.abs(av_a - av_b)
    lower = -1.0 + np.abs(av_a + av_b)
    return (upper - av_ab >= -tolerance) & (av_ab - lower >= -tolerance)


def _angles(s) -> np.ndarray:
    if isinstance(s, MeasurementSetting):
        return np.asarray(as_setting(s, SettingKind.PHOTON_ANGLE).angle)
    return np.asarray(s, dtype=float)


def quadratic_form_check(a, b):
    """Check ``1.5 >= (a.b)^2 >= -0.5`` for photon analyzer angles.

    Accepts scalars, settings or arrays of angles (broadcast together); returns
    a bool or a bool array. The result is cross-checked against the Leggett
    test on ``(0, 0, +-(2 (a.b)^2 - 1) / 2)`` and a disagreement raises.
    """
    delta = np.mod(_angles(a) - _angles(b), 2 * np.pi)
    c2 = np.cos(delta) ** 2
    holds = (c2 <= 1.5) & (c2 >= -0.5)
    pair = 0.5 * (2.0 * c2 - 1.0)
    via_leggett = leggett_satisfied(0.0, 0.0, pair, EPS) & leggett_satisfied(0.0, 0.0, -pair, EPS)
    if not np.array_equal(holds, via_leggett):
        raise RuntimeError("quadratic form and Leggett test disagree")
    return bool(holds) if holds.ndim == 0 else holds


def _settings_for(kind: CanonicalState, delta: float, theta_b: float):
    if kind is CanonicalState.SINGLET:
        # both directions in the x-z plane, a.b = cos(delta)
        tb, ta = theta_b, theta_b + delta
        b = MeasurementSetting.bloch(math.sin(tb), 0.0, math.cos(tb))
        a = MeasurementSetting.bloch(math.sin(ta), 0.0, math.cos(ta))
        return a, b
    return MeasurementSetting.photon(theta_b + delta), MeasurementSetting.photon(theta_b)


def quantum_sweep(
    kind,
    grid_points: int,
    theta_b: float = 0.0,
    tolerance: float = DEFAULT_TOLERANCE,
) -> list[SweepRow]:
    """Evaluate the Leggett bounds on a uniform grid of relative angles.

    Row ``k`` has ``delta = 2 pi k / grid_points``. For the photon states the
    analyzers sit at ``theta_b + delta`` and ``theta_b``; for the singlet both
    Bloch vectors lie in the x-z plane with ``a.b = cos(delta)``. One-sided
    averages come from the reduced density matrices, the pair average both
    from the closed forms and from the full 4x4 trace.
    """
    kind = kind if isinstance(kind, CanonicalState) else CanonicalState(kind)
    if int(grid_points) != grid_points or grid_points < 2:
        raise DomainError(f"grid_points must be an integer >= 2, got {grid_points!r}")
    rho = canonical.make_density(kind)
    rho_a = partial_trace(rho, "first")
    rho_b = partial_trace(rho, "second")

    rows = []
    for k in range(int(grid_points)):
        delta = 2 * math.pi * k / grid_points
        a, b = _settings_for(kind, delta, theta_b)
        obs_a, obs_b = observable_for(a), observable_for(b)
        av_a = expectation(rho_a, obs_a)
        av_b = expectation(rho_b, obs_b)
        if kind is CanonicalState.SINGLET:
            paper = canonical.singlet_correlation(a, b)
        else:
            paper = canonical.paper_pair_correlation(kind, a, b)
        oracle = joint_expectation(rho, obs_a, obs_b)
        rows.append(
            SweepRow(
                delta=delta,
                av_a=av_a,
                av_b=av_b,
                av_ab_paper=paper,
                av_ab_oracle=oracle,
                report_paper=leggett_check(AverageTriple(av_a, av_b, paper), tolerance),
                report_oracle=leggett_check(AverageTriple(av_a, av_b, oracle), tolerance),
            )
        )
    return rows

"""The three two-particle states and their closed-form coincidence statistics."""
from __future__ import annotations

import enum
import math

import numpy as np

from .errors import KindError, NormalizationError
from .qcore import (
    DIRECTION_TOL,
    DensityOperator,
    Ket,
    MeasurementSetting,
    SettingKind,
    as_setting,
    density_from_pure,
    kron,
)

_R = 1 / math.sqrt(2)


class CanonicalState(enum.Enum):
    PSI_PLUS = "psi-plus"
    PSI_MINUS = "psi-minus"
    SINGLET = "singlet"

    @property
    def setting_kind(self) -> SettingKind:
        if self is CanonicalState.SINGLET:
            return SettingKind.BLOCH_VECTOR
        return SettingKind.PHOTON_ANGLE


_AMPLITUDES = {
    # (|xx> + |yy>) / sqrt 2, from a J=0 -> 1 -> 0 cascade
    CanonicalState.PSI_PLUS: (_R, 0.0, 0.0, _R),
    # (|xy> - |yx>) / sqrt 2, from para-positronium annihilation
    CanonicalState.PSI_MINUS: (0.0, _R, -_R, 0.0),
    # (|up down> - |down up>) / sqrt 2
    CanonicalState.SINGLET: (0.0, _R, -_R, 0.0),
}


def _state_kind(kind) -> CanonicalState:
    return kind if isinstance(kind, CanonicalState) else CanonicalState(kind)


def make_state(kind) -> Ket:
    return Ket(_AMPLITUDES[_state_kind(kind)])


def make_density(kind) -> DensityOperator:
    return density_from_pure(make_state(kind), factor_dims=(2, 2))


def _photon_kind(kind) -> CanonicalState:
    kind = _state_kind(kind)
    if kind is CanonicalState.SINGLET:
        raise KindError("photon formulas apply to psi-plus and psi-minus only")
    return kind


def _photon_cos(a, b) -> float:
    a = as_setting(a, SettingKind.PHOTON_ANGLE)
    b = as_setting(b, SettingKind.PHOTON_ANGLE)
    return math.cos((a.angle - b.angle) % (2 * math.pi))


def joint_probability(kind, a, b) -> float:
    """Probability that both photons pass analyzers at angles ``a`` and ``b``.

    ``(a.b)^2 / 2`` for psi-plus and ``(1 - (a.b)^2) / 2`` for psi-minus.
    """
    kind = _photon_kind(kind)
    c2 = _photon_cos(a, b) ** 2
    if kind is CanonicalState.PSI_PLUS:
        return 0.5 * c2
    return 0.5 * (1.0 - c2)


def paper_pair_correlation(kind, a, b) -> float:
    """Closed-form pair correlation ``+-(2 (a.b)^2 - 1) / 2``.

    The psi-plus value equals ``joint_probability(PSI_PLUS) -
    joint_probability(PSI_MINUS)``; it is half of the four-outcome correlation
    returned by :func:`leggettqm.qcore.joint_expectation`. Both are kept.
    """
    kind = _photon_kind(kind)
    value = 0.5 * (2.0 * _photon_cos(a, b) ** 2 - 1.0)
    return value if kind is CanonicalState.PSI_PLUS else -value


def _unit_bloch(s) -> np.ndarray:
    if isinstance(s, MeasurementSetting):
        return as_setting(s, SettingKind.BLOCH_VECTOR).vector()
    vec = np.asarray(s, dtype=float)
    if vec.shape != (3,) or abs(float(np.linalg.norm(vec)) - 1.0) > DIRECTION_TOL:
        raise NormalizationError("singlet_correlation needs unit Bloch vectors")
    return vec


def singlet_correlation(a, b) -> float:
    """Spin correlation ``-a.b`` of the singlet."""
    value = -float(np.dot(_unit_bloch(a), _unit_bloch(b)))
    return min(1.0, max(-1.0, value))


def coincidence_oracle(kind, a, b) -> float:
    """Tr(rho (|a><a| x |b><b|)) computed on the full 4x4 state.

    Independent check on :func:`joint_probability`; it only uses the state
    vector and the analyzer kets.
    """
    kind = _photon_kind(kind)
    ka = as_setting(a, SettingKind.PHOTON_ANGLE).ket().amplitudes
    kb = as_setting(b, SettingKind.PHOTON_ANGLE).ket().amplitudes
    proj = kron(np.outer(ka, ka.conj()), np.outer(kb, kb.conj()))
    return float(np.trace(make_density(kind).matrix @ proj).real)

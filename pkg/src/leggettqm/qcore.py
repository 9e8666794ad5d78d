"""Dense linear algebra for one- and two-qubit (polarization or spin) systems.

Matrices are plain ``numpy`` complex arrays. States, density operators and
observables are thin frozen wrappers that validate their invariants once, at
construction, so the rest of the package can treat them as trusted values.

Conventions
-----------
* Single-system basis: ``|x> = (1, 0)``, ``|y> = (0, 1)`` for photons and
  ``|up> = (1, 0)``, ``|down> = (0, 1)`` for spins.
* Composite index of ``|i>_A (x) |j>_B`` is ``i * dB + j`` (row-major Kronecker).
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, KindError, NormalizationError, StructureError

EPS = 1e-12
DIRECTION_TOL = 1e-9

__all__ = [
    "EPS",
    "DIRECTION_TOL",
    "SettingKind",
    "MeasurementSetting",
    "Ket",
    "DensityOperator",
    "Observable",
    "kron",
    "density_from_pure",
    "partial_trace",
    "purity",
    "photon_observable",
    "spin_observable",
    "expectation",
    "joint_expectation",
    "KET_X",
    "KET_Y",
    "KET_UP",
    "KET_DOWN",
]


def _as_matrix(m) -> np.ndarray:
    arr = np.asarray(m, dtype=complex)
    if arr.ndim != 2:
        raise StructureError(f"expected a 2-d matrix, got shape {arr.shape}")
    return arr


def _is_hermitian(m: np.ndarray, tol: float = EPS) -> bool:
    return m.shape[0] == m.shape[1] and bool(np.all(np.abs(m - m.conj().T) <= tol))


def allclose(m1, m2, tol: float = EPS) -> bool:
    """Entrywise absolute comparison used for every exact identity."""
    a, b = np.asarray(m1), np.asarray(m2)
    return a.shape == b.shape and bool(np.all(np.abs(a - b) <= tol))


# --------------------------------------------------------------------------
# measurement settings


class SettingKind(enum.Enum):
    PHOTON_ANGLE = "photon"
    BLOCH_VECTOR = "bloch"


@dataclass(frozen=True)
class MeasurementSetting:
    """An analyzer orientation.

    Photon analyzers live in the transverse plane and are described by an
    angle measured from the x axis; Stern-Gerlach settings are unit Bloch
    vectors. Use :meth:`photon` and :meth:`bloch` rather than the raw
    constructor.
    """

    kind: SettingKind
    angle: float = 0.0
    direction: tuple[float, float, float] = (0.0, 0.0, 1.0)

    @classmethod
    def photon(cls, angle: float) -> "MeasurementSetting":
        angle = float(angle)
        if not math.isfinite(angle):
            raise DomainError(f"photon angle must be finite, got {angle!r}")
        return cls(SettingKind.PHOTON_ANGLE, angle=angle % (2 * math.pi))

    @classmethod
    def bloch(cls, *components) -> "MeasurementSetting":
        if len(components) == 1:
            components = tuple(components[0])
        vec = np.asarray(components, dtype=float)
        if vec.shape != (3,):
            raise StructureError(f"Bloch direction needs 3 components, got {vec.shape}")
        norm = float(np.linalg.norm(vec))
        if not math.isfinite(norm) or norm <= DIRECTION_TOL:
            raise NormalizationError("Bloch direction has zero norm")
        vec = vec / norm
        return cls(SettingKind.BLOCH_VECTOR, direction=tuple(float(c) for c in vec))

    @property
    def is_photon(self) -> bool:
        return self.kind is SettingKind.PHOTON_ANGLE

    def perpendicular(self) -> "MeasurementSetting":
        """a-perp for photons (rotated by +pi/2), -a for spins."""
        if self.is_photon:
            return MeasurementSetting.photon(self.angle + math.pi / 2)
        return MeasurementSetting.bloch(*(-c for c in self.direction))

    def vector(self) -> np.ndarray:
        """Real unit vector: 2 components for photons, 3 for spins."""
        if self.is_photon:
            return np.array([math.cos(self.angle), math.sin(self.angle)])
        return np.array(self.direction)

    def ket(self) -> "Ket":
        """The +1 eigenstate of the analyzer observable."""
        if self.is_photon:
            return Ket([math.cos(self.angle), math.sin(self.angle)])
        ax, ay, az = self.direction
        # spin-1/2 coherent state along (ax, ay, az); the phase is irrelevant for projectors
        if az > -1 + 1e-15:
            c = math.sqrt((1 + az) / 2)
            return Ket([c, complex(ax, ay) / (2 * c)])
        return Ket([0.0, 1.0])


def as_setting(s, kind: SettingKind) -> MeasurementSetting:
    """Coerce a bare angle or 3-vector into a setting and check its kind."""
    if isinstance(s, MeasurementSetting):
        if s.kind is not kind:
            raise KindError(f"expected a {kind.value} setting, got {s.kind.value}")
        return s
    if kind is SettingKind.PHOTON_ANGLE:
        if np.ndim(s) != 0:
            raise KindError("a photon setting is a single angle")
        return MeasurementSetting.photon(s)
    return MeasurementSetting.bloch(s)


# --------------------------------------------------------------------------
# states and operators


@dataclass(frozen=True, eq=False)
class Ket:
    """A normalized state vector."""

    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=complex)
        if amps.ndim != 1 or amps.size == 0:
            raise StructureError("a ket is a non-empty 1-d amplitude vector")
        amps = amps.copy()
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    @property
    def dim(self) -> int:
        return self.amplitudes.size

    def norm_squared(self) -> float:
        return float(np.vdot(self.amplitudes, self.amplitudes).real)

    def tensor(self, other: "Ket") -> "Ket":
        return Ket(np.kron(self.amplitudes, other.amplitudes))


KET_X = Ket([1.0, 0.0])
KET_Y = Ket([0.0, 1.0])
KET_UP = KET_X
KET_DOWN = KET_Y


@dataclass(frozen=True, eq=False)
class DensityOperator:
    """Hermitian, unit-trace, positive semidefinite matrix.

    ``factor_dims`` records the bipartite split ``(dA, dB)`` when the
    operator acts on a composite space; it is required by
    :func:`partial_trace` and :func:`joint_expectation`.
    """

    matrix: np.ndarray
    factor_dims: tuple[int, int] | None = None

    def __post_init__(self):
        m = _as_matrix(self.matrix).copy()
        n = m.shape[0]
        if m.shape != (n, n):
            raise StructureError(f"density operator must be square, got {m.shape}")
        if self.factor_dims is not None:
            da, db = self.factor_dims
            if da * db != n:
                raise StructureError(f"factor dims {self.factor_dims} do not multiply to {n}")
            object.__setattr__(self, "factor_dims", (int(da), int(db)))
        if not _is_hermitian(m):
            raise StructureError("density operator is not Hermitian")
        tr = np.trace(m)
        if abs(tr - 1) > EPS:
            raise NormalizationError(f"density operator has trace {tr}")
        if not _is_psd(m):
            raise DomainError("density operator is not positive semidefinite")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


def _is_psd(m: np.ndarray) -> bool:
    n = m.shape[0]
    if n == 1:
        return m[0, 0].real >= -EPS
    if n == 2:
        # closed-form eigenvalues of a Hermitian 2x2
        mean = (m[0, 0].real + m[1, 1].real) / 2
        half_gap = math.hypot((m[0, 0].real - m[1, 1].real) / 2, abs(m[0, 1]))
        return mean - half_gap >= -EPS
    diag_ok = bool(np.all(m.diagonal().real >= -EPS))
    purity_ok = float(np.vdot(m, m).real) <= 1 + EPS
    return diag_ok and purity_ok


@dataclass(frozen=True, eq=False)
class Observable:
    """Hermitian operator; those built here have eigenvalues exactly +-1."""

    matrix: np.ndarray

    def __post_init__(self):
        m = _as_matrix(self.matrix).copy()
        if m.shape[0] != m.shape[1]:
            raise StructureError(f"observable must be square, got {m.shape}")
        if not _is_hermitian(m):
            raise StructureError("observable is not Hermitian")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


# --------------------------------------------------------------------------
# operations


def kron(m1, m2) -> np.ndarray:
    """Kronecker product; row ``i1 * rows(m2) + i2``, column likewise."""
    return np.kron(_as_matrix(m1), _as_matrix(m2))


def density_from_pure(k: Ket, factor_dims: tuple[int, int] | None = None) -> DensityOperator:
    """Projector ``|k><k|``.

    Raises :class:`NormalizationError` if ``k`` is not a unit vector. A
    4-dimensional ket is taken to be a two-qubit state unless
    ``factor_dims`` says otherwise.
    """
    if abs(k.norm_squared() - 1) > EPS:
        raise NormalizationError(f"ket has squared norm {k.norm_squared()}")
    if factor_dims is None and k.dim == 4:
        factor_dims = (2, 2)
    return DensityOperator(np.outer(k.amplitudes, k.amplitudes.conj()), factor_dims)


def product_density(rho_a: DensityOperator, rho_b: DensityOperator) -> DensityOperator:
    return DensityOperator(kron(rho_a.matrix, rho_b.matrix), (rho_a.dim, rho_b.dim))


def partial_trace(rho: DensityOperator, keep: str = "first") -> DensityOperator:
    """Reduced density operator of the ``keep`` subsystem (``"first"`` or ``"second"``)."""
    if rho.factor_dims is None:
        raise StructureError("partial trace needs a bipartite density operator")
    da, db = rho.factor_dims
    t = rho.matrix.reshape(da, db, da, db)
    if keep == "first":
        reduced = np.einsum("ijkj->ik", t)
    elif keep == "second":
        reduced = np.einsum("ijil->jl", t)
    else:
        raise StructureError(f"keep must be 'first' or 'second', got {keep!r}")
    return DensityOperator(reduced)


def purity(rho: DensityOperator) -> float:
    """Tr(rho^2); 1 for pure states, 1/d when maximally mixed."""
    m = rho.matrix
    # Tr(m m) = sum_ij m_ij m_ji = sum |m_ij|^2 for Hermitian m
    return float(np.trace(m @ m).real)


def _projector_difference(plus: Ket, minus: Ket) -> Observable:
    p = np.outer(plus.amplitudes, plus.amplitudes.conj())
    q = np.outer(minus.amplitudes, minus.amplitudes.conj())
    return Observable(p - q)


def photon_observable(s) -> Observable:
    """Analyzer observable ``|a><a| - |a_perp><a_perp|`` for a linear polarizer.

    Equal to ``[[cos 2t, sin 2t], [sin 2t, -cos 2t]]`` for angle ``t``.
    """
    s = as_setting(s, SettingKind.PHOTON_ANGLE)
    return _projector_difference(s.ket(), s.perpendicular().ket())


def spin_observable(s) -> Observable:
    """Stern-Gerlach observable along a Bloch direction, i.e. ``a . sigma``."""
    s = as_setting(s, SettingKind.BLOCH_VECTOR)
    ax, ay, az = s.direction
    return Observable([[az, complex(ax, -ay)], [complex(ax, ay), -az]])


def observable_for(s) -> Observable:
    if not isinstance(s, MeasurementSetting):
        raise KindError("observable_for needs a MeasurementSetting")
    return photon_observable(s) if s.is_photon else spin_observable(s)


def _real_trace(m: np.ndarray) -> float:
    tr = np.trace(m)
    if abs(tr.imag) > EPS:
        raise StructureError(f"expectation value has imaginary part {tr.imag:.3e}")
    return float(tr.real)


def expectation(rho: DensityOperator, obs: Observable) -> float:
    """Tr(rho O)."""
    if rho.dim != obs.dim:
        raise StructureError(f"dimension mismatch: state {rho.dim}, observable {obs.dim}")
    return _real_trace(rho.matrix @ obs.matrix)


def joint_expectation(rho: DensityOperator, obs_a: Observable, obs_b: Observable) -> float:
    """Tr(rho (O_A x O_B)) for a bipartite state."""
    if rho.factor_dims is None:
        raise StructureError("joint expectation needs a bipartite density operator")
    if rho.factor_dims != (obs_a.dim, obs_b.dim):
        raise StructureError(
            f"dimension mismatch: state {rho.factor_dims}, observables {(obs_a.dim, obs_b.dim)}"
        )
    return _real_trace(rho.matrix @ kron(obs_a.matrix, obs_b.matrix))

"""Outcome generators for photons (complex) and spin-1/2 particles (quaternion).

A generator ``G(a | frame)`` carries everything a particle knows about how
it will answer a measurement along ``a``.  Only its scalar part is ever
observed: it is the expectation of the +/-1 outcome.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from .algebra import (
    UNIT_TOL,
    ComplexScalar,
    DegenerateAxisError,
    Direction2,
    Direction3,
    QuaternionScalar,
    Scalar,
    angle_between,
    orthogonal_unit,
    rotation_axis,
    rotor,
    scalar_part,
)
from .errors import DomainError


class ParticleKind(enum.Enum):
    PHOTON = "photon"
    SPIN_HALF = "spin_half"

    @classmethod
    def parse(cls, value) -> ParticleKind:
        if isinstance(value, cls):
            return value
        aliases = {"photon": cls.PHOTON, "spin": cls.SPIN_HALF, "spin_half": cls.SPIN_HALF}
        try:
            return aliases[str(value).lower()]
        except KeyError:
            raise ValueError(f"unknown particle kind {value!r}") from None

    @property
    def l(self) -> int:
        """Angular multiplicity: 2 for photons, 1 for spin-1/2."""
        return 2 if self is ParticleKind.PHOTON else 1

    @property
    def d(self) -> int:
        """Dimension of the space the measurement directions live in."""
        return 2 if self is ParticleKind.PHOTON else 3

    @property
    def anticorrelation_sign(self) -> int:
        """``(-1)**l``."""
        return -1 if self.l % 2 else 1


def _check_sign(name: str, value: int) -> int:
    if value not in (1, -1):
        raise ValueError(f"{name} must be +1 or -1, got {value!r}")
    return int(value)


@dataclass(frozen=True)
class PhotonFrame:
    """Shared reference direction on the circle and a sense of rotation."""

    r: Direction2
    orientation: int = 1

    def __post_init__(self):
        _check_sign("orientation", self.orientation)

    kind = ParticleKind.PHOTON


@dataclass(frozen=True)
class SpinFrame:
    """Reference direction on the sphere, rotation-basis orientation and outcome sign."""

    r: Direction3
    orientation: int = 1
    s: int = 1

    def __post_init__(self):
        _check_sign("orientation", self.orientation)
        _check_sign("s", self.s)

    kind = ParticleKind.SPIN_HALF


Frame = Union[PhotonFrame, SpinFrame]


def photon_generator(a: Direction2, frame: PhotonFrame) -> ComplexScalar:
    """``e^{i o 2 theta_ar}`` with ``o`` the frame orientation."""
    theta_ar = angle_between(a, frame.r)
    return ComplexScalar.phase(frame.orientation * 2.0 * theta_ar)


def spin_axis(a: Direction3, frame: SpinFrame) -> Direction3:
    """Oriented rotation axis ``o (r x a)/|r x a|``.

    Falls back to a fixed unit vector orthogonal to ``r`` when ``a`` is
    parallel to ``r``; the rotor does not depend on the axis there.
    """
    try:
        u = rotation_axis(frame.r, a)
    except DegenerateAxisError:
        u = orthogonal_unit(frame.r)
    return u if frame.orientation == 1 else -u


def spin_generator(a: Direction3, frame: SpinFrame) -> QuaternionScalar:
    """``s e^{theta_ar u}`` with ``u`` from :func:`spin_axis`."""
    if abs(math.sqrt(a.dot(a)) - 1.0) > UNIT_TOL:
        raise DomainError("measurement direction must be unit-norm")
    theta_ar = angle_between(a, frame.r)
    return float(frame.s) * rotor(theta_ar, spin_axis(a, frame))


def generator(a, frame: Frame) -> Scalar:
    if isinstance(frame, PhotonFrame):
        return photon_generator(a, frame)
    if isinstance(frame, SpinFrame):
        return spin_generator(a, frame)
    raise TypeError(f"unsupported frame type {type(frame).__name__}")


def expectation(g: Scalar) -> float:
    """Classical expectation of the outcome: the scalar part of ``g``."""
    return scalar_part(g)


def outcome_probability(expectation: float, tol: float = UNIT_TOL) -> float:
    """``P(S = +1) = (1 + <S>) / 2``.

    Values outside ``[-1, 1]`` by no more than ``tol`` are clamped; larger
    excursions raise :class:`DomainError`.
    """
    e = float(expectation)
    if not (-1.0 - tol <= e <= 1.0 + tol):
        raise DomainError(f"expectation {e!r} outside [-1, 1]")
    e = min(1.0, max(-1.0, e))
    return 0.5 * (1.0 + e)


# --- vectorised kernels -------------------------------------------------

def photon_generator_array(theta_a, theta_r, orientation) -> np.ndarray:
    """Complex generator values for arrays of measurement/reference angles."""
    phase = np.asarray(orientation) * 2.0 * (np.asarray(theta_a) - np.asarray(theta_r))
    return np.exp(1j * phase)


def spin_generator_array(a, r, orientation, s) -> np.ndarray:
    """Quaternion generator values, shape ``(n, 4)``.

    ``a`` and ``r`` are ``(3,)`` or ``(n, 3)`` unit vectors.
    """
    a = np.asarray(a, dtype=float)
    r = np.asarray(r, dtype=float)
    a, r = np.broadcast_arrays(a, r)
    c = np.cross(r, a)
    cn = np.linalg.norm(c, axis=-1)
    theta = np.arctan2(cn, np.einsum("...i,...i->...", a, r))
    degenerate = cn < UNIT_TOL
    u = np.empty_like(c)
    ok = ~degenerate
    u[ok] = c[ok] / cn[ok, None]
    if np.any(degenerate):
        u[degenerate] = np.array([
            orthogonal_unit(Direction3.normalized(*row)).vector for row in r[degenerate]
        ])
    u = u * np.asarray(orientation, dtype=float)[..., None]
    st = np.sin(theta)[..., None]
    q = np.concatenate([np.cos(theta)[..., None], u * st], axis=-1)
    return q * np.asarray(s, dtype=float)[..., None]

"""Complex and quaternion scalars, unit directions, and rotors.

Quaternions use the right-handed Hamilton convention ``ij = k`` with
``i**2 == j**2 == k**2 == ijk == -1``.  Everything here is immutable.

Besides the scalar value types there are a few vectorised kernels
(``qmul_array`` and friends) operating on ``(..., 4)`` float arrays; the
ensemble code uses them to process millions of trials at once.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from .errors import DegenerateAxisError, InvalidAxisError

TWO_PI = 2.0 * math.pi

#: closed-form identities are checked to this tolerance
IDENTITY_TOL = 1e-12
#: unit-norm validation of user input
UNIT_TOL = 1e-9


@dataclass(frozen=True)
class ComplexScalar:
    re: float
    im: float = 0.0

    @classmethod
    def phase(cls, phi: float) -> ComplexScalar:
        """``e^{i phi}``."""
        return cls(math.cos(phi), math.sin(phi))

    def __mul__(self, other):
        if isinstance(other, ComplexScalar):
            return ComplexScalar(self.re * other.re - self.im * other.im,
                                 self.re * other.im + self.im * other.re)
        if isinstance(other, (int, float)):
            return ComplexScalar(self.re * other, self.im * other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, float)):
            return ComplexScalar(other * self.re, other * self.im)
        return NotImplemented

    def __add__(self, other):
        if isinstance(other, ComplexScalar):
            return ComplexScalar(self.re + other.re, self.im + other.im)
        return NotImplemented

    def __neg__(self):
        return ComplexScalar(-self.re, -self.im)

    def conjugate(self) -> ComplexScalar:
        return ComplexScalar(self.re, -self.im)

    def norm(self) -> float:
        return math.hypot(self.re, self.im)

    def to_complex(self) -> complex:
        return complex(self.re, self.im)

    def to_quaternion(self) -> QuaternionScalar:
        """Embed into the ``(1, k)`` plane of the quaternions."""
        return QuaternionScalar(self.re, 0.0, 0.0, self.im)

    def isclose(self, other: ComplexScalar, tol: float = IDENTITY_TOL) -> bool:
        return abs(self.re - other.re) <= tol and abs(self.im - other.im) <= tol


@dataclass(frozen=True)
class QuaternionScalar:
    w: float
    x: float = 0.0
    y: float = 0.0
    z: float = 0.0

    @classmethod
    def pure(cls, v: Sequence[float]) -> QuaternionScalar:
        """Pure quaternion ``v_x i + v_y j + v_z k``."""
        return cls(0.0, float(v[0]), float(v[1]), float(v[2]))

    @property
    def vector(self) -> tuple[float, float, float]:
        return (self.x, self.y, self.z)

    def __mul__(self, other):
        if isinstance(other, QuaternionScalar):
            return qmul(self, other)
        if isinstance(other, (int, float)):
            return QuaternionScalar(self.w * other, self.x * other,
                                    self.y * other, self.z * other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, float)):
            return QuaternionScalar(other * self.w, other * self.x,
                                    other * self.y, other * self.z)
        return NotImplemented

    def __add__(self, other):
        if isinstance(other, QuaternionScalar):
            return QuaternionScalar(self.w + other.w, self.x + other.x,
                                    self.y + other.y, self.z + other.z)
        return NotImplemented

    def __neg__(self):
        return QuaternionScalar(-self.w, -self.x, -self.y, -self.z)

    def conjugate(self) -> QuaternionScalar:
        return QuaternionScalar(self.w, -self.x, -self.y, -self.z)

    def norm(self) -> float:
        return math.sqrt(self.w * self.w + self.x * self.x
                         + self.y * self.y + self.z * self.z)

    def as_array(self) -> np.ndarray:
        return np.array([self.w, self.x, self.y, self.z])

    def isclose(self, other: QuaternionScalar, tol: float = IDENTITY_TOL) -> bool:
        return all(abs(p - q) <= tol for p, q in zip(
            (self.w, self.x, self.y, self.z), (other.w, other.x, other.y, other.z)))


Scalar = Union[ComplexScalar, QuaternionScalar]

ONE = QuaternionScalar(1.0)
I = QuaternionScalar(0.0, 1.0, 0.0, 0.0)
J = QuaternionScalar(0.0, 0.0, 1.0, 0.0)
K = QuaternionScalar(0.0, 0.0, 0.0, 1.0)


def canonical_angle(theta: float) -> float:
    """Map ``theta`` into ``[0, 2*pi)``."""
    t = math.fmod(theta, TWO_PI)
    if t < 0.0:
        t += TWO_PI
    # fmod of a tiny negative number lands on 2*pi after the shift
    if t >= TWO_PI:
        t = 0.0
    return t


def wrap_signed(theta: float) -> float:
    """Map ``theta`` into ``(-pi, pi]``."""
    t = canonical_angle(theta)
    return t - TWO_PI if t > math.pi else t


@dataclass(frozen=True)
class Direction2:
    """Unit direction on the circle, stored as an angle in ``[0, 2*pi)``."""

    theta: float

    def __post_init__(self):
        object.__setattr__(self, "theta", canonical_angle(float(self.theta)))

    @property
    def vector(self) -> tuple[float, float]:
        return (math.cos(self.theta), math.sin(self.theta))

    def rotated(self, delta: float) -> Direction2:
        return Direction2(self.theta + delta)

    def lift(self) -> Direction3:
        """The same direction as a point on the equator of the sphere."""
        c, s = self.vector
        return Direction3(c, s, 0.0)


@dataclass(frozen=True)
class Direction3:
    """Unit direction on the sphere.

    The constructor rejects vectors whose norm deviates from 1 by more than
    ``UNIT_TOL``; use :meth:`normalized` for arbitrary input.
    """

    ux: float
    uy: float
    uz: float

    def __post_init__(self):
        n = math.sqrt(self.ux * self.ux + self.uy * self.uy + self.uz * self.uz)
        if abs(n - 1.0) > UNIT_TOL:
            raise InvalidAxisError(f"direction has norm {n!r}, expected 1")

    @classmethod
    def normalized(cls, x: float, y: float, z: float) -> Direction3:
        n = math.sqrt(x * x + y * y + z * z)
        if n == 0.0:
            raise InvalidAxisError("cannot normalise the zero vector")
        return cls(x / n, y / n, z / n)

    @classmethod
    def from_spherical(cls, polar: float, azimuth: float) -> Direction3:
        sp = math.sin(polar)
        return cls(sp * math.cos(azimuth), sp * math.sin(azimuth), math.cos(polar))

    @classmethod
    def in_plane(cls, phi: float) -> Direction3:
        """Direction at angle ``phi`` from x-hat in the x-z plane (rotation about y)."""
        return cls(math.cos(phi), 0.0, math.sin(phi))

    @property
    def vector(self) -> tuple[float, float, float]:
        return (self.ux, self.uy, self.uz)

    def __neg__(self):
        return Direction3(-self.ux, -self.uy, -self.uz)

    def dot(self, other: Direction3) -> float:
        return self.ux * other.ux + self.uy * other.uy + self.uz * other.uz


Direction = Union[Direction2, Direction3]

X_HAT = Direction3(1.0, 0.0, 0.0)
Y_HAT = Direction3(0.0, 1.0, 0.0)
Z_HAT = Direction3(0.0, 0.0, 1.0)


def qmul(p: QuaternionScalar, q: QuaternionScalar) -> QuaternionScalar:
    """Hamilton product ``p q``."""
    return QuaternionScalar(
        p.w * q.w - p.x * q.x - p.y * q.y - p.z * q.z,
        p.w * q.x + p.x * q.w + p.y * q.z - p.z * q.y,
        p.w * q.y - p.x * q.z + p.y * q.w + p.z * q.x,
        p.w * q.z + p.x * q.y - p.y * q.x + p.z * q.w,
    )


def _as_vector3(axis) -> tuple[float, float, float]:
    if isinstance(axis, Direction3):
        return axis.vector
    if isinstance(axis, QuaternionScalar):
        return axis.vector
    x, y, z = axis
    return (float(x), float(y), float(z))


def rotor(theta: float, axis) -> QuaternionScalar:
    """``e^{theta u} = cos(theta) + u sin(theta)`` for a unit axis ``u``.

    ``axis`` may be a :class:`Direction3`, a pure quaternion or any
    3-sequence; a norm off by more than ``UNIT_TOL`` raises
    :class:`InvalidAxisError`.
    """
    ux, uy, uz = _as_vector3(axis)
    n = math.sqrt(ux * ux + uy * uy + uz * uz)
    if abs(n - 1.0) > UNIT_TOL:
        raise InvalidAxisError(f"rotor axis has norm {n!r}, expected 1")
    s = math.sin(theta)
    return QuaternionScalar(math.cos(theta), ux * s, uy * s, uz * s)


def scalar_part(q: Scalar) -> float:
    if isinstance(q, QuaternionScalar):
        return q.w
    if isinstance(q, ComplexScalar):
        return q.re
    raise TypeError(f"expected a complex or quaternion scalar, got {type(q).__name__}")


def conjugate(q: Scalar) -> Scalar:
    return q.conjugate()


def angle_between(a: Direction, b: Direction) -> float:
    """Signed ``theta_a - theta_b`` in ``(-pi, pi]`` on the circle, unsigned
    ``arccos(a.b)`` in ``[0, pi]`` on the sphere."""
    if isinstance(a, Direction2) and isinstance(b, Direction2):
        return wrap_signed(a.theta - b.theta)
    if isinstance(a, Direction3) and isinstance(b, Direction3):
        # atan2 keeps full precision near 0 and pi where arccos does not
        cx, cy, cz = _cross(a.vector, b.vector)
        return math.atan2(math.sqrt(cx * cx + cy * cy + cz * cz), a.dot(b))
    raise TypeError("directions must both be 2d or both be 3d")


def _cross(a, b) -> tuple[float, float, float]:
    return (a[1] * b[2] - a[2] * b[1],
            a[2] * b[0] - a[0] * b[2],
            a[0] * b[1] - a[1] * b[0])


def rotation_axis(r: Direction3, a: Direction3, eps: float = UNIT_TOL) -> Direction3:
    """Unit vector along ``r x a``.

    Raises :class:`DegenerateAxisError` when ``|r x a| < eps``.
    """
    cx, cy, cz = _cross(r.vector, a.vector)
    n = math.sqrt(cx * cx + cy * cy + cz * cz)
    if n < eps:
        raise DegenerateAxisError("r and a are parallel; rotation axis undefined")
    return Direction3(cx / n, cy / n, cz / n)


def orthogonal_unit(r: Direction3) -> Direction3:
    """A fixed unit vector orthogonal to ``r``.

    Crosses ``r`` with the coordinate axis it is least aligned with, so the
    choice is deterministic and well conditioned.
    """
    v = r.vector
    k = min(range(3), key=lambda i: abs(v[i]))
    e = [0.0, 0.0, 0.0]
    e[k] = 1.0
    c = _cross(v, e)
    return Direction3.normalized(*c)


# --- vectorised kernels -------------------------------------------------

def qmul_array(p: np.ndarray, q: np.ndarray) -> np.ndarray:
    """Hamilton product of ``(..., 4)`` arrays laid out as ``(w, x, y, z)``."""
    pw, px, py, pz = np.moveaxis(np.asarray(p, dtype=float), -1, 0)
    qw, qx, qy, qz = np.moveaxis(np.asarray(q, dtype=float), -1, 0)
    return np.stack([
        pw * qw - px * qx - py * qy - pz * qz,
        pw * qx + px * qw + py * qz - pz * qy,
        pw * qy - px * qz + py * qw + pz * qx,
        pw * qz + px * qy - py * qx + pz * qw,
    ], axis=-1)


def qconj_array(q: np.ndarray) -> np.ndarray:
    out = np.array(q, dtype=float, copy=True)
    out[..., 1:] *= -1.0
    return out


def qscalar_product_array(p: np.ndarray, q: np.ndarray) -> np.ndarray:
    """Scalar part of ``p q`` without forming the vector part."""
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    return p[..., 0] * q[..., 0] - np.einsum("...i,...i->...", p[..., 1:], q[..., 1:])


def rotor_array(theta: np.ndarray, axis: np.ndarray) -> np.ndarray:
    """Rotors for arrays of angles ``(...)`` and unit axes ``(..., 3)``."""
    theta = np.asarray(theta, dtype=float)
    axis = np.asarray(axis, dtype=float)
    s = np.sin(theta)[..., None]
    return np.concatenate([np.cos(theta)[..., None], axis * s], axis=-1)

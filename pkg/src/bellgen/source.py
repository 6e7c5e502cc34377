"""Pair production: a shared random reference frame, handed out with opposite orientation."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .algebra import TWO_PI, Direction2, Direction3
from .generators import Frame, ParticleKind, PhotonFrame, SpinFrame

#: uniforms consumed by one pair production
PAIR_DRAWS = {ParticleKind.PHOTON: 2, ParticleKind.SPIN_HALF: 4}


@dataclass(frozen=True)
class PairState:
    kind: ParticleKind
    frame_1: Frame
    frame_2: Frame

    def __post_init__(self):
        f1, f2 = self.frame_1, self.frame_2
        if f1.r != f2.r:
            raise ValueError("pair frames must share the reference direction")
        if f2.orientation != -f1.orientation:
            raise ValueError("pair frames must have opposite orientation")
        if self.kind is ParticleKind.SPIN_HALF and f2.s != -f1.s:
            raise ValueError("spin pair frames must carry opposite outcome signs")


def partner_frame(frame: Frame) -> Frame:
    """Same reference direction, opposite orientation (and opposite sign for spin)."""
    if isinstance(frame, PhotonFrame):
        return PhotonFrame(frame.r, -frame.orientation)
    if isinstance(frame, SpinFrame):
        return SpinFrame(frame.r, -frame.orientation, -frame.s)
    raise TypeError(f"unsupported frame type {type(frame).__name__}")


def _sign(u: float) -> int:
    return 1 if u < 0.5 else -1


def uniform_sphere_point(u1: float, u2: float) -> Direction3:
    """Area-uniform point on S^2 from two uniforms (z uniform in [-1, 1])."""
    z = 2.0 * u1 - 1.0
    phi = TWO_PI * u2
    rho = math.sqrt(max(0.0, 1.0 - z * z))
    return Direction3.normalized(rho * math.cos(phi), rho * math.sin(phi), z)


def produce_pair(kind, rng) -> PairState:
    """Draw a fresh pair.

    ``rng`` only needs a ``random()`` method returning floats in ``[0, 1)``:
    a :class:`~bellgen.rng.TrialStream` or a ``numpy.random.Generator``.
    """
    kind = ParticleKind.parse(kind)
    if kind is ParticleKind.PHOTON:
        r = Direction2(TWO_PI * rng.random())
        f1 = PhotonFrame(r, _sign(rng.random()))
    else:
        r = uniform_sphere_point(rng.random(), rng.random())
        orientation = _sign(rng.random())
        f1 = SpinFrame(r, orientation, _sign(rng.random()))
    return PairState(kind, f1, partner_frame(f1))


@dataclass
class PairBatch:
    """Column-wise pair frames for many trials.

    ``r`` holds angles ``(n,)`` for photons and unit vectors ``(n, 3)`` for
    spin; ``s`` is all ones for photons.  Particle 2 is implicit: same ``r``,
    ``-orientation``, ``-s``.
    """

    kind: ParticleKind
    r: np.ndarray
    orientation: np.ndarray
    s: np.ndarray

    def __len__(self):
        return len(self.orientation)


def produce_pairs(kind, u: np.ndarray) -> PairBatch:
    """Vectorised :func:`produce_pair`: ``u`` is ``(n, >= PAIR_DRAWS[kind])``.

    Consumes the leading columns in the same order the scalar version calls
    ``rng.random()``.
    """
    kind = ParticleKind.parse(kind)
    u = np.asarray(u, dtype=float)
    if kind is ParticleKind.PHOTON:
        r = TWO_PI * u[:, 0]
        orientation = np.where(u[:, 1] < 0.5, 1, -1)
        s = np.ones_like(orientation)
    else:
        z = 2.0 * u[:, 0] - 1.0
        phi = TWO_PI * u[:, 1]
        rho = np.sqrt(np.maximum(0.0, 1.0 - z * z))
        r = np.stack([rho * np.cos(phi), rho * np.sin(phi), z], axis=-1)
        r /= np.linalg.norm(r, axis=-1, keepdims=True)
        orientation = np.where(u[:, 2] < 0.5, 1, -1)
        s = np.where(u[:, 3] < 0.5, 1, -1)
    return PairBatch(kind, r, orientation, s)

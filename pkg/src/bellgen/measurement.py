"""Sampling outcomes and the post-measurement frame update.

After a measurement along ``a`` the particle forgets its old reference
direction: a photon answering +1 re-aligns with ``a`` and one answering -1
with ``a`` turned by a quarter turn; a spin re-aligns with ``a`` and takes
the outcome as its sign.  Either way an immediate repeat of the same
measurement is certain to give the same answer.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .algebra import Direction2, Direction3
from .generators import (
    Frame,
    ParticleKind,
    PhotonFrame,
    SpinFrame,
    expectation,
    generator,
    outcome_probability,
    photon_generator_array,
    spin_generator_array,
)
from .rng import DOMAIN_ENSEMBLE
from .source import PAIR_DRAWS, produce_pairs

HALF_PI = 0.5 * math.pi


@dataclass(frozen=True)
class MeasurementRecord:
    direction: Direction2 | Direction3
    outcome: int
    pre_frame: Frame
    post_frame: Frame


def updated_frame(frame: Frame, a, outcome: int) -> Frame:
    """Frame left behind after ``outcome`` was obtained along ``a``."""
    if isinstance(frame, PhotonFrame):
        r = a if outcome == 1 else a.rotated(frame.orientation * HALF_PI)
        return PhotonFrame(r, frame.orientation)
    return SpinFrame(a, frame.orientation, outcome)


def measure(frame: Frame, a, rng) -> MeasurementRecord:
    """Sample the +/-1 outcome along ``a`` and update the frame.

    Consumes exactly one ``rng.random()`` draw.
    """
    p_plus = outcome_probability(expectation(generator(a, frame)))
    outcome = 1 if rng.random() < p_plus else -1
    return MeasurementRecord(a, outcome, frame, updated_frame(frame, a, outcome))


def direction_at(kind: ParticleKind, phi: float):
    """Measurement direction at angle ``phi`` from the reference setting 0.

    Photons use the polarisation angle directly; spin directions lie in the
    x-z plane so that ``phi`` is also the opening angle on the sphere.
    """
    if kind is ParticleKind.PHOTON:
        return Direction2(phi)
    return Direction3.in_plane(phi)


# --- vectorised kernels -------------------------------------------------

def expectation_array(kind: ParticleKind, a, r, orientation, s) -> np.ndarray:
    if kind is ParticleKind.PHOTON:
        return photon_generator_array(a.theta, r, orientation).real
    return spin_generator_array(a.vector, r, orientation, s)[:, 0]


def measure_array(kind: ParticleKind, a, r, orientation, s, u):
    """Vectorised :func:`measure` for one direction ``a`` and arrays of frames.

    Returns ``(outcome, r_post, s_post)``; orientation never changes.
    """
    e = np.clip(expectation_array(kind, a, r, orientation, s), -1.0, 1.0)
    outcome = np.where(np.asarray(u) < 0.5 * (1.0 + e), 1, -1)
    n = len(outcome)
    if kind is ParticleKind.PHOTON:
        r_post = np.where(outcome == 1, a.theta, a.theta + orientation * HALF_PI)
        s_post = np.ones(n, dtype=int)
    else:
        r_post = np.broadcast_to(np.asarray(a.vector), (n, 3))
        s_post = outcome
    return outcome, r_post, s_post


def sequential_same_probability(kind, theta: float, n_trials: int, seed: int,
                                workers: int = 1):
    """Empirical ``P(+1)`` at angle ``theta`` after post-selecting +1 at angle 0.

    Each trial starts from a freshly produced particle, measures it along
    the reference setting and keeps it only if the answer was +1.  The
    returned report counts the kept trials in ``n_trials``.
    """
    from .montecarlo import EnsembleReport, run_trials

    kind = ParticleKind.parse(kind)
    if n_trials < 1:
        raise ValueError("n_trials must be >= 1")
    first = direction_at(kind, 0.0)
    second = direction_at(kind, theta)
    k = PAIR_DRAWS[kind]

    def kernel(u):
        pairs = produce_pairs(kind, u)
        o1, r1, s1 = measure_array(kind, first, pairs.r, pairs.orientation, pairs.s, u[:, k])
        keep = o1 == 1
        o2, _, _ = measure_array(kind, second, r1[keep], pairs.orientation[keep],
                                 s1[keep], u[keep, k + 1])
        return np.array([keep.sum(), (o2 == 1).sum()], dtype=np.int64)

    kept, plus = run_trials(n_trials, seed, k + 2, kernel, workers=workers,
                            domain=DOMAIN_ENSEMBLE)
    if kept == 0:
        raise ValueError("no trial survived post-selection; increase n_trials")
    return EnsembleReport.from_binary(int(plus), int(kept), seed)


def sequential_joint_analytic(frame: Frame, first, second) -> np.ndarray:
    """Exact ``P(o_first, o_second)`` for a known starting frame.

    Rows index the first outcome (+1, -1), columns the second.
    """
    table = np.zeros((2, 2))
    p1 = outcome_probability(expectation(generator(first, frame)))
    for i, o1 in enumerate((1, -1)):
        pa = p1 if o1 == 1 else 1.0 - p1
        post = updated_frame(frame, first, o1)
        p2 = outcome_probability(expectation(generator(second, post)))
        table[i, 0] = pa * p2
        table[i, 1] = pa * (1.0 - p2)
    return table


def sequential_joint_distribution(frame: Frame, first, second, n_trials: int,
                                  seed: int, workers: int = 1) -> np.ndarray:
    """Monte Carlo estimate of :func:`sequential_joint_analytic`."""
    from .montecarlo import run_trials

    kind = frame.kind
    if kind is ParticleKind.PHOTON:
        r0 = np.full(1, frame.r.theta)
    else:
        r0 = np.asarray([frame.r.vector])

    def kernel(u):
        n = len(u)
        r = np.broadcast_to(r0, (n,) + r0.shape[1:])
        orientation = np.full(n, frame.orientation)
        s = np.full(n, getattr(frame, "s", 1))
        o1, r1, s1 = measure_array(kind, first, r, orientation, s, u[:, 0])
        o2, _, _ = measure_array(kind, second, r1, orientation, s1, u[:, 1])
        counts = np.zeros(4, dtype=np.int64)
        idx = 2 * (o1 == -1) + (o2 == -1)
        counts += np.bincount(idx, minlength=4)
        return counts

    counts = run_trials(n_trials, seed, 2, kernel, workers=workers)
    return counts.reshape(2, 2) / n_trials

"""Pair correlations from generator products, frame averages and CHSH."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, NamedTuple

import numpy as np

from .algebra import Direction2, Direction3, angle_between, qscalar_product_array, scalar_part
from .generators import (
    Frame,
    ParticleKind,
    generator,
    photon_generator_array,
    spin_generator_array,
)
from .measurement import direction_at

TSIRELSON = 2.0 * math.sqrt(2.0)


def pair_correlation_frames(a, f1: Frame, b, f2: Frame) -> float:
    """Correlation carried by one pair: the scalar part of ``G(b|f2) G(a|f1)``.

    With ``f2`` the partner of ``f1`` this is the same for every shared
    reference direction.  The scalar part of a quaternion product does not
    depend on the factor order.
    """
    return scalar_part(generator(b, f2) * generator(a, f1))


def pair_correlation_analytic(kind, a, b) -> float:
    """``(-1)**l cos(l theta_ab)``."""
    kind = ParticleKind.parse(kind)
    return kind.anticorrelation_sign * math.cos(kind.l * angle_between(a, b))


def fibonacci_sphere(n: int) -> np.ndarray:
    """``n`` quasi-uniform points on S^2 (equal-area Fibonacci lattice)."""
    k = np.arange(n) + 0.5
    z = 1.0 - 2.0 * k / n
    phi = math.pi * (3.0 - math.sqrt(5.0)) * k
    rho = np.sqrt(1.0 - z * z)
    return np.stack([rho * np.cos(phi), rho * np.sin(phi), z], axis=-1)


def frame_correlations(kind, a, b, r, orientation, s) -> np.ndarray:
    """Per-pair correlations for arrays of particle-1 frames (partner implied)."""
    kind = ParticleKind.parse(kind)
    if kind is ParticleKind.PHOTON:
        g1 = photon_generator_array(a.theta, r, orientation)
        g2 = photon_generator_array(b.theta, r, -orientation)
        return (g2 * g1).real
    g1 = spin_generator_array(a.vector, r, orientation, s)
    g2 = spin_generator_array(b.vector, r, -orientation, -s)
    return qscalar_product_array(g2, g1)


def reference_frame_average(kind, a, b, n_nodes: int) -> float:
    """Average the pair correlation over reference frames by quadrature.

    Photons: midpoint rule with ``n_nodes`` points on the circle, both
    orientations.  Spin: ``n_nodes`` Fibonacci-lattice points on the sphere,
    both orientations and both outcome signs.  Summation is compensated.
    """
    kind = ParticleKind.parse(kind)
    if n_nodes < 1:
        raise ValueError("n_nodes must be >= 1")
    if kind is ParticleKind.PHOTON:
        nodes = 2.0 * math.pi * (np.arange(n_nodes) + 0.5) / n_nodes
        signs = [(1, 1), (-1, 1)]
    else:
        nodes = fibonacci_sphere(n_nodes)
        signs = [(o, s) for o in (1, -1) for s in (1, -1)]
    values = []
    for o, s in signs:
        orient = np.full(n_nodes, o)
        sign = np.full(n_nodes, s)
        values.append(frame_correlations(kind, a, b, nodes, orient, sign))
    total = np.concatenate(values)
    return math.fsum(total) / total.size


@dataclass(frozen=True)
class ChshSettings:
    a: Direction2 | Direction3
    a_prime: Direction2 | Direction3
    b: Direction2 | Direction3
    b_prime: Direction2 | Direction3

    @classmethod
    def from_angles(cls, kind, a: float, a_prime: float, b: float, b_prime: float):
        """Settings at the given angles (radians) in a common plane."""
        kind = ParticleKind.parse(kind)
        return cls(*(direction_at(kind, t) for t in (a, a_prime, b, b_prime)))

    @classmethod
    def optimal(cls, kind) -> ChshSettings:
        """Preset settings reaching ``|S| = 2 sqrt(2)`` for the quantum curve."""
        kind = ParticleKind.parse(kind)
        return cls.from_angles(kind, *OPTIMAL_ANGLES[kind])


OPTIMAL_ANGLES = {
    ParticleKind.PHOTON: (0.0, math.pi / 4, math.pi / 8, 3 * math.pi / 8),
    ParticleKind.SPIN_HALF: (0.0, math.pi / 2, math.pi / 4, 3 * math.pi / 4),
}


class ChshValue(NamedTuple):
    value: float
    magnitude: float


def chsh(settings: ChshSettings, corr: Callable) -> ChshValue:
    """``E(a,b) - E(a,b') + E(a',b) + E(a',b')`` for a correlation ``corr(x, y)``."""
    s = (corr(settings.a, settings.b) - corr(settings.a, settings.b_prime)
         + corr(settings.a_prime, settings.b) + corr(settings.a_prime, settings.b_prime))
    return ChshValue(s, abs(s))


def analytic_correlation(kind) -> Callable:
    kind = ParticleKind.parse(kind)
    return lambda x, y: pair_correlation_analytic(kind, x, y)

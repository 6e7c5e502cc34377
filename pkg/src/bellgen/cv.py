"""Gaussian outcome generators for continuous position/momentum variables.

Exploratory only: widths are tied together through a quality factor ``f``
so that ``sigma_x * sigma_p = hbar / 2`` for every ``f``.  Natural units
``l_p = E_p / c = hbar = 1`` are the default.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate, special

from .errors import DomainError
from .montecarlo import BLOCK
from .rng import DOMAIN_CV, uniform_block

SQRT2 = math.sqrt(2.0)


def cv_width(kind: str, f: float, l_p: float = 1.0, e_p_over_c: float = 1.0) -> float:
    """``sigma_x = l_p f / sqrt(2)`` or ``sigma_p = (E_p/c) / (sqrt(2) f)``."""
    if not f > 0.0:
        raise DomainError(f"quality factor must be positive, got {f!r}")
    if kind == "x":
        return l_p * f / SQRT2
    if kind == "p":
        return e_p_over_c / (SQRT2 * f)
    raise ValueError(f"observable kind must be 'x' or 'p', got {kind!r}")


@dataclass(frozen=True)
class CvGenerator:
    kind: str
    center: float
    f: float
    l_p: float = 1.0
    e_p_over_c: float = 1.0
    hbar: float = 1.0

    def __post_init__(self):
        if self.kind not in ("x", "p"):
            raise ValueError(f"observable kind must be 'x' or 'p', got {self.kind!r}")
        if not self.f > 0.0:
            raise DomainError(f"quality factor must be positive, got {self.f!r}")

    @property
    def sigma(self) -> float:
        return cv_width(self.kind, self.f, self.l_p, self.e_p_over_c)

    def conjugate(self) -> CvGenerator:
        """Generator for the conjugate observable with the same ``f``."""
        return CvGenerator("p" if self.kind == "x" else "x", self.center, self.f,
                           self.l_p, self.e_p_over_c, self.hbar)


def cv_generator_value(v, gen: CvGenerator):
    """``v P(v)`` with ``P`` the normal density centred on ``gen.center``."""
    v = np.asarray(v, dtype=float)
    sig = gen.sigma
    out = v * np.exp(-0.5 * ((v - gen.center) / sig) ** 2) / (sig * math.sqrt(2.0 * math.pi))
    return float(out) if out.ndim == 0 else out


def _phi(t):
    return math.exp(-0.5 * t * t) / math.sqrt(2.0 * math.pi)


def cv_first_moment(gen: CvGenerator, half_width: float = 10.0) -> float:
    """Integral of ``v P(v)`` over ``center +/- half_width * sigma``.

    With ``v = center + sigma t`` the integral splits into
    ``center * int phi + sigma * int t phi``; each piece is integrated in
    ``t`` so the accuracy does not degrade for very wide or narrow widths.
    """
    opts = dict(points=[0.0], epsabs=1e-14, epsrel=1e-13, limit=200)
    mass, _ = integrate.quad(_phi, -half_width, half_width, **opts)
    lever, _ = integrate.quad(lambda t: t * _phi(t), -half_width, half_width, **opts)
    return gen.center * mass + gen.sigma * lever


@dataclass(frozen=True)
class CvSampleReport:
    samples: np.ndarray
    mean: float
    mean_se: float
    variance: float
    variance_se: float
    seed: int


def cv_sample(gen: CvGenerator, seed: int, n: int, stream: int = 0) -> CvSampleReport:
    """``n`` normal draws from ``gen`` on the counter-based streams.

    Draw ``i`` is the inverse normal CDF of draw 1 of trial ``i`` in the CV
    domain (``stream`` offsets the trial index range).  Moments are reduced
    block by block in index order.
    """
    if n < 2:
        raise ValueError("need at least two samples")
    base = stream * (1 << 40)
    blocks = []
    for start in range(0, n, BLOCK):
        stop = min(start + BLOCK, n)
        u = uniform_block(seed, DOMAIN_CV, base + start, base + stop, 1)[:, 0]
        blocks.append(gen.center + gen.sigma * special.ndtri(u))
    x = np.concatenate(blocks)
    s1 = math.fsum(x)
    mean = s1 / n
    var = math.fsum((x - mean) ** 2) / (n - 1)
    return CvSampleReport(
        samples=x,
        mean=mean,
        mean_se=math.sqrt(var / n),
        variance=var,
        variance_se=var * math.sqrt(2.0 / (n - 1)),
        seed=seed,
    )

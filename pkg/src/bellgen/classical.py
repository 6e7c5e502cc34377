"""Classical baselines: generators cut down to their real part.

Two local models are offered:

``factorized_projection``
    each particle keeps only ``Re G`` and answers independently with
    ``P(+1) = (1 + Re G) / 2`` given the shared frame;
``deterministic_sign``
    each particle answers ``sign(Re G)``, the textbook deterministic
    hidden-variable model.

Both obey ``|CHSH| <= 2``.
"""
from __future__ import annotations

import enum
import math

import numpy as np
from scipy import optimize

from .algebra import angle_between
from .errors import ConfigurationError
from .generators import ParticleKind
from .measurement import expectation_array
from .montecarlo import EnsembleReport, run_trials
from .source import PAIR_DRAWS, produce_pairs


class ClassicalModel(enum.Enum):
    FACTORIZED_PROJECTION = "factorized_projection"
    DETERMINISTIC_SIGN = "deterministic_sign"

    @classmethod
    def parse(cls, value) -> ClassicalModel:
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value))
        except ValueError:
            raise ConfigurationError(f"unknown classical model {value!r}") from None


def classical_curve(kind, model, theta):
    """Frame-averaged classical correlation as a function of the setting angle.

    ``theta`` is the signed polarisation difference for photons and the
    opening angle in ``[0, pi]`` for spin; arrays are accepted.
    """
    kind = ParticleKind.parse(kind)
    model = ClassicalModel.parse(model)
    theta = np.asarray(theta, dtype=float)
    if kind is ParticleKind.PHOTON:
        if model is ClassicalModel.FACTORIZED_PROJECTION:
            return 0.5 * np.cos(2.0 * theta)
        t = np.mod(np.abs(theta), math.pi)
        t = np.minimum(t, math.pi - t)
        return 1.0 - 4.0 * t / math.pi
    if model is ClassicalModel.FACTORIZED_PROJECTION:
        return -np.cos(theta) / 3.0
    return -(1.0 - 2.0 * theta / math.pi)


def classical_pair_correlation(kind, model, a, b) -> float:
    """Analytic frame average of the classical correlation between settings ``a`` and ``b``."""
    return float(classical_curve(kind, model, angle_between(a, b)))


def classical_ensemble_correlation(kind, model, a, b, n_trials: int, seed: int,
                                   workers: int = 1) -> EnsembleReport:
    """Monte Carlo estimate of :func:`classical_pair_correlation`.

    Each particle answers from its own real projection only, so the pair
    statistics factorise given the shared frame.
    """
    kind = ParticleKind.parse(kind)
    model = ClassicalModel.parse(model)
    k = PAIR_DRAWS[kind]

    def kernel(u):
        p = produce_pairs(kind, u)
        e1 = expectation_array(kind, a, p.r, p.orientation, p.s)
        e2 = expectation_array(kind, b, p.r, -p.orientation, -p.s)
        if model is ClassicalModel.FACTORIZED_PROJECTION:
            s1 = np.where(u[:, k] < 0.5 * (1.0 + e1), 1, -1)
            s2 = np.where(u[:, k + 1] < 0.5 * (1.0 + e2), 1, -1)
        else:
            s1 = np.where(e1 >= 0.0, 1, -1)
            s2 = np.where(e2 >= 0.0, 1, -1)
        return np.int64((s1 * s2).sum())

    total = run_trials(n_trials, seed, k + 2, kernel, workers=workers)
    return EnsembleReport.from_pm1(int(total), n_trials, seed)


def _opening(kind, x, y):
    d = np.asarray(x) - np.asarray(y)
    if kind is ParticleKind.PHOTON:
        return d
    # coplanar spin settings: opening angle on the great circle
    d = np.mod(d, 2.0 * math.pi)
    return np.minimum(d, 2.0 * math.pi - d)


def _chsh_angles(kind, model, a, ap, b, bp):
    def e(x, y):
        return classical_curve(kind, model, _opening(kind, x, y))
    return e(a, b) - e(a, bp) + e(ap, b) + e(ap, bp)


def classical_chsh_search(kind, model, grid: int = 64, refine: int = 8):
    """Maximise ``|CHSH|`` over coplanar settings.

    A ``grid**3`` scan over ``(a', b, b')`` with ``a = 0`` (only angle
    differences matter), then Nelder-Mead from the ``refine`` best cells.
    Returns ``(max |S|, (a, a', b, b'))``.
    """
    kind = ParticleKind.parse(kind)
    model = ClassicalModel.parse(model)
    period = math.pi if kind is ParticleKind.PHOTON else 2.0 * math.pi
    ticks = np.arange(grid) * (period / grid)
    ap, b, bp = np.meshgrid(ticks, ticks, ticks, indexing="ij")
    vals = np.abs(_chsh_angles(kind, model, 0.0, ap, b, bp)).ravel()
    order = np.argsort(vals)[::-1][:refine]
    best = float(vals[order[0]])
    best_x = (ap.ravel()[order[0]], b.ravel()[order[0]], bp.ravel()[order[0]])

    def neg(x):
        return -abs(float(_chsh_angles(kind, model, 0.0, *x)))

    for idx in order:
        x0 = np.array([ap.ravel()[idx], b.ravel()[idx], bp.ravel()[idx]])
        res = optimize.minimize(neg, x0, method="Nelder-Mead",
                                options={"xatol": 1e-10, "fatol": 1e-14, "maxiter": 4000})
        if -res.fun > best:
            best, best_x = float(-res.fun), tuple(res.x)
    return best, (0.0, *map(float, best_x))


def classical_chsh_max(kind, model, grid: int = 64) -> float:
    """Largest ``|CHSH|`` the classical model reaches."""
    return classical_chsh_search(kind, model, grid)[0]

"""Reproducible ensemble simulation.

Trials are processed in fixed blocks of ``BLOCK`` consecutive indices.
Block boundaries never depend on the number of workers and block results
are reduced in index order, so the output bits do not either.

A note on :func:`joint_outcome_sample`: the generator model fixes the
*correlation* of each pair, not a mechanism producing the two individual
outcomes.  To turn correlations into outcome statistics the ensemble code
draws the two outcomes jointly from the unique distribution with uniform
marginals and the given correlation.  That draw sees both settings; it is
bookkeeping for ensemble statistics and makes no claim about how either
particle picks its answer locally.  The locality harness in
:mod:`bellgen.locality` measures each particle on its own instead.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .correlation import ChshSettings, frame_correlations
from .errors import DomainError
from .generators import ParticleKind
from .measurement import measure_array
from .rng import DOMAIN_ENSEMBLE, derive_seed, uniform_block
from .source import PAIR_DRAWS, produce_pairs

BLOCK = 1 << 16


@dataclass(frozen=True)
class EnsembleReport:
    estimate: float
    std_error: float
    n_trials: int
    seed: int

    @classmethod
    def from_sums(cls, total: float, total_sq: float, n: int, seed: int) -> EnsembleReport:
        """Mean and standard error (sample std with ``ddof=1``, over ``sqrt(n)``).

        ``std_error`` is NaN for a single trial.
        """
        if n < 1:
            raise ValueError("need at least one trial")
        mean = total / n
        if n == 1:
            return cls(mean, math.nan, n, seed)
        var = max(0.0, (total_sq - total * total / n) / (n - 1))
        return cls(mean, math.sqrt(var / n), n, seed)

    @classmethod
    def from_pm1(cls, total: int, n: int, seed: int) -> EnsembleReport:
        """Report for +/-1 valued trials given the integer sum of outcomes."""
        return cls.from_sums(total, n, n, seed)

    @classmethod
    def from_binary(cls, successes: int, n: int, seed: int) -> EnsembleReport:
        """Report for 0/1 valued trials."""
        return cls.from_sums(successes, successes, n, seed)

    def deviation(self, target: float) -> float:
        """``|estimate - target|`` in standard errors."""
        if self.std_error == 0.0:
            return 0.0 if self.estimate == target else math.inf
        return abs(self.estimate - target) / self.std_error


def run_trials(n_trials: int, seed: int, n_draws: int, kernel: Callable,
               *, domain: int = DOMAIN_ENSEMBLE, workers: int = 1):
    """Evaluate ``kernel(u)`` on each block of uniforms and sum the results.

    ``u`` has shape ``(block_len, n_draws)`` and row ``i`` belongs to trial
    ``start + i``.  ``kernel`` returns an array (or scalar) of partial sums.
    """
    if n_trials < 1:
        raise ValueError("n_trials must be >= 1")
    starts = range(0, n_trials, BLOCK)

    def one(start):
        stop = min(start + BLOCK, n_trials)
        return kernel(uniform_block(seed, domain, start, stop, n_draws))

    if workers > 1 and len(starts) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(one, starts))
    else:
        parts = [one(s) for s in starts]
    total = parts[0]
    for p in parts[1:]:
        total = total + p
    return total


def singles_average(kind, a, n_trials: int, seed: int, workers: int = 1) -> EnsembleReport:
    """Mean outcome of particle 1 measured along ``a`` over fresh pairs."""
    kind = ParticleKind.parse(kind)
    k = PAIR_DRAWS[kind]

    def kernel(u):
        pairs = produce_pairs(kind, u)
        out, _, _ = measure_array(kind, a, pairs.r, pairs.orientation, pairs.s, u[:, k])
        return np.int64(out.sum())

    total = run_trials(n_trials, seed, k + 1, kernel, workers=workers)
    return EnsembleReport.from_pm1(int(total), n_trials, seed)


def _check_correlation(e):
    e = np.asarray(e, dtype=float)
    if np.any(np.abs(e) > 1.0 + 1e-9):
        raise DomainError("correlation must lie in [-1, 1]")
    return np.clip(e, -1.0, 1.0)


def joint_outcome_sample(E: float, rng) -> tuple[int, int]:
    """Draw ``(s1, s2)`` with ``P(s1, s2) = (1 + s1 s2 E) / 4``.

    Consumes two ``rng.random()`` draws: the first picks ``s1``, the second
    decides whether ``s2`` agrees with it.
    """
    e = float(_check_correlation(E))
    s1 = 1 if rng.random() < 0.5 else -1
    s2 = s1 if rng.random() < 0.5 * (1.0 + e) else -s1
    return s1, s2


def joint_outcome_array(E, u1, u2):
    """Vectorised :func:`joint_outcome_sample`."""
    e = _check_correlation(E)
    s1 = np.where(np.asarray(u1) < 0.5, 1, -1)
    s2 = np.where(np.asarray(u2) < 0.5 * (1.0 + e), s1, -s1)
    return s1, s2


def ensemble_correlation(kind, a, b, n_trials: int, seed: int,
                         workers: int = 1) -> EnsembleReport:
    """Estimate ``<s1 s2>``: per trial a fresh pair, its generator-product
    correlation, and a joint outcome draw at that correlation."""
    kind = ParticleKind.parse(kind)
    k = PAIR_DRAWS[kind]

    def kernel(u):
        pairs = produce_pairs(kind, u)
        e = frame_correlations(kind, a, b, pairs.r, pairs.orientation, pairs.s)
        s1, s2 = joint_outcome_array(e, u[:, k], u[:, k + 1])
        return np.int64((s1 * s2).sum())

    total = run_trials(n_trials, seed, k + 2, kernel, workers=workers)
    return EnsembleReport.from_pm1(int(total), n_trials, seed)


@dataclass(frozen=True)
class ChshEstimate:
    value: float
    std_error: float
    terms: tuple[EnsembleReport, ...]

    def deviation(self, target: float) -> float:
        if self.std_error == 0.0:
            return 0.0 if self.value == target else math.inf
        return abs(self.value - target) / self.std_error


def ensemble_chsh(kind, settings: ChshSettings, n_trials: int, seed: int,
                  workers: int = 1) -> ChshEstimate:
    """Monte Carlo CHSH value; each of the four terms runs on its own derived seed."""
    pairs = [(settings.a, settings.b), (settings.a, settings.b_prime),
             (settings.a_prime, settings.b), (settings.a_prime, settings.b_prime)]
    signs = (1.0, -1.0, 1.0, 1.0)
    terms = tuple(
        ensemble_correlation(kind, x, y, n_trials, derive_seed(seed, i), workers=workers)
        for i, (x, y) in enumerate(pairs)
    )
    value = sum(sg * t.estimate for sg, t in zip(signs, terms))
    se = math.sqrt(sum(t.std_error ** 2 for t in terms))
    return ChshEstimate(value, se, terms)


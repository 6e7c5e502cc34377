"""Counter-based random substreams.

Every trial gets its own SplitMix64 stream whose starting state is a hash
of ``(master seed, domain, trial index)``.  Draw ``k`` of a trial is a pure
function of those four integers, so a batch of trials can be generated in
any order, in any chunking, by any number of workers, and the numbers come
out the same.

Two implementations share the exact same arithmetic: :class:`TrialStream`
(pure Python integers, one trial at a time) and :func:`uniform_block`
(numpy ``uint64`` arrays, many trials at once).
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

MASK64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15
_M1 = 0xBF58476D1CE4E5B9
_M2 = 0x94D049BB133111EB

# uniform doubles in the open interval (0, 1): (k + 0.5) / 2**53
_INV53 = 1.0 / (1 << 53)

#: well-known domains, so independent parts of one run never share a stream
DOMAIN_ENSEMBLE = 0
DOMAIN_SOURCE = 1
DOMAIN_PARTY_A = 2
DOMAIN_PARTY_B = 3
DOMAIN_CV = 4


def _mix(x: int) -> int:
    x &= MASK64
    x = ((x ^ (x >> 30)) * _M1) & MASK64
    x = ((x ^ (x >> 27)) * _M2) & MASK64
    return x ^ (x >> 31)


@lru_cache(maxsize=64)
def _domain_key(seed: int, domain: int) -> int:
    return _mix(_mix((seed & MASK64) ^ GOLDEN) ^ _mix((domain & MASK64) + GOLDEN))


def stream_key(seed: int, domain: int, index: int) -> int:
    """Initial SplitMix64 state for trial ``index`` of ``domain`` under ``seed``."""
    return _mix(_domain_key(seed, domain) ^ _mix((index & MASK64) * GOLDEN + 1))


def derive_seed(seed: int, *labels: int) -> int:
    """Deterministically derive a child master seed from a parent and labels."""
    k = _mix((seed & MASK64) + GOLDEN)
    for lab in labels:
        k = _mix(k ^ _mix((lab & MASK64) + GOLDEN))
    return k


def _to_unit(bits: int) -> float:
    return ((bits >> 11) + 0.5) * _INV53


@dataclass(frozen=True)
class RandomStreamSpec:
    """Names one substream: identical specs give identical numbers."""

    seed: int
    index: int
    domain: int = DOMAIN_ENSEMBLE

    def stream(self) -> TrialStream:
        return TrialStream(self.seed, self.index, self.domain)


class TrialStream:
    """Sequential view of one substream.

    Duck-compatible with ``numpy.random.Generator.random()`` for scalar use.
    """

    __slots__ = ("_key", "_counter")

    def __init__(self, seed: int, index: int = 0, domain: int = DOMAIN_ENSEMBLE):
        self._key = stream_key(seed, domain, index)
        self._counter = 0

    @property
    def position(self) -> int:
        return self._counter

    def random(self) -> float:
        self._counter += 1
        return _to_unit(_mix(self._key + self._counter * GOLDEN))


def _mix_array(x: np.ndarray) -> np.ndarray:
    x = x ^ (x >> np.uint64(30))
    x = x * np.uint64(_M1)
    x = x ^ (x >> np.uint64(27))
    x = x * np.uint64(_M2)
    return x ^ (x >> np.uint64(31))


def stream_keys(seed: int, domain: int, indices) -> np.ndarray:
    """Vectorised :func:`stream_key` over an array of trial indices."""
    k = np.uint64(_domain_key(seed, domain))
    idx = np.asarray(indices, dtype=np.uint64)
    with np.errstate(over="ignore"):
        return _mix_array(k ^ _mix_array(idx * np.uint64(GOLDEN) + np.uint64(1)))


def uniform_block(seed: int, domain: int, start: int, stop: int, n_draws: int) -> np.ndarray:
    """Draws ``1..n_draws`` of trials ``start..stop-1``, shape ``(stop-start, n_draws)``.

    Column ``j`` equals the ``(j+1)``-th call to ``TrialStream.random()`` of
    the same trial.
    """
    keys = stream_keys(seed, domain, np.arange(start, stop, dtype=np.uint64))
    counters = np.arange(1, n_draws + 1, dtype=np.uint64) * np.uint64(GOLDEN)
    with np.errstate(over="ignore"):
        bits = _mix_array(keys[:, None] + counters[None, :])
    return ((bits >> np.uint64(11)).astype(np.float64) + 0.5) * _INV53

import math

import numpy as np
import pytest

from bellgen.algebra import Direction2, Direction3
from bellgen.generators import ParticleKind, PhotonFrame, SpinFrame
from bellgen.rng import TrialStream, uniform_block
from bellgen.source import PAIR_DRAWS, PairState, partner_frame, produce_pair, produce_pairs


def test_photon_pair_shares_r_with_opposite_orientation():
    pair = produce_pair("photon", TrialStream(3))
    assert pair.frame_1.r == pair.frame_2.r
    assert {pair.frame_1.orientation, pair.frame_2.orientation} == {1, -1}


def test_spin_pair_opposite_signs():
    for i in range(20):
        pair = produce_pair("spin", TrialStream(3, i))
        assert pair.frame_2.s == -pair.frame_1.s
        assert pair.frame_2.orientation == -pair.frame_1.orientation
        assert pair.frame_1.r == pair.frame_2.r


def test_fixed_seed_is_deterministic():
    assert produce_pair("spin", TrialStream(42)) == produce_pair("spin", TrialStream(42))
    assert produce_pair("photon", TrialStream(42)) == produce_pair("photon", TrialStream(42))


def test_numpy_generator_is_accepted():
    a = produce_pair("photon", np.random.default_rng(42))
    b = produce_pair("photon", np.random.default_rng(42))
    assert a == b


def test_partner_frame_examples():
    r = Direction2(0.4)
    assert partner_frame(PhotonFrame(r, 1)) == PhotonFrame(r, -1)
    r3 = Direction3.normalized(1, 1, 0)
    assert partner_frame(SpinFrame(r3, 1, 1)) == SpinFrame(r3, -1, -1)


@pytest.mark.parametrize("frame", [
    PhotonFrame(Direction2(1.0), -1),
    SpinFrame(Direction3.normalized(0, 1, 1), -1, 1),
])
def test_partner_is_involution(frame):
    assert partner_frame(partner_frame(frame)) == frame


def test_pair_state_invariants_enforced():
    r = Direction2(0.0)
    with pytest.raises(ValueError):
        PairState(ParticleKind.PHOTON, PhotonFrame(r, 1), PhotonFrame(r, 1))
    with pytest.raises(ValueError):
        PairState(ParticleKind.PHOTON, PhotonFrame(r, 1), PhotonFrame(Direction2(1.0), -1))
    r3 = Direction3(1.0, 0.0, 0.0)
    with pytest.raises(ValueError):
        PairState(ParticleKind.SPIN_HALF, SpinFrame(r3, 1, 1), SpinFrame(r3, -1, 1))


@pytest.mark.parametrize("kind", ["photon", "spin"])
def test_batch_matches_scalar(kind):
    k = PAIR_DRAWS[ParticleKind.parse(kind)]
    u = uniform_block(8, 0, 0, 50, k)
    batch = produce_pairs(kind, u)
    for i in range(50):
        pair = produce_pair(kind, TrialStream(8, i))
        f = pair.frame_1
        assert f.orientation == batch.orientation[i]
        if kind == "photon":
            assert abs(math.remainder(f.r.theta - batch.r[i], 2 * math.pi)) < 1e-12
        else:
            assert f.s == batch.s[i]
            np.testing.assert_allclose(f.r.vector, batch.r[i], atol=1e-12)


@pytest.mark.parametrize("kind", ["photon", "spin"])
def test_uniformity(kind):
    n = 100_000
    kind = ParticleKind.parse(kind)
    pairs = produce_pairs(kind, uniform_block(2024, 0, 0, n, PAIR_DRAWS[kind]))
    if kind is ParticleKind.PHOTON:
        r = np.stack([np.cos(pairs.r), np.sin(pairs.r)], axis=1)
    else:
        r = pairs.r
        np.testing.assert_allclose(np.linalg.norm(r, axis=1), 1.0, atol=1e-12)
    assert np.all(np.abs(r.mean(axis=0)) <= 5 / math.sqrt(n))
    for signs in (pairs.orientation, pairs.s if kind is ParticleKind.SPIN_HALF else None):
        if signs is None:
            continue
        assert abs((signs == 1).mean() - 0.5) <= 5 / (2 * math.sqrt(n))


def test_sphere_samples_are_area_uniform():
    # equal-area bands in z carry equal mass; also the second moment is 1/3 per axis
    n = 100_000
    pairs = produce_pairs("spin", uniform_block(77, 0, 0, n, 4))
    z = pairs.r[:, 2]
    counts = np.histogram(z, bins=10, range=(-1, 1))[0]
    expected = n / 10
    assert ((counts - expected) ** 2 / expected).sum() < 40
    np.testing.assert_allclose((pairs.r ** 2).mean(axis=0), 1 / 3, atol=5 * math.sqrt(4 / 45 / n))

import math

import numpy as np
import pytest

from bellgen.algebra import ONE, X_HAT, Y_HAT, ComplexScalar, Direction2, Direction3, K
from bellgen.errors import DomainError
from bellgen.generators import (
    ParticleKind,
    PhotonFrame,
    SpinFrame,
    expectation,
    outcome_probability,
    photon_generator,
    photon_generator_array,
    spin_axis,
    spin_generator,
    spin_generator_array,
)

TOL = 1e-12


def random_directions(rng, n):
    v = rng.standard_normal((n, 3))
    return v / np.linalg.norm(v, axis=1, keepdims=True)


def test_particle_kind_constants():
    p, s = ParticleKind.PHOTON, ParticleKind.SPIN_HALF
    assert (p.l, p.d, p.anticorrelation_sign) == (2, 2, 1)
    assert (s.l, s.d, s.anticorrelation_sign) == (1, 3, -1)
    assert ParticleKind.parse("spin") is s
    with pytest.raises(ValueError):
        ParticleKind.parse("phonon")


def test_frames_reject_bad_signs():
    with pytest.raises(ValueError):
        PhotonFrame(Direction2(0.0), 0)
    with pytest.raises(ValueError):
        SpinFrame(X_HAT, 1, 2)


# --- photon ---------------------------------------------------------------

@pytest.mark.parametrize("orientation", [1, -1])
def test_photon_aligned_is_one(orientation):
    r = Direction2(0.9)
    assert photon_generator(r, PhotonFrame(r, orientation)).isclose(ComplexScalar(1.0), TOL)


def test_photon_eighth_turn_is_i():
    g = photon_generator(Direction2(0.2 + math.pi / 4), PhotonFrame(Direction2(0.2), 1))
    assert g.isclose(ComplexScalar(0.0, 1.0), TOL)


def test_photon_quarter_turn_is_minus_one():
    g = photon_generator(Direction2(math.pi / 2), PhotonFrame(Direction2(0.0), 1))
    assert g.isclose(ComplexScalar(-1.0, 0.0), TOL)


def test_photon_orientation_conjugates():
    a, r = Direction2(1.0), Direction2(0.3)
    g_plus = photon_generator(a, PhotonFrame(r, 1))
    g_minus = photon_generator(a, PhotonFrame(r, -1))
    assert g_minus.isclose(g_plus.conjugate(), TOL)


# --- spin -----------------------------------------------------------------

def test_spin_aligned_is_one():
    r = Direction3.normalized(1, 2, 2)
    assert spin_generator(r, SpinFrame(r, 1, 1)).isclose(ONE, TOL)


def test_spin_antiparallel_is_minus_one():
    r = Direction3.normalized(-1, 0.5, 2)
    assert spin_generator(-r, SpinFrame(r, 1, 1)).isclose(-ONE, TOL)


def test_spin_quarter_turn_is_pure_k():
    assert spin_generator(Y_HAT, SpinFrame(X_HAT, 1, 1)).isclose(K, TOL)


def test_spin_orientation_flips_axis():
    g = spin_generator(Y_HAT, SpinFrame(X_HAT, -1, 1))
    assert g.isclose(-K, TOL)


def test_spin_degenerate_axis_fallback_is_deterministic():
    r = Direction3.normalized(0.3, -0.4, 0.5)
    f = SpinFrame(r, 1, -1)
    u1, u2 = spin_axis(r, f), spin_axis(r, f)
    assert u1 == u2
    assert abs(u1.dot(r)) <= TOL


# --- expectation and probabilities ----------------------------------------

def test_photon_expectation_aligned():
    r = Direction2(2.0)
    assert expectation(photon_generator(r, PhotonFrame(r))) == pytest.approx(1.0, abs=TOL)


def test_spin_expectation_perpendicular_is_zero():
    assert expectation(spin_generator(Y_HAT, SpinFrame(X_HAT, 1, 1))) == pytest.approx(0.0,
                                                                                       abs=TOL)


def test_spin_expectation_negative_sign():
    assert expectation(spin_generator(X_HAT, SpinFrame(X_HAT, 1, -1))) == pytest.approx(-1.0,
                                                                                        abs=TOL)


@pytest.mark.parametrize("e, p", [(1.0, 1.0), (0.0, 0.5), (math.cos(2 * math.pi / 6), 0.75),
                                  (-1.0, 0.0)])
def test_outcome_probability(e, p):
    assert outcome_probability(e) == pytest.approx(p, abs=TOL)


def test_outcome_probability_domain():
    with pytest.raises(DomainError):
        outcome_probability(1.0 + 1e-6)
    assert outcome_probability(1.0 + 1e-12) == 1.0
    assert outcome_probability(-1.0 - 1e-12) == 0.0


# --- properties -----------------------------------------------------------

def test_unit_magnitude_and_projection_bound():
    rng = np.random.default_rng(10)
    for t_a, t_r, o in zip(rng.uniform(0, 7, 1000), rng.uniform(0, 7, 1000),
                           rng.choice([1, -1], 1000)):
        g = photon_generator(Direction2(t_a), PhotonFrame(Direction2(t_r), int(o)))
        assert abs(g.norm() - 1.0) <= TOL
        assert -1.0 <= expectation(g) <= 1.0
    for a, r, o, s in zip(random_directions(rng, 1000), random_directions(rng, 1000),
                          rng.choice([1, -1], 1000), rng.choice([1, -1], 1000)):
        g = spin_generator(Direction3(*a), SpinFrame(Direction3(*r), int(o), int(s)))
        assert abs(g.norm() - 1.0) <= TOL
        assert -1.0 <= expectation(g) <= 1.0


def test_spin_expectation_identity():
    rng = np.random.default_rng(11)
    for a, r, o, s in zip(random_directions(rng, 1000), random_directions(rng, 1000),
                          rng.choice([1, -1], 1000), rng.choice([1, -1], 1000)):
        da, dr = Direction3(*a), Direction3(*r)
        g = spin_generator(da, SpinFrame(dr, int(o), int(s)))
        assert abs(expectation(g) - s * da.dot(dr)) <= TOL


def test_photon_embeds_as_spin_style_rotor_on_the_circle():
    # e^{i o 2 theta_ar} in the (1, k) plane equals the spin-style rotor built
    # from the doubled angles lifted onto the equator
    rng = np.random.default_rng(12)
    for t_a, t_r, o in zip(rng.uniform(0, 7, 1000), rng.uniform(0, 7, 1000),
                           rng.choice([1, -1], 1000)):
        g = photon_generator(Direction2(t_a), PhotonFrame(Direction2(t_r), int(o)))
        spin_style = spin_generator(Direction2(2 * t_a).lift(),
                                    SpinFrame(Direction2(2 * t_r).lift(), int(o), 1))
        assert g.to_quaternion().isclose(spin_style, 1e-12)


def test_partner_axes_reproduce_perpendicular_overlap():
    # -u . u~ equals the overlap of the unit components of a and b perpendicular to r
    rng = np.random.default_rng(13)
    for a, b, r in zip(*(random_directions(rng, 1000) for _ in range(3))):
        da, db, dr = Direction3(*a), Direction3(*b), Direction3(*r)
        u = spin_axis(da, SpinFrame(dr, 1, 1))
        u_tilde = spin_axis(db, SpinFrame(dr, -1, -1))
        a_perp = a - a.dot(r) * r
        b_perp = b - b.dot(r) * r
        overlap = a_perp.dot(b_perp) / (np.linalg.norm(a_perp) * np.linalg.norm(b_perp))
        assert abs(-u.dot(u_tilde) - overlap) <= 1e-12


def test_array_kernels_match_scalar():
    rng = np.random.default_rng(14)
    ta, tr = rng.uniform(0, 7, 30), rng.uniform(0, 7, 30)
    o = rng.choice([1, -1], 30)
    for g_arr, a, r, oi in zip(photon_generator_array(ta, tr, o), ta, tr, o):
        g = photon_generator(Direction2(a), PhotonFrame(Direction2(r), int(oi)))
        assert abs(g.to_complex() - g_arr) <= TOL
    a = random_directions(rng, 30)
    r = random_directions(rng, 30)
    s = rng.choice([1, -1], 30)
    r[0] = a[0]  # degenerate row
    q = spin_generator_array(a, r, o, s)
    for qi, ai, ri, oi, si in zip(q, a, r, o, s):
        g = spin_generator(Direction3(*ai), SpinFrame(Direction3(*ri), int(oi), int(si)))
        np.testing.assert_allclose(qi, g.as_array(), atol=TOL)

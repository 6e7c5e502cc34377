"""Local complex/quaternion generator model of Bell pair correlations."""
from .algebra import (
    ComplexScalar,
    Direction2,
    Direction3,
    QuaternionScalar,
    angle_between,
    conjugate,
    qmul,
    rotation_axis,
    rotor,
    scalar_part,
)
from .classical import ClassicalModel, classical_chsh_max, classical_pair_correlation
from .correlation import (
    ChshSettings,
    analytic_correlation,
    chsh,
    pair_correlation_analytic,
    pair_correlation_frames,
    reference_frame_average,
)
from .cv import CvGenerator, cv_first_moment, cv_generator_value, cv_sample, cv_width
from .errors import ConfigurationError, DegenerateAxisError, DomainError, InvalidAxisError
from .generators import (
    ParticleKind,
    PhotonFrame,
    SpinFrame,
    expectation,
    generator,
    outcome_probability,
    photon_generator,
    spin_generator,
)
from .locality import run_session, verify_no_signaling
from .measurement import measure, sequential_same_probability
from .montecarlo import (
    EnsembleReport,
    ensemble_chsh,
    ensemble_correlation,
    joint_outcome_sample,
    singles_average,
)
from .rng import RandomStreamSpec, TrialStream
from .source import PairState, partner_frame, produce_pair

__version__ = "0.1.0"

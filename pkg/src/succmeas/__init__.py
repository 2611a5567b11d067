"""Numerics for successive quantum measurements with a coarse first measurement."""

from .errors import AccuracyError, DegenerateBoundError, ValidationError, ZeroProbabilityError
from .hilbert import (
    DensityOperator,
    Projector,
    SpectralObservable,
    StateVector,
    commutator_expectation,
    expectation,
    pure_density,
    variance,
)
from .coarse import CoarseGraining, build_partition, coarse_observable, coarse_projector
from .wigner import (
    ConditionalDistribution,
    WidthEstimate,
    conditional_wigner,
    joint_wigner,
    perturbed_state,
    pure_state_conditional,
    robertson_check,
    ur_function,
    width_count,
    width_stddev,
)
from .probe import (
    ExperimentSpec,
    GridDensity,
    ProbeCoupling,
    conditional_q2_given_q1,
    conditional_strong_limit,
    conditional_weak_limit,
    deconvolve_wigner,
    joint_distribution,
    marginal_q1,
)
from .schwinger import SchwingerSpace, conditional_w_q, first_zero_width, robertson_table
from .continuum import (
    GaussianWavepacket,
    RotatedQuadrature,
    conditional_w_x,
    model_width_relation,
    sinc_width_product,
    theta_width,
)

__version__ = "0.1.0"

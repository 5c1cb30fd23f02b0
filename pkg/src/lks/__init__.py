"""Regularized Kepler dynamics: quaternion KS transformation, LKS
action-angle variables, orbit classification, and the quadrupole
Lidov-Kozai secular model."""

from .errors import (
    AntipodalDegeneracy,
    BoundarySingularity,
    CollisionApproach,
    DegeneracyError,
    DegenerateChart,
    DegenerateElements,
    InvalidStateError,
    LKSError,
    ManifoldViolation,
    NegativeRadicand,
    NonpositiveEnergy,
    NonzeroGamma,
    NumericalError,
    StepFailure,
    UndefinedAngles,
    UndefinedLambda,
    ZeroQuaternion,
    ZeroRadius,
)
from .gauge import GaugeAlpha
from .geometry import (
    CartanPair,
    DelaunayReport,
    EdgeCase,
    KeplerElements,
    OrbitClass,
    OrbitClassification,
    PartialElements,
    angular_momentum_lks,
    cartan_vectors,
    cartesian_to_elements,
    classify,
    delaunay_checks,
    elements_to_cartesian,
    lambda_from_projections,
    lrl_vector_lks,
    partial_elements,
)
from .ks import (
    KS1,
    KS3,
    CartesianPhaseExt,
    KSFrame,
    KSPhase,
    bilinear_j,
    fibre_point,
    hamiltonian_k0,
    ks_map,
    lc_plane_basis,
    lc_plane_image,
    lift_cartesian,
    momentum_lift,
    oscillator_frequency,
    position_angle_beta,
    project_ks,
    sks_vector,
)
from .kozai import (
    SECULAR_TIME_SCALE,
    Equilibrium,
    EquilibriumFamily,
    LKParams,
    PortraitGrid,
    SecularState,
    SecularTrajectory,
    Stability,
    average_q_numeric,
    b_coefficient,
    critical_lambda_action,
    find_equilibria,
    perturbation_q_lks,
    perturbation_r,
    phase_portrait,
    propagate_secular,
    secular_hamiltonian,
    secular_jacobian,
    secular_perturbation,
    secular_rhs,
    stability,
)
from .lissajous import (
    ActionCoefficients,
    LissajousPlane,
    LKSState,
    cartesian_to_lks,
    coefficients,
    hamiltonian_m0,
    ks_to_lks,
    lissajous_forward,
    lissajous_inverse,
    lissajous_semiaxes,
    lks_to_cartesian,
    lks_to_ks,
    mathieu_to_lks,
    planes_from_lks,
    radius_lks,
)
from .propagation import Trajectory, cartesian_oracle, kepler_flow_lks, ks_oscillator_flow
from .quaternion import E0, E1, E2, E3, Quaternion, conjugate, cross, mul, rotor_p, rotor_q, unit_vector3

__version__ = "0.1.0"

"""Exception hierarchy for the lks package.

Three branches matter to callers: geometric degeneracies (a well-posed input
sits on a chart singularity), invalid states (input violates a manifold or
bound constraint), and numerical failures (an integrator or root finder gave
up). The CLI maps them to exit codes 2, 3 and 4 respectively.
"""

from __future__ import annotations


class LKSError(Exception):
    """Base class for all package errors."""


class DegeneracyError(LKSError):
    """Geometric degeneracy: the requested quantity is undefined there."""


class InvalidStateError(LKSError):
    """Input violates a constraint (manifold, bound, or sign condition)."""


class NumericalError(LKSError):
    """A numerical procedure failed to meet its tolerance."""


class AntipodalDegeneracy(DegeneracyError):
    """Position antipodal to the defining vector: the fibre has no canonical
    pure-quaternion representative; the caller must pick one explicitly."""


class ZeroQuaternion(InvalidStateError):
    """A quaternion that must be nonzero has (numerically) zero norm."""


class ZeroRadius(DegeneracyError):
    """Radius vanished (collision point)."""


class NonpositiveEnergy(InvalidStateError):
    """Energy-like momentum S must be positive in the elliptic regime."""


class ManifoldViolation(InvalidStateError):
    """Bilinear invariant J(v, V) is off zero beyond tolerance."""


class NonzeroGamma(InvalidStateError):
    """Action Gamma is off zero beyond tolerance; state is unphysical."""


class NegativeRadicand(InvalidStateError):
    """Action bounds violated: a coefficient radicand is negative."""


class UndefinedAngles(DegeneracyError):
    """One or more angle variables are undefined for this state.

    Carries the list of undetermined angle names and, when available, the
    combinations that survive the degeneracy (e.g. a longitude l+g).
    """

    def __init__(self, message: str, undetermined: tuple[str, ...] = (),
                 surviving: dict[str, float] | None = None):
        super().__init__(message)
        self.undetermined = undetermined
        self.surviving = surviving or {}


class UndefinedLambda(DegeneracyError):
    """Both projected Cartan vectors needed for the angle are null."""


class DegenerateElements(DegeneracyError):
    """Orbital elements are not all defined for this state.

    ``partial`` holds the tagged subset of elements that remain meaningful.
    """

    def __init__(self, message: str, partial=None):
        super().__init__(message)
        self.partial = partial


class DegenerateChart(DegeneracyError):
    """The (lambda, Lambda) chart collapses at this equilibrium."""


class BoundarySingularity(DegeneracyError):
    """Evaluation on the edge of the admissible action square."""


class StepFailure(NumericalError):
    """Adaptive integrator could not complete the requested span."""


class CollisionApproach(NumericalError):
    """Cartesian integration approached r = 0 beyond its safe radius."""

"""Quadrupole Lidov-Kozai secular model in LKS variables.

A small body orbits a central mass mu; a distant perturber mu_p moves on a
circular orbit of radius a_p in the reference plane. Truncating the
perturbing function at the second Legendre polynomial and averaging over the
fast angle reduces the problem to one degree of freedom in the conjugate
pair (lambda, Lambda), with S, L and G conserved. The reduced flow is
regular at radial orbits (G = 0, lambda = k pi/2), which is the point of
using the LKS chart instead of Delaunay variables.

Normalization note: the secular Hamiltonian below carries the classical
1/1024 coefficient. The raw perturbation pullback (4r/alpha) R averages to
exactly SECULAR_TIME_SCALE times the secular perturbation term, so one unit
of the secular time parameter equals 1/SECULAR_TIME_SCALE of the oscillator
Sundman time. Equilibria, stability and phase-portrait topology do not feel
the rescaling.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy.integrate import solve_ivp

from .errors import (
    BoundarySingularity,
    DegenerateChart,
    NegativeRadicand,
    StepFailure,
)
from .lissajous import LKSState, coefficients, lks_to_cartesian, radius_lks

__all__ = [
    "LKParams", "SecularState", "Equilibrium", "EquilibriumFamily",
    "Stability", "SecularTrajectory", "PortraitGrid",
    "SECULAR_TIME_SCALE",
    "perturbation_r", "perturbation_q_lks", "average_q_numeric",
    "secular_perturbation", "secular_hamiltonian", "b_coefficient",
    "secular_rhs", "secular_jacobian", "propagate_secular",
    "critical_lambda_action", "find_equilibria", "stability",
    "phase_portrait",
]

# Ratio of the raw averaged pullback to the secular perturbation term.
SECULAR_TIME_SCALE = 16.0

_BOUNDARY_TOL = 1e-12


@dataclass(frozen=True)
class LKParams:
    """Parameters of the secular model.

    n_p defaults to the circular two-body mean motion of the perturber.
    S, L, G are the conserved actions of the reduced flow. The quadrupole
    truncation assumes r << a_p; this is documented, not enforced.
    """

    mu: float
    mu_p: float
    a_p: float
    S: float
    L: float
    G: float
    n_p: float | None = None

    def __post_init__(self):
        if not (self.mu > 0.0 and self.mu_p > 0.0 and self.a_p > 0.0):
            raise ValueError("mu, mu_p and a_p must be positive")
        if not (self.S > 0.0 and self.L > 0.0):
            raise ValueError("actions S and L must be positive")
        if abs(self.G) > self.L:
            raise ValueError(f"|G| = {abs(self.G)} exceeds L = {self.L}")
        if self.n_p is None:
            object.__setattr__(
                self, "n_p",
                math.sqrt((self.mu + self.mu_p) / self.a_p ** 3))

    @property
    def lambda_bound(self) -> float:
        """Half-width L - |G| of the admissible Lambda interval."""
        return self.L - abs(self.G)


@dataclass(frozen=True)
class SecularState:
    """Reduced phase point (lambda, Lambda)."""

    lam: float
    Lam: float


class EquilibriumFamily(Enum):
    EQUATORIAL_ELLIPTIC = "EquatorialElliptic"
    CIRCULAR_INCLINED = "CircularInclined"
    KOZAI_FIXED_POINT = "KozaiFixedPoint"
    RADIAL_EQUATORIAL = "RadialEquatorial"
    VERTEX = "Vertex"


class Stability(Enum):
    STABLE = "Stable"
    UNSTABLE = "Unstable"
    DEGENERATE = "Degenerate"


@dataclass(frozen=True)
class Equilibrium:
    """Fixed point of the secular flow; lam is None at chart vertices."""

    lam: float | None
    Lam: float
    family: EquilibriumFamily
    stability: Stability
    eigenvalues: tuple[complex, complex] | None = None
    hamiltonian_extremum: str | None = None


# --- perturbation, raw and averaged ---

def perturbation_r(x, x_star: float, params: LKParams) -> float:
    """Quadrupole perturbing Hamiltonian R(x, t) of the distant circular
    perturber, -(mu_p r^2 / a_p^3) P2(x_hat . r_p_hat) expanded in the
    rotating phase 2 n_p x*."""
    x = np.asarray(x, dtype=float)
    r2 = float(x @ x)
    phase = 2.0 * params.n_p * x_star
    bracket = (r2 - 3.0 * x[2] ** 2
               + 3.0 * (x[0] ** 2 - x[1] ** 2) * math.cos(phase)
               + 6.0 * x[0] * x[1] * math.sin(phase))
    return -params.mu_p / (4.0 * params.a_p ** 3) * bracket


def perturbation_q_lks(state: LKSState, params: LKParams) -> float:
    """Perturbation (4r/alpha) R pulled back to LKS variables (omega = 1
    gauge, alpha = sqrt(8S)).

    The time-like argument of the rotating phase is s shifted by
    sigma = (n_p / 2S)(B1 sin 2(l+lam) + B2 sin 2(l-lam)), i.e. the
    generalized Kepler equation applied inside the cosine.
    """
    c = coefficients(state)
    S = state.S
    r = radius_lks(state, c)
    sigma = (params.n_p / (2.0 * S)) * (
        c.B1 * math.sin(2.0 * (state.l + state.lam))
        + c.B2 * math.sin(2.0 * (state.l - state.lam)))
    phase = 2.0 * params.n_p * state.s - sigma
    p = lks_to_cartesian(state)
    x = p.x
    bracket = (r * r - 3.0 * x[2] ** 2
               + 3.0 * (x[0] ** 2 - x[1] ** 2) * math.cos(phase)
               + 6.0 * x[0] * x[1] * math.sin(phase))
    return -params.mu_p * r / (2.0 * math.sqrt(2.0 * S) * params.a_p ** 3) * bracket


def _b1_b2(L: float, Lam: float, G: float) -> tuple[float, float]:
    r1 = (L + Lam) ** 2 - G * G
    r2 = (L - Lam) ** 2 - G * G
    if min(r1, r2) < -1e-9 * L * L:
        raise NegativeRadicand(f"inadmissible actions: radicands {r1:.3e}, {r2:.3e}")
    return 0.5 * math.sqrt(max(r1, 0.0)), 0.5 * math.sqrt(max(r2, 0.0))


def _c1c2(L: float, Lam: float, G: float) -> float:
    r1 = L * L - (G + Lam) ** 2
    r2 = L * L - (G - Lam) ** 2
    if min(r1, r2) < -1e-9 * L * L:
        raise NegativeRadicand(f"inadmissible actions: radicands {r1:.3e}, {r2:.3e}")
    return 0.25 * math.sqrt(max(r1, 0.0) * max(r2, 0.0))


def average_q_numeric(S: float, L: float, Lam: float, G: float, lam: float,
                      params: LKParams, n_nodes: int = 256) -> float:
    """Trapezoid average of the slow part of the perturbation over l.

    Evaluates -(mu_p / (64 pi a_p^3 sqrt(2S))) * integral over one period of
    (r^3 - 3 r x3^2) dl on ``n_nodes`` uniform nodes; the integrand is
    periodic, so the trapezoid rule converges spectrally. Matches the closed
    form :func:`secular_perturbation` to quadrature accuracy.
    """
    B1, B2 = _b1_b2(L, Lam, G)
    lg = np.arange(n_nodes) * (2.0 * math.pi / n_nodes)
    rt8s = math.sqrt(8.0 * S)
    cb1 = np.cos(2.0 * (lg + lam))
    cb2 = np.cos(2.0 * (lg - lam))
    r = (L - B1 * cb1 - B2 * cb2) / rt8s
    x3 = (-Lam + B1 * cb1 - B2 * cb2) / rt8s
    integrand = r ** 3 - 3.0 * r * x3 ** 2
    integral = float(np.sum(integrand)) * (2.0 * math.pi / n_nodes)
    return -params.mu_p / (64.0 * math.pi * params.a_p ** 3
                           * math.sqrt(2.0 * S)) * integral


def secular_perturbation(S: float, L: float, Lam: float, G: float,
                         lam: float, params: LKParams) -> float:
    """Closed-form averaged perturbation,
    -(mu_p L / (1024 a_p^3 S^2)) (L^2 - 6 Lambda^2 + 6 C1 C2 cos 4 lambda)."""
    c1c2 = _c1c2(L, Lam, G)
    return -(params.mu_p * L / (1024.0 * params.a_p ** 3 * S * S)) * (
        L * L - 6.0 * Lam * Lam + 6.0 * c1c2 * math.cos(4.0 * lam))


def secular_hamiltonian(state: SecularState, params: LKParams) -> float:
    """Secular Hamiltonian N(lambda, Lambda), conserved by the reduced flow.

    N = L - 2 mu / sqrt(2S) + averaged perturbation. Raises
    :class:`NegativeRadicand` outside the admissible square.
    """
    kepler = params.L - 2.0 * params.mu / math.sqrt(2.0 * params.S)
    return kepler + secular_perturbation(params.S, params.L, state.Lam,
                                         params.G, state.lam, params)


def b_coefficient(params: LKParams) -> float:
    """Rate constant B = 3 mu_p L / (1024 a_p^3 S^2) of the reduced flow."""
    return 3.0 * params.mu_p * params.L / (1024.0 * params.a_p ** 3
                                           * params.S ** 2)


def secular_rhs(state: SecularState, params: LKParams,
                boundary_tol: float = _BOUNDARY_TOL) -> tuple[float, float]:
    """Hamiltonian vector field (dlambda/dtau, dLambda/dtau) of N.

    dlambda/dtau = B Lambda (4 + (L^2+G^2-Lambda^2)/(4 C1 C2) cos 4 lambda),
    dLambda/dtau = -8 B C1 C2 sin 4 lambda. Finite everywhere strictly
    inside the admissible square; on the edges |Lambda| = L - |G| the product
    C1 C2 vanishes and a purely geometric :class:`BoundarySingularity` is
    raised. At G = 0, lambda = k pi/2 the field reduces exactly to
    (5 B Lambda, 0), so generic radial orbits are regular points.
    """
    L, G = params.L, params.G
    c1c2 = _c1c2(L, state.Lam, G)
    if c1c2 <= boundary_tol:
        raise BoundarySingularity(
            f"C1 C2 = {c1c2:.3e} at |Lambda| ~ L - |G|; the chart edge is "
            "geometrically singular")
    B = b_coefficient(params)
    cos4 = math.cos(4.0 * state.lam)
    sin4 = math.sin(4.0 * state.lam)
    h = (L * L + G * G - state.Lam ** 2) / (4.0 * c1c2)
    dlam = B * state.Lam * (4.0 + h * cos4)
    dLam = -8.0 * B * c1c2 * sin4
    return dlam, dLam


def secular_jacobian(state: SecularState, params: LKParams,
                     boundary_tol: float = _BOUNDARY_TOL) -> np.ndarray:
    """Analytic Jacobian of :func:`secular_rhs` in (lambda, Lambda)."""
    L, G, Lam = params.L, params.G, state.Lam
    c1c2 = _c1c2(L, Lam, G)
    if c1c2 <= boundary_tol:
        raise BoundarySingularity("Jacobian undefined on the chart edge")
    B = b_coefficient(params)
    cos4 = math.cos(4.0 * state.lam)
    sin4 = math.sin(4.0 * state.lam)
    num = L * L + G * G - Lam * Lam
    h = num / (4.0 * c1c2)
    # d(C1C2)/dLambda and dh/dLambda, both exact
    dc = -Lam * num / (8.0 * c1c2)
    dh = (-2.0 * Lam * 4.0 * c1c2 - num * 4.0 * dc) / (16.0 * c1c2 * c1c2)
    j11 = -4.0 * B * Lam * h * sin4
    j12 = B * (4.0 + h * cos4) + B * Lam * dh * cos4
    j21 = -32.0 * B * c1c2 * cos4
    j22 = -8.0 * B * dc * sin4
    return np.array([[j11, j12], [j21, j22]])


@dataclass(frozen=True, eq=False)
class SecularTrajectory:
    """Sampled secular trajectory with conservation diagnostics."""

    tau: np.ndarray
    lam: np.ndarray
    Lam: np.ndarray
    N: np.ndarray

    @property
    def relative_drift(self) -> float:
        n0 = self.N[0]
        return float(np.max(np.abs(self.N - n0)) / abs(n0))


def propagate_secular(state0: SecularState, params: LKParams,
                      tau_span: float, tol: float = 1e-12,
                      n_samples: int = 512) -> SecularTrajectory:
    """Integrate the reduced flow with an adaptive embedded Runge-Kutta pair.

    The Hamiltonian N is monitored along the output samples; S, L, G are
    parameters, not integrated, so they are conserved bitwise. Raises
    :class:`StepFailure` if the integrator stalls (e.g. driven onto a chart
    edge).
    """
    bound = params.lambda_bound
    if abs(state0.Lam) >= bound:
        raise BoundarySingularity("initial Lambda on the chart edge")

    def rhs(_tau, y):
        return secular_rhs(SecularState(y[0], y[1]), params)

    t_eval = np.linspace(0.0, tau_span, n_samples)
    sol = solve_ivp(rhs, (0.0, tau_span), [state0.lam, state0.Lam],
                    method="DOP853", rtol=tol, atol=tol * 1e-2,
                    t_eval=t_eval, dense_output=False)
    if not sol.success:
        raise StepFailure(f"secular integration failed: {sol.message}")
    lam = sol.y[0]
    Lam = sol.y[1]
    N = np.array([secular_hamiltonian(SecularState(a, b), params)
                  for a, b in zip(lam, Lam)])
    return SecularTrajectory(sol.t, lam, Lam, N)


# --- equilibria, stability, bifurcation ---

def critical_lambda_action(params: LKParams) -> float | None:
    """Nonzero fixed-point action Lambda_c = L sqrt(1 - 8|G|/(sqrt(15) L)
    + (G/L)^2), or None when (G/L)^2 >= 3/5 (no Kozai fixed points)."""
    g = abs(params.G) / params.L
    if g * g >= 0.6:
        return None
    radicand = 1.0 - 8.0 * g / math.sqrt(15.0) + g * g
    if radicand <= 0.0:
        return None
    return params.L * math.sqrt(radicand)


def _classify_eigenvalues(eig: np.ndarray, scale: float) -> Stability:
    re = float(np.max(np.abs(eig.real)))
    im = float(np.max(np.abs(eig.imag)))
    tol = 1e-9 * max(scale, 1e-300)
    if re < tol and im > tol:
        return Stability.STABLE
    if im < tol and re > tol:
        return Stability.UNSTABLE
    return Stability.DEGENERATE


def stability(eq: Equilibrium, params: LKParams):
    """Eigenvalues of the linearized secular flow at an interior equilibrium
    and their classification (pure imaginary -> Stable, real -> Unstable).

    Vertex equilibria collapse the chart; they raise
    :class:`DegenerateChart` (their records carry the Hamiltonian-extremum
    fallback instead).
    """
    if eq.family is EquilibriumFamily.VERTEX or eq.lam is None:
        raise DegenerateChart(
            "vertex equilibrium: (lambda, Lambda) chart invalid there")
    jac = secular_jacobian(SecularState(eq.lam, eq.Lam), params)
    eig = np.linalg.eigvals(jac)
    scale = float(np.max(np.abs(eig)))
    cls = _classify_eigenvalues(eig, scale)
    return (complex(eig[0]), complex(eig[1])), cls


def _interior_equilibrium(lam: float, Lam: float, family: EquilibriumFamily,
                          params: LKParams) -> Equilibrium:
    eq = Equilibrium(lam, Lam, family, Stability.DEGENERATE)
    eig, cls = stability(eq, params)
    return Equilibrium(lam, Lam, family, cls, eig)


def find_equilibria(params: LKParams) -> list[Equilibrium]:
    """Complete equilibrium census of the reduced flow on lambda in [-pi, pi).

    Families: equatorial (lambda = k pi/2, Lambda = 0; radial-equatorial
    when G = 0), circular (lambda = (2k+1) pi/4, Lambda = 0), Kozai fixed
    points (lambda = (2k+1) pi/4, Lambda = +/- Lambda_c, existing for
    (G/L)^2 < 3/5), and the degenerate-chart vertices (|Lambda| = L at
    G = 0, Lambda = 0 at |G| = L).
    """
    out: list[Equilibrium] = []
    L, G = params.L, params.G
    if abs(G) >= L:
        # chart collapsed to the segment Lambda = 0: circular equatorial vertex
        out.append(Equilibrium(None, 0.0, EquilibriumFamily.VERTEX,
                               Stability.DEGENERATE))
        return out
    eq_lams = [-math.pi, -math.pi / 2.0, 0.0, math.pi / 2.0]
    circ_lams = [-3.0 * math.pi / 4.0, -math.pi / 4.0,
                 math.pi / 4.0, 3.0 * math.pi / 4.0]
    eq_family = (EquilibriumFamily.RADIAL_EQUATORIAL if G == 0.0
                 else EquilibriumFamily.EQUATORIAL_ELLIPTIC)
    for lam in eq_lams:
        out.append(_interior_equilibrium(lam, 0.0, eq_family, params))
    for lam in circ_lams:
        out.append(_interior_equilibrium(
            lam, 0.0, EquilibriumFamily.CIRCULAR_INCLINED, params))
    lam_c = critical_lambda_action(params)
    if lam_c is not None and 0.0 < lam_c < params.lambda_bound:
        for lam in circ_lams:
            for sign in (+1.0, -1.0):
                out.append(_interior_equilibrium(
                    lam, sign * lam_c, EquilibriumFamily.KOZAI_FIXED_POINT,
                    params))
    if G == 0.0:
        # polar radial vertices: N has local maxima at Lambda = +/- L
        for sign in (+1.0, -1.0):
            out.append(Equilibrium(None, sign * L, EquilibriumFamily.VERTEX,
                                   Stability.STABLE,
                                   hamiltonian_extremum="max"))
    return out


# --- phase portrait ---

@dataclass(frozen=True, eq=False)
class PortraitGrid:
    """Dense evaluation of N on a (lambda, Lambda) grid.

    Values outside the admissible square are NaN; the boundary itself is
    finite. ``separatrix_levels`` holds N at the unstable equilibria.
    """

    lam: np.ndarray
    Lam: np.ndarray
    N: np.ndarray
    separatrix_levels: tuple[float, ...]


def phase_portrait(params: LKParams, lam_grid, Lam_grid) -> PortraitGrid:
    """Evaluate N on the grid (rows: Lambda, columns: lambda).

    The lambda range [-pi, pi] covers the full dynamics (the remaining range
    duplicates it); grid points beyond |Lambda| = L - |G| are masked NaN.
    """
    lam = np.asarray(lam_grid, dtype=float)
    Lam = np.asarray(Lam_grid, dtype=float)
    bound = params.lambda_bound
    L, G, S = params.L, params.G, params.S
    lam2d, Lam2d = np.meshgrid(lam, Lam)
    r1 = L * L - (G + Lam2d) ** 2
    r2 = L * L - (G - Lam2d) ** 2
    c1c2 = 0.25 * np.sqrt(np.clip(r1, 0.0, None) * np.clip(r2, 0.0, None))
    kepler = L - 2.0 * params.mu / math.sqrt(2.0 * S)
    N = kepler - (params.mu_p * L / (1024.0 * params.a_p ** 3 * S * S)) * (
        L * L - 6.0 * Lam2d ** 2 + 6.0 * c1c2 * np.cos(4.0 * lam2d))
    N = np.where(np.abs(Lam2d) <= bound * (1.0 + 1e-12), N, np.nan)
    levels = []
    for eq in find_equilibria(params):
        if eq.stability is Stability.UNSTABLE and eq.lam is not None:
            levels.append(secular_hamiltonian(SecularState(eq.lam, eq.Lam),
                                              params))
    uniq: list[float] = []
    for v in sorted(levels):
        if not uniq or abs(v - uniq[-1]) > 1e-15 * max(1.0, abs(v)):
            uniq.append(v)
    return PortraitGrid(lam, Lam, N, tuple(uniq))

"""Exact Kepler flows in regularized charts and the Cartesian oracle.

The pure Kepler problem is trivial in LKS variables (only l and s advance,
linearly) and closed-form in the KS chart (a 4-D isotropic oscillator
rotation). The Cartesian oracle integrates the raw, non-regularized
equations with an adaptive embedded Runge-Kutta pair; it is the independent
reference every transformation is certified against, and it cannot cross
collisions, which is the point of regularizing in the first place.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.integrate import solve_ivp

from .errors import CollisionApproach, InvalidStateError, StepFailure
from .gauge import GaugeAlpha
from .ks import CartesianPhaseExt, KS3, KSPhase, bilinear_j, hamiltonian_k0
from .kozai import LKParams
from .lissajous import LKSState, hamiltonian_m0

__all__ = [
    "Trajectory", "kepler_flow_lks", "ks_oscillator_flow", "cartesian_oracle",
]


@dataclass(frozen=True, eq=False)
class Trajectory:
    """Sampled trajectory: strictly increasing independent variable,
    one state row per sample, column names in ``columns``."""

    t: np.ndarray
    states: np.ndarray
    time_variable: str
    chart: str
    columns: tuple[str, ...]
    interpolant: Callable[[float], np.ndarray] | None = None

    def __post_init__(self):
        if np.any(np.diff(self.t) <= 0.0):
            raise ValueError("independent variable must be strictly increasing")


def kepler_flow_lks(state0: LKSState, dtau: float, gauge: GaugeAlpha,
                    mu: float, m0_tol: float | None = 1e-8) -> LKSState:
    """Advance a pure-Kepler LKS state by dtau of Sundman time, exactly.

    Only l and s move: l advances at the oscillator frequency omega(S)
    (1 in the sqrt8S gauge, half the eccentric anomaly rate in physical
    time) and s at dM0/dS = omega'(S) L + 4 mu k2 / (alpha S). Everything
    else is constant; there is no integration error.

    Requires Gamma = 0 and M0 = 0 within ``m0_tol`` (pass None to skip the
    on-shell check).
    """
    if abs(state0.Gam) > 1e-9:
        raise InvalidStateError(f"Gamma = {state0.Gam:.3e} must vanish")
    if m0_tol is not None:
        m0 = hamiltonian_m0(state0, gauge, mu)
        if abs(m0) > m0_tol:
            raise InvalidStateError(
                f"M0 = {m0:.3e} off shell beyond {m0_tol:.1e}")
    S = state0.S
    w = gauge.omega(S)
    alpha = gauge.alpha(S)
    s_rate = gauge.domega_ds(S) * state0.L + 4.0 * mu * gauge.k2 / (alpha * S)
    return state0.replace(l=state0.l + w * dtau, s=state0.s + s_rate * dtau)


def ks_oscillator_flow(k0: KSPhase, dtau: float, gauge: GaugeAlpha, mu: float,
                       tol: float | None = 1e-8) -> KSPhase:
    """Advance a pure-Kepler KS phase point by dtau, in closed form.

    The regularized flow is the isotropic oscillator rotation
    v -> v cos(w dtau) + (V/w) sin(w dtau),
    V -> V cos(w dtau) - w v sin(w dtau),
    which conserves J(v, V) exactly. The time-like coordinate advances by
    the analytic integral of dv*/dtau = 4(1-2 k2)(v.v)/alpha^2
    + 4 mu k2/(alpha S); for the sqrt8S gauge the first term drops and v*
    is linear in tau.

    Requires J(v, V) = 0 and K0 = 0 within ``tol`` (None skips the check).
    """
    S = k0.V_star
    w = gauge.omega(S)
    alpha = gauge.alpha(S)
    if tol is not None:
        j = bilinear_j(k0.v, k0.V, KS3)
        if abs(j) > tol:
            raise InvalidStateError(f"J(v, V) = {j:.3e} must vanish")
        kk = hamiltonian_k0(k0, KS3, gauge, mu)
        if abs(kk) > tol:
            raise InvalidStateError(f"K0 = {kk:.3e} off shell")
    cw = math.cos(w * dtau)
    sw = math.sin(w * dtau)
    v = k0.v * cw + k0.V * (sw / w)
    V = k0.V * cw - k0.v * (w * sw)
    # closed-form integral of v.v along the rotation
    vv0 = k0.v.dot(k0.v)
    VV0 = k0.V.dot(k0.V)
    vV0 = k0.v.dot(k0.V)
    s2 = math.sin(2.0 * w * dtau)
    integral_vv = (vv0 * (dtau / 2.0 + s2 / (4.0 * w))
                   + (VV0 / (w * w)) * (dtau / 2.0 - s2 / (4.0 * w))
                   + (vV0 / w) * (sw * sw / w))
    v_star = (k0.v_star
              + 4.0 * (1.0 - 2.0 * gauge.k2) / (alpha * alpha) * integral_vv
              + 4.0 * mu * gauge.k2 / (alpha * S) * dtau)
    return KSPhase(v_star, v, S, V)


def _kozai_gradient(x: np.ndarray, t: float, params: LKParams) -> np.ndarray:
    # gradient of perturbation_r in x at fixed time
    cp = math.cos(2.0 * params.n_p * t)
    sp = math.sin(2.0 * params.n_p * t)
    k = -params.mu_p / (4.0 * params.a_p ** 3)
    gx = k * (2.0 * x[0] + 6.0 * x[0] * cp + 6.0 * x[1] * sp)
    gy = k * (2.0 * x[1] - 6.0 * x[1] * cp + 6.0 * x[0] * sp)
    gz = k * (2.0 * x[2] - 6.0 * x[2])
    return np.array([gx, gy, gz])


def _kozai_dt(x: np.ndarray, t: float, params: LKParams) -> float:
    # partial of perturbation_r with respect to time
    cp = math.cos(2.0 * params.n_p * t)
    sp = math.sin(2.0 * params.n_p * t)
    k = -params.mu_p / (4.0 * params.a_p ** 3)
    return k * (-6.0 * params.n_p * (x[0] ** 2 - x[1] ** 2) * sp
                + 12.0 * params.n_p * x[0] * x[1] * cp)


def cartesian_oracle(p0: CartesianPhaseExt, mu: float, t_span: float,
                     params: LKParams | None = None, rtol: float = 1e-12,
                     atol: float = 1e-14, r_min: float = 1e-6,
                     n_samples: int | None = 200) -> Trajectory:
    """Brute-force integration of the raw equations in physical time.

    State vector (x, X, X*): dx/dt = X, dX/dt = -mu x/r^3 - grad R,
    dX*/dt = -dR/dt, so X* balances the energy variation and stays constant
    for autonomous problems. ``params`` switches on the quadrupole
    perturbation; None integrates pure Kepler. An event terminates the
    integration when r < r_min and :class:`CollisionApproach` is raised.

    The returned trajectory has columns (x1, x2, x3, X1, X2, X3, X_star) and
    carries a dense interpolant for cross-chart comparisons. ``n_samples``
    selects a uniform output grid; None or 0 returns the accepted integrator
    steps, which are accurate to the integration tolerance itself.
    """

    def rhs(t, y):
        x = y[0:3]
        X = y[3:6]
        r = math.sqrt(float(x @ x))
        acc = -mu / r ** 3 * x
        dxs = 0.0
        if params is not None:
            acc = acc - _kozai_gradient(x, t, params)
            dxs = -_kozai_dt(x, t, params)
        return np.concatenate((X, acc, [dxs]))

    def collision(t, y):
        return math.sqrt(float(y[0:3] @ y[0:3])) - r_min

    collision.terminal = True
    collision.direction = -1.0

    y0 = np.concatenate((p0.x, p0.X, [p0.X_star]))
    t_eval = np.linspace(0.0, t_span, n_samples) if n_samples else None
    sol = solve_ivp(rhs, (0.0, t_span), y0, method="DOP853", rtol=rtol,
                    atol=atol, t_eval=t_eval, dense_output=True,
                    events=collision)
    if sol.status == 1:
        raise CollisionApproach(
            f"radius dropped below r_min = {r_min:g} at t = {sol.t_events[0][0]:g}")
    if not sol.success:
        raise StepFailure(f"oracle integration failed: {sol.message}")
    return Trajectory(
        t=sol.t, states=sol.y.T, time_variable="t", chart="cartesian",
        columns=("x1", "x2", "x3", "X1", "X2", "X3", "X_star"),
        interpolant=sol.sol)

"""Service handlers: pydantic request in, pydantic response out.

Every handler is a pure function of its request; the FastAPI app and the
CLI both call these, so the two surfaces cannot drift apart. Domain errors
propagate to the caller, which maps them to HTTP status codes or exit codes.
"""

from __future__ import annotations

import math

import numpy as np

from .. import serialize
from ..errors import DegeneracyError, InvalidStateError
from ..gauge import GaugeAlpha
from ..geometry import (
    KeplerElements,
    cartesian_to_elements,
    classify,
    elements_to_cartesian,
)
from ..ks import CartesianPhaseExt, KSFrame, KSPhase, bilinear_j, lift_cartesian, project_ks
from ..kozai import (
    SECULAR_TIME_SCALE,
    LKParams,
    SecularState,
    average_q_numeric,
    critical_lambda_action,
    find_equilibria,
    phase_portrait,
    propagate_secular,
    secular_perturbation,
    secular_rhs,
)
from ..lissajous import (
    LKSState,
    cartesian_to_lks,
    hamiltonian_m0,
    ks_to_lks,
    lissajous_inverse,
    lissajous_semiaxes,
    lks_to_cartesian,
    lks_to_ks,
)
from ..propagation import cartesian_oracle, ks_oscillator_flow
from ..quaternion import Quaternion, mul, rotor_q
from . import schemas as sch

__all__ = [
    "transform", "classify_state", "lk_equilibria", "lk_portrait",
    "lk_propagate", "lk_validate", "fibre_tracks", "params_from_model",
]


def _elements_from_model(m: sch.ElementsState, deg: bool) -> KeplerElements:
    conv = math.radians if deg else float
    return KeplerElements(a=m.a, e=m.e, inc=conv(m.I), argp=conv(m.omega_o),
                          node=conv(m.Omega), f=conv(m.f))


def _lks_from_model(m: sch.LKSStateModel) -> LKSState:
    return LKSState(s=m.s, l=m.l, lam=m.lam, g=m.g, gamma=m.gamma,
                    S=m.S, L=m.L, Lam=m.Lam, G=m.G, Gam=m.Gam)


def _hub_cartesian(state: sch.AnyState, frame: KSFrame, gauge: GaugeAlpha,
                   mu: float, deg: bool,
                   manifold_tol: float = 1e-9) -> CartesianPhaseExt:
    """Convert any input chart to the extended Cartesian hub."""
    if isinstance(state, sch.ElementsState):
        el = _elements_from_model(state, deg)
        x, X = elements_to_cartesian(el, mu)
        S = mu / float(np.linalg.norm(x)) - float(X @ X) / 2.0
        return CartesianPhaseExt(0.0, x, S, X)
    if isinstance(state, sch.CartesianState):
        x = np.asarray(state.x, dtype=float)
        X = np.asarray(state.X, dtype=float)
        S = state.X_star
        if S is None:
            S = mu / float(np.linalg.norm(x)) - float(X @ X) / 2.0
        return CartesianPhaseExt(state.x_star, x, float(S), X)
    if isinstance(state, sch.KSState):
        k = KSPhase(state.v_star, Quaternion(*state.v), state.V_star,
                    Quaternion(*state.V))
        return project_ks(k, frame, gauge, manifold_tol=manifold_tol)
    return lks_to_cartesian(_lks_from_model(state))


def transform(req: sch.TransformRequest) -> sch.TransformResponse:
    """Route a state between the elements, cartesian, ks and lks charts.

    Fibre-preserving shortcuts are taken for ks <-> lks so the KS angle is
    not rebased through the SKS representative. Residuals (Gamma, J, M0) are
    reported best-effort: entries the degeneracies make unavailable are null.
    """
    frame = KSFrame.from_name(req.frame)
    gauge = GaugeAlpha.from_name(req.gauge, req.mu)
    state = req.state

    ks_state: KSPhase | None = None
    lks_state: LKSState | None = None
    if isinstance(state, sch.KSState):
        ks_state = KSPhase(state.v_star, Quaternion(*state.v), state.V_star,
                           Quaternion(*state.V))
    if isinstance(state, sch.LKSStateModel):
        lks_state = _lks_from_model(state)

    hub = _hub_cartesian(state, frame, gauge, req.mu, req.deg,
                         req.manifold_tol)

    if req.to == "ks":
        if ks_state is not None:
            out_ks = ks_state
        elif lks_state is not None:
            out_ks = lks_to_ks(lks_state, gauge, frame)
        else:
            out_ks = lift_cartesian(hub, frame, gauge)
        out = serialize.ks_phase_to_dict(out_ks)
    elif req.to == "lks":
        if lks_state is None:
            if ks_state is not None:
                lks_state = ks_to_lks(ks_state, gauge, frame)
            else:
                lks_state = cartesian_to_lks(hub, gauge, frame)
        out = serialize.lks_state_to_dict(lks_state)
    elif req.to == "cartesian":
        out = serialize.cartesian_to_dict(hub)
    else:
        out = serialize.elements_to_dict(
            cartesian_to_elements(hub.x, hub.X, req.mu))

    # best-effort residual report
    residuals = sch.Residuals()
    try:
        if ks_state is None:
            if lks_state is not None:
                ks_state = lks_to_ks(lks_state, gauge, frame)
            else:
                ks_state = lift_cartesian(hub, frame, gauge)
        residuals.J = bilinear_j(ks_state.v, ks_state.V, frame)
    except (DegeneracyError, InvalidStateError):
        pass
    try:
        if lks_state is None and ks_state is not None and frame.is_ks3():
            lks_state = ks_to_lks(ks_state, gauge, frame)
        if lks_state is not None:
            residuals.Gam = lks_state.Gam
            residuals.M0 = hamiltonian_m0(lks_state, gauge, req.mu)
    except (DegeneracyError, InvalidStateError):
        pass
    return sch.TransformResponse(chart=req.to, state=out, residuals=residuals)


def classify_state(req: sch.ClassifyRequest) -> sch.ClassifyResponse:
    result = classify(_lks_from_model(req.state), tol=req.tol)
    edge = None
    if result.edge is not None:
        edge = sch.EdgeModel(case=result.edge.case,
                             surviving_combination=result.edge.surviving_combination,
                             value=result.edge.value)
    return sch.ClassifyResponse(orbit_class=result.orbit_class.value,
                                undetermined=list(result.undetermined),
                                edge=edge)


def params_from_model(m: sch.LKParamsModel) -> LKParams:
    return LKParams(mu=m.mu, mu_p=m.mu_p, a_p=m.a_p, S=m.S, L=m.L, G=m.G,
                    n_p=m.n_p)


def lk_equilibria(req: sch.EquilibriaRequest) -> sch.EquilibriaResponse:
    params = params_from_model(req.params)
    models = []
    for eq in find_equilibria(params):
        eig = None
        if eq.eigenvalues is not None:
            eig = [sch.EigenvalueModel(re=z.real, im=z.imag)
                   for z in eq.eigenvalues]
        models.append(sch.EquilibriumModel(
            lam=eq.lam, Lam=eq.Lam, family=eq.family.value,
            stability=eq.stability.value, eigenvalues=eig,
            hamiltonian_extremum=eq.hamiltonian_extremum))
    return sch.EquilibriaResponse(
        equilibria=models,
        critical_lambda_action=critical_lambda_action(params))


def lk_portrait(req: sch.PortraitRequest) -> sch.PortraitResponse:
    """Dense N grid on [-pi, pi] x [-(L-|G|), L-|G|] as CSV lambda,Lambda,N.

    Rows are ordered by grid index, Lambda outer, lambda inner; the grid is
    evaluated vectorized, so the ordering is deterministic.
    """
    params = params_from_model(req.params)
    lam_grid = np.linspace(-math.pi, math.pi, req.n_lambda)
    bound = params.lambda_bound
    Lam_grid = (np.linspace(-bound, bound, req.n_Lambda) if bound > 0.0
                else np.array([0.0]))
    grid = phase_portrait(params, lam_grid, Lam_grid)
    rows = []
    for i in range(len(grid.Lam)):
        for j in range(len(grid.lam)):
            rows.append((grid.lam[j], grid.Lam[i], grid.N[i, j]))
    return sch.PortraitResponse(
        csv=serialize.csv_text(("lambda", "Lambda", "N"), rows),
        separatrix_levels=list(grid.separatrix_levels),
        n_rows=len(rows))


def lk_propagate(req: sch.SecularPropagateRequest) -> sch.SecularPropagateResponse:
    params = params_from_model(req.params)
    traj = propagate_secular(SecularState(req.lam0, req.Lam0), params,
                             req.tau_span, tol=req.tol,
                             n_samples=req.n_samples)
    rows = zip(traj.tau, traj.lam, traj.Lam, traj.N)
    return sch.SecularPropagateResponse(
        csv=serialize.csv_text(("tau", "lambda", "Lambda", "N"), rows),
        relative_drift=traj.relative_drift)


def _averaging_sweep(params: LKParams, n_samples: int, n_nodes: int,
                     seed: int) -> float:
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(n_samples):
        L = rng.uniform(0.5, 5.0)
        G = rng.uniform(-0.95, 0.95) * L
        Lam = rng.uniform(-0.95, 0.95) * (L - abs(G))
        lam = rng.uniform(-math.pi, math.pi)
        S = rng.uniform(0.02, 2.0)
        num = average_q_numeric(S, L, Lam, G, lam, params, n_nodes=n_nodes)
        closed = secular_perturbation(S, L, Lam, G, lam, params)
        scale = params.mu_p * L ** 3 / (1024.0 * params.a_p ** 3 * S * S)
        rel = abs(num - closed) / max(abs(closed), 1e-6 * scale)
        worst = max(worst, rel)
    return worst


def _oracle_drift_check(params: LKParams, rel_tol: float) -> float:
    """Compare the secular dLambda/dt against a direct integration.

    Builds an on-shell orbit from (mu, S, G/L), starts it at lambda = pi/8
    (maximal |dLambda/dtau|), integrates the raw equations over two full
    perturber periods, and regresses the osculating Lambda(t) on a line
    plus the rotating-quadrupole phase (cos/sin 2 n_p t), which isolates
    the secular slope from the not-yet-averaged fast terms. The secular
    rate converts to physical time via the orbit-averaged dtau/dt = n/2
    and the raw-pullback time scale.
    """
    mu, S = params.mu, params.S
    a = mu / (2.0 * S)
    L = 2.0 * math.sqrt(mu * a)
    G = (params.G / params.L) * L
    Lam0 = 0.35 * (L - abs(G))
    lam0 = math.pi / 8.0
    on_shell = LKParams(mu=mu, mu_p=params.mu_p, a_p=params.a_p, S=S, L=L,
                        G=G, n_p=params.n_p)
    gauge = GaugeAlpha.sqrt8s()
    state = LKSState(s=0.0, l=0.7, lam=lam0, g=0.4, gamma=0.0, S=S, L=L,
                     Lam=Lam0, G=G, Gam=0.0)
    p0 = lks_to_cartesian(state)
    n_kep = math.sqrt(mu / a ** 3)
    t_span = 2.0 * 2.0 * math.pi / on_shell.n_p
    traj = cartesian_oracle(p0, mu, t_span, params=on_shell, rtol=1e-11,
                            atol=1e-13, n_samples=1600)
    lams = []
    for t_k, row in zip(traj.t, traj.states):
        pk = CartesianPhaseExt(t_k, row[0:3], row[6], row[3:6])
        lams.append(cartesian_to_lks(pk, gauge).Lam)
    design = np.column_stack([
        np.ones_like(traj.t), traj.t,
        np.cos(2.0 * on_shell.n_p * traj.t),
        np.sin(2.0 * on_shell.n_p * traj.t)])
    coef, *_ = np.linalg.lstsq(design, np.asarray(lams), rcond=None)
    slope = float(coef[1])
    dlam_dtau = secular_rhs(SecularState(lam0, Lam0), on_shell)[1]
    secular_rate = dlam_dtau * SECULAR_TIME_SCALE * n_kep / 2.0
    return abs(slope - secular_rate) / abs(secular_rate)


def lk_validate(req: sch.ValidateRequest) -> sch.ValidateResponse:
    """Averaging certificate plus (optionally) the secular-vs-oracle check."""
    params = params_from_model(req.params or sch.LKParamsModel())
    worst = _averaging_sweep(params, req.n_samples, req.n_nodes, req.seed)
    averaging_passed = worst < req.averaging_tol
    oracle_err = None
    oracle_passed = None
    if req.with_oracle:
        oracle_err = _oracle_drift_check(params, req.oracle_rel_tol)
        oracle_passed = oracle_err < req.oracle_rel_tol
    passed = averaging_passed and (oracle_passed is not False)
    return sch.ValidateResponse(
        max_averaging_rel_err=worst, averaging_passed=averaging_passed,
        oracle_drift_rel_err=oracle_err, oracle_passed=oracle_passed,
        passed=passed)


def _plane_summary(v_i, v_j, V_i, V_j, omega, plane) -> sch.PlaneSummary:
    p = lissajous_inverse(v_i, v_j, V_i, V_j, omega, plane)
    a, b = lissajous_semiaxes(p, omega)
    return sch.PlaneSummary(l=p.l, g=p.g, L=p.L, G=p.G, semi_major=a,
                            semi_minor=b)


def fibre_tracks(req: sch.FibreRequest) -> sch.FibreResponse:
    """KS3 configuration-plane tracks of an orbit, its fibre-rotated twin,
    and the fibre circle of the initial point.

    The rotated run right-multiplies the initial (v, V) by the quarter-turn
    rotor about e3, which turns the (v0, v3) ellipse by +90 degrees and the
    (v1, v2) ellipse by -90 degrees while leaving l, L, G and the sum
    g03 + g12 unchanged.
    """
    frame = KSFrame.from_name("KS3")
    gauge = GaugeAlpha.from_name(req.gauge, req.mu)
    hub = _hub_cartesian(req.state, frame, gauge, req.mu, req.deg)
    k0 = lift_cartesian(hub, frame, gauge)
    w = gauge.omega(k0.V_star)
    rot = rotor_q(frame.c, math.pi / 2.0)
    k0r = KSPhase(k0.v_star, mul(k0.v, rot), k0.V_star, mul(k0.V, rot))

    base = _fibre_rows(k0, req.n_samples, gauge, req.mu, w, frame)
    rows = base
    header = ("phi",
              "v0", "v1", "v2", "v3",
              "rot_v0", "rot_v1", "rot_v2", "rot_v3",
              "fib_v0", "fib_v1", "fib_v2", "fib_v3")

    p03 = _plane_summary(k0.v.s0, k0.v.v3, k0.V.s0, k0.V.v3, w, (0, 3))
    p12 = _plane_summary(k0.v.v1, k0.v.v2, k0.V.v1, k0.V.v2, w, (1, 2))
    p03r = _plane_summary(k0r.v.s0, k0r.v.v3, k0r.V.s0, k0r.V.v3, w, (0, 3))
    p12r = _plane_summary(k0r.v.v1, k0r.v.v2, k0r.V.v1, k0r.V.v2, w, (1, 2))
    g_sum_change = (p03r.g + p12r.g) - (p03.g + p12.g)
    # reduce modulo pi: each normalized g may have wrapped by a half turn
    g_sum_change = (g_sum_change + math.pi / 2.0) % math.pi - math.pi / 2.0

    rot_rows = _fibre_rows(k0r, req.n_samples, gauge, req.mu, w, frame)
    full = []
    for k in range(req.n_samples):
        phi, b = base[k]
        _, r = rot_rows[k]
        fib = mul(k0.v, rotor_q(frame.c, -phi))
        full.append((phi, b.s0, b.v1, b.v2, b.v3,
                     r.s0, r.v1, r.v2, r.v3,
                     fib.s0, fib.v1, fib.v2, fib.v3))
    return sch.FibreResponse(
        csv=serialize.csv_text(header, full),
        plane03=p03, plane12=p12, plane03_rotated=p03r, plane12_rotated=p12r,
        g_sum_change=g_sum_change)


def _fibre_rows(k0: KSPhase, n: int, gauge: GaugeAlpha, mu: float, w: float,
                frame: KSFrame) -> list[tuple[float, Quaternion]]:
    out = []
    for k in range(n):
        phi = 2.0 * math.pi * k / n
        kk = ks_oscillator_flow(k0, phi / w, gauge, mu, tol=None)
        out.append((phi, kk.v))
    return out

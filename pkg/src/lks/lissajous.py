"""Lissajous variables per KS plane and the Mathieu step to LKS variables.

The KS3 quaternion (v0, v1, v2, v3) is split into two configuration planes,
(v0, v3) and (v1, v2). On each plane the 2-D isotropic oscillator of
frequency omega is described by action-angle pairs (l, g, L, G); a linear
Mathieu combination of the two planes then yields the ten LKS variables
(s, l, lambda, g, gamma; S, L, Lambda, G, Gamma). The bilinear invariant of
the KS map is exactly the action Gamma, so physical states have Gamma = 0.

Closed-form expressions recover the extended Cartesian phase point from an
LKS state without passing through quaternions; they are independent of the
fibre angle gamma and of the energy gauge.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .errors import NegativeRadicand, NonzeroGamma, UndefinedAngles, ZeroRadius
from .gauge import GaugeAlpha
from .ks import KS3, CartesianPhaseExt, KSFrame, KSPhase, lift_cartesian
from .quaternion import Quaternion

__all__ = [
    "LissajousPlane", "LKSState", "ActionCoefficients",
    "lissajous_forward", "lissajous_inverse", "lissajous_semiaxes",
    "mathieu_to_lks", "planes_from_lks", "coefficients",
    "lks_to_cartesian", "cartesian_to_lks", "ks_to_lks", "lks_to_ks",
    "hamiltonian_m0", "radius_lks",
]

_CLAMP = 1e-12
PLANE_03 = (0, 3)
PLANE_12 = (1, 2)


def _clamped_sqrt(radicand: float, clamp_tol: float, what: str) -> float:
    if radicand < -clamp_tol:
        raise NegativeRadicand(f"{what}: radicand {radicand:.3e} < -{clamp_tol:.1e}")
    return math.sqrt(max(radicand, 0.0))


@dataclass(frozen=True)
class LissajousPlane:
    """Action-angle variables (l, g, L, G) of one oscillator plane.

    The plane tag names the KS components, (0, 3) or (1, 2). G > 0 means
    counterclockwise traversal of the Lissajous ellipse.
    """

    l: float
    g: float
    L: float
    G: float
    plane: tuple[int, int] = PLANE_03

    def __post_init__(self):
        if self.L < 0.0:
            raise ValueError(f"action L = {self.L} must be nonnegative")
        if abs(self.G) > self.L + _CLAMP * max(1.0, self.L):
            raise ValueError(f"|G| = {abs(self.G)} exceeds L = {self.L}")


@dataclass(frozen=True)
class LKSState:
    """The ten LKS variables (s, l, lam, g, gamma; S, L, Lam, G, Gam).

    Angles in radians. Physical states satisfy L > 0, |Lam| + |G| <= L and
    Gam = 0; states violating the bounds can be represented (the coefficient
    evaluation enforces them where it matters).
    """

    s: float
    l: float
    lam: float
    g: float
    gamma: float
    S: float
    L: float
    Lam: float
    G: float
    Gam: float = 0.0

    def __post_init__(self):
        if not self.L > 0.0:
            raise ValueError(f"action L = {self.L} must be positive")
        if not self.S > 0.0:
            raise ValueError(f"action S = {self.S} must be positive")

    def replace(self, **kw) -> "LKSState":
        return replace(self, **kw)

    @property
    def bound_slack(self) -> float:
        """L - |Lam| - |G|; nonnegative on admissible states."""
        return self.L - abs(self.Lam) - abs(self.G)


@dataclass(frozen=True)
class ActionCoefficients:
    """The six action-dependent amplitudes of the Cartesian closed forms."""

    A1: float
    A2: float
    B1: float
    B2: float
    C1: float
    C2: float

    @property
    def c1c2(self) -> float:
        return self.C1 * self.C2


def lissajous_forward(p: LissajousPlane, omega: float,
                      clamp_tol: float = _CLAMP) -> tuple[float, float, float, float]:
    """Coordinates and momenta (v_i, v_j, V_i, V_j) of a Lissajous state.

    The oscillator invariants are omega^2(v_i^2+v_j^2) + (V_i^2+V_j^2)
    = 2 omega L and v_i V_j - v_j V_i = G.
    """
    if not omega > 0.0:
        raise ValueError("omega must be positive")
    P = _clamped_sqrt((p.L + p.G) / (2.0 * omega), clamp_tol, "L+G")
    M = _clamped_sqrt((p.L - p.G) / (2.0 * omega), clamp_tol, "L-G")
    a = p.l + p.g
    b = p.l - p.g
    v_i = P * math.cos(a) - M * math.cos(b)
    v_j = P * math.sin(a) + M * math.sin(b)
    V_i = omega * (-P * math.sin(a) + M * math.sin(b))
    V_j = omega * (P * math.cos(a) + M * math.cos(b))
    return v_i, v_j, V_i, V_j


def lissajous_inverse(v_i: float, v_j: float, V_i: float, V_j: float,
                      omega: float, plane: tuple[int, int] = PLANE_03,
                      degeneracy_tol: float = 1e-12) -> LissajousPlane:
    """Invert the Lissajous map on one plane.

    Angles are resolved with g in [0, pi); the alternative representative is
    (l + pi, g + pi). Raises :class:`UndefinedAngles` when the ellipse is a
    circle (L = |G|, only the longitude l+g or l-g survives) or a point
    (L = 0, nothing survives).
    """
    if not omega > 0.0:
        raise ValueError("omega must be positive")
    i, j = plane
    L = (omega * omega * (v_i * v_i + v_j * v_j) + V_i * V_i + V_j * V_j) / (2.0 * omega)
    G = v_i * V_j - v_j * V_i
    names = (f"l{i}{j}", f"g{i}{j}")
    if L <= degeneracy_tol:
        raise UndefinedAngles(
            f"plane ({i},{j}) collapsed to the origin (L = {L:.3e})",
            undetermined=names)
    if L - abs(G) <= degeneracy_tol * L:
        # circular ellipse: position angle of the axis is meaningless,
        # but one longitude combination is still well defined
        if G >= 0.0:
            a = math.atan2(omega * v_j - V_i, V_j + omega * v_i)
            raise UndefinedAngles(
                f"plane ({i},{j}) is circular (L = |G|); only l+g survives",
                undetermined=names,
                surviving={f"l{i}{j}+g{i}{j}": a % (2.0 * math.pi)})
        b = math.atan2(omega * v_j + V_i, V_j - omega * v_i)
        raise UndefinedAngles(
            f"plane ({i},{j}) is circular (L = |G|); only l-g survives",
            undetermined=names,
            surviving={f"l{i}{j}-g{i}{j}": b % (2.0 * math.pi)})
    a = math.atan2(omega * v_j - V_i, V_j + omega * v_i)   # l + g
    b = math.atan2(omega * v_j + V_i, V_j - omega * v_i)   # l - g
    l = 0.5 * (a + b)
    g = 0.5 * (a - b)
    g_norm = g % math.pi
    l = (l + (g - g_norm)) % (2.0 * math.pi)
    return LissajousPlane(l, g_norm, L, G, plane)


def lissajous_semiaxes(p: LissajousPlane, omega: float,
                       clamp_tol: float = _CLAMP) -> tuple[float, float]:
    """Major and minor semi-axes of the Lissajous ellipse in its plane.

    a = (sqrt(L+G) + sqrt(L-G)) / sqrt(2 omega) and
    b = |sqrt(L+G) - sqrt(L-G)| / sqrt(2 omega); these are the extreme
    distances of the track from the origin. G = 0 degenerates to a segment
    (b = 0), |G| = L to a circle (a = b).
    """
    if not omega > 0.0:
        raise ValueError("omega must be positive")
    sp = _clamped_sqrt(p.L + p.G, clamp_tol, "L+G")
    sm = _clamped_sqrt(p.L - p.G, clamp_tol, "L-G")
    scale = math.sqrt(2.0 * omega)
    return (sp + sm) / scale, abs(sp - sm) / scale


def mathieu_to_lks(p03: LissajousPlane, p12: LissajousPlane,
                   s: float, S: float) -> LKSState:
    """Combine the two plane sets into LKS variables.

    l = (l12+l03)/2, lambda = (l12-l03)/2, g = (g12+g03)/2,
    gamma = (g12-g03)/2; L = L12+L03, Lambda = L12-L03, G = G12+G03,
    Gamma = G12-G03. The pair (s, S) passes through unchanged. Exactly
    invertible by :func:`planes_from_lks`.
    """
    if p03.plane != PLANE_03 or p12.plane != PLANE_12:
        raise ValueError("expected plane tags (0,3) and (1,2)")
    return LKSState(
        s=s,
        l=0.5 * (p12.l + p03.l),
        lam=0.5 * (p12.l - p03.l),
        g=0.5 * (p12.g + p03.g),
        gamma=0.5 * (p12.g - p03.g),
        S=S,
        L=p12.L + p03.L,
        Lam=p12.L - p03.L,
        G=p12.G + p03.G,
        Gam=p12.G - p03.G,
    )


def planes_from_lks(state: LKSState) -> tuple[LissajousPlane, LissajousPlane]:
    """Exact inverse of :func:`mathieu_to_lks`."""
    p03 = LissajousPlane(state.l - state.lam, state.g - state.gamma,
                         0.5 * (state.L - state.Lam),
                         0.5 * (state.G - state.Gam), PLANE_03)
    p12 = LissajousPlane(state.l + state.lam, state.g + state.gamma,
                         0.5 * (state.L + state.Lam),
                         0.5 * (state.G + state.Gam), PLANE_12)
    return p03, p12


def coefficients(state: LKSState, clamp_tol: float = _CLAMP) -> ActionCoefficients:
    """The six amplitudes A1, A2, B1, B2, C1, C2 of the closed forms.

    Each is half the square root of a difference of squares of the actions;
    the admissible bounds L > 0, |Lam| + |G| <= L (at Gam = 0) make all six
    radicands nonnegative. Radicands within -clamp_tol are clamped to zero,
    anything lower raises :class:`NegativeRadicand`.
    """
    L, G, Lam, Gam = state.L, state.G, state.Lam, state.Gam
    return ActionCoefficients(
        A1=0.5 * _clamped_sqrt((L + G) ** 2 - (Lam + Gam) ** 2, clamp_tol, "A1"),
        A2=0.5 * _clamped_sqrt((L - G) ** 2 - (Lam - Gam) ** 2, clamp_tol, "A2"),
        B1=0.5 * _clamped_sqrt((L + Lam) ** 2 - (G + Gam) ** 2, clamp_tol, "B1"),
        B2=0.5 * _clamped_sqrt((L - Lam) ** 2 - (G - Gam) ** 2, clamp_tol, "B2"),
        C1=0.5 * _clamped_sqrt((L + Gam) ** 2 - (G + Lam) ** 2, clamp_tol, "C1"),
        C2=0.5 * _clamped_sqrt((L - Gam) ** 2 - (G - Lam) ** 2, clamp_tol, "C2"),
    )


def radius_lks(state: LKSState, coefs: ActionCoefficients | None = None) -> float:
    """Orbital radius r = (L - B1 cos 2(l+lam) - B2 cos 2(l-lam)) / sqrt(8S)."""
    c = coefs if coefs is not None else coefficients(state)
    return (state.L - c.B1 * math.cos(2.0 * (state.l + state.lam))
            - c.B2 * math.cos(2.0 * (state.l - state.lam))) / math.sqrt(8.0 * state.S)


def lks_to_cartesian(state: LKSState, gamma_tol: float = 1e-9,
                     r_tol: float = 1e-12) -> CartesianPhaseExt:
    """Closed-form extended Cartesian phase point of an LKS state.

    None of the outputs depends on the fibre angle gamma or on the energy
    gauge. Requires Gam = 0 within ``gamma_tol`` (otherwise the momentum
    would acquire a scalar part Gam/(2r)); raises :class:`ZeroRadius` at the
    collision configuration r -> 0.
    """
    if abs(state.Gam) > gamma_tol:
        raise NonzeroGamma(
            f"Gamma = {state.Gam:.3e} exceeds {gamma_tol:.1e}; state is off "
            "the physical manifold")
    c = coefficients(state)
    S, L = state.S, state.L
    rt8s = math.sqrt(8.0 * S)
    lp = 2.0 * (state.l + state.g)
    lm = 2.0 * (state.l - state.g)
    gp = 2.0 * (state.g + state.lam)
    gm = 2.0 * (state.g - state.lam)
    bp = 2.0 * (state.l + state.lam)
    bm = 2.0 * (state.l - state.lam)
    r = (L - c.B1 * math.cos(bp) - c.B2 * math.cos(bm)) / rt8s
    if r < r_tol * L / rt8s:
        raise ZeroRadius(f"radius r = {r:.3e} at the collision configuration")
    x = np.array([
        (c.A1 * math.sin(lp) - c.A2 * math.sin(lm)
         - c.C1 * math.sin(gp) - c.C2 * math.sin(gm)) / rt8s,
        (-c.A1 * math.cos(lp) - c.A2 * math.cos(lm)
         + c.C1 * math.cos(gp) + c.C2 * math.cos(gm)) / rt8s,
        (-state.Lam + c.B1 * math.cos(bp) - c.B2 * math.cos(bm)) / rt8s,
    ])
    X = np.array([
        (c.A1 * math.cos(lp) - c.A2 * math.cos(lm)) / (2.0 * r),
        (c.A1 * math.sin(lp) + c.A2 * math.sin(lm)) / (2.0 * r),
        (-c.B1 * math.sin(bp) + c.B2 * math.sin(bm)) / (2.0 * r),
    ])
    x_star = state.s - (c.B1 * math.sin(bp) + c.B2 * math.sin(bm)) / (4.0 * S)
    return CartesianPhaseExt(x_star, x, S, X)


def ks_to_lks(k: KSPhase, gauge: GaugeAlpha, frame: KSFrame = KS3) -> LKSState:
    """Lissajous-invert a KS3 phase point and apply the Mathieu step.

    The construction is specific to the KS3 frame (defining vector e3): the
    two oscillator planes are (v0, v3) and (v1, v2). The time-like variable
    is rebased from v* to s using the exact gauge derivative of omega.
    """
    if not frame.is_ks3():
        raise ValueError("the LKS chain requires the KS3 frame (c = e3)")
    S = k.V_star
    w = gauge.omega(S)
    v, V = k.v, k.V
    p03 = p12 = None
    surviving: dict[str, float] = {}
    try:
        p03 = lissajous_inverse(v.s0, v.v3, V.s0, V.v3, w, PLANE_03)
    except UndefinedAngles as exc:
        surviving.update(exc.surviving)
    try:
        p12 = lissajous_inverse(v.v1, v.v2, V.v1, V.v2, w, PLANE_12)
    except UndefinedAngles as exc:
        surviving.update(exc.surviving)
    if p03 is None or p12 is None:
        # a degenerate plane undefines the Mathieu half-sums; when both
        # planes are circular (|G| = L) the longitude combination survives
        if "l03+g03" in surviving and "l12+g12" in surviving:
            surviving["l+g"] = 0.5 * (surviving["l03+g03"]
                                      + surviving["l12+g12"])
        if "l03-g03" in surviving and "l12-g12" in surviving:
            surviving["l-g"] = 0.5 * (surviving["l03-g03"]
                                      + surviving["l12-g12"])
        raise UndefinedAngles(
            "Lissajous plane degeneracy: l, g and lambda are undefined",
            undetermined=("l", "g", "lambda"), surviving=surviving)
    s = k.v_star + (v.dot(V) / (2.0 * w)) * gauge.domega_ds(S)
    return mathieu_to_lks(p03, p12, s, S)


def lks_to_ks(state: LKSState, gauge: GaugeAlpha,
              frame: KSFrame = KS3) -> KSPhase:
    """Rebuild the KS3 phase point of an LKS state (fibre angle included)."""
    if not frame.is_ks3():
        raise ValueError("the LKS chain requires the KS3 frame (c = e3)")
    S = state.S
    w = gauge.omega(S)
    p03, p12 = planes_from_lks(state)
    v0, v3, V0, V3 = lissajous_forward(p03, w)
    v1, v2, V1, V2 = lissajous_forward(p12, w)
    v = Quaternion(v0, v1, v2, v3)
    V = Quaternion(V0, V1, V2, V3)
    v_star = state.s - (v.dot(V) / (2.0 * w)) * gauge.domega_ds(S)
    return KSPhase(v_star, v, S, V)


def cartesian_to_lks(p: CartesianPhaseExt, gauge: GaugeAlpha,
                     frame: KSFrame = KS3, antipodal_axis=None) -> LKSState:
    """Full chain from the extended Cartesian phase point to LKS variables.

    Lifts through the SKS fibre representative, so the fibre angle gamma
    carries an arbitrary (but reproducible) offset. Raises
    :class:`AntipodalDegeneracy` for positions along -e3 unless an explicit
    fibre axis is supplied, and propagates :class:`UndefinedAngles` from the
    per-plane inversions for circular/radial degeneracies.
    """
    k = lift_cartesian(p, frame, gauge, antipodal_axis=antipodal_axis)
    return ks_to_lks(k, gauge, frame)


def hamiltonian_m0(state: LKSState, gauge: GaugeAlpha, mu: float) -> float:
    """Keplerian Hamiltonian in LKS variables.

    M0 = omega(S) L - 4 mu / alpha(S) + Gam^2 / (8 r). Zero on physical
    pure-Kepler states, where L = 4 mu / (alpha omega) = 2 mu / sqrt(2 S).
    """
    S = state.S
    out = gauge.omega(S) * state.L - 4.0 * mu / gauge.alpha(S)
    if state.Gam != 0.0:
        out += state.Gam ** 2 / (8.0 * radius_lks(state))
    return out

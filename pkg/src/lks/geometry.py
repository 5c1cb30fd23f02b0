"""Keplerian geometry and the interpretation of LKS variables.

Converts between orbital elements and Cartesian phase points, evaluates the
angular-momentum and Laplace-Runge-Lenz pullbacks of an LKS state in closed
form, builds the Cartan vector pair whose projected angle encodes 4*lambda,
and classifies special orbit types (circular, radial, equatorial, polar)
together with the chart edges where angles degenerate.

On pure Kepler states the LKS actions relate to the Delaunay ones by
L = 2 sqrt(mu a), G = 2 G_o.e3 and Lambda = 2 J.e3, with J the
Laplace-Runge-Lenz vector scaled to angular-momentum units.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import DegenerateElements, NonzeroGamma, UndefinedLambda
from .lissajous import LKSState, coefficients, lks_to_cartesian

__all__ = [
    "KeplerElements", "PartialElements", "CartanPair", "OrbitClass",
    "EdgeCase", "OrbitClassification", "DelaunayReport",
    "elements_to_cartesian", "cartesian_to_elements", "partial_elements",
    "angular_momentum_lks", "lrl_vector_lks", "cartan_vectors",
    "lambda_from_projections", "classify", "delaunay_checks",
]

_TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class KeplerElements:
    """Elliptic orbital elements; angles in radians, f is the true anomaly."""

    a: float
    e: float
    inc: float
    argp: float
    node: float
    f: float

    def __post_init__(self):
        if not self.a > 0.0:
            raise ValueError(f"semi-axis a = {self.a} must be positive")
        if not 0.0 <= self.e <= 1.0:
            raise ValueError(f"eccentricity e = {self.e} outside [0, 1]")


@dataclass(frozen=True)
class PartialElements:
    """Tagged subset of elements that survive a degeneracy (never NaN).

    ``apsis_direction`` is the unit vector to pericentre when it exists, or
    the radial line direction for rectilinear orbits.
    """

    a: float
    e: float
    inc: float | None = None
    argp: float | None = None
    node: float | None = None
    f: float | None = None
    apsis_direction: tuple[float, float, float] | None = None


def _rot_z(t: float) -> np.ndarray:
    c, s = math.cos(t), math.sin(t)
    return np.array([[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]])


def _rot_x(t: float) -> np.ndarray:
    c, s = math.cos(t), math.sin(t)
    return np.array([[1.0, 0.0, 0.0], [0.0, c, -s], [0.0, s, c]])


def elements_to_cartesian(el: KeplerElements, mu: float) -> tuple[np.ndarray, np.ndarray]:
    """Position and momentum of an elliptic orbit from its elements.

    Standard perifocal construction rotated by R_z(node) R_x(inc) R_z(argp).
    Valid for 0 <= e < 1; e = 1 with f = pi would put the point at infinity.
    """
    p = el.a * (1.0 - el.e ** 2)
    denom = 1.0 + el.e * math.cos(el.f)
    if p == 0.0 or denom <= 0.0:
        raise DegenerateElements(
            "rectilinear orbit (e = 1) has no perifocal parametrization")
    r = p / denom
    x_pf = np.array([r * math.cos(el.f), r * math.sin(el.f), 0.0])
    X_pf = math.sqrt(mu / p) * np.array([-math.sin(el.f), el.e + math.cos(el.f), 0.0])
    R = _rot_z(el.node) @ _rot_x(el.inc) @ _rot_z(el.argp)
    return R @ x_pf, R @ X_pf


def _lrl(x: np.ndarray, X: np.ndarray, mu: float) -> np.ndarray:
    # dimensionless eccentricity vector e = (X x G_o)/mu - x_hat
    g = np.cross(x, X)
    return np.cross(X, g) / mu - x / np.linalg.norm(x)


def partial_elements(x, X, mu: float) -> PartialElements:
    """Element extraction that degrades gracefully for degenerate orbits."""
    x = np.asarray(x, dtype=float)
    X = np.asarray(X, dtype=float)
    r = float(np.linalg.norm(x))
    energy = float(X @ X) / 2.0 - mu / r
    if energy >= 0.0:
        raise ValueError("state is not elliptic (nonnegative energy)")
    a = -mu / (2.0 * energy)
    evec = _lrl(x, X, mu)
    e = float(np.linalg.norm(evec))
    g = np.cross(x, X)
    gn = float(np.linalg.norm(g))
    inc = math.atan2(math.hypot(g[0], g[1]), g[2]) if gn > 0.0 else None
    apsis = None
    if e > 1e-13:
        apsis = tuple(evec / e)
    elif gn == 0.0:
        apsis = tuple(x / r)
    return PartialElements(a=a, e=min(e, 1.0), inc=inc, apsis_direction=apsis)


def cartesian_to_elements(x, X, mu: float,
                          tol: float = 1e-9) -> KeplerElements:
    """Invert :func:`elements_to_cartesian` for a nondegenerate orbit.

    Raises :class:`DegenerateElements` (carrying the surviving partial
    elements) when the orbit is rectilinear (e = 1), circular (no pericentre)
    or equatorial (no node) within ``tol``.
    """
    x = np.asarray(x, dtype=float)
    X = np.asarray(X, dtype=float)
    r = float(np.linalg.norm(x))
    g = np.cross(x, X)
    gn = float(np.linalg.norm(g))
    evec = _lrl(x, X, mu)
    e = float(np.linalg.norm(evec))
    energy = float(X @ X) / 2.0 - mu / r
    if energy >= 0.0:
        raise ValueError("state is not elliptic (nonnegative energy)")
    a = -mu / (2.0 * energy)
    part = partial_elements(x, X, mu)
    if e >= 1.0 - tol or gn < tol * math.sqrt(mu * a):
        raise DegenerateElements("rectilinear orbit: no orbital plane",
                                 partial=part)
    if e < tol:
        raise DegenerateElements("circular orbit: pericentre undefined",
                                 partial=part)
    inc = math.acos(min(1.0, max(-1.0, g[2] / gn)))
    sin_inc = math.hypot(g[0], g[1]) / gn
    if sin_inc < tol:
        raise DegenerateElements("equatorial orbit: node undefined",
                                 partial=part)
    n_vec = np.array([-g[1], g[0], 0.0])           # e3 x g
    nn = float(np.linalg.norm(n_vec))
    node = math.atan2(n_vec[1], n_vec[0]) % _TWO_PI
    cos_argp = float(n_vec @ evec) / (nn * e)
    argp = math.acos(min(1.0, max(-1.0, cos_argp)))
    if evec[2] < 0.0:
        argp = _TWO_PI - argp
    cos_f = float(evec @ x) / (e * r)
    f = math.acos(min(1.0, max(-1.0, cos_f)))
    if float(x @ X) < 0.0:
        f = _TWO_PI - f
    return KeplerElements(a, e, inc, argp % _TWO_PI, node, f % _TWO_PI)


# --- pullbacks and Cartan vectors ---

def _require_physical(state: LKSState, tol: float = 1e-9) -> None:
    if abs(state.Gam) > tol:
        raise NonzeroGamma(f"Gamma = {state.Gam:.3e}; pullbacks assume Gamma = 0")


def angular_momentum_lks(state: LKSState) -> np.ndarray:
    """Orbital angular momentum x cross X evaluated from the LKS actions.

    The e3 component is exactly G/2; radial orbits (G = 0, lambda = k pi/2)
    give the zero vector.
    """
    _require_physical(state)
    c = coefficients(state)
    gp = 2.0 * (state.g + state.lam)
    gm = 2.0 * (state.g - state.lam)
    return np.array([
        0.5 * (c.C1 * math.sin(gp) - c.C2 * math.sin(gm)),
        0.5 * (-c.C1 * math.cos(gp) + c.C2 * math.cos(gm)),
        0.5 * state.G,
    ])


def lrl_vector_lks(state: LKSState) -> np.ndarray:
    """Laplace-Runge-Lenz vector (angular-momentum units) from the actions.

    Equals L_o ((X x G_o)/mu - x_hat) with L_o = L/2 on pure Kepler states;
    the e3 component is exactly Lambda/2. Circular orbits give zero.
    """
    _require_physical(state)
    c = coefficients(state)
    gp = 2.0 * (state.g + state.lam)
    gm = 2.0 * (state.g - state.lam)
    return np.array([
        0.5 * (c.C1 * math.sin(gp) + c.C2 * math.sin(gm)),
        -0.5 * (c.C1 * math.cos(gp) + c.C2 * math.cos(gm)),
        0.5 * state.Lam,
    ])


@dataclass(frozen=True, eq=False)
class CartanPair:
    """Cartan vectors M = (J + G_o)/2 and N = (J - G_o)/2 and their
    equatorial projections. Both norms equal L/4 on Kepler states; the
    oriented angle from N' to M' is 4*lambda."""

    M: np.ndarray
    N: np.ndarray
    Mp: np.ndarray
    Np: np.ndarray


def cartan_vectors(state: LKSState) -> CartanPair:
    J = lrl_vector_lks(state)
    Go = angular_momentum_lks(state)
    M = (J + Go) / 2.0
    N = (J - Go) / 2.0
    Mp = np.array([M[0], M[1], 0.0])
    Np = np.array([N[0], N[1], 0.0])
    return CartanPair(M, N, Mp, Np)


def lambda_from_projections(pair: CartanPair, tol: float = 1e-12) -> float:
    """Quarter of the oriented angle from N' to M', counterclockwise.

    Raises :class:`UndefinedLambda` when either projection is null (chart
    edges and the circular-equatorial / radial-polar vertices). The result
    matches the state's lambda modulo pi/2 (the 4*lambda wrapping).
    """
    nm = float(np.linalg.norm(pair.Mp))
    nn = float(np.linalg.norm(pair.Np))
    scale = max(float(np.linalg.norm(pair.M)), float(np.linalg.norm(pair.N)), 1e-300)
    if nm <= tol * scale or nn <= tol * scale:
        raise UndefinedLambda(
            "a projected Cartan vector is null; lambda and g are undefined")
    cos_tp = float(pair.Mp @ pair.Np) / (nm * nn)
    sin_tp = float(np.cross(pair.Np, pair.Mp)[2]) / (nm * nn)
    return math.atan2(sin_tp, cos_tp) / 4.0


# --- classification ---

class OrbitClass(Enum):
    GENERIC_CIRCULAR = "GenericCircular"
    CIRCULAR_POLAR = "CircularPolar"
    CIRCULAR_EQUATORIAL = "CircularEquatorial"
    GENERIC_RADIAL = "GenericRadial"
    RADIAL_EQUATORIAL = "RadialEquatorial"
    RADIAL_POLAR = "RadialPolar"
    GENERIC_EQUATORIAL = "GenericEquatorial"
    GENERIC_POLAR = "GenericPolar"
    GENERIC = "Generic"


@dataclass(frozen=True)
class EdgeCase:
    """Membership of one of the four |G| + |Lambda| = L chart edges.

    ``case`` is 'a' (L = G + Lambda), 'b' (L = -G + Lambda),
    'c' (L = G - Lambda) or 'd' (L = -G - Lambda); one Lissajous plane is
    circular there and only the named longitude combination survives.
    """

    case: str
    surviving_combination: str
    value: float


@dataclass(frozen=True)
class OrbitClassification:
    orbit_class: OrbitClass
    undetermined: tuple[str, ...]
    edge: EdgeCase | None = None

    def to_dict(self) -> dict:
        out = {"class": self.orbit_class.value,
               "undetermined": list(self.undetermined)}
        if self.edge is not None:
            out["edge"] = {"case": self.edge.case,
                           "surviving_combination": self.edge.surviving_combination,
                           "value": self.edge.value}
        return out


def _edge_case(state: LKSState, tol: float) -> EdgeCase | None:
    L, G, Lam = state.L, state.G, state.Lam
    if (L - abs(G) - abs(Lam)) / L >= tol:
        return None
    if abs(G) / L < tol or abs(Lam) / L < tol:
        return None    # vertex, not an edge interior
    l03 = state.l - state.lam
    g03 = state.g - state.gamma
    l12 = state.l + state.lam
    g12 = state.g + state.gamma
    if G > 0.0 and Lam > 0.0:      # L = G + Lambda: (0,3) plane circular, prograde
        return EdgeCase("a", "l03+g03", (l03 + g03) % _TWO_PI)
    if G < 0.0 and Lam > 0.0:      # L = -G + Lambda: (0,3) circular, retrograde
        return EdgeCase("b", "l03-g03", (l03 - g03) % _TWO_PI)
    if G > 0.0 and Lam < 0.0:      # L = G - Lambda: (1,2) circular, prograde
        return EdgeCase("c", "l12+g12", (l12 + g12) % _TWO_PI)
    return EdgeCase("d", "l12-g12", (l12 - g12) % _TWO_PI)


def classify(state: LKSState, tol: float = 1e-8) -> OrbitClassification:
    """Classify an LKS state into the special orbit taxonomy.

    Conditions are tested on the normalized ratios G/L, Lambda/L and on
    sin/cos of multiples of lambda, all against ``tol``. Chart-edge
    membership (one Lissajous plane circular) is reported separately with
    the surviving longitude combination.
    """
    L = state.L
    g_ratio = state.G / L
    lam_ratio = state.Lam / L
    circ_lam = abs(math.cos(2.0 * state.lam)) < tol      # lambda = (2k+1) pi/4
    rad_lam = abs(math.sin(2.0 * state.lam)) < tol       # lambda = k pi/2
    g_zero = abs(g_ratio) < tol
    lam_zero = abs(lam_ratio) < tol
    g_full = 1.0 - abs(g_ratio) < tol
    lam_full = 1.0 - abs(lam_ratio) < tol

    edge = _edge_case(state, tol)
    if edge is not None:
        return OrbitClassification(OrbitClass.GENERIC, ("l", "g", "lambda"), edge)

    if lam_zero and g_full:
        return OrbitClassification(OrbitClass.CIRCULAR_EQUATORIAL,
                                   ("l", "g", "lambda"))
    if g_zero and lam_full:
        return OrbitClassification(OrbitClass.RADIAL_POLAR, ("l", "g", "lambda"))
    if lam_zero and circ_lam:
        if g_zero:
            return OrbitClassification(OrbitClass.CIRCULAR_POLAR, ())
        return OrbitClassification(OrbitClass.GENERIC_CIRCULAR, ())
    if g_zero and rad_lam:
        if lam_zero:
            return OrbitClassification(OrbitClass.RADIAL_EQUATORIAL, ())
        return OrbitClassification(OrbitClass.GENERIC_RADIAL, ())
    if lam_zero and rad_lam:
        return OrbitClassification(OrbitClass.GENERIC_EQUATORIAL, ())
    if g_zero:
        return OrbitClassification(OrbitClass.GENERIC_POLAR, ())
    return OrbitClassification(OrbitClass.GENERIC, ())


@dataclass(frozen=True)
class DelaunayReport:
    """Residuals of the Delaunay correspondences on a pure Kepler state."""

    residual_L: float
    residual_G: float
    residual_Lambda: float
    a: float
    Go_e3: float
    J_e3: float

    @property
    def max_residual(self) -> float:
        return max(abs(self.residual_L), abs(self.residual_G),
                   abs(self.residual_Lambda))


def delaunay_checks(state: LKSState, mu: float) -> DelaunayReport:
    """Residuals of L - 2 sqrt(mu a), G - 2 G_o.e3 and Lambda - 2 J.e3.

    The reference values are computed on the Cartesian side (a from the
    energy action S = mu/(2a), G_o = x cross X, J from the LRL construction),
    independently of the closed-form pullbacks.
    """
    p = lks_to_cartesian(state)
    a = mu / (2.0 * state.S)
    go = np.cross(p.x, p.X)
    lo = math.sqrt(mu * a)
    jv = lo * _lrl(p.x, p.X, mu)
    return DelaunayReport(
        residual_L=state.L - 2.0 * math.sqrt(mu * a),
        residual_G=state.G - 2.0 * float(go[2]),
        residual_Lambda=state.Lam - 2.0 * float(jv[2]),
        a=a, Go_e3=float(go[2]), J_e3=float(jv[2]),
    )

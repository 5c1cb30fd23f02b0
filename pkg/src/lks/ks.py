"""Generalized KS transformation with an arbitrary defining vector.

The KS map sends a quaternion v to the position x = v (0,c) conj(v) / alpha,
where c is a unit "defining vector" and alpha > 0 an energy gauge. The map is
onto but not one-to-one; the fibre over x is the circle v rotor_q(c, -phi).
This module provides the map, its canonical extension to momenta in the
extended phase space (with the bilinear invariant J(v, V) = 0 as the weak
canonicity constraint), the regularized oscillator Hamiltonian, and the
Levi-Civita plane machinery that fixes the geometry of planar motion.

Frames: KS1 (c = e1, f = -e3) is the classical planar-friendly choice;
KS3 (c = e3, f = e1) aligns the defining vector with the reference pole and
underlies the Lissajous chain in :mod:`lks.lissajous`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    AntipodalDegeneracy,
    ManifoldViolation,
    NonpositiveEnergy,
    ZeroQuaternion,
    ZeroRadius,
)
from .gauge import GaugeAlpha
from .quaternion import Quaternion, mul, rotor_q, unit_vector3

__all__ = [
    "KSFrame", "KS1", "KS3",
    "CartesianPhaseExt", "KSPhase",
    "ks_map", "sks_vector", "fibre_point", "bilinear_j", "momentum_lift",
    "lift_cartesian", "project_ks", "hamiltonian_k0", "oscillator_frequency",
    "lc_plane_basis", "lc_plane_image", "position_angle_beta",
]

_ORTHO_TOL = 1e-12
_ANTIPODAL_TOL = 1e-8


@dataclass(frozen=True, eq=False)
class KSFrame:
    """Defining vector c and auxiliary vector f with f.c = 0, both unit."""

    c: np.ndarray
    f: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "c", unit_vector3(self.c))
        object.__setattr__(self, "f", unit_vector3(self.f))
        if abs(float(self.c @ self.f)) >= _ORTHO_TOL:
            raise ValueError("auxiliary vector f must be orthogonal to c")

    @property
    def c_quat(self) -> Quaternion:
        return Quaternion.pure(self.c)

    @staticmethod
    def ks1() -> "KSFrame":
        return KSFrame(np.array([1.0, 0.0, 0.0]), np.array([0.0, 0.0, -1.0]))

    @staticmethod
    def ks3() -> "KSFrame":
        return KSFrame(np.array([0.0, 0.0, 1.0]), np.array([1.0, 0.0, 0.0]))

    @staticmethod
    def from_name(name: str) -> "KSFrame":
        if name == "KS1":
            return KSFrame.ks1()
        if name == "KS3":
            return KSFrame.ks3()
        raise ValueError(f"unknown frame {name!r}; expected 'KS1' or 'KS3'")

    def is_ks3(self, tol: float = 1e-12) -> bool:
        return bool(np.max(np.abs(self.c - np.array([0.0, 0.0, 1.0]))) < tol)


KS1 = KSFrame.ks1()
KS3 = KSFrame.ks3()


@dataclass(frozen=True, eq=False)
class CartesianPhaseExt:
    """Extended Cartesian phase point (x*, x, X*, X).

    x* is the time-like coordinate (equal to physical time on trajectories),
    X* the conjugate energy-like momentum S, positive on elliptic states.
    """

    x_star: float
    x: np.ndarray
    X_star: float
    X: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "x", np.asarray(self.x, dtype=float))
        object.__setattr__(self, "X", np.asarray(self.X, dtype=float))
        if self.x.shape != (3,) or self.X.shape != (3,):
            raise ValueError("x and X must be 3-vectors")

    @property
    def r(self) -> float:
        return float(np.linalg.norm(self.x))


@dataclass(frozen=True, eq=False)
class KSPhase:
    """Extended KS phase point (v*, v, V*, V) with V* = S."""

    v_star: float
    v: Quaternion
    V_star: float
    V: Quaternion

    def radius(self, gauge: GaugeAlpha) -> float:
        return self.v.dot(self.v) / gauge.alpha(self.V_star)


def ks_map(v: Quaternion, frame: KSFrame, alpha: float) -> np.ndarray:
    """KS image x = vector part of v (0,c) conj(v) / alpha.

    The scalar part of the product vanishes identically and the image norm
    is (v.v)/alpha.
    """
    if not alpha > 0.0:
        raise ValueError("alpha must be positive")
    prod = mul(mul(v, frame.c_quat), v.conjugate())
    return prod.vec / alpha


def sks_vector(x, frame: KSFrame, alpha: float,
               antipodal_axis=None) -> Quaternion:
    """Canonical pure-quaternion fibre representative over position x.

    Lies along the bisector of c and the unit position x_hat, with norm
    sqrt(alpha r). When x_hat is antipodal to c the bisector vanishes and
    the whole fibre is pure; raises :class:`AntipodalDegeneracy` unless the
    caller supplies ``antipodal_axis``, a unit vector orthogonal to c used
    as the explicit representative direction.
    """
    x = np.asarray(x, dtype=float)
    r = float(np.linalg.norm(x))
    if r == 0.0:
        raise ZeroRadius("position vector is zero")
    xhat = x / r
    b = frame.c + xhat
    nb = float(np.linalg.norm(b))
    if nb < _ANTIPODAL_TOL:
        if antipodal_axis is None:
            raise AntipodalDegeneracy(
                "x is antipodal to the defining vector; supply an explicit "
                "fibre axis orthogonal to c")
        fhat = unit_vector3(antipodal_axis)
        if abs(float(fhat @ frame.c)) >= _ORTHO_TOL:
            raise ValueError("antipodal fibre axis must be orthogonal to c")
        return Quaternion.pure(math.sqrt(alpha * r) * fhat)
    return Quaternion.pure(math.sqrt(alpha * r) * b / nb)


def fibre_point(v_s: Quaternion, phi: float, frame: KSFrame) -> Quaternion:
    """Point v_s rotor_q(c, -phi) on the fibre through v_s."""
    return mul(v_s, rotor_q(frame.c, -phi))


def bilinear_j(v: Quaternion, w: Quaternion, frame: KSFrame) -> float:
    """Skew-symmetric bilinear form J(v, w) relative to the frame's c.

    J(v, w) = -v0 (w.c) + w0 (v.c) + (v x w).c, antisymmetric in (v, w).
    """
    c = frame.c
    vv, wv = v.vec, w.vec
    return float(-v.s0 * (wv @ c) + w.s0 * (vv @ c) + (np.cross(vv, wv) @ c))


def momentum_lift(X, v: Quaternion, frame: KSFrame, alpha: float,
                  tol: float = 1e-12) -> Quaternion:
    """KS momentum V = 2 (0,X) v conj(0,c) / alpha conjugate to v.

    For a pure-vector momentum X the lift satisfies J(v, V) = 0, which keeps
    the inverse X = V (0,c) conj(v) / (2r) free of a scalar part.
    """
    if v.norm() < tol:
        raise ZeroQuaternion("cannot lift momentum at v = 0")
    Xq = Quaternion.pure(np.asarray(X, dtype=float))
    return (2.0 / alpha) * mul(mul(Xq, v), frame.c_quat.conjugate())


def _time_shift_q(v: Quaternion, V: Quaternion, gauge: GaugeAlpha) -> float:
    # Primitive function Q = [S/alpha d(alpha)/dS] (v.V)/2, exact in k2.
    return gauge.k2 * v.dot(V) / 2.0


def lift_cartesian(p: CartesianPhaseExt, frame: KSFrame, gauge: GaugeAlpha,
                   antipodal_axis=None) -> KSPhase:
    """Lift an extended Cartesian phase point to the KS chart.

    Uses the SKS fibre representative (or the caller's antipodal axis), the
    canonical momentum lift, and the gauge time shift
    v* = x* + Q/S with Q = k2 (v.V)/2. Requires X* > 0.
    """
    S = p.X_star
    if not S > 0.0:
        raise NonpositiveEnergy(f"X_star = {S} must be positive")
    alpha = gauge.alpha(S)
    v = sks_vector(p.x, frame, alpha, antipodal_axis=antipodal_axis)
    V = momentum_lift(p.X, v, frame, alpha)
    v_star = p.x_star + _time_shift_q(v, V, gauge) / S
    return KSPhase(v_star, v, S, V)


def project_ks(k: KSPhase, frame: KSFrame, gauge: GaugeAlpha,
               manifold_tol: float = 1e-9) -> CartesianPhaseExt:
    """Project a KS phase point back to the extended Cartesian chart.

    The input must sit on the J(v, V) = 0 manifold within ``manifold_tol``
    (the projection is only weakly canonical there); otherwise raises
    :class:`ManifoldViolation` rather than returning an unphysical state.
    """
    S = k.V_star
    if not S > 0.0:
        raise NonpositiveEnergy(f"V_star = {S} must be positive")
    alpha = gauge.alpha(S)
    vv = k.v.dot(k.v)
    if vv == 0.0:
        raise ZeroQuaternion("cannot project at v = 0")
    j = bilinear_j(k.v, k.V, frame)
    if abs(j) > manifold_tol:
        raise ManifoldViolation(
            f"J(v, V) = {j:.3e} exceeds manifold tolerance {manifold_tol:.1e}")
    r = vv / alpha
    x = ks_map(k.v, frame, alpha)
    Xq = mul(mul(k.V, frame.c_quat), k.v.conjugate()) * (1.0 / (2.0 * r))
    x_star = k.v_star - _time_shift_q(k.v, k.V, gauge) / S
    return CartesianPhaseExt(x_star, x, S, Xq.vec)


def oscillator_frequency(S: float, gauge: GaugeAlpha) -> float:
    """omega = 2 sqrt(2 S) / alpha(S); raises NonpositiveEnergy for S <= 0."""
    return gauge.omega(S)


def hamiltonian_k0(k: KSPhase, frame: KSFrame, gauge: GaugeAlpha,
                   mu: float) -> float:
    """Regularized Kepler Hamiltonian in the KS chart.

    K0 = V.V/2 + omega^2 v.v/2 - 4 mu/alpha + alpha J(v,V)^2 / (2 v.v).
    Vanishes on lifted pure-Kepler states with S = mu/(2a).
    """
    S = k.V_star
    alpha = gauge.alpha(S)
    w = gauge.omega(S)
    vv = k.v.dot(k.v)
    out = k.V.dot(k.V) / 2.0 + w * w * vv / 2.0 - 4.0 * mu / alpha
    if vv > 0.0:
        j = bilinear_j(k.v, k.V, frame)
        out += alpha * j * j / (2.0 * vv)
    return out


def lc_plane_basis(u: Quaternion, f, frame: KSFrame,
                   tol: float = 1e-9) -> tuple[Quaternion, Quaternion]:
    """Orthonormal basis (u, w = u (0,f)) of the Levi-Civita plane through u.

    Requires |u| = 1 and f orthogonal to the defining vector; then u.w = 0,
    |w| = 1 and J(u, w) = 0, so the span of (u, w) is an LC plane.
    """
    if abs(u.norm() - 1.0) > tol:
        raise ValueError("u must be a unit quaternion")
    f = unit_vector3(f)
    if abs(float(f @ frame.c)) >= _ORTHO_TOL:
        raise ValueError("f must be orthogonal to the defining vector")
    w = mul(u, Quaternion.pure(f))
    return u, w


def lc_plane_image(u: Quaternion, f, frame: KSFrame,
                   tol: float = 1e-9) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Orthonormal triad spanning and orienting the KS image of an LC plane.

    The image of the plane spanned by (u, u(0,f)) is a plane in R^3 with
    basis x1 = [u (0,c) conj(u)], x2 = [u (0,f x c) conj(u)] and normal
    x3 = x1 x x2 = [u (0,f) conj(u)], so that
    c.x3 = 2 (u.f)(u.c) - 2 u0 u.(c x f).
    """
    u, _ = lc_plane_basis(u, f, frame, tol=tol)
    f = unit_vector3(f)
    cq = frame.c_quat
    bq = Quaternion.pure(np.cross(f, frame.c))
    x1 = mul(mul(u, cq), u.conjugate()).vec
    x2 = mul(mul(u, bq), u.conjugate()).vec
    x3 = np.cross(x1, x2)
    return x1, x2, x3


def position_angle_beta(phi: float, cx: float) -> float:
    """Position angle on the fibre ellipse from the parametric angle phi.

    tan(beta) = sqrt((1 - c.x_hat)/2) tan(phi), resolved in the quadrant of
    phi. For c.x_hat = 1 the ellipse degenerates to a segment and the
    position angle is identically zero; for c.x_hat = -1 it is a circle and
    beta = phi.
    """
    if abs(cx) > 1.0 + 1e-12:
        raise ValueError("c.x_hat must lie in [-1, 1]")
    k = math.sqrt(max(0.0, (1.0 - min(cx, 1.0)) / 2.0))
    if k == 0.0:
        return 0.0
    return math.atan2(k * math.sin(phi), math.cos(phi))

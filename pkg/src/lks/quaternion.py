"""Quaternion algebra and the rotor families of the KS construction.

A quaternion is a scalar plus a 3-vector, stored as four doubles in
``(s0, v1, v2, v3)`` order. All values are immutable; the algebra performs
no hidden normalization. Two one-parameter rotor families are provided:
``rotor_q`` about a fixed defining axis and ``rotor_p`` about a position
direction. Both generate the fibre of the KS map.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "Quaternion", "E0", "E1", "E2", "E3",
    "mul", "conjugate", "cross", "rotor_q", "rotor_p", "unit_vector3",
]

_UNIT_TOL = 1e-12


def unit_vector3(v) -> np.ndarray:
    """Normalize a 3-vector at construction time; rejects the zero vector."""
    a = np.asarray(v, dtype=float)
    if a.shape != (3,):
        raise ValueError(f"expected a 3-vector, got shape {a.shape}")
    n = math.sqrt(float(a @ a))
    if n == 0.0:
        raise ValueError("zero vector cannot be normalized")
    u = a / n
    assert abs(math.sqrt(float(u @ u)) - 1.0) < _UNIT_TOL
    u.setflags(write=False)
    return u


@dataclass(frozen=True)
class Quaternion:
    """Immutable quaternion ``(s0, v1, v2, v3)``."""

    s0: float
    v1: float
    v2: float
    v3: float

    @staticmethod
    def pure(vec) -> "Quaternion":
        """Pure quaternion (0, vec); the scalar part is exactly zero."""
        v = np.asarray(vec, dtype=float)
        return Quaternion(0.0, float(v[0]), float(v[1]), float(v[2]))

    @staticmethod
    def from_parts(s0: float, vec) -> "Quaternion":
        v = np.asarray(vec, dtype=float)
        return Quaternion(float(s0), float(v[0]), float(v[1]), float(v[2]))

    @property
    def vec(self) -> np.ndarray:
        """Vector part as a 3-array."""
        return np.array([self.v1, self.v2, self.v3])

    @property
    def is_pure(self) -> bool:
        """True iff the scalar part is exactly zero."""
        return self.s0 == 0.0

    def dot(self, other: "Quaternion") -> float:
        """Euclidean scalar product in R^4."""
        return (self.s0 * other.s0 + self.v1 * other.v1
                + self.v2 * other.v2 + self.v3 * other.v3)

    def norm(self) -> float:
        return math.sqrt(self.dot(self))

    def conjugate(self) -> "Quaternion":
        return Quaternion(self.s0, -self.v1, -self.v2, -self.v3)

    def components(self) -> np.ndarray:
        return np.array([self.s0, self.v1, self.v2, self.v3])

    def __mul__(self, other):
        if isinstance(other, Quaternion):
            return mul(self, other)
        return Quaternion(self.s0 * other, self.v1 * other,
                          self.v2 * other, self.v3 * other)

    def __rmul__(self, scalar):
        return self.__mul__(scalar)

    def __add__(self, other: "Quaternion") -> "Quaternion":
        return Quaternion(self.s0 + other.s0, self.v1 + other.v1,
                          self.v2 + other.v2, self.v3 + other.v3)

    def __sub__(self, other: "Quaternion") -> "Quaternion":
        return Quaternion(self.s0 - other.s0, self.v1 - other.v1,
                          self.v2 - other.v2, self.v3 - other.v3)

    def __neg__(self) -> "Quaternion":
        return Quaternion(-self.s0, -self.v1, -self.v2, -self.v3)

    def __abs__(self) -> float:
        return self.norm()


E0 = Quaternion(1.0, 0.0, 0.0, 0.0)
E1 = Quaternion(0.0, 1.0, 0.0, 0.0)
E2 = Quaternion(0.0, 0.0, 1.0, 0.0)
E3 = Quaternion(0.0, 0.0, 0.0, 1.0)


def mul(u: Quaternion, v: Quaternion) -> Quaternion:
    """Noncommutative quaternion product.

    (u0 v0 - u.v, u0 v + v0 u + u x v); the norm is multiplicative.
    """
    s = u.s0 * v.s0 - (u.v1 * v.v1 + u.v2 * v.v2 + u.v3 * v.v3)
    w1 = u.s0 * v.v1 + v.s0 * u.v1 + (u.v2 * v.v3 - u.v3 * v.v2)
    w2 = u.s0 * v.v2 + v.s0 * u.v2 + (u.v3 * v.v1 - u.v1 * v.v3)
    w3 = u.s0 * v.v3 + v.s0 * u.v3 + (u.v1 * v.v2 - u.v2 * v.v1)
    return Quaternion(s, w1, w2, w3)


def conjugate(v: Quaternion) -> Quaternion:
    return v.conjugate()


def cross(u: Quaternion, v: Quaternion) -> Quaternion:
    """Quaternion cross product (v conj(u) - u conj(v))/2.

    Always a pure quaternion: (0, u0 v - v0 u + u x v). The zero scalar part
    is constructed, not computed and rounded. Reduces to the vector cross
    product when both factors are pure.
    """
    w1 = u.s0 * v.v1 - v.s0 * u.v1 + (u.v2 * v.v3 - u.v3 * v.v2)
    w2 = u.s0 * v.v2 - v.s0 * u.v2 + (u.v3 * v.v1 - u.v1 * v.v3)
    w3 = u.s0 * v.v3 - v.s0 * u.v3 + (u.v1 * v.v2 - u.v2 * v.v1)
    return Quaternion(0.0, w1, w2, w3)


def rotor_q(c, phi: float) -> Quaternion:
    """Unit rotor (cos phi, sin phi * c) about the defining axis c.

    Satisfies rotor_q(c, a) rotor_q(c, b) = rotor_q(c, a+b) and
    rotor_q(c, phi) (0, c) rotor_q(c, phi)^* = (0, c).
    """
    c = unit_vector3(c)
    s = math.sin(phi)
    return Quaternion(math.cos(phi), s * c[0], s * c[1], s * c[2])


def rotor_p(xhat, phi: float) -> Quaternion:
    """Unit rotor (cos phi, sin phi * xhat) about a position direction.

    Left multiplication by rotor_p matches right multiplication by rotor_q
    on the fibre of x: rotor_p(xhat, phi) v = v rotor_q(c, phi).
    """
    x = unit_vector3(xhat)
    s = math.sin(phi)
    return Quaternion(math.cos(phi), s * x[0], s * x[1], s * x[2])

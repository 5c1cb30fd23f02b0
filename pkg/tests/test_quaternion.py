"""Quaternion algebra: basis identities, rotors, and algebraic properties."""

from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from lks import E0, E1, E2, E3, Quaternion, conjugate, cross, mul, rotor_p, rotor_q, unit_vector3

finite = st.floats(-10.0, 10.0, allow_nan=False)
quaternions = st.builds(Quaternion, finite, finite, finite, finite)


def qclose(u: Quaternion, v: Quaternion, tol: float = 1e-12) -> bool:
    return float(np.max(np.abs(u.components() - v.components()))) <= tol


class TestProduct:
    def test_basis_identity(self):
        assert qclose(mul(E1, E2), E3)
        assert qclose(mul(E2, E3), E1)
        assert qclose(mul(E3, E1), E2)

    def test_identity_element(self):
        v = Quaternion(0.3, -1.2, 4.0, 0.9)
        assert qclose(mul(E0, v), v)
        assert qclose(mul(v, E0), v)

    def test_direct_evaluation(self):
        u = Quaternion(1.0, 1.0, 0.0, 0.0)
        v = Quaternion(0.0, 0.0, 1.0, 0.0)
        assert qclose(mul(u, v), Quaternion(0.0, 0.0, 1.0, 1.0))

    def test_noncommutative(self):
        assert not qclose(mul(E1, E2), mul(E2, E1))

    @given(quaternions, quaternions)
    def test_norm_multiplicative(self, u, v):
        lhs = mul(u, v).norm()
        rhs = u.norm() * v.norm()
        assert abs(lhs - rhs) <= 1e-12 * max(1.0, rhs)

    @given(quaternions, quaternions, quaternions)
    def test_associative(self, u, v, w):
        a = mul(mul(u, v), w)
        b = mul(u, mul(v, w))
        scale = max(1.0, float(np.max(np.abs(a.components()))))
        assert qclose(a, b, 1e-12 * scale)


class TestConjugate:
    def test_negates_vector(self):
        assert qclose(conjugate(Quaternion(1.0, 2.0, 3.0, 4.0)),
                      Quaternion(1.0, -2.0, -3.0, -4.0))

    def test_norm_square(self):
        v = Quaternion(1.0, 1.0, 0.0, 0.0)
        assert qclose(mul(v, conjugate(v)), Quaternion(2.0, 0.0, 0.0, 0.0))

    def test_identity_fixed(self):
        assert qclose(conjugate(E0), E0)


class TestCross:
    def test_pure_reduces_to_vector_cross(self):
        assert qclose(cross(E1, E2), E3)

    def test_antisymmetric_self(self):
        v = Quaternion(0.7, -0.1, 2.0, 0.4)
        assert qclose(cross(v, v), Quaternion(0.0, 0.0, 0.0, 0.0))

    def test_scalar_term(self):
        u = Quaternion(1.0, 0.0, 0.0, 0.0)
        assert qclose(cross(u, E2), E2)

    @given(quaternions, quaternions)
    def test_scalar_part_constructed_zero(self, u, v):
        assert cross(u, v).s0 == 0.0

    @given(quaternions, quaternions)
    def test_matches_product_form(self, u, v):
        direct = cross(u, v)
        form = (mul(v, conjugate(u)) - mul(u, conjugate(v))) * 0.5
        scale = max(1.0, float(np.max(np.abs(direct.components()))))
        assert qclose(direct, form, 1e-12 * scale)


class TestRotors:
    def test_rotor_q_special_values(self):
        c = np.array([0.0, 0.0, 1.0])
        assert qclose(rotor_q(c, 0.0), E0)
        assert qclose(rotor_q(c, math.pi / 2.0), E3)

    def test_rotor_q_additive(self):
        c = unit_vector3([1.0, 2.0, -0.5])
        for phi, psi in [(0.3, 1.1), (-2.0, 0.4), (2.8, 2.8)]:
            lhs = mul(rotor_q(c, phi), rotor_q(c, psi))
            assert qclose(lhs, rotor_q(c, phi + psi))

    def test_rotor_q_fixes_axis(self):
        c = unit_vector3([0.3, -1.0, 0.2])
        cq = Quaternion.pure(c)
        for phi in np.linspace(0.0, 2.0 * math.pi, 17):
            q = rotor_q(c, phi)
            assert qclose(mul(mul(q, cq), conjugate(q)), cq)

    def test_rotor_p_special_values(self):
        x = np.array([1.0, 0.0, 0.0])
        assert qclose(rotor_p(x, 0.0), E0)
        assert qclose(rotor_p(x, math.pi), Quaternion(-1.0, 0.0, 0.0, 0.0))

    def test_unit_norm(self):
        c = unit_vector3([4.0, 1.0, 1.0])
        for phi in (0.1, 1.0, 2.5, -0.7):
            assert abs(rotor_q(c, phi).norm() - 1.0) < 1e-15


class TestUnitVector:
    def test_normalizes(self):
        u = unit_vector3([3.0, 0.0, 4.0])
        assert np.allclose(u, [0.6, 0.0, 0.8])

    def test_rejects_zero(self):
        with pytest.raises(ValueError):
            unit_vector3([0.0, 0.0, 0.0])

    def test_readonly(self):
        u = unit_vector3([1.0, 1.0, 0.0])
        with pytest.raises(ValueError):
            u[0] = 2.0


class TestPurePredicate:
    def test_pure_construction_exact(self):
        assert Quaternion.pure([1.0, 2.0, 3.0]).is_pure

    def test_nonpure(self):
        assert not Quaternion(1e-300, 0.0, 0.0, 0.0).is_pure

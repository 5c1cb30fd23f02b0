"""Elements conversion, vector pullbacks, Cartan pair and the classifier."""

from __future__ import annotations

import math

import numpy as np
import pytest

from lks import (
    DegenerateElements,
    GaugeAlpha,
    KeplerElements,
    LKSState,
    OrbitClass,
    UndefinedLambda,
    angular_momentum_lks,
    cartan_vectors,
    cartesian_to_elements,
    cartesian_to_lks,
    classify,
    delaunay_checks,
    elements_to_cartesian,
    lambda_from_projections,
    lks_to_cartesian,
    lrl_vector_lks,
    partial_elements,
)
from conftest import MU, SAMPLE_ELEMENTS, angles_close, kepler_phase, random_elements

G_SQRT8S = GaugeAlpha.sqrt8s()


def random_state(rng) -> LKSState:
    L = rng.uniform(0.5, 5.0)
    G = rng.uniform(-0.85, 0.85) * L
    Lam = rng.uniform(-0.85, 0.85) * (L - abs(G))
    return LKSState(s=0.0, l=rng.uniform(0, 2 * math.pi),
                    lam=rng.uniform(-math.pi, math.pi),
                    g=rng.uniform(0, 2 * math.pi), gamma=0.0,
                    S=rng.uniform(0.05, 1.0), L=L, Lam=Lam, G=G)


class TestElements:
    def test_planar_circular_axis_point(self):
        x, X = elements_to_cartesian(
            KeplerElements(2.0, 0.0, 0.0, 0.0, 0.0, 0.0), MU)
        assert np.allclose(x, [2.0, 0.0, 0.0], atol=1e-15)
        assert np.allclose(X, [0.0, math.sqrt(MU / 2.0), 0.0], atol=1e-15)

    def test_sample_orbit_finite(self):
        x, X = elements_to_cartesian(SAMPLE_ELEMENTS, MU)
        assert np.all(np.isfinite(x)) and np.all(np.isfinite(X))
        r = np.linalg.norm(x)
        p = 10.0 * (1 - 0.25)
        assert r == pytest.approx(p / (1 + 0.5 * math.cos(math.radians(60))),
                                  rel=1e-14)

    def test_round_trip(self):
        rng = np.random.default_rng(40)
        for _ in range(40):
            el = random_elements(rng)
            x, X = elements_to_cartesian(el, MU)
            back = cartesian_to_elements(x, X, MU)
            assert back.a == pytest.approx(el.a, rel=1e-12)
            assert back.e == pytest.approx(el.e, rel=1e-11, abs=1e-12)
            assert back.inc == pytest.approx(el.inc, abs=1e-12)
            assert angles_close(back.argp, el.argp, tol=1e-10)
            assert angles_close(back.node, el.node, tol=1e-10)
            assert angles_close(back.f, el.f, tol=1e-10)

    def test_circular_degenerate(self):
        x, X = elements_to_cartesian(
            KeplerElements(2.0, 0.0, 0.4, 0.0, 0.3, 0.7), MU)
        with pytest.raises(DegenerateElements) as exc:
            cartesian_to_elements(x, X, MU)
        assert exc.value.partial.e == pytest.approx(0.0, abs=1e-12)
        assert exc.value.partial.a == pytest.approx(2.0, rel=1e-12)

    def test_radial_degenerate_partial(self):
        u = np.array([0.6, 0.0, 0.8])
        x, X = 1.5 * u, 0.3 * u
        with pytest.raises(DegenerateElements) as exc:
            cartesian_to_elements(x, X, MU)
        part = exc.value.partial
        assert part.e == pytest.approx(1.0, abs=1e-12)
        assert part.apsis_direction is not None
        assert np.allclose(np.abs(part.apsis_direction), u, atol=1e-12)

    def test_partial_never_nan(self):
        u = np.array([1.0, 0.0, 0.0])
        part = partial_elements(1.0 * u, 0.1 * u, MU)
        assert math.isfinite(part.a) and math.isfinite(part.e)


class TestPullbacks:
    def test_e3_component_is_half_G(self):
        rng = np.random.default_rng(41)
        for _ in range(20):
            st = random_state(rng)
            assert angular_momentum_lks(st)[2] == st.G / 2.0
            assert lrl_vector_lks(st)[2] == st.Lam / 2.0

    def test_matches_cartesian_oracle(self):
        rng = np.random.default_rng(42)
        for _ in range(40):
            p = kepler_phase(random_elements(rng))
            st = cartesian_to_lks(p, G_SQRT8S)
            go = np.cross(p.x, p.X)
            assert np.max(np.abs(angular_momentum_lks(st) - go)) < 1e-11 * max(
                1.0, np.linalg.norm(go))
            lo = st.L / 2.0
            ev = np.cross(p.X, go) / MU - p.x / np.linalg.norm(p.x)
            assert np.max(np.abs(lrl_vector_lks(st) - lo * ev)) < 1e-11 * lo

    def test_norms(self, sample_lks):
        e, a = 0.5, 10.0
        lo = math.sqrt(MU * a)
        assert np.linalg.norm(angular_momentum_lks(sample_lks)) == pytest.approx(
            lo * math.sqrt(1 - e * e), rel=1e-12)
        assert np.linalg.norm(lrl_vector_lks(sample_lks)) == pytest.approx(
            lo * e, rel=1e-12)

    def test_radial_zero_momentum(self):
        st = LKSState(0, 0.4, math.pi / 2.0, 0.7, 0, 0.3, 2.0, 0.8, 0.0)
        assert np.max(np.abs(angular_momentum_lks(st))) < 1e-12

    def test_circular_zero_lrl(self):
        st = LKSState(0, 0.4, math.pi / 4.0, 0.7, 0, 0.3, 2.0, 0.0, 1.2)
        assert np.max(np.abs(lrl_vector_lks(st))) < 1e-12


class TestCartan:
    def test_norms_quarter_L(self):
        rng = np.random.default_rng(43)
        for _ in range(20):
            st = random_state(rng)
            pair = cartan_vectors(st)
            assert np.linalg.norm(pair.M) == pytest.approx(st.L / 4.0, rel=1e-12)
            assert np.linalg.norm(pair.N) == pytest.approx(st.L / 4.0, rel=1e-12)

    def test_circular_antiparallel(self):
        st = LKSState(0, 0.4, math.pi / 4.0, 0.7, 0, 0.3, 2.0, 0.0, 1.2)
        pair = cartan_vectors(st)
        assert np.allclose(pair.M, -pair.N, atol=1e-12)

    def test_radial_equal(self):
        st = LKSState(0, 0.4, math.pi / 2.0, 0.7, 0, 0.3, 2.0, 0.8, 0.0)
        pair = cartan_vectors(st)
        assert np.allclose(pair.M, pair.N, atol=1e-12)

    def test_eccentricity_angle(self, sample_lks):
        pair = cartan_vectors(sample_lks)
        ct = float(pair.M @ pair.N) / (np.linalg.norm(pair.M)
                                       * np.linalg.norm(pair.N))
        assert ct == pytest.approx(2.0 * 0.5 ** 2 - 1.0, abs=1e-12)

    def test_projected_angle_bound_equatorial_family(self):
        # |theta'| <= theta holds on the Lambda = 0 family (it reduces to
        # cos 4 lambda >= -1 there); polar-dominant states violate it
        rng = np.random.default_rng(44)
        for _ in range(30):
            L = rng.uniform(0.5, 3.0)
            G = rng.uniform(-0.9, 0.9) * L
            st = LKSState(0, 0.3, rng.uniform(-math.pi, math.pi), 0.8, 0.0,
                          0.4, L, 0.0, G)
            pair = cartan_vectors(st)
            ct = float(pair.M @ pair.N) / (np.linalg.norm(pair.M)
                                           * np.linalg.norm(pair.N))
            theta = math.acos(max(-1.0, min(1.0, ct)))
            ctp = float(pair.Mp @ pair.Np) / (np.linalg.norm(pair.Mp)
                                              * np.linalg.norm(pair.Np))
            theta_p = math.acos(max(-1.0, min(1.0, ctp)))
            assert theta_p <= theta + 1e-9

    def test_projected_angle_can_exceed_for_polar_states(self):
        # counterexample pinning the restricted domain of the bound above
        st = LKSState(0, 0.3, math.pi / 8.0, 0.8, 0.0, 0.4, 1.0, 0.9, 0.0)
        pair = cartan_vectors(st)
        ct = float(pair.M @ pair.N) / (np.linalg.norm(pair.M)
                                       * np.linalg.norm(pair.N))
        theta = math.acos(max(-1.0, min(1.0, ct)))
        assert math.pi / 2.0 > theta + 0.5


class TestLambdaFromProjections:
    def test_recovers_lambda_mod_quarter(self):
        rng = np.random.default_rng(45)
        for _ in range(30):
            st = random_state(rng)
            lam = lambda_from_projections(cartan_vectors(st))
            assert angles_close(lam, st.lam, period=math.pi / 2.0, tol=1e-9)

    def test_circular_quarter_values(self):
        st = LKSState(0, 0.4, math.pi / 4.0, 0.7, 0, 0.3, 2.0, 0.0, 1.2)
        lam = lambda_from_projections(cartan_vectors(st))
        assert angles_close(abs(lam), math.pi / 4.0, period=math.pi / 2.0,
                            tol=1e-10)

    def test_radial_zero_values(self):
        st = LKSState(0, 0.4, math.pi / 2.0, 0.7, 0, 0.3, 2.0, 0.8, 0.0)
        lam = lambda_from_projections(cartan_vectors(st))
        assert angles_close(lam, 0.0, period=math.pi / 2.0, tol=1e-10)

    def test_equatorial_circular_undefined(self):
        st = LKSState(0, 0.4, 0.3, 0.7, 0, 0.3, 2.0, 0.0, 2.0)
        with pytest.raises(UndefinedLambda):
            lambda_from_projections(cartan_vectors(st))


def _state(L=2.0, G=0.0, Lam=0.0, lam=0.0) -> LKSState:
    return LKSState(0, 0.9, lam, 0.7, 0.2, 0.4, L, Lam, G)


class TestClassifier:
    @pytest.mark.parametrize("st,expected,undet", [
        (_state(G=1.2, Lam=0.0, lam=math.pi / 4), OrbitClass.GENERIC_CIRCULAR, ()),
        (_state(G=0.0, Lam=0.0, lam=3 * math.pi / 4), OrbitClass.CIRCULAR_POLAR, ()),
        (_state(G=2.0, Lam=0.0, lam=0.13), OrbitClass.CIRCULAR_EQUATORIAL,
         ("l", "g", "lambda")),
        (_state(G=-2.0, Lam=0.0, lam=0.77), OrbitClass.CIRCULAR_EQUATORIAL,
         ("l", "g", "lambda")),
        (_state(G=0.0, Lam=1.1, lam=math.pi / 2), OrbitClass.GENERIC_RADIAL, ()),
        (_state(G=0.0, Lam=0.0, lam=-math.pi), OrbitClass.RADIAL_EQUATORIAL, ()),
        (_state(G=0.0, Lam=2.0, lam=1.0), OrbitClass.RADIAL_POLAR,
         ("l", "g", "lambda")),
        (_state(G=0.0, Lam=-2.0, lam=2.2), OrbitClass.RADIAL_POLAR,
         ("l", "g", "lambda")),
        (_state(G=-0.9, Lam=0.0, lam=math.pi), OrbitClass.GENERIC_EQUATORIAL, ()),
        (_state(G=0.0, Lam=0.9, lam=0.4), OrbitClass.GENERIC_POLAR, ()),
        (_state(G=0.8, Lam=0.5, lam=0.9), OrbitClass.GENERIC, ()),
    ])
    def test_taxonomy(self, st, expected, undet):
        out = classify(st)
        assert out.orbit_class is expected
        assert out.undetermined == undet
        assert out.edge is None

    @pytest.mark.parametrize("case,G,Lam,combo", [
        ("a", 1.3, 0.7, "l03+g03"),
        ("b", -1.3, 0.7, "l03-g03"),
        ("c", 1.3, -0.7, "l12+g12"),
        ("d", -1.3, -0.7, "l12-g12"),
    ])
    def test_edges(self, case, G, Lam, combo):
        st = _state(L=2.0, G=G, Lam=Lam, lam=0.37)
        out = classify(st)
        assert out.edge is not None
        assert out.edge.case == case
        assert out.edge.surviving_combination == combo
        vals = {"l03+g03": (st.l - st.lam) + (st.g - st.gamma),
                "l03-g03": (st.l - st.lam) - (st.g - st.gamma),
                "l12+g12": (st.l + st.lam) + (st.g + st.gamma),
                "l12-g12": (st.l + st.lam) - (st.g + st.gamma)}
        assert angles_close(out.edge.value, vals[combo])

    def test_stable_under_small_perturbation(self):
        # tol/2 moves of the decision quantities (ratios, sin/cos of the
        # lambda multiples) must not change the class; d(cos 2 lam)/d(lam)
        # is 2, so the angle itself moves by tol/4
        tol = 1e-8
        st = _state(G=1.2, Lam=0.0, lam=math.pi / 4)
        for dl, dg in ((tol / 4, 0.0), (0.0, tol / 2), (-tol / 4, tol / 2)):
            out = classify(st.replace(lam=st.lam + dl, G=st.G + dg * st.L),
                           tol=tol)
            assert out.orbit_class is OrbitClass.GENERIC_CIRCULAR

    def test_every_state_gets_exactly_one_class(self):
        rng = np.random.default_rng(46)
        for _ in range(300):
            L = rng.uniform(0.5, 3.0)
            G = rng.uniform(-1.0, 1.0) * L
            Lam = rng.uniform(-1.0, 1.0) * (L - abs(G))
            st = LKSState(0, 0.1, rng.uniform(-math.pi, math.pi), 0.2, 0.0,
                          1.0, L, Lam, G)
            out = classify(st)
            assert isinstance(out.orbit_class, OrbitClass)

    def test_quarter_lambda_means_apsidal_square_angle(self):
        # lambda = k pi/4 forces cos(omega_o) = 0 whenever omega_o exists
        rng = np.random.default_rng(47)
        hits = 0
        for _ in range(40):
            L = rng.uniform(1.0, 3.0)
            G = rng.uniform(0.2, 0.8) * L
            Lam = rng.uniform(0.1, 0.8) * (L - abs(G))
            k = rng.integers(0, 8)
            st = LKSState(0, rng.uniform(0, 2 * math.pi), k * math.pi / 4.0,
                          rng.uniform(0, 2 * math.pi), 0.0, 0.3, L, Lam, G)
            p = lks_to_cartesian(st)
            # mu consistent with a pure-Kepler state: 2 S Lo^2 = mu^2
            mu_state = math.sqrt(2.0 * st.S) * (st.L / 2.0)
            try:
                el = cartesian_to_elements(p.x, p.X, mu_state)
            except DegenerateElements:
                continue
            assert abs(math.cos(el.argp)) < 1e-9
            hits += 1
        assert hits > 20


class TestDelaunayChecks:
    def test_sample_orbit(self, sample_lks):
        rep = delaunay_checks(sample_lks, MU)
        assert rep.max_residual < 1e-10

    def test_circular_equatorial(self):
        L, S = 2.0, 0.125
        st = LKSState(0, 0.7, 0.3, 0.2, 0, S, L, 0.0, L)
        rep = delaunay_checks(st, math.sqrt(2.0 * S) * (L / 2.0))
        assert abs(rep.residual_G) < 1e-12
        assert abs(rep.Go_e3 - L / 2.0) < 1e-12

    def test_radial_polar(self):
        L, S = 2.0, 0.125
        st = LKSState(0, 0.7, 0.3, 0.2, 0, S, L, -L, 0.0)
        rep = delaunay_checks(st, math.sqrt(2.0 * S) * (L / 2.0))
        assert abs(rep.residual_Lambda) < 1e-11

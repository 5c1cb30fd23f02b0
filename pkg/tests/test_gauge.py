"""Gauge family alpha(S) = k1 S^k2: presets, frequency, exact derivatives."""

import math

import pytest

from lks import GaugeAlpha, NonpositiveEnergy


def test_presets():
    assert GaugeAlpha.const().alpha(0.3) == 1.0
    g = GaugeAlpha.sqrt8s()
    assert g.alpha(2.0) == pytest.approx(4.0)
    m = GaugeAlpha.mu_over_s(mu=3.0)
    assert m.alpha(1.5) == pytest.approx(2.0)


def test_from_name():
    assert GaugeAlpha.from_name("sqrt8S").name == "sqrt8S"
    assert GaugeAlpha.from_name("mu_over_S", mu=2.0).k1 == 2.0
    with pytest.raises(ValueError):
        GaugeAlpha.from_name("nope")


def test_bracket_is_exponent():
    assert GaugeAlpha.const().bracket == 0.0
    assert GaugeAlpha.sqrt8s().bracket == 0.5
    assert GaugeAlpha.mu_over_s().bracket == -1.0


def test_omega_sqrt8s_exactly_one():
    g = GaugeAlpha.sqrt8s()
    for S in (1e-6, 0.05, 1.0, 42.0):
        assert g.omega(S) == 1.0


def test_omega_formula():
    for g in (GaugeAlpha.const(0.7), GaugeAlpha.mu_over_s(1.3)):
        for S in (0.04, 0.5, 2.0):
            assert g.omega(S) == pytest.approx(
                2.0 * math.sqrt(2.0 * S) / g.alpha(S), rel=1e-15)


def test_nonpositive_energy():
    for g in (GaugeAlpha.const(), GaugeAlpha.sqrt8s(), GaugeAlpha.mu_over_s()):
        with pytest.raises(NonpositiveEnergy):
            g.omega(0.0)
        with pytest.raises(NonpositiveEnergy):
            g.omega(-1.0)


def test_derivatives_match_finite_differences():
    h = 1e-7
    for g in (GaugeAlpha.const(2.0), GaugeAlpha.sqrt8s(), GaugeAlpha.mu_over_s(0.8)):
        for S in (0.3, 1.7):
            fd_a = (g.alpha(S + h) - g.alpha(S - h)) / (2.0 * h)
            assert g.dalpha_ds(S) == pytest.approx(fd_a, rel=1e-6, abs=1e-12)
            fd_w = (g.omega(S + h) - g.omega(S - h)) / (2.0 * h)
            assert g.domega_ds(S) == pytest.approx(fd_w, rel=1e-6, abs=1e-12)


def test_positive_scale_required():
    with pytest.raises(ValueError):
        GaugeAlpha(-1.0, 0.0)

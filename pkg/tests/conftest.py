"""Shared fixtures: the reference orbit and gauge presets."""

from __future__ import annotations

import math

import numpy as np
import pytest

from lks import (
    CartesianPhaseExt,
    GaugeAlpha,
    KeplerElements,
    cartesian_to_lks,
    elements_to_cartesian,
)

MU = 1.0

SAMPLE_ELEMENTS = KeplerElements(
    a=10.0, e=0.5, inc=math.radians(10.0), argp=math.radians(60.0),
    node=math.radians(10.0), f=math.radians(60.0))


def kepler_phase(el: KeplerElements, mu: float = MU,
                 x_star: float = 0.0) -> CartesianPhaseExt:
    """Extended phase point of a pure-Kepler state (X* from the energy)."""
    x, X = elements_to_cartesian(el, mu)
    S = mu / float(np.linalg.norm(x)) - float(X @ X) / 2.0
    return CartesianPhaseExt(x_star, x, S, X)


def random_elements(rng, a_range=(0.5, 3.0), e_range=(0.05, 0.9)) -> KeplerElements:
    return KeplerElements(
        a=rng.uniform(*a_range), e=rng.uniform(*e_range),
        inc=rng.uniform(0.15, math.pi - 0.15), argp=rng.uniform(0.0, 2 * math.pi),
        node=rng.uniform(0.0, 2 * math.pi), f=rng.uniform(0.0, 2 * math.pi))


@pytest.fixture
def sample_phase() -> CartesianPhaseExt:
    return kepler_phase(SAMPLE_ELEMENTS)


@pytest.fixture
def sample_lks(sample_phase):
    return cartesian_to_lks(sample_phase, GaugeAlpha.sqrt8s())


@pytest.fixture(params=["const", "sqrt8S", "mu_over_S"])
def any_gauge(request) -> GaugeAlpha:
    return GaugeAlpha.from_name(request.param, MU)


def angles_close(a: float, b: float, period: float = 2.0 * math.pi,
                 tol: float = 1e-10) -> bool:
    d = (a - b) % period
    return min(d, period - d) < tol


def sundman_time_of(st0, t: float, gauge: GaugeAlpha, mu: float = MU,
                    tol: float = 1e-13) -> float:
    """Invert the generalized Kepler equation x*(tau) = t by Newton.

    Exact on the closed-form side: dx*/dtau = dt/dtau = 4 r / alpha > 0, so
    the map is monotone and Newton from the mean-rate seed converges fast.
    """
    from lks import kepler_flow_lks, lks_to_cartesian, radius_lks

    alpha = gauge.alpha(st0.S)
    x0 = lks_to_cartesian(st0).x_star
    a = mu / (2.0 * st0.S)
    n = math.sqrt(mu / a ** 3)
    w = gauge.omega(st0.S)

    def residual(tau):
        st = kepler_flow_lks(st0, tau, gauge, mu)
        return lks_to_cartesian(st).x_star - t, radius_lks(st)

    # seed from the orbit-averaged rate dtau/dt = n/(2 omega); one radial
    # period (pi/omega in tau) advances x* by exactly one orbital period,
    # so [seed - pi/w, seed + pi/w] brackets the monotone root
    tau = (t - x0) * n / (2.0 * w)
    lo, hi = tau - math.pi / w, tau + math.pi / w
    for _ in range(200):
        err, r = residual(tau)
        if abs(err) < tol * max(1.0, abs(t)):
            return tau
        if err > 0.0:
            hi = tau
        else:
            lo = tau
        step = err * alpha / (4.0 * r)
        cand = tau - step
        tau = cand if lo < cand < hi else 0.5 * (lo + hi)
    raise AssertionError("time inversion did not converge")

"""Energy gauges alpha(S) = k1 * S**k2 for the regularized Kepler problem.

The positive function alpha of the energy-like momentum S shapes the
regularized Hamiltonian without altering the physical output. For the
power-law family the canonicity bracket [S/alpha * d(alpha)/dS] is exactly
the exponent k2, so time shifts and frequency derivatives are evaluated in
closed form, never by numerical differentiation.

Presets:
    const     alpha = k1            (k2 = 0, fixed length unit)
    sqrt8S    alpha = sqrt(8 S)     (k2 = 1/2, omega = 1, dimensionless time)
    mu_over_S alpha = mu / S        (k2 = -1, roughly twice the semi-axis)
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import NonpositiveEnergy

__all__ = ["GaugeAlpha", "GAUGE_NAMES"]

GAUGE_NAMES = ("const", "sqrt8S", "mu_over_S")


@dataclass(frozen=True)
class GaugeAlpha:
    """Power-law gauge alpha(S) = k1 * S**k2 with k1 > 0."""

    k1: float
    k2: float
    name: str = "custom"

    def __post_init__(self):
        if not self.k1 > 0.0:
            raise ValueError("gauge scale k1 must be positive")

    @staticmethod
    def const(k1: float = 1.0) -> "GaugeAlpha":
        return GaugeAlpha(k1, 0.0, "const")

    @staticmethod
    def sqrt8s() -> "GaugeAlpha":
        return GaugeAlpha(math.sqrt(8.0), 0.5, "sqrt8S")

    @staticmethod
    def mu_over_s(mu: float = 1.0) -> "GaugeAlpha":
        return GaugeAlpha(mu, -1.0, "mu_over_S")

    @staticmethod
    def from_name(name: str, mu: float = 1.0) -> "GaugeAlpha":
        if name == "const":
            return GaugeAlpha.const()
        if name == "sqrt8S":
            return GaugeAlpha.sqrt8s()
        if name == "mu_over_S":
            return GaugeAlpha.mu_over_s(mu)
        raise ValueError(f"unknown gauge {name!r}; expected one of {GAUGE_NAMES}")

    def _check(self, S: float) -> None:
        if not S > 0.0:
            raise NonpositiveEnergy(f"S = {S} must be positive")

    def alpha(self, S: float) -> float:
        self._check(S)
        return self.k1 * S ** self.k2

    def dalpha_ds(self, S: float) -> float:
        self._check(S)
        return self.k2 * self.alpha(S) / S

    @property
    def bracket(self) -> float:
        """The canonicity factor [S/alpha * d(alpha)/dS], exactly k2."""
        return self.k2

    def omega(self, S: float) -> float:
        """Oscillator frequency omega = 2 sqrt(2 S) / alpha(S); positive.

        Exactly 1 for the sqrt8S gauge.
        """
        self._check(S)
        if self.name == "sqrt8S":
            return 1.0
        return 2.0 * math.sqrt(2.0 * S) / self.alpha(S)

    def domega_ds(self, S: float) -> float:
        """d(omega)/dS = (1/2 - k2) omega / S, from the gauge exponents."""
        self._check(S)
        return (0.5 - self.k2) * self.omega(S) / S

"""Closed-form SRP, outage and transmission capacity for SOMA and TDMA.

All metrics here are interference limited: the noise power in ``RadioParams``
is ignored (a warning is raised when it is non-zero).

Two evaluation paths exist on purpose. :func:`srp`, :func:`outage` and
:func:`transmission_capacity` go through :func:`laplace_interference` at the
threshold-derived argument ``z*``; :func:`srp_closed_form` and
:func:`tc_closed_form` evaluate the expanded expressions built from the
``C`` terms directly.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Literal

from .network import (
    AccessScheme,
    DensityConfig,
    EffectiveDensities,
    RadioParams,
    Soma,
    Tdma,
    effective_densities,
)
from .propagation import data_power_fraction, radar_power_fraction
from .special import beta, incomplete_beta

Field = Literal["radar", "data"]


class DegenerateSplitWarning(UserWarning):
    """SOMA power split of 0 or 1 starves one of the two links."""


class NoiseIgnoredWarning(UserWarning):
    """A non-zero noise power was configured but the closed forms ignore it."""


@dataclass(frozen=True)
class MetricInputs:
    params: RadioParams
    scheme: AccessScheme
    eff: EffectiveDensities
    r0: float
    gamma_th: float = 0.1
    beta_th: float = 1.0

    def __post_init__(self):
        if not self.r0 > 0:
            raise ValueError("r0 must be positive")
        if self.gamma_th < 0 or self.beta_th < 0:
            raise ValueError("SINR thresholds must be non-negative")

    @classmethod
    def build(
        cls,
        params: RadioParams,
        scheme: AccessScheme,
        dens: DensityConfig,
        gamma_th: float = 0.1,
        beta_th: float = 1.0,
    ) -> "MetricInputs":
        """Inputs with effective densities derived from raw ones."""
        return cls(params, scheme, effective_densities(dens, scheme), dens.r0, gamma_th, beta_th)


def _warn_noise(params: RadioParams) -> None:
    if params.n0 > 0:
        warnings.warn(
            "n0 > 0 is ignored by the closed forms (interference-limited regime)",
            NoiseIgnoredWarning,
            stacklevel=3,
        )


def _beta_args(params: RadioParams) -> tuple[float, float]:
    a = params.delta_exponent
    return a, 1.0 - a


def c_term(s: float, params: RadioParams, r0: float) -> float:
    """``B(a, b) - B(1/(1 + s r0^-alpha_I); a, b)`` with a = 2/alpha_I, b = 1 - a.

    Computed as the upper tail ``B(t/(1+t); b, a)``, t = s r0^-alpha_I, which
    avoids cancellation when the incomplete beta argument is close to 1.
    """
    if s < 0:
        raise ValueError("s must be non-negative")
    a, b = _beta_args(params)
    t = s * r0 ** (-params.alpha_I)
    if t == 0.0:
        return 0.0
    if math.isinf(t):
        return beta(a, b)
    return incomplete_beta(t / (1.0 + t), b, a)


def a_term(z: float, fraction: float, params: RadioParams, r0: float) -> float:
    """A(z) for an interferer class transmitting ``fraction`` of the power."""
    if z < 0 or not 0.0 <= fraction <= 1.0:
        raise ValueError("need z >= 0 and fraction in [0, 1]")
    return c_term(z * fraction * params.k1, params, r0)


def _class_exponent(z: float, density: float, fraction: float, params: RadioParams, r0: float) -> float:
    # 2 pi lambda A(z) (z fraction K1)^(2/alpha_I) / alpha_I for one interferer class
    if density == 0.0 or fraction == 0.0 or z == 0.0:
        return 0.0
    s = z * fraction * params.k1
    return 2.0 * math.pi * density * c_term(s, params, r0) * s**params.delta_exponent / params.alpha_I


def interferer_classes(inputs: MetricInputs, field: Field) -> list[tuple[float, float]]:
    """(effective density, transmit power fraction) of each interferer class.

    SOMA receivers see both classes regardless of ``field``; TDMA radar
    receivers see only radars and TDMA data receivers only UAV-comms.
    """
    scheme, eff = inputs.scheme, inputs.eff
    if isinstance(scheme, Soma):
        return [(eff.lambda_d, scheme.phi), (eff.lambda_r, 1.0 - scheme.phi)]
    if field == "radar":
        return [(eff.lambda_r, 1.0)]
    if field == "data":
        return [(eff.lambda_d, 1.0)]
    raise ValueError(f"unknown interference field {field!r}")


def laplace_interference(z: float, inputs: MetricInputs, field: Field) -> float:
    """E[exp(-z I)] for the aggregate interference seen by ``field``'s receiver."""
    if z < 0:
        raise ValueError("z must be non-negative")
    total = sum(
        _class_exponent(z, density, fraction, inputs.params, inputs.r0)
        for density, fraction in interferer_classes(inputs, field)
    )
    return math.exp(-total)


def srp_laplace_argument(params: RadioParams, scheme: AccessScheme, gamma_th: float) -> float:
    """z* such that SRP = L_I(z*); infinite when no power goes to the radar."""
    fraction = radar_power_fraction(scheme)
    num = (4.0 * math.pi) ** 3 * params.f_c**2 * params.r_target ** (2.0 * params.alpha) * gamma_th
    den = fraction * params.p_tx * params.g_t * params.g_r * params.g_p * params.c**2 * params.sigma_bar
    return math.inf if den == 0.0 else num / den


def outage_laplace_argument(params: RadioParams, scheme: AccessScheme, beta_th: float) -> float:
    fraction = data_power_fraction(scheme)
    num = (4.0 * math.pi) ** 2 * params.f_c**2 * params.r_target**params.alpha * beta_th
    den = fraction * params.p_tx * params.g_t * params.g_r * params.c**2
    return math.inf if den == 0.0 else num / den


def srp(inputs: MetricInputs) -> float:
    """Successful ranging probability, Pr(radar SINR > gamma_th)."""
    _warn_noise(inputs.params)
    scheme = inputs.scheme
    if isinstance(scheme, Soma) and scheme.phi == 1.0:
        warnings.warn("SOMA with phi = 1 leaves no radar power; SRP = 0", DegenerateSplitWarning, stacklevel=2)
        return 0.0
    z = srp_laplace_argument(inputs.params, scheme, inputs.gamma_th)
    return laplace_interference(z, inputs, "radar")


def data_success(inputs: MetricInputs) -> float:
    """Pr(data SINR >= beta_th), evaluated directly rather than as 1 - outage."""
    _warn_noise(inputs.params)
    scheme = inputs.scheme
    if isinstance(scheme, Soma) and scheme.phi == 0.0:
        warnings.warn("SOMA with phi = 0 leaves no data power; outage = 1", DegenerateSplitWarning, stacklevel=3)
        return 0.0
    z = outage_laplace_argument(inputs.params, scheme, inputs.beta_th)
    return laplace_interference(z, inputs, "data")


def outage(inputs: MetricInputs) -> float:
    """Outage probability of the data link, Pr(data SINR < beta_th)."""
    return 1.0 - data_success(inputs)


def data_time_fraction(scheme: AccessScheme) -> float:
    return scheme.tau if isinstance(scheme, Tdma) else 1.0


def transmission_capacity(inputs: MetricInputs) -> float:
    """Transmission capacity in nats/(s Hz m^2)."""
    # the success probability is taken directly; 1 - outage cancels badly when it is tiny
    success = data_success(inputs)
    return data_time_fraction(inputs.scheme) * inputs.eff.lambda_d * math.log1p(inputs.beta_th) * success


# --- expanded closed forms -------------------------------------------------


def srp_reference(params: RadioParams, gamma_th: float) -> float:
    """4 pi G_rI R0^(2 alpha) gamma_th / (G_r G_p sigma_bar), shared by both schemes."""
    return (
        4.0 * math.pi * params.g_rI * params.r_target ** (2.0 * params.alpha) * gamma_th
        / (params.g_r * params.g_p * params.sigma_bar)
    )


def tc_reference(params: RadioParams, beta_th: float) -> float:
    """G_rI R0^alpha beta_th / G_r."""
    return params.g_rI * params.r_target**params.alpha * beta_th / params.g_r


def srp_exponent_terms(inputs: MetricInputs) -> tuple[float, float, float]:
    """(C1, C2, prefactor) of the SRP closed form.

    ``prefactor`` is 2 pi X^(2/alpha_I) / alpha_I so that, for SOMA,
    -ln SRP = prefactor ((phi/(1-phi))^(2/alpha_I) C1 lambda_d + C2 lambda_r).
    C1 is zero for TDMA.
    """
    params, r0 = inputs.params, inputs.r0
    x = srp_reference(params, inputs.gamma_th)
    c2 = c_term(x, params, r0)
    if isinstance(inputs.scheme, Soma):
        phi = inputs.scheme.phi
        c1 = c_term(phi / (1.0 - phi) * x, params, r0)
    else:
        c1 = 0.0
    prefactor = 2.0 * math.pi * x**params.delta_exponent / params.alpha_I
    return c1, c2, prefactor


def srp_closed_form(inputs: MetricInputs) -> float:
    """SRP from the expanded expression rather than through the Laplace transform."""
    scheme, eff, p = inputs.scheme, inputs.eff, inputs.params
    if isinstance(scheme, Soma):
        if scheme.phi == 1.0:
            return 0.0
        c1, c2, pre = srp_exponent_terms(inputs)
        ratio = (scheme.phi / (1.0 - scheme.phi)) ** p.delta_exponent
        return math.exp(-pre * (ratio * c1 * eff.lambda_d + c2 * eff.lambda_r))
    _, c2, pre = srp_exponent_terms(inputs)
    return math.exp(-pre * c2 * eff.lambda_r)


def c3_prime(params: RadioParams, r0: float, beta_th: float) -> float:
    """C3 (Y^(2/alpha_I) / alpha_I), the per-unit-density outage exponent / 2 pi."""
    y = tc_reference(params, beta_th)
    return c_term(y, params, r0) * y**params.delta_exponent / params.alpha_I


def c4_prime(params: RadioParams, r0: float, beta_th: float, phi: float) -> float:
    """C4 (Y^(2/alpha_I) / alpha_I); equals :func:`c3_prime` at phi = 0.5."""
    y = tc_reference(params, beta_th)
    return c_term((1.0 - phi) / phi * y, params, r0) * y**params.delta_exponent / params.alpha_I


def tc_closed_form(inputs: MetricInputs) -> float:
    """Transmission capacity from the expanded expression."""
    scheme, eff, p = inputs.scheme, inputs.eff, inputs.params
    rate = eff.lambda_d * math.log1p(inputs.beta_th)
    c3p = c3_prime(p, inputs.r0, inputs.beta_th)
    if isinstance(scheme, Soma):
        if scheme.phi == 0.0:
            return 0.0
        ratio = ((1.0 - scheme.phi) / scheme.phi) ** p.delta_exponent
        c4p = c4_prime(p, inputs.r0, inputs.beta_th, scheme.phi)
        return rate * math.exp(-2.0 * math.pi * (eff.lambda_d * c3p + ratio * eff.lambda_r * c4p))
    return scheme.tau * rate * math.exp(-2.0 * math.pi * eff.lambda_d * c3p)

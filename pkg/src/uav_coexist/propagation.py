"""Link-budget kernels for the radar echo, the data link and single interferers.

The kernels are plain arithmetic, so they accept numpy arrays for ``sigma``,
``h`` and ``r`` as well as scalars.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .network import AccessScheme, RadioParams, Soma


@dataclass(frozen=True)
class FadingDraw:
    h: float
    sigma: float

    def __post_init__(self):
        if self.h < 0 or self.sigma < 0:
            raise ValueError("fading and RCS draws must be non-negative")


def radar_power_fraction(scheme: AccessScheme) -> float:
    return 1.0 - scheme.phi if isinstance(scheme, Soma) else 1.0


def data_power_fraction(scheme: AccessScheme) -> float:
    return scheme.phi if isinstance(scheme, Soma) else 1.0


def radar_rx_power(params: RadioParams, scheme: AccessScheme, sigma):
    """Echo power at the radar receiver for an RCS realization ``sigma`` (W)."""
    gain = params.p_tx * params.g_t * params.g_r * params.g_p * params.c**2
    loss = (4.0 * math.pi) ** 3 * params.f_c**2 * params.r_target ** (2.0 * params.alpha)
    return radar_power_fraction(scheme) * gain * sigma / loss


def data_rx_power(params: RadioParams, scheme: AccessScheme, h):
    """Received data power at the typical user for fading ``h`` (W)."""
    gain = params.p_tx * params.g_t * params.g_r * params.c**2
    loss = (4.0 * math.pi) ** 2 * params.f_c**2 * params.r_target**params.alpha
    return data_power_fraction(scheme) * gain * h / loss


def interferer_power(params: RadioParams, power_fraction: float, r, h):
    """Power received from one interferer at distance ``r`` with fading ``h`` (W)."""
    if np.any(np.asarray(r) <= 0):
        raise ValueError("interferer distance must be positive")
    return power_fraction * params.k1 * h * np.power(r, -params.alpha_I)


def exponential(rng: np.random.Generator, mean: float, size=None):
    """Exponential variates by inversion, ``-mean * ln(1 - U)``."""
    return -mean * np.log1p(-rng.random(size))


def sample_fading(rng: np.random.Generator, params: RadioParams) -> FadingDraw:
    """One Rayleigh power gain (unit mean) and one Swerling-I RCS draw."""
    h = float(exponential(rng, 1.0))
    sigma = float(exponential(rng, params.sigma_bar))
    return FadingDraw(h=h, sigma=sigma)

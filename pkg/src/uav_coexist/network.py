"""Scenario parameters and the guard-zone density model.

All values are stored in linear units. The dB flavoured keys of the JSON
config are converted exactly once, in :func:`load_config`.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Union

SPEED_OF_LIGHT = 299_792_458.0


class ConfigError(ValueError):
    """Invalid scenario configuration."""

    def __init__(self, message: str, key: str | None = None, line: int | None = None):
        self.key = key
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


def db_to_linear(db: float) -> float:
    return 10.0 ** (db / 10.0)


def dbm_to_watts(dbm: float) -> float:
    return 10.0 ** ((dbm - 30.0) / 10.0)


def linear_to_db(x: float) -> float:
    return 10.0 * math.log10(x)


@dataclass(frozen=True)
class RadioParams:
    """RF constants of the coexistence scenario, linear units throughout.

    ``h_uav`` is carried as metadata only; none of the closed forms use it.
    ``n0`` is only consulted by the simulator.
    """

    p_tx: float = dbm_to_watts(20.0)
    g_t: float = db_to_linear(10.0)
    g_r: float = db_to_linear(10.0)
    g_rI: float = db_to_linear(-10.0)
    g_p: float = db_to_linear(10.0)
    f_c: float = 35e9
    alpha: float = 2.0
    alpha_I: float = 2.5
    sigma_bar: float = db_to_linear(30.0)
    r_target: float = 50.0
    h_uav: float = 50.0
    n0: float = 0.0
    c: float = field(default=SPEED_OF_LIGHT, init=False)

    def __post_init__(self):
        for name in ("p_tx", "g_t", "g_r", "g_rI", "g_p", "f_c", "sigma_bar", "r_target"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise ConfigError(f"{name} must be positive and finite, got {value!r}", key=name)
        if not self.alpha > 0:
            raise ConfigError(f"alpha must be positive, got {self.alpha!r}", key="alpha")
        if not self.alpha_I > 2:
            raise ConfigError(
                f"alpha_I must exceed 2 for the interference integral to converge, got {self.alpha_I!r}",
                key="alpha_I",
            )
        if self.n0 < 0:
            raise ConfigError(f"n0 must be non-negative, got {self.n0!r}", key="n0")

    @property
    def effective_area(self) -> float:
        """Effective aperture of the radar receiver, m^2."""
        return self.g_r * self.c**2 / (4.0 * math.pi * self.f_c**2)

    @property
    def k1(self) -> float:
        """Interference link constant p_tx g_t g_rI c^2 / ((4 pi)^2 f_c^2)."""
        return self.p_tx * self.g_t * self.g_rI * self.c**2 / ((4.0 * math.pi) ** 2 * self.f_c**2)

    @property
    def delta_exponent(self) -> float:
        """2 / alpha_I, the recurring exponent of the stochastic-geometry terms."""
        return 2.0 / self.alpha_I


@dataclass(frozen=True)
class Soma:
    """Spectrum overlay: the transmit power is split, ``phi`` goes to data."""

    phi: float = 0.5

    def __post_init__(self):
        if not 0.0 <= self.phi <= 1.0:
            raise ConfigError(f"phi must lie in [0, 1], got {self.phi!r}", key="phi")

    name = "soma"


@dataclass(frozen=True)
class Tdma:
    """Time division: a fraction ``tau`` of the frame carries data."""

    tau: float = 0.5

    def __post_init__(self):
        if not 0.0 <= self.tau <= 1.0:
            raise ConfigError(f"tau must lie in [0, 1], got {self.tau!r}", key="tau")

    name = "tdma"


AccessScheme = Union[Soma, Tdma]


@dataclass(frozen=True)
class DensityConfig:
    """Raw node densities (nodes/m^2), radar duty cycle and guard radius (m)."""

    lambda_d_raw: float = 0.01
    lambda_r_raw: float = 0.1
    delta: float = 0.1
    r0: float = 5.0

    def __post_init__(self):
        if self.lambda_d_raw < 0 or self.lambda_r_raw < 0:
            raise ConfigError("node densities must be non-negative")
        if not 0.0 < self.delta <= 1.0:
            raise ConfigError(f"duty cycle must lie in (0, 1], got {self.delta!r}", key="duty_cycle")
        if not self.r0 > 0:
            raise ConfigError(f"guard radius must be positive, got {self.r0!r}", key="r0_m")

    def active_radar_density(self, scheme: AccessScheme) -> float:
        """Density of transmitting radars before hard-core thinning."""
        if isinstance(scheme, Tdma):
            if scheme.tau >= 1.0:
                raise ConfigError("TDMA with tau = 1 leaves no radar time", key="tau")
            duty = self.delta / (1.0 - scheme.tau)
            if duty > 1.0 + 1e-12:
                raise ConfigError(
                    f"TDMA active fraction delta/(1 - tau) = {duty:.6g} exceeds 1", key="tau"
                )
            return duty * self.lambda_r_raw
        return self.delta * self.lambda_r_raw


@dataclass(frozen=True)
class EffectiveDensities:
    """HPPP densities standing in for the hard-core processes (nodes/m^2)."""

    lambda_d: float
    lambda_r: float
    lambda_r_active_raw: float = math.nan

    def __post_init__(self):
        if self.lambda_d < 0 or self.lambda_r < 0:
            raise ValueError("effective densities must be non-negative")


def effective_density(parent: float, r0: float) -> float:
    """Retained density of a Matern type-II thinning of an HPPP.

    ``(1 - exp(-parent pi r0^2)) / (pi r0^2)``.
    """
    if parent < 0:
        raise ValueError(f"density must be non-negative, got {parent!r}")
    area = math.pi * r0 * r0
    return -math.expm1(-parent * area) / area


def effective_densities(dens: DensityConfig, scheme: AccessScheme) -> EffectiveDensities:
    active = dens.active_radar_density(scheme)
    return EffectiveDensities(
        lambda_d=effective_density(dens.lambda_d_raw, dens.r0),
        lambda_r=effective_density(active, dens.r0),
        lambda_r_active_raw=active,
    )


def invert_effective_density(lambda_eff: float, r0: float) -> float:
    """Parent density whose hard-core thinning has density ``lambda_eff``.

    Raises ValueError when ``lambda_eff * pi * r0^2 >= 1``: no parent density
    reaches it.
    """
    if lambda_eff < 0:
        raise ValueError(f"density must be non-negative, got {lambda_eff!r}")
    area = math.pi * r0 * r0
    packing = lambda_eff * area
    if packing >= 1.0:
        raise ValueError(
            f"effective density {lambda_eff:.6g} is unreachable with r0 = {r0:g} m "
            f"(lambda pi r0^2 = {packing:.6g} >= 1)"
        )
    return -math.log1p(-packing) / area


def raw_radar_density(active_raw: float, delta: float, scheme: AccessScheme) -> float:
    """Map an active (pre-thinning) radar density back to the deployed density."""
    if isinstance(scheme, Tdma):
        return active_raw * (1.0 - scheme.tau) / delta
    return active_raw / delta


# --- JSON configuration ---------------------------------------------------

CONFIG_DEFAULTS: dict[str, Any] = {
    "p_tx_dbm": 20.0,
    "g_t_dbi": 10.0,
    "g_r_dbi": 10.0,
    "g_ri_dbi": -10.0,
    "g_p_dbi": 10.0,
    "f_c_hz": 35e9,
    "alpha": 2.0,
    "alpha_i": 2.5,
    "sigma_bar_dbsm": 30.0,
    "r_target_m": 50.0,
    "h_uav_m": 50.0,
    "n0_w": 0.0,
    "duty_cycle": 0.1,
    "lambda_d_raw": 0.01,
    "lambda_r_raw": 0.1,
    "r0_m": 5.0,
    "scheme": {"soma": {"phi": 0.5}},
}

_FIELD_KEYS = {
    "p_tx": "p_tx_dbm",
    "g_t": "g_t_dbi",
    "g_r": "g_r_dbi",
    "g_rI": "g_ri_dbi",
    "g_p": "g_p_dbi",
    "f_c": "f_c_hz",
    "alpha": "alpha",
    "alpha_I": "alpha_i",
    "sigma_bar": "sigma_bar_dbsm",
    "r_target": "r_target_m",
    "h_uav": "h_uav_m",
    "n0": "n0_w",
    "delta": "duty_cycle",
    "lambda_d_raw": "lambda_d_raw",
    "lambda_r_raw": "lambda_r_raw",
    "r0": "r0_m",
    "phi": "scheme",
    "tau": "scheme",
}


@dataclass(frozen=True)
class Scenario:
    """A fully resolved configuration."""

    params: RadioParams
    dens: DensityConfig
    scheme: AccessScheme
    raw: dict = field(default_factory=dict, compare=False)

    def to_json_dict(self) -> dict:
        return dict(self.raw)


def _key_line(text: str | None, key: str | None) -> int | None:
    if not text or not key:
        return None
    needle = f'"{key}"'
    for lineno, line in enumerate(text.splitlines(), start=1):
        if needle in line:
            return lineno
    return None


def _parse_scheme(value: Any) -> AccessScheme:
    if not isinstance(value, dict) or len(value) != 1:
        raise ConfigError('scheme must be {"soma": {"phi": ...}} or {"tdma": {"tau": ...}}', key="scheme")
    (name, body), = value.items()
    if not isinstance(body, dict):
        raise ConfigError(f"scheme body for {name!r} must be an object", key="scheme")
    if name == "soma":
        extra = set(body) - {"phi"}
        if extra:
            raise ConfigError(f"unknown SOMA keys {sorted(extra)}", key="scheme")
        return Soma(float(body.get("phi", 0.5)))
    if name == "tdma":
        extra = set(body) - {"tau"}
        if extra:
            raise ConfigError(f"unknown TDMA keys {sorted(extra)}", key="scheme")
        return Tdma(float(body.get("tau", 0.5)))
    raise ConfigError(f"unknown access scheme {name!r}", key="scheme")


def scenario_from_dict(data: dict, text: str | None = None) -> Scenario:
    """Build a :class:`Scenario` from a config mapping; missing keys take defaults."""
    if not isinstance(data, dict):
        raise ConfigError("config must be a JSON object", line=1 if text else None)
    unknown = set(data) - set(CONFIG_DEFAULTS)
    if unknown:
        key = sorted(unknown)[0]
        raise ConfigError(f"unknown config key {key!r}", key=key, line=_key_line(text, key))
    merged = {**CONFIG_DEFAULTS, **data}
    for key, value in merged.items():
        if key == "scheme":
            continue
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ConfigError(f"{key} must be a number, got {value!r}", key=key, line=_key_line(text, key))
    try:
        params = RadioParams(
            p_tx=dbm_to_watts(merged["p_tx_dbm"]),
            g_t=db_to_linear(merged["g_t_dbi"]),
            g_r=db_to_linear(merged["g_r_dbi"]),
            g_rI=db_to_linear(merged["g_ri_dbi"]),
            g_p=db_to_linear(merged["g_p_dbi"]),
            f_c=float(merged["f_c_hz"]),
            alpha=float(merged["alpha"]),
            alpha_I=float(merged["alpha_i"]),
            sigma_bar=db_to_linear(merged["sigma_bar_dbsm"]),
            r_target=float(merged["r_target_m"]),
            h_uav=float(merged["h_uav_m"]),
            n0=float(merged["n0_w"]),
        )
        dens = DensityConfig(
            lambda_d_raw=float(merged["lambda_d_raw"]),
            lambda_r_raw=float(merged["lambda_r_raw"]),
            delta=float(merged["duty_cycle"]),
            r0=float(merged["r0_m"]),
        )
        scheme = _parse_scheme(merged["scheme"])
        dens.active_radar_density(scheme)
    except ConfigError as exc:
        key = _FIELD_KEYS.get(exc.key, exc.key)
        if key is None and "densities" in str(exc):
            key = "lambda_d_raw" if merged["lambda_d_raw"] < 0 else "lambda_r_raw"
        raise ConfigError(str(exc), key=key, line=_key_line(text, key)) from None
    return Scenario(params, dens, scheme, raw=merged)


def load_config(path: str | Path | None = None) -> Scenario:
    """Read a JSON scenario file. ``None`` yields the default scenario."""
    if path is None:
        return scenario_from_dict({})
    text = Path(path).read_text()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"malformed JSON: {exc.msg}", line=exc.lineno) from None
    return scenario_from_dict(data, text)


def scenario_to_dict(params: RadioParams, dens: DensityConfig, scheme: AccessScheme) -> dict:
    """Inverse of :func:`scenario_from_dict` (dB keys re-derived from linear values)."""
    scheme_obj = {"soma": {"phi": scheme.phi}} if isinstance(scheme, Soma) else {"tdma": {"tau": scheme.tau}}
    return {
        "p_tx_dbm": linear_to_db(params.p_tx) + 30.0,
        "g_t_dbi": linear_to_db(params.g_t),
        "g_r_dbi": linear_to_db(params.g_r),
        "g_ri_dbi": linear_to_db(params.g_rI),
        "g_p_dbi": linear_to_db(params.g_p),
        "f_c_hz": params.f_c,
        "alpha": params.alpha,
        "alpha_i": params.alpha_I,
        "sigma_bar_dbsm": linear_to_db(params.sigma_bar),
        "r_target_m": params.r_target,
        "h_uav_m": params.h_uav,
        "n0_w": params.n0,
        "duty_cycle": dens.delta,
        "lambda_d_raw": dens.lambda_d_raw,
        "lambda_r_raw": dens.lambda_r_raw,
        "r0_m": dens.r0,
        "scheme": scheme_obj,
    }

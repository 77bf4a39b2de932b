"""Sweep evaluation, figure presets and CSV / JSON-lines emission."""

from __future__ import annotations

import csv
import io
import json
import math
import warnings
from dataclasses import dataclass, field, replace
from typing import Iterable, Sequence

import numpy as np

from . import analytic
from .analytic import MetricInputs
from .montecarlo import SimConfig, simulate_outage, simulate_outage_curve, simulate_srp, simulate_srp_curve
from .network import CONFIG_DEFAULTS, ConfigError, Scenario, Soma, scenario_from_dict

SWEEP_VARIABLES = ("gamma_th_db", "beta_th_db", "phi", "tau", "lambda_d_raw", "lambda_r_raw", "r0_m")
METRICS = ("srp", "outage", "tc")
METRIC_COLUMN = {"srp": "srp", "outage": "outage", "tc": "tc_nats"}


def db(x: float) -> float:
    return 10.0 * math.log10(x) if x > 0 else -math.inf


def undb(x: float) -> float:
    return 10.0 ** (x / 10.0)


@dataclass(frozen=True)
class Settings:
    """A scenario plus both schemes' split factors and the two SINR thresholds.

    ``config`` holds the network keys of the JSON config (without ``scheme``);
    thresholds are linear.
    """

    config: dict = field(default_factory=lambda: {k: v for k, v in CONFIG_DEFAULTS.items() if k != "scheme"})
    phi: float = 0.5
    tau: float = 0.5
    gamma_th: float = 0.1
    beta_th: float = 1.0

    @classmethod
    def from_scenario(cls, scenario: Scenario, **kw) -> "Settings":
        config = {k: v for k, v in scenario.raw.items() if k != "scheme"}
        scheme = scenario.scheme
        extra = {"phi": scheme.phi} if isinstance(scheme, Soma) else {"tau": scheme.tau}
        return cls(config=config, **{**extra, **kw})

    def set(self, name: str, value: float) -> "Settings":
        """Copy with one variable changed; dB-named thresholds are converted."""
        if name == "gamma_th_db":
            return replace(self, gamma_th=undb(value))
        if name == "beta_th_db":
            return replace(self, beta_th=undb(value))
        if name in ("phi", "tau", "gamma_th", "beta_th"):
            return replace(self, **{name: float(value)})
        if name not in self.config:
            raise ConfigError(f"unknown setting {name!r}")
        return replace(self, config={**self.config, name: float(value)})

    def get(self, name: str) -> float:
        if name == "gamma_th_db":
            return db(self.gamma_th)
        if name == "beta_th_db":
            return db(self.beta_th)
        if name in ("phi", "tau", "gamma_th", "beta_th"):
            return getattr(self, name)
        return self.config[name]

    def scenario(self, scheme: str) -> Scenario:
        body = {"soma": {"phi": self.phi}} if scheme == "soma" else {"tdma": {"tau": self.tau}}
        return scenario_from_dict({**self.config, "scheme": body})

    def inputs(self, scheme: str) -> MetricInputs:
        sc = self.scenario(scheme)
        return MetricInputs.build(sc.params, sc.scheme, sc.dens, self.gamma_th, self.beta_th)

    def to_json_dict(self) -> dict:
        return {
            **self.config,
            "phi": self.phi,
            "tau": self.tau,
            "gamma_th_db": db(self.gamma_th),
            "beta_th_db": db(self.beta_th),
        }


@dataclass(frozen=True)
class SweepSpec:
    variable: str
    start: float
    stop: float
    steps: int
    metrics: tuple[str, ...] = ("srp",)
    simulate: bool = False

    def __post_init__(self):
        if self.variable not in SWEEP_VARIABLES:
            raise ConfigError(f"cannot sweep {self.variable!r}; choose from {', '.join(SWEEP_VARIABLES)}")
        if self.steps < 2:
            raise ConfigError("a sweep needs at least 2 steps")
        if not self.start < self.stop:
            raise ConfigError("sweep start must be below stop")
        bad = set(self.metrics) - set(METRICS)
        if bad:
            raise ConfigError(f"unknown metrics {sorted(bad)}")

    def values(self) -> np.ndarray:
        return np.linspace(self.start, self.stop, self.steps)


@dataclass(frozen=True)
class MetricPoint:
    coordinate: dict
    metric: str
    scheme: str
    analytic: float
    simulated: float | None = None
    std_err: float | None = None

    def to_dict(self) -> dict:
        out = {**self.coordinate, "metric": METRIC_COLUMN[self.metric], "scheme": self.scheme, "analytic": self.analytic}
        if self.simulated is not None:
            out["simulated"] = self.simulated
            out["std_err"] = self.std_err
        return out


@dataclass(frozen=True)
class Preset:
    base: dict
    sweep: SweepSpec
    schemes: tuple[str, ...] = ("soma", "tdma")
    group: str | None = None
    group_values: tuple[float, ...] = ()


_CASE1 = {"lambda_d_raw": 0.01, "lambda_r_raw": 0.1, "phi": 0.5, "tau": 0.5}
_CASE2 = {"lambda_d_raw": 0.00025, "lambda_r_raw": 0.005, "r0_m": 5.0, "phi": 0.5, "tau": 0.5}
_DENSITY_STUDY = {"r0_m": 5.0, "beta_th_db": 0.0, "gamma_th_db": -10.0, "phi": 0.5, "tau": 0.5}

PRESETS: dict[str, Preset] = {
    "fig3a": Preset(_CASE1, SweepSpec("gamma_th_db", -20.0, 0.0, 11, ("srp",)), group="r0_m", group_values=(5.0, 15.0, 25.0)),
    "fig3b": Preset(_CASE1, SweepSpec("beta_th_db", -10.0, 10.0, 11, ("outage", "tc")), group="r0_m", group_values=(5.0, 15.0, 25.0)),
    "fig4a": Preset(_CASE2, SweepSpec("gamma_th_db", -20.0, 0.0, 11, ("srp",))),
    "fig4b": Preset(_CASE2, SweepSpec("beta_th_db", -10.0, 10.0, 11, ("outage", "tc"))),
    "fig5a": Preset(
        {"lambda_d_raw": 0.01, "lambda_r_raw": 0.1, "beta_th_db": -5.0, "gamma_th_db": -10.0},
        SweepSpec("phi", 0.0, 1.0, 21, ("srp", "tc")),
        schemes=("soma",),
    ),
    "fig5b": Preset(
        {"lambda_d_raw": 0.01, "lambda_r_raw": 0.1, "beta_th_db": -5.0, "gamma_th_db": -10.0},
        SweepSpec("tau", 0.0, 0.9, 19, ("srp", "tc")),
        schemes=("tdma",),
    ),
    # group = lambda_d_raw / (duty_cycle * lambda_r_raw), active radar density held fixed
    "fig5r": Preset(
        {"lambda_r_raw": 0.1, "gamma_th_db": -10.0},
        SweepSpec("phi", 0.0, 1.0, 21, ("srp",)),
        schemes=("soma",),
        group="ratio",
        group_values=(0.5, 1.0, 2.0),
    ),
    "fig6": Preset({**_DENSITY_STUDY, "lambda_r_raw": 0.01}, SweepSpec("lambda_d_raw", 0.0005, 0.03, 60, ("srp", "tc"))),
    "fig7": Preset({**_DENSITY_STUDY, "lambda_d_raw": 0.01}, SweepSpec("lambda_r_raw", 0.005, 0.2, 40, ("srp", "tc"))),
}


def apply(settings: Settings, overrides: dict) -> Settings:
    for name, value in overrides.items():
        settings = settings.set(name, value)
    return settings


def _apply_group(settings: Settings, group: str | None, value: float) -> Settings:
    if group is None:
        return settings
    if group == "ratio":
        active = settings.config["duty_cycle"] * settings.config["lambda_r_raw"]
        return settings.set("lambda_d_raw", value * active)
    return settings.set(group, value)


def analytic_value(inputs: MetricInputs, metric: str) -> float:
    if metric == "srp":
        return analytic.srp(inputs)
    if metric == "outage":
        return analytic.outage(inputs)
    if metric == "tc":
        return analytic.transmission_capacity(inputs)
    raise ConfigError(f"unknown metric {metric!r}")


def _tc_from_outage(inputs: MetricInputs, out_mean: float, out_se: float) -> tuple[float, float]:
    scale = analytic.data_time_fraction(inputs.scheme) * inputs.eff.lambda_d * math.log1p(inputs.beta_th)
    return scale * (1.0 - out_mean), scale * out_se


def _simulate_points(settings_list: Sequence[Settings], scheme: str, metric: str, variable: str,
                     sim: SimConfig) -> list[tuple[float, float]]:
    threshold_sweep = variable == ("gamma_th_db" if metric == "srp" else "beta_th_db")
    if threshold_sweep:
        # one set of draws serves every threshold
        inputs0 = settings_list[0].inputs(scheme)
        if metric == "srp":
            ests = simulate_srp_curve(inputs0, sim, [s.gamma_th for s in settings_list])
            return [(e.mean, e.std_err) for e in ests]
        ests = simulate_outage_curve(inputs0, sim, [s.beta_th for s in settings_list])
        if metric == "outage":
            return [(e.mean, e.std_err) for e in ests]
        return [_tc_from_outage(s.inputs(scheme), e.mean, e.std_err) for s, e in zip(settings_list, ests)]
    out = []
    for s in settings_list:
        inputs = s.inputs(scheme)
        if metric == "srp":
            e = simulate_srp(inputs, sim)
            out.append((e.mean, e.std_err))
        else:
            e = simulate_outage(inputs, sim)
            out.append((e.mean, e.std_err) if metric == "outage" else _tc_from_outage(inputs, e.mean, e.std_err))
    return out


def run_sweep(
    settings: Settings,
    spec: SweepSpec,
    schemes: Iterable[str] = ("soma", "tdma"),
    group: str | None = None,
    group_values: Sequence[float] = (),
    sim: SimConfig | None = None,
) -> tuple[list[str], list[dict]]:
    """Evaluate a sweep; returns (column names, rows) in sweep order."""
    schemes = tuple(schemes)
    groups = list(group_values) if group else [None]
    columns = ([group] if group else []) + [spec.variable]
    for metric in spec.metrics:
        for scheme in schemes:
            col = f"{METRIC_COLUMN[metric]}_{scheme}"
            columns.append(col)
            if spec.simulate:
                columns += [f"{col}_sim", f"{col}_se"]
    rows: list[dict] = []
    sim = sim or SimConfig()
    for gv in groups:
        base = _apply_group(settings, group, gv) if group else settings
        points = [base.set(spec.variable, float(v)) for v in spec.values()]
        block = [({group: gv} if group else {}) | {spec.variable: float(v)} for v in spec.values()]
        for metric in spec.metrics:
            for scheme in schemes:
                col = f"{METRIC_COLUMN[metric]}_{scheme}"
                with warnings.catch_warnings():
                    warnings.simplefilter("ignore", analytic.DegenerateSplitWarning)
                    for row, s in zip(block, points):
                        row[col] = analytic_value(s.inputs(scheme), metric)
                    if spec.simulate:
                        for row, (m, se) in zip(block, _simulate_points(points, scheme, metric, spec.variable, sim)):
                            row[f"{col}_sim"] = m
                            row[f"{col}_se"] = se
        rows.extend(block)
    return columns, rows


def rows_to_points(rows: list[dict], columns: list[str], coordinate_columns: int) -> list[MetricPoint]:
    """Long-form records of a wide sweep table."""
    coords = columns[:coordinate_columns]
    points = []
    for row in rows:
        coordinate = {c: row[c] for c in coords}
        for col in columns[coordinate_columns:]:
            if col.endswith(("_sim", "_se")):
                continue
            name, scheme = col.rsplit("_", 1)
            metric = {v: k for k, v in METRIC_COLUMN.items()}[name]
            points.append(
                MetricPoint(coordinate, metric, scheme, row[col], row.get(f"{col}_sim"), row.get(f"{col}_se"))
            )
    return points


def format_csv(columns: list[str], rows: list[dict], header: dict) -> str:
    """CSV text with a ``#``-prefixed JSON line describing the resolved run."""
    buf = io.StringIO()
    buf.write("# " + json.dumps(header, sort_keys=True) + "\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([repr(float(row[c])) for c in columns])
    return buf.getvalue()


def format_jsonl(records: Iterable[dict]) -> str:
    return "".join(json.dumps(r) + "\n" for r in records)

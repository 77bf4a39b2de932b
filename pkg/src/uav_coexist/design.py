"""Network design queries on top of the closed forms.

Maximum densities under an SRP target, the smallest guard radius meeting an
SRP target, the TC-optimal UAV-comm density, and the SOMA/TDMA comparison.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from scipy.optimize import bisect

from . import analytic
from .analytic import MetricInputs
from .network import (
    AccessScheme,
    DensityConfig,
    EffectiveDensities,
    RadioParams,
    Soma,
    Tdma,
    invert_effective_density,
    raw_radar_density,
)


class InfeasibleError(ValueError):
    """The requested design target cannot be met."""


@dataclass
class DesignReport:
    quantity: str
    values: dict[str, float | None]
    units: str
    residual: float
    iterations: int = 0
    bracket: tuple[float, float] | None = None
    notes: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "quantity": self.quantity,
            "values": self.values,
            "units": self.units,
            "residual": self.residual,
            "iterations": self.iterations,
            "bracket": list(self.bracket) if self.bracket else None,
            "notes": self.notes,
        }


def _check_target(target: float) -> None:
    if not 0.0 < target <= 1.0:
        raise ValueError(f"target probability must lie in (0, 1], got {target!r}")


def _srp_budget(target: float, params: RadioParams, gamma_th: float) -> float:
    # right-hand side of the density inequality: -ln(target) alpha_I / (2 pi X^(2/alpha_I))
    x = analytic.srp_reference(params, gamma_th)
    return -math.log(target) * params.alpha_I / (2.0 * math.pi * x**params.delta_exponent)


def _try_invert(lam: float, r0: float) -> float | None:
    try:
        return invert_effective_density(lam, r0)
    except ValueError:
        return None


def max_density_srp_soma(
    target: float,
    gamma_th: float,
    phi: float,
    params: RadioParams,
    r0: float,
    ratio: float = 1.0,
    delta: float | None = None,
) -> DesignReport:
    """Largest effective densities with lambda_d = ratio * lambda_r meeting an SRP target.

    ``ratio = 1`` is the equal-density case; other ratios generalize the same
    linear budget.
    """
    _check_target(target)
    if not ratio > 0:
        raise ValueError("ratio must be positive")
    if phi >= 1.0:
        raise InfeasibleError("SOMA with phi = 1 has SRP identically 0")
    scheme = Soma(phi)
    probe = MetricInputs(params, scheme, EffectiveDensities(0.0, 0.0), r0, gamma_th)
    c1, c2, _ = analytic.srp_exponent_terms(probe)
    weight = (phi / (1.0 - phi)) ** params.delta_exponent * c1
    budget = _srp_budget(target, params, gamma_th)
    lam_r = budget / (weight * ratio + c2)
    lam_d = ratio * lam_r
    solved = MetricInputs(params, scheme, EffectiveDensities(lam_d, lam_r), r0, gamma_th)
    values: dict[str, float | None] = {"lambda_d": lam_d, "lambda_r": lam_r}
    values["lambda_d_raw"] = _try_invert(lam_d, r0)
    active = _try_invert(lam_r, r0)
    values["lambda_r_active_raw"] = active
    if delta is not None and active is not None:
        values["lambda_r_raw"] = raw_radar_density(active, delta, scheme)
    report = DesignReport(
        "max_density_srp_soma", values, "nodes/m^2", analytic.srp(solved) - target
    )
    if values["lambda_d_raw"] is None or active is None:
        report.notes.append("effective density beyond the hard-core packing bound; no raw density reaches it")
    return report


def max_density_srp_tdma(
    target: float,
    gamma_th: float,
    params: RadioParams,
    r0: float,
    tau: float = 0.5,
    delta: float | None = None,
) -> DesignReport:
    """Largest effective radar density meeting an SRP target under TDMA."""
    _check_target(target)
    scheme = Tdma(tau)
    probe = MetricInputs(params, scheme, EffectiveDensities(0.0, 0.0), r0, gamma_th)
    _, c2, _ = analytic.srp_exponent_terms(probe)
    lam_r = _srp_budget(target, params, gamma_th) / c2
    solved = MetricInputs(params, scheme, EffectiveDensities(0.0, lam_r), r0, gamma_th)
    active = _try_invert(lam_r, r0)
    values: dict[str, float | None] = {"lambda_r": lam_r, "lambda_r_active_raw": active}
    if delta is not None and active is not None:
        values["lambda_r_raw"] = raw_radar_density(active, delta, scheme)
    report = DesignReport("max_density_srp_tdma", values, "nodes/m^2", analytic.srp(solved) - target)
    if active is None:
        report.notes.append("effective density beyond the hard-core packing bound; no raw density reaches it")
    return report


def min_guard_radius(
    scheme: AccessScheme,
    target: float,
    gamma_th: float,
    dens: DensityConfig,
    params: RadioParams,
    r_lo: float = 1e-3,
    r_hi: float = 1e6,
    xtol: float = 1e-9,
) -> DesignReport:
    """Smallest guard radius whose SRP reaches ``target``.

    The raw densities of ``dens`` are kept; its ``r0`` is ignored. Effective
    densities are recomputed at every candidate radius. SRP is
    non-decreasing in r0, so plain bisection applies.
    """
    _check_target(target)
    positive = dens.lambda_r_raw > 0 or (isinstance(scheme, Soma) and dens.lambda_d_raw > 0)
    if target >= 1.0 and positive:
        raise InfeasibleError("SRP < 1 at every finite guard radius when interferers exist")

    def excess(r0: float) -> float:
        trial = DensityConfig(dens.lambda_d_raw, dens.lambda_r_raw, dens.delta, r0)
        return analytic.srp(MetricInputs.build(params, scheme, trial, gamma_th)) - target

    hi = excess(r_hi)
    if hi < 0:
        raise InfeasibleError(
            f"target SRP {target:g} unreachable even with r0 = {r_hi:g} m (SRP = {hi + target:.6g})"
        )
    lo = excess(r_lo)
    if lo >= 0:
        return DesignReport("min_guard_radius", {"r0": r_lo}, "m", lo, 0, (r_lo, r_hi),
                            ["target already met at the lower bracket end"])
    root, info = bisect(excess, r_lo, r_hi, xtol=xtol, rtol=4 * 2.220446049250313e-16,
                        maxiter=200, full_output=True)
    return DesignReport("min_guard_radius", {"r0": root}, "m", excess(root), info.iterations, (r_lo, r_hi))


def optimal_comm_density(
    beta_th: float, params: RadioParams, r0: float, scheme: AccessScheme | None = None
) -> DesignReport:
    """UAV-comm density maximizing TC, 1/(2 pi C3').

    The optimum does not depend on the access scheme; ``scheme`` is accepted
    for reporting only.
    """
    c3p = analytic.c3_prime(params, r0, beta_th)
    lam = 1.0 / (2.0 * math.pi * c3p)
    raw = _try_invert(lam, r0)
    # stationarity residual of d/d(lambda) [lambda exp(-2 pi lambda C3')]
    residual = 1.0 - 2.0 * math.pi * lam * c3p
    report = DesignReport("optimal_comm_density", {"lambda_d": lam, "lambda_d_raw": raw}, "nodes/m^2", residual)
    if scheme is not None:
        report.notes.append(f"scheme={scheme.name}")
    if raw is None:
        report.notes.append("optimal effective density is unreachable by any raw density")
    return report


@dataclass(frozen=True)
class SchemeComparison:
    srp_soma: float
    srp_tdma: float
    tc_soma: float
    tc_tdma: float
    outage_soma: float
    outage_tdma: float
    case1_holds: bool
    case2_holds: bool
    prop5_condition: bool | None


def compare_schemes(
    params: RadioParams,
    dens: DensityConfig,
    phi: float = 0.5,
    tau: float = 0.5,
    gamma_th: float = 0.1,
    beta_th: float = 1.0,
) -> SchemeComparison:
    """SRP, outage and TC of both schemes on the same deployment.

    ``prop5_condition`` (radar-only outage below 1/2) is only evaluated at
    phi = tau = 0.5 and is ``None`` elsewhere.
    """
    soma = MetricInputs.build(params, Soma(phi), dens, gamma_th, beta_th)
    tdma = MetricInputs.build(params, Tdma(tau), dens, gamma_th, beta_th)
    active = dens.active_radar_density(Soma(phi))
    case1 = dens.lambda_d_raw > 0 and math.isclose(dens.lambda_d_raw, active, rel_tol=1e-12)
    case2 = dens.lambda_d_raw < active and not case1
    prop5 = None
    if phi == 0.5 and tau == 0.5:
        c3p = analytic.c3_prime(params, dens.r0, beta_th)
        prop5 = -math.expm1(-2.0 * math.pi * soma.eff.lambda_r * c3p) < 0.5
    return SchemeComparison(
        srp_soma=analytic.srp(soma),
        srp_tdma=analytic.srp(tdma),
        tc_soma=analytic.transmission_capacity(soma),
        tc_tdma=analytic.transmission_capacity(tdma),
        outage_soma=analytic.outage(soma),
        outage_tdma=analytic.outage(tdma),
        case1_holds=case1,
        case2_holds=case2,
        prop5_condition=prop5,
    )

"""Command-line front end.

    uav-coexist eval   [--config FILE] [--preset NAME | --sweep VAR START STOP STEPS] ...
    uav-coexist solve  SOLVER [--config FILE] [--target P] ...

Exit codes: 0 success, 1 configuration error, 2 infeasible design target,
3 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import warnings
from dataclasses import asdict

from . import design
from .analytic import DegenerateSplitWarning
from .harness import (
    METRIC_COLUMN,
    PRESETS,
    SWEEP_VARIABLES,
    Settings,
    SweepSpec,
    analytic_value,
    apply,
    format_csv,
    format_jsonl,
    rows_to_points,
    run_sweep,
)
from .montecarlo import SimConfig, simulate_outage, simulate_srp
from .network import ConfigError, Soma, Tdma, load_config

EXIT_CONFIG = 1
EXIT_INFEASIBLE = 2
EXIT_NUMERIC = 3

SOLVERS = ("max-density-soma", "max-density-tdma", "min-guard-radius", "optimal-comm-density", "compare")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def _threshold_args(p: argparse.ArgumentParser) -> None:
    g = p.add_mutually_exclusive_group()
    g.add_argument("--gamma-th-db", type=float, help="radar SINR threshold, dB (default -10)")
    g.add_argument("--gamma-th", type=float, help="radar SINR threshold, linear")
    g = p.add_mutually_exclusive_group()
    g.add_argument("--beta-th-db", type=float, help="data SINR threshold, dB (default 0)")
    g.add_argument("--beta-th", type=float, help="data SINR threshold, linear")


def _scenario_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="JSON scenario file (defaults: Table III values)")
    p.add_argument("--preset", choices=sorted(PRESETS), help="figure preset")
    p.add_argument("--phi", type=float, help="SOMA power split to data")
    p.add_argument("--tau", type=float, help="TDMA time share of data")
    p.add_argument("--lambda-d-raw", type=float, help="UAV-comm density, nodes/m^2")
    p.add_argument("--lambda-r-raw", type=float, help="UAV-radar density, nodes/m^2")
    p.add_argument("--duty-cycle", type=float, help="radar duty cycle")
    p.add_argument("--r0-m", type=float, help="guard radius, m")
    _threshold_args(p)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="uav-coexist", description="UAV radar/communication coexistence metrics")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    ev = sub.add_parser("eval", help="evaluate metrics at a point or along a sweep")
    _scenario_args(ev)
    ev.add_argument("--metric", choices=("srp", "outage", "tc", "all"), default="all")
    ev.add_argument("--scheme", choices=("soma", "tdma", "both"), default="both")
    ev.add_argument("--sweep", nargs=4, metavar=("VAR", "START", "STOP", "STEPS"),
                    help=f"sweep one of {', '.join(SWEEP_VARIABLES)}")
    ev.add_argument("--simulate", action="store_true", help="add Monte Carlo estimates")
    ev.add_argument("--trials", type=int, default=100_000)
    ev.add_argument("--seed", type=int, default=0)
    ev.add_argument("--r-max", type=float, default=SimConfig.r_max, help="simulation truncation radius, m")
    ev.add_argument("--workers", type=int, default=1)
    ev.add_argument("--format", choices=("json", "csv"), help="json lines (point default) or csv (sweep default)")
    ev.add_argument("--output", "-o", help="write to file instead of stdout")

    so = sub.add_parser("solve", help="run a design solver, print a JSON report")
    so.add_argument("solver", choices=SOLVERS)
    _scenario_args(so)
    so.add_argument("--target", type=float, help="target SRP")
    so.add_argument("--ratio", type=float, default=1.0, help="lambda_d : lambda_r for max-density-soma")
    so.add_argument("--scheme", choices=("soma", "tdma"), help="scheme for min-guard-radius")
    return parser


def resolve_settings(args: argparse.Namespace) -> Settings:
    settings = Settings.from_scenario(load_config(args.config))
    if args.preset:
        settings = apply(settings, PRESETS[args.preset].base)
    overrides = {
        "phi": args.phi,
        "tau": args.tau,
        "lambda_d_raw": args.lambda_d_raw,
        "lambda_r_raw": args.lambda_r_raw,
        "duty_cycle": args.duty_cycle,
        "r0_m": args.r0_m,
        "gamma_th_db": args.gamma_th_db,
        "gamma_th": args.gamma_th,
        "beta_th_db": args.beta_th_db,
        "beta_th": args.beta_th,
    }
    settings = apply(settings, {k: v for k, v in overrides.items() if v is not None})
    # validate eagerly so errors surface as config errors
    settings.scenario("soma")
    return settings


def _emit(text: str, output: str | None) -> None:
    if output:
        with open(output, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _schemes(choice: str) -> tuple[str, ...]:
    return ("soma", "tdma") if choice == "both" else (choice,)


def _metrics(choice: str) -> tuple[str, ...]:
    return ("srp", "outage", "tc") if choice == "all" else (choice,)


def _point_record(settings: Settings, metric: str, scheme: str, sim: SimConfig | None) -> dict:
    inputs = settings.inputs(scheme)
    rec = {"metric": METRIC_COLUMN[metric], "scheme": scheme, "analytic": analytic_value(inputs, metric)}
    if sim is not None:
        if metric == "srp":
            est = simulate_srp(inputs, sim)
            rec["simulated"], rec["std_err"] = est.mean, est.std_err
        else:
            est = simulate_outage(inputs, sim)
            if metric == "outage":
                rec["simulated"], rec["std_err"] = est.mean, est.std_err
            else:
                scale = rec["analytic"] / (1.0 - analytic_value(inputs, "outage")) if rec["analytic"] else 0.0
                rec["simulated"], rec["std_err"] = scale * (1.0 - est.mean), scale * est.std_err
    return rec


def cmd_eval(args: argparse.Namespace) -> int:
    settings = resolve_settings(args)
    sim = SimConfig(trials=args.trials, seed=args.seed, r_max=args.r_max, workers=args.workers)
    preset = PRESETS.get(args.preset) if args.preset else None

    if preset is None and args.sweep is None:
        sim_or_none = sim if args.simulate else None
        records = [
            _point_record(settings, metric, scheme, sim_or_none)
            for metric in _metrics(args.metric)
            for scheme in _schemes(args.scheme)
        ]
        if args.format == "csv":
            columns = ["metric", "scheme", "analytic"] + (["simulated", "std_err"] if args.simulate else [])
            lines = [",".join(columns)] + [",".join(str(r[c]) for c in columns) for r in records]
            _emit("\n".join(lines) + "\n", args.output)
        else:
            _emit(format_jsonl(records), args.output)
        return 0

    if args.sweep is not None:
        var, start, stop, steps = args.sweep
        try:
            spec = SweepSpec(var, float(start), float(stop), int(steps), _metrics(args.metric), args.simulate)
        except ValueError as exc:
            raise ConfigError(f"bad --sweep: {exc}") from None
        schemes, group, group_values = _schemes(args.scheme), None, ()
    else:
        base = preset.sweep
        metrics = base.metrics if args.metric == "all" else _metrics(args.metric)
        spec = SweepSpec(base.variable, base.start, base.stop, base.steps, metrics, args.simulate)
        schemes = preset.schemes if args.scheme == "both" else _schemes(args.scheme)
        group, group_values = preset.group, preset.group_values

    columns, rows = run_sweep(settings, spec, schemes, group, group_values, sim)
    if args.format == "json":
        ncoord = 2 if group else 1
        _emit(format_jsonl(p.to_dict() for p in rows_to_points(rows, columns, ncoord)), args.output)
    else:
        header = {"preset": args.preset, "settings": settings.to_json_dict(), "sweep": asdict(spec),
                  "schemes": list(schemes), "group": group, "group_values": list(group_values)}
        if args.simulate:
            header["sim"] = asdict(sim)
        _emit(format_csv(columns, rows, header), args.output)
    return 0


def cmd_solve(args: argparse.Namespace) -> int:
    settings = resolve_settings(args)
    sc = settings.scenario("soma")
    params, dens = sc.params, sc.dens
    name = args.solver

    def need_target() -> float:
        if args.target is None:
            raise ConfigError(f"{name} needs --target")
        return args.target

    if name == "max-density-soma":
        report = design.max_density_srp_soma(need_target(), settings.gamma_th, settings.phi, params, dens.r0,
                                             args.ratio, delta=dens.delta)
    elif name == "max-density-tdma":
        report = design.max_density_srp_tdma(need_target(), settings.gamma_th, params, dens.r0,
                                             tau=settings.tau, delta=dens.delta)
    elif name == "min-guard-radius":
        scheme = Tdma(settings.tau) if args.scheme == "tdma" else Soma(settings.phi)
        report = design.min_guard_radius(scheme, need_target(), settings.gamma_th, dens, params)
    elif name == "optimal-comm-density":
        report = design.optimal_comm_density(settings.beta_th, params, dens.r0)
    else:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", DegenerateSplitWarning)
            comparison = design.compare_schemes(params, dens, settings.phi, settings.tau,
                                                settings.gamma_th, settings.beta_th)
        sys.stdout.write(json.dumps({"quantity": "compare", **asdict(comparison)}) + "\n")
        return 0
    if not math.isfinite(report.residual):
        raise ArithmeticError(f"{name} produced a non-finite residual")
    sys.stdout.write(json.dumps(report.to_dict()) + "\n")
    return 0


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "eval":
            return cmd_eval(args)
        return cmd_solve(args)
    except design.InfeasibleError as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except (ConfigError, FileNotFoundError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (ArithmeticError, ValueError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())

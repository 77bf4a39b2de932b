"""Coexistence metrics for UAV radar and communication networks under SOMA and TDMA."""

from .analytic import MetricInputs, outage, srp, transmission_capacity
from .design import InfeasibleError, compare_schemes, max_density_srp_soma, max_density_srp_tdma, min_guard_radius, optimal_comm_density
from .montecarlo import SimConfig, simulate_outage, simulate_srp, simulate_tc
from .network import ConfigError, DensityConfig, RadioParams, Soma, Tdma, load_config
from .special import beta, incomplete_beta, log_gamma

__version__ = "0.1.0"

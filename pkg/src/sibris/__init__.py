"""Self-sustaining backscatter-surface uplink optimization.

Modulating reflectors harvest part of what they receive and ride the
rest onto an uplink decoded successively at the access point, while a
licensed link nearby must stay above its rate floor.  The package
generates drop geometry and Rician fading, maximizes the weighted sum
spectral efficiency with block-coordinate ascent (closed-form
fractional-programming auxiliaries, lifted SDP steps for phases and
beam, an exact splitting QP), and ships baselines plus a Monte-Carlo
CSV harness.
"""

from .beamforming import BeamResult, build_beam_matrices, solve_beam
from .channel import (AaChannels, ChannelSet, Scenario, draw_aa_channels,
                      draw_channels, draw_scenario, path_loss_db, rng,
                      ula_steering, upa_shape, upa_steering)
from .config import ExperimentConfig, parse_config
from .exceptions import (EhInfeasible, InitInfeasible, ParseError, PsInfeasible,
                         QosInfeasible, SibrisError, SubproblemInfeasible,
                         ValidationError)
from .experiment import ResultRow, run_experiment, run_trace
from .fractional import AuxVars, dual_transform_value, f1, update_aux
from .network import (ConstraintReport, NetworkState, SystemParams,
                      constraint_report, decoding_order, effective_gain,
                      harvested_power, pu_rate, pu_sinr, sinrs, wsse)
from .optimizer import BcdConfig, RunReport, initialize, run
from .power_split import PsQp, build_ps_qp, solve_ps
from .reflection import (PenaltySchedule, ReflectionResult, build_lift_matrices,
                         dc_linearization, rank_one_gap, solve_reflection)
from .sdp import SdpProblem, SdpSolution, max_eigpair, solve_sdp
from . import baselines

__all__ = [
    "AaChannels", "AuxVars", "BcdConfig", "BeamResult", "ChannelSet",
    "ConstraintReport", "EhInfeasible", "ExperimentConfig", "InitInfeasible",
    "NetworkState", "ParseError", "PenaltySchedule", "PsInfeasible", "PsQp",
    "QosInfeasible", "ReflectionResult", "ResultRow", "RunReport", "Scenario",
    "SdpProblem", "SdpSolution", "SibrisError", "SubproblemInfeasible",
    "SystemParams", "ValidationError", "baselines", "build_beam_matrices",
    "build_lift_matrices", "build_ps_qp", "constraint_report", "dc_linearization",
    "decoding_order", "draw_aa_channels", "draw_channels", "draw_scenario",
    "dual_transform_value", "effective_gain", "f1", "harvested_power",
    "initialize", "max_eigpair", "parse_config", "path_loss_db", "pu_rate",
    "pu_sinr", "rank_one_gap", "rng", "run", "run_experiment", "run_trace",
    "sinrs", "solve_beam", "solve_ps", "solve_reflection", "solve_sdp",
    "ula_steering", "upa_shape", "upa_steering", "update_aux", "wsse",
]

__version__ = "0.1.0"

"""Achievable rates of the relay channel under estimate-and-forward, joint decoding and time sharing."""

__version__ = "0.1.0"

from .errors import ArgumentError, CapExceeded, DominanceViolation, InternalError
from .probability import (
    Alphabet,
    CondPMF,
    JointPMF,
    cond_mutual_information,
    entropy,
    marginalize,
    mutual_information,
    prob_vector,
)
from .rates import (
    DominanceReport,
    RateResult,
    RateTerms,
    Region,
    Scheme,
    classify_region,
    compute_rate_terms,
    dominance_report,
    eaf_rate,
    eaf_rate_at_q,
    joint_decoding_rate,
    joint_rate_at_q,
    matching_q,
    q_opt,
    q_opt_split,
    time_share_quantizer,
    timeshared_eaf_rate,
)
from .relay import (
    InputDistributions,
    Quantizer,
    RelayChannel,
    RelayJoint,
    assemble_joint,
    direct_link_distribution,
    markov_residual,
)
from .search import InstanceSpec, SearchConfig, hunt_region, optimize_inputs, sample_instance, sweep_q
from .typicality import SimConfig, SimResult, simulate_step1, strongly_typical

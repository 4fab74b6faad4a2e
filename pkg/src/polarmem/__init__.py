"""Polar codes with higher-order memory."""

from .construction import (
    ReliabilityEstimate,
    bec_code,
    bec_reliabilities,
    exhaustive_bitchannel,
    mc_reliability_estimate,
    select_info_set,
    split_channels,
    union_bound,
)
from .decoder import DecodeResult, DecoderWorkspace, decode, decode_bec, genie_llr, genie_llrs
from .dmc import (
    DiscreteChannel,
    ErasureChannel,
    bec_transform,
    bhattacharyya,
    cutoff_rate,
    symmetric_capacity,
    transform_pair,
)
from .encoder import CodeSpec, build_generator, encode, encode_message
from .geometry import (
    BudgetError,
    MemoryParams,
    achievable_exponent,
    code_length,
    decoding_complexity,
    divergence,
    dominant_root,
    encoding_complexity,
    growth_function,
    typical_frequencies,
)
from .lab import (
    BranchEnsemble,
    ProcessTrace,
    cutoff_sequence,
    evolve_ensemble,
    exponent_experiment,
    polarized_fractions,
    sample_state_paths,
    zhat_worst_case,
)
from .sim import NoiseModel, TrialReport, complexity_figure, exponent_figure, simulate_bler
from .states import assign_states, bit_reversed_order, count_type_classes, state_vector, typical_mass

__version__ = "0.1.0"

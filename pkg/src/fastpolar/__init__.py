"""Polar codes with fast simplified-SC decoding on 16-bit segments."""

from .analysis import export_pruned_tree, reduction_ratios, traversal_stats
from .bch import BchVariant, bch_decode_hard, bch_encode, bch_node_decode
from .construction import (
    DEFAULT_DESIGN_SNR_DB,
    InfeasibleConstructionError,
    ReliabilityOrder,
    classify_segment,
    construct_fast_polar,
    construct_polar,
    layout_from_dict,
    layout_to_dict,
    reliability_sequence,
)
from .core import (
    MAX_WIDTH,
    MIN_WIDTH,
    SEGMENT_SIZE,
    CodeSpec,
    FastPolarCode,
    PatternTag,
    QuantizedLLR,
    SegmentPattern,
    TraversalStats,
    hard_decision,
    saturate,
    saturating_add,
    saturation_limit,
)
from .decoder import (
    DEFAULT_LIMITS,
    SC_EQUIVALENT_LIMITS,
    DecodeResult,
    PatternLimits,
    build_tree,
    decode_pcr,
    decode_rep2,
    decode_rpc,
    decode_spc2,
    f_check,
    fast_sc_decode,
    g_bit,
    parallel_min_mask,
    tree_stats,
)
from .encoder import bch_message_positions, encode, polar_transform
from .oracle import NodeCodebook, enumerate_codebook, ml_decode, sc_decode_baseline
from .simulation import (
    BlerRecord,
    SimConfig,
    default_llr_scale,
    eb_n0_db,
    noise_variance,
    quantize_channel,
    run_bler,
    transmit,
    write_manifest,
    write_records_csv,
)

__version__ = "0.1.0"

__all__ = [
    "BchVariant",
    "BlerRecord",
    "CodeSpec",
    "DecodeResult",
    "DEFAULT_DESIGN_SNR_DB",
    "DEFAULT_LIMITS",
    "FastPolarCode",
    "InfeasibleConstructionError",
    "MAX_WIDTH",
    "MIN_WIDTH",
    "NodeCodebook",
    "PatternLimits",
    "PatternTag",
    "QuantizedLLR",
    "ReliabilityOrder",
    "SC_EQUIVALENT_LIMITS",
    "SEGMENT_SIZE",
    "SegmentPattern",
    "SimConfig",
    "TraversalStats",
    "bch_decode_hard",
    "bch_encode",
    "bch_message_positions",
    "bch_node_decode",
    "build_tree",
    "classify_segment",
    "construct_fast_polar",
    "construct_polar",
    "decode_pcr",
    "decode_rep2",
    "decode_rpc",
    "decode_spc2",
    "default_llr_scale",
    "eb_n0_db",
    "encode",
    "enumerate_codebook",
    "export_pruned_tree",
    "f_check",
    "fast_sc_decode",
    "g_bit",
    "hard_decision",
    "layout_from_dict",
    "layout_to_dict",
    "ml_decode",
    "noise_variance",
    "parallel_min_mask",
    "polar_transform",
    "quantize_channel",
    "reduction_ratios",
    "reliability_sequence",
    "run_bler",
    "saturate",
    "saturating_add",
    "saturation_limit",
    "sc_decode_baseline",
    "transmit",
    "traversal_stats",
    "tree_stats",
    "write_manifest",
    "write_records_csv",
]

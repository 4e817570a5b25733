"""Spiking-network inference with probabilistic spike propagation.

The heavy lifting lives in the compiled extension; this package re-exports
its public surface.
"""

from ._core import (
    AccessLedger,
    ClassifyResult,
    Dataset,
    Network,
    NetworkModel,
    ParseError,
    PlacementPolicy,
    PwlBreakpoint,
    PwlProfile,
    Rng,
    SortedSynapseList,
    build_sorted_lists,
    draw_r,
    expected_termpt,
    gen_network,
    import_text_network,
    load_dataset,
    load_network,
    network_stats_csv,
    normalized_offchip,
    pwl_invert,
    random_dataset,
    run_accuracy,
    run_maps,
    save_network,
    termpt_binary_search,
    termpt_pwl,
    termpt_random_index,
    termpt_scan,
    termpt_transform,
)

STRATEGIES = ("det", "scan", "bs", "ri", "tr", "pwl")

__version__ = "0.1.0"

__all__ = [
    "AccessLedger",
    "ClassifyResult",
    "Dataset",
    "Network",
    "NetworkModel",
    "ParseError",
    "PlacementPolicy",
    "PwlBreakpoint",
    "PwlProfile",
    "Rng",
    "STRATEGIES",
    "SortedSynapseList",
    "build_sorted_lists",
    "draw_r",
    "expected_termpt",
    "gen_network",
    "import_text_network",
    "load_dataset",
    "load_network",
    "network_stats_csv",
    "normalized_offchip",
    "pwl_invert",
    "random_dataset",
    "run_accuracy",
    "run_maps",
    "save_network",
    "termpt_binary_search",
    "termpt_pwl",
    "termpt_random_index",
    "termpt_scan",
    "termpt_transform",
]

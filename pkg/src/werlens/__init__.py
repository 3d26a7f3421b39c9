"""werlens: discover and explain WER disparities across metadata subgroups."""

__version__ = "0.1.0"

from .analysis import (
    ComparisonRow,
    DatasetStats,
    DivergenceRow,
    DivergenceSummary,
    ShapleyRow,
    compare_models,
    divergence,
    gain_histogram,
    make_delta_fn,
    pooled_wer,
    shapley_global,
    shapley_local,
    summarize,
    welch_t,
)
from .corpus import AudioBuffer, ManifestError, Record, WavError, decode_wav, encode_wav, load_manifest
from .features import (
    FeatureVector,
    FrameGrid,
    estimate_snr,
    extract_features,
    frame_signal,
    spectral_flatness,
    transcript_features,
    trim_and_pauses,
)
from .itemizer import BinningSpec, Item, Transaction, apply_bins, encode_items, fit_bins, parse_items
from .metrics import UndefinedWerError, WerBreakdown, edit_distance, normalize, wer
from .miner import Subgroup, mine, subgroup_lookup

__all__ = [
    "__version__",
    "AudioBuffer",
    "BinningSpec",
    "ComparisonRow",
    "DatasetStats",
    "DivergenceRow",
    "DivergenceSummary",
    "FeatureVector",
    "FrameGrid",
    "Item",
    "ManifestError",
    "Record",
    "ShapleyRow",
    "Subgroup",
    "Transaction",
    "UndefinedWerError",
    "WavError",
    "WerBreakdown",
    "apply_bins",
    "compare_models",
    "decode_wav",
    "divergence",
    "edit_distance",
    "encode_items",
    "encode_wav",
    "estimate_snr",
    "extract_features",
    "fit_bins",
    "frame_signal",
    "gain_histogram",
    "load_manifest",
    "make_delta_fn",
    "mine",
    "normalize",
    "parse_items",
    "pooled_wer",
    "shapley_global",
    "shapley_local",
    "spectral_flatness",
    "subgroup_lookup",
    "summarize",
    "transcript_features",
    "trim_and_pauses",
    "welch_t",
    "wer",
]

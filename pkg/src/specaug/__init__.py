"""Deterministic spectrogram augmentation for speech models.

The package deforms log mel spectrograms three ways: a smooth horizontal
warp driven by a sparse thin-plate spline, zeroed frequency bands, and
zeroed time bands.  Named parameter presets bundle the three stages, a
small frontend turns WAV audio into log mel features, and side modules
cover learning-rate schedules, label smoothing, fusion scoring, exact
NPY file IO, PNG rendering and a batch CLI.

Everything is a pure function of explicit inputs plus a counter-based
random stream, so results are reproducible across runs, platforms and
worker counts.
"""

from .audio import AudioBuffer, load_wav
from .errors import (
    EmptyInputError,
    FormatError,
    NormalizationError,
    SpecAugError,
    SplineSingularError,
    UnknownPolicyError,
    UnsupportedFormatError,
)
from .features import (
    FeatureMatrix,
    FrontendConfig,
    Spectrogram,
    add_deltas,
    hz_to_mel,
    log_mel,
    mel_center_frequencies,
    mel_filterbank,
    mel_to_hz,
    normalize,
)
from .masks import (
    FreqMaskParams,
    MaskRecord,
    TimeMaskParams,
    apply_masks,
    freq_mask,
    time_mask,
)
from .npyio import read_feature_file, write_feature_file
from .policy import (
    AugmentAudit,
    Policy,
    WarpAudit,
    augment,
    load_policy,
    policy_from_dict,
    preset,
    preset_names,
)
from .render import render_image, render_png
from .rng import RngStream, split_stream
from .training import (
    FusionWeights,
    HypothesisScore,
    ScheduleParams,
    SmoothingSpec,
    WEIGHT_NOISE_STD,
    fused_score,
    grid_search_fusion,
    lr_at_step,
    noise_active,
    schedule_names,
    schedule_preset,
    smooth_labels,
)
from .warp import (
    ControlPointSet,
    SplineModel,
    WarpSpec,
    dense_backward_flow,
    fit_spline,
    sample_warp,
    warp_spectrogram,
)

__version__ = "1.0.0"

__all__ = [
    "AudioBuffer",
    "AugmentAudit",
    "ControlPointSet",
    "EmptyInputError",
    "FeatureMatrix",
    "FormatError",
    "FreqMaskParams",
    "FrontendConfig",
    "FusionWeights",
    "HypothesisScore",
    "MaskRecord",
    "NormalizationError",
    "Policy",
    "RngStream",
    "ScheduleParams",
    "SmoothingSpec",
    "SpecAugError",
    "Spectrogram",
    "SplineModel",
    "SplineSingularError",
    "TimeMaskParams",
    "UnknownPolicyError",
    "UnsupportedFormatError",
    "WarpAudit",
    "WarpSpec",
    "WEIGHT_NOISE_STD",
    "add_deltas",
    "apply_masks",
    "augment",
    "dense_backward_flow",
    "fit_spline",
    "freq_mask",
    "fused_score",
    "grid_search_fusion",
    "hz_to_mel",
    "load_policy",
    "load_wav",
    "log_mel",
    "lr_at_step",
    "mel_center_frequencies",
    "mel_filterbank",
    "mel_to_hz",
    "noise_active",
    "normalize",
    "policy_from_dict",
    "preset",
    "preset_names",
    "read_feature_file",
    "render_image",
    "render_png",
    "sample_warp",
    "schedule_names",
    "schedule_preset",
    "smooth_labels",
    "split_stream",
    "time_mask",
    "warp_spectrogram",
    "write_feature_file",
]

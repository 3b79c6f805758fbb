"""In-process bindings for the specaug core.

Exposes four functions to training loops that want plain buffers
instead of the native dataclasses: :func:`py_augment`,
:func:`py_preset`, :func:`py_lr_at_step` and :func:`py_log_mel`.

Matrices cross the boundary as contiguous row-major float32 arrays
laid out frames by channels, the same layout the .npy feature files
use.  float32 input that is already contiguous is passed through
without copying; non-contiguous input is copied once on the way in.
float64 input is accepted but down-converted to float32 with a
RuntimeWarning.  Any other dtype, and any rank other than the
documented one, raises :class:`BridgeError`.

All native failures surface as :class:`BridgeError` so callers only
ever need one except clause; nothing aborts the process.  The core is
pure, so the bindings are safe to call from multiple threads.
"""

import warnings

import numpy as np

from specaug import (
    AudioBuffer,
    FrontendConfig,
    RngStream,
    ScheduleParams,
    SpecAugError,
    Spectrogram,
    augment,
    log_mel,
    lr_at_step,
    policy_from_dict,
    preset,
)

__all__ = [
    "BridgeError",
    "py_augment",
    "py_log_mel",
    "py_lr_at_step",
    "py_preset",
]

__version__ = "1.0.0"

# Matrices arrive without the native normalized flag; a stored mean this
# close to zero is treated as already normalized (same rule the CLI uses).
_NORMALIZED_MEAN_TOL = 1e-5

_POLICY_KEYS = ("W", "F", "mF", "T", "p", "mT")
_SCHEDULE_REQUIRED = ("ramp_end", "noise_start", "decay_start", "decay_end")
_SCHEDULE_OPTIONAL = ("peak_lr", "decay_floor_ratio")


class BridgeError(Exception):
    """Raised for any failure crossing the binding boundary."""


def _as_float32(values, rank: int, what: str) -> np.ndarray:
    try:
        arr = np.asarray(values)
    except Exception as exc:
        raise BridgeError(f"{what} is not array-like: {exc}") from exc
    if arr.ndim != rank:
        raise BridgeError(f"{what} must be {rank}-D, got shape {arr.shape}")
    if arr.dtype == np.float64:
        warnings.warn(
            f"{what} is float64; down-converting to float32 at the boundary",
            RuntimeWarning,
            stacklevel=3,
        )
        arr = arr.astype(np.float32)
    elif arr.dtype != np.float32:
        raise BridgeError(f"{what} must be float32 or float64, got {arr.dtype}")
    return np.ascontiguousarray(arr)


def _resolve_policy(policy):
    if isinstance(policy, str):
        try:
            return preset(policy)
        except SpecAugError as exc:
            raise BridgeError(str(exc)) from exc
    if isinstance(policy, dict):
        try:
            return policy_from_dict(policy)
        except KeyError as exc:
            # native message already names the missing key(s)
            raise BridgeError(str(exc.args[0])) from exc
        except (SpecAugError, ValueError, TypeError) as exc:
            raise BridgeError(str(exc)) from exc
    raise BridgeError(
        f"policy must be a preset name or a dict, got {type(policy).__name__}"
    )


def py_augment(matrix, policy, seed: int, stream_id: int) -> np.ndarray:
    """Augment a frames-by-channels matrix, bit-exact with the native core.

    `policy` is a preset name ("None", "LB", "LD", "SM", "SS") or a dict
    with keys W, F, mF, T, p, mT.  The draw stream is keyed by
    (seed, stream_id) exactly as the CLI keys manifest rows, so replays
    and cross-component comparisons match byte for byte.  An identity
    policy returns the input unchanged.
    """
    buf = _as_float32(matrix, rank=2, what="matrix")
    resolved = _resolve_policy(policy)
    normalized = bool(abs(float(buf.mean())) < _NORMALIZED_MEAN_TOL) if buf.size else False
    try:
        spec = Spectrogram(buf.T, normalized=normalized)
        if resolved.is_identity:
            # the core would hand the input back anyway; skip its float64
            # canonical copy so contiguous float32 input round-trips zero-copy
            return buf
        out, _ = augment(spec, resolved, RngStream(seed=seed, stream_id=stream_id))
    except (SpecAugError, ValueError, TypeError) as exc:
        raise BridgeError(str(exc)) from exc
    return np.ascontiguousarray(out.values.T.astype(np.float32, copy=False))


def py_preset(name: str) -> dict:
    """Return a preset's parameters as a plain {W, F, mF, T, p, mT} dict."""
    try:
        resolved = preset(name)
    except (SpecAugError, TypeError) as exc:
        raise BridgeError(str(exc)) from exc
    full = resolved.as_dict()
    return {key: full[key] for key in _POLICY_KEYS}


def py_lr_at_step(step: int, sched: dict) -> float:
    """Evaluate a schedule dict (ramp_end, noise_start, decay_start,
    decay_end, plus optional peak_lr and decay_floor_ratio) at a step."""
    if not isinstance(sched, dict):
        raise BridgeError(f"schedule must be a dict, got {type(sched).__name__}")
    missing = [key for key in _SCHEDULE_REQUIRED if key not in sched]
    if missing:
        raise BridgeError(f"schedule dict is missing key(s): {', '.join(missing)}")
    unknown = sorted(set(sched) - set(_SCHEDULE_REQUIRED) - set(_SCHEDULE_OPTIONAL))
    if unknown:
        raise BridgeError(f"unknown schedule key(s): {', '.join(unknown)}")
    try:
        params = ScheduleParams(**sched)
        return float(lr_at_step(step, params))
    except (SpecAugError, ValueError, TypeError) as exc:
        raise BridgeError(str(exc)) from exc


def py_log_mel(samples, sample_rate_hz: int, **config) -> np.ndarray:
    """Run the log mel frontend on a 1-D waveform buffer.

    Keyword arguments override FrontendConfig fields (window_ms, hop_ms,
    fft_size, nu, fmin_hz, fmax_hz, log_floor).  Returns a contiguous
    frames-by-channels float32 matrix.
    """
    buf = _as_float32(samples, rank=1, what="samples")
    try:
        cfg = FrontendConfig(**config)
        audio = AudioBuffer(samples=buf, sample_rate_hz=int(sample_rate_hz))
        spec = log_mel(audio, cfg)
    except (SpecAugError, ValueError, TypeError) as exc:
        raise BridgeError(str(exc)) from exc
    return np.ascontiguousarray(spec.values.T.astype(np.float32, copy=False))

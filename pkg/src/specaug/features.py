"""Log mel feature frontend.

Short-time Fourier analysis with a periodic Hann window, triangular mel
filters on the HTK scale (mel(f) = 2595*log10(1 + f/700), unit peak),
natural-log compression with a floor, whole-matrix zero-mean
normalization, and regression delta / delta-delta features.

Conventions: a `Spectrogram` is channel-major (nu x tau) in memory; a
`FeatureMatrix` is time-major (tau x 3*nu) with static, delta and
delta-delta blocks side by side.  Augmentation is meant to run on the
static spectrogram before deltas are appended.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .audio import AudioBuffer
from .errors import EmptyInputError, NormalizationError


@dataclass(frozen=True)
class FrontendConfig:
    """Analysis parameters for `log_mel`.

    Defaults are standard 16 kHz ASR settings: 25 ms window, 10 ms hop,
    512-point FFT, 80 mel channels spanning 20-7600 Hz.
    """

    window_ms: float = 25.0
    hop_ms: float = 10.0
    fft_size: int = 512
    nu: int = 80
    fmin_hz: float = 20.0
    fmax_hz: float = 7600.0
    log_floor: float = 1e-10

    def __post_init__(self):
        if self.nu < 1:
            raise ValueError(f"nu must be >= 1, got {self.nu}")
        if not (0 < self.fmin_hz < self.fmax_hz):
            raise ValueError(f"need 0 < fmin_hz < fmax_hz, got {self.fmin_hz}, {self.fmax_hz}")
        if self.window_ms < self.hop_ms:
            raise ValueError("window_ms must be >= hop_ms")
        if self.fft_size < 1 or self.fft_size & (self.fft_size - 1):
            raise ValueError(f"fft_size must be a power of two, got {self.fft_size}")
        if self.log_floor <= 0:
            raise ValueError("log_floor must be positive")

    def window_samples(self, sample_rate_hz: int) -> int:
        return int(round(self.window_ms * sample_rate_hz / 1000.0))

    def hop_samples(self, sample_rate_hz: int) -> int:
        return int(round(self.hop_ms * sample_rate_hz / 1000.0))


@dataclass(frozen=True)
class Spectrogram:
    """A nu x tau matrix of log mel energies.

    `normalized` records whether the whole-matrix mean has been removed;
    `mean_offset` is the value that was subtracted (0 if never normalized).
    Values are held as float64 and treated as immutable: operations that
    change content always allocate.
    """

    values: np.ndarray
    mean_offset: float = 0.0
    normalized: bool = False

    def __post_init__(self):
        values = np.ascontiguousarray(self.values, dtype=np.float64)
        if values.ndim != 2 or values.shape[0] < 1 or values.shape[1] < 1:
            raise ValueError(f"spectrogram must be a non-empty 2-D matrix, got shape {values.shape}")
        object.__setattr__(self, "values", values)

    @property
    def nu(self) -> int:
        """Number of mel channels (rows)."""
        return int(self.values.shape[0])

    @property
    def tau(self) -> int:
        """Number of time steps (columns)."""
        return int(self.values.shape[1])

    def with_values(self, values: np.ndarray) -> "Spectrogram":
        """Same metadata, new content."""
        return Spectrogram(values, mean_offset=self.mean_offset, normalized=self.normalized)


@dataclass(frozen=True)
class FeatureMatrix:
    """Time-major (tau x 3*nu) features: static, delta, delta-delta blocks."""

    values: np.ndarray

    def __post_init__(self):
        values = np.ascontiguousarray(self.values, dtype=np.float64)
        if values.ndim != 2 or values.shape[1] % 3 != 0:
            raise ValueError(
                f"feature matrix must be 2-D with columns divisible by 3, got shape {values.shape}"
            )
        object.__setattr__(self, "values", values)

    @property
    def tau(self) -> int:
        return int(self.values.shape[0])

    @property
    def nu(self) -> int:
        return int(self.values.shape[1] // 3)


def hz_to_mel(f):
    return 2595.0 * np.log10(1.0 + np.asarray(f, dtype=np.float64) / 700.0)


def mel_to_hz(m):
    return 700.0 * (10.0 ** (np.asarray(m, dtype=np.float64) / 2595.0) - 1.0)


def mel_center_frequencies(cfg: FrontendConfig) -> np.ndarray:
    """Center frequency in Hz of each of the nu triangular filters."""
    mel_points = np.linspace(hz_to_mel(cfg.fmin_hz), hz_to_mel(cfg.fmax_hz), cfg.nu + 2)
    return mel_to_hz(mel_points)[1:-1]


def mel_filterbank(cfg: FrontendConfig, sample_rate_hz: int) -> np.ndarray:
    """(nu x fft_size/2+1) matrix of unit-peak triangular filters."""
    if cfg.fmax_hz > sample_rate_hz / 2:
        raise ValueError(
            f"fmax_hz {cfg.fmax_hz} exceeds Nyquist {sample_rate_hz / 2} at {sample_rate_hz} Hz"
        )
    mel_points = np.linspace(hz_to_mel(cfg.fmin_hz), hz_to_mel(cfg.fmax_hz), cfg.nu + 2)
    hz_points = mel_to_hz(mel_points)
    bin_freqs = np.arange(cfg.fft_size // 2 + 1) * (sample_rate_hz / cfg.fft_size)
    bank = np.zeros((cfg.nu, bin_freqs.size))
    for m in range(cfg.nu):
        lower, center, upper = hz_points[m], hz_points[m + 1], hz_points[m + 2]
        rising = (bin_freqs - lower) / (center - lower)
        falling = (upper - bin_freqs) / (upper - center)
        bank[m] = np.clip(np.minimum(rising, falling), 0.0, None)
    return bank


def _hann_periodic(n: int) -> np.ndarray:
    return 0.5 - 0.5 * np.cos(2.0 * np.pi * np.arange(n) / n)


def log_mel(audio: AudioBuffer, cfg: FrontendConfig = FrontendConfig()) -> Spectrogram:
    """Log mel spectrogram of a waveform.

    Frames are laid out without padding, so the frame count is
    1 + floor((len - window) / hop); each cell is ln(max(E, log_floor))
    of the mel-weighted short-time power spectrum.
    """
    win = cfg.window_samples(audio.sample_rate_hz)
    hop = cfg.hop_samples(audio.sample_rate_hz)
    if win > cfg.fft_size:
        raise ValueError(f"window of {win} samples exceeds fft_size {cfg.fft_size}")
    x = audio.samples
    if x.size < win:
        raise EmptyInputError(f"audio of {x.size} samples is shorter than one {win}-sample window")

    n_frames = 1 + (x.size - win) // hop
    frames = np.lib.stride_tricks.sliding_window_view(x, win)[:: hop][:n_frames]
    windowed = frames * _hann_periodic(win)
    power = np.abs(np.fft.rfft(windowed, n=cfg.fft_size, axis=1)) ** 2
    bank = mel_filterbank(cfg, audio.sample_rate_hz)
    energies = bank @ power.T  # (nu, tau)
    return Spectrogram(np.log(np.maximum(energies, cfg.log_floor)))


def normalize(spec: Spectrogram) -> Spectrogram:
    """Remove the whole-matrix mean, recording it in `mean_offset`.

    Normalizing twice is refused: the recorded offset would no longer
    reconstruct the original.
    """
    if spec.normalized:
        raise NormalizationError("spectrogram is already normalized")
    mean = float(spec.values.mean())
    return Spectrogram(spec.values - mean, mean_offset=mean, normalized=True)


def _regression_delta(x: np.ndarray, window: int) -> np.ndarray:
    """First-order regression derivative along axis 0 with edge replication.

    delta_t = sum_{n=1..window} n * (x[t+n] - x[t-n]) / (2 * sum n^2)
    """
    denom = 2.0 * sum(n * n for n in range(1, window + 1))
    padded = np.pad(x, ((window, window), (0, 0)), mode="edge")
    tau = x.shape[0]
    num = np.zeros_like(x)
    for n in range(1, window + 1):
        num += n * (padded[window + n : window + n + tau] - padded[window - n : window - n + tau])
    return num / denom


def add_deltas(spec: Spectrogram, window: int = 2) -> FeatureMatrix:
    """Append delta and delta-delta blocks, producing a (tau x 3*nu) matrix.

    The delta operator is the standard regression formula over `window`
    neighbor frames with clamp-replicated edges; delta-delta applies the
    same operator to the delta block.
    """
    if window < 1:
        raise ValueError(f"delta window must be >= 1, got {window}")
    static = spec.values.T  # (tau, nu)
    d1 = _regression_delta(static, window)
    d2 = _regression_delta(d1, window)
    return FeatureMatrix(np.hstack([static, d1, d2]))

import struct

import numpy as np
import pytest

from specaug import Spectrogram


def pcm16_wav_bytes(samples: np.ndarray, rate: int = 16000, channels: int = 1) -> bytes:
    """Minimal RIFF/WAVE container around 16-bit PCM samples."""
    ints = np.asarray(samples)
    if ints.dtype != np.int16:
        ints = np.clip(np.round(ints * 32767.0), -32768, 32767).astype(np.int16)
    payload = ints.astype("<i2").tobytes()
    block_align = 2 * channels
    header = b"RIFF" + struct.pack("<I", 36 + len(payload)) + b"WAVE"
    fmt = b"fmt " + struct.pack("<IHHIIHH", 16, 1, channels, rate, rate * block_align, block_align, 16)
    return header + fmt + b"data" + struct.pack("<I", len(payload)) + payload


def sine_samples(freq_hz: float, seconds: float = 1.0, rate: int = 16000, amp: float = 0.5):
    t = np.arange(int(round(seconds * rate))) / rate
    return amp * np.sin(2.0 * np.pi * freq_hz * t)


@pytest.fixture
def tone_wav(tmp_path):
    """Factory writing a sine-tone WAV file and returning its path."""

    def make(freq_hz: float = 440.0, seconds: float = 1.0, rate: int = 16000, name: str = "tone.wav"):
        path = tmp_path / name
        path.write_bytes(pcm16_wav_bytes(sine_samples(freq_hz, seconds, rate), rate))
        return path

    return make


def random_normalized_spec(nu: int, tau: int, seed: int = 0) -> Spectrogram:
    rng = np.random.default_rng(seed)
    values = rng.normal(size=(nu, tau))
    values -= values.mean()
    return Spectrogram(values, mean_offset=0.0, normalized=True)


@pytest.fixture
def spec_80x1000():
    return random_normalized_spec(80, 1000, seed=11)

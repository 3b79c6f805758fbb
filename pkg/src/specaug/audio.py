"""WAV ingestion.

Reads RIFF/WAVE files containing 16-bit PCM samples.  Multichannel files
are reduced to their first channel; samples are scaled by 1/32768 into
[-1, 1].  Anything structurally broken raises `FormatError`; well-formed
files in an encoding we do not read (float PCM, 8/24/32-bit, compressed)
raise `UnsupportedFormatError`.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import EmptyInputError, FormatError, UnsupportedFormatError

_PCM_FORMAT = 1
_INT16_SCALE = 32768.0


@dataclass(frozen=True)
class AudioBuffer:
    """A mono waveform in [-1, 1] with its sample rate."""

    samples: np.ndarray
    sample_rate_hz: int

    def __post_init__(self):
        samples = np.ascontiguousarray(self.samples, dtype=np.float64)
        if samples.ndim != 1 or samples.size == 0:
            raise EmptyInputError("AudioBuffer requires a non-empty 1-D sample sequence")
        if self.sample_rate_hz <= 0:
            raise ValueError(f"sample_rate_hz must be positive, got {self.sample_rate_hz}")
        object.__setattr__(self, "samples", samples)

    def __len__(self) -> int:
        return int(self.samples.size)

    @property
    def duration_s(self) -> float:
        return self.samples.size / self.sample_rate_hz


def _read_exact(fh, n: int, what: str) -> bytes:
    data = fh.read(n)
    if len(data) != n:
        raise FormatError(f"truncated WAV file while reading {what}")
    return data


def load_wav(path: str | Path) -> AudioBuffer:
    """Load the first channel of a 16-bit PCM RIFF/WAVE file."""
    with open(path, "rb") as fh:
        riff, _size, wave_id = struct.unpack("<4sI4s", _read_exact(fh, 12, "RIFF header"))
        if riff != b"RIFF" or wave_id != b"WAVE":
            raise FormatError(f"{path}: not a RIFF/WAVE file")

        fmt = None
        data = None
        while data is None:
            chunk_header = fh.read(8)
            if len(chunk_header) == 0:
                break
            if len(chunk_header) != 8:
                raise FormatError(f"{path}: truncated chunk header")
            chunk_id, chunk_size = struct.unpack("<4sI", chunk_header)
            if chunk_id == b"fmt ":
                if chunk_size < 16:
                    raise FormatError(f"{path}: fmt chunk too short ({chunk_size} bytes)")
                body = _read_exact(fh, chunk_size, "fmt chunk")
                fmt = struct.unpack("<HHIIHH", body[:16])
            elif chunk_id == b"data":
                data = _read_exact(fh, chunk_size, "data chunk")
            else:
                # skip unknown chunks (LIST, fact, ...), padded to even size
                fh.seek(chunk_size + (chunk_size & 1), 1)

    if fmt is None:
        raise FormatError(f"{path}: missing fmt chunk")
    if data is None:
        raise FormatError(f"{path}: missing data chunk")

    audio_format, channels, sample_rate, _byte_rate, _block_align, bits = fmt
    if audio_format != _PCM_FORMAT:
        raise UnsupportedFormatError(
            f"{path}: only integer PCM is supported (format tag {audio_format})"
        )
    if bits != 16:
        raise UnsupportedFormatError(f"{path}: only 16-bit samples are supported, got {bits}-bit")
    if channels < 1:
        raise FormatError(f"{path}: invalid channel count {channels}")

    frame_bytes = 2 * channels
    n_frames = len(data) // frame_bytes
    if n_frames == 0:
        raise EmptyInputError(f"{path}: no audio frames")
    raw = np.frombuffer(data[: n_frames * frame_bytes], dtype="<i2")
    first_channel = raw.reshape(n_frames, channels)[:, 0]
    return AudioBuffer(first_channel.astype(np.float64) / _INT16_SCALE, sample_rate)

import struct

import numpy as np
import pytest

from specaug import AudioBuffer, load_wav
from specaug.errors import EmptyInputError, FormatError, UnsupportedFormatError

from conftest import pcm16_wav_bytes


def test_reads_mono_pcm16(tmp_path):
    samples = np.array([0, 16384, -16384, 32767, -32768], dtype=np.int16)
    path = tmp_path / "a.wav"
    path.write_bytes(pcm16_wav_bytes(samples, rate=8000))
    buf = load_wav(path)
    assert buf.sample_rate_hz == 8000
    assert buf.samples.dtype == np.float64
    np.testing.assert_allclose(buf.samples, samples / 32768.0)


def test_stereo_keeps_first_channel(tmp_path):
    left = np.array([100, 200, 300], dtype=np.int16)
    right = np.array([-1, -2, -3], dtype=np.int16)
    interleaved = np.stack([left, right], axis=1).ravel()
    path = tmp_path / "st.wav"
    path.write_bytes(pcm16_wav_bytes(interleaved, rate=16000, channels=2))
    buf = load_wav(path)
    np.testing.assert_allclose(buf.samples, left / 32768.0)


def test_skips_unknown_chunks(tmp_path):
    samples = np.array([1, 2, 3], dtype=np.int16)
    base = pcm16_wav_bytes(samples)
    # Splice a LIST chunk with an odd payload (padded to even) before data.
    head, data = base[:36], base[36:]
    extra = b"LIST" + struct.pack("<I", 5) + b"INFOx" + b"\x00"
    riff_size = struct.unpack("<I", base[4:8])[0] + len(extra)
    patched = b"RIFF" + struct.pack("<I", riff_size) + b"WAVE" + head[12:] + extra + data
    path = tmp_path / "chunky.wav"
    path.write_bytes(patched)
    np.testing.assert_allclose(load_wav(path).samples, samples / 32768.0)


def test_rejects_non_riff(tmp_path):
    path = tmp_path / "x.wav"
    path.write_bytes(b"OggS" + b"\x00" * 40)
    with pytest.raises(FormatError):
        load_wav(path)


def test_rejects_float_encoding(tmp_path):
    samples = np.array([1, 2], dtype=np.int16)
    raw = bytearray(pcm16_wav_bytes(samples))
    raw[20:22] = struct.pack("<H", 3)  # IEEE float format tag
    path = tmp_path / "f.wav"
    path.write_bytes(bytes(raw))
    with pytest.raises(UnsupportedFormatError):
        load_wav(path)


def test_rejects_non_16bit(tmp_path):
    samples = np.array([1, 2], dtype=np.int16)
    raw = bytearray(pcm16_wav_bytes(samples))
    raw[34:36] = struct.pack("<H", 8)
    path = tmp_path / "b8.wav"
    path.write_bytes(bytes(raw))
    with pytest.raises(UnsupportedFormatError):
        load_wav(path)


def test_rejects_truncated_data(tmp_path):
    samples = np.array([1, 2, 3, 4], dtype=np.int16)
    raw = pcm16_wav_bytes(samples)
    path = tmp_path / "t.wav"
    path.write_bytes(raw[:-3])
    with pytest.raises(FormatError):
        load_wav(path)


def test_rejects_missing_data_chunk(tmp_path):
    raw = pcm16_wav_bytes(np.array([1], dtype=np.int16))
    path = tmp_path / "nd.wav"
    path.write_bytes(raw[:36])  # RIFF header + fmt only
    with pytest.raises(FormatError):
        load_wav(path)


def test_buffer_rejects_empty():
    with pytest.raises(EmptyInputError):
        AudioBuffer(np.array([]), 16000)


def test_buffer_rejects_bad_rate():
    with pytest.raises(ValueError):
        AudioBuffer(np.array([0.1]), 0)

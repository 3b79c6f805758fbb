import io

import numpy as np
import pytest

from specaug import FeatureMatrix, Spectrogram, read_feature_file, write_feature_file
from specaug.errors import FormatError, UnsupportedFormatError


def numpy_reference_bytes(arr: np.ndarray) -> bytes:
    buf = io.BytesIO()
    np.save(buf, arr)
    return buf.getvalue()


@pytest.mark.parametrize("shape", [(1, 1), (2, 2), (3, 80), (100, 240), (999, 7)])
def test_writer_matches_numpy_byte_for_byte(tmp_path, shape):
    rng = np.random.default_rng(hash(shape) & 0xFFFF)
    arr = rng.normal(size=shape).astype(np.float32)
    path = tmp_path / "m.npy"
    write_feature_file(path, arr)
    assert path.read_bytes() == numpy_reference_bytes(arr)


def test_header_is_64_byte_aligned(tmp_path):
    path = tmp_path / "m.npy"
    write_feature_file(path, np.zeros((2, 2), dtype=np.float32))
    raw = path.read_bytes()
    header_len = int.from_bytes(raw[8:10], "little")
    assert (10 + header_len) % 64 == 0
    assert raw[: 10 + header_len].endswith(b"\n")


def test_known_tiny_file_layout(tmp_path):
    path = tmp_path / "m.npy"
    write_feature_file(path, np.array([[0.0, 1.0], [2.0, 3.0]], dtype=np.float32))
    raw = path.read_bytes()
    assert raw[:6] == b"\x93NUMPY"
    assert raw[6:8] == b"\x01\x00"
    assert b"'descr': '<f4'" in raw[10:128]
    assert b"'shape': (2, 2)" in raw[10:128]
    assert raw[128:].hex() == "000000000000803f0000004000004040"


def test_spectrogram_round_trip_is_exact(tmp_path):
    values = np.random.default_rng(3).normal(size=(80, 120)).astype(np.float32)
    spec = Spectrogram(values)
    path = tmp_path / "s.npy"
    write_feature_file(path, spec)
    # On disk the matrix is time-major.
    assert np.load(path).shape == (120, 80)
    back = read_feature_file(path, nu=80)
    assert isinstance(back, Spectrogram)
    np.testing.assert_array_equal(back.values, values.astype(np.float64))


def test_feature_matrix_round_trip(tmp_path):
    values = np.random.default_rng(4).normal(size=(50, 240)).astype(np.float32)
    path = tmp_path / "f.npy"
    write_feature_file(path, FeatureMatrix(values))
    back = read_feature_file(path, nu=80)
    assert isinstance(back, FeatureMatrix)
    np.testing.assert_array_equal(back.values, values.astype(np.float64))


def test_reader_accepts_numpy_written_files(tmp_path):
    arr = np.random.default_rng(5).normal(size=(33, 80)).astype(np.float32)
    path = tmp_path / "np.npy"
    np.save(path, arr)
    back = read_feature_file(path, nu=80)
    assert isinstance(back, Spectrogram)
    np.testing.assert_array_equal(back.values.T, arr.astype(np.float64))


def test_reader_without_channel_hint_returns_spectrogram(tmp_path):
    arr = np.arange(12, dtype=np.float32).reshape(4, 3)
    path = tmp_path / "x.npy"
    np.save(path, arr)
    back = read_feature_file(path)
    assert isinstance(back, Spectrogram)
    assert (back.nu, back.tau) == (3, 4)


def test_reader_rejects_mismatched_width(tmp_path):
    arr = np.zeros((10, 81), dtype=np.float32)
    path = tmp_path / "w.npy"
    np.save(path, arr)
    with pytest.raises(FormatError):
        read_feature_file(path, nu=80)


def test_reader_rejects_bad_magic(tmp_path):
    path = tmp_path / "bad.npy"
    path.write_bytes(b"\x93NUMPZ" + b"\x00" * 40)
    with pytest.raises(FormatError):
        read_feature_file(path)


def test_reader_rejects_unknown_version(tmp_path):
    good = tmp_path / "g.npy"
    np.save(good, np.zeros((2, 2), dtype=np.float32))
    raw = bytearray(good.read_bytes())
    raw[6] = 9
    bad = tmp_path / "v.npy"
    bad.write_bytes(bytes(raw))
    with pytest.raises(UnsupportedFormatError):
        read_feature_file(bad)


def test_reader_rejects_other_dtypes(tmp_path):
    path = tmp_path / "d.npy"
    np.save(path, np.zeros((2, 2), dtype=np.float64))
    with pytest.raises(UnsupportedFormatError):
        read_feature_file(path)


def test_reader_rejects_fortran_order(tmp_path):
    path = tmp_path / "f.npy"
    np.save(path, np.asfortranarray(np.zeros((3, 2), dtype=np.float32)))
    with pytest.raises(UnsupportedFormatError):
        read_feature_file(path)


def test_reader_rejects_truncated_payload(tmp_path):
    good = tmp_path / "g.npy"
    np.save(good, np.ones((4, 4), dtype=np.float32))
    bad = tmp_path / "t.npy"
    bad.write_bytes(good.read_bytes()[:-8])
    with pytest.raises(FormatError):
        read_feature_file(bad)


def test_reader_rejects_non_2d(tmp_path):
    path = tmp_path / "one.npy"
    np.save(path, np.zeros(5, dtype=np.float32))
    with pytest.raises(FormatError):
        read_feature_file(path)


def test_writer_leaves_no_temp_file_behind(tmp_path):
    path = tmp_path / "out.npy"
    write_feature_file(path, np.zeros((2, 2), dtype=np.float32))
    assert [p.name for p in tmp_path.iterdir()] == ["out.npy"]


def test_writer_rejects_non_2d():
    with pytest.raises(ValueError):
        write_feature_file("/tmp/never-written.npy", np.zeros(3, dtype=np.float32))

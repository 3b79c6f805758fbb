"""Feature-matrix file I/O in NPY format version 1.0.

Layout on disk is always little-endian float32, C order, time-major:
(tau, nu) for spectrograms and (tau, 3*nu) for delta-augmented feature
matrices.  The header is the ASCII dict numpy writes, space-padded so the
payload starts on a 64-byte boundary; files written here load with
numpy and vice versa.
"""

from __future__ import annotations

import ast
import os
import struct
from pathlib import Path

import numpy as np

from .errors import FormatError, UnsupportedFormatError
from .features import FeatureMatrix, Spectrogram

_MAGIC = b"\x93NUMPY"
_VERSION = (1, 0)
_ALIGN = 64
_DTYPE = "<f4"


def _build_header(shape: tuple[int, int]) -> bytes:
    text = "{'descr': '%s', 'fortran_order': False, 'shape': (%d, %d), }" % (
        _DTYPE,
        shape[0],
        shape[1],
    )
    prefix = len(_MAGIC) + 2 + 2  # magic, version, header-length field
    pad = -(prefix + len(text) + 1) % _ALIGN
    return (text + " " * pad + "\n").encode("ascii")


def write_feature_file(path: str | Path, matrix) -> None:
    """Write a Spectrogram, FeatureMatrix, or bare 2-D array as float32 NPY.

    Spectrograms are transposed to time-major on disk.  The write is
    atomic: content goes to a temp file in the same directory which is
    renamed into place, so readers never observe a partial file.
    """
    if isinstance(matrix, Spectrogram):
        values = matrix.values.T
    elif isinstance(matrix, FeatureMatrix):
        values = matrix.values
    else:
        values = np.asarray(matrix)
        if values.ndim != 2:
            raise ValueError(f"expected a 2-D matrix, got shape {values.shape}")

    payload = np.ascontiguousarray(values, dtype=_DTYPE)
    header = _build_header(payload.shape)
    path = Path(path)
    tmp = path.with_name(path.name + f".tmp.{os.getpid()}")
    try:
        with open(tmp, "wb") as fh:
            fh.write(_MAGIC)
            fh.write(bytes(_VERSION))
            fh.write(struct.pack("<H", len(header)))
            fh.write(header)
            fh.write(payload.tobytes())
        os.replace(tmp, path)
    finally:
        if tmp.exists():
            tmp.unlink()


def _read_raw(path: str | Path) -> np.ndarray:
    with open(path, "rb") as fh:
        magic = fh.read(len(_MAGIC))
        if magic != _MAGIC:
            raise FormatError(f"{path}: bad magic bytes {magic!r}")
        version = tuple(fh.read(2))
        if version != _VERSION:
            raise UnsupportedFormatError(f"{path}: unsupported NPY version {version}")
        length_field = fh.read(2)
        if len(length_field) != 2:
            raise FormatError(f"{path}: truncated header length")
        (header_len,) = struct.unpack("<H", length_field)
        header = fh.read(header_len)
        if len(header) != header_len:
            raise FormatError(f"{path}: truncated header")
        try:
            meta = ast.literal_eval(header.decode("ascii"))
        except (ValueError, SyntaxError, UnicodeDecodeError) as exc:
            raise FormatError(f"{path}: unparseable header") from exc
        if not isinstance(meta, dict) or set(meta) != {"descr", "fortran_order", "shape"}:
            raise FormatError(f"{path}: malformed header dict {meta!r}")
        if meta["descr"] != _DTYPE:
            raise UnsupportedFormatError(f"{path}: unsupported dtype {meta['descr']!r}")
        if meta["fortran_order"]:
            raise UnsupportedFormatError(f"{path}: fortran-ordered files are not supported")
        shape = meta["shape"]
        if (
            not isinstance(shape, tuple)
            or len(shape) != 2
            or not all(isinstance(s, int) and s >= 1 for s in shape)
        ):
            raise FormatError(f"{path}: expected a 2-D shape, got {shape!r}")
        data = fh.read()

    expected = shape[0] * shape[1] * 4
    if len(data) != expected:
        raise FormatError(f"{path}: payload is {len(data)} bytes, header implies {expected}")
    return np.frombuffer(data, dtype=_DTYPE).reshape(shape)


def read_feature_file(path: str | Path, nu: int | None = None):
    """Read a feature file back as a Spectrogram or FeatureMatrix.

    The format itself does not distinguish the two, so `nu` disambiguates:
    a (tau, nu) file becomes a Spectrogram, a (tau, 3*nu) file a
    FeatureMatrix, and any other width is a shape mismatch.  Without `nu`
    the file is read as a spectrogram whose channel count is the column
    count.
    """
    raw = _read_raw(path)
    cols = raw.shape[1]
    if nu is None or cols == nu:
        return Spectrogram(raw.T.astype(np.float64))
    if cols == 3 * nu:
        return FeatureMatrix(raw.astype(np.float64))
    raise FormatError(f"{path}: {cols} columns match neither nu={nu} nor 3*nu={3 * nu}")

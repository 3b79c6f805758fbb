"""PNG rendering of feature matrices for quick visual inspection.

Images are drawn time left-to-right and frequency bottom-to-top (channel
0 ends up on the bottom row).  Values are quantized to 8 bits against the
matrix min/max and mapped through a perceptually ordered dark-to-bright
colour table.  An integer zoom factor repeats pixels without resampling
so masked bands stay crisp.
"""

from __future__ import annotations

import os
from pathlib import Path
from typing import Iterable

import numpy as np
from PIL import Image

from . import masks as _masks
from .errors import EmptyInputError
from .features import Spectrogram
from .masks import MaskRecord

# Anchor colours, dark purple through teal to yellow, evenly spaced on
# [0, 1] and linearly interpolated to a 256-entry table.
_ANCHORS = (
    (68, 1, 84),
    (72, 40, 120),
    (62, 73, 137),
    (49, 104, 142),
    (38, 130, 142),
    (31, 158, 137),
    (53, 183, 121),
    (109, 205, 89),
    (180, 222, 44),
    (253, 231, 37),
)

_OVERLAY_RGB = (255, 64, 64)
_OVERLAY_ALPHA = 0.45


def colour_table() -> np.ndarray:
    """The 256x3 uint8 lookup table used for rendering."""
    anchors = np.asarray(_ANCHORS, dtype=np.float64)
    stops = np.linspace(0.0, 1.0, len(anchors))
    xs = np.linspace(0.0, 1.0, 256)
    table = np.stack([np.interp(xs, stops, anchors[:, c]) for c in range(3)], axis=1)
    return np.round(table).astype(np.uint8)


def quantize(values: np.ndarray) -> np.ndarray:
    """Map floats to uint8 levels spanning the observed min/max.

    A constant matrix maps to level 0 everywhere.
    """
    values = np.asarray(values, dtype=np.float64)
    lo = float(values.min())
    hi = float(values.max())
    if hi <= lo:
        return np.zeros(values.shape, dtype=np.uint8)
    scaled = (values - lo) / (hi - lo) * 255.0
    return np.round(scaled).astype(np.uint8)


def _as_channel_major(source) -> np.ndarray:
    if isinstance(source, Spectrogram):
        return source.values
    arr = np.asarray(source, dtype=np.float64)
    if arr.ndim != 2 or arr.size == 0:
        raise EmptyInputError("expected a non-empty 2-D array of features")
    # Raw arrays follow the on-disk convention: rows are frames.
    return arr.T


def render_image(
    source,
    zoom: int = 1,
    mask_records: Iterable[MaskRecord] | None = None,
) -> Image.Image:
    """Draw a spectrogram (or time-major array) as an RGB image.

    `mask_records` tints the affected rows/columns so masked regions are
    visible even where the fill value coincides with the background.
    """
    if zoom < 1:
        raise ValueError(f"zoom must be a positive integer, got {zoom}")
    grid = _as_channel_major(source)
    nu, tau = grid.shape
    levels = quantize(grid)
    rgb = colour_table()[levels].astype(np.float64)

    if mask_records is not None:
        overlay = np.zeros((nu, tau), dtype=bool)
        for record in mask_records:
            if record.axis == _masks.FREQUENCY:
                overlay[record.start : record.start + record.width, :] = True
            elif record.axis == _masks.TIME:
                overlay[:, record.start : record.start + record.width] = True
            else:
                raise ValueError(f"unknown mask axis {record.axis!r}")
        tint = np.asarray(_OVERLAY_RGB, dtype=np.float64)
        rgb[overlay] = (1.0 - _OVERLAY_ALPHA) * rgb[overlay] + _OVERLAY_ALPHA * tint

    pixels = np.round(rgb).astype(np.uint8)
    # Channel 0 belongs on the bottom row of the image.
    pixels = pixels[::-1, :, :]
    if zoom > 1:
        pixels = np.repeat(np.repeat(pixels, zoom, axis=0), zoom, axis=1)
    return Image.fromarray(pixels, mode="RGB")


def render_png(
    source,
    path,
    zoom: int = 1,
    mask_records: Iterable[MaskRecord] | None = None,
) -> None:
    """Render and write a PNG atomically.  Bytes depend only on the inputs."""
    image = render_image(source, zoom=zoom, mask_records=mask_records)
    target = Path(path)
    tmp = target.with_name(f"{target.name}.tmp.{os.getpid()}")
    image.save(tmp, format="PNG")
    os.replace(tmp, target)

"""Frequency and time masking.

Each mask zeroes a contiguous band of mel channels or time steps whose
width and position are drawn uniformly over integers.  The fill value is
exactly 0, which stands in for the mean only on zero-mean data, so these
operations require a normalized spectrogram and refuse anything else.
Masks may overlap; entries outside every mask are preserved bit-exactly.

Draw order per mask is width first, then start, so a fixed seed yields a
fixed sequence of rectangles.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NormalizationError
from .features import Spectrogram
from .rng import RngStream

FREQUENCY = "frequency"
TIME = "time"


@dataclass(frozen=True)
class FreqMaskParams:
    """Width limit and mask count for frequency masking."""

    max_width: int
    count: int = 1

    def __post_init__(self):
        if self.max_width < 0 or self.count < 0:
            raise ValueError("max_width and count must be non-negative")

    @property
    def enabled(self) -> bool:
        return self.max_width > 0 and self.count > 0


@dataclass(frozen=True)
class TimeMaskParams:
    """Width limit, fractional cap, and mask count for time masking.

    `max_frac` bounds any single mask to floor(max_frac * tau) steps, so
    short utterances are never mostly erased by a wide draw.
    """

    max_width: int
    max_frac: float = 1.0
    count: int = 1

    def __post_init__(self):
        if self.max_width < 0 or self.count < 0:
            raise ValueError("max_width and count must be non-negative")
        if not 0.0 <= self.max_frac <= 1.0:
            raise ValueError(f"max_frac must lie in [0, 1], got {self.max_frac}")

    @property
    def enabled(self) -> bool:
        return self.max_width > 0 and self.count > 0 and self.max_frac > 0.0


@dataclass(frozen=True)
class MaskRecord:
    """One applied mask: which axis, where it starts, how wide."""

    axis: str
    start: int
    width: int

    def __post_init__(self):
        if self.axis not in (FREQUENCY, TIME):
            raise ValueError(f"axis must be '{FREQUENCY}' or '{TIME}', got {self.axis!r}")
        if self.width < 0 or self.start < 0:
            raise ValueError("start and width must be non-negative")

    def as_dict(self) -> dict:
        return {"axis": self.axis, "start": self.start, "width": self.width}


def _require_normalized(spec: Spectrogram, op: str) -> None:
    if not spec.normalized:
        raise NormalizationError(
            f"{op} requires a normalized spectrogram: the 0 fill value is only "
            "mean-equivalent on zero-mean data"
        )


def _draw_band(axis_len: int, cap: int, rng: RngStream) -> tuple[int, int]:
    width = rng.randint(0, cap)
    start = rng.randint(0, axis_len - width - 1)
    return start, width


def freq_mask(
    spec: Spectrogram, params: FreqMaskParams, rng: RngStream
) -> tuple[Spectrogram, list[MaskRecord]]:
    """Zero `params.count` random bands of mel channels.

    Width is uniform on {0, ..., min(max_width, nu-1)} and the start on
    the positions where the band still fits; a full-height mask is never
    drawn.  Disabled params return the input untouched with no records.
    """
    if not params.enabled:
        return spec, []
    _require_normalized(spec, "freq_mask")
    cap = min(params.max_width, spec.nu - 1)
    values = spec.values.copy()
    records = []
    for _ in range(params.count):
        start, width = _draw_band(spec.nu, cap, rng)
        values[start : start + width, :] = 0.0
        records.append(MaskRecord(FREQUENCY, start, width))
    return spec.with_values(values), records


def time_mask(
    spec: Spectrogram, params: TimeMaskParams, rng: RngStream
) -> tuple[Spectrogram, list[MaskRecord]]:
    """Zero `params.count` random bands of time steps.

    The effective width cap is min(max_width, floor(max_frac * tau),
    tau - 1).  Disabled params return the input untouched with no records.
    """
    if not params.enabled:
        return spec, []
    _require_normalized(spec, "time_mask")
    cap = min(params.max_width, int(np.floor(params.max_frac * spec.tau)), spec.tau - 1)
    values = spec.values.copy()
    records = []
    for _ in range(params.count):
        start, width = _draw_band(spec.tau, cap, rng)
        values[:, start : start + width] = 0.0
        records.append(MaskRecord(TIME, start, width))
    return spec.with_values(values), records


def apply_masks(
    spec: Spectrogram,
    fparams: FreqMaskParams,
    tparams: TimeMaskParams,
    rng: RngStream,
) -> tuple[Spectrogram, list[MaskRecord]]:
    """All frequency masks, then all time masks, threading one stream."""
    masked, records = freq_mask(spec, fparams, rng)
    masked, time_records = time_mask(masked, tparams, rng)
    return masked, records + time_records

"""Augmentation policies and the one-call augmentation pipeline.

A policy bundles the warp limit, mask width limits, mask counts, and the
time-mask fractional cap, plus per-stage enable toggles for ablation
studies.  `augment` applies the enabled stages in the fixed order
warp -> frequency masks -> time masks, drawing each stage from its own
sub-stream so that toggling one stage never changes what another draws.

Built-in presets:

    name    warp  fmask  #f  tmask  frac  #t
    None       0      0   0      0   0.0   0
    LB        80     27   1    100   1.0   1
    LD        80     27   2    100   1.0   2
    SM        40     15   2     70   0.2   2
    SS        40     27   2     70   0.2   2
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace
from pathlib import Path

from .errors import UnknownPolicyError
from .features import Spectrogram
from .masks import FreqMaskParams, MaskRecord, TimeMaskParams, freq_mask, time_mask
from .rng import RngStream, split_stream
from .warp import ControlPointSet, WarpSpec, sample_warp, warp_spectrogram

__all__ = [
    "Policy",
    "WarpAudit",
    "AugmentAudit",
    "preset",
    "preset_names",
    "augment",
    "policy_from_dict",
    "load_policy",
    "split_stream",
    "RngStream",
]

_SCHEMA_KEYS = ("W", "F", "mF", "T", "p", "mT")


@dataclass(frozen=True)
class Policy:
    """A named augmentation recipe with per-stage toggles."""

    name: str
    max_time_warp: int
    max_freq_mask: int
    num_freq_masks: int
    max_time_mask: int
    time_mask_frac: float
    num_time_masks: int
    warp_enabled: bool = True
    fmask_enabled: bool = True
    tmask_enabled: bool = True

    def __post_init__(self):
        for field_name in (
            "max_time_warp",
            "max_freq_mask",
            "num_freq_masks",
            "max_time_mask",
            "num_time_masks",
        ):
            if getattr(self, field_name) < 0:
                raise ValueError(f"{field_name} must be non-negative")
        if not 0.0 <= self.time_mask_frac <= 1.0:
            raise ValueError(f"time_mask_frac must lie in [0, 1], got {self.time_mask_frac}")

    @property
    def is_identity(self) -> bool:
        """True when no stage can modify any input."""
        warps = self.warp_enabled and self.max_time_warp > 0
        fmasks = self.fmask_enabled and FreqMaskParams(self.max_freq_mask, self.num_freq_masks).enabled
        tmasks = self.tmask_enabled and TimeMaskParams(
            self.max_time_mask, self.time_mask_frac, self.num_time_masks
        ).enabled
        return not (warps or fmasks or tmasks)

    def with_stages(self, warp: bool | None = None, fmask: bool | None = None, tmask: bool | None = None) -> "Policy":
        """Copy with some stages toggled, for ablations."""
        return replace(
            self,
            warp_enabled=self.warp_enabled if warp is None else warp,
            fmask_enabled=self.fmask_enabled if fmask is None else fmask,
            tmask_enabled=self.tmask_enabled if tmask is None else tmask,
        )

    def as_dict(self) -> dict:
        """Flat JSON-schema form: name, W, F, mF, T, p, mT plus toggles."""
        return {
            "name": self.name,
            "W": self.max_time_warp,
            "F": self.max_freq_mask,
            "mF": self.num_freq_masks,
            "T": self.max_time_mask,
            "p": self.time_mask_frac,
            "mT": self.num_time_masks,
            "warp": self.warp_enabled,
            "fmask": self.fmask_enabled,
            "tmask": self.tmask_enabled,
        }


_PRESETS = {
    "None": Policy("None", 0, 0, 0, 0, 0.0, 0),
    "LB": Policy("LB", 80, 27, 1, 100, 1.0, 1),
    "LD": Policy("LD", 80, 27, 2, 100, 1.0, 2),
    "SM": Policy("SM", 40, 15, 2, 70, 0.2, 2),
    "SS": Policy("SS", 40, 27, 2, 70, 0.2, 2),
}
_PRESET_LOOKUP = {name.lower(): policy for name, policy in _PRESETS.items()}


def preset_names() -> tuple[str, ...]:
    return tuple(_PRESETS)


def preset(name: str) -> Policy:
    """Look up a built-in policy by name (case-insensitive)."""
    try:
        return _PRESET_LOOKUP[name.lower()]
    except KeyError:
        raise UnknownPolicyError(
            f"unknown policy {name!r}; valid names: {', '.join(_PRESETS)}"
        ) from None


def policy_from_dict(data: dict) -> Policy:
    """Build a Policy from its flat JSON-schema dict."""
    missing = [key for key in _SCHEMA_KEYS if key not in data]
    if missing:
        raise KeyError(f"policy dict is missing key(s): {', '.join(missing)}")
    return Policy(
        name=str(data.get("name", "custom")),
        max_time_warp=int(data["W"]),
        max_freq_mask=int(data["F"]),
        num_freq_masks=int(data["mF"]),
        max_time_mask=int(data["T"]),
        time_mask_frac=float(data["p"]),
        num_time_masks=int(data["mT"]),
        warp_enabled=bool(data.get("warp", True)),
        fmask_enabled=bool(data.get("fmask", True)),
        tmask_enabled=bool(data.get("tmask", True)),
    )


def load_policy(source: str | Path) -> Policy:
    """Resolve a preset name or a policy JSON file path."""
    text = str(source)
    if text.lower() in _PRESET_LOOKUP:
        return _PRESET_LOOKUP[text.lower()]
    path = Path(source)
    if path.is_file():
        return policy_from_dict(json.loads(path.read_text()))
    raise UnknownPolicyError(
        f"{text!r} is neither a preset ({', '.join(_PRESETS)}) nor a policy file"
    )


@dataclass(frozen=True)
class WarpAudit:
    """What the warp stage did to one utterance."""

    max_shift: int
    shift: int
    source_time: int | None
    applied: bool

    def as_dict(self) -> dict:
        return {
            "max_shift": self.max_shift,
            "shift": self.shift,
            "source_time": self.source_time,
            "applied": self.applied,
        }


@dataclass(frozen=True)
class AugmentAudit:
    """Full record of one augmentation: warp parameters and mask bands."""

    warp: WarpAudit | None
    masks: tuple[MaskRecord, ...]

    def as_dict(self) -> dict:
        return {
            "warp": self.warp.as_dict() if self.warp else None,
            "masks": [record.as_dict() for record in self.masks],
        }


def _warp_audit(cps: ControlPointSet, max_shift: int) -> WarpAudit:
    if cps.degenerate or len(cps.source_points) == 6:
        return WarpAudit(max_shift, 0, None, applied=False)
    t0 = int(cps.source_points[6, 0])
    shift = int(cps.dest_points[6, 0] - cps.source_points[6, 0])
    WarpSpec(max_shift, shift)  # validates |shift| <= max_shift
    return WarpAudit(max_shift, shift, t0, applied=True)


def augment(
    spec: Spectrogram, policy: Policy, rng: RngStream
) -> tuple[Spectrogram, AugmentAudit]:
    """Apply a policy's enabled stages in order: warp, freq masks, time masks.

    Masking stages require a normalized spectrogram.  Each stage draws
    from `rng.substream(stage)`, so per-utterance results are reproducible
    and independent of which other stages are enabled.  A policy with
    nothing to do returns the input bit-equal.
    """
    out = spec
    warp_audit = None
    if policy.warp_enabled and policy.max_time_warp > 0:
        cps = sample_warp(spec.tau, spec.nu, policy.max_time_warp, rng.substream("warp"))
        out = warp_spectrogram(out, cps)
        warp_audit = _warp_audit(cps, policy.max_time_warp)

    records: list[MaskRecord] = []
    fparams = FreqMaskParams(policy.max_freq_mask, policy.num_freq_masks)
    if policy.fmask_enabled and fparams.enabled:
        out, freq_records = freq_mask(out, fparams, rng.substream("fmask"))
        records.extend(freq_records)
    tparams = TimeMaskParams(policy.max_time_mask, policy.time_mask_frac, policy.num_time_masks)
    if policy.tmask_enabled and tparams.enabled:
        out, time_records = time_mask(out, tparams, rng.substream("tmask"))
        records.extend(time_records)

    return out, AugmentAudit(warp=warp_audit, masks=tuple(records))

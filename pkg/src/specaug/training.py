"""Training-side math: learning-rate schedules, label smoothing, fusion scoring.

The learning-rate schedule ramps linearly from zero, holds at the peak,
decays exponentially to 1/100 of the peak, and stays constant there.  A
separate step marks when constant-variance weight noise switches on; its
conventional standard deviation is `WEIGHT_NOISE_STD`, surfaced here for
callers that inject the noise themselves (this library does not).

Built-in schedules (ramp end, noise start, decay start, decay end):

    B   (500, 10000,  20000,  80000)
    D  (1000, 20000,  40000, 160000)
    L  (1000, 20000, 140000, 320000)
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import UnknownPolicyError

logger = logging.getLogger(__name__)

# Conventional standard deviation for the weight noise gated by
# `noise_active`; the noise itself is injected by the training loop.
WEIGHT_NOISE_STD = 0.075

DEFAULT_PEAK_LR = 0.001


@dataclass(frozen=True)
class ScheduleParams:
    """Step stamps and peak for a ramp / hold / decay / constant schedule."""

    ramp_end: int
    noise_start: int
    decay_start: int
    decay_end: int
    peak_lr: float = DEFAULT_PEAK_LR
    decay_floor_ratio: float = 0.01

    def __post_init__(self):
        if not (0 < self.ramp_end <= self.noise_start <= self.decay_start < self.decay_end):
            raise ValueError(
                "schedule stamps must satisfy 0 < ramp_end <= noise_start "
                f"<= decay_start < decay_end, got ({self.ramp_end}, {self.noise_start}, "
                f"{self.decay_start}, {self.decay_end})"
            )
        if self.peak_lr <= 0:
            raise ValueError(f"peak_lr must be positive, got {self.peak_lr}")
        if not 0 < self.decay_floor_ratio < 1:
            raise ValueError(f"decay_floor_ratio must lie in (0, 1), got {self.decay_floor_ratio}")


_SCHEDULES = {
    "B": (500, 10_000, 20_000, 80_000),
    "D": (1_000, 20_000, 40_000, 160_000),
    "L": (1_000, 20_000, 140_000, 320_000),
}


def schedule_names() -> tuple[str, ...]:
    return tuple(_SCHEDULES)


def schedule_preset(name: str, peak_lr: float = DEFAULT_PEAK_LR) -> ScheduleParams:
    """Look up one of the built-in schedules by name."""
    try:
        stamps = _SCHEDULES[name.upper()]
    except KeyError:
        raise UnknownPolicyError(
            f"unknown schedule {name!r}; valid names: {', '.join(_SCHEDULES)}"
        ) from None
    return ScheduleParams(*stamps, peak_lr=peak_lr)


def lr_at_step(step: int, sched: ScheduleParams) -> float:
    """Learning rate at an integer step.

    Linear ramp 0 -> peak over [0, ramp_end]; peak until decay_start;
    exponential decay to peak * decay_floor_ratio at decay_end; constant
    afterwards.  The pieces agree at every boundary.
    """
    if step < 0:
        raise ValueError(f"step must be non-negative, got {step}")
    if step >= sched.decay_end:
        return sched.peak_lr * sched.decay_floor_ratio
    if step <= sched.ramp_end:
        return sched.peak_lr * step / sched.ramp_end
    if step <= sched.decay_start:
        return sched.peak_lr
    rate = math.log(sched.decay_floor_ratio) / (sched.decay_end - sched.decay_start)
    return sched.peak_lr * math.exp(rate * (step - sched.decay_start))


def noise_active(step: int, sched: ScheduleParams) -> bool:
    """Whether weight noise is on: it starts at noise_start and stays on."""
    if step < 0:
        raise ValueError(f"step must be non-negative, got {step}")
    return step >= sched.noise_start


@dataclass(frozen=True)
class SmoothingSpec:
    """Uniform label smoothing, optionally switched off after a step."""

    uncertainty: float
    active_until_step: int | None = None

    def __post_init__(self):
        if not 0.0 <= self.uncertainty < 1.0:
            raise ValueError(f"uncertainty must lie in [0, 1), got {self.uncertainty}")

    def active(self, step: int) -> bool:
        return self.active_until_step is None or step < self.active_until_step


def smooth_labels(
    correct_index: int, vocab_size: int, spec: SmoothingSpec, step: int = 0
) -> np.ndarray:
    """Target distribution for one label under uniform smoothing.

    While active, the correct class gets 1 - uncertainty and every other
    class uncertainty / (vocab_size - 1); once inactive the target is
    one-hot.  One entry absorbs the rounding residue so the vector sums
    to 1.
    """
    if vocab_size < 2:
        raise ValueError(f"vocab_size must be >= 2, got {vocab_size}")
    if not 0 <= correct_index < vocab_size:
        raise ValueError(f"correct_index {correct_index} out of range for vocab {vocab_size}")
    out = np.zeros(vocab_size)
    if spec.active(step) and spec.uncertainty > 0.0:
        out[:] = spec.uncertainty / (vocab_size - 1)
        out[correct_index] = 1.0 - spec.uncertainty
        absorber = vocab_size - 1 if correct_index != vocab_size - 1 else vocab_size - 2
        residue = 1.0 - (out.sum() - out[absorber])
        out[absorber] = residue
    else:
        out[correct_index] = 1.0
    return out


@dataclass(frozen=True)
class FusionWeights:
    """Language-model weight and coverage-reward coefficient for decoding."""

    lm_weight: float = 0.0
    coverage_weight: float = 0.0

    def __post_init__(self):
        if self.lm_weight < 0 or self.coverage_weight < 0:
            raise ValueError("fusion weights must be non-negative")
        if not (math.isfinite(self.lm_weight) and math.isfinite(self.coverage_weight)):
            raise ValueError("fusion weights must be finite")


@dataclass(frozen=True)
class HypothesisScore:
    """Per-hypothesis decoding statistics entering the fused score."""

    asr_logprob: float
    lm_logprob: float = 0.0
    coverage: float = 0.0


def fused_score(h: HypothesisScore, w: FusionWeights) -> float:
    """asr + lm_weight * lm + coverage_weight * coverage.

    The coverage term is an additive reward for attending broadly over
    the source.  Non-finite inputs propagate (with a warning) so callers
    can spot broken upstream scorers instead of silently ranking on NaN.
    """
    score = h.asr_logprob + w.lm_weight * h.lm_logprob + w.coverage_weight * h.coverage
    if not math.isfinite(score):
        logger.warning("non-finite fused score %r from %r", score, h)
    return score


def grid_search_fusion(
    candidates: Sequence[tuple[float, float]],
    scorer: Callable[[float, float], float],
) -> tuple[float, float]:
    """Pick the grid point minimizing `scorer(lm_weight, coverage_weight)`.

    Ties break toward the smallest lm weight, then the smallest coverage
    weight, so a sweep is reproducible regardless of grid order.
    """
    if not candidates:
        raise ValueError("candidate grid is empty")
    return min(candidates, key=lambda point: (scorer(*point), point[0], point[1]))

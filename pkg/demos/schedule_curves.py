"""
Learning rate schedules and label smoothing
===========================================

Walk the three built-in schedules through their phases (ramp, hold,
exponential decay, floor) and build a smoothed target distribution.
"""

import numpy as np

from specaug import (
    SmoothingSpec,
    lr_at_step,
    noise_active,
    schedule_names,
    schedule_preset,
    smooth_labels,
)

# Each schedule is four step stamps: ramp end, noise start, decay start,
# decay end.  The rate decays to 1% of peak and then holds there.
for name in schedule_names():
    sched = schedule_preset(name)
    probe = [
        0,
        sched.ramp_end // 2,
        sched.ramp_end,
        sched.decay_start,
        (sched.decay_start + sched.decay_end) // 2,
        sched.decay_end,
        2 * sched.decay_end,
    ]
    print(f"schedule {name}: ramp={sched.ramp_end} noise={sched.noise_start} "
          f"decay={sched.decay_start}..{sched.decay_end}")
    for step in probe:
        flag = "on " if noise_active(step, sched) else "off"
        print(f"  step {step:7d}  lr={lr_at_step(step, sched):.3e}  noise {flag}")

# The decay is exact: halfway through the decay window the rate is
# peak * 0.01 ** 0.5.
sched = schedule_preset("B")
mid = (sched.decay_start + sched.decay_end) // 2
expected = sched.peak_lr * 0.01 ** ((mid - sched.decay_start) / (sched.decay_end - sched.decay_start))
print(f"\nmid-decay check: {lr_at_step(mid, sched):.12e} vs {expected:.12e}")

# Label smoothing moves uncertainty mass off the correct class and
# spreads it uniformly over the rest of the vocabulary.
spec = SmoothingSpec(uncertainty=0.1)
target = smooth_labels(correct_index=3, vocab_size=10, spec=spec)
print(f"\nsmoothed target: {np.round(target, 4)}")
print(f"correct class gets exactly {target[3]}, row sums to {target.sum()}")

# An optional step cutoff turns smoothing off late in training.
timed = SmoothingSpec(uncertainty=0.1, active_until_step=5000)
late = smooth_labels(correct_index=3, vocab_size=10, spec=timed, step=6000)
print(f"after the cutoff the target is one-hot again: {late}")

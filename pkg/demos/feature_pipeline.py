"""
From waveform to log mel features
=================================

Synthesize a short tone, run it through the frontend, attach delta
features, and round-trip the result through the on-disk matrix format.
"""

import math
import pathlib
import struct

import numpy as np

from specaug import (
    FrontendConfig,
    add_deltas,
    load_wav,
    log_mel,
    mel_center_frequencies,
    read_feature_file,
    render_png,
    write_feature_file,
)

out_dir = pathlib.Path("demo_out")
out_dir.mkdir(exist_ok=True)

# Build one second of a 440 Hz sine as a minimal PCM16 WAV, entirely in
# memory.  Any mono or multi-channel PCM16 file works the same way.
rate = 16000
samples = [0.5 * math.sin(2 * math.pi * 440.0 * n / rate) for n in range(rate)]
pcm = b"".join(struct.pack("<h", int(s * 32767)) for s in samples)
header = struct.pack(
    "<4sI4s4sIHHIIHH4sI",
    b"RIFF", 36 + len(pcm), b"WAVE", b"fmt ", 16, 1, 1,
    rate, rate * 2, 2, 16, b"data", len(pcm),
)
wav_path = out_dir / "tone.wav"
wav_path.write_bytes(header + pcm)

# Decode and featurize with the default 25 ms / 10 ms / 80 channel setup.
audio = load_wav(wav_path)
print(f"decoded {len(audio.samples)} samples at {audio.sample_rate_hz} Hz")

config = FrontendConfig()
spec = log_mel(audio, config)
print(f"spectrogram: {spec.nu} channels x {spec.tau} frames")

# The tone should concentrate energy in the channel whose center
# frequency sits closest to 440 Hz.
centers = mel_center_frequencies(config)
hot = int(np.argmax(spec.values.mean(axis=1)))
print(f"hottest channel {hot}, center {centers[hot]:.1f} Hz")

# Stack first and second order deltas next to the static features and
# write the result as a plain .npy matrix (frames x 3*channels).  The
# file stores float32, so the round trip is exact at that precision.
feats = add_deltas(spec)
npy_path = out_dir / "tone_features.npy"
write_feature_file(npy_path, feats)
again = read_feature_file(npy_path, nu=config.nu)
print(f"wrote {npy_path} ({feats.values.shape[1]} columns per frame)")
same = np.array_equal(again.values.astype(np.float32), feats.values.astype(np.float32))
print(f"round trip exact: {same}")

# A quick visual check: channel 0 renders at the bottom of the image.
render_png(spec, out_dir / "tone.png", zoom=2)
print(f"rendered {out_dir / 'tone.png'}")

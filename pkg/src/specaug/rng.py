"""Seeded, splittable random streams.

A stream is identified by ``(seed, stream_id)`` plus an optional tag path,
and that identity fully determines the draw sequence: no global state, no
dependence on platform, process count, or library versions.  Batch code
derives one stream per utterance (`split_stream`) and one sub-stream per
augmentation stage (`RngStream.substream`), so toggling a stage never
shifts the draws consumed by any other stage.

The construction is hash-split: the stream identity is keyed through
SHA-256 to an independent 64-bit starting point, and successive draws come
from a splitmix64 counter walk from that point.
"""

from __future__ import annotations

import hashlib

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15


def _mix64(z: int) -> int:
    """splitmix64 output scrambler."""
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


class RngStream:
    """Deterministic 64-bit random stream.

    Distinct ``(seed, stream_id)`` pairs and distinct tag paths give
    statistically independent streams; identical identities replay the
    exact same draw sequence.
    """

    __slots__ = ("seed", "stream_id", "path", "_counter")

    def __init__(self, seed: int, stream_id: int = 0, path: tuple[str, ...] = ()):
        self.seed = seed & _MASK64
        self.stream_id = stream_id & _MASK64
        self.path = tuple(path)
        key = ":".join([str(self.seed), str(self.stream_id), *self.path])
        digest = hashlib.sha256(key.encode("ascii")).digest()
        self._counter = int.from_bytes(digest[:8], "big")

    def substream(self, tag: str) -> "RngStream":
        """Derive an independent child stream named by `tag`.

        The child starts from a fresh hash of the full identity, so draws
        taken from the parent never affect the child and vice versa.
        """
        return RngStream(self.seed, self.stream_id, self.path + (tag,))

    def next_u64(self) -> int:
        """Next raw 64-bit draw."""
        self._counter = (self._counter + _GOLDEN) & _MASK64
        return _mix64(self._counter)

    def randint(self, low: int, high: int) -> int:
        """Uniform integer on the closed range [low, high].

        Uses rejection sampling on the raw 64-bit draws, so every value in
        the range is exactly equally likely.
        """
        if high < low:
            raise ValueError(f"empty range [{low}, {high}]")
        span = high - low + 1
        limit = (1 << 64) - ((1 << 64) % span)
        while True:
            draw = self.next_u64()
            if draw < limit:
                return low + (draw % span)

    def __repr__(self) -> str:
        return f"RngStream(seed={self.seed}, stream_id={self.stream_id}, path={self.path!r})"


def split_stream(master_seed: int, utterance_index: int) -> RngStream:
    """Per-utterance stream for data-parallel batch augmentation.

    The mapping is injective in `utterance_index`, so a batch produces
    identical per-utterance results whether processed serially or by any
    number of workers.
    """
    return RngStream(master_seed, utterance_index)

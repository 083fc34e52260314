"""Deterministic counter-based random streams.

Every generator in this package draws from a stream identified by
(seed, stream_id). The construction is fixed so that identical inputs give
byte-identical corpora across runs, backends, and shard layouts:

    key      = mix64(mix64(seed + GOLDEN) + stream_id)
    draw i   = mix64(key + (i + 1) * GOLDEN)          (i = 0, 1, ...)
    child k  = stream with key' = mix64(key + (k + 1) * CHILD_GAMMA)

mix64 is the splitmix64 finalizer; GOLDEN is the splitmix64 increment
(2^64 / golden ratio) and CHILD_GAMMA a distinct odd constant so child
derivation never aliases the draw sequence. All arithmetic is mod 2^64.

Derived draws are integer-only, which keeps the compiled and pure-Python
kernels exactly equivalent:

  * bounded(n)   -- Lemire multiply-high: (u64 * n) >> 64. No rejection;
                    the bias is at most n / 2^64.
  * fraction53() -- top 53 bits of a draw, uniform on [0, 2^53).
  * chance(t)    -- fraction53() < t, with t = threshold53(p) = round(p * 2^53).
"""

from __future__ import annotations

MASK64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15
CHILD_GAMMA = 0xD1B54A32D192ED03

FRACTION_BITS = 53
FRACTION_ONE = 1 << FRACTION_BITS


def mix64(z: int) -> int:
    """splitmix64 finalizer: a bijective mixing of one 64-bit word."""
    z &= MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def stream_key(seed: int, stream_id: int) -> int:
    return mix64((mix64((seed + GOLDEN) & MASK64) + stream_id) & MASK64)


def child_key(key: int, index: int) -> int:
    return mix64((key + (index + 1) * CHILD_GAMMA) & MASK64)


def threshold53(p: float) -> int:
    """Map a probability to the integer threshold used by chance()."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"probability must be in [0, 1], got {p}")
    return int(round(p * FRACTION_ONE))


class RandomSource:
    """A deterministic stream of draws identified by (seed, stream_id).

    Fresh instances with equal identifiers produce equal draw sequences.
    substream(k) derives an independent child stream; generators use
    substream(pair_index) so output does not depend on shard layout.
    """

    __slots__ = ("seed", "stream_id", "_key", "_count")

    def __init__(self, seed: int = 0, stream_id: int = 0):
        self.seed = seed & MASK64
        self.stream_id = stream_id & MASK64
        self._key = stream_key(self.seed, self.stream_id)
        self._count = 0

    @classmethod
    def _from_key(cls, key: int) -> "RandomSource":
        rng = cls.__new__(cls)
        rng.seed = 0
        rng.stream_id = 0
        rng._key = key & MASK64
        rng._count = 0
        return rng

    @property
    def key(self) -> int:
        return self._key

    def next_u64(self) -> int:
        self._count += 1
        return mix64((self._key + self._count * GOLDEN) & MASK64)

    def fraction53(self) -> int:
        return self.next_u64() >> 11

    def bounded(self, n: int) -> int:
        """Uniform integer in [0, n)."""
        if n <= 0:
            raise ValueError(f"bounded() needs n >= 1, got {n}")
        return (self.next_u64() * n) >> 64

    def chance(self, threshold: int) -> bool:
        """True with probability threshold / 2^53 (see threshold53)."""
        return (self.next_u64() >> 11) < threshold

    def substream(self, index: int) -> "RandomSource":
        return RandomSource._from_key(child_key(self._key, index))

    def __repr__(self) -> str:
        return f"RandomSource(seed={self.seed}, stream_id={self.stream_id})"

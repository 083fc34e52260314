"""Parallel corpus representation, file I/O, filtering, and length sampling.

File format: UTF-8 plain text, one sentence per line, tokens separated by a
single space, LF line endings, no BOM. A token is any maximal run of
non-whitespace characters; no further normalization is applied.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterator

from .rng import FRACTION_ONE, RandomSource


@dataclass(frozen=True)
class SentencePair:
    source: tuple[str, ...]
    target: tuple[str, ...]


@dataclass
class ParallelCorpus:
    pairs: list[SentencePair] = field(default_factory=list)
    provenance: str = ""

    def __len__(self) -> int:
        return len(self.pairs)

    def __iter__(self) -> Iterator[SentencePair]:
        return iter(self.pairs)

    def sources(self) -> list[tuple[str, ...]]:
        return [p.source for p in self.pairs]

    def targets(self) -> list[tuple[str, ...]]:
        return [p.target for p in self.pairs]


def _read_tokenized_lines(path) -> list[tuple[str, ...]]:
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    lines = text.splitlines()
    out = []
    for lineno, line in enumerate(lines, start=1):
        tokens = tuple(line.split())
        if not tokens:
            raise ValueError(f"{path}: empty line {lineno}")
        out.append(tokens)
    return out


def read_parallel(source_path, target_path, provenance: str = "") -> ParallelCorpus:
    """Read a sentence-aligned file pair; pair i is line i of each file."""
    src = _read_tokenized_lines(source_path)
    trg = _read_tokenized_lines(target_path)
    if len(src) != len(trg):
        raise ValueError(
            f"line count mismatch: {source_path} has {len(src)} lines, "
            f"{target_path} has {len(trg)}"
        )
    pairs = [SentencePair(s, t) for s, t in zip(src, trg)]
    return ParallelCorpus(pairs, provenance or f"{source_path}||{target_path}")


def write_parallel(corpus: ParallelCorpus, source_path, target_path) -> None:
    """Write both sides, one sentence per line, single-space separated."""
    with open(source_path, "w", encoding="utf-8", newline="\n") as fs:
        for pair in corpus.pairs:
            fs.write(" ".join(pair.source))
            fs.write("\n")
    with open(target_path, "w", encoding="utf-8", newline="\n") as ft:
        for pair in corpus.pairs:
            ft.write(" ".join(pair.target))
            ft.write("\n")


def filter_corpus(corpus: ParallelCorpus, max_length_ratio: float = math.inf,
                  dedup: bool = True) -> ParallelCorpus:
    """Drop exact duplicate pairs (keeping the first) and extreme-ratio pairs.

    A pair is extreme when max(|s|,|t|) / min(|s|,|t|) > max_length_ratio.
    Relative order of survivors is preserved; the operation is idempotent.
    """
    if max_length_ratio < 1:
        raise ValueError(
            f"max_length_ratio must be >= 1, got {max_length_ratio}"
        )
    seen = set()
    kept = []
    for pair in corpus.pairs:
        ls, lt = len(pair.source), len(pair.target)
        if max(ls, lt) > max_length_ratio * min(ls, lt):
            continue
        if dedup:
            key = (pair.source, pair.target)
            if key in seen:
                continue
            seen.add(key)
        kept.append(pair)
    return ParallelCorpus(kept, corpus.provenance)


@dataclass(frozen=True)
class LengthDistribution:
    """Normal length model: draws are rounded to the nearest integer and
    clamped to [min_len, max_len]."""

    mean: float
    stddev: float
    min_len: int
    max_len: int

    def __post_init__(self):
        if not self.mean > 0:
            raise ValueError(f"mean must be > 0, got {self.mean}")
        if self.stddev < 0:
            raise ValueError(f"stddev must be >= 0, got {self.stddev}")
        if self.min_len < 1:
            raise ValueError(f"min_len must be >= 1, got {self.min_len}")
        if self.max_len < self.min_len:
            raise ValueError(
                f"max_len must be >= min_len, got {self.max_len} < {self.min_len}"
            )


DEFAULT_LENGTHS = LengthDistribution(mean=9.0, stddev=3.0, min_len=1, max_len=64)


@lru_cache(maxsize=64)
def length_thresholds(dist: LengthDistribution) -> tuple[int, ...]:
    """Cumulative probabilities of each clamped length, scaled to 2^53.

    Entry k is P(length <= min_len + k) * 2^53 rounded; the last entry is
    exactly 2^53. Sampling reduces to one 53-bit draw plus a table lookup,
    which keeps the kernels integer-only and bit-identical across backends.
    """
    span = dist.max_len - dist.min_len + 1
    if dist.stddev == 0:
        constant = min(dist.max_len, max(dist.min_len, int(math.floor(dist.mean + 0.5))))
        table = [0] * span
        for k in range(constant - dist.min_len, span):
            table[k] = FRACTION_ONE
        return tuple(table)

    def cdf(x: float) -> float:
        return 0.5 * (1.0 + math.erf((x - dist.mean) / (dist.stddev * math.sqrt(2.0))))

    table = []
    for k in range(span - 1):
        # mass below min_len clamps up into the first entry
        upper = dist.min_len + k + 0.5
        table.append(min(FRACTION_ONE, int(round(cdf(upper) * FRACTION_ONE))))
    table.append(FRACTION_ONE)
    for k in range(1, span):
        if table[k] < table[k - 1]:
            table[k] = table[k - 1]
    return tuple(table)


def sample_length(dist: LengthDistribution, rng: RandomSource) -> int:
    """One draw from the rounded, clamped normal. Consumes exactly one draw."""
    table = length_thresholds(dist)
    u = rng.fraction53()
    lo, hi = 0, len(table) - 1
    while lo < hi:
        mid = (lo + hi) >> 1
        if u < table[mid]:
            hi = mid
        else:
            lo = mid + 1
    return dist.min_len + lo

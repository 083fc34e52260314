"""Aligned-phrase extraction and phrase-concatenation generation.

A phrase pair is a source span and target span such that at least one
alignment link falls inside the span box and no link crosses its boundary.
Extraction enumerates target spans, takes the minimal source span of their
links, checks consistency, and (optionally) extends over unaligned boundary
source words; unaligned target boundary words are covered by the span loop
itself. Counts accumulate one per extracted box occurrence.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass, field

from .corpus import (
    LengthDistribution,
    ParallelCorpus,
    SentencePair,
    length_thresholds,
)
from .rng import RandomSource

DEFAULT_PHRASE_COUNTS = LengthDistribution(mean=4.0, stddev=1.5, min_len=1, max_len=20)


@dataclass(frozen=True)
class PhrasePair:
    source: tuple[str, ...]
    target: tuple[str, ...]
    count: int = 1


@dataclass
class PhraseTable:
    """Deduplicated phrase pairs in lexicographic (source, target) order."""

    entries: list = field(default_factory=list)
    max_phrase_len: int = 7


@dataclass
class PhraseCatConfig:
    phrase_count_dist: LengthDistribution = DEFAULT_PHRASE_COUNTS
    weighting: str = "uniform"  # uniform over types, or frequency-weighted
    rng: RandomSource = field(default_factory=RandomSource)

    def __post_init__(self):
        if self.weighting not in ("uniform", "frequency"):
            raise ValueError(
                f"weighting must be uniform or frequency, got {self.weighting!r}"
            )


def _boxes_for_pair(source, target, links, max_phrase_len, extend_unaligned):
    n, m = len(source), len(target)
    src_aligned = [False] * n
    trg_aligned = [False] * m
    for i, j in links:
        src_aligned[i] = True
        trg_aligned[j] = True
    boxes = []
    for j1 in range(m):
        for j2 in range(j1, min(m, j1 + max_phrase_len)):
            i_min, i_max = n, -1
            for i, j in links:
                if j1 <= j <= j2:
                    i_min = min(i_min, i)
                    i_max = max(i_max, i)
            if i_max < 0:
                continue  # no link inside: not a phrase box
            consistent = True
            for i, j in links:
                if i_min <= i <= i_max and not j1 <= j <= j2:
                    consistent = False
                    break
            if not consistent:
                continue
            if not extend_unaligned:
                if (trg_aligned[j1] and trg_aligned[j2]
                        and i_max - i_min + 1 <= max_phrase_len):
                    boxes.append((i_min, i_max, j1, j2))
                continue
            i1 = i_min
            while i1 >= 0 and (i1 == i_min or not src_aligned[i1]):
                i2 = i_max
                while i2 < n and (i2 == i_max or not src_aligned[i2]):
                    if i2 - i1 + 1 <= max_phrase_len:
                        boxes.append((i1, i2, j1, j2))
                    i2 += 1
                i1 -= 1
    return boxes


def extract_phrases(corpus: ParallelCorpus, alignments, max_phrase_len: int = 7,
                    extend_unaligned: bool = True) -> PhraseTable:
    """Extract every consistent phrase pair with spans <= max_phrase_len."""
    if max_phrase_len < 1:
        raise ValueError(f"max_phrase_len must be >= 1, got {max_phrase_len}")
    if len(alignments) != len(corpus):
        raise ValueError(
            f"{len(alignments)} alignments for {len(corpus)} sentence pairs"
        )
    counts: dict = {}
    for index, (pair, links) in enumerate(zip(corpus.pairs, alignments)):
        n, m = len(pair.source), len(pair.target)
        for i, j in links:
            if not (0 <= i < n and 0 <= j < m):
                raise ValueError(
                    f"alignment link ({i},{j}) out of bounds for pair {index} "
                    f"({n} source, {m} target tokens)"
                )
        for i1, i2, j1, j2 in _boxes_for_pair(
            pair.source, pair.target, links, max_phrase_len, extend_unaligned
        ):
            key = (pair.source[i1:i2 + 1], pair.target[j1:j2 + 1])
            counts[key] = counts.get(key, 0) + 1
    entries = [
        PhrasePair(src, trg, counts[(src, trg)])
        for src, trg in sorted(counts)
    ]
    return PhraseTable(entries, max_phrase_len)


def phrase_cat_pairs(table: PhraseTable, num_pairs: int,
                     config: PhraseCatConfig):
    """Yield (SentencePair, drawn entry indices) for each generated pair.

    Pair i uses substream i: one phrase-count draw, then that many entry
    draws (uniform over entries, or weighted by entry counts).
    """
    if not table.entries:
        raise ValueError("cannot generate from an empty phrase table")
    if num_pairs < 1:
        raise ValueError(f"num_pairs must be >= 1, got {num_pairs}")
    count_table = length_thresholds(config.phrase_count_dist)
    min_count = config.phrase_count_dist.min_len
    n_entries = len(table.entries)
    cumulative = None
    total = 0
    if config.weighting == "frequency":
        cumulative = []
        for entry in table.entries:
            total += entry.count
            cumulative.append(total)
    for i in range(num_pairs):
        sub = config.rng.substream(i)
        u = sub.fraction53()
        lo, hi = 0, len(count_table) - 1
        while lo < hi:
            mid = (lo + hi) >> 1
            if u < count_table[mid]:
                hi = mid
            else:
                lo = mid + 1
        n_phrases = min_count + lo
        drawn = []
        for _ in range(n_phrases):
            if cumulative is None:
                drawn.append(sub.bounded(n_entries))
            else:
                drawn.append(bisect.bisect_right(cumulative, sub.bounded(total)))
        source: list[str] = []
        target: list[str] = []
        for k in drawn:
            entry = table.entries[k]
            source.extend(entry.source)
            target.extend(entry.target)
        yield SentencePair(tuple(source), tuple(target)), drawn


def gen_phrase_cat(table: PhraseTable, num_pairs: int,
                   config: PhraseCatConfig) -> ParallelCorpus:
    """Concatenate independently sampled phrase pairs, sources and targets in
    the same draw order."""
    pairs = [pair for pair, _ in phrase_cat_pairs(table, num_pairs, config)]
    return ParallelCorpus(pairs, f"phrase-cat seed={config.rng.seed}")


def write_phrase_table(table: PhraseTable, path) -> None:
    """TSV: source phrase<TAB>target phrase<TAB>count, phrases space-joined."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for entry in table.entries:
            fh.write(
                f"{' '.join(entry.source)}\t{' '.join(entry.target)}\t{entry.count}\n"
            )


def read_phrase_table(path, max_phrase_len: int = 7) -> PhraseTable:
    entries = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line:
                continue
            parts = line.split("\t")
            if len(parts) != 3:
                raise ValueError(
                    f"{path}: line {lineno} is not source<TAB>target<TAB>count"
                )
            entries.append(PhrasePair(
                tuple(parts[0].split()), tuple(parts[1].split()), int(parts[2])
            ))
    entries.sort(key=lambda e: (e.source, e.target))
    return PhraseTable(entries, max_phrase_len)

"""Vocabulary-overlap measurement and corpus summaries.

Overlap counts distinct whitespace token types per file and their exact set
intersection; inputs are expected to be tokenized upstream (any scheme), so
the measurement is tokenizer-agnostic.
"""

from __future__ import annotations

import statistics
from dataclasses import dataclass

from .corpus import ParallelCorpus


@dataclass
class VocabOverlapReport:
    v_pt: int  # distinct types in the pre-training side
    v_ft: int  # distinct types in the fine-tuning side
    overlap: int
    label: str = ""

    def to_dict(self) -> dict:
        return {
            "label": self.label,
            "pretrain_types": self.v_pt,
            "finetune_types": self.v_ft,
            "overlap": self.overlap,
        }


def _types_of_file(path) -> set:
    types: set = set()
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            types.update(line.split())
    if not types:
        raise ValueError(f"{path} contains no tokens")
    return types


def vocab_overlap(pretrain_path, finetune_path, label: str = "") -> VocabOverlapReport:
    pt = _types_of_file(pretrain_path)
    ft = _types_of_file(finetune_path)
    return VocabOverlapReport(len(pt), len(ft), len(pt & ft), label)


def vocab_overlap_types(pretrain_types, finetune_types,
                        label: str = "") -> VocabOverlapReport:
    """Overlap over already-collected type sets."""
    pt = set(pretrain_types)
    ft = set(finetune_types)
    return VocabOverlapReport(len(pt), len(ft), len(pt & ft), label)


@dataclass
class SideSummary:
    tokens: int
    types: int
    mean_length: float
    stddev_length: float
    length_histogram: dict

    def to_dict(self) -> dict:
        return {
            "tokens": self.tokens,
            "types": self.types,
            "mean_length": self.mean_length,
            "stddev_length": self.stddev_length,
            "length_histogram": {str(k): v for k, v in sorted(self.length_histogram.items())},
        }


@dataclass
class CorpusSummary:
    pairs: int
    source: SideSummary
    target: SideSummary

    def to_dict(self) -> dict:
        return {
            "pairs": self.pairs,
            "source": self.source.to_dict(),
            "target": self.target.to_dict(),
        }


def _summarize_side(sentences) -> SideSummary:
    lengths = []
    types: set = set()
    tokens = 0
    histogram: dict = {}
    for sentence in sentences:
        n = len(sentence)
        lengths.append(n)
        tokens += n
        types.update(sentence)
        histogram[n] = histogram.get(n, 0) + 1
    mean = statistics.fmean(lengths)
    stddev = statistics.pstdev(lengths) if len(lengths) > 1 else 0.0
    return SideSummary(tokens, len(types), mean, stddev, histogram)


def corpus_summary(corpus: ParallelCorpus) -> CorpusSummary:
    if len(corpus) == 0:
        raise ValueError("cannot summarize an empty corpus")
    return CorpusSummary(
        len(corpus),
        _summarize_side(p.source for p in corpus.pairs),
        _summarize_side(p.target for p in corpus.pairs),
    )

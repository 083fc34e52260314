"""synthpara: deterministic generators and audit tools for synthetic
parallel pre-training corpora.

Generators (obfuscation, phrase concatenation, identity, case-mapping,
permuted trees) are pure functions of their configuration and a seeded
counter-based random stream; rerunning with the same seed reproduces output
byte for byte, independent of shard count. Audit tools measure hallucinated
toxicity and vocabulary overlap, and filter parallel corpora.
"""

from .corpus import (
    DEFAULT_LENGTHS,
    LengthDistribution,
    ParallelCorpus,
    SentencePair,
    filter_corpus,
    read_parallel,
    sample_length,
    write_parallel,
)
from .rng import RandomSource
from ._kernels import BACKEND as KERNEL_BACKEND

__version__ = "0.1.0"

__all__ = [
    "DEFAULT_LENGTHS",
    "KERNEL_BACKEND",
    "LengthDistribution",
    "ParallelCorpus",
    "RandomSource",
    "SentencePair",
    "filter_corpus",
    "read_parallel",
    "sample_length",
    "write_parallel",
    "__version__",
]

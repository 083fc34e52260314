import math
import random

import pytest

from synthpara.corpus import (
    LengthDistribution,
    ParallelCorpus,
    SentencePair,
    filter_corpus,
    read_parallel,
    sample_length,
    write_parallel,
)
from synthpara.rng import RandomSource


def _write(path, lines):
    path.write_text("".join(line + "\n" for line in lines), encoding="utf-8")


def test_read_basic(tmp_path):
    _write(tmp_path / "s", ["a b"])
    _write(tmp_path / "t", ["A B"])
    corpus = read_parallel(tmp_path / "s", tmp_path / "t")
    assert corpus.pairs == [SentencePair(("a", "b"), ("A", "B"))]


def test_read_line_count_mismatch(tmp_path):
    _write(tmp_path / "s", ["a", "b", "c"])
    _write(tmp_path / "t", ["A", "B"])
    with pytest.raises(ValueError, match=r"3.*2|2.*3"):
        read_parallel(tmp_path / "s", tmp_path / "t")


def test_read_empty_line_reports_number(tmp_path):
    _write(tmp_path / "s", ["a", "", "c"])
    _write(tmp_path / "t", ["A", "B", "C"])
    with pytest.raises(ValueError, match="line 2"):
        read_parallel(tmp_path / "s", tmp_path / "t")


def test_round_trip_identity(tmp_path):
    corpus = ParallelCorpus([
        SentencePair(("a", "b"), ("A",)),
        SentencePair(("x",), ("Y", "Z")),
    ])
    write_parallel(corpus, tmp_path / "s", tmp_path / "t")
    again = read_parallel(tmp_path / "s", tmp_path / "t")
    assert again.pairs == corpus.pairs
    # canonical files survive a read->write cycle byte for byte
    write_parallel(again, tmp_path / "s2", tmp_path / "t2")
    assert (tmp_path / "s2").read_bytes() == (tmp_path / "s").read_bytes()
    assert (tmp_path / "t2").read_bytes() == (tmp_path / "t").read_bytes()


def test_write_formats(tmp_path):
    write_parallel(
        ParallelCorpus([SentencePair(("a", "b"), ("A", "B"))]),
        tmp_path / "s", tmp_path / "t",
    )
    assert (tmp_path / "s").read_bytes() == b"a b\n"
    assert (tmp_path / "t").read_bytes() == b"A B\n"


def test_write_empty_corpus(tmp_path):
    write_parallel(ParallelCorpus([]), tmp_path / "s", tmp_path / "t")
    assert (tmp_path / "s").read_bytes() == b""
    assert (tmp_path / "t").read_bytes() == b""


def test_filter_dedup_keeps_first():
    pair = SentencePair(("a",), ("B",))
    other = SentencePair(("c",), ("D",))
    corpus = ParallelCorpus([pair, other, pair])
    assert filter_corpus(corpus).pairs == [pair, other]


def test_filter_length_ratio():
    long_pair = SentencePair(tuple("abcdefghij"), ("X",))
    ok_pair = SentencePair(("a", "b"), ("X",))
    corpus = ParallelCorpus([long_pair, ok_pair])
    kept = filter_corpus(corpus, max_length_ratio=3.0)
    assert kept.pairs == [ok_pair]


def test_filter_no_op_and_idempotent():
    rnd = random.Random(0)
    pairs = [
        SentencePair(
            tuple(f"w{rnd.randrange(30)}" for _ in range(rnd.randrange(1, 8))),
            tuple(f"v{rnd.randrange(30)}" for _ in range(rnd.randrange(1, 8))),
        )
        for _ in range(100)
    ]
    corpus = ParallelCorpus(pairs)
    assert filter_corpus(corpus, math.inf, dedup=False).pairs == pairs
    once = filter_corpus(corpus, 2.0)
    twice = filter_corpus(once, 2.0)
    assert once.pairs == twice.pairs


def test_filter_validates_ratio():
    with pytest.raises(ValueError):
        filter_corpus(ParallelCorpus([]), max_length_ratio=0.5)


def test_length_distribution_validation():
    with pytest.raises(ValueError):
        LengthDistribution(0.0, 1.0, 1, 10)
    with pytest.raises(ValueError):
        LengthDistribution(5.0, -1.0, 1, 10)
    with pytest.raises(ValueError):
        LengthDistribution(5.0, 1.0, 0, 10)
    with pytest.raises(ValueError):
        LengthDistribution(5.0, 1.0, 10, 9)


def test_sample_length_constant():
    dist = LengthDistribution(9.0, 0.0, 1, 64)
    rng = RandomSource(1)
    assert all(sample_length(dist, rng) == 9 for _ in range(200))


def test_sample_length_clamps():
    dist = LengthDistribution(2.0, 5.0, 1, 6)
    rng = RandomSource(2)
    draws = [sample_length(dist, rng) for _ in range(20_000)]
    assert min(draws) >= 1
    assert max(draws) <= 6
    assert 1 in draws and 6 in draws


def test_sample_length_empirical_mean_matches_oracle():
    # independent oracle: exact mean of round-then-clamp via scipy's normal CDF
    from scipy.stats import norm

    dist = LengthDistribution(9.0, 3.0, 1, 64)
    probs = {}
    for k in range(dist.min_len, dist.max_len + 1):
        lo = -math.inf if k == dist.min_len else k - 0.5
        hi = math.inf if k == dist.max_len else k + 0.5
        probs[k] = norm.cdf(hi, 9.0, 3.0) - norm.cdf(lo, 9.0, 3.0)
    exact_mean = sum(k * p for k, p in probs.items())
    exact_var = sum(k * k * p for k, p in probs.items()) - exact_mean ** 2

    rng = RandomSource(3)
    n = 100_000
    draws = [sample_length(dist, rng) for _ in range(n)]
    mean = sum(draws) / n
    assert abs(mean - 9.0) < 0.1
    assert abs(mean - exact_mean) < 4 * math.sqrt(exact_var / n)


def test_sample_length_deterministic():
    dist = LengthDistribution(9.0, 3.0, 1, 64)
    a = [sample_length(dist, RandomSource(5).substream(i)) for i in range(50)]
    b = [sample_length(dist, RandomSource(5).substream(i)) for i in range(50)]
    assert a == b

import pytest

from synthpara.corpus import ParallelCorpus, SentencePair
from synthpara.obfuscation import (
    ObfuscationConfig,
    build_obfuscation_map,
    obfuscate_corpus,
)
from synthpara.rng import RandomSource
from synthpara.stats import corpus_summary, vocab_overlap, vocab_overlap_types


def test_overlap_identical_files(tmp_path):
    path = tmp_path / "a.txt"
    path.write_text("a b c\nb c\n")
    report = vocab_overlap(path, path)
    assert report.v_pt == report.v_ft == report.overlap == 3


def test_overlap_partial(tmp_path):
    pt = tmp_path / "pt.txt"
    ft = tmp_path / "ft.txt"
    pt.write_text("a b c\n")
    ft.write_text("b c d\n")
    report = vocab_overlap(pt, ft, label="demo")
    assert (report.v_pt, report.v_ft, report.overlap) == (3, 3, 2)
    assert report.label == "demo"
    assert report.to_dict()["overlap"] == 2


def test_overlap_symmetric(tmp_path):
    pt = tmp_path / "pt.txt"
    ft = tmp_path / "ft.txt"
    pt.write_text("a b\n")
    ft.write_text("b c d\n")
    fwd = vocab_overlap(pt, ft)
    rev = vocab_overlap(ft, pt)
    assert fwd.overlap == rev.overlap
    assert (fwd.v_pt, fwd.v_ft) == (rev.v_ft, rev.v_pt)


def test_overlap_empty_file_errors(tmp_path):
    empty = tmp_path / "empty.txt"
    empty.write_text("\n")
    other = tmp_path / "o.txt"
    other.write_text("x\n")
    with pytest.raises(ValueError):
        vocab_overlap(empty, other)


def test_fully_obfuscated_corpus_has_zero_overlap():
    corpus = ParallelCorpus([
        SentencePair(("alpha", "beta"), ("ALPHA", "BETA")),
        SentencePair(("gamma",), ("GAMMA", "DELTA")),
    ])
    omap = build_obfuscation_map(corpus, rng=RandomSource(1))
    out = obfuscate_corpus(corpus, omap, ObfuscationConfig(1.0, RandomSource(2)))
    for side in ("source", "target"):
        original = {w for p in corpus.pairs for w in getattr(p, side)}
        nonsense = {w for p in out.pairs for w in getattr(p, side)}
        assert vocab_overlap_types(nonsense, original).overlap == 0


def test_summary_counts():
    corpus = ParallelCorpus([SentencePair(("a", "b"), ("C",))])
    summary = corpus_summary(corpus)
    assert summary.pairs == 1
    assert summary.source.tokens == 2
    assert summary.target.tokens == 1
    assert summary.source.types == 2
    assert summary.source.length_histogram == {2: 1}


def test_summary_token_totals_match_lengths():
    pairs = [
        SentencePair(("a",) * (i + 1), ("b",) * (2 * i + 1)) for i in range(5)
    ]
    corpus = ParallelCorpus(pairs)
    summary = corpus_summary(corpus)
    assert summary.source.tokens == sum(len(p.source) for p in pairs)
    assert summary.target.tokens == sum(len(p.target) for p in pairs)
    assert summary.source.mean_length == pytest.approx(3.0)


def test_summary_empty_corpus_errors():
    with pytest.raises(ValueError):
        corpus_summary(ParallelCorpus([]))


def test_summary_of_synthetic_vocab_bounded():
    from synthpara.synth_tasks import SyntheticVocabulary, gen_identity

    vocab = SyntheticVocabulary(100, 3)
    corpus = gen_identity(vocab, 500, rng=RandomSource(3))
    summary = corpus_summary(corpus)
    assert summary.source.types <= 100
    assert summary.source.types == summary.target.types

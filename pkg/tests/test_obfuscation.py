import random
import re

import pytest

from synthpara.corpus import ParallelCorpus, SentencePair
from synthpara.obfuscation import (
    ObfuscationConfig,
    build_obfuscation_map,
    obfuscate_corpus,
    read_obfuscation_map,
    write_obfuscation_map,
)
from synthpara.rng import RandomSource


def make_corpus(n_pairs=50, vocab=40, seed=0):
    rnd = random.Random(seed)
    pairs = []
    for _ in range(n_pairs):
        src = tuple(f"src{rnd.randrange(vocab)}" for _ in range(rnd.randrange(3, 10)))
        trg = tuple(f"TRG{rnd.randrange(vocab)}" for _ in range(rnd.randrange(3, 10)))
        pairs.append(SentencePair(src, trg))
    return ParallelCorpus(pairs)


def test_map_format_and_distinctness():
    corpus = ParallelCorpus([
        SentencePair(("Meine", "zweite"), ("My", "second")),
    ])
    omap = build_obfuscation_map(corpus, token_length=5, rng=RandomSource(1))
    assert set(omap.source_map) == {"Meine", "zweite"}
    tokens = list(omap.source_map.values())
    assert len(set(tokens)) == 2
    assert all(re.fullmatch(r"[a-z]{5}", t) for t in tokens)
    assert all(re.fullmatch(r"[A-Z]{5}", t) for t in omap.target_map.values())


def test_map_single_word_corpus():
    corpus = ParallelCorpus([SentencePair(("hello",), ("world",))])
    omap = build_obfuscation_map(corpus, rng=RandomSource(0))
    assert len(omap.source_map) == 1
    assert len(omap.target_map) == 1


def test_map_injective_and_disjoint_from_real_words():
    corpus = make_corpus(n_pairs=200, vocab=300)
    omap = build_obfuscation_map(corpus, token_length=5, rng=RandomSource(2))
    real = {w for p in corpus.pairs for w in p.source + p.target}
    for mapping in (omap.source_map, omap.target_map):
        values = list(mapping.values())
        assert len(set(values)) == len(values)
        assert not set(values) & real


def test_map_capacity_error():
    words = tuple(f"w{k}" for k in range(17_577))
    corpus = ParallelCorpus([SentencePair(words, ("x",))])
    with pytest.raises(ValueError, match="capacity"):
        build_obfuscation_map(corpus, token_length=3, rng=RandomSource(0))


def test_ratio_zero_is_identity():
    corpus = make_corpus()
    omap = build_obfuscation_map(corpus, rng=RandomSource(3))
    out = obfuscate_corpus(corpus, omap, ObfuscationConfig(0.0, RandomSource(4)))
    assert out.pairs == corpus.pairs


def test_ratio_one_replaces_everything():
    corpus = make_corpus()
    omap = build_obfuscation_map(corpus, rng=RandomSource(5))
    out = obfuscate_corpus(corpus, omap, ObfuscationConfig(1.0, RandomSource(6)))
    real = {w for p in corpus.pairs for w in p.source + p.target}
    for before, after in zip(corpus.pairs, out.pairs):
        assert len(after.source) == len(before.source)
        assert len(after.target) == len(before.target)
        assert not set(after.source) & real
        assert not set(after.target) & real
        assert after.source == tuple(omap.source_map[w] for w in before.source)


def test_seven_token_sentence_fully_replaced():
    src = tuple("einer zwei drei vier funf sechs sieben".split())
    corpus = ParallelCorpus([SentencePair(src, ("one",))])
    omap = build_obfuscation_map(corpus, rng=RandomSource(7))
    out = obfuscate_corpus(corpus, omap, ObfuscationConfig(1.0, RandomSource(8)))
    assert len(out.pairs[0].source) == 7
    assert all(re.fullmatch(r"[a-z]{5}", t) for t in out.pairs[0].source)


def test_ratio_law_quarter():
    corpus = make_corpus(n_pairs=3400, vocab=500, seed=9)  # ~20k tokens/side
    omap = build_obfuscation_map(corpus, rng=RandomSource(10))
    out = obfuscate_corpus(corpus, omap, ObfuscationConfig(0.25, RandomSource(11)))
    total = replaced = 0
    for before, after in zip(corpus.pairs, out.pairs):
        for b, a in zip(before.source + before.target, after.source + after.target):
            total += 1
            replaced += b != a
    assert total >= 40_000
    assert 0.23 <= replaced / total <= 0.27


def test_consistency_per_type():
    corpus = make_corpus(n_pairs=400, vocab=30, seed=12)
    omap = build_obfuscation_map(corpus, rng=RandomSource(13))
    out = obfuscate_corpus(corpus, omap, ObfuscationConfig(0.5, RandomSource(14)))
    observed_src = {}
    observed_trg = {}
    for before, after in zip(corpus.pairs, out.pairs):
        for observed, b_side, a_side in (
            (observed_src, before.source, after.source),
            (observed_trg, before.target, after.target),
        ):
            for b, a in zip(b_side, a_side):
                if b != a:
                    assert observed.setdefault(b, a) == a
    # injectivity of what was actually used
    for observed in (observed_src, observed_trg):
        assert len(set(observed.values())) == len(observed)


def test_overlap_is_exactly_the_kept_types():
    corpus = make_corpus(n_pairs=100, vocab=60, seed=15)
    omap = build_obfuscation_map(corpus, rng=RandomSource(16))
    out = obfuscate_corpus(corpus, omap, ObfuscationConfig(0.6, RandomSource(17)))
    original_types = {w for p in corpus.pairs for w in p.source}
    output_types = {w for p in out.pairs for w in p.source}
    kept_somewhere = {
        b
        for before, after in zip(corpus.pairs, out.pairs)
        for b, a in zip(before.source, after.source)
        if b == a
    }
    # type overlap with the original vocabulary is exactly the types that
    # survived un-replaced at least once (nonsense tokens are all new)
    assert original_types & output_types == kept_somewhere
    assert all(w in omap.source_map for w in original_types)


def test_unmapped_word_error_names_word():
    corpus = ParallelCorpus([SentencePair(("known",), ("KNOWN",))])
    omap = build_obfuscation_map(corpus, rng=RandomSource(18))
    bad = ParallelCorpus([SentencePair(("mystery",), ("KNOWN",))])
    with pytest.raises(ValueError, match="mystery"):
        obfuscate_corpus(bad, omap, ObfuscationConfig(1.0, RandomSource(19)))
    # coverage is validated up front, not only when a replacement draw hits
    with pytest.raises(ValueError, match="mystery"):
        obfuscate_corpus(bad, omap, ObfuscationConfig(0.0, RandomSource(19)))


def test_map_round_trip(tmp_path):
    corpus = make_corpus(n_pairs=30, vocab=50, seed=20)
    omap = build_obfuscation_map(corpus, rng=RandomSource(21))
    write_obfuscation_map(omap, tmp_path / "s.tsv", tmp_path / "t.tsv")
    again = read_obfuscation_map(tmp_path / "s.tsv", tmp_path / "t.tsv")
    assert again.source_map == omap.source_map
    assert again.target_map == omap.target_map
    assert again.token_length == omap.token_length


def test_deterministic_given_seed():
    corpus = make_corpus(seed=22)
    a = build_obfuscation_map(corpus, rng=RandomSource(23))
    b = build_obfuscation_map(corpus, rng=RandomSource(23))
    assert a.source_map == b.source_map and a.target_map == b.target_map
    out_a = obfuscate_corpus(corpus, a, ObfuscationConfig(0.5, RandomSource(24)))
    out_b = obfuscate_corpus(corpus, b, ObfuscationConfig(0.5, RandomSource(24)))
    assert out_a.pairs == out_b.pairs


def test_config_validates_ratio():
    with pytest.raises(ValueError, match=r"\[0, 1\]"):
        ObfuscationConfig(1.5, RandomSource(0))

import random

import pytest

from synthpara.toxicity import (
    ToxicityList,
    hallucinated_toxicity,
    is_toxic,
    load_toxicity_list,
)


def test_load_normalizes(tmp_path):
    path = tmp_path / "list.txt"
    path.write_text("badword\n\nBad Word\nbadword\n  Spaced   Term \n")
    lst = load_toxicity_list(path, "en")
    assert lst.language == "en"
    assert lst.entries == frozenset({"badword", "bad word", "spaced term"})


def test_load_empty_errors(tmp_path):
    path = tmp_path / "empty.txt"
    path.write_text("\n\n")
    with pytest.raises(ValueError):
        load_toxicity_list(path)


def test_clean_sentence_matches_nothing():
    lst = ToxicityList(["badword"])
    assert is_toxic(("this", "is", "fine"), lst) == set()


def test_case_insensitive_token_match():
    lst = ToxicityList(["badword"])
    assert is_toxic(("You", "BADWORD", "now"), lst) == {"badword"}


def test_multiword_needs_contiguous_tokens():
    lst = ToxicityList(["bad word"])
    assert is_toxic(("a", "bad", "word", "here"), lst) == {"bad word"}
    assert is_toxic(("a", "bad", "green", "word"), lst) == set()


def test_token_mode_does_not_cross_token_boundaries():
    lst = ToxicityList(["bad word"])
    assert is_toxic(("a", "badword", "here"), lst, "token") == set()


def test_substring_mode_matches_inside_tokens():
    lst = ToxicityList(["bad word"])
    assert is_toxic(("some", "bad", "wording"), lst, "substring") == {"bad word"}
    assert is_toxic(("a", "badword", "here"), lst, "substring") == set()


def test_substring_mode_for_unsegmented_script():
    # terms embedded inside longer tokens, as in scripts without spaces
    lst = ToxicityList(["خراب", "不好"])
    sentence = ("这个真的很不好吧",)
    assert is_toxic(sentence, lst, "token") == set()
    assert is_toxic(sentence, lst, "substring") == {"不好"}


def test_mode_validation():
    with pytest.raises(ValueError):
        is_toxic(("x",), ToxicityList(["y"]), "fuzzy")


def _report(sources, translations, terms=("badword",), mode="token"):
    lst = ToxicityList(terms)
    return hallucinated_toxicity(sources, translations, lst, lst, mode)


def test_hallucination_counting():
    sources = [("clean",)] * 10
    translations = [("alright",)] * 10
    for k in range(3):
        translations[k] = ("so", "badword")
    report = _report(sources, translations)
    assert report.total_sentences == 10
    assert report.hallucinated == 3
    assert report.target_toxic == 3
    assert report.source_toxic == 0
    assert report.rate == pytest.approx(0.3)
    assert [i for i, _ in report.flagged] == [0, 1, 2]


def test_toxic_source_excluded():
    report = _report([("badword",)], [("badword",)])
    assert report.source_toxic == 1
    assert report.target_toxic == 1
    assert report.hallucinated == 0
    assert report.rate == 0.0


def test_all_clean():
    report = _report([("a",)] * 5, [("b",)] * 5)
    assert report.hallucinated == 0
    assert report.rate == 0.0


def test_length_mismatch_errors():
    with pytest.raises(ValueError):
        _report([("a",)], [("b",), ("c",)])


def test_rate_invariant_under_reordering():
    rnd = random.Random(0)
    sources = [("badword",) if rnd.random() < 0.2 else ("ok",) for _ in range(200)]
    translations = [
        ("badword",) if rnd.random() < 0.3 else ("ok",) for _ in range(200)
    ]
    base = _report(sources, translations)
    perm = rnd.sample(range(200), 200)
    shuffled = _report(
        [sources[i] for i in perm], [translations[i] for i in perm]
    )
    assert shuffled.rate == base.rate
    assert shuffled.hallucinated == base.hallucinated


def test_monotone_in_list_size():
    rnd = random.Random(1)
    words = [f"w{k}" for k in range(20)]
    sources = [
        tuple(rnd.choice(words) for _ in range(5)) for _ in range(300)
    ]
    translations = [
        tuple(rnd.choice(words) for _ in range(5)) for _ in range(300)
    ]
    small = ToxicityList(["w1", "w2"])
    big = ToxicityList(["w1", "w2", "w3", "w4"])
    neutral = ToxicityList(["w5"])
    # larger target list never decreases hallucinated count
    few = hallucinated_toxicity(sources, translations, neutral, small)
    many = hallucinated_toxicity(sources, translations, neutral, big)
    assert many.hallucinated >= few.hallucinated
    # larger source list never increases it
    src_few = hallucinated_toxicity(sources, translations, small, big)
    src_many = hallucinated_toxicity(sources, translations, big, big)
    assert src_many.hallucinated <= src_few.hallucinated


def test_report_serialization():
    report = _report([("clean",)], [("badword", "again")])
    data = report.to_dict()
    assert data["hallucinated"] == 1
    assert data["flagged"] == [{"index": 0, "terms": ["badword"]}]

"""Word-to-nonsense vocabulary maps and corpus obfuscation.

Each side of the corpus gets an injective map from word types to random
fixed-length letter strings; replacement then happens per token occurrence
with a configurable probability, so the same word is always replaced by the
same nonsense token but not every occurrence is replaced.
"""

from __future__ import annotations

import string
from dataclasses import dataclass, field

from .corpus import ParallelCorpus, SentencePair
from .rng import RandomSource, threshold53

LOWERCASE = string.ascii_lowercase
UPPERCASE = string.ascii_uppercase


@dataclass
class ObfuscationMap:
    source_map: dict[str, str]
    target_map: dict[str, str]
    token_length: int = 5
    source_alphabet: str = LOWERCASE
    target_alphabet: str = UPPERCASE


@dataclass
class ObfuscationConfig:
    ratio: float
    rng: RandomSource = field(default_factory=RandomSource)

    def __post_init__(self):
        if not 0.0 <= self.ratio <= 1.0:
            raise ValueError(f"ratio must be in [0, 1], got {self.ratio}")


def _word_types_in_order(sentences) -> list[str]:
    seen = set()
    out = []
    for sentence in sentences:
        for word in sentence:
            if word not in seen:
                seen.add(word)
                out.append(word)
    return out


def _assign_tokens(types: list[str], alphabet: str, token_length: int,
                   reserved: set, rng: RandomSource, side: str) -> dict[str, str]:
    capacity = len(alphabet) ** token_length
    blocked = sum(
        1 for w in reserved
        if len(w) == token_length and all(ch in alphabet for ch in w)
    )
    available = capacity - blocked
    if len(types) > available:
        raise ValueError(
            f"{side} vocabulary of {len(types)} word types exceeds nonsense "
            f"capacity {available} ({len(alphabet)}^{token_length}={capacity} "
            f"minus {blocked} real words); increase token_length"
        )
    n_letters = len(alphabet)
    used = set()
    mapping = {}
    for word in types:
        while True:
            token = "".join(
                alphabet[rng.bounded(n_letters)] for _ in range(token_length)
            )
            if token not in used and token not in reserved:
                break
        used.add(token)
        mapping[word] = token
    return mapping


def build_obfuscation_map(corpus: ParallelCorpus, token_length: int = 5,
                          rng: RandomSource | None = None,
                          source_alphabet: str = LOWERCASE,
                          target_alphabet: str = UPPERCASE) -> ObfuscationMap:
    """Assign every word type on each side a unique random nonsense token.

    Tokens never collide with each other within a side, nor with any real
    word occurring on either side of the corpus. Word types are processed in
    first-occurrence order (source side first), so the map is a deterministic
    function of (corpus, token_length, seed).
    """
    if token_length < 1:
        raise ValueError(f"token_length must be >= 1, got {token_length}")
    rng = rng if rng is not None else RandomSource()
    src_types = _word_types_in_order(p.source for p in corpus.pairs)
    trg_types = _word_types_in_order(p.target for p in corpus.pairs)
    reserved = set(src_types) | set(trg_types)
    source_map = _assign_tokens(
        src_types, source_alphabet, token_length, reserved, rng, "source"
    )
    target_map = _assign_tokens(
        trg_types, target_alphabet, token_length, reserved, rng, "target"
    )
    return ObfuscationMap(
        source_map, target_map, token_length, source_alphabet, target_alphabet
    )


def obfuscate_corpus(corpus: ParallelCorpus, omap: ObfuscationMap,
                     config: ObfuscationConfig) -> ParallelCorpus:
    """Replace each token occurrence with its nonsense token with probability
    config.ratio.

    Pair i draws from substream i (source tokens left to right, then target),
    so output is reproducible and shardable by sentence ranges. Map coverage
    is checked up front so a missing entry fails regardless of ratio or seed.
    """
    for i, pair in enumerate(corpus.pairs):
        for mapping, side in ((omap.source_map, pair.source),
                              (omap.target_map, pair.target)):
            for word in side:
                if word not in mapping:
                    raise ValueError(
                        f"word not in obfuscation map (pair {i}): {word!r}"
                    )
    t53 = threshold53(config.ratio)
    out = []
    for i, pair in enumerate(corpus.pairs):
        sub = config.rng.substream(i)
        # draw order: source tokens left to right, then target tokens
        source = _obfuscate_side(pair.source, omap.source_map, t53, sub)
        target = _obfuscate_side(pair.target, omap.target_map, t53, sub)
        out.append(SentencePair(source, target))
    return ParallelCorpus(out, f"{corpus.provenance} obfuscated r={config.ratio}")


def _obfuscate_side(tokens, mapping, t53, sub):
    return tuple(
        mapping[word] if sub.chance(t53) else word for word in tokens
    )


def write_obfuscation_map(omap: ObfuscationMap, source_path, target_path) -> None:
    """Persist both sides as TSV files: word<TAB>nonsense token."""
    for path, mapping in ((source_path, omap.source_map),
                          (target_path, omap.target_map)):
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            for word in sorted(mapping):
                fh.write(f"{word}\t{mapping[word]}\n")


def _read_map_file(path) -> dict[str, str]:
    mapping = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line:
                continue
            parts = line.split("\t")
            if len(parts) != 2:
                raise ValueError(f"{path}: line {lineno} is not word<TAB>token")
            mapping[parts[0]] = parts[1]
    return mapping


def read_obfuscation_map(source_path, target_path) -> ObfuscationMap:
    source_map = _read_map_file(source_path)
    target_map = _read_map_file(target_path)
    any_token = next(iter(source_map.values()), next(iter(target_map.values()), ""))
    token_length = len(any_token) if any_token else 5
    return ObfuscationMap(source_map, target_map, token_length)

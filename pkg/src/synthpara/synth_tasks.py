"""Purely synthetic generators: identity copies, case-mapping with per-side
deletions, and randomly bracketed trees with subtree swaps.

All three draw from a paired vocabulary of lowercase source tokens and their
uppercase partners. Generation is keyed per pair index (substream i of the
supplied stream), so a corpus is a pure function of (config, seed) no matter
how the work is blocked or sharded. The passed RandomSource is used only as
a substream root; its own counter is not advanced.
"""

from __future__ import annotations

import itertools
import string
from dataclasses import dataclass, field
from typing import Iterator, Optional, Union

from . import _kernels
from .corpus import (
    DEFAULT_LENGTHS,
    LengthDistribution,
    ParallelCorpus,
    SentencePair,
    length_thresholds,
)
from .rng import RandomSource, threshold53

BLOCK_PAIRS = 65536


class SyntheticVocabulary:
    """Paired synthetic tokens: entry i is (lowercase token, its uppercase).

    Tokens are the first `size` strings of `token_length` lowercase letters
    in lexicographic order; the default covers every 3-letter combination.
    """

    def __init__(self, size: int = 26 ** 3, token_length: int = 3):
        capacity = 26 ** token_length
        if token_length < 1:
            raise ValueError(f"token_length must be >= 1, got {token_length}")
        if not 1 <= size <= capacity:
            raise ValueError(
                f"size must be in [1, 26^{token_length}={capacity}], got {size}"
            )
        self.size = size
        self.token_length = token_length
        combos = itertools.product(string.ascii_lowercase, repeat=token_length)
        self.lower_tokens = tuple(
            "".join(c) for c in itertools.islice(combos, size)
        )
        self.lower_bytes = "".join(self.lower_tokens).encode("ascii")
        self.upper_bytes = self.lower_bytes.upper()
        self._upper_of = None

    def __len__(self) -> int:
        return self.size

    @property
    def upper_tokens(self) -> tuple[str, ...]:
        return tuple(t.upper() for t in self.lower_tokens)

    def uppercase_of(self, token: str) -> str:
        if self._upper_of is None:
            self._upper_of = {t: t.upper() for t in self.lower_tokens}
        try:
            return self._upper_of[token]
        except KeyError:
            raise ValueError(f"token not in vocabulary: {token!r}") from None


@dataclass
class CaseMapConfig:
    delete_source: float = 0.0
    delete_target: float = 0.0
    length_dist: LengthDistribution = DEFAULT_LENGTHS
    rng: RandomSource = field(default_factory=RandomSource)

    def __post_init__(self):
        for name, p in (("delete_source", self.delete_source),
                        ("delete_target", self.delete_target)):
            # 1.0 would empty one side of every pair, so resampling never ends
            if not 0.0 <= p < 1.0:
                raise ValueError(f"{name} must be in [0, 1), got {p}")


@dataclass
class PbTreesConfig:
    swap_prob: float = 0.15
    length_dist: LengthDistribution = DEFAULT_LENGTHS
    rng: RandomSource = field(default_factory=RandomSource)
    emit_derivations: bool = False

    def __post_init__(self):
        if not 0.0 <= self.swap_prob <= 1.0:
            raise ValueError(
                f"swap_prob must be in [0, 1], got {self.swap_prob}"
            )


@dataclass
class CaseMapStats:
    """Counters over every deletion draw, including resampled attempts."""

    underlying_tokens: int = 0
    deleted_source: int = 0
    deleted_target: int = 0
    resampled_pairs: int = 0


# ---------------------------------------------------------------------------
# Block iterators (bytes out; used by the CLI for streaming writes)

def iter_identity_blocks(vocab: SyntheticVocabulary, num_pairs: int,
                         length_dist: LengthDistribution, rng: RandomSource,
                         first_index: int = 0,
                         block: int = BLOCK_PAIRS) -> Iterator[bytes]:
    """Yield identity blocks; each block serves as both source and target."""
    table = length_thresholds(length_dist)
    done = 0
    while done < num_pairs:
        n = min(block, num_pairs - done)
        yield _kernels.gen_identity_block(
            rng.key, first_index + done, n, vocab.lower_bytes,
            vocab.token_length, vocab.size, length_dist.min_len, table,
        )
        done += n


def iter_case_map_blocks(vocab: SyntheticVocabulary, num_pairs: int,
                         config: CaseMapConfig, first_index: int = 0,
                         block: int = BLOCK_PAIRS,
                         want_underlying: bool = False) -> Iterator[tuple]:
    """Yield (src_bytes, trg_bytes, underlying_bytes|None, stats tuple)."""
    table = length_thresholds(config.length_dist)
    ds_t = threshold53(config.delete_source)
    dt_t = threshold53(config.delete_target)
    done = 0
    while done < num_pairs:
        n = min(block, num_pairs - done)
        yield _kernels.gen_case_map_block(
            config.rng.key, first_index + done, n, vocab.lower_bytes,
            vocab.upper_bytes, vocab.token_length, vocab.size,
            config.length_dist.min_len, table, ds_t, dt_t, want_underlying,
        )
        done += n


def iter_pb_trees_blocks(vocab: SyntheticVocabulary, num_pairs: int,
                         config: PbTreesConfig, first_index: int = 0,
                         block: int = BLOCK_PAIRS) -> Iterator[tuple]:
    """Yield (src_bytes, trg_bytes, derivation_bytes|None)."""
    table = length_thresholds(config.length_dist)
    swap_t = threshold53(config.swap_prob)
    done = 0
    while done < num_pairs:
        n = min(block, num_pairs - done)
        yield _kernels.gen_pb_trees_block(
            config.rng.key, first_index + done, n, vocab.lower_bytes,
            vocab.upper_bytes, vocab.token_length, vocab.size,
            config.length_dist.min_len, table, swap_t,
            config.emit_derivations,
        )
        done += n


# ---------------------------------------------------------------------------
# Corpus-level generators

def _check_num_pairs(num_pairs: int) -> None:
    if num_pairs < 1:
        raise ValueError(f"num_pairs must be >= 1, got {num_pairs}")


def _tokenized(blob: bytes) -> list[tuple[str, ...]]:
    return [tuple(line.split()) for line in blob.decode("ascii").splitlines()]


def gen_identity(vocab: SyntheticVocabulary, num_pairs: int,
                 length_dist: LengthDistribution = DEFAULT_LENGTHS,
                 rng: Optional[RandomSource] = None) -> ParallelCorpus:
    """Uniform random sentences copied verbatim to the target side."""
    _check_num_pairs(num_pairs)
    rng = rng if rng is not None else RandomSource()
    blob = b"".join(iter_identity_blocks(vocab, num_pairs, length_dist, rng))
    pairs = []
    for tokens in _tokenized(blob):
        pairs.append(SentencePair(tokens, tokens))
    return ParallelCorpus(pairs, f"identity seed={rng.seed}")


def gen_case_map_audit(
    vocab: SyntheticVocabulary, num_pairs: int, config: CaseMapConfig
) -> tuple[ParallelCorpus, list[tuple[str, ...]], CaseMapStats]:
    """gen_case_map plus the underlying pre-deletion sequences and counters."""
    _check_num_pairs(num_pairs)
    src_parts, trg_parts, und_parts = [], [], []
    stats = CaseMapStats()
    for src_b, trg_b, und_b, counts in iter_case_map_blocks(
        vocab, num_pairs, config, want_underlying=True
    ):
        src_parts.append(src_b)
        trg_parts.append(trg_b)
        und_parts.append(und_b)
        stats.underlying_tokens += counts[0]
        stats.deleted_source += counts[1]
        stats.deleted_target += counts[2]
        stats.resampled_pairs += counts[3]
    sources = _tokenized(b"".join(src_parts))
    targets = _tokenized(b"".join(trg_parts))
    underlying = _tokenized(b"".join(und_parts))
    pairs = [SentencePair(s, t) for s, t in zip(sources, targets)]
    corpus = ParallelCorpus(pairs, f"case-map seed={config.rng.seed}")
    return corpus, underlying, stats


def gen_case_map(vocab: SyntheticVocabulary, num_pairs: int,
                 config: CaseMapConfig) -> ParallelCorpus:
    """Lowercase source / uppercase target with independent per-side
    deletions; pairs that lose a whole side are redrawn."""
    corpus, _, _ = gen_case_map_audit(vocab, num_pairs, config)
    return corpus


def gen_pb_trees(
    vocab: SyntheticVocabulary, num_pairs: int, config: PbTreesConfig
) -> Union[ParallelCorpus, tuple[ParallelCorpus, list[str]]]:
    """Random-tree permutation pairs.

    Returns the corpus, or (corpus, derivation_lines) when
    config.emit_derivations is set.
    """
    _check_num_pairs(num_pairs)
    src_parts, trg_parts, der_parts = [], [], []
    for src_b, trg_b, der_b in iter_pb_trees_blocks(vocab, num_pairs, config):
        src_parts.append(src_b)
        trg_parts.append(trg_b)
        if der_b is not None:
            der_parts.append(der_b)
    sources = _tokenized(b"".join(src_parts))
    targets = _tokenized(b"".join(trg_parts))
    pairs = [SentencePair(s, t) for s, t in zip(sources, targets)]
    corpus = ParallelCorpus(pairs, f"pb-trees seed={config.rng.seed}")
    if not config.emit_derivations:
        return corpus
    derivations = b"".join(der_parts).decode("ascii").splitlines()
    return corpus, derivations


# ---------------------------------------------------------------------------
# Trees and derivation records

@dataclass(frozen=True)
class Leaf:
    index: int


@dataclass(frozen=True)
class Internal:
    left: "DerivationTree"
    right: "DerivationTree"
    swapped: bool = False


DerivationTree = Union[Leaf, Internal]


def build_random_tree(length: int, rng: RandomSource) -> DerivationTree:
    """Random binary bracketing of [0, length).

    The split point of each span is uniform over its internal boundaries;
    split draws happen in pre-order (node, then left subtree, then right),
    matching the generation kernels draw for draw.
    """
    if length < 1:
        raise ValueError(f"length must be >= 1, got {length}")
    records = []  # (start, end, left_idx, right_idx), pre-order
    stack = [(0, length, -1, False)]
    while stack:
        a, b, parent, is_left = stack.pop()
        idx = len(records)
        records.append([a, b, -1, -1])
        if parent >= 0:
            records[parent][2 if is_left else 3] = idx
        if b - a > 1:
            split = a + 1 + rng.bounded(b - a - 1)
            stack.append((split, b, idx, False))
            stack.append((a, split, idx, True))
    nodes: list[Optional[DerivationTree]] = [None] * len(records)
    for idx in range(len(records) - 1, -1, -1):
        a, b, li, ri = records[idx]
        if b - a == 1:
            nodes[idx] = Leaf(a)
        else:
            nodes[idx] = Internal(nodes[li], nodes[ri])
    return nodes[0]


def tree_leaves(tree: DerivationTree) -> list[int]:
    """Leaf indices in left-to-right order."""
    out = []
    stack = [tree]
    while stack:
        node = stack.pop()
        if isinstance(node, Leaf):
            out.append(node.index)
        else:
            stack.append(node.right)
            stack.append(node.left)
    return out


def internal_node_count(tree: DerivationTree) -> int:
    count = 0
    stack = [tree]
    while stack:
        node = stack.pop()
        if isinstance(node, Internal):
            count += 1
            stack.append(node.right)
            stack.append(node.left)
    return count


def emission_order(tree: DerivationTree) -> list[int]:
    """Source indices in target order: right subtree read first at swapped
    nodes."""
    out = []
    stack = [tree]
    while stack:
        node = stack.pop()
        if isinstance(node, Leaf):
            out.append(node.index)
        else:
            first, second = (
                (node.right, node.left) if node.swapped
                else (node.left, node.right)
            )
            stack.append(second)
            stack.append(first)
    return out


def permute_and_emit(tree: DerivationTree, source_tokens, vocab: SyntheticVocabulary,
                     swap_prob: float, rng: RandomSource
                     ) -> tuple[SentencePair, DerivationTree]:
    """Mark each internal node swapped with probability swap_prob (pre-order
    draws) and read out the pair. Returns (pair, tree with flags)."""
    source_tokens = tuple(source_tokens)
    leaves = tree_leaves(tree)
    if leaves != list(range(len(source_tokens))):
        raise ValueError(
            f"tree covers {len(leaves)} leaves but sentence has "
            f"{len(source_tokens)} tokens"
        )
    swap_t = threshold53(swap_prob)
    # pre-order flag draws, then rebuild bottom-up (children have larger ids)
    records = []  # (node, parent_idx, is_left, swapped)
    stack = [(tree, -1, False)]
    while stack:
        node, parent, is_left = stack.pop()
        idx = len(records)
        swapped = isinstance(node, Internal) and rng.chance(swap_t)
        records.append((node, parent, is_left, swapped))
        if isinstance(node, Internal):
            stack.append((node.right, idx, False))
            stack.append((node.left, idx, True))
    rebuilt: list[Optional[DerivationTree]] = [None] * len(records)
    children: dict[int, list] = {}
    for idx in range(len(records) - 1, -1, -1):
        node, parent, is_left, swapped = records[idx]
        if isinstance(node, Leaf):
            rebuilt[idx] = node
        else:
            pair = children.pop(idx)
            rebuilt[idx] = Internal(pair[0], pair[1], swapped)
        if parent >= 0:
            slot = children.setdefault(parent, [None, None])
            slot[0 if is_left else 1] = rebuilt[idx]
    flagged = rebuilt[0]
    target = tuple(
        vocab.uppercase_of(source_tokens[p]) for p in emission_order(flagged)
    )
    return SentencePair(source_tokens, target), flagged


def check_span_contiguity(pair: SentencePair, derivation: DerivationTree) -> bool:
    """Verify that every subtree of the derivation occupies a contiguous
    target span and that the pair's target is exactly the derivation's
    read-out (uppercased source in emission order).

    Raises if the derivation does not structurally belong to the pair.
    """
    n = len(pair.source)
    leaves = tree_leaves(derivation)
    if leaves != list(range(n)):
        raise ValueError("derivation does not cover the pair's source tokens")
    order = emission_order(derivation)
    if tuple(pair.source[p].upper() for p in order) != pair.target:
        return False
    target_pos = [0] * n
    for t, p in enumerate(order):
        target_pos[p] = t
    # spans bottom-up: pre-order list processed in reverse
    nodes = []
    stack = [derivation]
    while stack:
        node = stack.pop()
        nodes.append(node)
        if isinstance(node, Internal):
            stack.append(node.right)
            stack.append(node.left)
    spans: dict[int, tuple[int, int]] = {}
    for idx in range(len(nodes) - 1, -1, -1):
        node = nodes[idx]
        if isinstance(node, Leaf):
            spans[id(node)] = (node.index, node.index + 1)
        else:
            la, lb = spans[id(node.left)]
            ra, rb = spans[id(node.right)]
            if lb != ra:
                raise ValueError("derivation subtrees are not contiguous")
            spans[id(node)] = (la, rb)
            positions = [target_pos[i] for i in range(la, rb)]
            if max(positions) - min(positions) + 1 != rb - la:
                return False
    return True


def format_derivation(tree: DerivationTree, source_tokens) -> str:
    """Bracketed s-expression; swapped nodes open with ``(*``."""
    source_tokens = tuple(source_tokens)
    syms = []
    stack = [(tree, False)]
    while stack:
        node, closing = stack.pop()
        if closing:
            syms.append(")")
        elif isinstance(node, Leaf):
            syms.append(source_tokens[node.index])
        else:
            syms.append("(*" if node.swapped else "(")
            stack.append((node, True))
            stack.append((node.right, False))
            stack.append((node.left, False))
    return " ".join(syms)


def parse_derivation(line: str) -> tuple[DerivationTree, tuple[str, ...]]:
    """Inverse of format_derivation. Returns (tree, source tokens)."""
    syms = line.split()
    if not syms:
        raise ValueError("empty derivation line")
    stack: list[tuple[str, object]] = []
    tokens: list[str] = []
    for sym in syms:
        if sym in ("(", "(*"):
            stack.append(("open", sym == "(*"))
        elif sym == ")":
            if (
                len(stack) < 3
                or stack[-1][0] != "node"
                or stack[-2][0] != "node"
                or stack[-3][0] != "open"
            ):
                raise ValueError(f"malformed derivation: {line!r}")
            right = stack.pop()[1]
            left = stack.pop()[1]
            swapped = stack.pop()[1]
            stack.append(("node", Internal(left, right, bool(swapped))))
        else:
            stack.append(("node", Leaf(len(tokens))))
            tokens.append(sym)
    if len(stack) != 1 or stack[0][0] != "node":
        raise ValueError(f"malformed derivation: {line!r}")
    return stack[0][1], tuple(tokens)


def replay_derivation(line: str) -> SentencePair:
    """Reconstruct the sentence pair a derivation line witnesses."""
    tree, tokens = parse_derivation(line)
    order = emission_order(tree)
    target = tuple(tokens[p].upper() for p in order)
    return SentencePair(tokens, target)

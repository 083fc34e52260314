"""Self-contained word alignment: IBM Model 1 EM training, greedy per-word
alignment, and directional symmetrization.

The lexical table conditions target words on source words plus a NULL source
word (represented as Python None). Training is plain EM:

    E step: for pair (f, e), each target word e_j distributes one expected
            count over {NULL} + f proportionally to t(e_j | f_i);
    M step: t(e | f) = count(f, e) / sum_e' count(f, e').

t is initialized uniformly over the target words co-occurring with each
source word. The corpus log-likelihood sum_j log( sum_i t(e_j|f_i) / (l+1) )
is recorded for the parameters entering each iteration; EM guarantees the
sequence is non-decreasing.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .corpus import ParallelCorpus, SentencePair

NULL_LABEL = "<NULL>"  # reserved on-disk spelling of the NULL source word
UNSEEN_PROB = 1e-7  # floor used when aligning words outside the table


@dataclass
class TranslationTable:
    """t(target word | source word); source key None is the NULL word."""

    probs: dict = field(default_factory=dict)
    log_likelihood_history: list = field(default_factory=list)

    def prob(self, source_word, target_word) -> float:
        row = self.probs.get(source_word)
        if row is None:
            return UNSEEN_PROB
        return row.get(target_word, UNSEEN_PROB)


def train_ibm1(corpus: ParallelCorpus, iterations: int) -> TranslationTable:
    if len(corpus) == 0:
        raise ValueError("cannot train on an empty corpus")
    if iterations < 1:
        raise ValueError(f"iterations must be >= 1, got {iterations}")

    cooc: dict = {}
    for pair in corpus.pairs:
        targets = set(pair.target)
        for f in set(pair.source) | {None}:
            cooc.setdefault(f, set()).update(targets)
    t = {f: {e: 1.0 / len(es) for e in es} for f, es in cooc.items()}

    history = []
    for _ in range(iterations):
        counts: dict = {f: dict.fromkeys(row, 0.0) for f, row in t.items()}
        ll = 0.0
        for pair in corpus.pairs:
            f_words = [None, *pair.source]
            for e in pair.target:
                denom = 0.0
                for f in f_words:
                    denom += t[f][e]
                ll += math.log(denom / len(f_words))
                for f in f_words:
                    counts[f][e] += t[f][e] / denom
        history.append(ll)
        for f, row in counts.items():
            total = sum(row.values())
            t[f] = {e: c / total for e, c in row.items()}
    return TranslationTable(t, history)


def viterbi_align(pair: SentencePair, table: TranslationTable,
                  direction: str = "forward") -> set:
    """Greedy alignment: each conditioned word takes its most likely source.

    forward: the table conditions target words on pair.source; each target
    word j yields a link (argmax_i, j). reverse: the table was trained on the
    swapped corpus and conditions source words on pair.target; each source
    word i yields (i, argmax_j). A win for NULL emits no link; ties go to the
    smallest index, and NULL only wins strictly.
    """
    if direction == "forward":
        cond, picked = pair.source, pair.target
    elif direction == "reverse":
        cond, picked = pair.target, pair.source
    else:
        raise ValueError(f"direction must be forward or reverse, got {direction!r}")

    links = set()
    for j, word in enumerate(picked):
        best_i = 0
        best_p = table.prob(cond[0], word) if cond else 0.0
        for i in range(1, len(cond)):
            p = table.prob(cond[i], word)
            if p > best_p:
                best_p = p
                best_i = i
        if table.prob(None, word) > best_p:
            continue
        links.add((best_i, j) if direction == "forward" else (j, best_i))
    return links


NEIGHBORS = ((-1, 0), (0, -1), (1, 0), (0, 1), (-1, -1), (-1, 1), (1, -1), (1, 1))


def symmetrize(forward: set, reverse: set,
               heuristic: str = "grow-diag-final-and") -> set:
    """Combine directional link sets over one sentence pair.

    grow-diag-final-and: start from the intersection; repeatedly sweep the
    current links in sorted order, adopting any union link in the
    8-neighborhood whose source or target word is still uncovered; finish by
    adopting remaining union links whose endpoints are both uncovered.
    """
    fwd = set(forward)
    rev = set(reverse)
    if heuristic == "intersection":
        return fwd & rev
    if heuristic == "union":
        return fwd | rev
    if heuristic != "grow-diag-final-and":
        raise ValueError(
            "heuristic must be intersection, union, or grow-diag-final-and, "
            f"got {heuristic!r}"
        )
    links = fwd & rev
    union = fwd | rev
    src_cov = {i for i, _ in links}
    trg_cov = {j for _, j in links}
    grew = True
    while grew:
        grew = False
        for i, j in sorted(links):
            for di, dj in NEIGHBORS:
                cand = (i + di, j + dj)
                if cand in links or cand not in union:
                    continue
                if cand[0] not in src_cov or cand[1] not in trg_cov:
                    links.add(cand)
                    src_cov.add(cand[0])
                    trg_cov.add(cand[1])
                    grew = True
    for i, j in sorted(union - links):
        if i not in src_cov and j not in trg_cov:
            links.add((i, j))
            src_cov.add(i)
            trg_cov.add(j)
    return links


def align_corpus(corpus: ParallelCorpus, iterations: int = 10,
                 heuristic: str = "grow-diag-final-and") -> list:
    """Train both directions and symmetrize every pair."""
    fwd_table = train_ibm1(corpus, iterations)
    swapped = ParallelCorpus(
        [SentencePair(p.target, p.source) for p in corpus.pairs],
        corpus.provenance,
    )
    rev_table = train_ibm1(swapped, iterations)
    out = []
    for pair in corpus.pairs:
        fwd = viterbi_align(pair, fwd_table, "forward")
        rev = viterbi_align(pair, rev_table, "reverse")
        out.append(symmetrize(fwd, rev, heuristic))
    return out


def write_pharaoh(alignments, path) -> None:
    """One line per sentence, links as ``i-j`` sorted and space-separated."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for links in alignments:
            fh.write(" ".join(f"{i}-{j}" for i, j in sorted(links)))
            fh.write("\n")


def read_pharaoh(path) -> list:
    out = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            links = set()
            for item in line.split():
                left, sep, right = item.partition("-")
                if not sep or not left.isdigit() or not right.isdigit():
                    raise ValueError(
                        f"{path}: line {lineno}: bad link {item!r}"
                    )
                links.add((int(left), int(right)))
            out.append(links)
    return out


def _null_to_label(f) -> str:
    return NULL_LABEL if f is None else f


def write_table(table: TranslationTable, path) -> None:
    """TSV persistence: source<TAB>target<TAB>probability."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for f in sorted(table.probs, key=lambda w: (w is not None, w or "")):
            row = table.probs[f]
            label = _null_to_label(f)
            for e in sorted(row):
                fh.write(f"{label}\t{e}\t{row[e]!r}\n")


def read_table(path) -> TranslationTable:
    probs: dict = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line:
                continue
            parts = line.split("\t")
            if len(parts) != 3:
                raise ValueError(f"{path}: line {lineno} is not f<TAB>e<TAB>prob")
            f = None if parts[0] == NULL_LABEL else parts[0]
            probs.setdefault(f, {})[parts[1]] = float(parts[2])
    return TranslationTable(probs)

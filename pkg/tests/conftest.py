"""Shared independent oracles for the test suite, plus the acceptance
verdict reporter.

The oracles deliberately re-derive expected results with different
algorithms and data structures than the package uses, so that a bug in the
implementation cannot hide in the check.
"""

from __future__ import annotations

ACCEPTANCE_LINES: list = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if ACCEPTANCE_LINES:
        terminalreporter.write_sep("-", "acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def brute_force_phrase_counts(source, target, links, max_phrase_len,
                              extend_unaligned):
    """Enumerate every span box and test the phrase-pair conditions directly.

    Returns {(source span tokens, target span tokens): occurrence count}.
    """
    n, m = len(source), len(target)
    counts = {}
    for i1 in range(n):
        for i2 in range(i1, n):
            if i2 - i1 + 1 > max_phrase_len:
                continue
            for j1 in range(m):
                for j2 in range(j1, m):
                    if j2 - j1 + 1 > max_phrase_len:
                        continue
                    inside = [
                        (i, j) for (i, j) in links
                        if i1 <= i <= i2 and j1 <= j <= j2
                    ]
                    if not inside:
                        continue
                    crossing = any(
                        (i1 <= i <= i2) != (j1 <= j <= j2)
                        for (i, j) in links
                    )
                    if crossing:
                        continue
                    if not extend_unaligned:
                        tight = (
                            any(i == i1 for i, _ in inside)
                            and any(i == i2 for i, _ in inside)
                            and any(j == j1 for _, j in inside)
                            and any(j == j2 for _, j in inside)
                        )
                        if not tight:
                            continue
                    key = (
                        tuple(source[i1:i2 + 1]),
                        tuple(target[j1:j2 + 1]),
                    )
                    counts[key] = counts.get(key, 0) + 1
    return counts


def reference_ibm1(pairs, iterations):
    """Textbook EM over (source word, target word) tuples with a NULL source
    word; returns {(f, e): t(e|f)} with f None for NULL."""
    cooc = {}
    for f_sent, e_sent in pairs:
        for f in set(f_sent) | {None}:
            cooc.setdefault(f, set()).update(e_sent)
    t = {}
    for f, es in cooc.items():
        for e in es:
            t[(f, e)] = 1.0 / len(es)
    for _ in range(iterations):
        count = dict.fromkeys(t, 0.0)
        total = dict.fromkeys(cooc, 0.0)
        for f_sent, e_sent in pairs:
            fs = [None, *f_sent]
            for e in e_sent:
                z = sum(t[(f, e)] for f in fs)
                for f in fs:
                    share = t[(f, e)] / z
                    count[(f, e)] += share
                    total[f] += share
        for f, e in t:
            t[(f, e)] = count[(f, e)] / total[f]
    return t


def is_subsequence(needle, haystack) -> bool:
    it = iter(haystack)
    return all(any(tok == h for h in it) for tok in needle)

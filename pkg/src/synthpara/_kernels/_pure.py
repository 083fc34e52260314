"""Pure-Python generation kernels.

Draw-for-draw identical to the compiled backend in _speedups.pyx: both
consume, per pair, one length draw, L token draws, then task-specific draws
in a fixed order (documented per function). Any change here must be mirrored
there; tests/test_kernels.py asserts byte equality between the backends.

All kernels take the base stream ``key`` (see synthpara.rng) plus the global
index of the first pair in the block; pair i draws from the child stream for
index ``first_index + i``, which makes output independent of block/shard
boundaries.

Vocabulary is passed as one contiguous ``bytes`` per case (``n_types``
fixed-width tokens of ``token_len`` bytes). ``thresholds`` is the cumulative
length table scaled to 2^53 (see synthpara.corpus.length_thresholds); entry k
covers length ``min_len + k`` and the last entry is exactly 2^53.
"""

from __future__ import annotations

BACKEND = "pure"

_MASK = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15
_CHILD = 0xD1B54A32D192ED03
_C1 = 0xBF58476D1CE4E5B9
_C2 = 0x94D049BB133111EB


def _split_tokens(buf: bytes, token_len: int, n_types: int) -> list:
    return [buf[i * token_len : (i + 1) * token_len] for i in range(n_types)]


def gen_identity_block(key, first_index, n_pairs, lower, token_len, n_types,
                       min_len, thresholds):
    """Source side of an identity block; the target side is the same bytes.

    Per pair: 1 length draw, then L token draws.
    """
    toks = _split_tokens(lower, token_len, n_types)
    T = list(thresholds)
    n_t = len(T)
    out = []
    for i in range(n_pairs):
        z = (key + (first_index + i + 1) * _CHILD) & _MASK
        z = ((z ^ (z >> 30)) * _C1) & _MASK
        z = ((z ^ (z >> 27)) * _C2) & _MASK
        k = z ^ (z >> 31)
        c = 1
        z = (k + _GOLDEN) & _MASK
        z = ((z ^ (z >> 30)) * _C1) & _MASK
        z = ((z ^ (z >> 27)) * _C2) & _MASK
        u = (z ^ (z >> 31)) >> 11
        lo, hi = 0, n_t - 1
        while lo < hi:
            mid = (lo + hi) >> 1
            if u < T[mid]:
                hi = mid
            else:
                lo = mid + 1
        length = min_len + lo
        parts = []
        for _ in range(length):
            c += 1
            z = (k + c * _GOLDEN) & _MASK
            z = ((z ^ (z >> 30)) * _C1) & _MASK
            z = ((z ^ (z >> 27)) * _C2) & _MASK
            x = z ^ (z >> 31)
            parts.append(toks[(x * n_types) >> 64])
        out.append(b" ".join(parts))
        out.append(b"\n")
    return b"".join(out)


def gen_case_map_block(key, first_index, n_pairs, lower, upper, token_len,
                       n_types, min_len, thresholds, ds_t, dt_t,
                       want_underlying):
    """Case-mapped block with per-side deletions.

    Per attempt: 1 length draw, L token draws, L source-deletion draws,
    L target-deletion draws. An attempt leaving either side empty is
    discarded and the pair is redrawn from the same stream. Counters cover
    every attempt (so deleted/underlying ratios estimate d_s, d_t without
    survivorship bias); the underlying lines, when requested, are the
    accepted attempts only.

    Returns (src_bytes, trg_bytes, underlying_bytes | None,
             (underlying_tokens, deleted_source, deleted_target, resampled)).
    """
    lo_toks = _split_tokens(lower, token_len, n_types)
    up_toks = _split_tokens(upper, token_len, n_types)
    T = list(thresholds)
    n_t = len(T)
    src_out = []
    trg_out = []
    und_out = [] if want_underlying else None
    underlying = deleted_s = deleted_t = resampled = 0
    for i in range(n_pairs):
        z = (key + (first_index + i + 1) * _CHILD) & _MASK
        z = ((z ^ (z >> 30)) * _C1) & _MASK
        z = ((z ^ (z >> 27)) * _C2) & _MASK
        k = z ^ (z >> 31)
        c = 0
        while True:
            c += 1
            z = (k + c * _GOLDEN) & _MASK
            z = ((z ^ (z >> 30)) * _C1) & _MASK
            z = ((z ^ (z >> 27)) * _C2) & _MASK
            u = (z ^ (z >> 31)) >> 11
            lo, hi = 0, n_t - 1
            while lo < hi:
                mid = (lo + hi) >> 1
                if u < T[mid]:
                    hi = mid
                else:
                    lo = mid + 1
            length = min_len + lo
            ids = []
            for _ in range(length):
                c += 1
                z = (k + c * _GOLDEN) & _MASK
                z = ((z ^ (z >> 30)) * _C1) & _MASK
                z = ((z ^ (z >> 27)) * _C2) & _MASK
                x = z ^ (z >> 31)
                ids.append((x * n_types) >> 64)
            keep_s = []
            for tid in ids:
                c += 1
                z = (k + c * _GOLDEN) & _MASK
                z = ((z ^ (z >> 30)) * _C1) & _MASK
                z = ((z ^ (z >> 27)) * _C2) & _MASK
                if ((z ^ (z >> 31)) >> 11) < ds_t:
                    deleted_s += 1
                else:
                    keep_s.append(tid)
            keep_t = []
            for tid in ids:
                c += 1
                z = (k + c * _GOLDEN) & _MASK
                z = ((z ^ (z >> 30)) * _C1) & _MASK
                z = ((z ^ (z >> 27)) * _C2) & _MASK
                if ((z ^ (z >> 31)) >> 11) < dt_t:
                    deleted_t += 1
                else:
                    keep_t.append(tid)
            underlying += length
            if keep_s and keep_t:
                break
            resampled += 1
        src_out.append(b" ".join([lo_toks[t] for t in keep_s]))
        src_out.append(b"\n")
        trg_out.append(b" ".join([up_toks[t] for t in keep_t]))
        trg_out.append(b"\n")
        if und_out is not None:
            und_out.append(b" ".join([lo_toks[t] for t in ids]))
            und_out.append(b"\n")
    stats = (underlying, deleted_s, deleted_t, resampled)
    und_bytes = b"".join(und_out) if und_out is not None else None
    return b"".join(src_out), b"".join(trg_out), und_bytes, stats


def gen_pb_trees_block(key, first_index, n_pairs, lower, upper, token_len,
                       n_types, min_len, thresholds, swap_t,
                       want_derivations):
    """Tree-permutation block.

    Per pair: 1 length draw, L token draws, then split draws in pre-order
    (one bounded draw per internal node, left subtree before right), then
    swap draws in a second pre-order pass. Target is the in-order read-out
    visiting right before left at swapped nodes, mapped to uppercase tokens.

    Derivation lines, when requested, are space-joined s-expressions with
    ``(*`` opening swapped nodes, e.g. ``( abc (* def ghi ) )``.
    """
    lo_toks = _split_tokens(lower, token_len, n_types)
    up_toks = _split_tokens(upper, token_len, n_types)
    T = list(thresholds)
    n_t = len(T)
    src_out = []
    trg_out = []
    der_out = [] if want_derivations else None
    for i in range(n_pairs):
        z = (key + (first_index + i + 1) * _CHILD) & _MASK
        z = ((z ^ (z >> 30)) * _C1) & _MASK
        z = ((z ^ (z >> 27)) * _C2) & _MASK
        k = z ^ (z >> 31)
        c = 1
        z = (k + _GOLDEN) & _MASK
        z = ((z ^ (z >> 30)) * _C1) & _MASK
        z = ((z ^ (z >> 27)) * _C2) & _MASK
        u = (z ^ (z >> 31)) >> 11
        lo, hi = 0, n_t - 1
        while lo < hi:
            mid = (lo + hi) >> 1
            if u < T[mid]:
                hi = mid
            else:
                lo = mid + 1
        length = min_len + lo
        ids = []
        for _ in range(length):
            c += 1
            z = (k + c * _GOLDEN) & _MASK
            z = ((z ^ (z >> 30)) * _C1) & _MASK
            z = ((z ^ (z >> 27)) * _C2) & _MASK
            x = z ^ (z >> 31)
            ids.append((x * n_types) >> 64)

        n_nodes = 2 * length - 1
        span_a = [0] * n_nodes
        span_b = [0] * n_nodes
        child_l = [-1] * n_nodes
        child_r = [-1] * n_nodes
        cnt = 0
        stack = [(0, length, -1, False)]
        while stack:
            s0, s1, parent, is_left = stack.pop()
            idx = cnt
            cnt += 1
            span_a[idx] = s0
            span_b[idx] = s1
            if parent >= 0:
                if is_left:
                    child_l[parent] = idx
                else:
                    child_r[parent] = idx
            if s1 - s0 > 1:
                c += 1
                z = (k + c * _GOLDEN) & _MASK
                z = ((z ^ (z >> 30)) * _C1) & _MASK
                z = ((z ^ (z >> 27)) * _C2) & _MASK
                x = z ^ (z >> 31)
                split = s0 + 1 + ((x * (s1 - s0 - 1)) >> 64)
                stack.append((split, s1, idx, False))
                stack.append((s0, split, idx, True))

        swapped = [False] * n_nodes
        stack = [0]
        while stack:
            nd = stack.pop()
            if child_l[nd] >= 0:
                c += 1
                z = (k + c * _GOLDEN) & _MASK
                z = ((z ^ (z >> 30)) * _C1) & _MASK
                z = ((z ^ (z >> 27)) * _C2) & _MASK
                swapped[nd] = ((z ^ (z >> 31)) >> 11) < swap_t
                stack.append(child_r[nd])
                stack.append(child_l[nd])

        order = []
        stack = [0]
        while stack:
            nd = stack.pop()
            if child_l[nd] < 0:
                order.append(span_a[nd])
            elif swapped[nd]:
                stack.append(child_l[nd])
                stack.append(child_r[nd])
            else:
                stack.append(child_r[nd])
                stack.append(child_l[nd])

        src_out.append(b" ".join([lo_toks[t] for t in ids]))
        src_out.append(b"\n")
        trg_out.append(b" ".join([up_toks[ids[p]] for p in order]))
        trg_out.append(b"\n")
        if der_out is not None:
            syms = []
            stack = [(0, False)]
            while stack:
                nd, closing = stack.pop()
                if closing:
                    syms.append(b")")
                elif child_l[nd] < 0:
                    syms.append(lo_toks[ids[span_a[nd]]])
                else:
                    syms.append(b"(*" if swapped[nd] else b"(")
                    stack.append((nd, True))
                    stack.append((child_r[nd], False))
                    stack.append((child_l[nd], False))
            der_out.append(b" ".join(syms))
            der_out.append(b"\n")
    der_bytes = b"".join(der_out) if der_out is not None else None
    return b"".join(src_out), b"".join(trg_out), der_bytes

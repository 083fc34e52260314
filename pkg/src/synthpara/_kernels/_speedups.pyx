# cython: language_level=3
# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled generation kernels.

Draw-for-draw identical to _pure.py (see its docstring for the contract);
tests/test_kernels.py asserts byte equality between the two backends.
"""

from cpython.bytes cimport PyBytes_FromStringAndSize
from libc.stdlib cimport free, malloc, realloc
from libc.string cimport memcpy

BACKEND = "compiled"

ctypedef unsigned long long u64
cdef extern from *:
    ctypedef unsigned long long u128 "unsigned __int128"

cdef u64 GOLDEN = 0x9E3779B97F4A7C15
cdef u64 CHILD = 0xD1B54A32D192ED03
cdef u64 MIX1 = 0xBF58476D1CE4E5B9
cdef u64 MIX2 = 0x94D049BB133111EB


cdef inline u64 mix64(u64 z) noexcept nogil:
    z = (z ^ (z >> 30)) * MIX1
    z = (z ^ (z >> 27)) * MIX2
    return z ^ (z >> 31)


cdef inline u64 child_key(u64 key, u64 index) noexcept nogil:
    return mix64(key + (index + 1) * CHILD)


cdef inline u64 mulhi(u64 x, u64 n) noexcept nogil:
    return <u64>(((<u128> x) * (<u128> n)) >> 64)


cdef inline int lookup_len(u64 u, const u64 *table, int n) noexcept nogil:
    cdef int lo = 0, hi = n - 1, mid
    while lo < hi:
        mid = (lo + hi) >> 1
        if u < table[mid]:
            hi = mid
        else:
            lo = mid + 1
    return lo


cdef struct Buf:
    char *p
    Py_ssize_t n
    Py_ssize_t cap


cdef int buf_init(Buf *b, Py_ssize_t cap) except -1:
    if cap < 64:
        cap = 64
    b.p = <char *> malloc(cap)
    if b.p == NULL:
        raise MemoryError()
    b.n = 0
    b.cap = cap
    return 0


cdef int buf_reserve(Buf *b, Py_ssize_t extra) except -1:
    cdef Py_ssize_t want = b.n + extra
    cdef char *q
    if want <= b.cap:
        return 0
    while b.cap < want:
        b.cap += b.cap >> 1
    q = <char *> realloc(b.p, b.cap)
    if q == NULL:
        raise MemoryError()
    b.p = q
    return 0


cdef inline void put(Buf *b, const char *src, Py_ssize_t m) noexcept nogil:
    memcpy(b.p + b.n, src, m)
    b.n += m


cdef inline void putc(Buf *b, char ch) noexcept nogil:
    b.p[b.n] = ch
    b.n += 1


cdef bytes buf_take(Buf *b):
    cdef bytes out = PyBytes_FromStringAndSize(b.p, b.n)
    free(b.p)
    b.p = NULL
    return out


cdef u64 *copy_thresholds(object thresholds, int *n_out) except NULL:
    cdef int n = len(thresholds)
    cdef u64 *table = <u64 *> malloc(n * sizeof(u64))
    cdef int i
    if table == NULL:
        raise MemoryError()
    for i in range(n):
        table[i] = thresholds[i]
    n_out[0] = n
    return table


cdef Py_ssize_t mean_len(const u64 *table, int n, int min_len) noexcept nogil:
    # E[L] = min_len + sum_k P(L - min_len > k); thresholds are scaled to 2^53
    cdef double acc = min_len
    cdef int k
    for k in range(n):
        acc += 1.0 - (<double> table[k]) / 9007199254740992.0
    return <Py_ssize_t> acc + 1


def gen_identity_block(u64 key, u64 first_index, Py_ssize_t n_pairs,
                       bytes lower, int token_len, int n_types,
                       int min_len, object thresholds):
    cdef const char *lp = lower
    cdef int n_t = 0
    cdef u64 *table = copy_thresholds(thresholds, &n_t)
    cdef int max_len = min_len + n_t - 1
    cdef Buf out
    cdef Py_ssize_t i
    cdef u64 k, x
    cdef u64 c
    cdef int length, j, tid
    out.p = NULL
    try:
        buf_init(&out, n_pairs * (mean_len(table, n_t, min_len) + 1) * (token_len + 1))
        for i in range(n_pairs):
            k = child_key(key, first_index + i)
            c = 1
            length = min_len + lookup_len(mix64(k + GOLDEN) >> 11, table, n_t)
            buf_reserve(&out, <Py_ssize_t> length * (token_len + 1))
            for j in range(length):
                c += 1
                x = mix64(k + c * GOLDEN)
                tid = <int> mulhi(x, <u64> n_types)
                if j > 0:
                    putc(&out, b' ')
                put(&out, lp + tid * token_len, token_len)
            putc(&out, b'\n')
        return buf_take(&out)
    finally:
        free(table)
        if out.p != NULL:
            free(out.p)


def gen_case_map_block(u64 key, u64 first_index, Py_ssize_t n_pairs,
                       bytes lower, bytes upper, int token_len, int n_types,
                       int min_len, object thresholds, u64 ds_t, u64 dt_t,
                       bint want_underlying):
    cdef const char *lp = lower
    cdef const char *up = upper
    cdef int n_t = 0
    cdef u64 *table = copy_thresholds(thresholds, &n_t)
    cdef int max_len = min_len + n_t - 1
    cdef int *ids = <int *> malloc(3 * max_len * sizeof(int))
    cdef int *keep_s = ids + max_len
    cdef int *keep_t = ids + 2 * max_len
    cdef Buf src, trg, und
    cdef Py_ssize_t i, est
    cdef u64 k, x, c
    cdef u64 underlying = 0, deleted_s = 0, deleted_t = 0, resampled = 0
    cdef int length, j, tid, ns, nt_keep
    src.p = NULL
    trg.p = NULL
    und.p = NULL
    if ids == NULL:
        free(table)
        raise MemoryError()
    try:
        est = n_pairs * (mean_len(table, n_t, min_len) + 1) * (token_len + 1)
        buf_init(&src, est)
        buf_init(&trg, est)
        if want_underlying:
            buf_init(&und, est)
        for i in range(n_pairs):
            k = child_key(key, first_index + i)
            c = 0
            while True:
                c += 1
                length = min_len + lookup_len(mix64(k + c * GOLDEN) >> 11, table, n_t)
                for j in range(length):
                    c += 1
                    x = mix64(k + c * GOLDEN)
                    ids[j] = <int> mulhi(x, <u64> n_types)
                ns = 0
                for j in range(length):
                    c += 1
                    x = mix64(k + c * GOLDEN)
                    if (x >> 11) < ds_t:
                        deleted_s += 1
                    else:
                        keep_s[ns] = ids[j]
                        ns += 1
                nt_keep = 0
                for j in range(length):
                    c += 1
                    x = mix64(k + c * GOLDEN)
                    if (x >> 11) < dt_t:
                        deleted_t += 1
                    else:
                        keep_t[nt_keep] = ids[j]
                        nt_keep += 1
                underlying += length
                if ns > 0 and nt_keep > 0:
                    break
                resampled += 1
            buf_reserve(&src, <Py_ssize_t> ns * (token_len + 1))
            for j in range(ns):
                if j > 0:
                    putc(&src, b' ')
                put(&src, lp + keep_s[j] * token_len, token_len)
            putc(&src, b'\n')
            buf_reserve(&trg, <Py_ssize_t> nt_keep * (token_len + 1))
            for j in range(nt_keep):
                if j > 0:
                    putc(&trg, b' ')
                put(&trg, up + keep_t[j] * token_len, token_len)
            putc(&trg, b'\n')
            if want_underlying:
                buf_reserve(&und, <Py_ssize_t> length * (token_len + 1))
                for j in range(length):
                    if j > 0:
                        putc(&und, b' ')
                    put(&und, lp + ids[j] * token_len, token_len)
                putc(&und, b'\n')
        stats = (underlying, deleted_s, deleted_t, resampled)
        if want_underlying:
            return buf_take(&src), buf_take(&trg), buf_take(&und), stats
        return buf_take(&src), buf_take(&trg), None, stats
    finally:
        free(table)
        free(ids)
        if src.p != NULL:
            free(src.p)
        if trg.p != NULL:
            free(trg.p)
        if und.p != NULL:
            free(und.p)


def gen_pb_trees_block(u64 key, u64 first_index, Py_ssize_t n_pairs,
                       bytes lower, bytes upper, int token_len, int n_types,
                       int min_len, object thresholds, u64 swap_t,
                       bint want_derivations):
    cdef const char *lp = lower
    cdef const char *up = upper
    cdef int n_t = 0
    cdef u64 *table = copy_thresholds(thresholds, &n_t)
    cdef int max_len = min_len + n_t - 1
    cdef int max_nodes = 2 * max_len  # 2L-1 nodes for a sentence of L tokens
    # one scratch block: ids, spans/children/flags, three work stacks
    cdef Py_ssize_t scratch_ints = (
        max_len + 5 * max_nodes + 4 * (max_nodes + 2) + (max_nodes + 2)
        + 2 * (3 * max_nodes + 2)
    )
    cdef int *ids = <int *> malloc(scratch_ints * sizeof(int))
    cdef int *span_a = ids + max_len
    cdef int *span_b = span_a + max_nodes
    cdef int *child_l = span_b + max_nodes
    cdef int *child_r = child_l + max_nodes
    cdef int *swapped = child_r + max_nodes
    cdef int *stack4 = swapped + max_nodes
    cdef int *stack1 = stack4 + 4 * (max_nodes + 2)
    cdef int *stack2 = stack1 + (max_nodes + 2)
    cdef Buf src, trg, der
    cdef Py_ssize_t i, est
    cdef u64 k, x, c
    cdef int length, j, tid, n_nodes, cnt, sp, s0, s1, parent, is_left
    cdef int idx, nd, split, closing
    src.p = NULL
    trg.p = NULL
    der.p = NULL
    if ids == NULL:
        free(table)
        raise MemoryError()
    try:
        est = n_pairs * (mean_len(table, n_t, min_len) + 1) * (token_len + 1)
        buf_init(&src, est)
        buf_init(&trg, est)
        if want_derivations:
            buf_init(&der, 2 * est)
        for i in range(n_pairs):
            k = child_key(key, first_index + i)
            c = 1
            length = min_len + lookup_len(mix64(k + GOLDEN) >> 11, table, n_t)
            for j in range(length):
                c += 1
                x = mix64(k + c * GOLDEN)
                ids[j] = <int> mulhi(x, <u64> n_types)

            n_nodes = 2 * length - 1
            cnt = 0
            sp = 0
            stack4[0] = 0
            stack4[1] = length
            stack4[2] = -1
            stack4[3] = 0
            sp = 1
            while sp > 0:
                sp -= 1
                s0 = stack4[4 * sp]
                s1 = stack4[4 * sp + 1]
                parent = stack4[4 * sp + 2]
                is_left = stack4[4 * sp + 3]
                idx = cnt
                cnt += 1
                span_a[idx] = s0
                span_b[idx] = s1
                child_l[idx] = -1
                child_r[idx] = -1
                if parent >= 0:
                    if is_left:
                        child_l[parent] = idx
                    else:
                        child_r[parent] = idx
                if s1 - s0 > 1:
                    c += 1
                    x = mix64(k + c * GOLDEN)
                    split = s0 + 1 + <int> mulhi(x, <u64> (s1 - s0 - 1))
                    stack4[4 * sp] = split
                    stack4[4 * sp + 1] = s1
                    stack4[4 * sp + 2] = idx
                    stack4[4 * sp + 3] = 0
                    sp += 1
                    stack4[4 * sp] = s0
                    stack4[4 * sp + 1] = split
                    stack4[4 * sp + 2] = idx
                    stack4[4 * sp + 3] = 1
                    sp += 1

            sp = 0
            stack1[0] = 0
            sp = 1
            while sp > 0:
                sp -= 1
                nd = stack1[sp]
                if child_l[nd] >= 0:
                    c += 1
                    x = mix64(k + c * GOLDEN)
                    swapped[nd] = 1 if (x >> 11) < swap_t else 0
                    stack1[sp] = child_r[nd]
                    sp += 1
                    stack1[sp] = child_l[nd]
                    sp += 1
                else:
                    swapped[nd] = 0

            buf_reserve(&src, <Py_ssize_t> length * (token_len + 1))
            for j in range(length):
                if j > 0:
                    putc(&src, b' ')
                put(&src, lp + ids[j] * token_len, token_len)
            putc(&src, b'\n')

            buf_reserve(&trg, <Py_ssize_t> length * (token_len + 1))
            sp = 0
            stack1[0] = 0
            sp = 1
            j = 0
            while sp > 0:
                sp -= 1
                nd = stack1[sp]
                if child_l[nd] < 0:
                    tid = ids[span_a[nd]]
                    if j > 0:
                        putc(&trg, b' ')
                    put(&trg, up + tid * token_len, token_len)
                    j += 1
                elif swapped[nd]:
                    stack1[sp] = child_l[nd]
                    sp += 1
                    stack1[sp] = child_r[nd]
                    sp += 1
                else:
                    stack1[sp] = child_r[nd]
                    sp += 1
                    stack1[sp] = child_l[nd]
                    sp += 1
            putc(&trg, b'\n')

            if want_derivations:
                buf_reserve(&der, <Py_ssize_t> length * (token_len + 7) + 8)
                sp = 0
                stack2[0] = 0
                stack2[1] = 0
                sp = 1
                j = 0
                while sp > 0:
                    sp -= 1
                    nd = stack2[2 * sp]
                    closing = stack2[2 * sp + 1]
                    if j > 0:
                        putc(&der, b' ')
                    j += 1
                    if closing:
                        putc(&der, b')')
                    elif child_l[nd] < 0:
                        put(&der, lp + ids[span_a[nd]] * token_len, token_len)
                    else:
                        putc(&der, b'(')
                        if swapped[nd]:
                            putc(&der, b'*')
                        stack2[2 * sp] = nd
                        stack2[2 * sp + 1] = 1
                        sp += 1
                        stack2[2 * sp] = child_r[nd]
                        stack2[2 * sp + 1] = 0
                        sp += 1
                        stack2[2 * sp] = child_l[nd]
                        stack2[2 * sp + 1] = 0
                        sp += 1
                putc(&der, b'\n')

        if want_derivations:
            return buf_take(&src), buf_take(&trg), buf_take(&der)
        return buf_take(&src), buf_take(&trg), None
    finally:
        free(table)
        free(ids)
        if src.p != NULL:
            free(src.p)
        if trg.p != NULL:
            free(trg.p)
        if der.p != NULL:
            free(der.p)

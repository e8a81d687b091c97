"""Hot loops: free reduction of letter-code arrays and HLT coset enumeration.

Letter codes are signed integers ``(generator index + 1) * sign``.  Coset
tables use column ``2 * g`` for generator ``g`` and ``2 * g + 1`` for its
inverse, so the inverse column is ``col ^ 1``.
"""

import numpy as np

from ._accel import kernel

UNDEF = -1

# Status codes returned by ``hlt_enumerate``.
CLOSED = 0
OUT_OF_SPACE = 1


@kernel
def free_reduce_codes(codes):
    out = np.empty(codes.shape[0], dtype=np.int64)
    top = 0
    for k in range(codes.shape[0]):
        c = codes[k]
        if top > 0 and out[top - 1] == -c:
            top -= 1
        else:
            out[top] = c
            top += 1
    return out[:top].copy()


@kernel
def _rep(p, k):
    root = k
    while p[root] != root:
        root = p[root]
    while p[k] != root:
        nxt = p[k]
        p[k] = root
        k = nxt
    return root


@kernel
def _merge(p, queue, qlen, k, l):
    a = _rep(p, k)
    b = _rep(p, l)
    if a == b:
        return qlen
    lo = min(a, b)
    hi = max(a, b)
    p[hi] = lo
    queue[qlen] = hi
    return qlen + 1


@kernel
def _coincidence(table, p, queue, a, b):
    ncols = table.shape[1]
    qlen = _merge(p, queue, 0, a, b)
    i = 0
    while i < qlen:
        g = queue[i]
        i += 1
        for x in range(ncols):
            d = table[g, x]
            if d == UNDEF:
                continue
            xi = x ^ 1
            table[d, xi] = UNDEF
            mu = _rep(p, g)
            nu = _rep(p, d)
            if table[mu, x] != UNDEF:
                qlen = _merge(p, queue, qlen, nu, table[mu, x])
            elif table[nu, xi] != UNDEF:
                qlen = _merge(p, queue, qlen, mu, table[nu, xi])
            else:
                table[mu, x] = nu
                table[nu, xi] = mu


@kernel
def _scan_and_fill(table, p, queue, state, alpha, word):
    # state[0] = number of rows used, state[1] = definitions made
    f = alpha
    b = alpha
    i = 0
    j = word.shape[0] - 1
    cap = table.shape[0]
    while True:
        while i <= j and table[f, word[i]] != UNDEF:
            f = table[f, word[i]]
            i += 1
        if i > j:
            if f != b:
                _coincidence(table, p, queue, f, b)
            return True
        while j >= i and table[b, word[j] ^ 1] != UNDEF:
            b = table[b, word[j] ^ 1]
            j -= 1
        if j < i:
            _coincidence(table, p, queue, f, b)
            return True
        if i == j:
            table[f, word[i]] = b
            table[b, word[i] ^ 1] = f
            return True
        n = state[0]
        if n >= cap:
            return False
        table[f, word[i]] = n
        table[n, word[i] ^ 1] = f
        p[n] = n
        state[0] = n + 1
        state[1] += 1


@kernel
def hlt_enumerate(ncols, rel_flat, rel_off, sub_flat, sub_off, cap):
    """Hasselgrove-Leech-Trotter enumeration with coincidence handling.

    Returns ``(status, table, p, rows_used)``; ``p[i] == i`` marks live rows.
    """
    table = np.full((cap, ncols), UNDEF, dtype=np.int64)
    p = np.arange(cap, dtype=np.int64)
    queue = np.empty(cap, dtype=np.int64)
    state = np.zeros(2, dtype=np.int64)
    state[0] = 1
    for s in range(sub_off.shape[0] - 1):
        w = sub_flat[sub_off[s]:sub_off[s + 1]]
        if w.shape[0] == 0:
            continue
        if not _scan_and_fill(table, p, queue, state, 0, w):
            return OUT_OF_SPACE, table, p, state[0]
    alpha = 0
    while alpha < state[0]:
        for r in range(rel_off.shape[0] - 1):
            if p[alpha] != alpha:
                break
            w = rel_flat[rel_off[r]:rel_off[r + 1]]
            if w.shape[0] == 0:
                continue
            if not _scan_and_fill(table, p, queue, state, alpha, w):
                return OUT_OF_SPACE, table, p, state[0]
        if p[alpha] == alpha:
            for x in range(ncols):
                if table[alpha, x] == UNDEF:
                    n = state[0]
                    if n >= cap:
                        return OUT_OF_SPACE, table, p, state[0]
                    table[alpha, x] = n
                    table[n, x ^ 1] = alpha
                    p[n] = n
                    state[0] = n + 1
                    state[1] += 1
        alpha += 1
    return CLOSED, table, p, state[0]

"""Independent reference computations used by the tests."""

from fpgadgets.core import GroupPresentation, Word

# A5 acting on {0..4}: a = (0 1)(2 3), b = (0 2 4)
A5_PERMS = {1: (1, 0, 3, 2, 4), 2: (2, 1, 4, 3, 0)}


def _inv(p):
    out = [0] * len(p)
    for i, j in enumerate(p):
        out[j] = i
    return tuple(out)


def perm_of_word(codes, gens=A5_PERMS):
    cur = tuple(range(5))
    for c in codes:
        g = gens[abs(c)] if c > 0 else _inv(gens[abs(c)])
        cur = tuple(g[i] for i in cur)      # act on the right
    return cur


def closure_order(gens=A5_PERMS):
    ident = tuple(range(5))
    seen = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for p in frontier:
            for g in gens.values():
                q = tuple(g[i] for i in p)
                if q not in seen:
                    seen.add(q)
                    nxt.append(q)
        frontier = nxt
    return len(seen)


# -- independent residue oracle ---------------------------------------------

def _unimodular(rng, n, steps=6):
    """Random unimodular matrix with its inverse, by elementary column operations."""
    A = [[int(i == j) for j in range(n)] for i in range(n)]
    Ainv = [row[:] for row in A]
    for _ in range(steps):
        if n < 2:
            break
        i, j = rng.sample(range(n), 2)
        k = rng.randint(-2, 2)
        for row in A:                  # column i += k column j
            row[i] += k * row[j]
        Ainv[j] = [a - k * b for a, b in zip(Ainv[j], Ainv[i])]   # row j -= k row i
    return A, Ainv


def abelian_oracle_instance(rng):
    """Presentation with relation matrix diag(d)·B where B is unimodular.

    ``v`` lies in the row lattice iff ``v·B⁻¹`` has coordinate ``i``
    divisible by ``d_i`` (and zero on free coordinates).
    """
    n = rng.randint(1, 3)
    d = _chain(rng, n)
    B, Binv = _unimodular(rng, n)
    rows = [[d[i] * B[i][j] for j in range(n)] for i in range(n)]
    gens = tuple("abc"[:n])
    rels = tuple(Word(tuple(c for j in range(n) for c in [(j + 1) if row[j] > 0 else -(j + 1)] * abs(row[j])))
                 for row in rows)
    Pn = GroupPresentation(gens, rels, "O")
    v = [rng.randint(-25, 25) for _ in range(n)]
    if rng.random() < 0.5:           # bias towards trivial words
        coeff = [rng.randint(-3, 3) for _ in range(n)]
        v = [sum(coeff[i] * rows[i][j] for i in range(n)) for j in range(n)]
    w = Word(tuple(c for j in range(n) for c in [(j + 1) if v[j] > 0 else -(j + 1)] * abs(v[j])))
    y = [sum(v[i] * Binv[i][j] for i in range(n)) for j in range(n)]
    truth = all((y[j] == 0) if d[j] == 0 else (y[j] % d[j] == 0) for j in range(n))
    return Pn, w, truth


def _chain(rng, n):
    """Diagonal ``d_1 | d_2 | ...`` with entries at most 20, zeros (free part) last."""
    out, prev = [], 1
    for _ in range(n):
        if rng.random() < 0.2:
            out.append(0)
            prev = 0
            continue
        if prev == 0:
            out.append(0)
            continue
        choices = [m for m in range(prev, 21, prev)]
        prev = rng.choice(choices)
        out.append(prev)
    return out

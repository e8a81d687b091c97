"""Word and isomorphism problems for finitely presented abelian groups.

Everything here is exact integer arithmetic on Python ints; Smith form
entries grow quickly even for tiny presentations.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd

from .core import GroupPresentation, Word, abelianize


@dataclass(frozen=True)
class IntMatrix:
    rows: int
    cols: int
    entries: tuple[int, ...]

    def __post_init__(self):
        entries = tuple(int(e) for e in self.entries)
        if len(entries) != self.rows * self.cols:
            raise ValueError(f"expected {self.rows * self.cols} entries, got {len(entries)}")
        object.__setattr__(self, "entries", entries)

    @classmethod
    def from_rows(cls, rows: list[list[int]], cols: int | None = None) -> "IntMatrix":
        ncols = cols if cols is not None else (len(rows[0]) if rows else 0)
        for r in rows:
            if len(r) != ncols:
                raise ValueError("ragged matrix")
        return cls(len(rows), ncols, tuple(x for r in rows for x in r))

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls.from_rows([[int(i == j) for j in range(n)] for i in range(n)], n)

    def to_rows(self) -> list[list[int]]:
        return [list(self.entries[i * self.cols:(i + 1) * self.cols]) for i in range(self.rows)]

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self.entries[i * self.cols + j]

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise ValueError("shape mismatch")
        a, b = self.to_rows(), other.to_rows()
        out = [[sum(a[i][k] * b[k][j] for k in range(self.cols)) for j in range(other.cols)]
               for i in range(self.rows)]
        return IntMatrix.from_rows(out, other.cols)

    def diagonal(self) -> list[int]:
        return [self[i, i] for i in range(min(self.rows, self.cols))]


def determinant(M: IntMatrix) -> int:
    """Exact determinant by fraction-free (Bareiss) elimination."""
    if M.rows != M.cols:
        raise ValueError("determinant of a non-square matrix")
    n = M.rows
    if n == 0:
        return 1
    a = M.to_rows()
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


@dataclass(frozen=True)
class AbelianInvariants:
    rank: int
    factors: tuple[int, ...] = ()

    def __post_init__(self):
        fs = tuple(self.factors)
        if any(f < 2 for f in fs):
            raise ValueError("invariant factors must be >= 2")
        if any(fs[i + 1] % fs[i] for i in range(len(fs) - 1)):
            raise ValueError("invariant factors must form a divisibility chain")
        object.__setattr__(self, "factors", fs)

    @property
    def is_trivial(self) -> bool:
        return self.rank == 0 and not self.factors

    def __str__(self):
        parts = [f"Z/{d}" for d in self.factors] + ["Z"] * self.rank
        return " + ".join(parts) if parts else "1"


def relation_matrix(P: GroupPresentation) -> IntMatrix:
    return IntMatrix.from_rows([r.exponent_sums(P.ngens) for r in P.relators], P.ngens)


def smith_normal_form(M: IntMatrix) -> tuple[IntMatrix, IntMatrix, IntMatrix]:
    """Return ``(D, U, V)`` with ``U @ M @ V == D`` and ``U``, ``V`` unimodular.

    Pivot rule: smallest nonzero absolute value in the remaining block,
    first in row-major order.
    """
    m, n = M.rows, M.cols
    a = M.to_rows()
    U = [[int(i == j) for j in range(m)] for i in range(m)]
    V = [[int(i == j) for j in range(n)] for i in range(n)]

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, k):
        # row dst += k * row src
        if k:
            a[dst] = [x + k * y for x, y in zip(a[dst], a[src])]
            U[dst] = [x + k * y for x, y in zip(U[dst], U[src])]

    def add_col(dst, src, k):
        if k:
            for row in a:
                row[dst] += k * row[src]
            for row in V:
                row[dst] += k * row[src]

    for t in range(min(m, n)):
        while True:
            best = None
            for i in range(t, m):
                for j in range(t, n):
                    if a[i][j] and (best is None or abs(a[i][j]) < abs(a[best[0]][best[1]])):
                        best = (i, j)
            if best is None:
                D = IntMatrix.from_rows(a, n)
                return D, IntMatrix.from_rows(U, m), IntMatrix.from_rows(V, n)
            swap_rows(t, best[0])
            swap_cols(t, best[1])
            p = a[t][t]
            dirty = False
            for i in range(t + 1, m):
                q = a[i][t] // p
                add_row(i, t, -q)
                dirty |= a[i][t] != 0
            for j in range(t + 1, n):
                q = a[t][j] // p
                add_col(j, t, -q)
                dirty |= a[t][j] != 0
            if dirty:
                continue
            bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n)
                        if a[i][j] % p), None)
            if bad is None:
                break
            add_row(t, bad[0], 1)
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            U[t] = [-x for x in U[t]]
    return IntMatrix.from_rows(a, n), IntMatrix.from_rows(U, m), IntMatrix.from_rows(V, n)


def check_smith(M: IntMatrix, D: IntMatrix, U: IntMatrix, V: IntMatrix) -> bool:
    if U @ M @ V != D:
        return False
    if abs(determinant(U)) != 1 or abs(determinant(V)) != 1:
        return False
    diag = D.diagonal()
    for i in range(D.rows):
        for j in range(D.cols):
            if i != j and D[i, j]:
                return False
    nz = [d for d in diag if d]
    # nonzero entries first, zeros trailing
    if any(d < 0 for d in diag) or any(d == 0 for d in diag[: len(nz)]):
        return False
    return all(nz[k + 1] % nz[k] == 0 for k in range(len(nz) - 1))


def _chain(values: list[int]) -> tuple[int, ...]:
    """Re-chain a multiset of positive cyclic orders into invariant factors."""
    fs = [v for v in values if v > 1]
    changed = True
    while changed:
        changed = False
        fs.sort()
        for i in range(len(fs)):
            for j in range(i + 1, len(fs)):
                if fs[j] % fs[i]:
                    g = gcd(fs[i], fs[j])
                    fs[i], fs[j] = g, fs[i] * fs[j] // g
                    changed = True
        fs = [f for f in fs if f > 1]
    return tuple(sorted(fs))


def abelian_invariants(P: GroupPresentation) -> AbelianInvariants:
    M = relation_matrix(abelianize(P))
    D, _, _ = smith_normal_form(M)
    diag = D.diagonal()
    nonzero = [d for d in diag if d]
    rank = P.ngens - len(nonzero)
    return AbelianInvariants(rank, _chain(nonzero))


def merge_invariants(*parts: AbelianInvariants) -> AbelianInvariants:
    return AbelianInvariants(sum(p.rank for p in parts),
                             _chain([f for p in parts for f in p.factors]))


def abelian_word_problem(P: GroupPresentation, w: Word) -> bool:
    """True iff ``w`` is trivial in the abelianization of ``P``."""
    P.check_word(w)
    M = relation_matrix(abelianize(P))
    D, _, V = smith_normal_form(M)
    v = w.exponent_sums(P.ngens)
    # v in rowspace(M)  <=>  v V in rowspace(D)
    vv = [sum(v[k] * V[k, j] for k in range(P.ngens)) for j in range(P.ngens)]
    for j, x in enumerate(vv):
        d = D[j, j] if j < D.rows else 0
        if d == 0:
            if x != 0:
                return False
        elif x % d:
            return False
    return True


def is_perfect(P: GroupPresentation) -> bool:
    return abelian_invariants(P).is_trivial

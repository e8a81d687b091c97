"""Coset enumeration and certificates read off a closed coset table.

``certify_table`` replays a closed table for the trivial subgroup: it grows
a Schreier tree from coset 0 and proves every non-tree edge trivial from a
relator cycle in which it is the only unproved edge (after free reduction
over the unknown edges).  When that succeeds, any word tracing a loop at
coset 0 gets a product-of-conjugates certificate.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import kernels
from .certificates import (Entry, Proof, TrivialityCertificate, by_relator, context, inverse, product_all,
                           refl, symm, trans)
from .core import GroupPresentation, Word, invert_codes, reduce_codes

# Cap on coset table cells (rows x columns) allocated in one enumeration.
MAX_TABLE_CELLS = 1 << 24
# Coset cap for the proof-carrying fallback enumeration.
PROVING_LIMIT = 200_000


def _column(code: int) -> int:
    g = abs(code) - 1
    return 2 * g if code > 0 else 2 * g + 1


def _flatten(words: Sequence[Word]) -> tuple[np.ndarray, np.ndarray]:
    cols = [_column(c) for w in words for c in w.codes]
    off = np.zeros(len(words) + 1, dtype=np.int64)
    np.cumsum([len(w) for w in words], out=off[1:])
    return np.asarray(cols, dtype=np.int64), off


@dataclass
class CosetTable:
    """Closed coset table; row 0 is the subgroup's own coset.

    ``table[c, 2g]`` is the coset of ``c·g`` and ``table[c, 2g+1]`` that of
    ``c·g⁻¹``.
    """

    presentation: GroupPresentation
    subgroup: tuple[Word, ...]
    table: np.ndarray
    definitions: int
    closed: bool = True
    _cert: "TableCertifier | ProvingEnumeration | None" = field(default=None, repr=False)

    @property
    def index(self) -> int:
        return int(self.table.shape[0])

    def trace(self, w: Word, start: int = 0) -> int:
        c = start
        for code in w.codes:
            c = int(self.table[c, _column(code)])
        return c

    def is_consistent(self) -> bool:
        """Check the permutation and relator conditions from scratch."""
        t = self.table
        n = t.shape[0]
        if (t < 0).any() or (t >= n).any():
            return False
        for col in range(t.shape[1]):
            if not np.array_equal(t[t[:, col], col ^ 1], np.arange(n)):
                return False
        for r in self.presentation.relators:
            for c in range(n):
                if self.trace(r, c) != c:
                    return False
        return all(self.trace(h, 0) == 0 for h in self.subgroup)

    def certifier(self) -> "TableCertifier | ProvingEnumeration | None":
        """Edge certificates for a trivial-subgroup table, or ``None``."""
        if self.subgroup:
            return None
        if self._cert is None:
            cert = TableCertifier(self)
            if cert.run():
                self._cert = cert
            else:
                # replay stuck: redo the enumeration carrying proofs
                pe = ProvingEnumeration(self.presentation, min(PROVING_LIMIT, max(10_000, 8 * self.definitions)))
                self._cert = pe if pe.run() and pe.table.index == self.index else False
        return self._cert or None


def coset_enumerate(P: GroupPresentation, subgroup: Sequence[Word] = (), budget: int = 1_000_000,
                    max_cells: int = MAX_TABLE_CELLS) -> CosetTable | None:
    """HLT enumeration of the cosets of ``⟨subgroup⟩``.

    ``budget`` bounds the number of coset definitions.  Returns ``None`` if
    the table does not close within it.
    """
    subgroup = tuple(subgroup)
    ncols = 2 * P.ngens
    if ncols == 0:
        return CosetTable(P, subgroup, np.zeros((1, 0), dtype=np.int64), 0)
    cap = int(min(budget + 1, max(2, max_cells // ncols)))
    rel_flat, rel_off = _flatten(P.relators)
    sub_flat, sub_off = _flatten(subgroup)
    status, table, p, used = kernels.hlt_enumerate(ncols, rel_flat, rel_off, sub_flat, sub_off, cap)
    if status != kernels.CLOSED:
        return None
    used = int(used)
    live = np.flatnonzero(p[:used] == np.arange(used))
    renum = np.full(used, -1, dtype=np.int64)
    renum[live] = np.arange(live.size)
    rows = table[live]
    if (rows < 0).any():
        return None
    compact = renum[rows]
    if (compact < 0).any():
        return None
    return CosetTable(P, subgroup, compact, used - 1)


class TableCertifier:
    def __init__(self, ct: CosetTable):
        self.ct = ct
        self.P = ct.presentation
        self.n = ct.index
        self.tau: dict[int, tuple[int, ...]] = {0: ()}
        self.proofs: dict[tuple[int, int], Proof] = {}   # (coset, gen) -> Proof(S_e, ε)

    def schreier(self, c: int, g: int) -> tuple[int, ...]:
        d = int(self.ct.table[c, 2 * g])
        return reduce_codes(self.tau[c] + (g + 1,) + invert_codes(self.tau[d]))

    def _path(self, start: int, codes: Sequence[int]):
        """Edges ``((coset, gen), sign)`` walked by ``codes`` from ``start``."""
        t = self.ct.table
        c = start
        out = []
        for code in codes:
            g = abs(code) - 1
            if code > 0:
                out.append(((c, g), 1))
                c = int(t[c, 2 * g])
            else:
                d = int(t[c, 2 * g + 1])
                out.append(((d, g), -1))
                c = d
        return out, c

    def run(self) -> bool:
        t = self.ct.table
        ngens = self.P.ngens
        rels = [(i, r.codes) for i, r in enumerate(self.P.relators) if r.codes]
        total = self.n * ngens
        while len(self.proofs) < total:
            if self._deduce_pass(rels):
                continue
            # no deduction available: extend the tree by one edge
            for c in sorted(self.tau):
                hit = False
                for g in range(ngens):
                    d = int(t[c, 2 * g])
                    if d not in self.tau:
                        self.tau[d] = self.tau[c] + (g + 1,)
                        self.proofs[(c, g)] = refl(())
                        hit = True
                        break
                    e = int(t[c, 2 * g + 1])
                    if e not in self.tau:
                        self.tau[e] = self.tau[c] + (-(g + 1),)
                        self.proofs[(e, g)] = refl(())
                        hit = True
                        break
                if hit:
                    break
            else:
                return False
        return True

    def _deduce_pass(self, rels) -> bool:
        progress = False
        for c in sorted(self.tau):
            for ri, codes in rels:
                path, end = self._path(c, codes)
                if end != c or any(e[0] not in self.tau or int(self.ct.table[e[0], 2 * e[1]]) not in self.tau
                                   for e, _ in path):
                    continue
                unknown = [(e, s) for e, s in path if e not in self.proofs]
                if not unknown:
                    continue
                sym = []
                for e, s in unknown:
                    if sym and sym[-1] == (e, -s):
                        sym.pop()
                    else:
                        sym.append((e, s))
                k = 0
                while 2 * k + 1 < len(sym) and sym[k] == (sym[-1 - k][0], -sym[-1 - k][1]):
                    k += 1
                core = sym[k:len(sym) - k]
                if len(core) != 1:
                    continue
                self._deduce(c, ri, codes, path, sym[:k], core[0])
                progress = True
        return progress

    def _deduce(self, c, ri, codes, path, outer, target):
        tau_c = self.tau[c]
        base = Proof(reduce_codes(tau_c + codes + invert_codes(tau_c)), (),
                     by_relator(self.P, ri, tau_c + codes + invert_codes(tau_c), ()).entries)
        parts = []
        for e, s in path:
            sw = self.schreier(*e)
            sw = sw if s > 0 else invert_codes(sw)
            if e in self.proofs:
                p = self.proofs[e]
                parts.append(p if s > 0 else inverse(p))
            else:
                parts.append(refl(sw))
        # ∏ S^σ = ∏_unknown S^σ, then ∏_unknown S^σ = ε
        p = trans(symm(product_all(parts)), base)
        U = ()
        for e, s in outer:
            sw = self.schreier(*e)
            U = U + (sw if s > 0 else invert_codes(sw))
        U = reduce_codes(U)
        p = context(p, left=invert_codes(U), right=U)
        e, s = target
        if s < 0:
            p = inverse(p)
        expect = self.schreier(*e)
        if p.lhs != expect or p.rhs:
            raise AssertionError("edge deduction lost track of its Schreier word")
        self.proofs[e] = p

    def certify(self, w: Word) -> TrivialityCertificate | None:
        """Certificate for ``w`` if it is trivial; ``None`` if it is not."""
        path, end = self._path(0, w.codes)
        if end != 0:
            return None
        parts = []
        for e, s in path:
            p = self.proofs[e]
            parts.append(p if s > 0 else inverse(p))
        proof = product_all(parts)
        if proof.lhs != reduce_codes(w.codes) or proof.rhs:
            raise AssertionError("word certificate lost track of its target")
        return proof.certificate()


class ProvingEnumeration:
    """Pure-Python HLT enumeration of the trivial subgroup that carries, for
    every table edge ``c --x--> d``, a proof of ``τ(c)·x·τ(d)⁻¹ = ε``.

    Slower than the kernel and used only when replaying a closed table gets
    stuck (for instance a one-coset table, where every edge is a loop).
    """

    def __init__(self, P: GroupPresentation, budget: int):
        self.P = P
        self.budget = budget
        self.ncols = 2 * P.ngens
        self.rows: list[list[int]] = []
        self.prf: list[list[Proof | None]] = []
        self.tau: list[tuple[int, ...]] = []
        self.parent: list[int] = []
        self.kproof: list[Proof | None] = []   # τ(d)·τ(parent)⁻¹ = ε
        self.rels = [(i, r.codes) for i, r in enumerate(P.relators) if r.codes]
        self.table: CosetTable | None = None
        self._new(())

    @staticmethod
    def _letter(col: int) -> int:
        g = col // 2 + 1
        return g if col % 2 == 0 else -g

    def _new(self, tau) -> int:
        n = len(self.rows)
        self.rows.append([-1] * self.ncols)
        self.prf.append([None] * self.ncols)
        self.tau.append(reduce_codes(tau))
        self.parent.append(n)
        self.kproof.append(None)
        return n

    def _rep(self, d: int) -> tuple[int, Proof]:
        path = []
        r = d
        while self.parent[r] != r:
            path.append(r)
            r = self.parent[r]
        if not path:
            return d, refl(())
        # compress, composing proofs from the root side outwards
        acc = None
        for node in reversed(path):
            acc = self.kproof[node] if acc is None else product_all([self.kproof[node], acc])
            self.parent[node] = r
            self.kproof[node] = acc
        return r, self.kproof[d]

    def _edge(self, c: int, col: int) -> tuple[int, Proof]:
        d = self.rows[c][col]
        r, pr = self._rep(d)
        if r == d:
            return d, self.prf[c][col]
        return r, product_all([self.prf[c][col], pr])

    def _set(self, c: int, col: int, d: int, p: Proof) -> None:
        self.rows[c][col] = d
        self.prf[c][col] = p
        self.rows[d][col ^ 1] = c
        self.prf[d][col ^ 1] = inverse(p)

    def _coincidence(self, a: int, b: int, pf: Proof) -> None:
        queue = [(a, b, pf)]
        while queue:
            a, b, pf = queue.pop()
            ra, pa = self._rep(a)
            rb, pb = self._rep(b)
            if ra == rb:
                continue
            p = product_all([inverse(pa), pf, pb])        # τ(ra) τ(rb)⁻¹
            lo, hi = (ra, rb) if ra < rb else (rb, ra)
            self.parent[hi] = lo
            self.kproof[hi] = p if hi == ra else inverse(p)
            for col in range(self.ncols):
                e = self.rows[hi][col]
                if e < 0:
                    continue
                eh = self.prf[hi][col]
                if self.rows[e][col ^ 1] == hi:
                    self.rows[e][col ^ 1] = -1
                    self.prf[e][col ^ 1] = None
                l, pl = self._rep(lo)
                e2, pe = self._rep(e)
                # τ(l) x τ(e2)⁻¹ via τ(l)τ(lo)⁻¹ · τ(lo)τ(hi)⁻¹ · τ(hi) x τ(e)⁻¹ · τ(e)τ(e2)⁻¹
                newp = product_all([inverse(pl), inverse(self.kproof[hi]), eh, pe])
                if self.rows[l][col] >= 0:
                    f, ef = self._edge(l, col)
                    queue.append((f, e2, product_all([inverse(ef), newp])))
                elif self.rows[e2][col ^ 1] >= 0:
                    g, eg = self._edge(e2, col ^ 1)
                    queue.append((l, g, product_all([newp, eg])))
                else:
                    self._set(l, col, e2, newp)

    def _relator_proof(self, c: int, ri: int, codes) -> Proof:
        t = self.tau[c]
        return Proof(reduce_codes(t + codes + invert_codes(t)), (), (Entry(ri, 1, t),))

    def _scan(self, c: int, ri: int, codes) -> bool:
        """Scan-and-fill one relator at ``c``; returns False on budget exhaustion.

        Cosets are traced first; proofs are assembled only when the scan
        yields a deduction or a coincidence.
        """
        n = len(codes)
        rows = self.rows
        while True:
            if self.parent[c] != c:
                return True
            f, i, fwd = c, 0, []
            while i < n:
                col = _column(codes[i])
                if rows[f][col] < 0:
                    break
                fwd.append((f, col))
                f, i = self._rep(rows[f][col])[0], i + 1
            if i == n:
                if f != c:
                    pa = product_all([self._edge(*e)[1] for e in fwd])
                    self._coincidence(f, c, product_all([inverse(pa), self._relator_proof(c, ri, codes)]))
                return True
            b, j, bwd = c, n, []
            while j > i:
                col = _column(codes[j - 1]) ^ 1
                if rows[b][col] < 0:
                    break
                bwd.append((b, col))
                b, j = self._rep(rows[b][col])[0], j - 1
            if j <= i + 1:
                pa = product_all([self._edge(*e)[1] for e in fwd])
                # τ(b) r[j:] τ(c)⁻¹, assembled from the backward edges
                pb = product_all([inverse(self._edge(*e)[1]) for e in reversed(bwd)])
                p = product_all([inverse(pa), self._relator_proof(c, ri, codes), inverse(pb)])
                if j == i:
                    self._coincidence(f, b, p)
                else:
                    self._set(f, _column(codes[i]), b, p)
                return True
            if len(rows) > self.budget:
                return False
            d = self._new(self.tau[f] + (codes[i],))
            self._set(f, _column(codes[i]), d, refl(()))

    def run(self) -> bool:
        c = 0
        while c < len(self.rows):
            for ri, codes in self.rels:
                if self.parent[c] != c:
                    break
                if not self._scan(c, ri, codes):
                    return False
            if self.parent[c] == c:
                for col in range(self.ncols):
                    if self.rows[c][col] < 0:
                        if len(self.rows) > self.budget:
                            return False
                        d = self._new(self.tau[c] + (self._letter(col),))
                        self._set(c, col, d, refl(()))
            c += 1
        live = [c for c in range(len(self.rows)) if self.parent[c] == c]
        renum = {c: k for k, c in enumerate(live)}
        arr = np.array([[renum[self.rows[c][col]] for col in range(self.ncols)] for c in live],
                       dtype=np.int64).reshape(len(live), self.ncols)
        self.live = live
        self.table = CosetTable(self.P, (), arr, len(self.rows) - 1)
        return True

    def certify(self, w: Word) -> TrivialityCertificate | None:
        c, parts = 0, []
        for code in w.codes:
            c, e = self._edge(c, _column(code))
            parts.append(e)
        if c != 0:
            return None
        proof = product_all(parts)
        if proof.lhs != reduce_codes(w.codes) or proof.rhs:
            raise AssertionError("word certificate lost track of its target")
        return proof.certificate()

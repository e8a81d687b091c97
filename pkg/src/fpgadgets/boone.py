"""Boone's group over a special semigroup, the word β(w), and certificates.

For a special semigroup with s-letters ``s_b``, q-letters (one of them the
distinguished ``q``) and relations ``F_i q_i1 G_i = H_i q_i2 K_i`` the group
has generators: every semigroup letter, one ``r_i`` per relation, and
``x``, ``t``, ``k``.  Relators are emitted family by family in the order of
:data:`BOONE_SCHEMA`.  ``F#`` replaces each s-letter of ``F`` by its inverse
without reversing.

For a special word ``Σ = X q_j Y`` put ``Σ# = X# q_j Y``; then

    β(w) = [ (Σ#)⁻¹ t Σ#, k ]      with  Σ = h q1 w h,

using ``[u, v] = u⁻¹ v⁻¹ u v``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .certificates import (Proof, TrivialityCertificate, by_relator, context, inverse, product,
                           product_all, refl, trans, verify_certificate)
from .core import (GroupPresentation, PresentationError, SemigroupPresentation, Word, fresh_name, invert_codes,
                   reduce_codes)
from .machine import TuringMachine
from .post import Derivation, LR, apply_step, post_encode, post_letters, schema_checksum, verify_derivation

# One row per relator family: (key, relation as LHS = RHS, range, provenance).
# Transcribed from the Boone-Britton group of a special semigroup as given
# in Rotman, "An Introduction to the Theory of Groups", 4th ed., ch. 12.
BOONE_SCHEMA = (
    ("x-s", "x s = s x^2", "each s-letter s", "Rotman ch.12, relations of B: x s_b = s_b x^2"),
    ("r-s", "r_i s = s x r_i x", "each relation i, each s-letter s",
     "Rotman ch.12, relations of B: r_i s_b = s_b x r_i x"),
    ("r-rel", "r_i^-1 F_i# q_i1 G_i r_i = H_i# q_i2 K_i", "each relation i",
     "Rotman ch.12, relations of B: one per semigroup relation"),
    ("t-r", "t r_i = r_i t", "each relation i", "Rotman ch.12, relations of B"),
    ("t-x", "t x = x t", "single", "Rotman ch.12, relations of B"),
    ("k-r", "k r_i = r_i k", "each relation i", "Rotman ch.12, relations of B"),
    ("k-x", "k x = x k", "single", "Rotman ch.12, relations of B"),
    ("k-qtq", "k q^-1 t q = q^-1 t q k", "single", "Rotman ch.12, relations of B"),
)

BETA_SCHEMA = (
    ("beta", "[ (h^-1 q1 w h)^-1 t (h^-1 q1 w h), k ]", "positive tape w",
     "Rotman ch.12: Σ = h q1 w h, β = [Σ#^-1 t Σ#, k]"),
)


def boone_checksum() -> str:
    return schema_checksum(BOONE_SCHEMA + BETA_SCHEMA)


@dataclass(frozen=True)
class BooneOutput:
    presentation: GroupPresentation
    semigroup: SemigroupPresentation
    letter_gen: tuple[int, ...]     # semigroup letter -> generator index
    r_gen: tuple[int, ...]          # semigroup relation -> generator index
    x: int
    t: int
    k: int
    q_letter: int                   # the distinguished semigroup letter q
    rel_index: dict                 # (family, *args) -> relator index
    machine: TuringMachine | None = None

    def code(self, gen: int, sign: int = 1) -> int:
        return (gen + 1) * sign

    def sharp(self, word: Sequence[int]) -> tuple[int, ...]:
        """``Σ#`` for a special semigroup word ``Σ``."""
        F, q, G = self.semigroup.split_special(word)
        return (tuple(-self.code(self.letter_gen[a]) for a in F) + (self.code(self.letter_gen[q]),)
                + tuple(self.code(self.letter_gen[a]) for a in G))


def boone_group(S: SemigroupPresentation, q_letter: int, name: str = "B") -> BooneOutput:
    if not S.is_special():
        raise PresentationError("Boone's construction needs a special semigroup presentation")
    if not S.is_q(q_letter):
        raise PresentationError("distinguished letter must be a q-letter")
    names = list(S.generators)
    letter_gen = tuple(range(len(names)))
    r_gen = []
    for i in range(len(S.relations)):
        r_gen.append(len(names))
        names.append(fresh_name(f"r{i}", names))
    x = len(names)
    names.append(fresh_name("x", names))
    t = len(names)
    names.append(fresh_name("t", names))
    k = len(names)
    names.append(fresh_name("k", names))

    def c(g, sign=1):
        return (g + 1) * sign

    def sharp_side(word):
        F, q, G = S.split_special(word)
        return tuple(-c(letter_gen[a]) for a in F) + (c(letter_gen[q]),) + tuple(c(letter_gen[a]) for a in G)

    s_letters = range(S.n_s)
    rels: list[Word] = []
    index: dict = {}

    def emit(key, codes):
        index[key] = len(rels)
        rels.append(Word(tuple(codes)))

    X, T, K = c(x), c(t), c(k)
    for s in s_letters:
        sc = c(letter_gen[s])
        emit(("x-s", s), (X, sc, -X, -X, -sc))
    for i in range(len(S.relations)):
        R = c(r_gen[i])
        for s in s_letters:
            sc = c(letter_gen[s])
            emit(("r-s", i, s), (R, sc, -X, -R, -X, -sc))
    for i, (lhs, rhs) in enumerate(S.relations):
        R = c(r_gen[i])
        emit(("r-rel", i), (-R,) + sharp_side(lhs) + (R,) + invert_codes(sharp_side(rhs)))
    for i in range(len(S.relations)):
        R = c(r_gen[i])
        emit(("t-r", i), (T, R, -T, -R))
    emit(("t-x",), (T, X, -T, -X))
    for i in range(len(S.relations)):
        R = c(r_gen[i])
        emit(("k-r", i), (K, R, -K, -R))
    emit(("k-x",), (K, X, -K, -X))
    Q = c(letter_gen[q_letter])
    qtq = (-Q, T, Q)
    emit(("k-qtq",), (K,) + qtq + (-K,) + invert_codes(qtq))
    P = GroupPresentation(tuple(names), tuple(rels), name)
    return BooneOutput(P, S, letter_gen, tuple(r_gen), x, t, k, q_letter, index)


def boone_encode(M: TuringMachine) -> BooneOutput:
    S = post_encode(M)
    L = post_letters(M)
    B = boone_group(S, L.q, name=f"B({M.name})")
    return BooneOutput(B.presentation, B.semigroup, B.letter_gen, B.r_gen, B.x, B.t, B.k,
                       B.q_letter, B.rel_index, M)


def _z_word(B: BooneOutput, sigma_sharp: tuple[int, ...]) -> tuple[int, ...]:
    return invert_codes(sigma_sharp) + (B.code(B.t),) + sigma_sharp


def beta_of_word(B: BooneOutput, sigma: Sequence[int]) -> Word:
    z = _z_word(B, B.sharp(sigma))
    K = B.code(B.k)
    return Word(invert_codes(z) + (-K,) + z + (K,))


def beta(B: BooneOutput, w: Sequence[int] | Word) -> Word:
    """β for a positive tape ``w`` (symbol indices of the machine alphabet)."""
    if B.machine is None:
        raise ValueError("beta needs a Boone group built from a machine")
    if isinstance(w, Word):
        if not w.is_positive():
            raise ValueError("beta needs a positive word")
        tape = tuple(c - 1 for c in w.codes)
    else:
        tape = tuple(w)
        if any(s < 0 for s in tape):
            raise ValueError("beta needs a positive word")
    if any(s >= len(B.machine.alphabet) for s in tape):
        raise ValueError("tape symbol outside the machine alphabet")
    L = post_letters(B.machine)
    return beta_of_word(B, L.start_word(tape))


# -- certificate lifting ---------------------------------------------------

class _Lifter:
    """Builds proofs in B(Γ) mirroring semigroup rewrite steps."""

    def __init__(self, B: BooneOutput):
        self.B = B
        self.P = B.presentation
        self.X = B.code(B.x)
        self.T = B.code(B.t)
        self.K = B.code(B.k)
        self.r_of = {B.code(g): i for i, g in enumerate(B.r_gen)}
        self.letter_cache: dict = {}

    def phi(self, s: int, u: Sequence[int]) -> tuple[int, ...]:
        """Image of ``u`` (word in x, r_i) under conjugation by ``s``."""
        X = self.X
        out = []
        for ch in u:
            if ch == X:
                out += [X, X]
            elif ch == -X:
                out += [-X, -X]
            elif ch > 0:
                out += [X, ch, X]
            else:
                out += [-X, ch, -X]
        return tuple(out)

    def letter(self, s: int, ch: int) -> Proof:
        """``s⁻¹ ch s = φ_s(ch)`` for a letter ``ch`` in x, r_i and inverses."""
        key = (s, ch)
        if key not in self.letter_cache:
            sc = self.B.code(self.B.letter_gen[s])
            if ch < 0:
                p = inverse(self.letter(s, -ch))
            elif ch == self.X:
                p = by_relator(self.P, self.B.rel_index[("x-s", s)], (-sc, ch, sc), self.phi(s, (ch,)))
            else:
                i = self.r_of[ch]
                p = by_relator(self.P, self.B.rel_index[("r-s", i, s)], (-sc, ch, sc), self.phi(s, (ch,)))
            self.letter_cache[key] = p
        return self.letter_cache[key]

    def conj(self, s: int, u: Sequence[int]) -> Proof:
        return product_all([self.letter(s, ch) for ch in u])

    def move_left(self, X: Sequence[int], u: Sequence[int]) -> tuple[Proof, tuple[int, ...]]:
        """Proof of ``X# u = φ_X(u) X#``; returns it with ``φ_X(u)``."""
        codes = [-self.B.code(self.B.letter_gen[a]) for a in X]
        proofs = []
        cur = tuple(u)
        for m in range(len(X) - 1, -1, -1):
            p = context(self.conj(X[m], cur), right=(codes[m],))
            proofs.append(context(p, left=codes[:m], right=codes[m + 1:]))
            cur = self.phi(X[m], cur)
        if not proofs:
            return refl(tuple(u)), tuple(u)
        return trans(*proofs), cur

    def move_right(self, u: Sequence[int], Y: Sequence[int]) -> tuple[Proof, tuple[int, ...]]:
        """Proof of ``u Y = Y φ_Y(u)``; returns it with ``φ_Y(u)``."""
        codes = [self.B.code(self.B.letter_gen[a]) for a in Y]
        proofs = []
        cur = tuple(u)
        for m in range(len(Y)):
            p = context(self.conj(Y[m], cur), left=(codes[m],))
            proofs.append(context(p, left=codes[:m], right=codes[m + 1:]))
            cur = self.phi(Y[m], cur)
        if not proofs:
            return refl(tuple(u)), tuple(u)
        return trans(*proofs), cur

    def commute(self, c: int, blocks: Sequence[tuple[int, ...]], block_proof) -> Proof:
        """``U⁻¹ c U = c`` for ``U`` the concatenation of ``blocks``."""
        proofs = []
        flat_suffix = [b for blk in blocks for b in blk]
        pos = 0
        for blk in blocks:
            pos += len(blk)
            rest = tuple(flat_suffix[pos:])
            p = block_proof(blk)
            proofs.append(context(p, left=invert_codes(rest), right=rest))
        if not proofs:
            return refl((c,))
        return trans(*proofs)

    def commute_letter(self, c: int, blk: tuple[int, ...]) -> Proof:
        fam = "t" if c == self.T else "k"
        (y,) = blk
        if abs(y) == self.X:
            idx = self.B.rel_index[(f"{fam}-x",)]
        else:
            idx = self.B.rel_index[(f"{fam}-r", self.r_of[abs(y)])]
        return by_relator(self.P, idx, invert_codes(blk) + (c,) + blk, (c,))

    def step(self, word: tuple[int, ...], st) -> tuple[Proof, tuple[int, ...], tuple[int, ...]]:
        """Proof of ``Σ# = E Σ'# E'`` for one semigroup rewrite."""
        S = self.B.semigroup
        lhs, rhs = S.relations[st.relation]
        src, dst = (lhs, rhs) if st.direction == LR else (rhs, lhs)
        Xw = word[:st.offset]
        Yw = word[st.offset + len(src):]
        R = self.B.code(self.B.r_gen[st.relation])
        rho = R if st.direction == LR else -R
        src_sharp = self.B.sharp(src)
        dst_sharp = self.B.sharp(dst)
        idx = self.B.rel_index[("r-rel", st.relation)]
        p_rel = by_relator(self.P, idx, src_sharp, (rho,) + dst_sharp + (-rho,))
        xs = tuple(-self.B.code(self.B.letter_gen[a]) for a in Xw)
        ys = tuple(self.B.code(self.B.letter_gen[a]) for a in Yw)
        a = context(p_rel, left=xs, right=ys)
        ml, E = self.move_left(Xw, (rho,))
        b = context(ml, right=dst_sharp + (-rho,) + ys)
        mr, E2 = self.move_right((-rho,), Yw)
        c = context(mr, left=E + xs + dst_sharp)
        return trans(a, b, c), E, E2


def certificate_from_derivation(B: BooneOutput, d: Derivation) -> tuple[TrivialityCertificate, Word]:
    """Lift a derivation ``h q1 w h => q`` to a certificate that β(w) = e.

    Returns ``(certificate, target)`` with ``target == beta_of_word(B, d.start)``.
    """
    S = B.semigroup
    if not verify_derivation(S, d):
        raise ValueError("derivation does not verify")
    if tuple(d.end) != (B.q_letter,):
        raise ValueError("derivation must end at the distinguished letter q")
    if tuple(d.start) == tuple(d.end):
        raise ValueError("empty derivation: start word is already q")
    S.split_special(d.start)
    lift = _Lifter(B)
    T, K = lift.T, lift.K
    target = beta_of_word(B, d.start)

    words = [tuple(d.start)]
    for st in d.steps:
        words.append(apply_step(S, words[-1], st))

    # chain:  Z_0 = G⁻¹ Z_j G
    z0 = _z_word(B, B.sharp(words[0]))
    chain = refl(z0)
    G: tuple[int, ...] = ()
    for j, st in enumerate(d.steps):
        sp, E, E2 = lift.step(words[j], st)
        s_next = B.sharp(words[j + 1])
        left_inv = inverse(sp)
        zp = product(product(left_inv, refl((T,))), sp)
        ct = lift.commute(T, [(ch,) for ch in E], lambda blk: lift.commute_letter(T, blk))
        zp = trans(zp, context(ct, left=invert_codes(E2) + invert_codes(s_next),
                               right=s_next + E2))
        chain = trans(chain, context(zp, left=invert_codes(G), right=G))
        G = E2 + G

    zn = _z_word(B, B.sharp(words[-1]))
    kk = (K,)
    lhs = product(product(product(inverse(chain), refl((-K,))), chain), refl(kk))
    blocks = [(ch,) for ch in invert_codes(G)] + [zn] + [(ch,) for ch in G]

    def kblock(blk):
        if blk == zn:
            return by_relator(B.presentation, B.rel_index[("k-qtq",)], invert_codes(zn) + kk + zn, kk)
        return lift.commute_letter(K, blk)

    ck = lift.commute(K, blocks, kblock)
    fin = context(inverse(ck), right=kk)
    proof = trans(lhs, fin)
    if proof.lhs != reduce_codes(target.codes) or proof.rhs:
        raise AssertionError("certificate construction lost track of its target")
    return proof.certificate(), target


def check_boone_certificate(B: BooneOutput, cert: TrivialityCertificate, target: Word) -> bool:
    return verify_certificate(B.presentation, cert, target)

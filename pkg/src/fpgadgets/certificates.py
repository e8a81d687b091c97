"""Product-of-conjugates certificates and a small algebra for building them.

A certificate is a sequence of ``(relator index, sign, conjugator)``; it
certifies ``target`` when ``∏ u r^{±1} u⁻¹`` freely reduces to ``target``.

:class:`Proof` packages a certificate for an equation ``lhs = rhs``, meaning
``∏ entries`` freely equals ``lhs · rhs⁻¹``.  The combinators below keep that
invariant, so a chain of them ending in ``Proof(target, ε)`` is a certificate
for ``target``.  Nothing here is trusted: :func:`verify_certificate` rechecks
the end product by free reduction alone.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .core import (EMPTY, GroupPresentation, PresentationError, Word, format_word, invert_codes,
                   parse_word, reduce_codes, reduce_codes_array)

Codes = tuple[int, ...]


@dataclass(frozen=True)
class Entry:
    relator: int
    sign: int
    conjugator: Codes


@dataclass(frozen=True)
class TrivialityCertificate:
    entries: tuple[Entry, ...] = ()

    def __len__(self):
        return len(self.entries)

    def size(self) -> int:
        """Total symbol count of conjugators plus one per entry."""
        return sum(1 + len(e.conjugator) for e in self.entries)


def expand(P: GroupPresentation, entries: Iterable[Entry]) -> np.ndarray:
    """Concatenate ``u r^{±1} u⁻¹`` for every entry, unreduced."""
    chunks = []
    for e in entries:
        r = P.relators[e.relator].codes
        u = e.conjugator
        chunks.append(u)
        chunks.append(r if e.sign > 0 else invert_codes(r))
        chunks.append(invert_codes(u))
    if not chunks:
        return np.zeros(0, dtype=np.int64)
    return np.fromiter((c for ch in chunks for c in ch), dtype=np.int64)


def certificate_product(P: GroupPresentation, cert: TrivialityCertificate) -> Codes:
    return tuple(int(c) for c in reduce_codes_array(expand(P, cert.entries)))


def verify_certificate(P: GroupPresentation, cert: TrivialityCertificate, target: Word,
                       diagnostics: list[str] | None = None) -> bool:
    """Exact check that the conjugate product freely equals ``target``."""
    for k, e in enumerate(cert.entries):
        if not 0 <= e.relator < len(P.relators) or e.sign not in (1, -1):
            if diagnostics is not None:
                diagnostics.append(f"entry {k}: bad relator index {e.relator} or sign {e.sign}")
            return False
        if any(c == 0 or abs(c) > P.ngens for c in e.conjugator):
            if diagnostics is not None:
                diagnostics.append(f"entry {k}: conjugator leaves the generating set")
            return False
    if target.max_generator() >= P.ngens:
        if diagnostics is not None:
            diagnostics.append("target leaves the generating set")
        return False
    ok = certificate_product(P, cert) == reduce_codes(target.codes)
    if not ok and diagnostics is not None:
        diagnostics.append("conjugate product does not reduce to the target")
    return ok


# -- proof algebra ---------------------------------------------------------

@dataclass(frozen=True)
class Proof:
    lhs: Codes
    rhs: Codes
    entries: tuple[Entry, ...]

    def certificate(self) -> TrivialityCertificate:
        if self.rhs:
            raise ValueError("proof does not end at the identity")
        return TrivialityCertificate(self.entries)


def refl(w: Sequence[int]) -> Proof:
    w = reduce_codes(w)
    return Proof(w, w, ())


def cyclic_core(codes: Sequence[int]) -> tuple[Codes, Codes]:
    """Split a word as ``c · core · c⁻¹`` with ``core`` cyclically reduced."""
    w = reduce_codes(codes)
    k = 0
    while 2 * k + 1 < len(w) and w[k] == -w[len(w) - 1 - k]:
        k += 1
    return w[:k], w[k:len(w) - k]


def conjugator_for(P: GroupPresentation, relator: int, word: Sequence[int]) -> tuple[int, Codes] | None:
    """Find ``(sign, g)`` with ``word = g r^sign g⁻¹`` freely, if one exists."""
    c, core = cyclic_core(word)
    for sign in (1, -1):
        r = P.relators[relator].codes
        d, rcore = cyclic_core(r if sign > 0 else invert_codes(r))
        if len(rcore) != len(core) or not core:
            continue
        doubled = rcore + rcore
        for k in range(len(rcore)):
            if doubled[k:k + len(core)] == core:
                # core = Q·Pre where rcore = Pre·Q, so core = Pre⁻¹ rcore Pre
                pre = rcore[:k]
                g = reduce_codes(c + invert_codes(pre) + invert_codes(d))
                return sign, g
    return None


def by_relator(P: GroupPresentation, relator: int, lhs: Sequence[int], rhs: Sequence[int]) -> Proof:
    """One-entry proof of ``lhs = rhs`` where ``lhs rhs⁻¹`` is conjugate to a
    relator or its inverse."""
    lhs, rhs = reduce_codes(lhs), reduce_codes(rhs)
    diff = reduce_codes(lhs + invert_codes(rhs))
    if not diff:
        return Proof(lhs, rhs, ())
    found = conjugator_for(P, relator, diff)
    if found is None:
        raise ValueError(f"relator {relator} does not witness this equation")
    sign, g = found
    return Proof(lhs, rhs, (Entry(relator, sign, g),))


def context(p: Proof, left: Sequence[int] = (), right: Sequence[int] = ()) -> Proof:
    left = tuple(left)
    lhs = reduce_codes(left + p.lhs + tuple(right))
    rhs = reduce_codes(left + p.rhs + tuple(right))
    if not left:
        return Proof(lhs, rhs, p.entries)
    return Proof(lhs, rhs, tuple(Entry(e.relator, e.sign, reduce_codes(left + e.conjugator))
                                 for e in p.entries))


def symm(p: Proof) -> Proof:
    return Proof(p.rhs, p.lhs, tuple(Entry(e.relator, -e.sign, e.conjugator)
                                     for e in reversed(p.entries)))


def trans(*proofs: Proof) -> Proof:
    lhs, rhs = proofs[0].lhs, proofs[0].rhs
    entries = list(proofs[0].entries)
    for p in proofs[1:]:
        if p.lhs != rhs:
            raise ValueError("proofs do not chain")
        rhs = p.rhs
        entries.extend(p.entries)
    return Proof(lhs, rhs, tuple(entries))


def inverse(p: Proof) -> Proof:
    """From ``U = V`` conclude ``U⁻¹ = V⁻¹``."""
    u_inv = invert_codes(p.lhs)
    return Proof(u_inv, invert_codes(p.rhs),
                 tuple(Entry(e.relator, -e.sign, reduce_codes(u_inv + e.conjugator))
                       for e in reversed(p.entries)))


def product(p: Proof, q: Proof) -> Proof:
    """From ``U1 = V1`` and ``U2 = V2`` conclude ``U1 U2 = V1 V2``."""
    return trans(context(q, left=p.lhs), context(p, right=q.rhs))


def product_all(proofs: Sequence[Proof]) -> Proof:
    """Letterwise product: ``∏ Ui = ∏ Vi`` built right to left so each
    proof is conjugated once by the already-rewritten prefix."""
    if not proofs:
        return refl(())
    # prove  U1..Un = V1..Vn  as  U1..Un -> U1..U(n-1) Vn -> ... -> V1..Vn
    prefixes: list[Codes] = [()]
    for p in proofs:
        prefixes.append(reduce_codes(prefixes[-1] + p.lhs))
    lhs = prefixes[-1]
    entries: list[Entry] = []
    suffix: Codes = ()
    for i in range(len(proofs) - 1, -1, -1):
        p = proofs[i]
        left = prefixes[i]
        for e in p.entries:
            entries.append(Entry(e.relator, e.sign, reduce_codes(left + e.conjugator)))
        suffix = p.rhs + suffix
    return Proof(lhs, reduce_codes(suffix), tuple(entries))


# -- text format -----------------------------------------------------------

def format_certificate(P: GroupPresentation, cert: TrivialityCertificate, target: Word) -> str:
    lines = [f"target {format_word(target, P.generators)}"]
    lines.extend(f"conj {format_word(Word(e.conjugator), P.generators)} rel {e.relator} sign {e.sign:+d}"
                 for e in cert.entries)
    return "\n".join(lines) + "\n"


def parse_certificate(P: GroupPresentation, text: str) -> tuple[TrivialityCertificate, Word]:
    target = None
    entries = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        try:
            if line.startswith("target "):
                target = parse_word(line[len("target "):], P.generators)
            elif line.startswith("conj "):
                body = line[len("conj "):]
                conj_text, sep, tail = body.rpartition(" rel ")
                parts = tail.split()
                if not sep or len(parts) != 3 or parts[1] != "sign" or parts[2] not in ("+1", "-1"):
                    raise PresentationError("expected 'conj <word> rel <index> sign <+1|-1>'")
                u = parse_word(conj_text, P.generators)
                entries.append(Entry(int(parts[0]), int(parts[2]), u.codes))
            else:
                raise PresentationError(f"unrecognized line {line!r}")
        except (PresentationError, ValueError) as exc:
            raise PresentationError(f"line {lineno}: {exc}") from None
    if target is None:
        raise PresentationError("certificate needs a 'target' line")
    return TrivialityCertificate(tuple(entries)), target


__all__ = [
    "Entry", "TrivialityCertificate", "Proof", "verify_certificate", "certificate_product",
    "refl", "by_relator", "context", "symm", "trans", "inverse", "product", "product_all",
    "format_certificate", "parse_certificate", "cyclic_core", "conjugator_for", "EMPTY",
]

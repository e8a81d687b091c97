"""Positive (semi-)decision procedures.

Every engine spends a step :class:`Budget` through a :class:`Meter` and
returns either a checked answer or ``None`` for "unknown within budget".
Work is dovetailed in rounds: in round ``k`` each live strategy gets an
effort of ``base * 2**k`` steps, visiting strategies in a fixed order.  The
schedule does not depend on the total budget, so a larger budget replays the
same prefix and can only add answers.

Step accounting: one coset definition, one enumerated trivial word, or one
candidate-obligation check costs one step.
"""

from __future__ import annotations

import itertools
import logging
import time
from dataclasses import dataclass
from typing import Iterator

from .abelian import abelian_word_problem
from .certificates import (Entry, TrivialityCertificate, conjugator_for, verify_certificate)
from .core import EMPTY, GroupPresentation, Homomorphism, Word, apply_hom, invert_codes, reduce_codes
from .cosets import MAX_TABLE_CELLS, CosetTable, coset_enumerate

log = logging.getLogger(__name__)

DEFAULT_STEPS = 1_000_000


@dataclass(frozen=True)
class Budget:
    steps: int = DEFAULT_STEPS
    seconds: float | None = None

    def __post_init__(self):
        if self.steps < 0:
            raise ValueError("budget steps must be nonnegative")


def as_budget(budget: Budget | int | None) -> Budget:
    if budget is None:
        return Budget()
    if isinstance(budget, Budget):
        return budget
    return Budget(int(budget))


class OutOfBudget(Exception):
    pass


class Meter:
    def __init__(self, budget: Budget | int | None):
        self.budget = as_budget(budget)
        self.used = 0
        self.deadline = (time.monotonic() + self.budget.seconds) if self.budget.seconds else None

    def charge(self, n: int = 1) -> None:
        if self.used + n > self.budget.steps:
            raise OutOfBudget
        if self.deadline is not None and time.monotonic() > self.deadline:
            raise OutOfBudget
        self.used += n

    def remaining(self) -> int:
        return self.budget.steps - self.used


# -- trivial word enumeration ----------------------------------------------

def reduced_words(ngens: int, length: int) -> Iterator[tuple[int, ...]]:
    """Freely reduced words of a given length, in shortlex order with
    letters ordered ``x0 < x0⁻¹ < x1 < ...``."""
    letters = [s * (g + 1) for g in range(ngens) for s in (1, -1)]

    def rec(prefix, n):
        if n == 0:
            yield prefix
            return
        for c in letters:
            if prefix and prefix[-1] == -c:
                continue
            yield from rec(prefix + (c,), n - 1)

    yield from rec((), length)


def _entries_of_size(P: GroupPresentation, m: int) -> list[Entry]:
    return [Entry(ri, sign, conj)
            for conj in reduced_words(P.ngens, m - 1)
            for ri in range(len(P.relators))
            for sign in (1, -1)]


def _certificates(P: GroupPresentation) -> Iterator[tuple[Entry, ...]]:
    yield ()
    if not P.relators:
        return
    cache: dict[int, list[Entry]] = {}

    def of_size(m):
        if m not in cache:
            cache[m] = _entries_of_size(P, m)
        return cache[m]

    def seqs(s):
        for m in range(1, s + 1):
            for e in of_size(m):
                if m == s:
                    yield (e,)
                else:
                    for rest in seqs(s - m):
                        yield (e,) + rest

    for s in itertools.count(1):
        yield from seqs(s)


def enumerate_trivial_words(P: GroupPresentation, budget: Budget | int | None = None
                            ) -> Iterator[tuple[Word, TrivialityCertificate]]:
    """Products of conjugates of relators, by certificate size then order of
    entries.  Each step of the budget emits one pair."""
    meter = budget if isinstance(budget, Meter) else Meter(budget)
    rels = [r.codes for r in P.relators]
    for entries in _certificates(P):
        try:
            meter.charge()
        except OutOfBudget:
            return
        out: list[int] = []
        for e in entries:
            r = rels[e.relator] if e.sign > 0 else invert_codes(rels[e.relator])
            out.extend(e.conjugator + r + invert_codes(e.conjugator))
        yield Word(reduce_codes(out)), TrivialityCertificate(entries)


# -- strategies --------------------------------------------------------------

class _CosetStrategy:
    """Restarted HLT enumeration with a growing definition limit."""

    def __init__(self, P: GroupPresentation, name: str):
        self.P = P
        self.name = name
        self.table: CosetTable | None = None
        self.done = False

    def advance(self, meter: Meter, effort: int) -> CosetTable | None:
        cap = MAX_TABLE_CELLS // max(1, 2 * self.P.ngens)
        limit = min(effort, meter.remaining(), cap)
        if limit <= 0:
            raise OutOfBudget
        ct = coset_enumerate(self.P, (), limit)
        meter.charge(ct.definitions if ct is not None else limit)
        if ct is not None:
            self.table = ct
            self.done = True
        elif limit == cap:
            self.done = True            # a larger limit cannot allocate more rows
        return ct


class _WordSearch:
    """Scans the trivial-word enumeration for certificates of target words."""

    def __init__(self, P: GroupPresentation, targets: dict, name: str):
        self.P = P
        self.name = name
        self.targets = {reduce_codes(w.codes): key for key, w in targets.items()}
        self.found: dict = {}
        self.it = None
        self.done = not self.targets

    def advance(self, meter: Meter, effort: int) -> bool:
        if self.it is None:
            self.it = iter(_certificates(self.P))
        rels = [r.codes for r in self.P.relators]
        for _ in range(effort):
            meter.charge()
            try:
                entries = next(self.it)
            except StopIteration:
                self.done = True
                return False
            out: list[int] = []
            for e in entries:
                r = rels[e.relator] if e.sign > 0 else invert_codes(rels[e.relator])
                out.extend(e.conjugator + r + invert_codes(e.conjugator))
            key = self.targets.get(reduce_codes(out))
            if key is not None and key not in self.found:
                self.found[key] = TrivialityCertificate(entries)
                if len(self.found) == len(self.targets):
                    self.done = True
                    return True
        return False


def _rounds(meter: Meter, base: int) -> Iterator[int]:
    for k in itertools.count():
        if meter.remaining() <= 0:
            return
        yield base << k


# -- triviality --------------------------------------------------------------

@dataclass(frozen=True)
class TrivialProof:
    """A closed one-coset table, or certificates for every generator (or both)."""

    presentation: GroupPresentation
    table: CosetTable | None
    certificates: tuple[TrivialityCertificate, ...] | None
    strategy: str

    def verify(self) -> bool:
        ok = False
        if self.table is not None:
            ok = self.table.index == 1 and self.table.is_consistent()
        if self.certificates is not None:
            ok = all(verify_certificate(self.presentation, c, Word.gen(i))
                     for i, c in enumerate(self.certificates)) and len(self.certificates) == self.presentation.ngens
        return ok


def _generator_certs(table: CosetTable) -> tuple[TrivialityCertificate, ...] | None:
    cer = table.certifier()
    if cer is None:
        return None
    certs = []
    for i in range(table.presentation.ngens):
        c = cer.certify(Word.gen(i))
        if c is None:
            return None
        certs.append(c)
    return tuple(certs)


def triviality_semi(P: GroupPresentation, budget: Budget | int | None = None, base: int = 4096,
                    meter: Meter | None = None) -> TrivialProof | None:
    """Dovetails coset enumeration against a per-generator certificate search."""
    meter = meter or Meter(budget)
    if P.ngens == 0:
        return TrivialProof(P, coset_enumerate(P), (), "empty")
    cosets = _CosetStrategy(P, "coset-enumeration")
    words = _WordSearch(P, {i: Word.gen(i) for i in range(P.ngens)}, "certificate-search")
    try:
        for effort in _rounds(meter, base):
            if not cosets.done:
                ct = cosets.advance(meter, effort)
                if ct is not None:
                    if ct.index != 1:
                        log.info("triviality_semi: table closed with %d cosets; group is nontrivial", ct.index)
                        return None
                    return TrivialProof(P, ct, _generator_certs(ct), cosets.name)
            if not words.done:
                if words.advance(meter, effort):
                    certs = tuple(words.found[i] for i in range(P.ngens))
                    return TrivialProof(P, None, certs, words.name)
            if cosets.done and words.done:
                return None
    except OutOfBudget:
        pass
    return None


# -- word problem in simple groups ------------------------------------------

@dataclass(frozen=True)
class WPResult:
    verdict: str                    # "trivial" | "nontrivial" | "unknown"
    presentation: GroupPresentation | None = None
    certificates: tuple[TrivialityCertificate, ...] = ()
    strategy: str = ""

    def verify(self, word: Word) -> bool:
        if self.verdict == "trivial":
            return verify_certificate(self.presentation, self.certificates[0], word)
        if self.verdict == "nontrivial":
            return len(self.certificates) == self.presentation.ngens and all(
                verify_certificate(self.presentation, c, Word.gen(i)) for i, c in enumerate(self.certificates))
        return False


UNKNOWN = WPResult("unknown")


def simple_wp(P: GroupPresentation, w: Word, budget: Budget | int | None = None,
              base: int = 4096) -> WPResult:
    """Word problem for a presentation of a nontrivial simple group.

    The caller vouches for simplicity.  Slice order per round: coset table of
    P, coset table of P + w, trivial words of P, trivial words of P + w.
    """
    P.check_word(w)
    meter = Meter(budget)
    Pw = P.with_relators([w], name=f"{P.name}+w")
    target = reduce_codes(w.codes)
    if not target:
        return WPResult("trivial", P, (TrivialityCertificate(()),), "free-reduction")
    for ri in range(len(P.relators)):
        one = conjugator_for(P, ri, target)
        if one is not None:
            sign, g = one
            return WPResult("trivial", P, (TrivialityCertificate((Entry(ri, sign, g),)),), "relator")
    side_a = _CosetStrategy(P, "coset-table")
    side_b = _CosetStrategy(Pw, "coset-table+w")
    search_a = _WordSearch(P, {0: w}, "trivial-words")
    search_b = _WordSearch(Pw, {i: Word.gen(i) for i in range(P.ngens)}, "trivial-words+w")
    try:
        for effort in _rounds(meter, base):
            if not side_a.done:
                ct = side_a.advance(meter, effort)
                if ct is not None:
                    cer = ct.certifier()
                    if ct.trace(w) != 0:
                        search_a.done = True          # w is certainly nontrivial
                    elif cer is not None:
                        return WPResult("trivial", P, (cer.certify(w),), side_a.name)
            if not side_b.done:
                ct = side_b.advance(meter, effort)
                if ct is not None and ct.index == 1:
                    certs = _generator_certs(ct)
                    if certs is not None:
                        return WPResult("nontrivial", Pw, certs, side_b.name)
            if not search_a.done and search_a.advance(meter, effort):
                return WPResult("trivial", P, (search_a.found[0],), search_a.name)
            if not search_b.done and search_b.advance(meter, effort):
                certs = tuple(search_b.found[i] for i in range(P.ngens))
                return WPResult("nontrivial", Pw, certs, search_b.name)
            if side_a.done and side_b.done and search_a.done and search_b.done:
                break
    except OutOfBudget:
        pass
    return UNKNOWN


# -- isomorphism search -----------------------------------------------------

class _Prover:
    """Certificates for words of one presentation, with cached resources."""

    def __init__(self, P: GroupPresentation):
        self.P = P
        self.cosets = _CosetStrategy(P, "coset-table")
        self.known: dict[tuple[int, ...], TrivialityCertificate] = {}
        self.search_it = None
        self.search_seen = 0

    def grow(self, meter: Meter, effort: int) -> None:
        if not self.cosets.done:
            self.cosets.advance(meter, effort)
        if self.P.relators:
            if self.search_it is None:
                self.search_it = iter(_certificates(self.P))
            rels = [r.codes for r in self.P.relators]
            for _ in range(effort):
                meter.charge()
                try:
                    entries = next(self.search_it)
                except StopIteration:
                    break
                out: list[int] = []
                for e in entries:
                    r = rels[e.relator] if e.sign > 0 else invert_codes(rels[e.relator])
                    out.extend(e.conjugator + r + invert_codes(e.conjugator))
                self.known.setdefault(reduce_codes(out), TrivialityCertificate(entries))

    def prove(self, w: Word) -> TrivialityCertificate | bool:
        """Certificate, ``False`` if ``w`` is provably nontrivial, ``True`` if undecided."""
        codes = reduce_codes(w.codes)
        if not codes:
            return TrivialityCertificate(())
        if not abelian_word_problem(self.P, Word(codes)):
            return False
        for ri in range(len(self.P.relators)):
            hit = conjugator_for(self.P, ri, codes)
            if hit is not None:
                return TrivialityCertificate((Entry(ri, hit[0], hit[1]),))
        if codes in self.known:
            return self.known[codes]
        ct = self.cosets.table
        if ct is not None:
            if ct.trace(Word(codes)) != 0:
                return False
            cer = ct.certifier()
            if cer is not None:
                return cer.certify(Word(codes))
        return True


def prove_trivial_word(P: GroupPresentation, w: Word, budget: Budget | int | None = None,
                       base: int = 256) -> TrivialityCertificate | None:
    """Certificate that ``w`` is trivial in ``P``.

    Tries free reduction and single relator conjugates, then alternates
    growing a coset table (certified on closure) with the trivial-word
    enumeration.  Gives up early when ``w`` is provably nontrivial.
    """
    P.check_word(w)
    meter = Meter(budget)
    pr = _Prover(P)
    try:
        for effort in _rounds(meter, base):
            got = pr.prove(w)
            if got is False:
                return None
            if got is not True:
                return got
            pr.grow(meter, effort)
    except OutOfBudget:
        pass
    return None


@dataclass(frozen=True)
class IsoWitness:
    forward: Homomorphism
    backward: Homomorphism
    forward_relators: tuple[TrivialityCertificate, ...]
    backward_relators: tuple[TrivialityCertificate, ...]
    back_forth: tuple[TrivialityCertificate, ...]     # x⁻¹ g(f(x)) in P
    forth_back: tuple[TrivialityCertificate, ...]     # y⁻¹ f(g(y)) in Q

    def verify(self, P: GroupPresentation, Q: GroupPresentation) -> bool:
        f, g = self.forward, self.backward
        checks = []
        checks += [(Q, c, apply_hom(f, r)) for c, r in zip(self.forward_relators, P.relators)]
        checks += [(P, c, apply_hom(g, r)) for c, r in zip(self.backward_relators, Q.relators)]
        checks += [(P, c, Word.gen(i).inverse() * apply_hom(g, apply_hom(f, Word.gen(i))))
                   for i, c in enumerate(self.back_forth)]
        checks += [(Q, c, Word.gen(i).inverse() * apply_hom(f, apply_hom(g, Word.gen(i))))
                   for i, c in enumerate(self.forth_back)]
        counts_ok = (len(self.forward_relators) == len(P.relators) and len(self.backward_relators) == len(Q.relators)
                     and len(self.back_forth) == P.ngens and len(self.forth_back) == Q.ngens)
        return counts_ok and all(verify_certificate(G, c, w) for G, c, w in checks)


def _maps_of_total_length(nsrc: int, ntgt: int, total: int) -> Iterator[tuple[tuple[int, ...], ...]]:
    """Tuples of ``nsrc`` reduced words over ``ntgt`` generators, lengths summing to ``total``."""
    if nsrc == 0:
        if total == 0:
            yield ()
        return
    for first in range(total + 1):
        for w in reduced_words(ntgt, first):
            for rest in _maps_of_total_length(nsrc - 1, ntgt, total - first):
                yield (w,) + rest


def _candidate_pairs(P: GroupPresentation, Q: GroupPresentation):
    """Index-preserving map first (when ranks agree), then all pairs by total image length."""
    if P.ngens == Q.ngens:
        ident = tuple((i + 1,) for i in range(P.ngens))
        yield ident, ident
    for total in itertools.count():
        for split in range(total + 1):
            for f in _maps_of_total_length(P.ngens, Q.ngens, split):
                for g in _maps_of_total_length(Q.ngens, P.ngens, total - split):
                    yield f, g


def _obligations(P, Q, f: Homomorphism, g: Homomorphism):
    for r in P.relators:
        yield "Q", apply_hom(f, r)
    for r in Q.relators:
        yield "P", apply_hom(g, r)
    for i in range(P.ngens):
        yield "P", Word(reduce_codes(invert_codes((i + 1,)) + apply_hom(g, apply_hom(f, Word.gen(i))).codes))
    for i in range(Q.ngens):
        yield "Q", Word(reduce_codes(invert_codes((i + 1,)) + apply_hom(f, apply_hom(g, Word.gen(i))).codes))


def iso_search(P: GroupPresentation, Q: GroupPresentation, budget: Budget | int | None = None,
               base: int = 256) -> IsoWitness | None:
    """Search generator maps both ways whose relator images and round trips
    are all certified trivial.  Round ``k`` admits the first ``base * 2**k``
    candidates and grows each prover by the same effort."""
    meter = Meter(budget)
    provers = {"P": _Prover(P), "Q": _Prover(Q)}
    cands: list = []
    dead: set[int] = set()
    source = _candidate_pairs(P, Q)
    try:
        for effort in _rounds(meter, base):
            while len(cands) < effort:
                cands.append(next(source))
            for k, (fi, gi) in enumerate(cands):
                if k in dead:
                    continue
                meter.charge()
                f = Homomorphism(tuple(Word(w) for w in fi))
                g = Homomorphism(tuple(Word(w) for w in gi))
                certs = []
                for side, w in _obligations(P, Q, f, g):
                    res = provers[side].prove(w)
                    if res is False:
                        dead.add(k)
                        break
                    if res is True:
                        break
                    certs.append(res)
                else:
                    a, b = len(P.relators), len(Q.relators)
                    wit = IsoWitness(f, g, tuple(certs[:a]), tuple(certs[a:a + b]),
                                     tuple(certs[a + b:a + b + P.ngens]), tuple(certs[a + b + P.ngens:]))
                    if wit.verify(P, Q):
                        return wit
                    dead.add(k)
            for pr in provers.values():
                pr.grow(meter, effort)
    except OutOfBudget:
        pass
    return None


# -- normal generators --------------------------------------------------------

def words_by_length(ngens: int) -> Iterator[Word]:
    for n in itertools.count():
        for w in reduced_words(ngens, n):
            yield Word(w)
        if ngens == 0:
            return


@dataclass(frozen=True)
class NormalGenerator:
    word: Word
    proof: TrivialProof


def normal_generator_search(P: GroupPresentation, budget: Budget | int | None = None,
                            base: int = 256) -> NormalGenerator | None:
    """First candidate ``w`` (by length, then order) with ``P + w`` proven
    trivial.  Round ``k`` admits ``k + 1`` candidates, each given a
    triviality search of effort ``base * 2**k``."""
    meter = Meter(budget)
    source = words_by_length(P.ngens)
    cands: list[Word] = []
    try:
        for k, effort in enumerate(_rounds(meter, base)):
            nxt = next(source, None)
            if nxt is not None:
                cands.append(nxt)
            for w in cands:
                Pw = P.with_relators([w], name=f"{P.name}+w")
                sub = Meter(Budget(min(effort, meter.remaining())))
                proof = triviality_semi(Pw, meter=sub, base=max(1, effort // 4))
                meter.charge(sub.used)
                if proof is not None:
                    return NormalGenerator(w, proof)
    except OutOfBudget:
        pass
    return None


def abelianization_pipeline(P: GroupPresentation) -> Word | None:
    """First generator that is nontrivial in the abelianization, if any."""
    for i in range(P.ngens):
        if not abelian_word_problem(P, Word.gen(i)):
            return Word.gen(i)
    return None


__all__ = [
    "Budget", "Meter", "TrivialProof", "WPResult", "IsoWitness", "NormalGenerator",
    "enumerate_trivial_words", "triviality_semi", "simple_wp", "iso_search",
    "normal_generator_search", "abelianization_pipeline", "prove_trivial_word", "reduced_words", "EMPTY",
]

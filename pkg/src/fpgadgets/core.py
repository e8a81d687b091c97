"""Words, presentations and the basic constructors.

A letter is stored as a signed code ``(index + 1) * sign`` so that a word is
just a tuple of nonzero ints and inversion is ``-code``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from . import kernels


class PresentationError(ValueError):
    """Malformed presentation, word, or file contents."""


class GeneratorId(NamedTuple):
    index: int
    name: str


def letter(index: int, sign: int = 1) -> int:
    if sign not in (1, -1):
        raise ValueError(f"sign must be +1 or -1, got {sign}")
    return (index + 1) * sign


def invert_codes(codes: Sequence[int]) -> tuple[int, ...]:
    return tuple(-c for c in reversed(codes))


def reduce_codes(codes: Sequence[int]) -> tuple[int, ...]:
    out: list[int] = []
    for c in codes:
        if out and out[-1] == -c:
            out.pop()
        else:
            out.append(c)
    return tuple(out)


def reduce_codes_array(codes: np.ndarray) -> np.ndarray:
    """Free reduction of an int64 code array via the compiled kernel."""
    return kernels.free_reduce_codes(np.ascontiguousarray(codes, dtype=np.int64))


@dataclass(frozen=True)
class Word:
    """A word over ``X ∪ X⁻¹``.

    ``raw_length`` counts symbols before any free reduction and travels with
    the word through :func:`free_reduce`; equality ignores it.
    """

    codes: tuple[int, ...] = ()
    raw_length: int = field(default=-1, compare=False)

    def __post_init__(self):
        codes = tuple(int(c) for c in self.codes)
        if any(c == 0 for c in codes):
            raise PresentationError("letter code 0 is not a generator")
        object.__setattr__(self, "codes", codes)
        if self.raw_length < 0:
            object.__setattr__(self, "raw_length", len(codes))

    @classmethod
    def from_letters(cls, letters: Iterable[tuple[int, int]]) -> "Word":
        return cls(tuple(letter(i, s) for i, s in letters))

    @classmethod
    def gen(cls, index: int, power: int = 1) -> "Word":
        c = index + 1 if power >= 0 else -(index + 1)
        return cls((c,) * abs(power))

    @property
    def letters(self) -> tuple[tuple[int, int], ...]:
        return tuple((abs(c) - 1, 1 if c > 0 else -1) for c in self.codes)

    def __len__(self):
        return len(self.codes)

    def __iter__(self):
        return iter(self.codes)

    def __mul__(self, other: "Word") -> "Word":
        return Word(self.codes + other.codes)

    def __pow__(self, n: int) -> "Word":
        base = self if n >= 0 else self.inverse()
        return Word(base.codes * abs(n))

    def inverse(self) -> "Word":
        return Word(invert_codes(self.codes))

    def is_positive(self) -> bool:
        return all(c > 0 for c in self.codes)

    def max_generator(self) -> int:
        return max((abs(c) - 1 for c in self.codes), default=-1)

    def exponent_sums(self, ngens: int) -> list[int]:
        sums = [0] * ngens
        for c in self.codes:
            sums[abs(c) - 1] += 1 if c > 0 else -1
        return sums

    def shifted(self, offset: int) -> "Word":
        return Word(tuple(c + offset if c > 0 else c - offset for c in self.codes))


EMPTY = Word()


def free_reduce(w: Word) -> Word:
    return Word(reduce_codes(w.codes), raw_length=w.raw_length)


def commutator(u: Word, v: Word) -> Word:
    """``[u, v] = u⁻¹ v⁻¹ u v`` without reduction."""
    return u.inverse() * v.inverse() * u * v


_TOKEN = re.compile(r"[A-Za-z_][A-Za-z0-9_']*\Z")


def check_token(name: str) -> str:
    if not _TOKEN.match(name):
        raise PresentationError(f"invalid generator name {name!r}")
    return name


def fresh_name(base: str, taken: Iterable[str]) -> str:
    taken = set(taken)
    name = base
    while name in taken:
        name += "'"
    return name


@dataclass(frozen=True)
class GroupPresentation:
    generators: tuple[str, ...]
    relators: tuple[Word, ...] = ()
    name: str = "G"

    def __post_init__(self):
        gens = tuple(self.generators)
        rels = tuple(self.relators)
        for g in gens:
            check_token(g)
        if len(set(gens)) != len(gens):
            raise PresentationError(f"duplicate generator names in {gens}")
        for r in rels:
            if r.max_generator() >= len(gens):
                raise PresentationError("relator references an out-of-range generator")
        object.__setattr__(self, "generators", gens)
        object.__setattr__(self, "relators", rels)

    @property
    def ngens(self) -> int:
        return len(self.generators)

    def generator_ids(self) -> tuple[GeneratorId, ...]:
        return tuple(GeneratorId(i, g) for i, g in enumerate(self.generators))

    def index(self, name: str) -> int:
        try:
            return self.generators.index(name)
        except ValueError:
            raise PresentationError(f"unknown generator {name!r}") from None

    def gen(self, name: str, power: int = 1) -> Word:
        return Word.gen(self.index(name), power)

    def with_relators(self, extra: Iterable[Word], name: str | None = None) -> "GroupPresentation":
        return GroupPresentation(self.generators, self.relators + tuple(extra), name or self.name)

    def check_word(self, w: Word) -> Word:
        if w.max_generator() >= self.ngens:
            raise PresentationError("word references an out-of-range generator")
        return w

    def parse_word(self, text: str) -> Word:
        return parse_word(text, self.generators)

    def format_word(self, w: Word) -> str:
        return format_word(w, self.generators)


@dataclass(frozen=True)
class SemigroupPresentation:
    """Positive presentation whose letters split into s-letters and q-letters.

    Generators are ordered s-letters first; ``n_s`` of them.
    """

    generators: tuple[str, ...]
    n_s: int
    relations: tuple[tuple[tuple[int, ...], tuple[int, ...]], ...]
    name: str = "S"

    def __post_init__(self):
        gens = tuple(self.generators)
        for g in gens:
            check_token(g)
        if len(set(gens)) != len(gens):
            raise PresentationError(f"duplicate generator names in {gens}")
        rels = tuple((tuple(l), tuple(r)) for l, r in self.relations)
        for l, r in rels:
            for side in (l, r):
                if any(not 0 <= x < len(gens) for x in side):
                    raise PresentationError("relation references an out-of-range letter")
        object.__setattr__(self, "generators", gens)
        object.__setattr__(self, "relations", rels)

    def is_q(self, letter_index: int) -> bool:
        return letter_index >= self.n_s

    @property
    def s_letters(self) -> tuple[str, ...]:
        return self.generators[: self.n_s]

    @property
    def q_letters(self) -> tuple[str, ...]:
        return self.generators[self.n_s:]

    def split_special(self, word: Sequence[int]) -> tuple[tuple[int, ...], int, tuple[int, ...]]:
        """Return ``(F, q, G)`` for a special word ``F q G``; raise otherwise."""
        qs = [k for k, x in enumerate(word) if self.is_q(x)]
        if len(qs) != 1:
            raise PresentationError("word is not special: needs exactly one q-letter")
        k = qs[0]
        return tuple(word[:k]), word[k], tuple(word[k + 1:])

    def is_special(self) -> bool:
        try:
            for l, r in self.relations:
                self.split_special(l)
                self.split_special(r)
        except PresentationError:
            return False
        return True

    def format_word(self, word: Sequence[int]) -> str:
        return " ".join(self.generators[x] for x in word) if word else "1"

    def parse_word(self, text: str) -> tuple[int, ...]:
        w = parse_word(text, self.generators)
        if not w.is_positive():
            raise PresentationError(f"semigroup word must be positive: {text!r}")
        return tuple(c - 1 for c in w.codes)


@dataclass(frozen=True)
class Homomorphism:
    """Map from source generators to words over a target alphabet."""

    images: tuple[Word, ...]

    def __post_init__(self):
        object.__setattr__(self, "images", tuple(self.images))

    @classmethod
    def identity(cls, ngens: int) -> "Homomorphism":
        return cls(tuple(Word.gen(i) for i in range(ngens)))

    def __call__(self, w: Word) -> Word:
        return apply_hom(self, w)


def apply_hom(h: Homomorphism, w: Word) -> Word:
    out: list[int] = []
    n = len(h.images)
    for c in w.codes:
        g = abs(c) - 1
        if g >= n:
            raise PresentationError(f"generator {g} outside homomorphism domain")
        out.extend(h.images[g].codes if c > 0 else invert_codes(h.images[g].codes))
    return Word(reduce_codes(out))


def free_product(P: GroupPresentation, Q: GroupPresentation, name: str | None = None) -> GroupPresentation:
    names = list(P.generators)
    for g in Q.generators:
        names.append(fresh_name(g, names))
    shift = P.ngens
    rels = P.relators + tuple(r.shifted(shift) for r in Q.relators)
    return GroupPresentation(tuple(names), rels, name or f"{P.name}*{Q.name}")


def direct_product_with_cyclic(P: GroupPresentation, p: int, name: str | None = None) -> GroupPresentation:
    if p < 2:
        raise PresentationError(f"cyclic factor order must be >= 2, got {p}")
    z_name = fresh_name("z", P.generators)
    z = Word.gen(P.ngens)
    rels = list(P.relators)
    rels.append(z ** p)
    rels.extend(commutator(Word.gen(i), z) for i in range(P.ngens))
    return GroupPresentation(P.generators + (z_name,), tuple(rels), name or f"{P.name}xC{p}")


def abelianize(P: GroupPresentation) -> GroupPresentation:
    n = P.ngens
    comms = [commutator(Word.gen(i), Word.gen(j)) for i in range(n) for j in range(i + 1, n)]
    return P.with_relators(comms, name=f"{P.name}^ab")


# -- text format -----------------------------------------------------------

_TERM = re.compile(r"([A-Za-z_][A-Za-z0-9_']*)(?:\^(-?\d+))?\Z")


def parse_word(text: str, generators: Sequence[str]) -> Word:
    lookup = {g: i for i, g in enumerate(generators)}
    tokens = text.split()
    if tokens == ["1"]:
        return EMPTY
    codes: list[int] = []
    for tok in tokens:
        m = _TERM.match(tok)
        if not m:
            raise PresentationError(f"bad term {tok!r}")
        name, power = m.group(1), int(m.group(2) or 1)
        if name not in lookup:
            raise PresentationError(f"unknown generator {name!r}")
        c = lookup[name] + 1
        codes.extend([c if power > 0 else -c] * abs(power))
    return Word(tuple(codes))


def format_word(w: Word, generators: Sequence[str]) -> str:
    """Canonical text: maximal runs of one letter become ``g^k``."""
    if not w.codes:
        return "1"
    terms = []
    codes = w.codes
    k = 0
    while k < len(codes):
        c = codes[k]
        j = k
        while j < len(codes) and codes[j] == c:
            j += 1
        run = j - k
        name = generators[abs(c) - 1]
        power = run if c > 0 else -run
        terms.append(name if power == 1 else f"{name}^{power}")
        k = j
    return " ".join(terms)


def format_presentation(P: GroupPresentation) -> str:
    lines = [f"group {P.name}", "gens " + " ".join(P.generators) if P.generators else "gens"]
    lines.extend("rel " + format_word(r, P.generators) for r in P.relators)
    return "\n".join(lines) + "\n"


def parse_presentation(text: str) -> GroupPresentation:
    name = None
    gens: tuple[str, ...] | None = None
    rels: list[Word] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, _, rest = line.partition(" ")
        try:
            if key == "group":
                if name is not None:
                    raise PresentationError("duplicate 'group' line")
                name = rest.strip() or "G"
            elif key == "gens":
                if gens is not None:
                    raise PresentationError("duplicate 'gens' line")
                gens = tuple(check_token(t) for t in rest.split())
            elif key == "rel":
                if gens is None:
                    raise PresentationError("'rel' before 'gens'")
                rels.append(parse_word(rest, gens))
            else:
                raise PresentationError(f"unknown directive {key!r}")
        except PresentationError as exc:
            raise PresentationError(f"line {lineno}: {exc}") from None
    if gens is None:
        raise PresentationError("missing 'gens' line")
    return GroupPresentation(gens, tuple(rels), name or "G")


def format_semigroup(S: SemigroupPresentation) -> str:
    lines = [
        f"semigroup {S.name}",
        "sletters " + " ".join(S.s_letters),
        "qletters " + " ".join(S.q_letters),
    ]
    for l, r in S.relations:
        lines.append(f"rel {S.format_word(l)} = {S.format_word(r)}")
    return "\n".join(lines) + "\n"


def parse_semigroup(text: str) -> SemigroupPresentation:
    name, s_letters, q_letters = "S", None, None
    rels = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, _, rest = line.partition(" ")
        try:
            if key == "semigroup":
                name = rest.strip() or "S"
            elif key == "sletters":
                s_letters = tuple(check_token(t) for t in rest.split())
            elif key == "qletters":
                q_letters = tuple(check_token(t) for t in rest.split())
            elif key == "rel":
                if s_letters is None or q_letters is None:
                    raise PresentationError("'rel' before letter declarations")
                lhs, eq, rhs = rest.partition("=")
                if not eq:
                    raise PresentationError("relation needs '='")
                gens = s_letters + q_letters
                rels.append((_positive(lhs, gens), _positive(rhs, gens)))
            else:
                raise PresentationError(f"unknown directive {key!r}")
        except PresentationError as exc:
            raise PresentationError(f"line {lineno}: {exc}") from None
    if s_letters is None or q_letters is None:
        raise PresentationError("missing letter declarations")
    return SemigroupPresentation(s_letters + q_letters, len(s_letters), tuple(rels), name)


def _positive(text: str, gens: Sequence[str]) -> tuple[int, ...]:
    w = parse_word(text.strip(), gens)
    if not w.is_positive():
        raise PresentationError("semigroup relation sides must be positive")
    return tuple(c - 1 for c in w.codes)

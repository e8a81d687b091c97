"""Gordon's presentation P(w) for the Adian-Rabin theorem.

Adds fresh generators ``a, b, c`` and, written as relators ``LHS·RHS⁻¹``:

    a⁻¹ b a                 = c⁻¹ b⁻¹ c b c
    a⁻² b⁻¹ a b a²          = c⁻² b⁻¹ c b c²
    a⁻³ [w, b] a³           = c⁻³ b c³
    a⁻⁽³⁺ⁱ⁾ x_i b a⁽³⁺ⁱ⁾     = c⁻⁽³⁺ⁱ⁾ b c⁽³⁺ⁱ⁾     (i = 1 .. |X|)

The group is trivial iff ``w = e`` in P; otherwise it is perfect, contains a
copy of P, and is generated by ``b`` and ``c a⁻¹``.
"""

from __future__ import annotations

from .core import EMPTY, GroupPresentation, PresentationError, Word, commutator, fresh_name


def _fixed_relators(n: int, a: Word, b: Word, c: Word) -> tuple[list[Word], list[Word]]:
    """The two leading relators and the per-generator family, for ``n`` old generators."""
    head = [
        a ** -1 * b * a * (c ** -1 * b ** -1 * c * b * c).inverse(),
        a ** -2 * b ** -1 * a * b * a ** 2 * (c ** -2 * b ** -1 * c * b * c ** 2).inverse(),
    ]
    tail = []
    for i in range(1, n + 1):
        x = Word.gen(i - 1)
        tail.append(a ** -(3 + i) * x * b * a ** (3 + i) * (c ** -(3 + i) * b * c ** (3 + i)).inverse())
    return head, tail


def gordon(P: GroupPresentation, w: Word = EMPTY, name: str | None = None) -> GroupPresentation:
    if w.max_generator() >= P.ngens:
        raise PresentationError("word uses a generator outside the presentation")
    n = P.ngens
    names = list(P.generators)
    for base in ("a", "b", "c"):
        names.append(fresh_name(base, names))
    a, b, c = Word.gen(n), Word.gen(n + 1), Word.gen(n + 2)
    head, tail = _fixed_relators(n, a, b, c)
    third = a ** -3 * commutator(w, b) * a ** 3 * (c ** -3 * b * c ** 3).inverse()
    rels = P.relators + tuple(head) + (third,) + tuple(tail)
    return GroupPresentation(tuple(names), rels, name or f"{P.name}(w)")


def gordon_rank2_generators(G: GroupPresentation) -> tuple[Word, Word]:
    """The generating pair ``(b, c a⁻¹)`` of a :func:`gordon` output."""
    n = G.ngens - 3
    if n < 0 or len(G.relators) < n + 3:
        raise PresentationError("not a Gordon presentation: too few generators or relators")
    a, b, c = Word.gen(n), Word.gen(n + 1), Word.gen(n + 2)
    head, tail = _fixed_relators(n, a, b, c)
    k = len(G.relators) - (n + 3)
    got = G.relators[k:]
    if list(got[:2]) != head or list(got[3:]) != tail:
        raise PresentationError("not a Gordon presentation: relator schema mismatch")
    third = got[2].codes
    prefix = (a ** -3).codes
    suffix = (a ** 3 * (c ** -3 * b * c ** 3).inverse()).codes
    if third[:3] != prefix or third[-len(suffix):] != suffix:
        raise PresentationError("not a Gordon presentation: commutator relator mismatch")
    return b, c * a.inverse()

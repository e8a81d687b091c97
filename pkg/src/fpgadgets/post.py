"""Post's semigroup for a quadruple machine, and rewrite derivations over it.

Letters: s-letters ``h, s0..sM`` then q-letters ``q, qhat, q1..qh``.  A
configuration ``[L, qi, R]`` is the word ``h L qi R h``.  Relations, in
emission order:

* write ``(qi, sj) -> (sk, ql)``:  ``qi sj = ql sk``
* right ``(qi, sj) -> ql``:  ``qi sj sb = sj ql sb`` for each symbol ``sb``,
  then ``qi sj h = sj ql s0 h``
* left ``(qi, sj) -> ql``:  ``sb qi sj = ql sb sj`` for each ``sb``, then
  ``h qi sj = h ql s0 sj``
* cleanup:  ``qh sb = qh`` (each ``sb``), ``qh h = qhat h``,
  ``sb qhat = qhat`` (each ``sb``), ``h qhat h = q``

Every side has exactly one q-letter flanked by s-words.
"""

from __future__ import annotations

import hashlib
from collections import deque
from dataclasses import dataclass
from typing import Sequence

from .core import PresentationError, SemigroupPresentation, fresh_name
from .machine import LEFT, RIGHT, WRITE, RunTrace, TuringMachine

LR, RL = "LR", "RL"

# Human-readable schema rows; hashed for ``--version`` provenance output.
POST_SCHEMA = (
    ("write", "qi sj = ql sk", "one per write quadruple"),
    ("right", "qi sj sb = sj ql sb", "one per right quadruple and symbol sb"),
    ("right-edge", "qi sj h = sj ql s0 h", "one per right quadruple; blank materialized at the right end"),
    ("left", "sb qi sj = ql sb sj", "one per left quadruple and symbol sb"),
    ("left-edge", "h qi sj = h ql s0 sj", "one per left quadruple; blank materialized at the left end"),
    ("absorb-right", "qh sb = qh", "one per symbol sb"),
    ("turn", "qh h = qhat h", "single relation"),
    ("absorb-left", "sb qhat = qhat", "one per symbol sb"),
    ("collapse", "h qhat h = q", "single relation"),
)


def schema_checksum(rows) -> str:
    blob = "\n".join("|".join(r) for r in rows).encode()
    return hashlib.sha256(blob).hexdigest()[:16]


@dataclass(frozen=True)
class PostLetters:
    """Letter indices of Γ(T) as used by the encoders."""

    h: int
    symbols: tuple[int, ...]
    q: int
    qhat: int
    states: tuple[int, ...]

    def config_word(self, left, state, right) -> tuple[int, ...]:
        return ((self.h,) + tuple(self.symbols[s] for s in left) + (self.states[state],)
                + tuple(self.symbols[s] for s in right) + (self.h,))

    def start_word(self, tape: Sequence[int]) -> tuple[int, ...]:
        return self.config_word((), 0, tuple(tape) or (0,))


def post_letters(M: TuringMachine) -> PostLetters:
    ns = len(M.alphabet)
    return PostLetters(
        h=0,
        symbols=tuple(range(1, ns + 1)),
        q=ns + 1,
        qhat=ns + 2,
        states=tuple(range(ns + 3, ns + 3 + len(M.states))),
    )


def post_encode(M: TuringMachine) -> SemigroupPresentation:
    names: list[str] = []
    names.append(fresh_name("h", list(M.alphabet) + list(M.states)))
    names.extend(M.alphabet)
    names.append(fresh_name("q", names + list(M.states)))
    names.append(fresh_name("qhat", names + list(M.states)))
    names.extend(M.states)
    L = post_letters(M)
    sym, st, h = L.symbols, L.states, L.h
    blank = sym[0]
    rels = []
    for quad in M.quads:
        qi, sj, ql = st[quad.state], sym[quad.symbol], st[quad.next_state]
        if quad.action == WRITE:
            rels.append(((qi, sj), (ql, sym[quad.write])))
        elif quad.action == RIGHT:
            for sb in sym:
                rels.append(((qi, sj, sb), (sj, ql, sb)))
            rels.append(((qi, sj, h), (sj, ql, blank, h)))
        elif quad.action == LEFT:
            for sb in sym:
                rels.append(((sb, qi, sj), (ql, sb, sj)))
            rels.append(((h, qi, sj), (h, ql, blank, sj)))
    qh = st[M.halt]
    for sb in sym:
        rels.append(((qh, sb), (qh,)))
    rels.append(((qh, h), (L.qhat, h)))
    for sb in sym:
        rels.append(((sb, L.qhat), (L.qhat,)))
    rels.append(((h, L.qhat, h), (L.q,)))
    S = SemigroupPresentation(tuple(names), len(M.alphabet) + 1, tuple(rels), f"Post({M.name})")
    if not S.is_special():
        raise PresentationError("internal error: Post relations not special")
    return S


@dataclass(frozen=True)
class Step:
    relation: int
    direction: str
    offset: int


@dataclass(frozen=True)
class Derivation:
    start: tuple[int, ...]
    end: tuple[int, ...]
    steps: tuple[Step, ...] = ()

    def __len__(self):
        return len(self.steps)


def apply_step(S: SemigroupPresentation, word: tuple[int, ...], st: Step) -> tuple[int, ...] | None:
    """Apply one rewrite; ``None`` if the cited side does not occur at the offset."""
    if not 0 <= st.relation < len(S.relations) or st.direction not in (LR, RL):
        return None
    lhs, rhs = S.relations[st.relation]
    src, dst = (lhs, rhs) if st.direction == LR else (rhs, lhs)
    k = st.offset
    if k < 0 or k + len(src) > len(word) or tuple(word[k:k + len(src)]) != src:
        return None
    return tuple(word[:k]) + dst + tuple(word[k + len(src):])


def replay(S: SemigroupPresentation, d: Derivation) -> list[tuple[int, ...]] | None:
    words = [tuple(d.start)]
    for st in d.steps:
        nxt = apply_step(S, words[-1], st)
        if nxt is None:
            return None
        words.append(nxt)
    return words


def verify_derivation(S: SemigroupPresentation, d: Derivation) -> bool:
    words = replay(S, d)
    return words is not None and words[-1] == tuple(d.end)


def derive_from_trace(M: TuringMachine, trace: RunTrace, S: SemigroupPresentation | None = None) -> Derivation:
    """Compile a halted run into a derivation ``h q1 w h => q``."""
    if not trace.halted:
        raise ValueError("trace did not halt")
    S = S if S is not None else post_encode(M)
    L = post_letters(M)
    index = {rel: k for k, rel in enumerate(S.relations)}
    sym, st, h = L.symbols, L.states, L.h

    def rel(lhs, rhs):
        return index[(tuple(lhs), tuple(rhs))]

    steps = []
    for c, nxt in zip(trace.configs, trace.configs[1:]):
        quad = M.rule(c.state, c.right[0])
        qi, sj, ql = st[quad.state], sym[quad.symbol], st[quad.next_state]
        pos = 1 + len(c.left)
        if quad.action == WRITE:
            steps.append(Step(rel((qi, sj), (ql, sym[quad.write])), LR, pos))
        elif quad.action == RIGHT:
            if len(c.right) > 1:
                sb = sym[c.right[1]]
                steps.append(Step(rel((qi, sj, sb), (sj, ql, sb)), LR, pos))
            else:
                steps.append(Step(rel((qi, sj, h), (sj, ql, sym[0], h)), LR, pos))
        else:
            if c.left:
                sb = sym[c.left[-1]]
                steps.append(Step(rel((sb, qi, sj), (ql, sb, sj)), LR, pos - 1))
            else:
                steps.append(Step(rel((h, qi, sj), (h, ql, sym[0], sj)), LR, 0))
    last = trace.configs[-1]
    qh = st[M.halt]
    pos = 1 + len(last.left)
    for s in last.right:
        steps.append(Step(rel((qh, sym[s]), (qh,)), LR, pos))
    steps.append(Step(rel((qh, h), (L.qhat, h)), LR, pos))
    for k in range(len(last.left) - 1, -1, -1):
        steps.append(Step(rel((sym[last.left[k]], L.qhat), (L.qhat,)), LR, k + 1))
    steps.append(Step(rel((h, L.qhat, h), (L.q,)), LR, 0))
    first = trace.configs[0]
    d = Derivation(L.config_word(first.left, first.state, first.right), (L.q,), tuple(steps))
    if not verify_derivation(S, d):
        raise AssertionError("compiled derivation failed verification")
    return d


def rewrite_search(S: SemigroupPresentation, start: Sequence[int], goal: Sequence[int],
                   budget: int) -> Derivation | None:
    """Breadth-first two-sided rewriting from ``start`` towards ``goal``.

    ``budget`` caps the number of expanded words.  Returns a verified
    derivation, or ``None`` when the budget runs out first.
    """
    start, goal = tuple(start), tuple(goal)
    if start == goal:
        return Derivation(start, goal, ())
    parent: dict[tuple[int, ...], tuple[tuple[int, ...], Step] | None] = {start: None}
    frontier = deque([start])
    expanded = 0
    while frontier and expanded < budget:
        word = frontier.popleft()
        expanded += 1
        for k in range(len(word)):
            for r, (lhs, rhs) in enumerate(S.relations):
                for direction, src, dst in ((LR, lhs, rhs), (RL, rhs, lhs)):
                    if word[k:k + len(src)] != src:
                        continue
                    nxt = word[:k] + dst + word[k + len(src):]
                    if nxt in parent:
                        continue
                    parent[nxt] = (word, Step(r, direction, k))
                    if nxt == goal:
                        return _assemble(S, parent, start, goal)
                    frontier.append(nxt)
    return None


def _assemble(S, parent, start, goal) -> Derivation:
    steps = []
    w = goal
    while parent[w] is not None:
        w, st = parent[w]
        steps.append(st)
    d = Derivation(start, goal, tuple(reversed(steps)))
    if not verify_derivation(S, d):
        raise AssertionError("search produced an unverifiable derivation")
    return d


# -- text format -----------------------------------------------------------

def format_derivation(S: SemigroupPresentation, d: Derivation) -> str:
    lines = [f"start {S.format_word(d.start)}", f"end {S.format_word(d.end)}"]
    lines.extend(f"step {s.relation} {s.direction} {s.offset}" for s in d.steps)
    return "\n".join(lines) + "\n"


def parse_derivation(S: SemigroupPresentation, text: str) -> Derivation:
    start = end = None
    steps = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, _, rest = line.partition(" ")
        try:
            if key == "start":
                start = S.parse_word(rest)
            elif key == "end":
                end = S.parse_word(rest)
            elif key == "step":
                parts = rest.split()
                if len(parts) != 3 or parts[1] not in (LR, RL):
                    raise PresentationError("step needs '<rel-index> LR|RL <offset>'")
                steps.append(Step(int(parts[0]), parts[1], int(parts[2])))
            else:
                raise PresentationError(f"unknown directive {key!r}")
        except (PresentationError, ValueError) as exc:
            raise PresentationError(f"line {lineno}: {exc}") from None
    if start is None or end is None:
        raise PresentationError("derivation needs 'start' and 'end' lines")
    return Derivation(start, end, tuple(steps))

"""Deterministic quadruple Turing machines, run traces, Cantor pairing."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from math import isqrt
from typing import Sequence

import numpy as np

from .core import PresentationError, check_token


class MachineError(ValueError):
    """Invalid machine description."""


class MachineStuck(RuntimeError):
    """No quadruple applies in a non-halting state."""

    def __init__(self, config: "Configuration"):
        super().__init__(f"machine stuck in state {config.state} reading {config.right[0]}")
        self.config = config


class Outcome(enum.Enum):
    HALTED = "halted"
    STUCK = "stuck"
    BUDGET = "budget-exhausted"


WRITE, LEFT, RIGHT = "write", "L", "R"


@dataclass(frozen=True)
class Quad:
    state: int
    symbol: int
    action: str
    write: int | None
    next_state: int


@dataclass(frozen=True)
class TuringMachine:
    """Quadruple machine.  ``alphabet[0]`` is the blank, ``states[0]`` the
    start state and ``states[-1]`` the halt state."""

    alphabet: tuple[str, ...]
    states: tuple[str, ...]
    quads: tuple[Quad, ...]
    name: str = "M"
    _table: dict = field(default=None, init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "alphabet", tuple(self.alphabet))
        object.__setattr__(self, "states", tuple(self.states))
        object.__setattr__(self, "quads", tuple(self.quads))
        self.validate()
        object.__setattr__(self, "_table", {(q.state, q.symbol): q for q in self.quads})

    @property
    def start(self) -> int:
        return 0

    @property
    def halt(self) -> int:
        return len(self.states) - 1

    def validate(self) -> None:
        if len(self.alphabet) < 1:
            raise MachineError("alphabet needs a blank symbol")
        if len(self.states) < 2:
            raise MachineError("need distinct start and halt states")
        for names in (self.alphabet, self.states):
            if len(set(names)) != len(names):
                raise MachineError(f"duplicate names in {names}")
            for n in names:
                try:
                    check_token(n)
                except PresentationError as exc:
                    raise MachineError(str(exc)) from None
        if set(self.alphabet) & set(self.states):
            raise MachineError("state and symbol names must be distinct")
        seen = set()
        ns, nq = len(self.alphabet), len(self.states)
        for q in self.quads:
            if not (0 <= q.state < nq and 0 <= q.next_state < nq and 0 <= q.symbol < ns):
                raise MachineError(f"quadruple out of range: {q}")
            if q.action not in (WRITE, LEFT, RIGHT):
                raise MachineError(f"unknown action {q.action!r}")
            if (q.action == WRITE) != (q.write is not None):
                raise MachineError(f"write symbol mismatch in {q}")
            if q.write is not None and not 0 <= q.write < ns:
                raise MachineError(f"write symbol out of range in {q}")
            if q.state == self.halt:
                raise MachineError("halt state may not have quadruples")
            if (q.state, q.symbol) in seen:
                raise MachineError(f"nondeterministic at ({self.states[q.state]}, {self.alphabet[q.symbol]})")
            seen.add((q.state, q.symbol))

    def rule(self, state: int, symbol: int) -> Quad | None:
        return self._table.get((state, symbol))

    def symbol(self, name: str) -> int:
        try:
            return self.alphabet.index(name)
        except ValueError:
            raise MachineError(f"unknown symbol {name!r}") from None


@dataclass(frozen=True)
class Configuration:
    left: tuple[int, ...]
    state: int
    right: tuple[int, ...]

    def __post_init__(self):
        if not self.right:
            raise MachineError("configuration needs a scanned symbol")


@dataclass(frozen=True)
class RunTrace:
    configs: tuple[Configuration, ...]
    outcome: Outcome

    @property
    def halted(self) -> bool:
        return self.outcome is Outcome.HALTED

    @property
    def steps(self) -> int:
        return len(self.configs) - 1


def step(M: TuringMachine, c: Configuration) -> Configuration | Outcome:
    if c.state == M.halt:
        return Outcome.HALTED
    sym = c.right[0]
    q = M.rule(c.state, sym)
    if q is None:
        return Outcome.STUCK
    blank = 0
    if q.action == WRITE:
        return Configuration(c.left, q.next_state, (q.write,) + c.right[1:])
    if q.action == RIGHT:
        rest = c.right[1:] or (blank,)
        return Configuration(c.left + (sym,), q.next_state, rest)
    if c.left:
        return Configuration(c.left[:-1], q.next_state, (c.left[-1],) + c.right)
    return Configuration((), q.next_state, (blank,) + c.right)


def initial_config(M: TuringMachine, tape: Sequence[int]) -> Configuration:
    tape = tuple(tape)
    if any(not 0 <= s < len(M.alphabet) for s in tape):
        raise MachineError("input uses symbols outside the alphabet")
    return Configuration((), M.start, tape or (0,))


def run(M: TuringMachine, tape: Sequence[int], budget: int) -> RunTrace:
    """Run from ``[ε, start, tape]`` for at most ``budget`` steps.

    Raises :class:`MachineStuck` if no rule applies before halting.
    """
    if budget < 0:
        raise ValueError("budget must be nonnegative")
    c = initial_config(M, tape)
    configs = [c]
    while True:
        if c.state == M.halt:
            return RunTrace(tuple(configs), Outcome.HALTED)
        if len(configs) > budget:
            return RunTrace(tuple(configs), Outcome.BUDGET)
        nxt = step(M, c)
        if nxt is Outcome.STUCK:
            raise MachineStuck(c)
        c = nxt
        configs.append(c)


def phi_input(n: int) -> tuple[int, ...]:
    """Unary encoding of ``n``: the tape ``s1`` repeated ``n + 1`` times."""
    if n < 0:
        raise ValueError("n must be a natural number")
    return (1,) * (n + 1)


# -- Cantor pairing ---------------------------------------------------------

def cantor_pair(x, y):
    """``(x + y)(x + y + 1)/2 + y``; accepts ints or equal-shape integer arrays."""
    if isinstance(x, np.ndarray) or isinstance(y, np.ndarray):
        x, y = np.asarray(x, dtype=np.int64), np.asarray(y, dtype=np.int64)
        if (x < 0).any() or (y < 0).any():
            raise ValueError("pairing is defined on naturals")
        return (x + y) * (x + y + 1) // 2 + y
    if x < 0 or y < 0:
        raise ValueError("pairing is defined on naturals")
    return (x + y) * (x + y + 1) // 2 + y


def cantor_unpair(z):
    if isinstance(z, np.ndarray):
        z = z.astype(np.int64)
        if (z < 0).any():
            raise ValueError("pairing is defined on naturals")
        d = ((np.sqrt(8 * z.astype(np.float64) + 1) - 1) // 2).astype(np.int64)
        # float sqrt can be off by one near perfect squares
        d -= d * (d + 1) // 2 > z
        d += (d + 1) * (d + 2) // 2 <= z
        y = z - d * (d + 1) // 2
        return d - y, y
    if z < 0:
        raise ValueError("pairing is defined on naturals")
    d = (isqrt(8 * z + 1) - 1) // 2
    y = z - d * (d + 1) // 2
    return d - y, y


def cantor_tuple(xs: Sequence[int]) -> int:
    if not xs:
        raise ValueError("empty tuple has no code")
    acc = xs[0]
    if acc < 0:
        raise ValueError("pairing is defined on naturals")
    for x in xs[1:]:
        acc = cantor_pair(acc, x)
    return acc


def cantor_untuple(z: int, n: int) -> tuple[int, ...]:
    if n < 1:
        raise ValueError("arity must be positive")
    out = []
    for _ in range(n - 1):
        z, last = cantor_unpair(z)
        out.append(last)
    out.append(z)
    return tuple(reversed(out))


# -- text format -----------------------------------------------------------

def format_machine(M: TuringMachine) -> str:
    lines = [f"machine {M.name}", "alphabet " + " ".join(M.alphabet), "states " + " ".join(M.states)]
    for q in M.quads:
        head = f"quad {M.states[q.state]} {M.alphabet[q.symbol]}"
        if q.action == WRITE:
            lines.append(f"{head} write {M.alphabet[q.write]} {M.states[q.next_state]}")
        else:
            lines.append(f"{head} {q.action} {M.states[q.next_state]}")
    return "\n".join(lines) + "\n"


def parse_machine(text: str) -> TuringMachine:
    name, alphabet, states = "M", None, None
    quads = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        try:
            key = parts[0]
            if key == "machine":
                name = " ".join(parts[1:]) or "M"
            elif key == "alphabet":
                alphabet = tuple(parts[1:])
            elif key == "states":
                states = tuple(parts[1:])
            elif key == "quad":
                if alphabet is None or states is None:
                    raise MachineError("'quad' before 'alphabet'/'states'")
                quads.append(_parse_quad(parts[1:], alphabet, states))
            else:
                raise MachineError(f"unknown directive {key!r}")
        except MachineError as exc:
            raise MachineError(f"line {lineno}: {exc}") from None
    if alphabet is None or states is None:
        raise MachineError("missing 'alphabet' or 'states' line")
    return TuringMachine(alphabet, states, tuple(quads), name)


def _parse_quad(parts, alphabet, states) -> Quad:
    def st(n):
        if n not in states:
            raise MachineError(f"unknown state {n!r}")
        return states.index(n)

    def sy(n):
        if n not in alphabet:
            raise MachineError(f"unknown symbol {n!r}")
        return alphabet.index(n)

    if len(parts) == 5 and parts[2] == WRITE:
        return Quad(st(parts[0]), sy(parts[1]), WRITE, sy(parts[3]), st(parts[4]))
    if len(parts) == 4 and parts[2] in (LEFT, RIGHT):
        return Quad(st(parts[0]), sy(parts[1]), parts[2], None, st(parts[3]))
    raise MachineError("quad needs '<state> <sym> write <sym> <state>' or '<state> <sym> L|R <state>'")


# -- test zoo --------------------------------------------------------------

_ZOO_TEXT = {
    # halts after one write
    "HALT1": """machine HALT1
alphabet s0 s1
states q1 qh
quad q1 s1 write s1 qh
""",
    # walks right forever
    "LOOP": """machine LOOP
alphabet s0 s1
states q1 qh
quad q1 s1 R q1
quad q1 s0 R q1
""",
    # runs right to the first blank and marks it
    "SCAN": """machine SCAN
alphabet s0 s1
states q1 qh
quad q1 s1 R q1
quad q1 s0 write s1 qh
""",
    # right to the end, back left past the start, halt on the left blank
    "BOUNCE": """machine BOUNCE
alphabet s0 s1
states q1 q2 qh
quad q1 s1 R q1
quad q1 s0 L q2
quad q2 s1 L q2
quad q2 s0 write s0 qh
""",
    # erases its input from the left, halts on the first blank
    "ERASE": """machine ERASE
alphabet s0 s1
states q1 q2 qh
quad q1 s1 write s0 q2
quad q2 s0 R q1
quad q1 s0 write s0 qh
""",
}


def zoo() -> dict[str, TuringMachine]:
    return {k: parse_machine(v) for k, v in _ZOO_TEXT.items()}

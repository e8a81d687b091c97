"""Named presentation families built from machines.

``pi(M, n)`` is trivial exactly when ``M`` halts on ``s1^(n+1)`` and is
perfect either way.  None of these constructors looks at halting behaviour;
they are total on valid machines.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .boone import beta, boone_encode
from .core import GroupPresentation, Word, direct_product_with_cyclic, free_product, format_word
from .gordon import gordon, gordon_rank2_generators
from .machine import TuringMachine, phi_input

FAMILIES = ("Pi", "Psi", "Phi")


@dataclass(frozen=True)
class GadgetDescriptor:
    machine: TuringMachine
    n: int
    family: str
    note: str = ""

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("gadget index must be a natural number")
        if self.family not in FAMILIES:
            raise ValueError(f"family must be one of {FAMILIES}")

    def build(self) -> GroupPresentation:
        return {"Pi": pi, "Psi": psi, "Phi": phi_family}[self.family](self.machine, self.n)


def pi(M: TuringMachine, n: int) -> GroupPresentation:
    B = boone_encode(M)
    return gordon(B.presentation, beta(B, phi_input(n)), name=f"Pi[{M.name},{n}]")


def nth_prime(i: int) -> int:
    """``p_0 = 2, p_1 = 3, ...`` by trial division."""
    if i < 0:
        raise ValueError("prime index must be a natural number")
    count, cand = -1, 1
    while count < i:
        cand += 1
        if all(cand % d for d in range(2, int(cand ** 0.5) + 1)):
            count += 1
    return cand


def _twisted(M: TuringMachine, i: int, modulus: int, tag: str) -> GroupPresentation:
    base = pi(M, i)
    b, _ = gordon_rank2_generators(base)
    prod = direct_product_with_cyclic(base, modulus)
    return gordon(prod, b, name=f"{tag}[{M.name},{i}]")


def psi(M: TuringMachine, i: int) -> GroupPresentation:
    return _twisted(M, i, nth_prime(i), "Psi")


def phi_family(M: TuringMachine, i: int) -> GroupPresentation:
    return _twisted(M, i, 2, "Phi")


def free_product_family(ps: Sequence[GroupPresentation], name: str | None = None) -> GroupPresentation:
    if not ps:
        raise ValueError("free product of an empty family")
    out = ps[0]
    for p in ps[1:]:
        out = free_product(out, p)
    return GroupPresentation(out.generators, out.relators, name or out.name)


@dataclass(frozen=True)
class AdversaryReport:
    k: int
    factors: tuple[GroupPresentation, ...]
    product: GroupPresentation
    factor_ranges: tuple[range, ...]
    sample_word: Word
    untouched: int
    narrative: str


def adversary_demo(k: int, machines: Sequence[TuringMachine], n: int = 0) -> AdversaryReport:
    """Free product of ``k + 1`` Π-gadgets plus a sample short word.

    A word of length at most ``k`` mentions generators of at most ``k``
    factors, so one factor is untouched.
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    if len(machines) != k + 1:
        raise ValueError(f"need exactly k + 1 = {k + 1} machines, got {len(machines)}")
    factors = tuple(pi(M, n) for M in machines)
    prod = free_product_family(factors, name=f"Q[k={k}]")
    ranges, start = [], 0
    for f in factors:
        ranges.append(range(start, start + f.ngens))
        start += f.ngens
    # sample: first generator of each of the first k factors
    sample = Word(tuple(r.start + 1 for r in ranges[:k]))
    used = {abs(c) - 1 for c in sample.codes}
    untouched = next(i for i, r in enumerate(ranges) if not used & set(r))
    lines = [
        f"Free product of {k + 1} gadget presentations Pi[M_j,{n}] (j = 0..{k}).",
        f"Factor j is trivial iff machine M_j halts on s1^{n + 1}; each factor is perfect.",
        f"Suppose some procedure returned a word of length <= {k} that is nontrivial in the product.",
        f"Such a word mentions generators from at most {k} of the {k + 1} factors.",
        f"Sample word: {format_word(sample, prod.generators)}",
        f"Untouched factor for the sample word: {untouched} ({factors[untouched].name}).",
        "A nontrivial word must survive in some factor it touches, so that factor's machine does not halt.",
        "Reading off the touched factors would therefore name a proper subset of the machines",
        "containing a non-halting one, which no procedure can do uniformly.",
    ]
    return AdversaryReport(k, factors, prod, tuple(ranges), sample, untouched, "\n".join(lines) + "\n")

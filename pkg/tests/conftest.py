import logging
import random

import pytest

from fpgadgets.core import GroupPresentation, Word, parse_presentation

log = logging.getLogger("fpgadgets.tests")

A5_TEXT = "group A5\ngens a b\nrel a^2\nrel b^3\nrel a b a b a b a b a b\n"


@pytest.fixture
def rng(request):
    seed = sum(map(ord, request.node.name)) % 100_003
    log.info("seed %d for %s", seed, request.node.name)
    return random.Random(seed)


@pytest.fixture(scope="session")
def a5():
    return parse_presentation(A5_TEXT)


def random_word(rng: random.Random, ngens: int, max_len: int, min_len: int = 0) -> Word:
    n = rng.randint(min_len, max_len)
    return Word(tuple(rng.choice((1, -1)) * rng.randint(1, ngens) for _ in range(n)))


def random_presentation(rng: random.Random, max_gens=3, max_rels=4, max_len=8) -> GroupPresentation:
    n = rng.randint(1, max_gens)
    gens = tuple("xyz"[:n])
    rels = tuple(random_word(rng, n, max_len, 1) for _ in range(rng.randint(0, max_rels)))
    return GroupPresentation(gens, rels, "R")


def pytest_configure(config):
    config._acceptance_lines = []


@pytest.fixture
def report(request):
    """Print one PASS/FAIL line for an acceptance criterion and keep it for the summary."""
    lines = request.config._acceptance_lines

    def emit(number: int, title: str, ok: bool, detail: str = "") -> bool:
        line = f"[{'PASS' if ok else 'FAIL'}] criterion {number:2d}: {title}" + (f" ({detail})" if detail else "")
        print(line)
        lines.append(line)
        return ok

    return emit


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = getattr(config, "_acceptance_lines", [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split("criterion")[1].split(":")[0])):
            terminalreporter.write_line(line)

import pytest

from fpgadgets.machine import (Configuration, MachineError, MachineStuck, Outcome, Quad, TuringMachine,
                               cantor_pair, cantor_tuple, cantor_unpair, cantor_untuple, format_machine,
                               parse_machine, phi_input, run, step, zoo)

Z = zoo()


def test_step_examples():
    h = Z["HALT1"]
    c = Configuration((), h.start, (1,))
    nxt = step(h, c)
    assert nxt == Configuration((), h.halt, (1,))
    assert step(h, nxt) is Outcome.HALTED
    right = parse_machine("machine R\nalphabet s0 s1\nstates q1 qh\nquad q1 s1 R q1\n")
    assert step(right, c) == Configuration((1,), right.start, (0,))


def test_run_examples():
    t = run(Z["HALT1"], (1,), 10)
    assert t.outcome is Outcome.HALTED and len(t.configs) == 2
    t = run(Z["LOOP"], (1,), 100)
    assert t.outcome is Outcome.BUDGET and len(t.configs) == 101
    assert run(Z["LOOP"], (1,), 0).outcome is Outcome.BUDGET


def _independent_step(M, c):
    """Second implementation of one step, used to cross-check traces."""
    rule = {(q.state, q.symbol): q for q in M.quads}[(c.state, c.right[0])]
    L, R = list(c.left), list(c.right)
    if rule.action == "write":
        R[0] = rule.write
    elif rule.action == "R":
        L.append(R.pop(0))
        R = R or [0]
    else:
        R.insert(0, L.pop() if L else 0)
    return Configuration(tuple(L), rule.next_state, tuple(R))


@pytest.mark.parametrize("name", sorted(Z))
def test_traces_step_by_step(name):
    M = Z[name]
    for n in range(4):
        t = run(M, phi_input(n), 60)
        assert t.steps == len(t.configs) - 1
        for a, b in zip(t.configs, t.configs[1:]):
            assert _independent_step(M, a) == b
        assert t.halted == (t.configs[-1].state == M.halt)
        assert run(M, phi_input(n), 60) == t


def test_halting_behaviour_of_zoo():
    for name in ("HALT1", "SCAN", "BOUNCE", "ERASE"):
        for n in range(6):
            assert run(Z[name], phi_input(n), 50).halted, (name, n)
    assert not run(Z["LOOP"], phi_input(0), 500).halted


def test_stuck_is_distinct():
    M = parse_machine("machine S\nalphabet s0 s1\nstates q1 qh\nquad q1 s1 R q1\n")
    with pytest.raises(MachineStuck):
        run(M, (1,), 10)


def test_validation():
    with pytest.raises(MachineError):
        TuringMachine(("s0", "s1"), ("q1", "qh"), (Quad(0, 1, "R", None, 0), Quad(0, 1, "L", None, 0)))
    with pytest.raises(MachineError):
        TuringMachine(("s0", "s1"), ("q1", "qh"), (Quad(1, 1, "R", None, 0),))
    with pytest.raises(MachineError):
        parse_machine("machine X\nalphabet s0 s1\nstates q1 qh\nquad q1 s7 R q1\n")


def test_phi_input():
    assert phi_input(0) == (1,)
    assert phi_input(2) == (1, 1, 1)
    assert len(phi_input(5)) == 6


def test_cantor_examples():
    assert cantor_pair(0, 0) == 0
    assert cantor_pair(1, 2) == 8
    assert cantor_unpair(8) == (1, 2)


def test_cantor_tuple_folds_left():
    assert cantor_tuple([3, 4, 5]) == cantor_pair(cantor_pair(3, 4), 5)
    assert cantor_untuple(cantor_tuple([3, 4, 5]), 3) == (3, 4, 5)


@pytest.mark.parametrize("name", sorted(Z))
def test_machine_format_round_trip(name):
    text = format_machine(Z[name])
    assert parse_machine(text) == Z[name]
    assert format_machine(parse_machine(text)) == text

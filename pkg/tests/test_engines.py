import pytest

from fpgadgets.certificates import verify_certificate
from fpgadgets.core import Word, parse_presentation, parse_word
from fpgadgets.engines import (Budget, abelianization_pipeline, enumerate_trivial_words, iso_search,
                               normal_generator_search, prove_trivial_word, simple_wp, triviality_semi)
from fpgadgets.gordon import gordon

from conftest import random_presentation
from oracles import perm_of_word


def P(text):
    return parse_presentation(text)


def test_enumerate_examples():
    pairs = list(enumerate_trivial_words(P("gens a\nrel a\n"), 10))
    assert pairs[0][0] == Word() and pairs[1][0] == Word((1,)) and len(pairs[1][1]) == 1
    assert [w for w, _ in enumerate_trivial_words(P("gens a\n"), 100)] == [Word()]


def test_enumerate_is_sound_and_ordered(rng):
    for _ in range(5):
        G = random_presentation(rng)
        sizes = []
        for w, c in enumerate_trivial_words(G, 300):
            assert verify_certificate(G, c, w)
            sizes.append(c.size())
        assert sizes == sorted(sizes)


def test_triviality_examples():
    proof = triviality_semi(P("gens a b\nrel a\nrel b\n"), 10_000)
    assert proof is not None and proof.verify()
    assert triviality_semi(P("gens a\nrel a^2\n"), 100_000) is None


def test_triviality_of_gordon_example():
    G = gordon(P("gens x\nrel x\n"), Word.gen(0))
    proof = triviality_semi(G)
    assert proof is not None and proof.verify()
    assert proof.certificates is not None


def test_triviality_stays_unknown_on_infinite_group():
    assert triviality_semi(P("gens a b\nrel a b a^-1 b^-1\n"), 50_000) is None


def test_simple_wp_examples(a5):
    r = simple_wp(a5, Word.gen(0, 2), 10_000)
    assert r.verdict == "trivial" and r.verify(Word.gen(0, 2))
    r = simple_wp(a5, Word.gen(0), 100_000)
    assert r.verdict == "nontrivial" and r.verify(Word.gen(0))
    w = parse_word("a b a b^-1", a5.generators)
    r = simple_wp(a5, w, 100_000)
    expected = "trivial" if perm_of_word(w.codes) == tuple(range(5)) else "nontrivial"
    assert r.verdict == expected and r.verify(w)


def test_simple_wp_unknown_on_tiny_budget(a5):
    w = parse_word("a b a b^-1", a5.generators)
    assert simple_wp(a5, w, 5).verdict == "unknown"


def test_iso_examples():
    C2, C2b, C3 = P("gens a\nrel a^2\n"), P("gens b\nrel b^2\nrel b^6\n"), P("gens b\nrel b^3\n")
    wit = iso_search(C2, C2b, 100_000)
    assert wit is not None and wit.verify(C2, C2b)
    assert wit.forward.images == (Word((1,)),)
    assert iso_search(C2, C3, 5_000) is None


def test_iso_identity(a5):
    wit = iso_search(a5, a5, 10_000)
    assert wit.forward.images == (Word((1,)), Word((2,)))
    assert wit.verify(a5, a5)


def test_iso_non_identity_witness():
    # same group, generators listed in the other order
    Q = P("gens u v\nrel v^3\nrel u^2\nrel u v u v u v u v u v\n")
    A = P("gens a b\nrel a^2\nrel b^3\nrel a b a b a b a b a b\n")
    wit = iso_search(A, Q, 200_000)
    assert wit is not None and wit.verify(A, Q)


def test_normal_generator_examples():
    found = normal_generator_search(P("gens a\nrel a^3\n"), 100_000)
    assert found is not None and found.word == Word((1,)) and found.proof.verify()
    assert normal_generator_search(P("gens a b\n"), 20_000) is None


def test_budget_monotone(a5):
    w = parse_word("a b a b^-1", a5.generators)
    verdicts = [simple_wp(a5, w, b).verdict for b in (10, 100, 1_000, 10_000, 100_000)]
    first = next(i for i, v in enumerate(verdicts) if v != "unknown")
    assert all(v == verdicts[first] for v in verdicts[first:])
    a = normal_generator_search(P("gens a\nrel a^3\n"), 50_000)
    b = normal_generator_search(P("gens a\nrel a^3\n"), 500_000)
    assert a.word == b.word


def test_deterministic(a5):
    w = parse_word("a b^-1 a b", a5.generators)
    assert simple_wp(a5, w, 100_000) == simple_wp(a5, w, 100_000)


def test_prove_trivial_word(a5):
    w = Word((1, 2) * 5 + (1, 1))
    c = prove_trivial_word(a5, w, 100_000)
    assert verify_certificate(a5, c, w)
    assert prove_trivial_word(a5, Word((1,)), 100_000) is None
    F = P("gens a b\nrel a b a^-1 b^-1\n")
    w = parse_word("b a b^-1 a^-1", F.generators)
    assert verify_certificate(F, prove_trivial_word(F, w, 1000), w)


def test_abelianization_pipeline():
    assert abelianization_pipeline(P("gens a\nrel a^2\n")) == Word((1,))
    assert abelianization_pipeline(gordon(P("gens x\nrel x^3\n"), Word.gen(0))) is None
    assert abelianization_pipeline(P("gens a b\nrel a^-1 b^-1 a b\n")) == Word((1,))


def test_budget_type():
    with pytest.raises(ValueError):
        Budget(-1)
    assert Budget().steps == 1_000_000

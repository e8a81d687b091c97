import pytest

from fpgadgets.certificates import parse_certificate, verify_certificate
from fpgadgets.cli import main
from fpgadgets.core import parse_presentation, parse_semigroup, parse_word
from fpgadgets.post import parse_derivation, verify_derivation

from conftest import A5_TEXT
from oracles import perm_of_word


@pytest.fixture
def files(tmp_path):
    (tmp_path / "a5.gp").write_text(A5_TEXT)
    (tmp_path / "trivial.gp").write_text("group T\ngens a b\nrel a\nrel b\n")
    (tmp_path / "c2.gp").write_text("group C2\ngens a\nrel a^2\n")
    (tmp_path / "c3.gp").write_text("group C3\ngens b\nrel b^3\n")
    (tmp_path / "loop.tm").write_text("machine LOOP\nalphabet s0 s1\nstates q1 qh\nquad q1 s1 R q1\nquad q1 s0 R q1\n")
    return tmp_path


def test_version(capsys):
    assert main(["--version"]) == 0
    out = capsys.readouterr().out
    assert "post-schema" in out and "boone-schema" in out


def test_forge_pi_byte_identical(files):
    a, b = files / "p1.gp", files / "p2.gp"
    assert main(["forge", "pi", "--machine", str(files / "loop.tm"), "--n", "0", "--out", str(a)]) == 0
    assert main(["forge", "pi", "--machine", str(files / "loop.tm"), "--n", "0", "--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    P = parse_presentation(a.read_text())
    assert a.read_text() == __import__("fpgadgets").format_presentation(P)


@pytest.mark.parametrize("kind", ["post", "boone", "psi", "phi"])
def test_forge_machine_families(files, kind):
    out = files / f"{kind}.out"
    assert main(["forge", kind, "--machine", "HALT1", "--n", "1", "--out", str(out)]) == 0
    assert out.read_text()


def test_forge_from_presentations(files, capsys):
    assert main(["forge", "gordon", "--in", str(files / "c2.gp"), "--word", "a"]) == 0
    assert main(["forge", "product", "--in", str(files / "c2.gp"), "--in", str(files / "c3.gp")]) == 0
    assert main(["forge", "abelianize", "--in", str(files / "a5.gp")]) == 0
    out = capsys.readouterr().out
    assert "gens a b\nrel a^2\nrel b^3\n" in out


def test_prove_trivial_group(files):
    out = files / "proof.txt"
    assert main(["prove", "trivial-group", "--in", str(files / "trivial.gp"), "--budget", "100000",
                 "--out", str(out)]) == 0
    assert "target a" in out.read_text()


def test_prove_trivial_group_unknown_leaves_no_file(files):
    out = files / "proof.txt"
    assert main(["prove", "trivial-group", "--in", str(files / "c2.gp"), "--budget", "2000",
                 "--out", str(out)]) == 2
    assert not out.exists()


@pytest.mark.parametrize("word", ["a b a b^-1", "a^2", "a", "a b a b a b a b a b"])
def test_solve_simple_wp(files, capsys, word):
    assert main(["solve", "simple-wp", "--in", str(files / "a5.gp"), "--word", word]) == 0
    trivial = perm_of_word(parse_word(word, ("a", "b")).codes) == tuple(range(5))
    assert capsys.readouterr().out.strip() == ("Trivial" if trivial else "Nontrivial")


def test_prove_and_check_certificate(files):
    cert = files / "c.txt"
    assert main(["prove", "trivial-word", "--in", str(files / "a5.gp"), "--word", "a b a b a b a b a b a^2",
                 "--out", str(cert)]) == 0
    P = parse_presentation(A5_TEXT)
    c, t = parse_certificate(P, cert.read_text())
    assert verify_certificate(P, c, t)
    assert main(["check", "certificate", "--in", str(files / "a5.gp"), "--file", str(cert)]) == 0
    bad = cert.read_text().replace("sign +1", "sign -1", 1)
    cert.write_text(bad)
    assert main(["check", "certificate", "--in", str(files / "a5.gp"), "--file", str(cert)]) == 1


def test_prove_derivation_and_boone_certificate(files):
    d, s = files / "d.txt", files / "s.sg"
    assert main(["prove", "derivation", "--machine", "SCAN", "--n", "2", "--out", str(d)]) == 0
    assert main(["forge", "post", "--machine", "SCAN", "--out", str(s)]) == 0
    S = parse_semigroup(s.read_text())
    assert verify_derivation(S, parse_derivation(S, d.read_text()))
    assert main(["check", "derivation", "--semigroup", str(s), "--file", str(d)]) == 0
    c, b = files / "bc.txt", files / "b.gp"
    assert main(["prove", "certificate", "--machine", "SCAN", "--derivation", str(d), "--out", str(c)]) == 0
    assert main(["forge", "boone", "--machine", "SCAN", "--out", str(b)]) == 0
    assert main(["check", "certificate", "--in", str(b), "--file", str(c)]) == 0
    assert main(["prove", "derivation", "--machine", str(files / "loop.tm"), "--budget", "50"]) == 2


def test_search(files, capsys):
    assert main(["search", "iso", "--in", str(files / "c2.gp"), "--other", str(files / "c2.gp")]) == 0
    assert "forward a -> a" in capsys.readouterr().out
    assert main(["search", "iso", "--in", str(files / "c2.gp"), "--other", str(files / "c3.gp"),
                 "--budget", "2000", "--deterministic"]) == 2
    assert main(["search", "normal-gen", "--in", str(files / "c3.gp")]) == 0
    assert capsys.readouterr().out.splitlines()[-1] == "b"


def test_abelian_and_demo(files, capsys):
    assert main(["abelian", "invariants", "--in", str(files / "c2.gp")]) == 0
    assert main(["abelian", "wp", "--in", str(files / "c2.gp"), "--word", "a^2"]) == 0
    assert main(["solve", "abelian-wp", "--in", str(files / "c2.gp"), "--word", "a"]) == 0
    out = capsys.readouterr().out.split()
    assert out == ["rank", "0", "factors", "2", "Trivial", "Nontrivial"]
    assert main(["demo", "adversary", "--k", "1", "--machines", "LOOP", "HALT1"]) == 0
    assert "Untouched factor" in capsys.readouterr().out


def test_input_errors(files, capsys):
    bad = files / "bad.gp"
    bad.write_text("group X\ngens a\nrel a^2 q\n")
    assert main(["abelian", "invariants", "--in", str(bad)]) == 1
    assert "line 3" in capsys.readouterr().err
    assert main(["forge", "nope"]) == 1
    assert main(["solve", "simple-wp", "--in", str(files / "a5.gp"), "--word", "a", "--bogus"]) == 1
    assert main(["forge", "pi", "--machine", "NOPE", "--n", "0"]) == 1
    assert main(["solve", "simple-wp", "--in", str(files / "missing.gp"), "--word", "a"]) == 1
    assert main(["demo", "adversary", "--k", "2", "--machines", "LOOP"]) == 1

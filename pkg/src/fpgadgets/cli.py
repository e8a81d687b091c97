"""Command-line front end.

Exit codes: 0 when the requested object was built or proven, 2 when an
engine ran out of budget (Unknown), 1 on bad input.
"""

from __future__ import annotations

import argparse
import os
import sys
import tempfile
from pathlib import Path

from . import __version__
from .abelian import abelian_invariants, abelian_word_problem
from .boone import boone_checksum, boone_encode, certificate_from_derivation
from .certificates import format_certificate, parse_certificate, verify_certificate
from .core import (Word, abelianize, format_presentation, format_semigroup, format_word, parse_presentation,
                   parse_semigroup, parse_word)
from .engines import Budget, iso_search, normal_generator_search, prove_trivial_word, simple_wp, triviality_semi
from .gadgets import adversary_demo, free_product_family, phi_family, pi, psi
from .gordon import gordon
from .machine import MachineError, MachineStuck, Outcome, parse_machine, phi_input, run, zoo
from .post import (POST_SCHEMA, derive_from_trace, format_derivation, parse_derivation, post_encode,
                   rewrite_search, schema_checksum, verify_derivation)

OK, INPUT_ERROR, UNKNOWN = 0, 1, 2


class InputError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(INPUT_ERROR, f"{self.prog}: error: {message}\n")


# -- io ------------------------------------------------------------------------

def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise InputError(f"{path}: {e.strerror}") from None


def _load(path: str, parser, what: str):
    try:
        return parser(_read(path))
    except (ValueError, MachineError) as e:
        raise InputError(f"{path}: invalid {what}: {e}") from None


def _presentation(path):
    return _load(path, parse_presentation, "presentation")


def _machine(spec: str):
    if os.path.exists(spec):
        return _load(spec, parse_machine, "machine")
    named = zoo()
    if spec in named:
        return named[spec]
    raise InputError(f"{spec}: no such machine file or zoo machine ({', '.join(sorted(named))})")


def _word(text: str, P) -> Word:
    try:
        return parse_word(text, P.generators)
    except ValueError as e:
        raise InputError(f"word {text!r}: {e}") from None


def _emit(text: str, out: str | None) -> None:
    """Write atomically, or to stdout when no path is given."""
    if out is None:
        sys.stdout.write(text)
        return
    target = Path(out)
    fd, tmp = tempfile.mkstemp(dir=target.parent or ".", prefix=f".{target.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, target)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _budget(args) -> Budget:
    return Budget(args.budget)


def _certificate_blocks(P, certs, labels) -> str:
    return "\n".join(f"# {lab}\n" + format_certificate(P, c, t) for lab, (c, t) in zip(labels, certs))


# -- forge -----------------------------------------------------------------------

def cmd_forge(args) -> int:
    kind = args.kind
    if kind == "post":
        text = format_semigroup(post_encode(_machine(args.machine)))
    elif kind == "boone":
        text = format_presentation(boone_encode(_machine(args.machine)).presentation)
    elif kind in ("pi", "psi", "phi"):
        if args.n is None or args.n < 0:
            raise InputError("--n must be a natural number")
        fn = {"pi": pi, "psi": psi, "phi": phi_family}[kind]
        text = format_presentation(fn(_machine(args.machine), args.n))
    elif kind == "gordon":
        P = _presentation(args.input[0])
        w = _word(args.word, P) if args.word is not None else Word()
        text = format_presentation(gordon(P, w))
    elif kind == "product":
        if not args.input:
            raise InputError("product needs at least one --in file")
        text = format_presentation(free_product_family([_presentation(p) for p in args.input]))
    else:  # abelianize
        text = format_presentation(abelianize(_presentation(args.input[0])))
    _emit(text, args.out)
    return OK


# -- prove / check ------------------------------------------------------------------

def cmd_prove(args) -> int:
    kind = args.kind
    if kind == "trivial-word":
        P = _presentation(args.input[0])
        w = _word(args.word, P)
        cert = prove_trivial_word(P, w, _budget(args))
        if cert is None:
            print("Unknown", file=sys.stderr)
            return UNKNOWN
        _emit(format_certificate(P, cert, w), args.out)
        return OK
    if kind == "trivial-group":
        P = _presentation(args.input[0])
        proof = triviality_semi(P, _budget(args))
        if proof is None:
            print("Unknown", file=sys.stderr)
            return UNKNOWN
        lines = [f"# trivial-group {P.name} via {proof.strategy}\n"]
        if proof.certificates is not None:
            lines.append(_certificate_blocks(P, [(c, Word.gen(i)) for i, c in enumerate(proof.certificates)],
                                             P.generators))
        else:
            lines.append(f"# closed coset table with {proof.table.index} coset(s)\n")
        _emit("".join(lines), args.out)
        return OK
    if kind == "derivation":
        if args.semigroup:
            S = _load(args.semigroup, parse_semigroup, "semigroup")
            try:
                start = S.parse_word(args.start or "")
                goal = S.parse_word(args.goal or "")
            except ValueError as e:
                raise InputError(str(e)) from None
            d = rewrite_search(S, start, goal, args.budget)
        else:
            M = _machine(args.machine)
            trace = run(M, phi_input(args.n or 0), args.budget)
            if trace.outcome != Outcome.HALTED:
                print(f"Unknown ({trace.outcome.name.lower()})", file=sys.stderr)
                return UNKNOWN
            S = post_encode(M)
            d = derive_from_trace(M, trace, S)
        if d is None:
            print("Unknown", file=sys.stderr)
            return UNKNOWN
        _emit(format_derivation(S, d), args.out)
        return OK
    # certificate: β(s1^(n+1)) = e from a halting run
    M = _machine(args.machine)
    B = boone_encode(M)
    if args.derivation:
        d = _load(args.derivation, lambda t: parse_derivation(B.semigroup, t), "derivation")
    else:
        trace = run(M, phi_input(args.n or 0), args.budget)
        if trace.outcome != Outcome.HALTED:
            print(f"Unknown ({trace.outcome.name.lower()})", file=sys.stderr)
            return UNKNOWN
        d = derive_from_trace(M, trace, B.semigroup)
    try:
        cert, target = certificate_from_derivation(B, d)
    except ValueError as e:
        raise InputError(str(e)) from None
    _emit(format_certificate(B.presentation, cert, target), args.out)
    return OK


def cmd_check(args) -> int:
    if args.kind == "derivation":
        S = _load(args.semigroup, parse_semigroup, "semigroup")
        d = _load(args.file, lambda t: parse_derivation(S, t), "derivation")
        ok = verify_derivation(S, d)
    else:
        P = _presentation(args.input[0])
        cert, target = _load(args.file, lambda t: parse_certificate(P, t), "certificate")
        diag: list[str] = []
        ok = verify_certificate(P, cert, target, diagnostics=diag)
        for line in diag:
            print(line, file=sys.stderr)
    print("valid" if ok else "invalid")
    return OK if ok else INPUT_ERROR


# -- solve / search -------------------------------------------------------------------

def cmd_solve(args) -> int:
    P = _presentation(args.input[0])
    w = _word(args.word, P)
    if args.kind == "abelian-wp":
        print("Trivial" if abelian_word_problem(P, w) else "Nontrivial")
        return OK
    res = simple_wp(P, w, _budget(args))
    if res.verdict == "unknown":
        print("Unknown")
        return UNKNOWN
    print("Trivial" if res.verdict == "trivial" else "Nontrivial")
    if args.out:
        if res.verdict == "trivial":
            text = format_certificate(P, res.certificates[0], w)
        else:
            text = f"# nontrivial: generators of {res.presentation.name} are trivial\n" + _certificate_blocks(
                res.presentation, [(c, Word.gen(i)) for i, c in enumerate(res.certificates)],
                res.presentation.generators)
        _emit(text, args.out)
    return OK


def cmd_search(args) -> int:
    P = _presentation(args.input[0])
    if args.kind == "iso":
        if not args.other:
            raise InputError("iso search needs --other")
        Q = _presentation(args.other)
        wit = iso_search(P, Q, _budget(args))
        if wit is None:
            print("Unknown")
            return UNKNOWN
        lines = [f"forward {x} -> {format_word(img, Q.generators)}\n"
                 for x, img in zip(P.generators, wit.forward.images)]
        lines += [f"backward {y} -> {format_word(img, P.generators)}\n"
                  for y, img in zip(Q.generators, wit.backward.images)]
        text = "".join(lines)
        print(text, end="")
        if args.out:
            _emit(text, args.out)
        return OK
    found = normal_generator_search(P, _budget(args))
    if found is None:
        print("Unknown")
        return UNKNOWN
    print(format_word(found.word, P.generators))
    if args.out:
        Pw = found.proof.presentation
        body = (_certificate_blocks(Pw, [(c, Word.gen(i)) for i, c in enumerate(found.proof.certificates)],
                                    Pw.generators) if found.proof.certificates else "")
        _emit(f"# normal generator {format_word(found.word, P.generators)}\n" + body, args.out)
    return OK


def cmd_demo(args) -> int:
    machines = [_machine(m) for m in args.machines]
    try:
        rep = adversary_demo(args.k, machines, args.n)
    except ValueError as e:
        raise InputError(str(e)) from None
    print(rep.narrative, end="")
    if args.out:
        _emit(format_presentation(rep.product), args.out)
    return OK


def cmd_abelian(args) -> int:
    P = _presentation(args.input[0])
    if args.kind == "invariants":
        inv = abelian_invariants(P)
        print(f"rank {inv.rank}")
        print("factors " + " ".join(map(str, inv.factors)) if inv.factors else "factors")
        return OK
    if args.word is None:
        raise InputError("abelian wp needs --word")
    print("Trivial" if abelian_word_problem(P, _word(args.word, P)) else "Nontrivial")
    return OK


# -- parser ------------------------------------------------------------------------

def _common(p):
    p.add_argument("--budget", type=int, default=1_000_000, help="step budget (default 10^6)")
    p.add_argument("--deterministic", action="store_true",
                   help="single-task mode (the only mode; accepted for interface stability)")
    p.add_argument("--out", help="output file, written atomically (default: stdout)")
    p.add_argument("--in", dest="input", action="append", default=[], help="input presentation file")


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="fpgadgets", description="Finitely presented group gadgets and semi-decision engines.")
    ap.add_argument("--version", action="store_true", help="print version and schema checksums")
    sub = ap.add_subparsers(dest="group", parser_class=_Parser)

    f = sub.add_parser("forge", help="build presentations")
    f.add_argument("kind", choices=["post", "boone", "gordon", "pi", "psi", "phi", "product", "abelianize"])
    f.add_argument("--machine", help="machine file or zoo name")
    f.add_argument("--n", type=int)
    f.add_argument("--word")
    _common(f)
    f.set_defaults(func=cmd_forge)

    p = sub.add_parser("prove", help="produce checkable proofs")
    p.add_argument("kind", choices=["trivial-word", "trivial-group", "derivation", "certificate"])
    p.add_argument("--word")
    p.add_argument("--machine")
    p.add_argument("--n", type=int)
    p.add_argument("--semigroup")
    p.add_argument("--start")
    p.add_argument("--goal")
    p.add_argument("--derivation")
    _common(p)
    p.set_defaults(func=cmd_prove)

    c = sub.add_parser("check", help="verify proof files")
    c.add_argument("kind", choices=["derivation", "certificate"])
    c.add_argument("--file", required=True)
    c.add_argument("--semigroup")
    _common(c)
    c.set_defaults(func=cmd_check)

    s = sub.add_parser("solve", help="word problems")
    s.add_argument("kind", choices=["abelian-wp", "simple-wp"])
    s.add_argument("--word", required=True)
    _common(s)
    s.set_defaults(func=cmd_solve)

    r = sub.add_parser("search", help="isomorphism and normal generator searches")
    r.add_argument("kind", choices=["iso", "normal-gen"])
    r.add_argument("--other", help="second presentation for iso")
    _common(r)
    r.set_defaults(func=cmd_search)

    d = sub.add_parser("demo", help="adversary constructions")
    d.add_argument("kind", choices=["adversary"])
    d.add_argument("--k", type=int, default=2)
    d.add_argument("--n", type=int, default=0)
    d.add_argument("--machines", nargs="+", required=True)
    _common(d)
    d.set_defaults(func=cmd_demo)

    a = sub.add_parser("abelian", help="abelianization tools")
    a.add_argument("kind", choices=["invariants", "wp"])
    a.add_argument("--word")
    _common(a)
    a.set_defaults(func=cmd_abelian)
    return ap


def _needs_input(args) -> bool:
    if args.group in ("solve", "search", "abelian"):
        return True
    if args.group == "check" and args.kind == "certificate":
        return True
    if args.group == "prove" and args.kind in ("trivial-word", "trivial-group"):
        return True
    return args.group == "forge" and args.kind in ("gordon", "abelianize")


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:          # --help or a usage error
        return int(e.code or 0)
    if args.version:
        print(f"fpgadgets {__version__}")
        print(f"post-schema {schema_checksum(POST_SCHEMA)}")
        print(f"boone-schema {boone_checksum()}")
        return OK
    if args.group is None:
        ap.print_usage(sys.stderr)
        return INPUT_ERROR
    try:
        if args.budget < 0:
            raise InputError("--budget must be nonnegative")
        if _needs_input(args) and not args.input:
            raise InputError(f"{args.group} {args.kind} needs --in")
        if args.group in ("forge", "demo") or (args.group == "prove" and args.kind in ("derivation", "certificate")):
            if getattr(args, "machine", None) is None and args.group == "forge" and args.kind in (
                    "post", "boone", "pi", "psi", "phi"):
                raise InputError(f"forge {args.kind} needs --machine")
            if args.group == "prove" and not args.machine and not args.semigroup:
                raise InputError(f"prove {args.kind} needs --machine (or --semigroup with --start/--goal)")
        if args.group == "check" and args.kind == "derivation" and not args.semigroup:
            raise InputError("check derivation needs --semigroup")
        return args.func(args)
    except InputError as e:
        print(f"error: {e}", file=sys.stderr)
        return INPUT_ERROR
    except MachineStuck as e:
        print(f"error: machine has no rule for {e}", file=sys.stderr)
        return INPUT_ERROR


if __name__ == "__main__":
    sys.exit(main())

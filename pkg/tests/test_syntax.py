"""Parser and renderer against the input grammar."""

import pytest

from fbv_prover.structure import (atom, canonicalize, copar, par, seq,
                                  unit)
from fbv_prover.syntax import NegatedNonAtom, ParseError, parse, render


def test_parse_unit():
    assert parse("*") == unit()


def test_parse_atoms():
    assert parse("a") == atom("a")
    assert parse("-b1") == atom("b1", negative=True)
    assert parse("aToMo") == atom("aToMo")
    assert parse("-123") == atom("123", negative=True)


def test_parse_six_pair_chain():
    s = parse("[-a,(a,-b),(b,-c),(c,-d),(d,-e),(e,-f),f]")
    assert s.kind == "p"
    assert s.size() == 12
    assert len(s.children) == 7


def test_parse_keeps_presentation():
    s = parse("(a,[-a],*)")
    assert s.kind == "c"
    assert len(s.children) == 3         # singleton and unit still present
    assert s.children[1].kind == "p"
    assert s.children[2] == unit()


def test_parse_explicit_associativity_kept():
    s = parse("[[a,b],*]")
    assert s.children[0].kind == "p"


def test_negated_non_atom_rejected():
    with pytest.raises(NegatedNonAtom):
        parse("-(a,b)")
    with pytest.raises(NegatedNonAtom):
        parse("[a, -[b,c]]")


def test_parse_error_offsets():
    with pytest.raises(ParseError) as err:
        parse("[a,]")
    assert err.value.offset == 3
    with pytest.raises(ParseError) as err:
        parse("[a,b")
    assert err.value.offset == 4
    assert "]" in err.value.expected


def test_trailing_input_rejected():
    with pytest.raises(ParseError):
        parse("a b")


def test_whitespace_ignored():
    assert canonicalize(parse(" [ a , ( b , - c ) ] ")) == \
        canonicalize(parse("[a,(b,-c)]"))


def test_seq_syntax_gated():
    s = parse("<a;b;c>", allow_seq=True)
    assert s.kind == "s" and len(s.children) == 3
    with pytest.raises(ParseError):
        parse("<a;b>", allow_seq=False)


def test_render_examples():
    assert render(unit()) == "*"
    s = par([atom("a", negative=True), copar([atom("a"),
                                              atom("b", negative=True)])])
    assert render(s) == "[-a,(a,-b)]"
    assert render(seq([atom("a"), atom("b")])) == "<a;b>"


def test_render_parse_roundtrip_canonical():
    for text in ["[(a,b,c),-a,-b,-c]", "(<a;-b>,[-c,d])", "[b,a,*]",
                 "[a,[b,c]]"]:
        s = parse(text)
        assert canonicalize(parse(render(s))) == canonicalize(s)

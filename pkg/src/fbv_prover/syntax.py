"""Concrete syntax: recursive-descent parser and renderer.

The input language, one structure per line:

    <unit>       ::= *
    <atm>        ::= ([A-Za-z0-9])+
    <atom>       ::= <atm> | - <atm>
    <structures> ::= <structure> | <structures> , <structure>
    <structure>  ::= <unit> | <atom> | [<structures>] | (<structures>)
                   | <<structure> ; ... ; <structure>>     (seq, BV only)

Whitespace between tokens is ignored.  Only atoms may be negated;
``-(a,b)`` is rejected.  `parse` returns the tree exactly as written
(units, singletons and explicit associativity included); putting it in
normal form is the caller's explicit step.
"""

from __future__ import annotations

from .structure import Structure, atom, canonicalize, par, copar, seq, unit

_ATOM_CHARS = frozenset(
    "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789")


class ParseError(ValueError):
    """Malformed input; carries the byte offset and the expected tokens."""

    def __init__(self, message, offset, expected=()):
        super().__init__(f"{message} at offset {offset}")
        self.offset = offset
        self.expected = frozenset(expected)


class NegatedNonAtom(ParseError):
    """Negation applied to something that is not an atom."""

    def __init__(self, offset):
        super().__init__("negation is only allowed on atoms", offset,
                         expected={"atom"})


class _Parser:
    def __init__(self, text: str, allow_seq: bool):
        self.text = text
        self.pos = 0
        self.allow_seq = allow_seq

    def skip_ws(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expect(self, ch: str) -> None:
        self.skip_ws()
        if self.peek() != ch:
            raise ParseError(f"expected {ch!r}", self.pos, expected={ch})
        self.pos += 1

    def structure(self) -> Structure:
        self.skip_ws()
        ch = self.peek()
        if ch == "*":
            self.pos += 1
            return unit()
        if ch == "-":
            mark = self.pos
            self.pos += 1
            self.skip_ws()
            if self.peek() not in _ATOM_CHARS:
                raise NegatedNonAtom(mark)
            return atom(self.atm(), negative=True)
        if ch in _ATOM_CHARS:
            return atom(self.atm())
        if ch == "[":
            self.pos += 1
            kids = self.comma_list("]")
            return par(kids)
        if ch == "(":
            self.pos += 1
            kids = self.comma_list(")")
            return copar(kids)
        if ch == "<" and self.allow_seq:
            self.pos += 1
            kids = [self.structure()]
            self.skip_ws()
            while self.peek() == ";":
                self.pos += 1
                kids.append(self.structure())
                self.skip_ws()
            self.expect(">")
            return seq(kids)
        expected = {"*", "-", "atom", "[", "("}
        if self.allow_seq:
            expected.add("<")
        raise ParseError("expected a structure", self.pos, expected=expected)

    def atm(self) -> str:
        self.skip_ws()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos] in _ATOM_CHARS:
            self.pos += 1
        if self.pos == start:
            raise ParseError("expected an atom name", start, expected={"atom"})
        return self.text[start:self.pos]

    def comma_list(self, closing: str) -> list[Structure]:
        kids = [self.structure()]
        self.skip_ws()
        while self.peek() == ",":
            self.pos += 1
            kids.append(self.structure())
            self.skip_ws()
        self.expect(closing)
        return kids


def parse(text: str, allow_seq: bool = True) -> Structure:
    """Parse one structure, returned as written (not normalized)."""
    p = _Parser(text, allow_seq)
    out = p.structure()
    p.skip_ws()
    if p.pos != len(text):
        raise ParseError("trailing input", p.pos, expected={"end of input"})
    return out


def render(s: Structure) -> str:
    """Canonical text of ``s``: normal form, commutative children sorted.

    Inverse of `parse` up to canonical form: parsing the result gives a
    structure with the same canonical form as ``s``.
    """
    return canonicalize(s).text()

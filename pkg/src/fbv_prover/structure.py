"""Structure syntax for the systems BV and FBV.

A structure is a tree built from the unit, atoms, and the three
connectives: par [R,...,R] and copar (R,...,R) are commutative and
associative, seq <R;...;R> is associative but ordered.  Negation is kept
in negation-normal form: only atoms carry a polarity, so there is no
negation node in the tree.

Structures are immutable.  Equality and hashing are structural, so a
structure can be used as a dict key or shared freely between threads.
Most derived data (canonical text, size, literal sets) is computed once
per node and cached.
"""

from __future__ import annotations

from collections import Counter
from typing import Iterator

# Node kind tags.
UNIT = "u"
ATOM = "a"
PAR = "p"
COPAR = "c"
SEQ = "s"

_COMPOSITE = (PAR, COPAR, SEQ)
# Canonical ordering rank per kind: unit < atom < seq < par < copar.
_RANK = {UNIT: 0, ATOM: 1, SEQ: 2, PAR: 3, COPAR: 4}
_DELIMS = {PAR: ("[", ",", "]"), COPAR: ("(", ",", ")"), SEQ: ("<", ";", ">")}


class Structure:
    """One node of a structure tree.

    Use the module constructors (``unit``, ``atom``, ``par``, ``copar``,
    ``seq``) rather than calling this class directly.  Raw trees may
    contain units, singleton delimiters and nested same-kind delimiters;
    `normalize` and `canonicalize` remove them.
    """

    __slots__ = ("kind", "name", "negative", "children",
                 "_hash", "_size", "_text", "_litset", "_canon")

    def __init__(self, kind, name=None, negative=False, children=()):
        self.kind = kind
        self.name = name
        self.negative = negative
        self.children = children
        self._hash = None
        self._size = None
        self._text = None
        self._litset = None
        self._canon = None

    # -- identity ------------------------------------------------------

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, Structure):
            return NotImplemented
        if self.kind != other.kind:
            return False
        if self.kind == ATOM:
            return self.name == other.name and self.negative == other.negative
        return self.children == other.children

    def __hash__(self):
        h = self._hash
        if h is None:
            if self.kind == ATOM:
                h = hash((ATOM, self.name, self.negative))
            else:
                h = hash((self.kind, self.children))
            self._hash = h
        return h

    def __repr__(self):
        return f"Structure({self.text()!r})"

    # -- cached derived data -------------------------------------------

    def text(self) -> str:
        """Textual form of this tree, as written (no normalization).

        Uses the grammar of the command-line interface: ``*`` unit,
        ``-`` negation, ``[..,..]`` par, ``(..,..)`` copar, ``<..;..>``
        seq.  For canonical structures this string is a total key: two
        canonical structures are equal iff their texts are equal.
        """
        t = self._text
        if t is None:
            if self.kind == UNIT:
                t = "*"
            elif self.kind == ATOM:
                t = ("-" + self.name) if self.negative else self.name
            else:
                op, sep, cl = _DELIMS[self.kind]
                t = op + sep.join(c.text() for c in self.children) + cl
            self._text = t
        return t

    def size(self) -> int:
        """Number of atom occurrences in the tree."""
        n = self._size
        if n is None:
            if self.kind == ATOM:
                n = 1
            elif self.kind == UNIT:
                n = 0
            else:
                n = sum(c.size() for c in self.children)
            self._size = n
        return n

    def literals(self) -> frozenset:
        """Set of (name, negative) pairs appearing in the tree."""
        s = self._litset
        if s is None:
            if self.kind == ATOM:
                s = frozenset(((self.name, self.negative),))
            elif self.kind == UNIT:
                s = frozenset()
            else:
                s = frozenset().union(*(c.literals() for c in self.children))
            self._litset = s
        return s

    def atoms(self) -> Iterator[tuple[str, bool]]:
        """All atom occurrences, preorder, as (name, negative) pairs."""
        if self.kind == ATOM:
            yield (self.name, self.negative)
        elif self.kind != UNIT:
            for c in self.children:
                yield from c.atoms()

    def is_flat(self) -> bool:
        """True if no seq node occurs anywhere in the tree."""
        if self.kind == SEQ:
            return False
        if self.kind in (UNIT, ATOM):
            return True
        return all(c.is_flat() for c in self.children)

    def sort_key(self):
        """Total order used to sort commutative children.

        Unit < atoms (by name, positive before negative) < seq < par <
        copar; ties within a kind break on the canonical text.
        """
        if self.kind == ATOM:
            return (_RANK[ATOM], self.name, "-" if self.negative else "")
        return (_RANK[self.kind], self.text(), "")


_UNIT_NODE = Structure(UNIT)


def unit() -> Structure:
    return _UNIT_NODE


def atom(name: str, negative: bool = False) -> Structure:
    return Structure(ATOM, name=name, negative=negative)


def par(children) -> Structure:
    return Structure(PAR, children=tuple(children))


def copar(children) -> Structure:
    return Structure(COPAR, children=tuple(children))


def seq(children) -> Structure:
    return Structure(SEQ, children=tuple(children))


def compose(kind: str, children) -> Structure:
    """Normal-form smart constructor.

    Drops units, flattens nested same-kind delimiters, unwraps
    singletons.  Children are kept in the given order; commutative
    sorting is `canonicalize`'s job.
    """
    flat: list[Structure] = []
    for ch in children:
        if ch.kind == UNIT:
            continue
        if ch.kind == kind:
            flat.extend(ch.children)
        else:
            flat.append(ch)
    if not flat:
        return _UNIT_NODE
    if len(flat) == 1:
        return flat[0]
    return Structure(kind, children=tuple(flat))


def negate(s: Structure) -> Structure:
    """De Morgan dual: par and copar swap, seq keeps its child order,
    atom polarity flips, the unit is self-dual."""
    if s.kind == UNIT:
        return s
    if s.kind == ATOM:
        return Structure(ATOM, name=s.name, negative=not s.negative)
    swapped = {PAR: COPAR, COPAR: PAR, SEQ: SEQ}[s.kind]
    return Structure(swapped, children=tuple(negate(c) for c in s.children))


def normalize(s: Structure) -> Structure:
    """Normal form: no unit below the root, no singleton delimiter, no
    same-kind delimiter directly under itself.  Child order is kept.
    Idempotent, and leaves the induced atom relations untouched."""
    if s.kind in (UNIT, ATOM):
        return s
    return compose(s.kind, (normalize(c) for c in s.children))


def canonicalize(s: Structure) -> Structure:
    """Normal form with commutative children recursively sorted.

    Two structures are equal modulo associativity, commutativity, unit
    and singleton laws exactly when they canonicalize to equal trees.
    The result is cached on the node, so re-canonicalizing shared
    subtrees is free.
    """
    if s.kind in (UNIT, ATOM):
        return s
    cached = s._canon
    if cached is not None:
        return cached
    kids = [canonicalize(c) for c in s.children]
    out = compose(s.kind, kids)
    if out.kind in (PAR, COPAR):
        srt = sorted(out.children, key=Structure.sort_key)
        if tuple(srt) != out.children:
            out = Structure(out.kind, children=tuple(srt))
    if out is not s:
        out._canon = out
    s._canon = out
    return out


class OccurrenceSet:
    """Atom occurrences of one structure.

    Occurrence ids are preorder positions (0-based) in the tree the set
    was taken from, so they are stable for a fixed presentation.
    """

    __slots__ = ("entries",)

    def __init__(self, entries):
        self.entries = list(entries)

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def __repr__(self):
        return f"OccurrenceSet({self.entries!r})"

    def labels(self) -> list[tuple[str, bool]]:
        return [(name, neg) for _, name, neg in self.entries]


def occurrences(s: Structure) -> OccurrenceSet:
    """Every atom occurrence of ``s`` as (occ_id, name, negative)."""
    entries = []
    for name, neg in s.atoms():
        entries.append((len(entries), name, neg))
    return OccurrenceSet(entries)


def distinct_pairs_check(s: Structure) -> bool:
    """True iff each atom name occurs at most once per polarity."""
    seen = set()
    for lit in s.atoms():
        if lit in seen:
            return False
        seen.add(lit)
    return True


def polarity_balance(s: Structure) -> bool:
    """True iff every name has as many positive as negative occurrences.

    A necessary condition for provability: the only rule that removes
    atoms cancels one positive and one negative occurrence of the same
    name, and proofs end at the unit.
    """
    bal: Counter = Counter()
    for name, neg in s.atoms():
        bal[name] += -1 if neg else 1
    return not any(bal.values())


def iso_key(s: Structure) -> str:
    """Identity of a canonical structure modulo renaming.

    Names are numbered by first occurrence in a left-to-right walk and
    the first occurrence of each name counts as positive, so any
    injective renaming of names (with a per-name polarity flip) maps to
    the same key.  Provability is invariant under such renamings, which
    makes this the memo key for proof search.
    """
    mapping: dict[str, tuple[int, bool]] = {}
    out: list[str] = []

    def walk(t: Structure) -> None:
        if t.kind == ATOM:
            got = mapping.get(t.name)
            if got is None:
                got = (len(mapping), t.negative)
                mapping[t.name] = got
            idx, base = got
            out.append(f"{idx}{'+' if t.negative == base else '-'}")
        elif t.kind == UNIT:
            out.append("*")
        else:
            out.append(t.kind)
            out.append("(")
            for c in t.children:
                walk(c)
                out.append(",")
            out.append(")")

    walk(s)
    return "".join(out)

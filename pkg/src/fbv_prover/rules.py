"""Deep-inference rules for BV and FBV, instance enumeration, and
derivation replay.

All rules are read bottom-up: an instance rewrites its *conclusion*
into its *premise*.  The four rules:

    oi   unit axiom, caps a finished proof
    ai   atomic interaction: a par pair of dual atoms cancels
    s    switch: a par sibling moves inside a copar, next to one block
    q    seq redistribution (BV only)

Instances address a par node anywhere in the tree (deep inference) and
record enough detail to be replayed.  Premises are always returned in
canonical form.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Iterator, Optional

from .structure import (ATOM, COPAR, PAR, SEQ, UNIT, Structure,
                        canonicalize, compose, unit)


class RuleName(Enum):
    O_DOWN = "oi"
    AI_DOWN = "ai"
    SWITCH = "s"
    Q_DOWN = "q"

    @property
    def token(self) -> str:
        return self.value


FBV_RULES = frozenset({RuleName.O_DOWN, RuleName.AI_DOWN, RuleName.SWITCH})
BV_RULES = FBV_RULES | {RuleName.Q_DOWN}


class StaleInstance(ValueError):
    """Instance applied to a structure it was not enumerated on."""


@dataclass(frozen=True)
class RuleInstance:
    """One rewrite step: ``conclusion`` at ``position`` becomes
    ``premise``.  ``position`` is the child-index path of the par node
    the rule works at; ``detail`` is rule specific."""

    rule: RuleName
    conclusion: Structure
    premise: Structure
    position: tuple = ()
    detail: tuple = ()

    def __repr__(self):
        return (f"RuleInstance({self.rule.token} "
                f"{self.conclusion.text()} <- {self.premise.text()})")


@dataclass
class Derivation:
    """Bottom-up chain of instances; ``steps[0]`` applies to
    ``conclusion``, each later step to the previous premise."""

    conclusion: Structure
    steps: list = field(default_factory=list)

    @property
    def premise(self) -> Structure:
        if self.steps:
            return self.steps[-1].premise
        return self.conclusion

    @property
    def is_proof(self) -> bool:
        return (bool(self.steps)
                and self.steps[-1].rule is RuleName.O_DOWN
                and self.steps[-1].premise.kind == UNIT)

    def rule_counts(self) -> dict[str, int]:
        out: dict[str, int] = {}
        for st in self.steps:
            out[st.rule.token] = out.get(st.rule.token, 0) + 1
        return out

    def __len__(self):
        return len(self.steps)


def o_down_instance(s: Structure) -> RuleInstance:
    """The axiom step; only the unit admits it."""
    if canonicalize(s).kind != UNIT:
        raise StaleInstance("the unit axiom applies to the unit only")
    return RuleInstance(RuleName.O_DOWN, s, unit())


# ---------------------------------------------------------------------
# Node addressing helpers.
# ---------------------------------------------------------------------

def _walk_nodes(s: Structure):
    """Yield (position, node, occurrence offset) preorder; the offset is
    the preorder atom index where the node's occurrences start."""
    def rec(t, pos, off):
        yield pos, t, off
        if t.kind not in (ATOM, UNIT):
            for i, c in enumerate(t.children):
                yield from rec(c, pos + (i,), off)
                off += c.size()
    yield from rec(s, (), 0)


def replace_at(s: Structure, pos: tuple, new: Structure) -> Structure:
    if not pos:
        return new
    i = pos[0]
    kids = list(s.children)
    kids[i] = replace_at(kids[i], pos[1:], new)
    return Structure(s.kind, children=tuple(kids))


# ---------------------------------------------------------------------
# ai: atomic interaction.
# ---------------------------------------------------------------------

def enumerate_ai_down(s: Structure) -> list[RuleInstance]:
    """All cancellations of a dual atom pair sitting under a common par
    node.  One instance per unordered occurrence pair; ``detail``
    carries the two preorder occurrence ids."""
    out = []
    for pos, node, off in _walk_nodes(s):
        if node.kind != PAR:
            continue
        atoms = []
        coff = off
        for i, c in enumerate(node.children):
            if c.kind == ATOM:
                atoms.append((i, coff, c))
            coff += c.size()
        for x in range(len(atoms)):
            i, oi, a = atoms[x]
            for y in range(x + 1, len(atoms)):
                j, oj, b = atoms[y]
                if a.name == b.name and a.negative != b.negative:
                    rest = [c for k, c in enumerate(node.children)
                            if k != i and k != j]
                    prem = canonicalize(
                        replace_at(s, pos, compose(PAR, rest)))
                    out.append(RuleInstance(RuleName.AI_DOWN, s, prem,
                                            pos, (oi, oj)))
    return out


# ---------------------------------------------------------------------
# switch.
# ---------------------------------------------------------------------

def _submasks(n: int):
    return range(1, 1 << n)


def enumerate_switch(s: Structure) -> list[RuleInstance]:
    """All switch instances, deep.

    At a par node with a copar child, a selection works like this: the
    copar children split into a moved block and a kept block (every
    ordered split), a nonempty submultiset of the par's other children
    is pulled next to the moved block, and when more than one other
    child exists each selection is emitted under both sibling
    groupings, so the count for such a node is

        ordered splits x selections x 2.

    ``detail`` is (moved, kept, selected, orientation) with the blocks
    as tuples of child structures.  The two orientations share one
    premise; they differ only as selections.
    """
    out = []
    for pos, node, _ in _walk_nodes(s):
        if node.kind != PAR:
            continue
        ch = node.children
        for ci, c in enumerate(ch):
            if c.kind != COPAR:
                continue
            others = [x for k, x in enumerate(ch) if k != ci]
            w = len(others)
            orients = (0, 1) if w >= 2 else (0,)
            cch = c.children
            m = len(cch)
            for rmask in range(1, (1 << m) - 1):
                moved = tuple(cch[k] for k in range(m) if rmask >> k & 1)
                kept = tuple(cch[k] for k in range(m) if not rmask >> k & 1)
                # a multi-child moved part enters the premise par as one
                # copar block, not spread out
                moved_block = compose(COPAR, moved)
                for tmask in _submasks(w):
                    sel = tuple(others[k] for k in range(w) if tmask >> k & 1)
                    left = [others[k] for k in range(w)
                            if not tmask >> k & 1]
                    inner = compose(PAR, (moved_block,) + sel)
                    new_cop = compose(COPAR, (inner,) + kept)
                    prem = canonicalize(
                        replace_at(s, pos, compose(PAR, [new_cop] + left)))
                    for ori in orients:
                        out.append(RuleInstance(
                            RuleName.SWITCH, s, prem, pos,
                            (moved, kept, sel, ori)))
    return out


def is_interaction(inst: RuleInstance) -> bool:
    """Interaction switch: the moved copar block holds a dual of some
    atom in the selected par siblings."""
    if inst.rule is not RuleName.SWITCH:
        return False
    moved, _, sel, _ = inst.detail
    moved_lits = frozenset().union(*(x.literals() for x in moved))
    for x in sel:
        for name, neg in x.literals():
            if (name, not neg) in moved_lits:
                return True
    return False


def is_lazy_interaction(inst: RuleInstance) -> bool:
    """Interaction switch whose selection is a single sibling (the
    pulled-in structure is never a proper par)."""
    if not is_interaction(inst):
        return False
    return len(inst.detail[2]) == 1


def is_pruned(inst: RuleInstance) -> bool:
    """Pruned switch: the kept copar block shares no literal with the
    selected siblings."""
    if inst.rule is not RuleName.SWITCH:
        return False
    _, kept, sel, _ = inst.detail
    kept_lits = frozenset().union(*(x.literals() for x in kept)) \
        if kept else frozenset()
    sel_lits = frozenset().union(*(x.literals() for x in sel))
    return not (kept_lits & sel_lits)


# ---------------------------------------------------------------------
# q: seq redistribution (BV).
# ---------------------------------------------------------------------

def _seq_splits(x: Structure):
    """Readings of a child as a two-block seq <front; back>."""
    if x.kind == SEQ:
        ch = x.children
        return [(compose(SEQ, ch[:i]), compose(SEQ, ch[i:]))
                for i in range(len(ch) + 1)]
    return [(x, unit()), (unit(), x)]


def enumerate_q_down(s: Structure) -> list[RuleInstance]:
    """All seq-redistribution instances, deep.

    Two distinct children of a par node are read as two-block seqs
    <R;R2> and <T;T2> (blocks may be the unit); the premise replaces
    them with <[R,T];[R2,T2]>.  Instances whose premise equals the
    conclusion are dropped, and distinct selections with the same local
    premise are merged.  ``detail`` is the four blocks (R, R2, T, T2).
    """
    out = []
    for pos, node, _ in _walk_nodes(s):
        if node.kind != PAR:
            continue
        ch = node.children
        n = len(ch)
        seen: set[str] = set()
        for i in range(n):
            for j in range(n):
                if i == j:
                    continue
                rest = [ch[k] for k in range(n) if k not in (i, j)]
                for r1, r2 in _seq_splits(ch[i]):
                    for t1, t2 in _seq_splits(ch[j]):
                        merged = compose(SEQ, (compose(PAR, (r1, t1)),
                                               compose(PAR, (r2, t2))))
                        prem = canonicalize(
                            replace_at(s, pos,
                                        compose(PAR, [merged] + rest)))
                        if prem == canonicalize(s):
                            continue
                        key = prem.text()
                        if key in seen:
                            continue
                        seen.add(key)
                        out.append(RuleInstance(RuleName.Q_DOWN, s, prem,
                                                pos, (r1, r2, t1, t2)))
    return out


def apply_instance(inst: RuleInstance, conclusion: Optional[Structure] = None
                   ) -> Structure:
    """Premise of ``inst``; checks the instance still matches the
    conclusion it claims (pass ``conclusion`` to revalidate against a
    different presentation)."""
    if conclusion is not None and \
            canonicalize(conclusion) != canonicalize(inst.conclusion):
        raise StaleInstance("instance does not match this conclusion")
    return inst.premise


_ENUMERATORS = {
    RuleName.AI_DOWN: enumerate_ai_down,
    RuleName.SWITCH: enumerate_switch,
    RuleName.Q_DOWN: enumerate_q_down,
}


def enumerate_rule(s: Structure, rule: RuleName) -> list[RuleInstance]:
    if rule is RuleName.O_DOWN:
        return ([o_down_instance(s)]
                if canonicalize(s).kind == UNIT else [])
    return _ENUMERATORS[rule](s)


def check_derivation(d: Derivation, system: frozenset = FBV_RULES) -> bool:
    """Replay validation: every step's rule belongs to the system, every
    step is reproducible by enumeration on its own conclusion, and the
    chain links up modulo canonical form."""
    prev = canonicalize(d.conclusion)
    for st in d.steps:
        if st.rule not in system:
            return False
        if canonicalize(st.conclusion) != prev:
            return False
        if st.rule is RuleName.O_DOWN:
            if prev.kind != UNIT or st.premise.kind != UNIT:
                return False
            prev = canonicalize(st.premise)
            continue
        want = canonicalize(st.premise)
        found = any(canonicalize(cand.premise) == want
                    for cand in enumerate_rule(st.conclusion, st.rule))
        if not found:
            return False
        prev = want
    return True


# ---------------------------------------------------------------------
# Fast premise generators for the search engine.  Same rewrites as the
# instance enumerators above (the test suite checks they agree), minus
# the instance-object overhead.
# ---------------------------------------------------------------------

def iter_ai_premises(s: Structure) -> Iterator[Structure]:
    if s.kind not in (PAR, COPAR, SEQ):
        return
    ch = s.children
    if s.kind == PAR:
        atoms = [(i, c) for i, c in enumerate(ch) if c.kind == ATOM]
        for x in range(len(atoms)):
            i, a = atoms[x]
            for y in range(x + 1, len(atoms)):
                j, b = atoms[y]
                if a.name == b.name and a.negative != b.negative:
                    rest = [c for k, c in enumerate(ch) if k != i and k != j]
                    yield canonicalize(compose(PAR, rest))
    for i, c in enumerate(ch):
        for prem in iter_ai_premises(c):
            yield canonicalize(
                compose(s.kind, ch[:i] + (prem,) + ch[i + 1:]))


def iter_switch_premises(s: Structure, predicate=None) -> Iterator[Structure]:
    """Distinct switch premises; ``predicate`` (on the blocks
    ``(moved, kept, selected)``) filters selections before the premise
    is built."""
    if s.kind not in (PAR, COPAR, SEQ):
        return
    ch = s.children
    if s.kind == PAR:
        emitted = set()
        for ci, c in enumerate(ch):
            if c.kind != COPAR:
                continue
            others = [x for k, x in enumerate(ch) if k != ci]
            w = len(others)
            cch = c.children
            m = len(cch)
            for rmask in range(1, (1 << m) - 1):
                moved = tuple(cch[k] for k in range(m) if rmask >> k & 1)
                kept = tuple(cch[k] for k in range(m)
                             if not rmask >> k & 1)
                moved_block = compose(COPAR, moved)
                for tmask in _submasks(w):
                    sel = tuple(others[k] for k in range(w)
                                if tmask >> k & 1)
                    if predicate is not None and \
                            not predicate(moved, kept, sel):
                        continue
                    left = [others[k] for k in range(w)
                            if not tmask >> k & 1]
                    inner = compose(PAR, (moved_block,) + sel)
                    new_cop = compose(COPAR, (inner,) + kept)
                    prem = canonicalize(compose(PAR, [new_cop] + left))
                    key = prem.text()
                    if key not in emitted:
                        emitted.add(key)
                        yield prem
    for i, c in enumerate(ch):
        for prem in iter_switch_premises(c, predicate):
            yield canonicalize(
                compose(s.kind, ch[:i] + (prem,) + ch[i + 1:]))


def iter_q_premises(s: Structure) -> Iterator[Structure]:
    if s.kind not in (PAR, COPAR, SEQ):
        return
    ch = s.children
    if s.kind == PAR:
        base = canonicalize(s)
        emitted = set()
        n = len(ch)
        for i in range(n):
            for j in range(n):
                if i == j:
                    continue
                rest = [ch[k] for k in range(n) if k not in (i, j)]
                for r1, r2 in _seq_splits(ch[i]):
                    for t1, t2 in _seq_splits(ch[j]):
                        merged = compose(SEQ, (compose(PAR, (r1, t1)),
                                               compose(PAR, (r2, t2))))
                        prem = canonicalize(compose(PAR, [merged] + rest))
                        if prem == base:
                            continue
                        key = prem.text()
                        if key not in emitted:
                            emitted.add(key)
                            yield prem
    for i, c in enumerate(ch):
        for prem in iter_q_premises(c):
            yield canonicalize(
                compose(s.kind, ch[:i] + (prem,) + ch[i + 1:]))


def switch_block_predicate(mode: str):
    """Block-level side conditions for the pruned search modes: ``is``,
    ``lis``, ``ps`` (or None for unrestricted)."""
    if mode in (None, "none"):
        return None

    def lits(blocks):
        out = set()
        for x in blocks:
            out |= x.literals()
        return out

    if mode == "is":
        def pred(moved, kept, sel):
            sl = lits(sel)
            return any((name, not neg) in sl for name, neg in lits(moved))
        return pred
    if mode == "lis":
        def pred(moved, kept, sel):
            if len(sel) != 1:
                return False
            sl = lits(sel)
            return any((name, not neg) in sl for name, neg in lits(moved))
        return pred
    if mode == "ps":
        def pred(moved, kept, sel):
            return not (lits(kept) & lits(sel))
        return pred
    raise ValueError(f"unknown pruning mode {mode!r}")

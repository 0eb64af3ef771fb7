"""Guided proof construction for flat structures with pairwise
distinct atom pairs.

The guide is the incoherence number of a dual atom pair: how far apart
the two atoms sit, measured through the copar blocks that separate
them.  Pairs at distance zero cancel immediately; distance one is one
switch away; for larger distances the pair with the smallest distance
picks a switch that pulls its two sides together, skipping (and
thereby "forgetting") the blocks in between.  Two cheap web checks run
before every step: every atom needs a par-related dual, and no two
dual pairs may sit in the forbidden crossed-square configuration.  A
structure failing either check is not provable; if the guided walk
ever gets stuck instead, that also certifies unprovability (this last
part is conjectural, so the package ships an exhaustive-search
cross-check and a counterexample log).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import inf
from typing import Optional, Union

from . import kernels
from .relweb import c1_check, c2_check, web_of
from .rules import (Derivation, RuleInstance, RuleName, o_down_instance,
                    replace_at)
from .structure import (ATOM, COPAR, PAR, UNIT, Structure, canonicalize,
                        compose, distinct_pairs_check, unit)

INFINITE = inf

IncValue = Union[int, float]


class FlatOnly(ValueError):
    """Incoherence numbers are defined for flat structures only."""


class PreconditionViolated(ValueError):
    """Input outside the strategy's domain."""


class DeadEnd(RuntimeError):
    """No guided step applies; under the guiding conjecture this means
    the structure was never provable."""


# ---------------------------------------------------------------------
# Incoherence numbers.
# ---------------------------------------------------------------------

def _require_flat(s: Structure) -> None:
    if not s.is_flat():
        raise FlatOnly("structure contains a seq")


@lru_cache(maxsize=512)
def _occ_paths(s: Structure) -> tuple[tuple, ...]:
    """Preorder occurrence id -> child-index path of the atom."""
    paths = []

    def rec(t, pos):
        if t.kind == ATOM:
            paths.append(pos)
        elif t.kind != UNIT:
            for i, c in enumerate(t.children):
                rec(c, pos + (i,))

    rec(s, ())
    return tuple(paths)


def _node_at(s: Structure, pos: tuple) -> Structure:
    for i in pos:
        s = s.children[i]
    return s


def _skip_weights(s: Structure, path: tuple, lca_len: int,
                  unit_blocks: bool) -> IncValue:
    """Total weight of the copar blocks skipped while descending from
    the branch below the meeting par node down to the atom.  Each
    skipped block weighs 1 when ``unit_blocks`` (coherence-modulo
    count) or its occurrence count otherwise."""
    total = 0
    node = _node_at(s, path[:lca_len])
    for idx in path[lca_len:]:
        if node.kind == COPAR:
            if unit_blocks:
                total += 1
            else:
                total += node.size() - node.children[idx].size()
        node = node.children[idx]
    return total


def _pair_value(s: Structure, a: int, b: int, paths, unit_blocks: bool
                ) -> IncValue:
    pa, pb = paths[a], paths[b]
    k = 0
    while k < len(pa) and k < len(pb) and pa[k] == pb[k]:
        k += 1
    lca = _node_at(s, pa[:k])
    if lca.kind == COPAR:
        return INFINITE
    if lca.kind != PAR:
        raise FlatOnly("structure contains a seq")
    return (_skip_weights(s, pa, k, unit_blocks)
            + _skip_weights(s, pb, k, unit_blocks))


def ainc(s: Structure, a: int, b: int) -> IncValue:
    """Incoherence number of occurrences ``a``, ``b`` (counting form):
    the number of other occurrences related to one of them by par and
    to the other by copar; infinite for copar-related pairs."""
    _require_flat(s)
    w = web_of(s)
    if w.matrix[a, b] & kernels.CP:
        return INFINITE
    return kernels.ainc_count(w.matrix, a, b)


def ainc_recursive(s: Structure, a: int, b: int) -> IncValue:
    """Recursive form of `ainc`: skipped copar blocks weigh their
    occurrence counts.  Agrees with the counting form everywhere."""
    _require_flat(s)
    return _pair_value(s, a, b, _occ_paths(s), unit_blocks=False)


def inc(s: Structure, a: int, b: int) -> IncValue:
    """Incoherence number modulo coherence: like `ainc_recursive` but
    every skipped copar block weighs 1 regardless of its size."""
    _require_flat(s)
    return _pair_value(s, a, b, _occ_paths(s), unit_blocks=True)


@dataclass
class IncTable:
    """Incoherence number modulo coherence per dual atom pair, keyed by
    atom name."""

    values: dict[str, IncValue]

    @property
    def min_value(self) -> IncValue:
        return min(self.values.values())

    @property
    def argmin(self) -> str:
        best = self.min_value
        return min(n for n, v in self.values.items() if v == best)


def inc_table(s: Structure) -> IncTable:
    """Table of modulo-coherence values for every dual pair of ``s``.

    Requires a flat structure with pairwise distinct atom pairs in
    which every atom has its dual present.
    """
    _require_flat(s)
    if not distinct_pairs_check(s):
        raise PreconditionViolated("atom pairs must be pairwise distinct")
    ids: dict[tuple[str, bool], int] = {}
    for i, lit in enumerate(s.atoms()):
        ids[lit] = i
    names = {name for name, _ in ids}
    paths = _occ_paths(s)
    values = {}
    for name in sorted(names):
        pos = ids.get((name, False))
        neg = ids.get((name, True))
        if pos is None or neg is None:
            raise PreconditionViolated(f"atom {name!r} lacks its dual")
        values[name] = _pair_value(s, pos, neg, paths, unit_blocks=True)
    return IncTable(values)


# ---------------------------------------------------------------------
# Step selection.
# ---------------------------------------------------------------------

def _branches(s: Structure, name: str):
    """Meeting par node of the dual pair ``name`` plus the two branch
    children hosting the positive and negative occurrence."""
    paths = {}
    occ_ids = {}
    occ_paths = _occ_paths(s)
    for i, lit in enumerate(s.atoms()):
        if lit[0] == name:
            paths[lit[1]] = occ_paths[i]
            occ_ids[lit[1]] = i
    pa, pb = paths[False], paths[True]
    k = 0
    while k < len(pa) and k < len(pb) and pa[k] == pb[k]:
        k += 1
    return pa[:k], pa[k], pb[k], occ_ids[False], occ_ids[True]


def _hosting_split(cop: Structure, branch_idx: int):
    """Split a copar into (child hosting the atom, other children)."""
    host = cop.children[branch_idx]
    rest = tuple(c for i, c in enumerate(cop.children) if i != branch_idx)
    return host, rest


def _switch_instance(s: Structure, lca_path: tuple, opened_idx: int,
                     moved: Structure, kept: tuple,
                     pulled_idx: int) -> RuleInstance:
    """Build the switch instance that opens the copar child
    ``opened_idx`` of the par at ``lca_path``, moving ``moved`` next to
    the pulled-in sibling."""
    node = _node_at(s, lca_path)
    pulled = node.children[pulled_idx]
    inner = compose(PAR, (moved, pulled))
    new_cop = compose(COPAR, (inner,) + kept)
    rest = [c for i, c in enumerate(node.children)
            if i not in (opened_idx, pulled_idx)]
    prem = canonicalize(replace_at(s, lca_path, compose(PAR, [new_cop] + rest)))
    return RuleInstance(RuleName.SWITCH, s, prem, lca_path,
                        ((moved,), kept, (pulled,), 0))


def step(s: Structure) -> tuple[list[RuleInstance], Structure]:
    """One guided step on a canonical structure that already passed the
    two web checks.  Returns the emitted instances (always one) and the
    canonical next structure; raises `DeadEnd` when no case applies."""
    table = inc_table(s)
    name = table.argmin
    m = table.values[name]
    lca_path, ia, ib, occ_pos, occ_neg = _branches(s, name)
    node = _node_at(s, lca_path)
    c_pos, c_neg = node.children[ia], node.children[ib]

    if m == 0:
        rest = [c for i, c in enumerate(node.children) if i not in (ia, ib)]
        prem = canonicalize(replace_at(s, lca_path, compose(PAR, rest)))
        inst = RuleInstance(RuleName.AI_DOWN, s, prem, lca_path,
                            (occ_pos, occ_neg))
        return [inst], prem

    def locate(cop: Structure, neg: bool) -> int:
        for i, c in enumerate(cop.children):
            if (name, neg) in c.literals():
                return i
        raise DeadEnd(f"pair {name!r} lost inside {cop.text()}")

    if c_pos.kind == ATOM and c_neg.kind == COPAR:
        host, rest = _hosting_split(c_neg, locate(c_neg, True))
        inst = _switch_instance(s, lca_path, ib, host, rest, ia)
        return [inst], inst.premise
    if c_neg.kind == ATOM and c_pos.kind == COPAR:
        host, rest = _hosting_split(c_pos, locate(c_pos, False))
        inst = _switch_instance(s, lca_path, ia, host, rest, ib)
        return [inst], inst.premise
    if c_pos.kind != COPAR or c_neg.kind != COPAR:
        raise DeadEnd(f"pair {name!r} does not meet at usable blocks")

    r_a, x_blocks = _hosting_split(c_pos, locate(c_pos, False))
    r_b, y_blocks = _hosting_split(c_neg, locate(c_neg, True))
    r_trivial = r_a.kind == ATOM
    t_trivial = r_b.kind == ATOM

    def duals_hit(block: Structure, others: tuple) -> bool:
        lits = frozenset().union(
            *(o.literals() for o in others)) if others else frozenset()
        return any((n, not neg) in lits for n, neg in block.literals())

    if r_trivial and t_trivial:
        inst = _switch_instance(s, lca_path, ia, r_a, x_blocks, ib)
        return [inst], inst.premise
    if r_trivial:
        inst = _switch_instance(s, lca_path, ib, r_b, y_blocks, ia)
        return [inst], inst.premise
    if t_trivial:
        inst = _switch_instance(s, lca_path, ia, r_a, x_blocks, ib)
        return [inst], inst.premise
    if not duals_hit(r_a, y_blocks):
        inst = _switch_instance(s, lca_path, ib, r_b, y_blocks, ia)
        return [inst], inst.premise
    if not duals_hit(r_b, x_blocks):
        inst = _switch_instance(s, lca_path, ia, r_a, x_blocks, ib)
        return [inst], inst.premise
    raise DeadEnd(f"both blocks of pair {name!r} are entangled")


# ---------------------------------------------------------------------
# The outer loop.
# ---------------------------------------------------------------------

@dataclass
class Provable:
    derivation: Derivation


@dataclass
class NotProvable:
    reason: str                 # "c1", "c2" or "dead-end"
    witness: object = None


@dataclass
class Inconclusive:
    diagnostic: str
    detail: object = None


StrategyOutcome = Union[Provable, NotProvable, Inconclusive]


def prove_strategy(s: Structure,
                   counterexample_log: Optional[str] = None,
                   max_steps: Optional[int] = None) -> StrategyOutcome:
    """Run the guided construction on ``s``.

    Inputs outside the method's domain (seq structures, repeated atom
    pairs) give Inconclusive with a precondition diagnostic.  The two
    web checks run before every step; a violation is a definite
    NotProvable.  A stuck step reports NotProvable("dead-end"), the
    conjectural case.  The iteration budget is 2 * size^2; exceeding it
    returns Inconclusive and appends the input to the counterexample
    log, as does a dead end (cheap refutation material)."""
    current = canonicalize(s)
    if not current.is_flat():
        return Inconclusive("precondition-violated",
                            "structure is not flat")
    if not distinct_pairs_check(current):
        return Inconclusive("precondition-violated",
                            "atom pairs are not pairwise distinct")

    def dump(structure):
        if counterexample_log:
            with open(counterexample_log, "a", encoding="utf-8") as fh:
                fh.write(canonicalize(structure).text() + "\n")

    steps: list[RuleInstance] = []
    budget = max_steps if max_steps else max(1, 2 * current.size() ** 2)
    for _ in range(budget + 1):
        if current.kind == UNIT:
            steps.append(o_down_instance(unit()))
            return Provable(Derivation(canonicalize(s), steps))
        witness = c1_check(current)
        if witness is not None:
            return NotProvable("c1", witness)
        square = c2_check(current)
        if square is not None:
            return NotProvable("c2", square)
        try:
            emitted, current = step(current)
        except DeadEnd as stuck:
            dump(s)
            return NotProvable("dead-end", str(stuck))
        steps.extend(emitted)
    dump(s)
    return Inconclusive("iteration-budget-exceeded", budget)

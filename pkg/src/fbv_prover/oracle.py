"""Exhaustive bottom-up proof search for FBV and BV.

Ground truth for everything else in the package: a memoized
depth-first search over the rule premises, finding a proof exactly
when one exists (within the configured limits).  Three design points
keep worst cases tractable:

  * goals are memoized by their identity modulo atom renaming
    (provability is invariant under injective renamings);
  * copar and seq goals split into independent component goals, since
    a copar or seq is provable exactly when every component is (no
    rule instance ever spans two components);
  * goals whose positive and negative occurrence counts differ for
    some name are rejected outright: the only atom-removing rule
    cancels one occurrence of each polarity and proofs end at the
    unit.

Optional pruning modes restrict which switch instances the search
follows (``is``, ``lis``, ``ps``); the first two preserve provability
on all inputs, the last only on structures with pairwise distinct atom
pairs.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Optional

from .rules import (Derivation, RuleName, enumerate_rule,
                    iter_ai_premises, iter_q_premises, iter_switch_premises,
                    o_down_instance, switch_block_predicate)
from .structure import (ATOM, COPAR, PAR, SEQ, UNIT, Structure, canonicalize,
                        compose, iso_key, polarity_balance, unit)


class LimitExceeded(RuntimeError):
    """Search hit max_visited or max_depth before reaching a verdict."""

    def __init__(self, message, stats=None):
        super().__init__(message)
        self.stats = stats


class NotApplicable(ValueError):
    """Spot-check precondition failed."""


PRUNING_MODES = (None, "none", "is", "lis", "ps")


@dataclass(frozen=True)
class SearchConfig:
    system: str = "fbv"                 # "fbv" or "bv"
    pruning: Optional[str] = None       # None/"none", "is", "lis", "ps"
    max_visited: int = 1_000_000
    max_depth: int = 10_000

    def __post_init__(self):
        if self.system not in ("fbv", "bv"):
            raise ValueError(f"unknown system {self.system!r}")
        if self.pruning not in PRUNING_MODES:
            raise ValueError(f"unknown pruning mode {self.pruning!r}")
        if self.pruning not in (None, "none") and self.system != "fbv":
            raise ValueError("pruned search is defined for fbv only")


@dataclass
class SearchStats:
    visited: int = 0            # goals expanded in this call
    expanded: int = 0           # premises generated in this call
    proof_length: Optional[int] = None

    def as_dict(self):
        out = {"visited": self.visited, "expanded": self.expanded}
        if self.proof_length is not None:
            out["proof_length"] = self.proof_length
        return out


def name_components(goal: Structure) -> Optional[list[Structure]]:
    """Split a par goal into children groups sharing no atom names.

    Erasing every occurrence of one group's names maps each rule
    instance on the whole to an instance (or a trivial step) on the
    rest, so the groups are provable independently; the converse is
    proof composition in context.  Returns None when the goal is one
    connected group.
    """
    ch = goal.children
    parent = list(range(len(ch)))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    owner: dict[str, int] = {}
    for i, c in enumerate(ch):
        for name, _ in c.literals():
            j = owner.setdefault(name, i)
            if j != i:
                parent[find(i)] = find(j)
    groups: dict[int, list[Structure]] = {}
    for i, c in enumerate(ch):
        groups.setdefault(find(i), []).append(c)
    if len(groups) <= 1:
        return None
    parts = [compose(PAR, kids) for kids in groups.values()]
    # small parts first: a cheap unprovable part short-circuits the rest
    parts.sort(key=Structure.size)
    return parts


class Searcher:
    """Reusable search engine; one instance owns one memo table.

    Verdicts cached in the memo are valid for the engine's config only,
    so keep one Searcher per (system, pruning) combination.  Sharing an
    engine across many queries lets later queries reuse earlier
    subresults.
    """

    def __init__(self, config: SearchConfig = SearchConfig()):
        self.config = config
        self.memo: dict[str, bool] = {}
        self._pred = switch_block_predicate(config.pruning)

    # -- premise generation -------------------------------------------

    def _premises(self, goal: Structure) -> Iterator[Structure]:
        yield from iter_ai_premises(goal)
        yield from iter_switch_premises(goal, self._pred)
        if self.config.system == "bv":
            yield from iter_q_premises(goal)

    # -- verdicts ------------------------------------------------------

    def provable(self, s: Structure, stats: Optional[SearchStats] = None
                 ) -> bool:
        """Provability verdict for ``s`` (canonicalized internally)."""
        if stats is None:
            stats = SearchStats()
        goal = canonicalize(s)
        # names must balance for a proof to exist; rewrites preserve the
        # property and name components inherit it, so the check runs
        # once per query
        if goal.kind != UNIT and not polarity_balance(goal):
            return False
        return self._prove(goal, stats, 0)

    def _prove(self, goal: Structure, stats: SearchStats, depth: int) -> bool:
        if depth > self.config.max_depth:
            raise LimitExceeded("max_depth reached", stats)
        if goal.kind == UNIT:
            return True
        if goal.kind == ATOM:
            return False
        if goal.kind in (COPAR, SEQ):
            # children start fresh name accounts, unlike rewrites and
            # name components which inherit the root's balance
            return all(polarity_balance(c) and self._prove(c, stats,
                                                           depth + 1)
                       for c in goal.children)
        root_key = iso_key(goal)
        hit = self.memo.get(root_key)
        if hit is not None:
            return hit
        parts = name_components(goal)
        if parts is not None:
            verdict = all(self._prove(p, stats, depth + 1) for p in parts)
            self.memo[root_key] = verdict
            return verdict
        seen = {root_key}
        stack = [goal]
        found = False
        while stack and not found:
            cur = stack.pop()
            stats.visited += 1
            if stats.visited > self.config.max_visited:
                raise LimitExceeded("max_visited reached", stats)
            opened: list[Structure] = []
            for prem in self._premises(cur):
                stats.expanded += 1
                if self._settle(prem, seen, opened, stats, depth):
                    found = True
                    break
            # LIFO stack: push in reverse so earlier premises pop first
            stack.extend(reversed(opened))
        if found:
            self.memo[root_key] = True
            return True
        for k in seen:
            self.memo[k] = False
        return False

    def _settle(self, prem, seen, opened, stats, depth) -> bool:
        """True if the premise is already known provable; otherwise
        schedule it (par goals) or resolve it (everything else)."""
        if prem.kind == UNIT:
            return True
        if prem.kind == ATOM:
            return False
        if prem.kind in (COPAR, SEQ):
            return all(polarity_balance(c) and self._prove(c, stats,
                                                           depth + 1)
                       for c in prem.children)
        key = iso_key(prem)
        hit = self.memo.get(key)
        if hit is not None:
            return hit
        parts = name_components(prem)
        if parts is not None:
            verdict = all(self._prove(p, stats, depth + 1) for p in parts)
            self.memo[key] = verdict
            return verdict
        if key not in seen:
            seen.add(key)
            opened.append(prem)
        return False

    # -- proof construction -------------------------------------------

    def proof_steps(self, s: Structure, stats: Optional[SearchStats] = None,
                    _busy: Optional[set] = None) -> Optional[list]:
        """Rewrite chain from canonicalize(s) down to the unit as
        (rule, conclusion, premise) triples, or None if unprovable."""
        if stats is None:
            stats = SearchStats()
        goal = canonicalize(s)
        busy = _busy if _busy is not None else set()
        return self._steps(goal, stats, busy, 0)

    def _steps(self, goal, stats, busy, depth):
        if depth > self.config.max_depth:
            raise LimitExceeded("max_depth reached", stats)
        if goal.kind == UNIT:
            return []
        if goal.kind == ATOM:
            return None
        if goal.kind in (COPAR, SEQ):
            return self._stitch_steps(goal.kind, list(goal.children),
                                      stats, busy, depth)
        if not polarity_balance(goal):
            return None
        root_key = iso_key(goal)
        if self.memo.get(root_key) is False:
            return None
        parts = name_components(goal)
        if parts is not None:
            return self._stitch_steps(PAR, parts, stats, busy, depth)
        # path-tracking DFS; memo-true frontier nodes recurse
        parents: dict[str, tuple] = {root_key: None}
        stack = [goal]
        seen = {root_key}
        tail: Optional[tuple] = None   # (structure, steps-to-unit)
        while stack and tail is None:
            cur = stack.pop()
            cur_key = iso_key(cur)
            stats.visited += 1
            if stats.visited > self.config.max_visited:
                raise LimitExceeded("max_visited reached", stats)
            opened: list[Structure] = []
            for rule, prem in self._tagged_premises(cur):
                stats.expanded += 1
                res = self._steps_terminal(prem, stats, busy, depth)
                if res == "open":
                    key = iso_key(prem)
                    if key not in seen:
                        seen.add(key)
                        parents[key] = (cur_key, cur, rule, prem)
                        opened.append(prem)
                    continue
                if res is not None:
                    parents[iso_key(prem)] = (cur_key, cur, rule, prem)
                    tail = (prem, res)
                    break
            stack.extend(reversed(opened))
        if tail is None:
            if self.memo.get(root_key) is None:
                for k in seen:
                    self.memo.setdefault(k, False)
            return None
        # walk parents back to the root
        chain = []
        node, extra = tail
        key = iso_key(node)
        while parents[key] is not None:
            parent_key, parent, rule, prem = parents[key]
            chain.append((rule, parent, prem))
            key = parent_key
        chain.reverse()
        for rule, parent, prem in chain:
            self.memo[iso_key(parent)] = True
        return chain + extra

    def _tagged_premises(self, goal):
        for prem in iter_ai_premises(goal):
            yield RuleName.AI_DOWN, prem
        for prem in iter_switch_premises(goal, self._pred):
            yield RuleName.SWITCH, prem
        if self.config.system == "bv":
            for prem in iter_q_premises(goal):
                yield RuleName.Q_DOWN, prem

    def _steps_terminal(self, prem, stats, busy, depth):
        """Steps from ``prem`` to the unit if it resolves without more
        par search ("open" when it must be scheduled, None when dead)."""
        if prem.kind == UNIT:
            return []
        if prem.kind == ATOM:
            return None
        if prem.kind in (COPAR, SEQ):
            return self._stitch_steps(prem.kind, list(prem.children),
                                      stats, busy, depth)
        if not polarity_balance(prem):
            return None
        parts = name_components(prem)
        if parts is not None:
            return self._stitch_steps(PAR, parts, stats, busy, depth)
        key = iso_key(prem)
        hit = self.memo.get(key)
        if hit is False:
            return None
        if hit is True and key not in busy:
            busy.add(key)
            try:
                sub = self._steps(prem, stats, busy, depth + 1)
            finally:
                busy.discard(key)
            return sub if sub is not None else "open"
        return "open"

    def _stitch_steps(self, kind, parts, stats, busy, depth):
        """Stitch proofs of independent parts (copar/seq children, or
        name-disjoint par groups): resolve the parts one at a time
        inside the remaining context."""
        parts = list(parts)
        steps = []
        current = canonicalize(compose(kind, parts))
        for i in range(len(parts)):
            sub = self._steps(parts[i], stats, busy, depth + 1)
            if sub is None:
                return None
            for rule, conc, prem in sub:
                rebuilt = canonicalize(
                    compose(kind,
                            [prem if k == i else
                             (parts[k] if k > i else unit())
                             for k in range(len(parts))]))
                steps.append((rule, current, rebuilt))
                current = rebuilt
                parts[i] = prem
        return steps


def _steps_to_derivation(s: Structure, triples) -> Derivation:
    """Turn (rule, conclusion, premise) triples into enumerated
    instances, then cap with the axiom."""
    steps = []
    for rule, conc, prem in triples:
        want = canonicalize(prem)
        inst = next((cand for cand in enumerate_rule(conc, rule)
                     if canonicalize(cand.premise) == want), None)
        if inst is None:
            raise RuntimeError(
                f"internal: step {rule.token} on {conc.text()} "
                f"-> {prem.text()} is not an enumerable instance")
        steps.append(inst)
    steps.append(o_down_instance(unit()))
    return Derivation(canonicalize(s), steps)


def prove_exhaustive(s: Structure,
                     config: SearchConfig = SearchConfig(),
                     searcher: Optional[Searcher] = None
                     ) -> tuple[Optional[Derivation], SearchStats]:
    """Search for a proof of ``s``; returns (derivation or None, stats).

    Pass a `Searcher` to reuse a memo table across calls; the config
    is taken from it in that case.
    """
    eng = searcher if searcher is not None else Searcher(config)
    stats = SearchStats()
    if not eng.provable(s, stats):
        return None, stats
    triples = eng.proof_steps(s, stats)
    if triples is None:  # pragma: no cover - provable implies a path
        raise RuntimeError("internal: provable goal yielded no proof path")
    d = _steps_to_derivation(s, triples)
    stats.proof_length = len(d.steps)
    return d, stats


def derive(frm: Structure, to: Structure,
           config: SearchConfig = SearchConfig()) -> Optional[Derivation]:
    """Bottom-up derivation with conclusion ``frm`` and premise ``to``,
    or None.  ``derive(s, s)`` is the empty derivation."""
    start = canonicalize(frm)
    target = canonicalize(to)
    eng = Searcher(config)
    if start == target:
        return Derivation(start, [])
    stats = SearchStats()
    parents: dict[str, tuple] = {start.text(): None}
    stack = [start]
    hit = None
    while stack and hit is None:
        cur = stack.pop()
        stats.visited += 1
        if stats.visited > config.max_visited:
            raise LimitExceeded("max_visited reached", stats)
        for rule, prem in eng._tagged_premises(cur):
            stats.expanded += 1
            key = prem.text()
            if key in parents:
                continue
            parents[key] = (cur, rule, prem)
            if prem == target:
                hit = prem
                break
            stack.append(prem)
    if hit is None:
        return None
    chain = []
    key = hit.text()
    while parents[key] is not None:
        conc, rule, prem = parents[key]
        chain.append((rule, conc, prem))
        key = conc.text()
    chain.reverse()
    d = Derivation(start)
    for rule, conc, prem in chain:
        want = canonicalize(prem)
        inst = next(cand for cand in enumerate_rule(conc, rule)
                    if canonicalize(cand.premise) == want)
        d.steps.append(inst)
    return d


def provable_continuations(s: Structure, rule: RuleName,
                           config: SearchConfig = SearchConfig(),
                           searcher: Optional[Searcher] = None) -> int:
    """Number of distinct premises of ``rule`` instances on ``s`` that
    are provable under the config."""
    eng = searcher if searcher is not None else Searcher(config)
    premises = {}
    for inst in enumerate_rule(s, rule):
        prem = canonicalize(inst.premise)
        premises[prem.text()] = prem
    return sum(1 for prem in premises.values() if eng.provable(prem))


def splitting_spotcheck(r: Structure, t: Structure, p: Structure,
                        config: SearchConfig = SearchConfig()) -> bool:
    """Empirical check of the shallow-splitting shape on one instance.

    Requires [(r,t),p] to be provable (NotApplicable otherwise), then
    looks for a split of p's top-level par children into P1, P2 with a
    derivation from p to [P1,P2] and proofs of [r,P1] and [t,P2].
    """
    eng = Searcher(config)
    whole = compose(PAR, (compose(COPAR, (r, t)), p))
    if not eng.provable(whole):
        raise NotApplicable("[(r,t),p] is not provable under this config")
    pc = canonicalize(p)
    parts = list(pc.children) if pc.kind == PAR else [pc]
    n = len(parts)
    for mask in range(1 << n):
        p1 = compose(PAR, [parts[i] for i in range(n) if mask >> i & 1])
        p2 = compose(PAR, [parts[i] for i in range(n) if not mask >> i & 1])
        if derive(pc, compose(PAR, (p1, p2)), config) is None:
            continue
        if eng.provable(compose(PAR, (r, p1))) and \
                eng.provable(compose(PAR, (t, p2))):
            return True
    return False


@dataclass
class AgreementReport:
    structure: Structure
    strategy_outcome: object
    oracle_provable: bool
    agree: bool
    strategy_derivation_valid: Optional[bool] = None


def cross_validate(s: Structure, config: SearchConfig = SearchConfig(),
                   searcher: Optional[Searcher] = None,
                   counterexample_log: Optional[str] = None
                   ) -> AgreementReport:
    """Run the guided strategy and the exhaustive search on ``s`` and
    compare verdicts; disagreements go to the counterexample log."""
    from .strategy import Inconclusive, Provable, prove_strategy
    from .rules import FBV_RULES, check_derivation

    eng = searcher if searcher is not None else Searcher(config)
    outcome = prove_strategy(s)
    oracle_says = eng.provable(s)
    if isinstance(outcome, Inconclusive):
        # no claim was made, so there is nothing to disagree with
        return AgreementReport(s, outcome, oracle_says, True, None)
    strat_says = isinstance(outcome, Provable)
    agree = (strat_says == oracle_says)
    valid = None
    if strat_says:
        valid = check_derivation(outcome.derivation, FBV_RULES)
        agree = agree and valid
    if not agree and counterexample_log:
        from .syntax import render
        with open(counterexample_log, "a", encoding="utf-8") as fh:
            fh.write(render(s) + "\n")
    return AgreementReport(s, outcome, oracle_says, agree, valid)

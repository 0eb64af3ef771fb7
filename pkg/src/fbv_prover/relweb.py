"""Relation webs: the pairwise structural relations of atom occurrences.

A web records, for every unordered pair of occurrences, which one of the
four relations holds: sequenced-before, sequenced-after, par, copar.
Webs characterize structures up to the syntactic equivalence laws, so
they double as a semantic fingerprint.  This module computes webs,
validates the seven structural-web conditions, rebuilds a structure
from a valid web, and runs the two necessary provability checks used
by the proof strategy.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

import numpy as np

from . import kernels
from .kernels import CP, GT, LT, PR
from .structure import (ATOM, COPAR, PAR, SEQ, UNIT, OccurrenceSet, Structure,
                        atom, compose, distinct_pairs_check, normalize,
                        occurrences, unit)


class InvalidWeb(ValueError):
    """Candidate failed the structural-web conditions."""

    def __init__(self, violations):
        super().__init__(f"invalid web candidate: {violations}")
        self.violations = violations


class NoPartition(RuntimeError):
    """Defensive: the partition construction got stuck on a candidate
    that passed the structural conditions.  Should be unreachable."""


class DuplicateAtoms(ValueError):
    """Operation requires pairwise distinct atom pairs."""


@dataclass(frozen=True)
class Violation:
    condition: str
    witnesses: tuple

    def __str__(self):
        return f"{self.condition}{self.witnesses}"


class RelationWeb:
    """Occurrence set plus a dense relation-bitmask matrix.

    ``matrix[i, j]`` holds the relation bits for the ordered pair
    ``(i, j)``; see `fbv_prover.kernels` for the encoding.  Instances
    produced by `web_of` satisfy the structural conditions; instances
    built by `web_candidate` carry no guarantee.
    """

    __slots__ = ("occs", "matrix")

    def __init__(self, occs: OccurrenceSet, matrix: np.ndarray):
        self.occs = occs
        self.matrix = matrix

    def __len__(self):
        return len(self.occs)

    def __repr__(self):
        return f"RelationWeb({len(self)} occurrences)"

    def relation(self, i: int, j: int) -> int:
        return int(self.matrix[i, j])

    def dual_pairs(self) -> list[tuple[int, int]]:
        """(positive_id, negative_id) for every name with both
        polarities present exactly once each."""
        by_name: dict[str, dict[bool, list[int]]] = {}
        for oid, name, neg in self.occs:
            by_name.setdefault(name, {False: [], True: []})[neg].append(oid)
        out = []
        for name in sorted(by_name):
            pos, negs = by_name[name][False], by_name[name][True]
            if len(pos) == 1 and len(negs) == 1:
                out.append((pos[0], negs[0]))
        return out


WebCandidate = RelationWeb


@lru_cache(maxsize=512)
def web_of(s: Structure) -> RelationWeb:
    """Relation web of ``s`` over its preorder occurrence ids.

    Independent of the presentation: any tree equal modulo units,
    singletons and associativity induces the same relations (modulo the
    preorder renumbering of ids).  Cached (the result is shared; treat
    it as read-only).
    """
    occs = occurrences(s)
    n = len(occs)
    m = np.zeros((n, n), dtype=np.uint8)
    counter = [0]

    def walk(t: Structure) -> list[int]:
        if t.kind == ATOM:
            i = counter[0]
            counter[0] += 1
            return [i]
        if t.kind == UNIT:
            return []
        spans = [walk(c) for c in t.children]
        if t.kind == PAR or t.kind == COPAR:
            bit = PR if t.kind == PAR else CP
            for a in range(len(spans)):
                for b in range(a + 1, len(spans)):
                    for i in spans[a]:
                        for j in spans[b]:
                            m[i, j] |= bit
                            m[j, i] |= bit
        elif t.kind == SEQ:
            for a in range(len(spans)):
                for b in range(a + 1, len(spans)):
                    for i in spans[a]:
                        for j in spans[b]:
                            m[i, j] |= LT
                            m[j, i] |= GT
        return [i for sp in spans for i in sp]

    walk(s)
    return RelationWeb(occs, m)


def web_candidate(labels, seq_pairs=(), par_pairs=(), copar_pairs=()):
    """Build a candidate web from explicit relation lists.

    ``labels`` is a list of (name, negative) pairs indexed by occurrence
    id.  ``seq_pairs`` are ordered (before, after); the inverse
    direction is implied.  Par/copar pairs are symmetric.  No validity
    checking happens here; feed the result to `check_s1_s7`.
    """
    entries = [(i, name, neg) for i, (name, neg) in enumerate(labels)]
    n = len(entries)
    m = np.zeros((n, n), dtype=np.uint8)
    for a, b in seq_pairs:
        m[a, b] |= LT
        m[b, a] |= GT
    for a, b in par_pairs:
        m[a, b] |= PR
        m[b, a] |= PR
    for a, b in copar_pairs:
        m[a, b] |= CP
        m[b, a] |= CP
    return RelationWeb(OccurrenceSet(entries), m)


_S7_NAMES = {0: "s7-seq", 1: "s7-par", 2: "s7-copar"}


def check_s1_s7(w: RelationWeb) -> list[Violation]:
    """Validate the seven structural-web conditions.

    Returns at most one violation (with witness occurrence ids) per
    condition; an empty list means the candidate is the web of some
    structure.
    """
    m = w.matrix
    n = len(w)
    out = []
    for i in range(n):
        if m[i, i]:
            out.append(Violation("s1", (i,)))
            break
    for i in range(n):
        hit = None
        for j in range(i + 1, n):
            if bin(int(m[i, j])).count("1") != 1:
                hit = Violation("s2", (i, j))
                break
        if hit:
            out.append(hit)
            break
    for i in range(n):
        hit = None
        for j in range(i + 1, n):
            a, b = int(m[i, j]), int(m[j, i])
            if bool(a & LT) != bool(b & GT) or bool(a & GT) != bool(b & LT):
                hit = Violation("s3", (i, j))
                break
        if hit:
            out.append(hit)
            break
    w4 = kernels.s4_witness(m)
    if w4[0] >= 0:
        out.append(Violation("s4", tuple(int(x) for x in w4)))
    for i in range(n):
        hit = None
        for j in range(i + 1, n):
            a, b = int(m[i, j]), int(m[j, i])
            if bool(a & PR) != bool(b & PR) or bool(a & CP) != bool(b & CP):
                hit = Violation("s5", (i, j))
                break
        if hit:
            out.append(hit)
            break
    w6 = kernels.s6_witness(m)
    if w6[0] >= 0:
        out.append(Violation("s6", tuple(int(x) for x in w6)))
    w7 = kernels.s7_witness(m)
    if w7[0] >= 0:
        out.append(Violation(_S7_NAMES[int(w7[0])],
                             tuple(int(x) for x in w7[1:])))
    return out


def _rel(m, x, y):
    """Single relation code for the ordered pair (x, y): one of LT
    (x before y), GT, PR, CP.  Assumes a validated web."""
    v = int(m[x, y])
    if v & LT:
        return LT
    if v & GT:
        return GT
    if v & PR:
        return PR
    return CP


def _absorb(m, xs):
    """Split ``xs`` into (mu, nu, rel) with every mu/nu pair related by
    ``rel`` (mu before nu when rel is LT), by incremental absorption."""
    mu, nu = [xs[0]], [xs[1]]
    sigma = _rel(m, xs[0], xs[1])
    if sigma == GT:
        mu, nu = nu, mu
        sigma = LT

    def all_rel(side_from, side_to, r):
        return all(_rel(m, d, e) == r for d in side_from for e in side_to)

    for c in xs[2:]:
        if sigma == LT:
            if all(_rel(m, d, c) == LT for d in mu):
                nu.append(c)
                continue
            if all(_rel(m, c, e) == LT for e in nu):
                mu.append(c)
                continue
            rho = next(_rel(m, d, c) for d in mu if _rel(m, d, c) != LT)
            mu_lt = [d for d in mu if _rel(m, d, c) == LT]
            mu_rho = [d for d in mu if _rel(m, d, c) == rho]
            nu_gt = [e for e in nu if _rel(m, c, e) == LT]
            nu_rho = [e for e in nu if _rel(m, c, e) == rho]
            if len(mu_lt) + len(mu_rho) != len(mu) or \
               len(nu_gt) + len(nu_rho) != len(nu):
                raise NoPartition("seq absorption failed")
            if mu_lt:
                mu, nu = mu_lt, mu_rho + nu_rho + nu_gt + [c]
            elif nu_gt:
                mu, nu = mu_rho + nu_rho + [c], nu_gt
            else:
                mu, nu, sigma = mu_rho + nu_rho, [c], rho
        else:
            # sigma is PR or CP; the symmetric cases mirror each other
            if all(_rel(m, d, c) == sigma for d in mu):
                nu.append(c)
                continue
            if all(_rel(m, c, e) == sigma for e in nu):
                mu.append(c)
                continue
            rho = next(_rel(m, d, c) for d in mu if _rel(m, d, c) != sigma)
            mu_s = [d for d in mu if _rel(m, d, c) == sigma]
            mu_rho = [d for d in mu if _rel(m, d, c) == rho]
            nu_s = [e for e in nu if _rel(m, e, c) == sigma]
            nu_rho = [e for e in nu if _rel(m, e, c) == rho]
            if len(mu_s) + len(mu_rho) != len(mu) or \
               len(nu_s) + len(nu_rho) != len(nu):
                raise NoPartition("commutative absorption failed")
            if mu_s:
                mu, nu = mu_s, mu_rho + [c] + nu_rho + nu_s
            elif nu_s:
                mu, nu = mu_rho + [c] + nu_rho, nu_s
            else:
                if rho == GT:
                    mu, nu, sigma = [c], mu_rho + nu_rho, LT
                elif rho == LT:
                    mu, nu, sigma = mu_rho + nu_rho, [c], LT
                else:
                    mu, nu, sigma = mu_rho + nu_rho, [c], rho

    ok = (all_rel(mu, nu, LT) if sigma == LT
          else all(_rel(m, d, e) == sigma for d in mu for e in nu))
    if not ok:
        raise NoPartition("absorption invariant broken")
    return mu, nu, sigma


def web_to_structure(w: RelationWeb) -> Structure:
    """Rebuild a structure whose web matches ``w``.

    Validates the candidate first (`InvalidWeb` on failure), then peels
    partitions off recursively, seeding with the two lowest occurrence
    ids and absorbing the rest one at a time.  The result is in normal
    form and its atoms appear with the candidate's labels.
    """
    violations = check_s1_s7(w)
    if violations:
        raise InvalidWeb(violations)
    m = w.matrix
    label = {oid: (name, neg) for oid, name, neg in w.occs}

    def build(xs: list[int]) -> Structure:
        if not xs:
            return unit()
        if len(xs) == 1:
            name, neg = label[xs[0]]
            return atom(name, negative=neg)
        mu, nu, sigma = _absorb(m, xs)
        kind = SEQ if sigma == LT else (PAR if sigma == PR else COPAR)
        return compose(kind, (build(mu), build(nu)))

    return normalize(build([oid for oid, _, _ in w.occs]))


def c1_check(s: Structure) -> Optional[tuple[int, str, bool]]:
    """First necessary provability condition.

    None iff every occurrence has a dual occurrence it is par-related
    to; otherwise one witness occurrence with no par-related dual.
    Requires pairwise distinct atom pairs.
    """
    if not distinct_pairs_check(s):
        raise DuplicateAtoms("c1_check needs pairwise distinct atom pairs")
    w = web_of(s)
    index = {(name, neg): oid for oid, name, neg in w.occs}
    for oid, name, neg in w.occs:
        dual = index.get((name, not neg))
        if dual is None or not (w.matrix[oid, dual] & PR):
            return (oid, name, neg)
    return None


def c2_check(s: Structure) -> Optional[tuple[int, int, int, int]]:
    """Second necessary provability condition.

    Scans all combinations of two dual pairs for the forbidden square
    (both diagonals copar, all four sides par), trying both corner
    assignments.  Returns the witness occurrence ids (a, dual_a, q,
    dual_q), or None.  Requires pairwise distinct atom pairs.
    """
    if not distinct_pairs_check(s):
        raise DuplicateAtoms("c2_check needs pairwise distinct atom pairs")
    w = web_of(s)
    pairs = w.dual_pairs()
    if len(pairs) < 2:
        return None
    arr = np.asarray(pairs, dtype=np.int64)
    hit = kernels.c2_witness(w.matrix, arr)
    if hit[0] < 0:
        return None
    return tuple(int(x) for x in hit)


_DUMP_SYMBOL = {LT: "<|", GT: "|>", PR: "v", CP: "^"}


def dump_web(w: RelationWeb) -> str:
    """Debug text listing, one relation per line: label, symbol, label."""
    names = {oid: (("-" + name) if neg else name) + f":{oid}"
             for oid, name, neg in w.occs}
    lines = []
    for i in range(len(w)):
        for j in range(i + 1, len(w)):
            v = int(w.matrix[i, j])
            for bit, sym in _DUMP_SYMBOL.items():
                if v & bit:
                    lines.append(f"{names[i]} {sym} {names[j]}")
    return "\n".join(sorted(lines))

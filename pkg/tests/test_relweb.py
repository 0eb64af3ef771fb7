"""Relation webs, the seven structural conditions, reconstruction, and
the two necessary provability checks."""

import itertools

import pytest

from fbv_prover.kernels import CP, GT, LT, PR
from fbv_prover.relweb import (DuplicateAtoms, InvalidWeb, c1_check, c2_check,
                               check_s1_s7, dump_web, web_candidate, web_of,
                               web_to_structure)
from fbv_prover.structure import canonicalize
from fbv_prover.syntax import parse

from families import flat_distinct_family, structures_with_seq, web_certificate


def occ_index(s):
    return {(nm, neg): i for i, (nm, neg) in enumerate(s.atoms())}


def rel(w, x, y):
    return int(w.matrix[x, y])


# -- web_of -----------------------------------------------------------

def test_web_of_worked_example():
    s = parse("[a,b,(-b,[(-a,c),-c])]")
    w = web_of(s)
    o = occ_index(s)
    a, b = o[("a", False)], o[("b", False)]
    nb, na = o[("b", True)], o[("a", True)]
    c, nc = o[("c", False)], o[("c", True)]
    assert rel(w, a, b) == PR
    assert rel(w, a, nb) == PR
    assert rel(w, a, na) == PR
    assert rel(w, a, c) == PR
    assert rel(w, a, nc) == PR
    assert rel(w, nb, na) == CP
    assert rel(w, nb, c) == CP
    assert rel(w, nb, nc) == CP
    assert rel(w, na, c) == CP
    assert rel(w, na, nc) == PR
    assert rel(w, c, nc) == PR


def test_web_of_seq_example():
    s = parse("(<a;-b>,[-c,d])")
    w = web_of(s)
    o = occ_index(s)
    a, nb = o[("a", False)], o[("b", True)]
    nc, d = o[("c", True)], o[("d", False)]
    assert rel(w, a, nb) == LT and rel(w, nb, a) == GT
    assert rel(w, a, nc) == CP
    assert rel(w, a, d) == CP
    assert rel(w, nc, d) == PR


def test_web_of_unit_empty():
    w = web_of(parse("*"))
    assert len(w) == 0 and w.matrix.shape == (0, 0)


def test_web_presentation_independent():
    # raw presentations with units/singletons/nesting give the same web
    for raw, canon in [("[a,(b),*,[c,d]]", "[a,b,c,d]"),
                       ("[[a,b],(c,(d,e))]", "[a,b,(c,d,e)]")]:
        wa = web_of(parse(raw))
        wb = web_of(parse(canon))
        assert web_certificate(wa) == web_certificate(wb)


def test_subweb_inheritance():
    # an outside occurrence relates identically to every occurrence of
    # a substructure
    s = parse("[x,(a,[b,<c;d>])]")
    w = web_of(s)
    o = occ_index(s)
    x = o[("x", False)]
    inner = [o[("a", False)], o[("b", False)], o[("c", False)],
             o[("d", False)]]
    kinds = {rel(w, x, i) for i in inner}
    assert kinds == {PR}


# -- s1..s7 -----------------------------------------------------------

def test_valid_webs_pass_all_conditions():
    for s in flat_distinct_family("abc", max_occ=4):
        assert check_s1_s7(web_of(s)) == []
    for s in itertools.islice(
            structures_with_seq((("a", False), ("b", True)), 4), 500):
        assert check_s1_s7(web_of(s)) == []


def test_s2_violation_double_relation():
    cand = web_candidate([("a", False), ("b", False)],
                         par_pairs=[(0, 1)], copar_pairs=[(0, 1)])
    v = check_s1_s7(cand)
    assert [x.condition for x in v] == ["s2"]
    with pytest.raises(InvalidWeb):
        web_to_structure(cand)


def test_s2_violation_missing_relation():
    cand = web_candidate([("a", False), ("b", False), ("c", False)],
                         par_pairs=[(0, 1), (1, 2)])
    assert any(x.condition == "s2" for x in check_s1_s7(cand))


def test_s6_triangle_violation():
    cand = web_candidate([("a", False), ("b", False), ("c", False)],
                         par_pairs=[(0, 1)], copar_pairs=[(1, 2)],
                         seq_pairs=[(2, 0)])
    v = check_s1_s7(cand)
    assert [x.condition for x in v] == ["s6"]


def test_s7_par_path_violations_exact():
    """Brute force: among all 4-occurrence par/copar candidates, the
    par square condition rejects exactly the ones whose par edges form
    a three-edge simple path."""
    labels = [("a", False), ("b", False), ("c", False), ("d", False)]
    pairs = list(itertools.combinations(range(4), 2))

    def is_three_edge_path(parset):
        if len(parset) != 3:
            return False
        deg = {i: 0 for i in range(4)}
        for x, y in parset:
            deg[x] += 1
            deg[y] += 1
        return sorted(deg.values()) == [1, 1, 2, 2]

    for mask in range(1 << 6):
        par_pairs = [pairs[i] for i in range(6) if mask >> i & 1]
        copar_pairs = [pairs[i] for i in range(6) if not mask >> i & 1]
        cand = web_candidate(labels, par_pairs=par_pairs,
                             copar_pairs=copar_pairs)
        conds = {x.condition for x in check_s1_s7(cand)}
        expect_par = is_three_edge_path(par_pairs)
        expect_copar = is_three_edge_path(copar_pairs)
        if expect_par:
            assert "s7-par" in conds, par_pairs
        if expect_copar and not expect_par:
            assert "s7-copar" in conds, copar_pairs
        if not expect_par and not expect_copar:
            assert not conds & {"s7-par", "s7-copar"}, par_pairs


def test_s4_transitivity_violation():
    cand = web_candidate([("a", False), ("b", False), ("c", False)],
                         seq_pairs=[(0, 1), (1, 2)], par_pairs=[(0, 2)])
    conds = [x.condition for x in check_s1_s7(cand)]
    assert "s4" in conds


def test_s1_reflexive_violation():
    cand = web_candidate([("a", False), ("b", False)], par_pairs=[(0, 1)])
    cand.matrix[0, 0] = PR
    assert any(x.condition == "s1" for x in check_s1_s7(cand))


# -- reconstruction ---------------------------------------------------

def test_reconstruct_single_occurrence():
    cand = web_candidate([("a", True)])
    assert web_to_structure(cand).text() == "-a"


def test_reconstruct_roundtrip_example():
    s = canonicalize(parse("[a,(b,c)]"))
    r = web_to_structure(web_of(s))
    assert canonicalize(r) == s
    assert web_certificate(web_of(r)) == web_certificate(web_of(s))


def test_reconstruct_small_families():
    for s in flat_distinct_family("abc", max_occ=4):
        assert canonicalize(web_to_structure(web_of(s))) == s
    count = 0
    for s in structures_with_seq((("a", False), ("b", True)), 4):
        assert canonicalize(web_to_structure(web_of(s))) == s
        count += 1
    assert count > 100


def test_web_equality_iff_canonical_equality_small():
    by_canon = {}
    by_cert = {}
    for s in structures_with_seq((("a", False), ("b", False)), 4):
        canon = s.text()
        cert = web_certificate(web_of(s))
        assert by_canon.setdefault(canon, cert) == cert
        assert by_cert.setdefault(cert, canon) == canon


# -- c1 / c2 ----------------------------------------------------------

def test_c1_examples():
    assert c1_check(parse("[a,-a]")) is None
    w = c1_check(parse("[a,(b,-b)]"))
    assert w is not None and w[1] == "a"
    w = c1_check(parse("(a,-a)"))
    assert w is not None and w[1] == "a"


def test_c1_unprovable_witness_agrees_with_search():
    from fbv_prover.oracle import Searcher
    assert not Searcher().provable(parse("(a,-a)"))


def test_c1_requires_distinct_pairs():
    with pytest.raises(DuplicateAtoms):
        c1_check(parse("[a,a,-a,-a]"))
    with pytest.raises(DuplicateAtoms):
        c2_check(parse("[a,a,-a,-a]"))


def test_c2_examples():
    assert c2_check(parse("[(a,b),(-a,-b)]")) is not None
    assert c2_check(
        parse("[(a,-b),(b,-c),(c,-d),(d,-e),(e,-f),(f,-a)]")) is None
    assert c2_check(parse("[a,-a,b,-b]")) is None


def test_c2_witness_is_the_square():
    s = parse("[x,-x,(a,b),(-a,-b)]")
    hit = c2_check(s)
    assert hit is not None
    w = web_of(s)
    a, ab, q, qb = hit
    assert rel(w, a, q) == CP and rel(w, ab, qb) == CP
    assert rel(w, a, ab) == PR and rel(w, q, qb) == PR
    assert rel(w, a, qb) == PR and rel(w, ab, q) == PR


def test_c2_both_corner_assignments():
    # swapping the polarity roles of the second pair must still match
    for text in ["[(a,b),(-a,-b)]", "[(a,-b),(-a,b)]"]:
        assert c2_check(parse(text)) is not None, text


# -- debug dump -------------------------------------------------------

def test_dump_web_format():
    out = dump_web(web_of(parse("[a,(b,<c;-a>)]")))
    lines = out.splitlines()
    assert lines == sorted(lines)
    assert any(" v " in ln for ln in lines)
    assert any(" ^ " in ln for ln in lines)
    assert any(" <| " in ln or " |> " in ln for ln in lines)

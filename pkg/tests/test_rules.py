"""Rule instance enumeration, application, pruning side conditions,
and derivation replay."""

import itertools

import pytest

from fbv_prover.kernels import CP
from fbv_prover.relweb import web_of
from fbv_prover.rules import (BV_RULES, FBV_RULES, Derivation, RuleName,
                              StaleInstance, apply_instance, check_derivation,
                              enumerate_ai_down, enumerate_q_down,
                              enumerate_switch, is_interaction,
                              is_lazy_interaction, is_pruned,
                              iter_ai_premises, iter_q_premises,
                              iter_switch_premises, o_down_instance)
from fbv_prover.structure import canonicalize, unit
from fbv_prover.syntax import parse, render

from families import flat_distinct_family


def C(text):
    return canonicalize(parse(text))


# -- ai ----------------------------------------------------------------

def test_ai_simple_pair():
    insts = enumerate_ai_down(C("[a,-a]"))
    assert len(insts) == 1
    assert insts[0].premise == unit()


def test_ai_par_siblings_only():
    s = C("[a,-a,b,-b,(a,b),(-a,-b)]")
    insts = enumerate_ai_down(s)
    assert len(insts) == 2
    names = set()
    for inst in insts:
        i, j = inst.detail
        labels = list(s.atoms())
        assert labels[i][0] == labels[j][0]
        names.add(labels[i][0])
    assert names == {"a", "b"}


def test_ai_none_in_copar():
    assert enumerate_ai_down(C("(a,-a)")) == []


def test_ai_deep():
    insts = enumerate_ai_down(C("[x,(y,[a,-a])]"))
    assert len(insts) == 1
    assert insts[0].premise == C("[x,y]")
    assert insts[0].position != ()


# -- switch -------------------------------------------------------------

def test_switch_count_twelve():
    insts = enumerate_switch(C("[(-a,-b),a,b]"))
    assert len(insts) == 12


def test_switch_no_copar_no_instances():
    assert enumerate_switch(C("[a,b]")) == []


def test_switch_two_instances_single_sibling():
    insts = enumerate_switch(C("[(a,b),c]"))
    assert len(insts) == 2
    premises = {render(i.premise) for i in insts}
    assert premises == {render(C("([a,c],b)")), render(C("([b,c],a)"))}


def test_switch_premise_example():
    insts = enumerate_switch(C("[(-a,-b),a,b]"))
    want = render(C("[([-a,a],-b),b]"))
    assert any(render(i.premise) == want for i in insts)


# -- q ------------------------------------------------------------------

def test_q_full_blocks():
    insts = enumerate_q_down(C("[<a;b>,<c;d>]"))
    want = render(C("<[a,c];[b,d]>"))
    assert any(render(i.premise) == want for i in insts)


def test_q_unit_blocks():
    insts = enumerate_q_down(C("[a,b]"))
    premises = {render(i.premise) for i in insts}
    assert render(C("<a;b>")) in premises
    assert render(C("<b;a>")) in premises


def test_q_none_on_copar():
    assert enumerate_q_down(C("(a,b)")) == []


def test_q_trivial_filtered():
    for inst in enumerate_q_down(C("[<a;b>,c]")):
        assert canonicalize(inst.premise) != C("[<a;b>,c]")


# -- apply / stale ------------------------------------------------------

def test_apply_returns_premise():
    inst = enumerate_ai_down(C("[a,-a]"))[0]
    assert apply_instance(inst) == unit()
    assert apply_instance(inst, C("[-a,a]")) == unit()


def test_apply_stale():
    inst = enumerate_ai_down(C("[a,-a]"))[0]
    with pytest.raises(StaleInstance):
        apply_instance(inst, C("[a,-b]"))


# -- pruning predicates -------------------------------------------------

def _switch_by(s, moved_names, sel_names):
    for inst in enumerate_switch(s):
        moved, _, sel, _ = inst.detail
        got_moved = {c.text() for c in moved}
        got_sel = {c.text() for c in sel}
        if got_moved == moved_names and got_sel == sel_names:
            return inst
    raise AssertionError("instance not found")


def test_interaction_predicate():
    s = C("[(-a,-b),a,b]")
    good = _switch_by(s, {"-a"}, {"a"})
    bad = _switch_by(s, {"-a"}, {"b"})
    assert is_interaction(good)
    assert not is_interaction(bad)


def test_lazy_interaction_single_sibling_only():
    s = C("[(-a,-b),a,b]")
    multi = _switch_by(s, {"-a"}, {"a", "b"})
    single = _switch_by(s, {"-a"}, {"a"})
    assert is_interaction(multi)
    assert not is_lazy_interaction(multi)
    assert is_lazy_interaction(single)


def test_pruned_predicate_repeated_atoms():
    # kept block shares a literal with the selection: not pruned-valid
    s = C("[(a,b),b,-a]")
    sharing = _switch_by(s, {"a"}, {"b"})
    assert not is_pruned(sharing)
    disjoint = _switch_by(s, {"a"}, {"-a"})
    assert is_pruned(disjoint)


def test_predicates_only_for_switch():
    inst = enumerate_ai_down(C("[a,-a]"))[0]
    assert not is_interaction(inst)
    assert not is_pruned(inst)


# -- derivation replay --------------------------------------------------

def test_check_derivation_strategy_proof():
    from fbv_prover.strategy import Provable, prove_strategy
    out = prove_strategy(parse("[a,b,(-a,-b)]"))
    assert isinstance(out, Provable)
    assert check_derivation(out.derivation, FBV_RULES)


def test_check_derivation_broken_chain():
    out_ok = enumerate_ai_down(C("[a,-a,b,-b]"))
    d = Derivation(C("[a,-a,b,-b]"),
                   [out_ok[0], o_down_instance(unit())])
    # chain skips a step: premise [b,-b] is not the unit
    assert not check_derivation(d, FBV_RULES)


def test_check_derivation_rejects_q_in_fbv():
    insts = enumerate_q_down(C("[a,b]"))
    d = Derivation(C("[a,b]"), [insts[0]])
    assert not check_derivation(d, FBV_RULES)
    assert check_derivation(d, BV_RULES)


# -- structural invariants ---------------------------------------------

def _all_instances(s):
    return (enumerate_ai_down(s) + enumerate_switch(s)
            + enumerate_q_down(s))


def test_premise_size_monotone():
    for s in itertools.islice(flat_distinct_family("abc"), 2000):
        for inst in _all_instances(s):
            if inst.rule is RuleName.AI_DOWN:
                assert inst.premise.size() == s.size() - 2
            else:
                assert inst.premise.size() == s.size()


def test_no_new_par_relations_bottom_up():
    # copar-related occurrence pairs stay copar-related in the premise
    # (checked by literal identity on distinct-pair structures)
    for s in itertools.islice(flat_distinct_family("abc"), 1500):
        w = web_of(s)
        labels = list(s.atoms())
        up_pairs = {(labels[i], labels[j])
                    for i in range(len(labels)) for j in range(len(labels))
                    if i < j and w.matrix[i, j] & CP}
        for inst in _all_instances(s):
            pw = web_of(inst.premise)
            plabels = list(inst.premise.atoms())
            pindex = {lit: k for k, lit in enumerate(plabels)}
            for x, y in up_pairs:
                if x in pindex and y in pindex:
                    assert pw.matrix[pindex[x], pindex[y]] & CP


def test_enumeration_deterministic():
    s = C("[(-a,-b),a,b,(c,[-c,d,-d])]")
    first = [(i.rule, i.position, i.detail, i.premise.text())
             for i in _all_instances(s)]
    second = [(i.rule, i.position, i.detail, i.premise.text())
              for i in _all_instances(s)]
    assert first == second


def test_fast_generators_match_enumerators():
    for s in itertools.islice(flat_distinct_family("abc"), 800):
        slow_ai = {render(i.premise) for i in enumerate_ai_down(s)}
        fast_ai = {render(p) for p in iter_ai_premises(s)}
        assert slow_ai == fast_ai
        slow_sw = {render(i.premise) for i in enumerate_switch(s)}
        fast_sw = {render(p) for p in iter_switch_premises(s)}
        assert slow_sw == fast_sw
    for text in ["[<a;b>,<c;d>]", "[a,<b;c>]", "[<a;b>,(c,[d,e])]"]:
        s = C(text)
        slow_q = {render(i.premise) for i in enumerate_q_down(s)}
        fast_q = {render(p) for p in iter_q_premises(s)}
        assert slow_q == fast_q


def test_pruned_generator_matches_predicate():
    from fbv_prover.rules import switch_block_predicate
    for s in itertools.islice(flat_distinct_family("abc"), 500):
        for mode, pred in (("is", is_interaction),
                           ("lis", is_lazy_interaction),
                           ("ps", is_pruned)):
            fast = {render(p) for p in iter_switch_premises(
                s, switch_block_predicate(mode))}
            slow = {render(i.premise) for i in enumerate_switch(s)
                    if pred(i)}
            assert fast == slow, (s.text(), mode)

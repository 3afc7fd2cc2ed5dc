import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pdlkit.kernel import (
    DERIVED_RULES, RuleInstance, SchemaMismatch, applicable_rule_schemas, big_conj, build_derived,
    char_wff, check_proof, check_rule_instance, divisions, iter_nodes, leaf, node,
)
from pdlkit.kripke import find_countermodel_bounded
from pdlkit.syntax import (
    BOTTOM, TOP, Atom, Implies, Prop, Sequent, conj, disj, neg, parse_formula as F, parse_sequent as S,
)
import golden
from strategies import formulas

p, q, a = Prop("p"), Prop("q"), Atom("a")


def ok(system, conclusion, premises, rule, principal=None, cut=None):
    return check_rule_instance(system, S(conclusion), [S(x) for x in premises],
                               RuleInstance(rule, principal and F(principal), cut and F(cut)))


def test_axiom_instances():
    assert ok("GTPDL", "p |- p", [], "Ax", "p") == []
    assert ok("GTPDL", "p |- p", [], "Ax") == []
    assert ok("GTPDL", "p |- q", [], "Ax") != []
    assert ok("GTPDL", "false |- q", [], "Bot") == []
    assert ok("GTPDL", "p |- p", ["p |- p"], "Ax") != []


def test_star_right_with_empty_context():
    assert ok("GTPDL", "p |- [a*]p", ["p |- [a]p"], "StarR", "[a*]p") == []
    assert ok("GTPDL", "p |- [a*]p, q", ["p |- [a]p"], "StarR", "[a*]p") != []


def test_system_gating():
    msg = ok("GTPDL", "p |- [a*]p", ["p |- p, [a*]p", "p |- [a][a*]p, [a*]p"], "Cs", "[a*]p")
    assert msg == ["rule Cs not in system GTPDL"]
    assert ok("CGTPDL", "p |- [a*]p", ["p |- p, [a*]p", "p |- [a][a*]p, [a*]p"], "Cs", "[a*]p") == []
    assert ok("CGTPDL", "p |- [a*]p", ["p |- [a]p"], "StarR", "[a*]p") != []
    assert ok("CGPDL", "[a]p |- [a]p", ["p |- p"], "BoxModal", "[a]p") != []
    assert ok("CGPDL", "[-a]p |- [-a]p", [], "Ax", "[-a]p")[0].startswith("non-PDL")


def test_modal_rules():
    assert ok("GTPDL", "[a]p |- [a]q, r", ["p |- q, [-a]r"], "BoxModal", "[a]q") == []
    assert ok("GTPDL", "[a]p, s |- [a]q", ["p |- q"], "BoxModal", "[a]q") != []
    assert ok("GTPDL", "[-a]p |- [-a]q, r", ["p |- q, [a]r"], "RevBoxModal", "[-a]q") == []
    assert ok("CGPDL", "s, [a]p |- [a]q, r", ["p |- q"], "K", "[a]q") == []
    assert ok("CGPDL", "s |- [a]q, r", ["p |- q"], "K", "[a]q") != []


def test_wk_allows_equality():
    assert ok("GTPDL", "p |- q", ["p |- q"], "Wk") == []
    assert ok("GTPDL", "p |- q", ["|- q"], "Wk") == []
    assert ok("GTPDL", "p |- q", ["p, r |- q"], "Wk") != []


def test_context_rules():
    assert ok("GTPDL", "p -> q |- q", ["|- p, q", "q |- q"], "ImpL", "p -> q") == []
    assert ok("GTPDL", "p -> q |- q", ["q |- q", "|- p, q"], "ImpL", "p -> q") != []
    assert ok("GTPDL", "|- p -> q", ["p |- q"], "ImpR", "p -> q") == []
    assert ok("GTPDL", "|- p -> q", ["p |- q, r"], "ImpR", "p -> q") != []
    assert ok("GTPDL", "|- [(a;a)]p", ["|- [a][a]p"], "SeqR", "[(a;a)]p") == []
    assert ok("GTPDL", "|- q", ["|- p, q", "p |- q"], "Cut", cut="p") == []
    assert ok("GTPDL", "|- q", ["|- p, q", "p |- q"], "Cut") == ["Cut needs a cut formula"]


def test_check_proof_reports_open_leaves():
    tree = node(S("|- p -> p"), "ImpR", [leaf(S("p |- p"))], principal=F("p -> p"))
    assert [v.path for v in check_proof("GTPDL", tree)] == [(0,)]
    single = node(S("p |- q"), "Ax")
    assert check_proof("GTPDL", single) != []


def test_golden_proofs_are_accepted():
    assert check_proof("GTPDL", golden.converse_diamond_proof()) == []
    assert check_proof("GTPDL", golden.induction_proof()) == []


def test_golden_proofs_are_sound():
    for tree in (golden.converse_diamond_proof(), golden.induction_proof()):
        for _, t in iter_nodes(tree):
            assert find_countermodel_bounded(t.conclusion, 3) is None, t.conclusion


def test_applicable_rules():
    assert set(applicable_rule_schemas("GTPDL", S("p, [a][a*]p |- [a*]p"))) == {"Wk", "Cut"}
    assert set(applicable_rule_schemas("GTPDL", S("p |- [a]<-a>p"))) == {"Wk", "Cut"}
    assert "Ax" in applicable_rule_schemas("GTPDL", S("p |- p"))
    assert "Cs" in applicable_rule_schemas("CGTPDL", S("p, [a][a*]p |- [a*]p"))


def test_char_wff_examples():
    assert char_wff(Sequent([], [])) is Implies(TOP, BOTTOM)
    assert char_wff(S("p |- q")) is Implies(p, q)
    assert char_wff(S("p, q |- ")) is Implies(conj(p, q), BOTTOM)
    assert char_wff(S("|- p, q")) is Implies(TOP, disj(p, q))


def test_divisions_examples():
    assert divisions([]) == {char_wff(Sequent([], []))}
    assert divisions([p]) == {char_wff(S("p |- ")), char_wff(S("|- p"))}
    assert len(divisions([p, q])) == 4


def test_derived_examples():
    t = build_derived("notR", leaf(S("q, p |- r")), p)
    assert t.conclusion == S("q |- r, ~p") and t.rule.rule_name == "ImpR"
    t = build_derived("starLBase", leaf(S("q, p |- r")), a, p)
    assert t.conclusion == S("q, [a*]p |- r")
    assert [n.rule.rule_name for _, n in iter_nodes(t) if n.rule] == ["StarL", "Wk"]
    t = build_derived("cutWk", leaf(S("q |- p, r")), leaf(S("s, p |- t")), p)
    assert t.conclusion == S("q, s |- r, t")
    assert sorted(n.rule.rule_name for _, n in iter_nodes(t) if n.rule) == ["Cut", "Wk", "Wk"]
    with pytest.raises(SchemaMismatch):
        build_derived("notR", leaf(S("q |- r")), p)
    with pytest.raises(SchemaMismatch):
        build_derived("noSuchRule")


def locally_valid(tree):
    """Every inner node passes; open leaves stand for the inputs."""
    for _, t in iter_nodes(tree):
        if t.rule is not None:
            assert check_rule_instance("GTPDL", t.conclusion, [c.conclusion for c in t.premises], t.rule) == []


small = formulas(max_size=5)
ctx = st.lists(small, max_size=2)


@settings(max_examples=200, deadline=None)
@given(ctx, ctx, small, small)
def test_derived_rules_expand_to_valid_steps(gamma, delta, phi, psi):
    g, d = frozenset(gamma), frozenset(delta)

    def L(ant, cons):
        return leaf(Sequent(ant, cons))

    built = [
        build_derived("notL", L(g, d | {phi}), phi),
        build_derived("notR", L(g | {phi}, d), phi),
        build_derived("orR", L(g, d | {phi, psi}), phi, psi),
        build_derived("andL", L(g | {phi, psi}, d), phi, psi),
        build_derived("starLBase", L(g | {phi}, d), a, phi),
        build_derived("starLStep", L(g | {F("[a][a*]p")}, d), a, p),
        build_derived("choiceLWk", L(g | {F("[a]p")}, d), a, Atom("b"), p, 0),
        build_derived("cutWk", L(g, d | {phi}), L(g | {phi}, d), phi),
        build_derived("bigAndL", L(g | {phi, psi}, d), [phi, psi]),
        build_derived("bigOrR", L(g, d | {phi, psi}), [phi, psi]),
    ]
    if phi not in g and psi not in g and phi is not psi:
        built.append(build_derived("orL", L(g | {phi}, d), L(g | {psi}, d), phi, psi))
    if phi not in d and psi not in d and phi is not psi:
        built.append(build_derived("andR", L(g, d | {phi}), L(g, d | {psi}), phi, psi))
    for t in built:
        locally_valid(t)


def test_every_derived_rule_is_covered():
    assert set(DERIVED_RULES) == {
        "notL", "notR", "orL", "orR", "andL", "andR", "starLBase", "starLStep",
        "choiceLWk", "cutWk", "bigAndL", "bigAndR", "bigOrL", "bigOrR",
    }
    gamma, delta = frozenset([q]), frozenset()
    ts = [leaf(Sequent(gamma, [p])), leaf(Sequent(gamma, [F("r")]))]
    t = build_derived("bigAndR", ts, [p, F("r")])
    assert t.conclusion == Sequent(gamma, [big_conj([p, F("r")])])
    locally_valid(t)
    ts = [leaf(Sequent([p], delta)), leaf(Sequent([F("r")], delta))]
    t = build_derived("bigOrL", ts, [p, F("r")])
    locally_valid(t)
    locally_valid(build_derived("bigAndR", [], [], gamma=gamma, delta=delta))
    locally_valid(build_derived("bigOrL", [], [], gamma=gamma, delta=delta))


def accepted_instances():
    trees = [golden.converse_diamond_proof(), golden.induction_proof(),
             golden.cyclic_induction_proof().tree, golden.induction_by_cut_loop().tree]
    for tree in trees:
        for _, t in iter_nodes(tree):
            if t.rule is not None:
                yield t


def test_removing_the_principal_is_rejected():
    for t in accepted_instances():
        pr, name = t.rule.principal, t.rule.rule_name
        if pr is None or name in ("Bot",):
            continue
        prems = [c.conclusion for c in t.premises]
        for side in ("ant", "cons"):
            cur = getattr(t.conclusion, side)
            if pr not in cur:
                continue
            mutated = Sequent(t.conclusion.ant - {pr}, t.conclusion.cons) if side == "ant" \
                else Sequent(t.conclusion.ant, t.conclusion.cons - {pr})
            assert check_rule_instance("CGTPDL", mutated, prems, t.rule) != [], (name, mutated)


def test_axioms_reject_an_added_premise():
    for t in accepted_instances():
        if t.rule.rule_name in ("Ax", "Bot"):
            assert check_rule_instance("CGTPDL", t.conclusion, [t.conclusion], t.rule) != []

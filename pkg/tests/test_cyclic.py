import random

import pytest

from pdlkit.cyclic import (
    DerivationGraph, GraphEdge, GtcViolation, PreProof, TraceEdge, check_companions,
    check_cyclic_proof, check_gtc, derivation_graph, trace_relation,
)
from pdlkit.game import decide, Proof
from pdlkit.kernel import RuleInstance, iter_nodes, leaf, node
from pdlkit.kripke import find_countermodel_bounded
from pdlkit.prooffile import ProofFormatError, read_proof, write_proof
from pdlkit.syntax import parse_formula as F, parse_sequent as S
import golden
import oracles
from gtc_graphs import random_graph


def test_trace_relation_examples():
    phi = F("q")
    wk = trace_relation(S("p |- q, r"), S("p |- q"), RuleInstance("Wk"), 0)
    assert wk == {TraceEdge(phi, phi, False)}
    star = F("[a*]p")
    cs = trace_relation(S("|- [a*]p"), S("|- [a*]p, [a][a*]p"), RuleInstance("Cs", star), 1)
    assert TraceEdge(star, F("[a][a*]p"), True) in cs
    assert TraceEdge(star, star, False) in cs
    base = trace_relation(S("|- [a*]p"), S("|- [a*]p, p"), RuleInstance("Cs", star), 0)
    assert TraceEdge(star, F("p"), False) in base
    box = trace_relation(S("[a]p |- [a]q, r"), S("p |- q, [-a]r"), RuleInstance("BoxModal", F("[a]q")), 0)
    assert box == {TraceEdge(F("[a]q"), F("q"), False)}
    k = trace_relation(S("[a]p |- [a]q, r"), S("p |- q"), RuleInstance("K", F("[a]q")), 0)
    assert k == {TraceEdge(F("[a]q"), F("q"), False)}
    imp = trace_relation(S("|- p -> q"), S("p |- q"), RuleInstance("ImpR", F("p -> q")), 0)
    assert imp == {TraceEdge(F("p -> q"), F("q"), False)}


def test_golden_cyclic_proofs():
    assert check_cyclic_proof("CGTPDL", golden.cyclic_induction_proof()) == []
    assert check_cyclic_proof("CGTPDL", golden.induction_by_cut_loop()) == []


def test_empty_sequent_loop_is_rejected_with_a_lasso():
    problems = check_cyclic_proof("CGTPDL", golden.empty_loop())
    assert len(problems) == 1 and isinstance(problems[0], GtcViolation)
    assert problems[0].stem == () and problems[0].cycle == ((),)
    assert "cycle root -> root" in str(problems[0])


def test_acyclic_graph_satisfies_the_condition():
    tree = node(S("p |- p"), "Ax")
    assert check_gtc(derivation_graph(PreProof(tree))) is None


def test_companion_errors():
    bud = leaf(S("p |- q"), "b0")
    tree = node(S("p |- q"), "Wk", [bud])
    assert check_companions(PreProof(tree, {})) != []
    assert check_companions(PreProof(tree, {"b0": (5,)})) != []
    assert check_companions(PreProof(tree, {"b0": (0,)})) != []
    other = node(S("p |- q, r"), "Wk", [leaf(S("p |- q"), "b0")])
    assert check_companions(PreProof(other, {"b0": ()})) != []
    assert check_companions(PreProof(tree, {"b0": (), "b9": ()})) != []
    assert check_companions(PreProof(node(S("|-"), "Wk", [leaf(S("|-"))]), {})) != []


def test_companion_may_be_a_non_ancestor():
    # the bud's companion sits in a sibling branch
    s = S("p |- p")
    tree = node(S("p |- q -> p"), "ImpR", [node(S("p, q |- p"), "Wk", [node(s, "Ax")])],
                principal=F("q -> p"))
    assert check_companions(PreProof(tree)) == []


def test_cyclic_systems_only():
    with pytest.raises(ValueError):
        check_cyclic_proof("GTPDL", golden.empty_loop())


def test_lasso_witness_fails_on_the_oracle():
    rng = random.Random(11)
    seen = 0
    while seen < 50:
        g = random_graph(rng)
        lasso = check_gtc(g)
        if lasso is None:
            continue
        seen += 1
        assert lasso.cycle and oracles.cycle_fails(g, lasso.cycle)
        if lasso.stem:
            assert lasso.stem[0] == 0


def test_gtc_matches_oracle():
    rng = random.Random(3)
    for _ in range(300):
        g = random_graph(rng)
        assert (check_gtc(g) is None) == oracles.gtc_holds(g, 8)


def _loops(*traces):
    edges = [GraphEdge(0, 0, None, i, frozenset(ts)) for i, ts in enumerate(traces)]
    return DerivationGraph([0], edges)


def test_gtc_on_two_self_loops():
    x, y = "x", "y"
    # x progresses on loop 0 and survives loop 1
    g = _loops([TraceEdge(x, x, True), TraceEdge(y, y, False)], [TraceEdge(y, y, True), TraceEdge(x, x, False)])
    assert check_gtc(g) is None and oracles.gtc_holds(g)
    # no formula survives both loops, so alternating them fails
    g = _loops([TraceEdge(x, x, True)], [TraceEdge(y, y, True)])
    assert check_gtc(g) is not None and not oracles.gtc_holds(g)
    # the loops swap the formulas and only x progresses, so alternation progresses once
    g = _loops([TraceEdge(x, x, True), TraceEdge(y, x, False)], [TraceEdge(y, y, True), TraceEdge(x, y, False)])
    lasso = check_gtc(g)
    assert lasso is not None and lasso.cycle == (0, 0) and not oracles.gtc_holds(g)


PROVED = ["p |- [(?p)*]p", "p, [a*](p -> [a]p) |- [a*]p", "[a*]p |- [a*][a*]p", "[a*]p |- [a][a*]p"]


@pytest.mark.parametrize("text", PROVED)
def test_non_case_split_edges_never_progress(text):
    result = decide(S(text))
    assert isinstance(result, Proof)
    for e in derivation_graph(result.preproof).edges:
        if e.rule.rule_name != "Cs" or e.index == 0:
            assert not any(t.progressing for t in e.traces)


@pytest.mark.parametrize("text", PROVED)
def test_every_sequent_of_a_cyclic_proof_is_valid(text):
    pre = decide(S(text)).preproof
    for _, t in iter_nodes(pre.tree):
        assert find_countermodel_bounded(t.conclusion, 3) is None, t.conclusion
    for pre in (golden.cyclic_induction_proof(), golden.induction_by_cut_loop()):
        for _, t in iter_nodes(pre.tree):
            assert find_countermodel_bounded(t.conclusion, 3) is None


def test_proof_file_round_trip():
    for pre in (golden.cyclic_induction_proof(), golden.induction_by_cut_loop(), golden.empty_loop()):
        text = write_proof(pre)
        back = read_proof(text)
        assert back.tree == pre.tree and back.companions == pre.companions
    tree = golden.converse_diamond_proof()
    assert read_proof(write_proof(tree)).tree == tree


def test_proof_file_syntax():
    text = """
    ; a comment
    (node Wk (seq "|-")
      (bud b0 (seq "|-")))
    (companion b0 ())
    """
    pre = read_proof(text)
    assert pre.companions == {"b0": ()}
    assert [str(v) for v in check_cyclic_proof("CGTPDL", pre)][0].startswith("global trace condition fails")


@pytest.mark.parametrize("text", [
    "", "(node Ax (seq \"p |- p\")", "(node Nope (seq \"p |- p\"))", "(node Ax)",
    "(node Ax principal: p (seq \"p |- p\"))", "(node Ax (seq \"p |- \"))\n(node Ax (seq \"p |- p\"))",
    "(node Ax (seq \"p |- (\"))", "(node Ax (seq \"p |- p\"))\n(companion b0 (x))",
])
def test_proof_file_errors(text):
    with pytest.raises(ProofFormatError):
        read_proof(text)

"""Cyclic proofs, a proof-search game and countermodels for PDL with converse boxes."""

from .canonical import ValidityOracle, canonical_counter_model, saturate
from .closure import default_schedule, fl, fl_box, fl_set, reducible
from .cyclic import PreProof, check_cyclic_proof, check_gtc, derivation_graph
from .game import Countermodel, Proof, decide, solve, strategy_to_model, strategy_to_proof
from .kernel import DerivationTree, RuleInstance, applicable_rule_schemas, check_proof, check_rule_instance
from .kripke import KripkeModel, find_countermodel_bounded, satisfies, sequent_holds_at
from .prooffile import read_proof, write_proof
from .syntax import Sequent, length, parse_formula, parse_program, parse_sequent, render

__all__ = [
    "ValidityOracle", "canonical_counter_model", "saturate",
    "default_schedule", "fl", "fl_box", "fl_set", "reducible",
    "PreProof", "check_cyclic_proof", "check_gtc", "derivation_graph",
    "Countermodel", "Proof", "decide", "solve", "strategy_to_model", "strategy_to_proof",
    "DerivationTree", "RuleInstance", "applicable_rule_schemas", "check_proof", "check_rule_instance",
    "KripkeModel", "find_countermodel_bounded", "satisfies", "sequent_holds_at",
    "read_proof", "write_proof",
    "Sequent", "length", "parse_formula", "parse_program", "parse_sequent", "render",
]

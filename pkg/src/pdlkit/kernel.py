"""Sequent rules, derivation trees and the well-founded proof checker.

Rules are checked, never inferred: each node names its rule and, where the
rule has one, its principal formula (and the cut formula for Cut).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Iterable, Optional

from .closure import ordered
from .syntax import (
    BOTTOM, TOP, Atom, Box, Choice, Formula, Implies, Program, RevBox, Seq,
    Sequent, Star, Test, conj, disj, is_pdl, neg, render,
)

__all__ = [
    "RULES", "SYSTEMS", "RuleInstance", "DerivationTree", "Violation",
    "SchemaMismatch", "check_rule_instance", "check_proof", "applicable_rule_schemas",
    "big_conj", "big_disj", "char_wff", "divisions", "build_derived", "DERIVED_RULES",
    "leaf", "node", "iter_nodes", "subtree",
]

RULES = (
    "Ax", "Bot", "ImpL", "ImpR", "Wk", "Cut", "BoxModal", "RevBoxModal",
    "SeqL", "SeqR", "ChoiceL", "ChoiceR", "StarL", "StarR", "TestL", "TestR", "Cs", "K",
)

_GTPDL = frozenset(RULES) - {"Cs", "K"}
SYSTEMS = {
    "GTPDL": _GTPDL,
    "CGTPDL": (_GTPDL - {"StarR"}) | {"Cs"},
    "CGPDL": (_GTPDL - {"StarR", "BoxModal", "RevBoxModal"}) | {"Cs", "K"},
}

_NO_PRINCIPAL = {"Wk", "Cut"}
_OPTIONAL_PRINCIPAL = {"Ax", "Bot"}
_ARITY = {
    "Ax": 0, "Bot": 0, "ImpL": 2, "ImpR": 1, "Wk": 1, "Cut": 2, "BoxModal": 1,
    "RevBoxModal": 1, "SeqL": 1, "SeqR": 1, "ChoiceL": 1, "ChoiceR": 2, "StarL": 1,
    "StarR": 1, "TestL": 2, "TestR": 1, "Cs": 2, "K": 1,
}


@dataclass(frozen=True)
class RuleInstance:
    rule_name: str
    principal: Optional[Formula] = None
    cut_formula: Optional[Formula] = None

    def __post_init__(self):
        if self.rule_name not in RULES:
            raise ValueError(f"unknown rule {self.rule_name!r}")


@dataclass(frozen=True)
class DerivationTree:
    """A node of a derivation; ``rule is None`` marks an open leaf (a bud)."""

    conclusion: Sequent
    rule: Optional[RuleInstance] = None
    premises: tuple = ()
    bud: Optional[str] = None

    def __post_init__(self):
        object.__setattr__(self, "premises", tuple(self.premises))
        if self.rule is None and self.premises:
            raise ValueError("an open leaf has no premises")


@dataclass(frozen=True)
class Violation:
    path: tuple
    message: str

    def __str__(self):
        where = ".".join(map(str, self.path)) or "root"
        return f"at {where}: {self.message}"


def leaf(seq: Sequent, bud: Optional[str] = None) -> DerivationTree:
    return DerivationTree(seq, None, (), bud)


def node(seq: Sequent, rule: str, premises: Iterable[DerivationTree] = (),
         principal: Optional[Formula] = None, cut: Optional[Formula] = None) -> DerivationTree:
    return DerivationTree(seq, RuleInstance(rule, principal, cut), tuple(premises))


def iter_nodes(tree: DerivationTree, path: tuple = ()):
    """Yield ``(path, node)`` in preorder; paths are child-index tuples."""
    stack = [(path, tree)]
    while stack:
        p, t = stack.pop()
        yield p, t
        for i in reversed(range(len(t.premises))):
            stack.append((p + (i,), t.premises[i]))


def subtree(tree: DerivationTree, path: Iterable[int]) -> DerivationTree:
    for i in path:
        if not 0 <= i < len(tree.premises):
            raise KeyError(f"no child {i} on path")
        tree = tree.premises[i]
    return tree


# -- rule checking --------------------------------------------------------------

def _show(fs: Iterable[Formula]) -> str:
    return "{" + ", ".join(render(f) for f in ordered(fs)) + "}"


def _context_check(sets: list[frozenset], extras: list[frozenset], side: str) -> list[str]:
    """A shared context C with sets[j] = C | extras[j] exists iff this passes."""
    problems = []
    for s, e in zip(sets, extras):
        missing = e - s
        if missing:
            problems.append(f"{side}: expected {_show(missing)} to be present")
    if problems:
        return problems
    lower = frozenset().union(*(s - e for s, e in zip(sets, extras)))
    upper = frozenset.intersection(*sets)
    if not lower <= upper:
        problems.append(f"{side}: context mismatch, {_show(lower - upper)} not shared by all sequents")
    return problems


def _shared_context(conclusion: Sequent, premises: list[Sequent],
                    concl_extra: tuple, prem_extras: list[tuple]) -> list[str]:
    sides = [conclusion] + premises
    extras = [concl_extra] + prem_extras
    problems = _context_check([s.ant for s in sides], [frozenset(e[0]) for e in extras], "antecedent")
    problems += _context_check([s.cons for s in sides], [frozenset(e[1]) for e in extras], "consequent")
    return problems


def _boxed(kind: type, prog: Program, fs: Iterable[Formula]) -> frozenset:
    return frozenset(kind(prog, f) for f in fs)


def _check_modal(conclusion: Sequent, prem: Sequent, pr: Formula, kind: type, dual: type) -> list[str]:
    want_ant = _boxed(kind, pr.prog, prem.ant)
    problems = []
    if conclusion.ant != want_ant:
        problems.append(
            f"antecedent must be exactly {_show(want_ant)}; differs by "
            f"{_show(conclusion.ant ^ want_ant)}"
        )
    for delta in (conclusion.cons - {pr}, conclusion.cons):
        if prem.cons == {pr.body} | _boxed(dual, pr.prog, delta):
            break
    else:
        want = {pr.body} | _boxed(dual, pr.prog, conclusion.cons - {pr})
        problems.append(
            f"premise consequent must be {_show(want)}; differs by {_show(prem.cons ^ want)}"
        )
    return problems


def _check_star_right(conclusion: Sequent, prem: Sequent, pr: Formula) -> list[str]:
    prog, body = pr.prog, pr.body
    problems = []
    if conclusion.cons != {pr}:
        problems.append(f"conclusion consequent must be exactly {{{render(pr)}}}")
    if prem.cons != {Box(prog.body, body)}:
        problems.append(f"premise consequent must be exactly {{{render(Box(prog.body, body))}}}")
    if body not in prem.ant:
        problems.append(f"premise antecedent lacks {render(body)}")
    else:
        for gamma in (prem.ant - {body}, prem.ant):
            if conclusion.ant == _boxed(Box, prog, gamma) | {body}:
                break
        else:
            want = _boxed(Box, prog, prem.ant - {body}) | {body}
            problems.append(
                f"conclusion antecedent must be {_show(want)}; differs by "
                f"{_show(conclusion.ant ^ want)}"
            )
    return problems


def _principal_shape(rule: str, pr: Formula) -> bool:
    if rule in ("ImpL", "ImpR"):
        return isinstance(pr, Implies)
    if rule == "BoxModal":
        return isinstance(pr, Box)
    if rule == "RevBoxModal":
        return isinstance(pr, RevBox)
    if rule == "K":
        return isinstance(pr, Box)
    if not isinstance(pr, Box):
        return False
    kind = {"SeqL": Seq, "SeqR": Seq, "ChoiceL": Choice, "ChoiceR": Choice,
            "StarL": Star, "StarR": Star, "Cs": Star, "TestL": Test, "TestR": Test}[rule]
    return isinstance(pr.prog, kind)


_LEFT = {"ImpL", "SeqL", "ChoiceL", "StarL", "TestL"}


def _instance_formulas(conclusion: Sequent, premises: list[Sequent], rule: RuleInstance):
    for s in [conclusion] + premises:
        yield from s.ant
        yield from s.cons
    if rule.principal is not None:
        yield rule.principal
    if rule.cut_formula is not None:
        yield rule.cut_formula


def check_rule_instance(system: str, conclusion: Sequent, premises: list[Sequent],
                        rule: RuleInstance) -> list[str]:
    """Return the list of problems with one rule application (empty when valid)."""
    if system not in SYSTEMS:
        raise ValueError(f"unknown system {system!r}")
    name = rule.rule_name
    if name not in SYSTEMS[system]:
        return [f"rule {name} not in system {system}"]
    premises = list(premises)
    if len(premises) != _ARITY[name]:
        return [f"{name} needs {_ARITY[name]} premises, got {len(premises)}"]
    if system == "CGPDL":
        bad = [f for f in _instance_formulas(conclusion, premises, rule) if not is_pdl(f)]
        if bad:
            return [f"non-PDL formula {render(bad[0])} in {system}"]
    pr = rule.principal
    if name == "Cut":
        if rule.cut_formula is None:
            return ["Cut needs a cut formula"]
    elif rule.cut_formula is not None:
        return [f"{name} takes no cut formula"]
    if name in _NO_PRINCIPAL:
        if pr is not None:
            return [f"{name} takes no principal formula"]
    elif name not in _OPTIONAL_PRINCIPAL:
        if pr is None:
            return [f"{name} needs a principal formula"]
        if not _principal_shape(name, pr):
            return [f"principal {render(pr)} has the wrong shape for {name}"]
        side = conclusion.ant if name in _LEFT else conclusion.cons
        if pr not in side:
            where = "antecedent" if name in _LEFT else "consequent"
            return [f"principal {render(pr)} missing from the conclusion {where}"]

    if name == "Ax":
        shared = conclusion.ant & conclusion.cons
        if not shared:
            return ["Ax needs a formula on both sides"]
        if pr is not None and pr not in shared:
            return [f"principal {render(pr)} is not on both sides"]
        return []
    if name == "Bot":
        if BOTTOM not in conclusion.ant:
            return ["Bot needs false in the antecedent"]
        if pr is not None and pr is not BOTTOM:
            return ["Bot principal must be false"]
        return []
    if name == "Wk":
        (prem,) = premises
        problems = []
        if not prem.ant <= conclusion.ant:
            problems.append(f"antecedent: premise has extra {_show(prem.ant - conclusion.ant)}")
        if not prem.cons <= conclusion.cons:
            problems.append(f"consequent: premise has extra {_show(prem.cons - conclusion.cons)}")
        return problems
    if name == "Cut":
        phi = rule.cut_formula
        return _shared_context(conclusion, premises, ((), ()), [((), (phi,)), ((phi,), ())])
    if name in ("BoxModal", "RevBoxModal"):
        kind, dual = (Box, RevBox) if name == "BoxModal" else (RevBox, Box)
        return _check_modal(conclusion, premises[0], pr, kind, dual)
    if name == "StarR":
        return _check_star_right(conclusion, premises[0], pr)
    if name == "K":
        (prem,) = premises
        problems = []
        if prem.cons != {pr.body}:
            problems.append(f"premise consequent must be exactly {{{render(pr.body)}}}")
        missing = _boxed(Box, pr.prog, prem.ant) - conclusion.ant
        if missing:
            problems.append(f"conclusion antecedent lacks {_show(missing)}")
        return problems

    left = ((pr,), ())
    right = ((), (pr,))
    if name == "ImpL":
        return _shared_context(conclusion, premises, left, [((), (pr.lhs,)), ((pr.rhs,), ())])
    if name == "ImpR":
        return _shared_context(conclusion, premises, right, [((pr.lhs,), (pr.rhs,))])
    prog, body = pr.prog, pr.body
    if name == "SeqL":
        return _shared_context(conclusion, premises, left, [((Box(prog.first, Box(prog.second, body)),), ())])
    if name == "SeqR":
        return _shared_context(conclusion, premises, right, [((), (Box(prog.first, Box(prog.second, body)),))])
    if name == "ChoiceL":
        return _shared_context(conclusion, premises, left,
                               [((Box(prog.left, body), Box(prog.right, body)), ())])
    if name == "ChoiceR":
        return _shared_context(conclusion, premises, right,
                               [((), (Box(prog.left, body),)), ((), (Box(prog.right, body),))])
    if name == "StarL":
        return _shared_context(conclusion, premises, left, [((body, Box(prog.body, pr)), ())])
    if name == "Cs":
        return _shared_context(conclusion, premises, right, [((), (body,)), ((), (Box(prog.body, pr),))])
    if name == "TestL":
        return _shared_context(conclusion, premises, left, [((), (prog.cond,)), ((body,), ())])
    if name == "TestR":
        return _shared_context(conclusion, premises, right, [((prog.cond,), (body,))])
    raise AssertionError(name)


def check_proof(system: str, tree: DerivationTree) -> list[Violation]:
    """Check a well-founded derivation; open leaves are violations."""
    out = []
    for path, t in iter_nodes(tree):
        if t.rule is None:
            out.append(Violation(path, "open leaf"))
            continue
        for msg in check_rule_instance(system, t.conclusion, [p.conclusion for p in t.premises], t.rule):
            out.append(Violation(path, msg))
    return out


def applicable_rule_schemas(system: str, s: Sequent) -> list[str]:
    """Names of rules having at least one instance with conclusion ``s``."""
    gamma, delta = s.ant, s.cons
    boxes_r = [f for f in delta if isinstance(f, Box)]

    def has(side, rule):
        return any(_principal_shape(rule, f) for f in side)

    def modal(kind):
        for f in delta:
            if isinstance(f, kind) and all(isinstance(g, kind) and g.prog is f.prog for g in gamma):
                return True
        return False

    def star_right():
        if len(delta) != 1:
            return False
        (f,) = delta
        if not _principal_shape("StarR", f) or f.body not in gamma:
            return False
        return all((isinstance(g, Box) and g.prog is f.prog) or g is f.body for g in gamma)

    test = {
        "Ax": bool(gamma & delta),
        "Bot": BOTTOM in gamma,
        "ImpL": has(gamma, "ImpL"),
        "ImpR": has(delta, "ImpR"),
        "Wk": bool(gamma or delta),
        "Cut": True,
        "BoxModal": modal(Box),
        "RevBoxModal": modal(RevBox),
        "SeqL": has(gamma, "SeqL"),
        "SeqR": has(delta, "SeqR"),
        "ChoiceL": has(gamma, "ChoiceL"),
        "ChoiceR": has(delta, "ChoiceR"),
        "StarL": has(gamma, "StarL"),
        "StarR": star_right(),
        "TestL": has(gamma, "TestL"),
        "TestR": has(delta, "TestR"),
        "Cs": has(delta, "Cs"),
        "K": bool(boxes_r),
    }
    allowed = SYSTEMS[system]
    return [r for r in RULES if r in allowed and test[r]]


# -- characteristic formulas --------------------------------------------------

def big_conj(fs: Iterable[Formula]) -> Formula:
    items = ordered(set(fs))
    if not items:
        return TOP
    out = items[0]
    for f in items[1:]:
        out = conj(out, f)
    return out


def big_disj(fs: Iterable[Formula]) -> Formula:
    items = ordered(set(fs))
    if not items:
        return BOTTOM
    out = items[0]
    for f in items[1:]:
        out = disj(out, f)
    return out


def char_wff(s: Sequent) -> Formula:
    return Implies(big_conj(s.ant), big_disj(s.cons))


def divisions(xs: Iterable[Formula]) -> frozenset:
    items = ordered(set(xs))
    out = set()
    for bits in product((False, True), repeat=len(items)):
        left = [f for f, b in zip(items, bits) if b]
        right = [f for f, b in zip(items, bits) if not b]
        out.add(char_wff(Sequent(left, right)))
    return frozenset(out)


# -- derived rules ----------------------------------------------------------------

class SchemaMismatch(ValueError):
    pass


def _seq(ant, cons) -> Sequent:
    return Sequent(ant, cons)


def _wk(target: Sequent, t: DerivationTree) -> DerivationTree:
    if t.conclusion == target:
        return t
    return node(target, "Wk", [t])


def _split_right(t: DerivationTree, *fs: Formula) -> frozenset:
    missing = [f for f in fs if f not in t.conclusion.cons]
    if missing:
        raise SchemaMismatch(f"premise consequent lacks {render(missing[0])}")
    return t.conclusion.cons - set(fs)


def _split_left(t: DerivationTree, *fs: Formula) -> frozenset:
    missing = [f for f in fs if f not in t.conclusion.ant]
    if missing:
        raise SchemaMismatch(f"premise antecedent lacks {render(missing[0])}")
    return t.conclusion.ant - set(fs)


def _same(a, b, what):
    if a != b:
        raise SchemaMismatch(f"premises disagree on the {what}")


def not_left(t: DerivationTree, phi: Formula) -> DerivationTree:
    """From Γ ⊢ Δ, φ derive Γ, ¬φ ⊢ Δ."""
    gamma, delta = t.conclusion.ant, _split_right(t, phi)
    bot = node(_seq(gamma | {BOTTOM}, delta), "Bot", principal=BOTTOM)
    return node(_seq(gamma | {neg(phi)}, delta), "ImpL", [t, bot], principal=neg(phi))


def not_right(t: DerivationTree, phi: Formula) -> DerivationTree:
    """From Γ, φ ⊢ Δ derive Γ ⊢ Δ, ¬φ."""
    gamma, delta = _split_left(t, phi), t.conclusion.cons
    inner = _wk(_seq(gamma | {phi}, delta | {BOTTOM}), t)
    return node(_seq(gamma, delta | {neg(phi)}), "ImpR", [inner], principal=neg(phi))


def or_left(t0: DerivationTree, t1: DerivationTree, phi: Formula, psi: Formula) -> DerivationTree:
    gamma, delta = _split_left(t0, phi), t0.conclusion.cons
    _same(gamma, _split_left(t1, psi), "antecedent context")
    _same(delta, t1.conclusion.cons, "consequent")
    left = not_right(t0, phi)
    return node(_seq(gamma | {disj(phi, psi)}, delta), "ImpL", [left, t1], principal=disj(phi, psi))


def or_right(t: DerivationTree, phi: Formula, psi: Formula) -> DerivationTree:
    gamma, delta = t.conclusion.ant, _split_right(t, phi, psi)
    bot = node(_seq(gamma | {BOTTOM}, delta | {psi}), "Bot", principal=BOTTOM)
    mid = node(_seq(gamma | {neg(phi)}, delta | {psi}), "ImpL", [t, bot], principal=neg(phi))
    return node(_seq(gamma, delta | {disj(phi, psi)}), "ImpR", [mid], principal=disj(phi, psi))


def and_left(t: DerivationTree, phi: Formula, psi: Formula) -> DerivationTree:
    gamma, delta = _split_left(t, phi, psi), t.conclusion.cons
    inner = Implies(phi, neg(psi))
    s1 = _wk(_seq(gamma | {phi, psi}, delta | {BOTTOM}), t)
    s2 = node(_seq(gamma | {phi}, delta | {neg(psi)}), "ImpR", [s1], principal=neg(psi))
    s3 = node(_seq(gamma, delta | {inner}), "ImpR", [s2], principal=inner)
    bot = node(_seq(gamma | {BOTTOM}, delta), "Bot", principal=BOTTOM)
    return node(_seq(gamma | {conj(phi, psi)}, delta), "ImpL", [s3, bot], principal=conj(phi, psi))


def and_right(t0: DerivationTree, t1: DerivationTree, phi: Formula, psi: Formula) -> DerivationTree:
    gamma, delta = t0.conclusion.ant, _split_right(t0, phi)
    _same(gamma, t1.conclusion.ant, "antecedent")
    _same(delta, _split_right(t1, psi), "consequent context")
    inner = Implies(phi, neg(psi))
    bot_d = delta | {BOTTOM}
    left = _wk(_seq(gamma, bot_d | {phi}), t0)
    right = _wk(_seq(gamma, bot_d | {psi}), t1)
    bot = node(_seq(gamma | {BOTTOM}, bot_d), "Bot", principal=BOTTOM)
    neg_psi = node(_seq(gamma | {neg(psi)}, bot_d), "ImpL", [right, bot], principal=neg(psi))
    mid = node(_seq(gamma | {inner}, bot_d), "ImpL", [left, neg_psi], principal=inner)
    return node(_seq(gamma, delta | {conj(phi, psi)}), "ImpR", [mid], principal=conj(phi, psi))


def star_left_base(t: DerivationTree, prog: Program, phi: Formula) -> DerivationTree:
    """From Γ, φ ⊢ Δ derive Γ, [π*]φ ⊢ Δ (StarL then Wk)."""
    gamma, delta = _split_left(t, phi), t.conclusion.cons
    star = Box(Star(prog), phi)
    step = Box(prog, star)
    inner = _wk(_seq(gamma | {phi, step}, delta), t)
    return node(_seq(gamma | {star}, delta), "StarL", [inner], principal=star)


def star_left_step(t: DerivationTree, prog: Program, phi: Formula) -> DerivationTree:
    """From Γ, [π][π*]φ ⊢ Δ derive Γ, [π*]φ ⊢ Δ."""
    star = Box(Star(prog), phi)
    step = Box(prog, star)
    gamma, delta = _split_left(t, step), t.conclusion.cons
    inner = _wk(_seq(gamma | {phi, step}, delta), t)
    return node(_seq(gamma | {star}, delta), "StarL", [inner], principal=star)


def choice_left_wk(t: DerivationTree, left: Program, right: Program, phi: Formula, i: int) -> DerivationTree:
    parts = (Box(left, phi), Box(right, phi))
    gamma, delta = _split_left(t, parts[i]), t.conclusion.cons
    whole = Box(Choice(left, right), phi)
    inner = _wk(_seq(gamma | set(parts), delta), t)
    return node(_seq(gamma | {whole}, delta), "ChoiceL", [inner], principal=whole)


def cut_wk(t0: DerivationTree, t1: DerivationTree, phi: Formula) -> DerivationTree:
    """From Γ ⊢ φ, Δ and Γ', φ ⊢ Δ' derive Γ, Γ' ⊢ Δ, Δ'."""
    gamma, delta = t0.conclusion.ant, _split_right(t0, phi)
    gamma2, delta2 = _split_left(t1, phi), t1.conclusion.cons
    ant, cons = gamma | gamma2, delta | delta2
    left = _wk(_seq(ant, cons | {phi}), t0)
    right = _wk(_seq(ant | {phi}, cons), t1)
    return node(_seq(ant, cons), "Cut", [left, right], cut=phi)


def big_and_left(t: DerivationTree, gamma2: Iterable[Formula]) -> DerivationTree:
    """From Γ, Γ' ⊢ Δ derive Γ, ⋀Γ' ⊢ Δ (Γ is what remains after removing Γ')."""
    items = ordered(set(gamma2))
    gamma = _split_left(t, *items)
    return _big_and_left(t, gamma, items)


def _big_and_left(t, gamma, items):
    delta = t.conclusion.cons
    if not items:
        return _wk(_seq(gamma | {TOP}, delta), t)
    if len(items) == 1:
        return t
    *init, last = items
    sub = _big_and_left(t, gamma | {last}, init)
    return and_left(sub, big_conj(init), last)


def big_and_right(ts: list[DerivationTree], delta2: Iterable[Formula], gamma=None, delta=None) -> DerivationTree:
    """From Γ ⊢ Δ, φ for each φ in Δ' (schedule order) derive Γ ⊢ Δ, ⋀Δ'."""
    items = ordered(set(delta2))
    if len(ts) != len(items):
        raise SchemaMismatch("one premise per conjunct required")
    if not items:
        if gamma is None or delta is None:
            raise SchemaMismatch("empty conjunction needs an explicit context")
        gamma, delta = frozenset(gamma), frozenset(delta)
        inner = node(_seq(gamma | {BOTTOM}, delta | {BOTTOM}), "Bot", principal=BOTTOM)
        return node(_seq(gamma, delta | {TOP}), "ImpR", [inner], principal=TOP)
    if len(items) == 1:
        return ts[0]
    sub = big_and_right(ts[:-1], items[:-1])
    return and_right(sub, ts[-1], big_conj(items[:-1]), items[-1])


def big_or_left(ts: list[DerivationTree], gamma2: Iterable[Formula], gamma=None, delta=None) -> DerivationTree:
    """From Γ, ψ ⊢ Δ for each ψ in Γ' (schedule order) derive Γ, ⋁Γ' ⊢ Δ."""
    items = ordered(set(gamma2))
    if len(ts) != len(items):
        raise SchemaMismatch("one premise per disjunct required")
    if not items:
        if gamma is None or delta is None:
            raise SchemaMismatch("empty disjunction needs an explicit context")
        return node(_seq(frozenset(gamma) | {BOTTOM}, delta), "Bot", principal=BOTTOM)
    if len(items) == 1:
        return ts[0]
    sub = big_or_left(ts[:-1], items[:-1])
    return or_left(sub, ts[-1], big_disj(items[:-1]), items[-1])


def big_or_right(t: DerivationTree, delta2: Iterable[Formula]) -> DerivationTree:
    """From Γ ⊢ Δ, Δ' derive Γ ⊢ Δ, ⋁Δ'."""
    items = ordered(set(delta2))
    delta = _split_right(t, *items)
    return _big_or_right(t, delta, items)


def _big_or_right(t, delta, items):
    gamma = t.conclusion.ant
    if not items:
        return _wk(_seq(gamma, delta | {BOTTOM}), t)
    if len(items) == 1:
        return t
    *init, last = items
    sub = _big_or_right(t, delta | {last}, init)
    return or_right(sub, big_disj(init), last)


DERIVED_RULES = {
    "notL": not_left, "notR": not_right, "orL": or_left, "orR": or_right,
    "andL": and_left, "andR": and_right, "starLBase": star_left_base,
    "starLStep": star_left_step, "choiceLWk": choice_left_wk, "cutWk": cut_wk,
    "bigAndL": big_and_left, "bigAndR": big_and_right, "bigOrL": big_or_left,
    "bigOrR": big_or_right,
}


def build_derived(rule: str, *inputs, **params) -> DerivationTree:
    """Expand a derived rule into primitive steps; premises are given as trees."""
    try:
        builder = DERIVED_RULES[rule]
    except KeyError:
        raise SchemaMismatch(f"unknown derived rule {rule!r}") from None
    return builder(*inputs, **params)

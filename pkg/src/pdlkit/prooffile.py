"""Reading and writing derivations as s-expressions.

    (node ImpR principal: "p -> q" (seq "|- p -> q")
      (node Ax (seq "p |- q, p")))
    (bud b0 (seq "p |- q"))
    (companion b0 (0 1))

Formulas and sequents are quoted so that their own parentheses never clash
with the tree structure.
"""

from __future__ import annotations

import re

from .cyclic import PreProof
from .kernel import RULES, DerivationTree, RuleInstance, iter_nodes
from .syntax import ParseError, Sequent, parse_formula, parse_sequent, render

__all__ = ["ProofFormatError", "read_proof", "write_proof"]


class ProofFormatError(ValueError):
    pass


_TOK = re.compile(r'\s*(?:(\()|(\))|"([^"]*)"|([^\s()"]+))')


def _tokens(text: str):
    pos = 0
    out = []
    while True:
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos >= len(text):
            return out
        if text[pos] == ";":
            end = text.find("\n", pos)
            pos = len(text) if end < 0 else end
            continue
        m = _TOK.match(text, pos)
        if m is None:
            raise ProofFormatError(f"bad character at offset {pos}")
        if m.group(1):
            out.append("(")
        elif m.group(2):
            out.append(")")
        elif m.group(3) is not None:
            out.append(("str", m.group(3)))
        else:
            out.append(m.group(4))
        pos = m.end()


def _sexprs(tokens):
    stack = [[]]
    for tok in tokens:
        if tok == "(":
            stack.append([])
        elif tok == ")":
            if len(stack) == 1:
                raise ProofFormatError("unbalanced ')'")
            done = stack.pop()
            stack[-1].append(done)
        else:
            stack[-1].append(tok)
    if len(stack) != 1:
        raise ProofFormatError("unbalanced '('")
    return stack[0]


def _string(x, what):
    if not (isinstance(x, tuple) and x[0] == "str"):
        raise ProofFormatError(f"{what} must be a quoted string")
    return x[1]


def _formula(x, what):
    try:
        return parse_formula(_string(x, what))
    except ParseError as exc:
        raise ProofFormatError(f"{what}: {exc}") from None


def _sequent(x):
    if not (isinstance(x, list) and len(x) == 2 and x[0] == "seq"):
        raise ProofFormatError("expected (seq \"...\")")
    try:
        return parse_sequent(_string(x[1], "sequent"))
    except ParseError as exc:
        raise ProofFormatError(f"sequent: {exc}") from None


def _tree(x) -> DerivationTree:
    if not isinstance(x, list) or not x:
        raise ProofFormatError("expected a node or bud")
    head = x[0]
    if head == "bud":
        if len(x) != 3 or not isinstance(x[1], str):
            raise ProofFormatError("expected (bud <id> (seq ...))")
        return DerivationTree(_sequent(x[2]), None, (), x[1])
    if head != "node":
        raise ProofFormatError(f"unknown entry {head!r}")
    if len(x) < 3 or x[1] not in RULES:
        raise ProofFormatError(f"unknown rule {x[1] if len(x) > 1 else ''!r}")
    rule = x[1]
    principal = cut = seq = None
    children = []
    i = 2
    while i < len(x):
        item = x[i]
        if item == "principal:":
            principal = _formula(x[i + 1] if i + 1 < len(x) else None, "principal")
            i += 2
        elif item == "cut:":
            cut = _formula(x[i + 1] if i + 1 < len(x) else None, "cut")
            i += 2
        elif isinstance(item, list) and item and item[0] == "seq":
            if seq is not None:
                raise ProofFormatError("two sequents on one node")
            seq = _sequent(item)
            i += 1
        elif isinstance(item, list):
            children.append(_tree(item))
            i += 1
        else:
            raise ProofFormatError(f"unexpected {item!r} in node")
    if seq is None:
        raise ProofFormatError("node without a sequent")
    return DerivationTree(seq, RuleInstance(rule, principal, cut), tuple(children))


def read_proof(text: str) -> PreProof:
    """Parse one derivation plus optional ``(companion <bud> (<path>))`` entries."""
    items = _sexprs(_tokens(text))
    trees, companions = [], {}
    for item in items:
        if isinstance(item, list) and item and item[0] == "companion":
            if len(item) != 3 or not isinstance(item[1], str) or not isinstance(item[2], list):
                raise ProofFormatError("expected (companion <bud-id> (<index> ...))")
            try:
                path = tuple(int(i) for i in item[2])
            except (TypeError, ValueError):
                raise ProofFormatError("companion path must list integers") from None
            if item[1] in companions:
                raise ProofFormatError(f"two companions for {item[1]}")
            companions[item[1]] = path
        else:
            trees.append(_tree(item))
    if len(trees) != 1:
        raise ProofFormatError(f"expected exactly one derivation, found {len(trees)}")
    return PreProof(trees[0], companions)


def _write(t: DerivationTree, indent: int, lines: list):
    pad = "  " * indent
    seq = str(t.conclusion)
    if t.rule is None:
        lines.append(f'{pad}(bud {t.bud} (seq "{seq}"))')
        return
    head = f"{pad}(node {t.rule.rule_name}"
    if t.rule.principal is not None:
        head += f' principal: "{render(t.rule.principal)}"'
    if t.rule.cut_formula is not None:
        head += f' cut: "{render(t.rule.cut_formula)}"'
    head += f' (seq "{seq}")'
    if not t.premises:
        lines.append(head + ")")
        return
    lines.append(head)
    for c in t.premises:
        _write(c, indent + 1, lines)
    lines[-1] += ")"


def write_proof(p: PreProof | DerivationTree) -> str:
    if isinstance(p, DerivationTree):
        p = PreProof(p, {})
    lines: list = []
    _write(p.tree, 0, lines)
    for bud in sorted(p.companions):
        path = " ".join(map(str, p.companions[bud]))
        lines.append(f"(companion {bud} ({path}))")
    return "\n".join(lines) + "\n"

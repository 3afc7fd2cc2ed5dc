"""Pre-proofs, derivation graphs, traces and the global trace condition.

The trace condition is decided by a composition closure in the style of
size-change termination: every path through the graph induces a relation
on consequent formulas with a progress bit per pair.  The condition holds
iff every idempotent relation on a cycle has a progressing self-pair.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Optional

from .kernel import DerivationTree, RuleInstance, Violation, check_rule_instance, iter_nodes
from .syntax import Box, Formula, Sequent


__all__ = [
    "PreProof", "GraphEdge", "DerivationGraph", "TraceEdge", "Lasso",
    "trace_relation", "derivation_graph", "check_gtc", "check_cyclic_proof",
    "check_companions",
]


@dataclass(frozen=True)
class TraceEdge:
    from_formula: object
    to_formula: object
    progressing: bool = False


@dataclass
class PreProof:
    tree: DerivationTree
    companions: dict = field(default_factory=dict)

    def buds(self):
        return [(p, t) for p, t in iter_nodes(self.tree) if t.rule is None]


@dataclass(frozen=True)
class GraphEdge:
    src: int
    dst: int
    rule: Optional[RuleInstance]
    index: int
    traces: frozenset


@dataclass
class DerivationGraph:
    """Vertices carry a label (a sequent for graphs built from pre-proofs)."""

    labels: list
    edges: list
    paths: list = field(default_factory=list)

    def out_edges(self) -> list[list[GraphEdge]]:
        out = [[] for _ in self.labels]
        for e in self.edges:
            out[e.src].append(e)
        return out


@dataclass(frozen=True)
class Lasso:
    stem: tuple
    cycle: tuple

    def __str__(self):
        stem = " -> ".join(map(str, self.stem)) or "(empty)"
        cyc = " -> ".join(map(str, self.cycle + self.cycle[:1]))
        return f"stem {stem}; cycle {cyc}"


def trace_relation(conclusion: Sequent, premise: Sequent, rule: RuleInstance, index: int) -> frozenset:
    """Trace pairs across one edge from ``conclusion`` to its ``index``-th premise."""
    name, pr = rule.rule_name, rule.principal
    dc, dp = conclusion.cons, premise.cons
    if name in ("BoxModal", "RevBoxModal", "K"):
        if pr is not None and pr in dc and pr.body in dp:
            return frozenset([TraceEdge(pr, pr.body, False)])
        return frozenset()
    out = {TraceEdge(f, f, False) for f in dc & dp}
    rewrite = None
    progress = False
    if pr is not None and pr in dc:
        if name == "ImpR":
            rewrite = pr.rhs
        elif name == "SeqR":
            rewrite = Box(pr.prog.first, Box(pr.prog.second, pr.body))
        elif name == "ChoiceR":
            rewrite = Box(pr.prog.left if index == 0 else pr.prog.right, pr.body)
        elif name == "TestR":
            rewrite = pr.body
        elif name == "Cs":
            if index == 0:
                rewrite = pr.body
            else:
                rewrite, progress = Box(pr.prog.body, pr), True
    if rewrite is not None and rewrite in dp:
        out.add(TraceEdge(pr, rewrite, progress))
    return frozenset(out)


def check_companions(p: PreProof) -> list[Violation]:
    out = []
    seen = set()
    for path, t in iter_nodes(p.tree):
        if t.rule is not None:
            continue
        if t.bud is None:
            out.append(Violation(path, "open leaf without a bud id"))
            continue
        if t.bud in seen:
            out.append(Violation(path, f"bud id {t.bud} used twice"))
            continue
        seen.add(t.bud)
        target = p.companions.get(t.bud)
        if target is None:
            out.append(Violation(path, f"bud {t.bud} has no companion"))
            continue
        comp = p.tree
        try:
            for i in target:
                comp = comp.premises[i]
        except (IndexError, TypeError):
            out.append(Violation(path, f"companion path {tuple(target)} of {t.bud} does not exist"))
            continue
        if comp.rule is None:
            out.append(Violation(path, f"companion of {t.bud} is not an inner node"))
        elif comp.conclusion != t.conclusion:
            out.append(Violation(path, f"companion of {t.bud} carries a different sequent"))
    for bud in p.companions:
        if bud not in seen:
            out.append(Violation((), f"companion entry for unknown bud {bud}"))
    return out


def derivation_graph(p: PreProof) -> DerivationGraph:
    """Identify every bud with its companion (the companion map must be valid)."""
    inner = [(path, t) for path, t in iter_nodes(p.tree) if t.rule is not None]
    index = {path: i for i, (path, _) in enumerate(inner)}
    labels = [t.conclusion for _, t in inner]
    edges = []
    for path, t in inner:
        for i, child in enumerate(t.premises):
            if child.rule is None:
                dst = index[tuple(p.companions[child.bud])]
            else:
                dst = index[path + (i,)]
            traces = trace_relation(t.conclusion, child.conclusion, t.rule, i)
            edges.append(GraphEdge(index[path], dst, t.rule, i, traces))
    return DerivationGraph(labels, edges, [path for path, _ in inner])


# -- composition closure ------------------------------------------------------------

def _normalise(pairs: Iterable) -> frozenset:
    best: dict = {}
    for f, g, b in pairs:
        best[(f, g)] = best.get((f, g), False) or b
    return frozenset((f, g, b) for (f, g), b in best.items())


def _compose(r: frozenset, s: frozenset) -> frozenset:
    by_src: dict = {}
    for g, h, b in s:
        by_src.setdefault(g, []).append((h, b))
    return _normalise((f, h, b1 or b2) for f, g, b1 in r for h, b2 in by_src.get(g, ()))


def _edge_relation(e: GraphEdge) -> frozenset:
    return _normalise((t.from_formula, t.to_formula, t.progressing) for t in e.traces)


def _stem(g: DerivationGraph, target: int, root: int = 0) -> tuple:
    if target == root:
        return ()
    prev = {root: None}
    queue = deque([root])
    out = g.out_edges()
    while queue:
        u = queue.popleft()
        for e in out[u]:
            if e.dst not in prev:
                prev[e.dst] = u
                queue.append(e.dst)
    if target not in prev:
        return ()
    path = []
    u = prev[target]
    while u is not None:
        path.append(u)
        u = prev[u]
    return tuple(reversed(path))


def check_gtc(g: DerivationGraph, limit: int = 200_000) -> Optional[Lasso]:
    """None when the trace condition holds, else a lasso with no progressing trace.

    ``limit`` bounds the number of closure elements examined.
    """
    out = g.out_edges()
    rel = {id(e): _edge_relation(e) for e in g.edges}
    seen: dict = {}
    queue = deque()
    for e in g.edges:
        key = (e.src, e.dst, rel[id(e)])
        if key not in seen:
            seen[key] = (e.src, e.dst)
            queue.append(key)
    while queue:
        u, v, r = key = queue.popleft()
        if u == v and _compose(r, r) == r and not any(f == h and b for f, h, b in r):
            return Lasso(_stem(g, u), _walk(seen, key))
        for e in out[v]:
            nxt = (u, e.dst, _compose(r, rel[id(e)]))
            if nxt not in seen:
                if len(seen) >= limit:
                    raise RuntimeError("trace closure exceeded its size limit")
                seen[nxt] = (key, e.dst)
                queue.append(nxt)
    return None


def _walk(seen: dict, key) -> tuple:
    """Vertices of the representative path of a closure element, minus its endpoint."""
    nodes = []
    while True:
        back = seen[key]
        if isinstance(back[0], int):
            nodes.extend([back[1], back[0]])
            break
        nodes.append(back[1])
        key = back[0]
    nodes.reverse()
    return tuple(nodes[:-1])


def check_cyclic_proof(system: str, p: PreProof) -> list[Violation]:
    """All rule instances, the companion map and the trace condition."""
    if system not in ("CGTPDL", "CGPDL"):
        raise ValueError("cyclic proofs live in CGTPDL or CGPDL")
    problems = check_companions(p)
    for path, t in iter_nodes(p.tree):
        if t.rule is None:
            continue
        for msg in check_rule_instance(system, t.conclusion, [c.conclusion for c in t.premises], t.rule):
            problems.append(Violation(path, msg))
    if problems:
        return problems
    g = derivation_graph(p)
    lasso = check_gtc(g)
    if lasso is not None:
        stem = [g.paths[i] for i in lasso.stem]
        cycle = [g.paths[i] for i in lasso.cycle]
        problems.append(GtcViolation((), "global trace condition fails", tuple(stem), tuple(cycle)))
    return problems


@dataclass(frozen=True)
class GtcViolation(Violation):
    stem: tuple = ()
    cycle: tuple = ()

    def __str__(self):
        show = lambda p: ".".join(map(str, p)) or "root"
        stem = " -> ".join(show(p) for p in self.stem) or "(empty)"
        cyc = " -> ".join(show(p) for p in self.cycle + self.cycle[:1])
        return f"{self.message}: stem {stem}; cycle {cyc}"

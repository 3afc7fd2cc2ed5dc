"""Finite Kripke models, model checking and a bounded countermodel search."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Hashable, Iterable, Optional

import numpy as np

from .syntax import (
    Atom, Bottom, Box, Choice, Formula, Implies, Program, Prop, RevBox, Seq,
    Sequent, Star, Test, atoms_of, props_of,
)

__all__ = [
    "KripkeModel", "EnumerationBudgetExceeded", "ModelFormatError",
    "program_relation", "extension", "satisfies", "sequent_holds_at",
    "find_countermodel_bounded", "read_model", "write_model",
    "generated_submodel", "bisimulation_quotient",
]

State = Hashable


@dataclass(frozen=True)
class KripkeModel:
    states: tuple
    edges: dict = field(default_factory=dict)
    valuation: dict = field(default_factory=dict)

    def __post_init__(self):
        states = tuple(self.states)
        if not states:
            raise ValueError("a model needs at least one state")
        if len(set(states)) != len(states):
            raise ValueError("duplicate state ids")
        known = set(states)
        edges = {}
        for name, pairs in self.edges.items():
            pairs = frozenset((a, b) for a, b in pairs)
            for a, b in pairs:
                if a not in known or b not in known:
                    raise ValueError(f"edge {a}->{b} of {name} uses an undeclared state")
            edges[name] = pairs
        valuation = {}
        for w, ps in self.valuation.items():
            if w not in known:
                raise ValueError(f"valuation for undeclared state {w}")
            valuation[w] = frozenset(ps)
        object.__setattr__(self, "states", states)
        object.__setattr__(self, "edges", edges)
        object.__setattr__(self, "valuation", valuation)

    def __hash__(self):
        return id(self)

    def props_at(self, w: State) -> frozenset:
        return self.valuation.get(w, frozenset())

    def relation(self, name: str) -> frozenset:
        return self.edges.get(name, frozenset())


# -- semantics ----------------------------------------------------------------

def _compose(r: frozenset, s: frozenset) -> frozenset:
    succ: dict = {}
    for a, b in s:
        succ.setdefault(a, set()).add(b)
    return frozenset((a, c) for a, b in r for c in succ.get(b, ()))


def _refl_trans(states: tuple, r: frozenset) -> frozenset:
    index = {w: i for i, w in enumerate(states)}
    n = len(states)
    reach = [[False] * n for _ in range(n)]
    for a, b in r:
        reach[index[a]][index[b]] = True
    for k in range(n):
        row_k = reach[k]
        for i in range(n):
            if reach[i][k]:
                row_i = reach[i]
                for j in range(n):
                    if row_k[j]:
                        row_i[j] = True
    for i in range(n):
        reach[i][i] = True
    return frozenset((states[i], states[j]) for i in range(n) for j in range(n) if reach[i][j])


class _Checker:
    """Evaluates formulas on one model, memoizing every subterm."""

    def __init__(self, m: KripkeModel):
        self.m = m
        self.ext: dict = {}
        self.rel: dict = {}

    def relation(self, p: Program) -> frozenset:
        got = self.rel.get(p)
        if got is not None:
            return got
        if isinstance(p, Atom):
            out = self.m.relation(p.name)
        elif isinstance(p, Seq):
            out = _compose(self.relation(p.first), self.relation(p.second))
        elif isinstance(p, Choice):
            out = self.relation(p.left) | self.relation(p.right)
        elif isinstance(p, Star):
            out = _refl_trans(self.m.states, self.relation(p.body))
        elif isinstance(p, Test):
            holds = self.extension(p.cond)
            out = frozenset((w, w) for w in holds)
        else:
            raise TypeError(f"not a program: {p!r}")
        self.rel[p] = out
        return out

    def extension(self, f: Formula) -> frozenset:
        got = self.ext.get(f)
        if got is not None:
            return got
        states = self.m.states
        if isinstance(f, Bottom):
            out = frozenset()
        elif isinstance(f, Prop):
            out = frozenset(w for w in states if f.name in self.m.props_at(w))
        elif isinstance(f, Implies):
            lhs, rhs = self.extension(f.lhs), self.extension(f.rhs)
            out = frozenset(w for w in states if w not in lhs or w in rhs)
        elif isinstance(f, (Box, RevBox)):
            body = self.extension(f.body)
            bad = set()
            for a, b in self.relation(f.prog):
                if isinstance(f, Box) and b not in body:
                    bad.add(a)
                elif isinstance(f, RevBox) and a not in body:
                    bad.add(b)
            out = frozenset(w for w in states if w not in bad)
        else:
            raise TypeError(f"not a formula: {f!r}")
        self.ext[f] = out
        return out


def program_relation(m: KripkeModel, p: Program) -> frozenset:
    return _Checker(m).relation(p)


def extension(m: KripkeModel, f: Formula) -> frozenset:
    return _Checker(m).extension(f)


def _check_state(m: KripkeModel, w: State) -> None:
    if w not in m.states:
        raise KeyError(f"unknown state {w!r}")


def satisfies(m: KripkeModel, w: State, f: Formula) -> bool:
    _check_state(m, w)
    return w in _Checker(m).extension(f)


def sequent_holds_at(m: KripkeModel, w: State, s: Sequent) -> bool:
    _check_state(m, w)
    checker = _Checker(m)
    if any(w not in checker.extension(f) for f in s.ant):
        return True
    return any(w in checker.extension(f) for f in s.cons)


# -- model reductions ---------------------------------------------------------

def generated_submodel(m: KripkeModel, root: State) -> KripkeModel:
    """Restrict to states reachable from ``root`` along any atomic program."""
    succ: dict = {}
    for pairs in m.edges.values():
        for a, b in pairs:
            succ.setdefault(a, set()).add(b)
    seen = [root]
    known = {root}
    for w in seen:
        for v in sorted(succ.get(w, ()), key=m.states.index):
            if v not in known:
                known.add(v)
                seen.append(v)
    keep = [w for w in m.states if w in known]
    edges = {a: {(x, y) for x, y in pairs if x in known} for a, pairs in m.edges.items()}
    val = {w: ps for w, ps in m.valuation.items() if w in known}
    return KripkeModel(tuple(keep), edges, val)


def bisimulation_quotient(m: KripkeModel, root: State) -> tuple[KripkeModel, State]:
    """Merge bisimilar states (forward modalities only); returns the image of ``root``."""
    names = sorted(m.edges)
    succ = {w: {a: set() for a in names} for w in m.states}
    for a in names:
        for x, y in m.edges[a]:
            succ[x][a].add(y)
    block = {w: m.props_at(w) for w in m.states}
    count = len(set(block.values()))
    while True:
        sig = {
            w: (block[w], tuple(frozenset(block[v] for v in succ[w][a]) for a in names))
            for w in m.states
        }
        ids: dict = {}
        for w in m.states:
            ids.setdefault(sig[w], len(ids))
        refined = {w: ids[sig[w]] for w in m.states}
        if len(ids) == count:
            break
        count = len(ids)
        block = refined
    rep: dict = {}
    for w in m.states:
        rep.setdefault(refined[w], w)
    states = tuple(rep[refined[w]] for w in m.states if rep[refined[w]] == w)
    edges = {a: {(rep[refined[x]], rep[refined[y]]) for x, y in m.edges[a]} for a in names}
    val = {w: m.props_at(w) for w in states if m.props_at(w)}
    return KripkeModel(states, edges, val), rep[refined[root]]


# -- bounded countermodel search -------------------------------------------------

class EnumerationBudgetExceeded(RuntimeError):
    """The number of candidate models exceeds the configured budget."""


@lru_cache(maxsize=64)
def _enumeration(k: int, atoms: tuple, props: tuple):
    """All models on k states over the given symbols, in the fixed order.

    Model index = edge code * 2^(|props|*k) + valuation code; the edge code
    packs one k*k block per program (row w = successors of state w), the
    valuation code one k-bit block per proposition.
    """
    val_bits = len(props) * k
    total_bits = len(atoms) * k * k + val_bits
    idx = np.arange(1 << total_bits, dtype=np.int64)
    row_mask = (1 << k) - 1
    edge_code = idx >> val_bits
    succ = {}
    for i, a in enumerate(atoms):
        base = i * k * k
        succ[a] = [((edge_code >> (base + w * k)) & row_mask).astype(np.int64) for w in range(k)]
    val = {}
    for i, p in enumerate(props):
        val[p] = (idx >> (i * k)) & row_mask
    return succ, val, len(idx)


class _Vector:
    """Evaluates formulas on every model of one enumeration at once."""

    def __init__(self, k: int, succ: dict, val: dict, size: int):
        self.k = k
        self.full = (1 << k) - 1
        self.succ = succ
        self.val = val
        self.size = size
        self.ext: dict = {}
        self.rel: dict = {}

    def zeros(self):
        return np.zeros(self.size, dtype=np.int64)

    def relation(self, p: Program) -> list:
        got = self.rel.get(p)
        if got is not None:
            return got
        k = self.k
        if isinstance(p, Atom):
            out = self.succ.get(p.name) or [self.zeros() for _ in range(k)]
        elif isinstance(p, Seq):
            out = self._compose(self.relation(p.first), self.relation(p.second))
        elif isinstance(p, Choice):
            left, right = self.relation(p.left), self.relation(p.right)
            out = [left[w] | right[w] for w in range(k)]
        elif isinstance(p, Star):
            step = self.relation(p.body)
            reach = [np.full(self.size, 1 << w, dtype=np.int64) for w in range(k)]
            for _ in range(k):
                nxt = self._compose(reach, step)
                nxt = [reach[w] | nxt[w] for w in range(k)]
                if all(np.array_equal(a, b) for a, b in zip(nxt, reach)):
                    break
                reach = nxt
            out = reach
        elif isinstance(p, Test):
            holds = self.extension(p.cond)
            out = [holds & (1 << w) for w in range(k)]
        else:
            raise TypeError(f"not a program: {p!r}")
        self.rel[p] = out
        return out

    def _compose(self, r: list, s: list) -> list:
        out = []
        for w in range(self.k):
            acc = self.zeros()
            for v in range(self.k):
                hit = (r[w] >> v) & 1
                acc |= s[v] * hit
            out.append(acc)
        return out

    def extension(self, f: Formula):
        got = self.ext.get(f)
        if got is not None:
            return got
        full = self.full
        if isinstance(f, Bottom):
            out = self.zeros()
        elif isinstance(f, Prop):
            out = self.val.get(f.name)
            if out is None:
                out = self.zeros()
        elif isinstance(f, Implies):
            out = (~self.extension(f.lhs) | self.extension(f.rhs)) & full
        elif isinstance(f, Box):
            body = self.extension(f.body)
            rel = self.relation(f.prog)
            out = self.zeros()
            for w in range(self.k):
                ok = (rel[w] & ~body & full) == 0
                out |= ok.astype(np.int64) << w
        elif isinstance(f, RevBox):
            body = self.extension(f.body)
            rel = self.relation(f.prog)
            bad = self.zeros()
            for v in range(self.k):
                outside = ((body >> v) & 1) == 0
                bad |= np.where(outside, rel[v], 0)
            out = full & ~bad
        else:
            raise TypeError(f"not a formula: {f!r}")
        self.ext[f] = out
        return out


def _symbols(s: Sequent) -> tuple[tuple, tuple]:
    atoms, props = set(), set()
    for f in s.formulas:
        atoms |= atoms_of(f)
        props |= props_of(f)
    return tuple(sorted(atoms)), tuple(sorted(props))


def _decode(k: int, atoms: tuple, props: tuple, index: int) -> KripkeModel:
    states = tuple(f"w{i + 1}" for i in range(k))
    val_bits = len(props) * k
    edge_code = index >> val_bits
    edges = {}
    for i, a in enumerate(atoms):
        base = i * k * k
        edges[a] = {
            (states[w], states[v])
            for w in range(k) for v in range(k)
            if (edge_code >> (base + w * k + v)) & 1
        }
    valuation = {}
    for w in range(k):
        ps = {p for i, p in enumerate(props) if (index >> (i * k + w)) & 1}
        if ps:
            valuation[states[w]] = ps
    return KripkeModel(states, edges, valuation)


def find_countermodel_bounded(
    s: Sequent, max_states: int, budget: int = 1 << 22
) -> Optional[tuple[KripkeModel, State]]:
    """First (model, state) refuting ``s`` among models with at most ``max_states`` states.

    Models are enumerated by state count, then edge code, then valuation
    code.  ``budget`` caps the number of candidate models of any one size.
    """
    if max_states < 1:
        raise ValueError("max_states must be positive")
    atoms, props = _symbols(s)
    for k in range(1, max_states + 1):
        bits = len(atoms) * k * k + len(props) * k
        if bits > 62 or (1 << bits) > budget:
            raise EnumerationBudgetExceeded(
                f"{k} states over {len(atoms)} programs and {len(props)} propositions "
                f"needs 2^{bits} candidate models"
            )
        vec = _Vector(k, *_enumeration(k, atoms, props))
        bad = np.full(vec.size, vec.full, dtype=np.int64)
        for f in s.ant:
            bad &= vec.extension(f)
        for f in s.cons:
            bad &= ~vec.extension(f)
        bad &= vec.full
        hits = np.flatnonzero(bad)
        if hits.size:
            index = int(hits[0])
            mask = int(bad[index])
            w = (mask & -mask).bit_length() - 1
            return _decode(k, atoms, props, index), f"w{w + 1}"
    return None


# -- file format ----------------------------------------------------------------

class ModelFormatError(ValueError):
    pass


def read_model(text: str) -> tuple[KripkeModel, Optional[State]]:
    """Parse the line format; an optional ``# designated: w`` comment is honoured."""
    states = None
    edges: dict = {}
    valuation: dict = {}
    designated = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            body = line[1:].strip()
            if body.startswith("designated:"):
                designated = body.split(":", 1)[1].strip()
            continue
        head, sep, rest = line.partition(":")
        if not sep:
            raise ModelFormatError(f"line {lineno}: missing ':'")
        words = head.split()
        items = rest.split()
        if words == ["states"]:
            states = tuple(items)
        elif len(words) == 2 and words[0] == "prog":
            pairs = edges.setdefault(words[1], set())
            for item in items:
                a, arrow, b = item.partition("->")
                if not arrow or not a or not b:
                    raise ModelFormatError(f"line {lineno}: bad edge {item!r}")
                pairs.add((a, b))
        elif len(words) == 2 and words[0] == "val":
            valuation.setdefault(words[1], set()).update(items)
        else:
            raise ModelFormatError(f"line {lineno}: unknown entry {head!r}")
    if states is None:
        raise ModelFormatError("missing 'states:' line")
    try:
        model = KripkeModel(states, edges, valuation)
    except ValueError as exc:
        raise ModelFormatError(str(exc)) from None
    if designated is not None and designated not in model.states:
        raise ModelFormatError(f"designated state {designated!r} is not declared")
    return model, designated


def write_model(m: KripkeModel, designated: Optional[State] = None) -> str:
    order = {w: i for i, w in enumerate(m.states)}
    lines = []
    if designated is not None:
        lines.append(f"# designated: {designated}")
    lines.append("states: " + " ".join(str(w) for w in m.states))
    for a in sorted(m.edges):
        pairs = sorted(m.edges[a], key=lambda e: (order[e[0]], order[e[1]]))
        lines.append(f"prog {a}: " + " ".join(f"{x}->{y}" for x, y in pairs))
    for w in m.states:
        ps = m.props_at(w)
        if ps:
            lines.append(f"val {w}: " + " ".join(sorted(ps)))
    return "\n".join(lines) + "\n"

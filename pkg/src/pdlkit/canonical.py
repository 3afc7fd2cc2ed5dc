"""Saturated sequents and the canonical counter model.

Provability is replaced by a semantic oracle: a sequent counts as
unprovable when a bounded model search refutes it.  The construction is
therefore exact only when the bound reaches 2^|FL|; smaller bounds yield
results labelled heuristic.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass

from .closure import fl_set, ordered
from .kernel import char_wff
from .kripke import (
    EnumerationBudgetExceeded, KripkeModel, find_countermodel_bounded, sequent_holds_at,
)
from .syntax import Box, Atom, Prop, Sequent, atoms_of

__all__ = [
    "VALID", "INVALID", "UNKNOWN", "OracleUnknown", "NotSaturated", "ValidityOracle",
    "SaturatedSequent", "saturate", "canonical_counter_model", "is_saturated",
]

VALID, INVALID, UNKNOWN = "valid", "invalid", "unknown"


class OracleUnknown(RuntimeError):
    def __init__(self, query: Sequent):
        super().__init__(f"oracle cannot decide {query}")
        self.query = query


class NotSaturated(ValueError):
    pass


class ValidityOracle:
    """Memoized bounded countermodel search as a validity test."""

    def __init__(self, bound: int = 3, budget: int = 1 << 22):
        if bound < 1:
            raise ValueError("bound must be positive")
        self.bound = bound
        self.budget = budget
        self._memo: dict = {}
        self._lock = threading.Lock()

    def __call__(self, s: Sequent) -> str:
        with self._lock:
            hit = self._memo.get(s)
        if hit is not None:
            return hit
        try:
            found = find_countermodel_bounded(s, self.bound, self.budget)
            answer = VALID if found is None else INVALID
        except EnumerationBudgetExceeded:
            answer = UNKNOWN
        with self._lock:
            return self._memo.setdefault(s, answer)

    def invalid(self, s: Sequent) -> bool:
        answer = self(s)
        if answer == UNKNOWN:
            raise OracleUnknown(s)
        return answer == INVALID

    def heuristic_for(self, s: Sequent) -> bool:
        """True when the bound is below the size bound 2^|FL| for ``s``."""
        return self.bound < 2 ** len(fl_set(s.formulas))


@dataclass(frozen=True)
class SaturatedSequent:
    sequent: Sequent


def is_saturated(s: Sequent, o: ValidityOracle) -> bool:
    closed = s.ant | s.cons == fl_set(s.formulas)
    return closed and not (s.ant & s.cons) and o.invalid(s)


def saturate(s: Sequent, o: ValidityOracle) -> SaturatedSequent:
    """Add every missing closure formula, on the right whenever that stays invalid."""
    if not o.invalid(s):
        raise NotSaturated(f"{s} is valid under the oracle")
    ant, cons = set(s.ant), set(s.cons)
    for f in ordered(fl_set(s.formulas)):
        if f in ant or f in cons:
            continue
        if o.invalid(Sequent(ant, cons | {f})):
            cons.add(f)
        else:
            ant.add(f)
    out = Sequent(ant, cons)
    if not o.invalid(out):
        raise AssertionError(f"saturation lost invalidity at {out}")
    return SaturatedSequent(out)


def canonical_counter_model(s: SaturatedSequent, o: ValidityOracle) -> tuple[KripkeModel, str]:
    """States are the invalid divisions of the closure; edges follow the box test."""
    seq = s.sequent
    if not is_saturated(seq, o):
        raise NotSaturated(f"{seq} is not saturated")
    items = ordered(seq.ant | seq.cons)
    states = []
    for bits in range(1 << len(items)):
        left = [f for i, f in enumerate(items) if bits >> i & 1]
        right = [f for i, f in enumerate(items) if not bits >> i & 1]
        div = Sequent(left, right)
        if o.invalid(div):
            states.append(div)
    names = {d: f"S{i}" for i, d in enumerate(states)}
    atoms = sorted(set().union(*(atoms_of(f) for f in items)))
    edges = {}
    for a in atoms:
        pairs = set()
        for d0 in states:
            for d1 in states:
                query = Sequent(d0.ant, d0.cons | {Box(Atom(a), char_wff(d1))})
                if o.invalid(query):
                    pairs.add((names[d0], names[d1]))
        edges[a] = pairs
    valuation = {}
    for d in states:
        props = {f.name for f in d.ant if isinstance(f, Prop)}
        if props:
            valuation[names[d]] = props
    model = KripkeModel(tuple(names[d] for d in states), edges, valuation)
    state = names[seq]
    if sequent_holds_at(model, state, seq):
        raise AssertionError("canonical counter model does not refute its sequent")
    return model, state

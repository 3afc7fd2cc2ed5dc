"""Fischer-Ladner closure, reducible formulas and schedules."""

from __future__ import annotations

from functools import lru_cache
from typing import Iterable

from .syntax import (
    Atom, Box, Choice, Formula, Implies, RevBox, Seq, Star, Test, sort_key,
)

__all__ = [
    "fl", "fl_box", "fl_set", "reducible", "is_reducible",
    "default_schedule", "schedule_max", "ordered",
]


@lru_cache(maxsize=None)
def fl(f: Formula) -> frozenset:
    if isinstance(f, Implies):
        return frozenset([f]) | fl(f.lhs) | fl(f.rhs)
    if isinstance(f, (Box, RevBox)):
        return fl_box(f) | fl(f.body)
    return frozenset([f])


@lru_cache(maxsize=None)
def fl_box(f: Formula) -> frozenset:
    if not isinstance(f, (Box, RevBox)):
        return frozenset()
    box = type(f)
    prog, body = f.prog, f.body
    out = {f}
    if isinstance(prog, Seq):
        if box is Box:
            out |= fl_box(Box(prog.first, Box(prog.second, body)))
            out |= fl_box(Box(prog.second, body))
        else:
            out |= fl_box(RevBox(prog.second, RevBox(prog.first, body)))
            out |= fl_box(RevBox(prog.first, body))
    elif isinstance(prog, Choice):
        out |= fl_box(box(prog.left, body)) | fl_box(box(prog.right, body))
    elif isinstance(prog, Star):
        out |= fl_box(box(prog.body, f))
    elif isinstance(prog, Test):
        out |= fl(prog.cond)
    else:
        assert isinstance(prog, Atom)
    return frozenset(out)


def fl_set(formulas: Iterable[Formula]) -> frozenset:
    out = frozenset()
    for f in formulas:
        out |= fl(f)
    return out


def is_reducible(f: Formula) -> bool:
    """True for implications and forward boxes over ``;``, ``+``, ``*`` or ``?``."""
    if isinstance(f, Implies):
        return True
    return isinstance(f, Box) and not isinstance(f.prog, Atom)


def reducible(formulas: Iterable[Formula]) -> frozenset:
    return frozenset(f for f in formulas if is_reducible(f))


def ordered(formulas: Iterable[Formula]) -> list[Formula]:
    return sorted(formulas, key=sort_key)


def default_schedule(formulas: Iterable[Formula]) -> list[Formula]:
    """Ascending by length, ties broken by the printed form."""
    return ordered(set(formulas))


def schedule_max(schedule: list[Formula], subset: Iterable[Formula]) -> Formula:
    """Last element of ``schedule`` that lies in ``subset``."""
    members = set(subset)
    for f in reversed(schedule):
        if f in members:
            return f
    raise ValueError("subset does not meet the schedule")

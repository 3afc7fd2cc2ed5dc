"""Exhaustive small sequents and random generators shared by the tests."""

from __future__ import annotations

import itertools
import random
from functools import lru_cache

from pdlkit.syntax import (
    BOTTOM, Atom, Box, Choice, Implies, Prop, RevBox, Seq, Sequent, Star, Test, length, sort_key,
)


@lru_cache(maxsize=None)
def formulas_of_length(n: int, props=("p",), atoms=("a",), reverse=False) -> tuple:
    """Every formula of length exactly ``n`` over the given symbols."""
    out = []
    if n == 1:
        out.append(BOTTOM)
        out.extend(Prop(p) for p in props)
    for k in range(1, n - 1):
        for f in formulas_of_length(k, props, atoms, reverse):
            for g in formulas_of_length(n - 1 - k, props, atoms, reverse):
                out.append(Implies(f, g))
    for k in range(1, n):
        for prog in programs_of_length(k, props, atoms, reverse):
            for f in formulas_of_length(n - k, props, atoms, reverse):
                out.append(Box(prog, f))
                if reverse:
                    out.append(RevBox(prog, f))
    return tuple(out)


@lru_cache(maxsize=None)
def programs_of_length(n: int, props=("p",), atoms=("a",), reverse=False) -> tuple:
    out = []
    if n == 1:
        out.extend(Atom(a) for a in atoms)
    for k in range(1, n - 1):
        for x in programs_of_length(k, props, atoms, reverse):
            for y in programs_of_length(n - 1 - k, props, atoms, reverse):
                out.append(Seq(x, y))
                out.append(Choice(x, y))
    if n >= 2:
        out.extend(Star(x) for x in programs_of_length(n - 1, props, atoms, reverse))
        out.extend(Test(f) for f in formulas_of_length(n - 1, props, atoms, reverse))
    return tuple(out)


def small_sequents(max_total: int = 6):
    """Every sequent over p and a whose formula lengths sum to at most ``max_total``."""
    pool = [f for n in range(1, max_total + 1) for f in formulas_of_length(n)]
    pool.sort(key=sort_key)
    seen = set()

    def subsets(start, budget):
        yield ()
        for i in range(start, len(pool)):
            f = pool[i]
            if length(f) <= budget:
                for rest in subsets(i + 1, budget - length(f)):
                    yield (f,) + rest

    # side 2 puts a formula on both sides, which counts its length twice
    for chosen in subsets(0, max_total):
        for sides in itertools.product((0, 1, 2), repeat=len(chosen)):
            used = sum(length(f) * (2 if b == 2 else 1) for f, b in zip(chosen, sides))
            if used > max_total:
                continue
            s = Sequent([f for f, b in zip(chosen, sides) if b != 1],
                        [f for f, b in zip(chosen, sides) if b != 0])
            if s not in seen:
                seen.add(s)
                yield s


def random_formula(rng: random.Random, size: int, props=("p", "q"), atoms=("a", "b"), reverse=True):
    """A random formula of length exactly ``size``."""
    if size <= 1:
        return rng.choice([BOTTOM] + [Prop(p) for p in props])
    kinds = ["box"] + (["rev"] if reverse else [])
    if size >= 3:
        kinds.append("imp")
    kind = rng.choice(kinds)
    if kind == "imp":
        k = rng.randint(1, size - 2)
        return Implies(random_formula(rng, k, props, atoms, reverse),
                       random_formula(rng, size - 1 - k, props, atoms, reverse))
    k = rng.randint(1, size - 1)
    prog = random_program(rng, k, props, atoms, reverse)
    body = random_formula(rng, size - k, props, atoms, reverse)
    return (RevBox if kind == "rev" else Box)(prog, body)


def random_program(rng: random.Random, size: int, props=("p", "q"), atoms=("a", "b"), reverse=True):
    if size <= 1:
        return Atom(rng.choice(atoms))
    kinds = ["star", "test"] + (["seq", "choice"] if size >= 3 else [])
    kind = rng.choice(kinds)
    if kind == "star":
        return Star(random_program(rng, size - 1, props, atoms, reverse))
    if kind == "test":
        return Test(random_formula(rng, size - 1, props, atoms, reverse))
    k = rng.randint(1, size - 2)
    a = random_program(rng, k, props, atoms, reverse)
    b = random_program(rng, size - 1 - k, props, atoms, reverse)
    return Seq(a, b) if kind == "seq" else Choice(a, b)

"""Independent reference implementations used to cross-check the package."""

from __future__ import annotations

import itertools

from pdlkit.syntax import Atom, Bottom, Box, Choice, Implies, Prop, RevBox, Seq, Star, Test


# -- closedness of a formula set -------------------------------------------------------

def closure_violations(closed):
    """Every failed item of the closedness list for the set ``closed``."""
    bad = []
    for f in closed:
        need = []
        if isinstance(f, Implies):
            need = [f.lhs, f.rhs]
        elif isinstance(f, (Box, RevBox)):
            kind, prog, body = type(f), f.prog, f.body
            need = [body]
            if isinstance(prog, Seq):
                if kind is Box:
                    need.append(Box(prog.first, Box(prog.second, body)))
                else:
                    need.append(RevBox(prog.second, RevBox(prog.first, body)))
            elif isinstance(prog, Choice):
                need += [kind(prog.left, body), kind(prog.right, body)]
            elif isinstance(prog, Star):
                need.append(kind(prog.body, f))
            elif isinstance(prog, Test):
                need.append(prog.cond)
        bad += [(f, g) for g in need if g not in closed]
    return bad


# -- naive model checking -----------------------------------------------------------

def reach(m, prog, w):
    """States reachable from ``w`` by ``prog``, computed pointwise."""
    if isinstance(prog, Atom):
        return {v for x, v in m.edges.get(prog.name, ()) if x == w}
    if isinstance(prog, Seq):
        return {v for u in reach(m, prog.first, w) for v in reach(m, prog.second, u)}
    if isinstance(prog, Choice):
        return reach(m, prog.left, w) | reach(m, prog.right, w)
    if isinstance(prog, Test):
        return {w} if holds(m, w, prog.cond) else set()
    if isinstance(prog, Star):
        seen, todo = {w}, [w]
        while todo:
            u = todo.pop()
            for v in reach(m, prog.body, u):
                if v not in seen:
                    seen.add(v)
                    todo.append(v)
        return seen
    raise TypeError(prog)


def holds(m, w, f):
    if isinstance(f, Bottom):
        return False
    if isinstance(f, Prop):
        return f.name in m.valuation.get(w, ())
    if isinstance(f, Implies):
        return not holds(m, w, f.lhs) or holds(m, w, f.rhs)
    if isinstance(f, Box):
        return all(holds(m, v, f.body) for v in reach(m, f.prog, w))
    if isinstance(f, RevBox):
        return all(holds(m, v, f.body) for v in m.states if w in reach(m, f.prog, v))
    raise TypeError(f)


def sequent_holds(m, w, s):
    return not all(holds(m, w, f) for f in s.ant) or any(holds(m, w, f) for f in s.cons)


# -- brute-force trace condition ----------------------------------------------------------

def _progressing_cycle(edges, period):
    """Whether the periodic path along ``edges`` carries an infinitely progressing trace.

    Builds the product of positions modulo the period with formulas and looks
    for a progressing step lying on a cycle.
    """
    succ = {}
    progress = []
    for i, e in enumerate(edges):
        j = (i + 1) % period
        for t in e.traces:
            a, b = (i, t.from_formula), (j, t.to_formula)
            succ.setdefault(a, set()).add(b)
            if t.progressing:
                progress.append((a, b))

    def reaches(x, target):
        seen, todo = {x}, [x]
        while todo:
            u = todo.pop()
            if u == target:
                return True
            for v in succ.get(u, ()):
                if v not in seen:
                    seen.add(v)
                    todo.append(v)
        return False

    return any(reaches(b, a) for a, b in progress)


def closed_walks(g, max_len):
    out = g.out_edges()

    def extend(start, walk):
        if walk and walk[-1].dst == start:
            yield list(walk)
        if len(walk) == max_len:
            return
        here = walk[-1].dst if walk else start
        for e in out[here]:
            walk.append(e)
            yield from extend(start, walk)
            walk.pop()

    for start in range(len(g.labels)):
        yield from extend(start, [])


def gtc_holds(g, max_len=8):
    """True iff every cyclic walk of at most ``max_len`` edges has a progressing trace."""
    return all(_progressing_cycle(w, len(w)) for w in closed_walks(g, max_len))


def cycle_fails(g, cycle):
    """Whether some choice of edges around the vertex cycle has no progressing trace."""
    out = g.out_edges()
    n = len(cycle)
    options = []
    for i, u in enumerate(cycle):
        v = cycle[(i + 1) % n]
        options.append([e for e in out[u] if e.dst == v])
    return any(not _progressing_cycle(list(choice), n) for choice in itertools.product(*options))

"""The proof-search game for PDL sequents.

Prover (P) tries to build a cut-free cyclic proof; Refuter (R) tries to
escape into a countermodel.  Positions carry a sequent, a track of tagged
consequent formulas and the set of reducible formulas still to be expanded.
A play ends at an axiom (P wins) or at a repeated position, which P wins
only if some tag is kept throughout the cycle and changes formula at least
once on it.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Optional

from .closure import fl_set, reducible
from .cyclic import PreProof, check_cyclic_proof
from .kernel import DerivationTree, RuleInstance, iter_nodes
from .kripke import KripkeModel, bisimulation_quotient, generated_submodel, sequent_holds_at
from .syntax import (
    BOTTOM, Atom, Box, Choice, Formula, Implies, Prop, Seq, Sequent, Star, Test,
    is_pdl, render, sort_key,
)

__all__ = [
    "P", "R", "FORCED", "Position", "Move", "StrategyNode", "StrategyTree", "Game",
    "BudgetExceeded", "NotPDL", "Proof", "Countermodel", "game_schedule",
    "initial_position", "legal_moves", "play_terminal_status", "solve",
    "strategy_to_proof", "strategy_to_model", "decide",
]

P, R, FORCED = "P", "R", "forced"

_CHOOSER = {
    "G-ImpL": R, "G-ChoiceR": R, "G-Cs": R, "G-TestL": R,
    "G-K": P, "G-Retry": P,
}
_KERNEL_RULE = {
    "G-ImpL": "ImpL", "G-ImpR": "ImpR", "G-SeqL": "SeqL", "G-SeqR": "SeqR",
    "G-ChoiceL": "ChoiceL", "G-ChoiceR": "ChoiceR", "G-StarL": "StarL", "G-Cs": "Cs",
    "G-TestL": "TestL", "G-TestR": "TestR", "G-K": "K", "G-Retry": "Wk",
}


class NotPDL(ValueError):
    pass


class BudgetExceeded(RuntimeError):
    """The node budget ran out before the game was solved."""


@dataclass(frozen=True)
class Position:
    sequent: Sequent
    track: frozenset
    upcoming: frozenset

    def __str__(self):
        track = ", ".join(f"<{render(f)},{n}>" for f, n in sorted(self.track, key=lambda x: x[1]))
        up = ", ".join(render(f) for f in sorted(self.upcoming, key=sort_key))
        return f"<{self.sequent}; {{{track}}}; {{{up}}}>"


@dataclass(frozen=True)
class Move:
    rule: str
    chooser: str
    to: Position
    changes_track_zero: bool = False
    principal: Optional[Formula] = None
    labels: tuple = ()


def game_schedule(formulas) -> list[Formula]:
    """Schedule used by the game: the maximum is the shortest formula.

    The moves shown for the test-star example require the starred box to be
    expanded before the longer formula obtained from it, so the game order is
    the reverse of the default schedule.
    """
    return sorted(set(formulas), key=sort_key, reverse=True)


def _tags(track: frozenset) -> dict:
    return {n: f for f, n in track}


def _retag(track: frozenset, old: Formula, new: Formula) -> frozenset:
    moved = [(f, n) for f, n in track if f is old]
    if not moved:
        return track
    return (track - set(moved)) | {(new, n) for _, n in moved}


def _fresh(track: frozenset) -> int:
    used = {n for _, n in track}
    n = 1
    while n in used:
        n += 1
    return n


def _axiom(seq: Sequent) -> bool:
    return bool(seq.ant & seq.cons) or BOTTOM in seq.ant


class Game:
    """Game of one root sequent; move generation is memoized per position."""

    def __init__(self, root: Sequent):
        bad = [f for f in root.formulas if not is_pdl(f)]
        if bad:
            raise NotPDL(f"not a PDL formula: {render(bad[0])}")
        self.root = root
        self.closure = fl_set(root.formulas)
        self.reducible = reducible(self.closure)
        order = game_schedule(self.closure)
        self.rank = {f: i for i, f in enumerate(order)}
        self._moves: dict = {}

    def initial_position(self) -> Position:
        ordered = sorted(self.root.cons, key=self.rank.__getitem__)
        track = frozenset((f, i + 1) for i, f in enumerate(ordered))
        return Position(self.root, track, self.reducible)

    def legal_moves(self, c: Position) -> list[Move]:
        got = self._moves.get(c)
        if got is None:
            got = self._moves[c] = self._generate(c)
        return got

    def _generate(self, c: Position) -> list[Move]:
        pi, sigma = c.sequent.ant, c.sequent.cons
        track, upcoming = c.track, c.upcoming
        active = (pi | sigma) & upcoming
        if not active:
            return self._joint(c)
        phi = max(active, key=self.rank.__getitem__)
        rest = upcoming - {phi}
        left = phi in pi

        def pos(ant=(), cons=(), tr=track):
            return Position(Sequent(pi | set(ant), sigma | set(cons)), tr, rest)

        def move(rule, to):
            return Move(rule, _CHOOSER.get(rule, FORCED), to, principal=phi)

        if isinstance(phi, Implies):
            a, b = phi.lhs, phi.rhs
            if left:
                fresh = track if a in sigma else track | {(a, _fresh(track))}
                return [move("G-ImpL", pos(cons=[a], tr=fresh)), move("G-ImpL", pos(ant=[b]))]
            return [move("G-ImpR", pos(ant=[a], cons=[b], tr=_retag(track, phi, b)))]
        prog, body = phi.prog, phi.body
        if isinstance(prog, Seq):
            new = Box(prog.first, Box(prog.second, body))
            if left:
                return [move("G-SeqL", pos(ant=[new]))]
            return [move("G-SeqR", pos(cons=[new], tr=_retag(track, phi, new)))]
        if isinstance(prog, Choice):
            parts = [Box(prog.left, body), Box(prog.right, body)]
            if left:
                return [move("G-ChoiceL", pos(ant=parts))]
            return [move("G-ChoiceR", pos(cons=[g], tr=_retag(track, phi, g))) for g in parts]
        if isinstance(prog, Star):
            step = Box(prog.body, phi)
            if left:
                return [move("G-StarL", pos(ant=[body, step]))]
            return [move("G-Cs", pos(cons=[g], tr=_retag(track, phi, g))) for g in (body, step)]
        if isinstance(prog, Test):
            cond = prog.cond
            if left:
                fresh = track if cond in sigma else track | {(cond, _fresh(track))}
                return [move("G-TestL", pos(cons=[cond], tr=fresh)), move("G-TestL", pos(ant=[body]))]
            return [move("G-TestR", pos(ant=[cond], cons=[body], tr=_retag(track, phi, body)))]
        raise AssertionError(f"not reducible: {render(phi)}")

    def _joint(self, c: Position) -> list[Move]:
        pi = c.sequent.ant
        targets: dict = {}
        for f, n in c.track:
            if isinstance(f, Box) and isinstance(f.prog, Atom):
                alpha = f.prog.name
                gamma = frozenset(g.body for g in pi if isinstance(g, Box) and g.prog is f.prog)
                to = Position(Sequent(gamma, [f.body]), frozenset([(f.body, 0)]), self.reducible)
                entry = targets.setdefault(to, {"labels": set(), "zero": None, "any": f})
                entry["labels"].add(alpha)
                if n == 0:
                    entry["zero"] = f
        moves = []
        for to in sorted(targets, key=lambda t: sort_key(next(iter(t.sequent.cons)))):
            entry = targets[to]
            principal = entry["zero"] or entry["any"]
            moves.append(Move("G-K", P, to, entry["zero"] is None, principal, tuple(sorted(entry["labels"]))))
        moves.append(Move("G-Retry", P, Position(c.sequent, c.track, self.reducible)))
        return moves

    def cycle_winner(self, positions: list[Position], moves: list[Move]) -> str:
        """Winner of a play whose last position repeats ``positions[0]``.

        ``positions`` is C_m..C_n (C_n = C_m); ``moves[i]`` leads from
        positions[i] to positions[i + 1].
        """
        if any(mv.rule == "G-K" and mv.changes_track_zero for mv in moves):
            return R
        maps = [_tags(c.track) for c in positions]
        common = set(maps[0]).intersection(*maps[1:])
        for tag in common:
            if any(maps[i][tag] is not maps[i + 1][tag] for i in range(len(maps) - 1)):
                return P
        return R


def initial_position(s: Sequent) -> Position:
    return Game(s).initial_position()


def legal_moves(gameroot: Sequent, c: Position) -> list[Move]:
    return Game(gameroot).legal_moves(c)


def play_terminal_status(play: list[Position], root: Optional[Sequent] = None) -> str:
    """``"P-wins"``, ``"R-wins"`` or ``"ongoing"`` for a finite play."""
    if not play:
        raise ValueError("malformed play: empty")
    game = Game(root if root is not None else play[0].sequent)
    moves = []
    for a, b in zip(play, play[1:]):
        if _axiom(a.sequent):
            raise ValueError("malformed play: continues past an axiom")
        options = [mv for mv in game.legal_moves(a) if mv.to == b]
        if not options:
            raise ValueError(f"malformed play: no move from {a} to {b}")
        options.sort(key=lambda mv: mv.changes_track_zero)
        moves.append(options[0])
    seen = {}
    for i, c in enumerate(play[:-1]):
        if c in seen:
            raise ValueError("malformed play: repeats before its end")
        seen[c] = i
    last = play[-1]
    if _axiom(last.sequent):
        return "P-wins"
    if last in seen:
        m = seen[last]
        return "P-wins" if game.cycle_winner(play[m:], moves[m:]) == P else "R-wins"
    return "ongoing"


# -- solving ----------------------------------------------------------------------

@dataclass(eq=False)
class StrategyNode:
    position: Position
    kind: str = "inner"            # inner | axiom | repeat
    turn: Optional[str] = None
    winner: Optional[str] = None
    children: list = field(default_factory=list)   # (Move, StrategyNode)
    companion: Optional["StrategyNode"] = None

    def is_joint(self) -> bool:
        return self.turn == P


@dataclass
class StrategyTree:
    owner: str
    root: StrategyNode
    game: Game
    expanded: int = 0

    def nodes(self):
        stack = [self.root]
        while stack:
            n = stack.pop()
            yield n
            stack.extend(child for _, child in reversed(n.children))


@dataclass
class _Frame:
    node: StrategyNode
    moves: list
    index: int = 0
    kept: list = field(default_factory=list)
    decided: bool = False


def solve(s: Sequent, budget: int = 10_000_000) -> tuple[str, StrategyTree]:
    """Depth-first minimax over the game tree of ``s``.

    Verdicts depend on the path (cycle conditions), so only move generation
    is shared between branches.  ``budget`` caps the number of game-tree
    nodes visited; exceeding it raises :class:`BudgetExceeded`.
    """
    game = Game(s)
    root = StrategyNode(game.initial_position())
    count = 1
    if _axiom(root.position.sequent):
        root.kind, root.winner = "axiom", P
        return P, StrategyTree(P, root, game, count)

    path_index = {root.position: 0}
    path_moves: list = []
    stack = [_Frame(root, game.legal_moves(root.position))]
    root.turn = stack[0].moves[0].chooser
    result = None

    while stack:
        frame = stack[-1]
        if result is not None:
            mv, child = result
            result = None
            _absorb(frame, mv, child)
        if frame.decided or frame.index >= len(frame.moves):
            _finish(frame)
            stack.pop()
            del path_index[frame.node.position]
            if path_moves:
                path_moves.pop()
            if stack:
                result = (stack[-1].moves[stack[-1].index - 1], frame.node)
            continue
        mv = frame.moves[frame.index]
        frame.index += 1
        count += 1
        if count > budget:
            raise BudgetExceeded(f"node budget {budget} exhausted")
        child = StrategyNode(mv.to)
        if _axiom(mv.to.sequent):
            child.kind, child.winner = "axiom", P
            result = (mv, child)
            continue
        m = path_index.get(mv.to)
        if m is not None:
            segment = [f.node.position for f in stack[m:]] + [mv.to]
            child.kind = "repeat"
            child.companion = stack[m].node
            child.winner = game.cycle_winner(segment, path_moves[m:] + [mv])
            result = (mv, child)
            continue
        moves = game.legal_moves(mv.to)
        child.turn = moves[0].chooser
        path_index[mv.to] = len(stack)
        path_moves.append(mv)
        stack.append(_Frame(child, moves))

    return root.winner, StrategyTree(root.winner, root, game, count)


def _absorb(frame: _Frame, mv: Move, child: StrategyNode):
    turn = frame.node.turn
    if turn == FORCED:
        frame.kept = [(mv, child)]
        frame.node.winner = child.winner
        frame.decided = True
    elif child.winner == turn:
        frame.kept = [(mv, child)]
        frame.node.winner = turn
        frame.decided = True
    else:
        frame.kept.append((mv, child))


def _finish(frame: _Frame):
    if not frame.decided:
        frame.node.winner = R if frame.node.turn == P else P
    frame.node.children = frame.kept


# -- extraction ---------------------------------------------------------------------

@dataclass
class Proof:
    preproof: PreProof


@dataclass
class Countermodel:
    model: KripkeModel
    state: object


def _check_owner(st: StrategyTree, owner: str):
    if st.owner != owner or st.root.winner != owner:
        raise ValueError(f"not a winning strategy for {owner}")


def strategy_to_proof(st: StrategyTree) -> PreProof:
    """Relabel a Prover strategy as a cut-free cyclic proof."""
    _check_owner(st, P)
    paths: dict = {}
    companions: dict = {}
    counter = itertools.count()

    def build(n: StrategyNode, path: tuple) -> DerivationTree:
        seq = n.position.sequent
        if n.winner != P:
            raise ValueError("strategy contains a node lost by P")
        if n.kind == "axiom":
            shared = sorted(seq.ant & seq.cons, key=sort_key)
            if shared:
                return DerivationTree(seq, RuleInstance("Ax", shared[0]))
            return DerivationTree(seq, RuleInstance("Bot", BOTTOM))
        if n.kind == "repeat":
            bud = f"b{next(counter)}"
            companions[bud] = paths[id(n.companion)]
            return DerivationTree(seq, None, (), bud)
        paths[id(n)] = path
        if not n.children:
            raise ValueError("inner node without children")
        mv = n.children[0][0]
        rule = _KERNEL_RULE[mv.rule]
        principal = None if rule == "Wk" else mv.principal
        premises = tuple(build(child, path + (i,)) for i, (_, child) in enumerate(n.children))
        return DerivationTree(seq, RuleInstance(rule, principal), premises)

    return PreProof(build(st.root, ()), companions)


def _transforming(a: Position, b: Position) -> bool:
    ta, tb = _tags(a.track), _tags(b.track)
    return any(tb.get(n, f) is not f for n, f in ta.items() if n in tb)


def strategy_to_model(st: StrategyTree, reduce: bool = True) -> tuple[KripkeModel, str]:
    """Build the countermodel of a Refuter strategy.

    Worlds are the G-K-free paths from the root and from every G-K target;
    each world's core supplies its valuation and outgoing edges.  With
    ``reduce`` the result is cut down to the part generated by the root
    world and merged up to bisimilarity, which preserves every PDL formula.
    """
    _check_owner(st, R)

    def resolve(n: StrategyNode) -> StrategyNode:
        return n.companion if n.kind == "repeat" else n

    starts = [st.root]
    known = {id(st.root)}
    for n in st.nodes():
        if n.kind != "inner":
            if n.kind == "axiom":
                raise ValueError("R strategy reaches an axiom")
            continue
        for mv, child in n.children:
            if mv.rule == "G-K":
                t = resolve(child)
                if id(t) not in known:
                    known.add(id(t))
                    starts.append(t)
    world_of = {id(n): i for i, n in enumerate(starts)}

    def successor(n: StrategyNode) -> StrategyNode:
        nxt = [child for mv, child in n.children if mv.rule != "G-K"]
        if len(nxt) != 1:
            raise ValueError(f"world successor is not unique at {n.position}")
        return resolve(nxt[0])

    cores = []
    for s in starts:
        nodes, seen = [], {}
        n = s
        while id(n) not in seen:
            seen[id(n)] = len(nodes)
            nodes.append(n)
            n = successor(n)
        c = seen[id(n)]
        cores.append(_core(nodes, c))

    names = [f"W{i}" for i in range(len(starts))]
    edges: dict = {}
    valuation = {}
    for i, core in enumerate(cores):
        props = {f.name for f in core.position.sequent.ant if isinstance(f, Prop)}
        if props:
            valuation[names[i]] = props
        for mv, child in core.children:
            if mv.rule != "G-K":
                continue
            j = world_of[id(resolve(child))]
            for alpha in mv.labels:
                edges.setdefault(alpha, set()).add((names[i], names[j]))
    model = KripkeModel(tuple(names), edges, valuation)
    root = names[0]
    if reduce:
        model = generated_submodel(model, root)
        model, root = bisimulation_quotient(model, root)
    return model, root


def _core(nodes: list, c: int) -> StrategyNode:
    length = len(nodes)

    def edge(j):
        return nodes[j], nodes[j + 1] if j + 1 < length else nodes[c]

    final = nodes[c].position.sequent
    for k in range(length):
        if not nodes[k].is_joint():
            continue
        lo = min(k, c)
        if any(nodes[j].position.sequent != final for j in range(lo, length)):
            continue
        if any(_transforming(a.position, b.position) for a, b in map(edge, range(lo, length))):
            continue
        return nodes[k]
    raise ValueError("world without a core; not an R winning strategy")


def decide(s: Sequent, budget: int = 10_000_000, verify: bool = True):
    """Solve the game and return a checked :class:`Proof` or :class:`Countermodel`."""
    winner, st = solve(s, budget)
    if winner == P:
        pre = strategy_to_proof(st)
        if verify:
            problems = check_cyclic_proof("CGPDL", pre)
            if problems:
                raise AssertionError(f"extracted proof rejected: {problems[0]}")
            if any(t.rule is not None and t.rule.rule_name == "Cut" for _, t in iter_nodes(pre.tree)):
                raise AssertionError("extracted proof uses Cut")
        return Proof(pre)
    model, state = strategy_to_model(st)
    if verify and sequent_holds_at(model, state, s):
        raise AssertionError("extracted model does not refute the sequent")
    return Countermodel(model, state)

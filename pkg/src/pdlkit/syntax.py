"""Formula and program trees, the concrete syntax, and the length measure.

Nodes are interned: building the same tree twice returns the same object,
so equality is identity and hashing is cheap.  Sugar (``~``, ``&``, ``|``,
``<->``, diamonds, ``true``) is expanded at parse time; the printer shows
negations and diamonds again, which parse back to the identical tree.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator, Union

__all__ = [
    "Formula", "Program", "Bottom", "Prop", "Implies", "Box", "RevBox",
    "Atom", "Seq", "Choice", "Star", "Test", "BOTTOM", "TOP",
    "Sequent", "ParseError",
    "neg", "disj", "conj", "iff", "diamond", "rev_diamond",
    "parse_formula", "parse_program", "parse_sequent", "render", "render_program",
    "length", "is_pdl", "sort_key", "props_of", "atoms_of",
]


class _Node:
    __slots__ = ()
    _fields: tuple[str, ...] = ()
    _types: tuple[type, ...] = ()
    _table: dict = {}

    def __new__(cls, *args):
        if len(args) != len(cls._fields):
            raise TypeError(f"{cls.__name__} takes {len(cls._fields)} arguments")
        for value, kind in zip(args, cls._types):
            if not isinstance(value, kind):
                raise TypeError(f"{cls.__name__}: expected {kind.__name__}, got {value!r}")
        key = (cls, *args)
        node = _Node._table.get(key)
        if node is None:
            node = object.__new__(cls)
            for name, value in zip(cls._fields, args):
                object.__setattr__(node, name, value)
            node = _Node._table.setdefault(key, node)
        return node

    def __setattr__(self, name, value):
        raise AttributeError(f"{type(self).__name__} is immutable")

    def __reduce__(self):
        return (type(self), self.args)

    def __copy__(self):
        return self

    def __deepcopy__(self, memo):
        return self

    @property
    def args(self) -> tuple:
        return tuple(getattr(self, name) for name in self._fields)

    def __repr__(self):
        inner = ", ".join(repr(a) for a in self.args)
        return f"{type(self).__name__}({inner})"


class Formula(_Node):
    __slots__ = ()

    def __str__(self):
        return render(self)


class Program(_Node):
    __slots__ = ()

    def __str__(self):
        return render_program(self)


class Bottom(Formula):
    __slots__ = ()


class Prop(Formula):
    __slots__ = ("name",)
    _fields = ("name",)
    _types = (str,)


class Implies(Formula):
    __slots__ = ("lhs", "rhs")
    _fields = ("lhs", "rhs")
    _types = (Formula, Formula)


class Box(Formula):
    __slots__ = ("prog", "body")
    _fields = ("prog", "body")
    _types = (Program, Formula)


class RevBox(Formula):
    """Backward box: the body holds at every predecessor along the program."""

    __slots__ = ("prog", "body")
    _fields = ("prog", "body")
    _types = (Program, Formula)


class Atom(Program):
    __slots__ = ("name",)
    _fields = ("name",)
    _types = (str,)


class Seq(Program):
    __slots__ = ("first", "second")
    _fields = ("first", "second")
    _types = (Program, Program)


class Choice(Program):
    __slots__ = ("left", "right")
    _fields = ("left", "right")
    _types = (Program, Program)


class Star(Program):
    __slots__ = ("body",)
    _fields = ("body",)
    _types = (Program,)


class Test(Program):
    __test__ = False  # keep pytest from collecting the class
    __slots__ = ("cond",)
    _fields = ("cond",)
    _types = (Formula,)


Expression = Union[Formula, Program]

BOTTOM = Bottom()


def neg(f: Formula) -> Formula:
    return Implies(f, BOTTOM)


def disj(f: Formula, g: Formula) -> Formula:
    return Implies(neg(f), g)


def conj(f: Formula, g: Formula) -> Formula:
    return neg(Implies(f, neg(g)))


def iff(f: Formula, g: Formula) -> Formula:
    return conj(Implies(f, g), Implies(g, f))


def diamond(p: Program, f: Formula) -> Formula:
    return neg(Box(p, neg(f)))


def rev_diamond(p: Program, f: Formula) -> Formula:
    return neg(RevBox(p, neg(f)))


TOP = Implies(BOTTOM, BOTTOM)


# -- measures ---------------------------------------------------------------

@lru_cache(maxsize=None)
def length(e: Expression) -> int:
    if isinstance(e, (Bottom, Prop, Atom)):
        return 1
    if isinstance(e, Implies):
        return length(e.lhs) + length(e.rhs) + 1
    if isinstance(e, (Box, RevBox)):
        return length(e.prog) + length(e.body)
    if isinstance(e, (Seq, Choice)):
        return sum(length(a) for a in e.args) + 1
    if isinstance(e, Star):
        return length(e.body) + 1
    if isinstance(e, Test):
        return length(e.cond) + 1
    raise TypeError(f"not an expression: {e!r}")


@lru_cache(maxsize=None)
def is_pdl(e: Expression) -> bool:
    if isinstance(e, RevBox):
        return False
    return all(is_pdl(a) for a in e.args if isinstance(a, _Node))


@lru_cache(maxsize=None)
def props_of(e: Expression) -> frozenset:
    if isinstance(e, Prop):
        return frozenset([e.name])
    out = frozenset()
    for a in e.args:
        if isinstance(a, _Node):
            out |= props_of(a)
    return out


@lru_cache(maxsize=None)
def atoms_of(e: Expression) -> frozenset:
    if isinstance(e, Atom):
        return frozenset([e.name])
    out = frozenset()
    for a in e.args:
        if isinstance(a, _Node):
            out |= atoms_of(a)
    return out


# -- printing ---------------------------------------------------------------

def _negated(f: Formula):
    if isinstance(f, Implies) and f.rhs is BOTTOM:
        return f.lhs
    return None


@lru_cache(maxsize=None)
def _render(f: Formula, top: bool) -> str:
    if isinstance(f, Bottom):
        return "false"
    if isinstance(f, Prop):
        return f.name
    if isinstance(f, (Box, RevBox)):
        opener = "[" if isinstance(f, Box) else "[-"
        return f"{opener}{render_program(f.prog)}]{_render(f.body, False)}"
    inner = _negated(f)
    if inner is not None:
        if isinstance(inner, (Box, RevBox)):
            body = _negated(inner.body)
            if body is not None:
                opener = "<" if isinstance(inner, Box) else "<-"
                return f"{opener}{render_program(inner.prog)}>{_render(body, False)}"
        return "~" + _render(inner, False)
    text = f"{_render(f.lhs, False)} -> {_render(f.rhs, False)}"
    return text if top else f"({text})"


def render(f: Formula) -> str:
    """Print a formula; outermost parentheses are dropped."""
    return _render(f, True)


@lru_cache(maxsize=None)
def render_program(p: Program) -> str:
    if isinstance(p, Atom):
        return p.name
    if isinstance(p, Seq):
        return f"({render_program(p.first)};{render_program(p.second)})"
    if isinstance(p, Choice):
        return f"({render_program(p.left)}+{render_program(p.right)})"
    if isinstance(p, Star):
        body = render_program(p.body)
        if isinstance(p.body, Test):
            body = f"({body})"
        return body + "*"
    if isinstance(p, Test):
        return "?" + _render(p.cond, False)
    raise TypeError(f"not a program: {p!r}")


@lru_cache(maxsize=None)
def sort_key(f: Formula) -> tuple[int, str]:
    """Key of the default schedule: length first, then the printed form."""
    return (length(f), render(f))


# -- sequents ---------------------------------------------------------------

@dataclass(frozen=True)
class Sequent:
    ant: frozenset
    cons: frozenset

    def __init__(self, ant: Iterable[Formula] = (), cons: Iterable[Formula] = ()):
        object.__setattr__(self, "ant", frozenset(ant))
        object.__setattr__(self, "cons", frozenset(cons))
        for f in self.ant | self.cons:
            if not isinstance(f, Formula):
                raise TypeError(f"sequent member is not a formula: {f!r}")

    @property
    def formulas(self) -> frozenset:
        return self.ant | self.cons

    def __str__(self):
        left = ", ".join(render(f) for f in sorted(self.ant, key=sort_key))
        right = ", ".join(render(f) for f in sorted(self.cons, key=sort_key))
        return f"{left} |- {right}".strip()


# -- parsing ----------------------------------------------------------------

class ParseError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


_TOKEN = re.compile(
    r"\s*(?:(?P<sym><->|->|<-|\|-|\[-|[()\[\]<>~&|;+*?,])|(?P<ident>[A-Za-z_][A-Za-z0-9_']*))"
)
_BINARY = {"->": Implies, "&": conj, "|": disj, "<->": iff}


def _tokenize(text: str) -> list[tuple[str, int]]:
    tokens = []
    pos = 0
    while True:
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos >= len(text):
            break
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        tokens.append((m.group("sym") or m.group("ident"), m.start(m.lastindex)))
        pos = m.end()
    tokens.append(("", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.i = 0

    @property
    def peek(self) -> str:
        return self.tokens[self.i][0]

    def pos(self) -> int:
        return self.tokens[self.i][1]

    def take(self, expected: str | None = None) -> str:
        tok = self.peek
        if expected is not None and tok != expected:
            shown = repr(tok) if tok else "end of input"
            raise ParseError(f"expected {expected!r}, found {shown}", self.pos())
        if not tok:
            raise ParseError("unexpected end of input", self.pos())
        self.i += 1
        return tok

    def done(self):
        if self.peek:
            raise ParseError(f"unexpected token {self.peek!r}", self.pos())

    def formula_top(self) -> Formula:
        f = self.formula()
        if self.peek in _BINARY:
            op = self.take()
            f = _BINARY[op](f, self.formula())
            if self.peek in _BINARY:
                raise ParseError("ambiguous operators; add parentheses", self.pos())
        return f

    def formula(self) -> Formula:
        tok = self.peek
        if tok == "false":
            self.take()
            return BOTTOM
        if tok == "true":
            self.take()
            return TOP
        if tok == "~":
            self.take()
            return neg(self.formula())
        if tok == "(":
            self.take()
            f = self.formula()
            if self.peek in _BINARY:
                op = self.take()
                f = _BINARY[op](f, self.formula())
            self.take(")")
            return f
        if tok in ("[", "[-"):
            self.take()
            p = self.program()
            self.take("]")
            body = self.formula()
            return Box(p, body) if tok == "[" else RevBox(p, body)
        if tok in ("<", "<-"):
            self.take()
            p = self.program()
            self.take(">")
            body = self.formula()
            return diamond(p, body) if tok == "<" else rev_diamond(p, body)
        if _is_ident(tok):
            self.take()
            return Prop(tok)
        shown = repr(tok) if tok else "end of input"
        raise ParseError(f"expected a formula, found {shown}", self.pos())

    def program(self) -> Program:
        tok = self.peek
        if tok == "(":
            self.take()
            p = self.program()
            if self.peek in (";", "+"):
                op = self.take()
                q = self.program()
                p = Seq(p, q) if op == ";" else Choice(p, q)
            self.take(")")
        elif tok == "?":
            self.take()
            p = Test(self.formula())
        elif _is_ident(tok):
            self.take()
            p = Atom(tok)
        else:
            shown = repr(tok) if tok else "end of input"
            raise ParseError(f"expected a program, found {shown}", self.pos())
        while self.peek == "*":
            self.take()
            p = Star(p)
        return p

    def formula_list(self, stop: str) -> list[Formula]:
        out = []
        if self.peek in (stop, ""):
            return out
        out.append(self.formula_top())
        while self.peek == ",":
            self.take()
            out.append(self.formula_top())
        return out


def _is_ident(tok: str) -> bool:
    return bool(tok) and (tok[0].isalpha() or tok[0] == "_") and tok not in ("false", "true")


def parse_formula(text: str) -> Formula:
    if not text.strip():
        raise ParseError("empty input", 0)
    p = _Parser(text)
    f = p.formula_top()
    p.done()
    return f


def parse_program(text: str) -> Program:
    if not text.strip():
        raise ParseError("empty input", 0)
    p = _Parser(text)
    prog = p.program()
    p.done()
    return prog


def parse_sequent(text: str) -> Sequent:
    """Parse ``f1, f2 |- g1, g2``; either side may be empty."""
    p = _Parser(text)
    left = p.formula_list("|-")
    p.take("|-")
    right = p.formula_list("")
    p.done()
    return Sequent(left, right)


def subterms(e: Expression) -> Iterator[Expression]:
    yield e
    for a in e.args:
        if isinstance(a, _Node):
            yield from subterms(a)

"""Process terms: abstract syntax, parser and printer.

Concrete grammar (lowest to highest precedence)::

    sum    := par ("+" par)*
    par    := unary ("||" unary)*
    unary  := IDENT "." unary | "nil" | IDENT | "(" sum ")"
            | "nu" IDENT "(" sum ")" | "rec" IDENT "(" sum ")"

An identifier followed by ``.`` is an action; a bare identifier is a
recursion variable and must be bound by an enclosing ``rec``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import cached_property
from typing import Iterator

from .errors import HDAError
from .syncalg import SyncAlgebra


class ProcError(HDAError, ValueError):
    kind = "proc"


class ProcSyntaxError(ProcError):
    kind = "syntax"

    def __init__(self, pos: int, expected: list[str], found: str):
        self.pos, self.expected, self.found = pos, expected, found
        super().__init__(f"at {pos}: expected {' or '.join(expected)}, found {found!r}")

    def to_json(self) -> dict:
        return {**super().to_json(), "pos": self.pos, "expected": self.expected}


class UnknownActionError(ProcError):
    kind = "unknown-action"


class UnboundVariableError(ProcError):
    kind = "unbound-variable"


class UnguardedVariableError(ProcError):
    kind = "unguarded-variable"


class OpenTermError(ProcError):
    kind = "open-term"


class _Node:
    """Structural equality with a cached hash; terms are used heavily as dict keys."""

    __slots__ = ()

    @cached_property
    def _hash(self) -> int:
        return hash((type(self).__name__,) + tuple(getattr(self, f) for f in self._fields))

    def __hash__(self) -> int:
        return self._hash

    def __str__(self) -> str:
        return format_term(self)


@dataclass(frozen=True, eq=True)
class Nil(_Node):
    _fields = ()
    __hash__ = _Node.__hash__


@dataclass(frozen=True, eq=True)
class Prefix(_Node):
    action: str
    body: "Term"
    _fields = ("action", "body")
    __hash__ = _Node.__hash__


@dataclass(frozen=True, eq=True)
class Sum(_Node):
    left: "Term"
    right: "Term"
    _fields = ("left", "right")
    __hash__ = _Node.__hash__


@dataclass(frozen=True, eq=True)
class Par(_Node):
    left: "Term"
    right: "Term"
    _fields = ("left", "right")
    __hash__ = _Node.__hash__


@dataclass(frozen=True, eq=True)
class Restrict(_Node):
    action: str
    body: "Term"
    _fields = ("action", "body")
    __hash__ = _Node.__hash__


@dataclass(frozen=True, eq=True)
class Rec(_Node):
    var: str
    body: "Term"
    _fields = ("var", "body")
    __hash__ = _Node.__hash__


@dataclass(frozen=True, eq=True)
class Var(_Node):
    name: str
    _fields = ("name",)
    __hash__ = _Node.__hash__


@dataclass(frozen=True, eq=True)
class Horizon(_Node):
    """Where a finite unfolding of ``rec`` stops.  Behaves like ``nil``.

    Never produced by the parser; it only appears inside unfolded terms.
    """

    rec: Rec
    _fields = ("rec",)
    __hash__ = _Node.__hash__


Term = Nil | Prefix | Sum | Par | Restrict | Rec | Var | Horizon
NIL = Nil()

# -- printing ---------------------------------------------------------------

_SUM, _PAR, _UNARY = 0, 1, 2


def format_term(t: Term) -> str:
    """Render with the fewest parentheses that still parse back to *t*."""
    out: list[str] = []
    _fmt(t, _SUM, out)
    return "".join(out)


def _fmt(t: Term, ctx: int, out: list[str]) -> None:
    if isinstance(t, Nil):
        out.append("nil")
    elif isinstance(t, Var):
        out.append(t.name)
    elif isinstance(t, Horizon):
        _fmt(t.rec, ctx, out)
    elif isinstance(t, Prefix):
        out.append(t.action + ".")
        _fmt(t.body, _UNARY, out)
    elif isinstance(t, (Restrict, Rec)):
        out.append(("nu " if isinstance(t, Restrict) else "rec ")
                   + (t.action if isinstance(t, Restrict) else t.var) + " (")
        _fmt(t.body, _SUM, out)
        out.append(")")
    else:
        level, op = (_SUM, " + ") if isinstance(t, Sum) else (_PAR, " || ")
        wrap = ctx > level
        if wrap:
            out.append("(")
        _fmt(t.left, level, out)
        out.append(op)
        # left-associative: a right operand of the same operator needs parentheses
        _fmt(t.right, level + 1, out)
        if wrap:
            out.append(")")


# -- parsing ----------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(\|\|)|([A-Za-z][A-Za-z0-9_]*)|([.+()]))")
_KEYWORDS = {"nil", "rec", "nu"}


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    toks = []
    pos = 0
    while True:
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos >= len(text):
            break
        m = _TOKEN.match(text, pos)
        if not m:
            raise ProcSyntaxError(pos, ["identifier", "'.'", "'+'", "'||'", "'('", "')'"], text[pos])
        if m.group(1):
            toks.append(("op", "||", m.start(1)))
        elif m.group(2):
            word = m.group(2)
            toks.append(("kw" if word in _KEYWORDS else "id", word, m.start(2)))
        else:
            toks.append(("op", m.group(3), m.start(3)))
        pos = m.end()
    toks.append(("eof", "", len(text)))
    return toks


class _Parser:
    def __init__(self, text: str):
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self) -> tuple[str, str, int]:
        return self.toks[self.i]

    def next(self) -> tuple[str, str, int]:
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def expect(self, value: str) -> None:
        kind, v, pos = self.next()
        if v != value or kind == "eof":
            raise ProcSyntaxError(pos, [repr(value)], v or "end of input")

    def ident(self) -> str:
        kind, v, pos = self.next()
        if kind != "id":
            raise ProcSyntaxError(pos, ["identifier"], v or "end of input")
        return v

    def parse(self) -> Term:
        t = self.sum()
        kind, v, pos = self.peek()
        if kind != "eof":
            raise ProcSyntaxError(pos, ["'+'", "'||'", "end of input"], v)
        return t

    def sum(self) -> Term:
        t = self.par()
        while self.peek()[1] == "+":
            self.next()
            t = Sum(t, self.par())
        return t

    def par(self) -> Term:
        t = self.unary()
        while self.peek()[1] == "||":
            self.next()
            t = Par(t, self.unary())
        return t

    def unary(self) -> Term:
        kind, v, pos = self.next()
        if kind == "id":
            if self.peek()[1] == ".":
                self.next()
                return Prefix(v, self.unary())
            return Var(v)
        if kind == "kw":
            if v == "nil":
                return NIL
            name = self.ident()
            self.expect("(")
            body = self.sum()
            self.expect(")")
            return Restrict(name, body) if v == "nu" else Rec(name, body)
        if v == "(":
            t = self.sum()
            self.expect(")")
            return t
        raise ProcSyntaxError(pos, ["identifier", "'nil'", "'nu'", "'rec'", "'('"], v or "end of input")


def parse(text: str, alg: SyncAlgebra | None = None) -> Term:
    """Parse *text*; check actions against *alg*, variable binding and guardedness."""
    term = _Parser(text).parse()
    check_term(term, alg)
    return term


def check_term(term: Term, alg: SyncAlgebra | None = None) -> None:
    """Raise if *term* has unknown actions, free variables or unguarded recursion."""
    if alg is not None:
        for a in actions(term):
            if a not in alg.alphabet:
                raise UnknownActionError(f"action {a!r} is not in the alphabet")
    free = free_vars(term)
    if free:
        raise UnboundVariableError(f"unbound variable(s): {', '.join(sorted(free))}")
    for node in subterms(term):
        if isinstance(node, Rec) and not _guarded(node.var, node.body, False):
            raise UnguardedVariableError(f"variable {node.var!r} is unguarded in {format_term(node)}")


def _guarded(x: str, t: Term, under_prefix: bool) -> bool:
    if isinstance(t, Var):
        return t.name != x or under_prefix
    if isinstance(t, Prefix):
        return _guarded(x, t.body, True)
    if isinstance(t, Rec):
        return t.var == x or _guarded(x, t.body, under_prefix)
    if isinstance(t, Restrict):
        return _guarded(x, t.body, under_prefix)
    if isinstance(t, (Sum, Par)):
        return _guarded(x, t.left, under_prefix) and _guarded(x, t.right, under_prefix)
    return True


# -- traversals -------------------------------------------------------------

def children(t: Term) -> tuple[Term, ...]:
    if isinstance(t, (Prefix, Restrict, Rec)):
        return (t.body,)
    if isinstance(t, (Sum, Par)):
        return (t.left, t.right)
    return ()


def subterms(t: Term) -> Iterator[Term]:
    stack = [t]
    while stack:
        node = stack.pop()
        yield node
        stack.extend(children(node))


def actions(t: Term) -> set[str]:
    return {n.action for n in subterms(t) if isinstance(n, (Prefix, Restrict))}


def free_vars(t: Term) -> set[str]:
    if isinstance(t, Var):
        return {t.name}
    if isinstance(t, Rec):
        return free_vars(t.body) - {t.var}
    out: set[str] = set()
    for c in children(t):
        out |= free_vars(c)
    return out


def size(t: Term) -> int:
    return sum(1 for _ in subterms(t))


def substitute(t: Term, x: str, s: Term) -> Term:
    """Replace free occurrences of ``x`` in *t* by the closed term *s*."""
    if isinstance(t, Var):
        return s if t.name == x else t
    if isinstance(t, (Nil, Horizon)):
        return t
    if isinstance(t, Rec):
        return t if t.var == x else Rec(t.var, substitute(t.body, x, s))
    if isinstance(t, Prefix):
        return Prefix(t.action, substitute(t.body, x, s))
    if isinstance(t, Restrict):
        return Restrict(t.action, substitute(t.body, x, s))
    return type(t)(substitute(t.left, x, s), substitute(t.right, x, s))


def unfold_once(r: Rec) -> Term:
    """``P(rec x P(x))``: one step of recursion unfolding."""
    return substitute(r.body, r.var, r)


class Unfolding:
    """Rec-free approximation of a term, and the way back for display.

    Every ``rec x P`` is replaced by ``P^d(H)`` where ``H`` is a
    :class:`Horizon` leaf remembering the recursion.  :meth:`fold` maps a
    derivative of the unfolded term back to the corresponding term with
    ``rec`` restored, wherever the match is syntactically exact.
    """

    def __init__(self, depth: int):
        if depth < 0:
            raise ValueError("depth must be >= 0")
        self.depth = depth
        self._back: dict[Term, Rec] = {}
        self._memo: dict[Term, Term] = {}
        self._fold_memo: dict[Term, Term] = {}
        self.vacuous: set[Rec] = set()

    def unfold(self, t: Term) -> Term:
        hit = self._memo.get(t)
        if hit is not None:
            return hit
        if isinstance(t, (Nil, Horizon)):
            out = t
        elif isinstance(t, Var):
            raise OpenTermError(f"free variable {t.name!r}")
        elif isinstance(t, Rec):
            if t.var not in free_vars(t.body):
                self.vacuous.add(t)
                out = self.unfold(t.body)
            else:
                # registry keys are stored folded so nested recursions match too
                self._fold_memo.clear()
                self._back[self.fold(unfold_once(t))] = self.fold(t)
                self._fold_memo.clear()
                cur: Term = Horizon(t)
                for _ in range(self.depth):
                    cur = substitute(t.body, t.var, cur)
                out = self.unfold(cur)
        elif isinstance(t, Prefix):
            out = Prefix(t.action, self.unfold(t.body))
        elif isinstance(t, Restrict):
            out = Restrict(t.action, self.unfold(t.body))
        else:
            out = type(t)(self.unfold(t.left), self.unfold(t.right))
        self._memo[t] = out
        return out

    def fold(self, t: Term) -> Term:
        hit = self._fold_memo.get(t)
        if hit is not None:
            return hit
        if isinstance(t, Horizon):
            out: Term = self.fold(t.rec)
        elif isinstance(t, (Nil, Var)):
            out = t
        elif isinstance(t, (Prefix, Restrict)):
            out = type(t)(t.action, self.fold(t.body))
        elif isinstance(t, Rec):
            # a recursion that never uses its variable is displayed as its body
            body = self.fold(t.body)
            out = Rec(t.var, body) if t.var in free_vars(body) else body
        else:
            out = type(t)(self.fold(t.left), self.fold(t.right))
        out = self._back.get(out, out)
        self._fold_memo[t] = out
        return out


def has_horizon(t: Term) -> bool:
    return any(isinstance(n, Horizon) for n in subterms(t))


def exposed_horizon(t: Term) -> bool:
    """True if a horizon is reachable without passing under a prefix."""
    if isinstance(t, Horizon):
        return True
    if isinstance(t, Prefix):
        return False
    return any(exposed_horizon(c) for c in children(t))

"""Formulas and programs of epistemic PDL.

The AST has six formula constructors (``Top``, ``Prop``, ``Not``, ``And``,
``Know``, ``Box``) and five program constructors (``Atom``, ``Test``,
``Seq``, ``Choice``, ``Star``).  Every other connective is a helper that
expands into this core at construction time, so the engines only ever see
the core.

Concrete syntax (ASCII)::

    phi ::= T | F | IDENT | ~phi | K phi | Kh phi
          | [pi] phi | <pi> phi | [[pi]] phi
          | phi & phi | phi | phi | phi -> phi | (phi)
    pi  ::= IDENT | ?phi | pi ; pi | pi + pi | pi* | (pi)
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence, Union


class Formula:
    __slots__ = ()

    def __str__(self) -> str:
        return to_text(self)


class Program:
    __slots__ = ()

    def __str__(self) -> str:
        return program_to_text(self)


@dataclass(frozen=True, repr=False)
class Top(Formula):
    def __repr__(self):
        return "Top()"


@dataclass(frozen=True, repr=False)
class Prop(Formula):
    name: str

    def __repr__(self):
        return f"Prop({self.name!r})"


@dataclass(frozen=True, repr=False)
class Not(Formula):
    body: Formula

    def __repr__(self):
        return f"Not({self.body!r})"


@dataclass(frozen=True, repr=False)
class And(Formula):
    left: Formula
    right: Formula

    def __repr__(self):
        return f"And({self.left!r}, {self.right!r})"


@dataclass(frozen=True, repr=False)
class Know(Formula):
    body: Formula

    def __repr__(self):
        return f"Know({self.body!r})"


@dataclass(frozen=True, repr=False)
class Box(Formula):
    program: Program
    body: Formula

    def __repr__(self):
        return f"Box({self.program!r}, {self.body!r})"


@dataclass(frozen=True, repr=False)
class Atom(Program):
    name: str

    def __repr__(self):
        return f"Atom({self.name!r})"


@dataclass(frozen=True, repr=False)
class Test(Program):
    formula: Formula

    def __repr__(self):
        return f"Test({self.formula!r})"


@dataclass(frozen=True, repr=False)
class Seq(Program):
    first: Program
    second: Program

    def __repr__(self):
        return f"Seq({self.first!r}, {self.second!r})"


@dataclass(frozen=True, repr=False)
class Choice(Program):
    left: Program
    right: Program

    def __repr__(self):
        return f"Choice({self.left!r}, {self.right!r})"


@dataclass(frozen=True, repr=False)
class Star(Program):
    body: Program

    def __repr__(self):
        return f"Star({self.body!r})"


# A computation sequence is a tuple of letters; a letter is an atomic
# action or a whole test, compared structurally.
SequenceItem = Union[Atom, Test]
ComputationSequence = tuple

TOP = Top()


# -- derived connectives ----------------------------------------------------

def bot() -> Formula:
    return Not(TOP)


def lor(a: Formula, b: Formula) -> Formula:
    return Not(And(Not(a), Not(b)))


def implies(a: Formula, b: Formula) -> Formula:
    return lor(Not(a), b)


def iff(a: Formula, b: Formula) -> Formula:
    return And(implies(a, b), implies(b, a))


def diamond(program: Program, body: Formula) -> Formula:
    return Not(Box(program, Not(body)))


def khat(body: Formula) -> Formula:
    return Not(Know(Not(body)))


def strong(program: Program, body: Formula) -> Formula:
    """Executable-and-safe modality: ``[pi]phi & <pi>phi``."""
    return And(Box(program, body), diamond(program, body))


def as_program(p: Program | str) -> Program:
    return Atom(p) if isinstance(p, str) else p


def conj(parts: Iterable[Formula]) -> Formula:
    parts = list(parts)
    if not parts:
        return TOP
    out = parts[0]
    for p in parts[1:]:
        out = And(out, p)
    return out


def disj(parts: Iterable[Formula]) -> Formula:
    parts = list(parts)
    if not parts:
        return bot()
    out = parts[0]
    for p in parts[1:]:
        out = lor(out, p)
    return out


def seq(*programs: Program | str) -> Program:
    progs = [as_program(p) for p in programs]
    if not progs:
        return Test(TOP)
    out = progs[0]
    for p in progs[1:]:
        out = Seq(out, p)
    return out


def choice(*programs: Program | str) -> Program:
    progs = [as_program(p) for p in programs]
    if not progs:
        raise ValueError("choice of no programs")
    out = progs[0]
    for p in progs[1:]:
        out = Choice(out, p)
    return out


# -- planning formulas ------------------------------------------------------

def guarded(action: str) -> Program:
    """``?K<a>T ; a``: perform ``a`` only when it is known to be executable."""
    return Seq(Test(Know(diamond(Atom(action), TOP))), Atom(action))


def build_theta(actions: Iterable[str], goal: Formula) -> Formula:
    """Plan-existence formula ``<(sum_a (?K<a>T;a))*> K goal``.

    Summands follow name order so the output is deterministic.
    """
    names = sorted(set(actions))
    if not names:
        raise ValueError("action set must be nonempty")
    return diamond(Star(choice(*[guarded(a) for a in names])), Know(goal))


def build_plan_formula(plan: Sequence[str], goal: Formula) -> Formula:
    body = goal
    for a in reversed(list(plan)):
        body = strong(Atom(a), body)
    return Know(body)


def build_guarded_sequence_formula(plan: Sequence[str], goal: Formula) -> Formula:
    """``<?K<a1>T;a1;...;?K<an>T;an> K goal`` (``K goal`` for the empty plan)."""
    if not plan:
        return Know(goal)
    return diamond(seq(*[guarded(a) for a in plan]), Know(goal))


# -- measures ---------------------------------------------------------------

def formula_size(f: Formula) -> int:
    if isinstance(f, (Top, Prop)):
        return 1
    if isinstance(f, (Not, Know)):
        return 1 + formula_size(f.body)
    if isinstance(f, And):
        return 1 + formula_size(f.left) + formula_size(f.right)
    if isinstance(f, Box):
        return program_size(f.program) + formula_size(f.body)
    raise TypeError(f"not a formula: {f!r}")


def program_size(p: Program) -> int:
    # |pi*| = 1 + |pi|; the source clause literally reads 1 + |phi|.
    if isinstance(p, Atom):
        return 1
    if isinstance(p, Test):
        return 1 + formula_size(p.formula)
    if isinstance(p, Seq):
        return 1 + program_size(p.first) + program_size(p.second)
    if isinstance(p, Choice):
        return 1 + program_size(p.left) + program_size(p.right)
    if isinstance(p, Star):
        return 1 + program_size(p.body)
    raise TypeError(f"not a program: {p!r}")


def subformulas(f: Formula) -> set[Formula]:
    out: set[Formula] = set()

    def walk_f(g):
        if g in out:
            return
        out.add(g)
        if isinstance(g, (Not, Know)):
            walk_f(g.body)
        elif isinstance(g, And):
            walk_f(g.left)
            walk_f(g.right)
        elif isinstance(g, Box):
            walk_p(g.program)
            walk_f(g.body)

    def walk_p(p):
        if isinstance(p, Test):
            walk_f(p.formula)
        elif isinstance(p, Seq):
            walk_p(p.first)
            walk_p(p.second)
        elif isinstance(p, Choice):
            walk_p(p.left)
            walk_p(p.right)
        elif isinstance(p, Star):
            walk_p(p.body)

    walk_f(f)
    return out


def _letters(p: Program) -> Iterator[SequenceItem]:
    if isinstance(p, (Atom, Test)):
        yield p
    elif isinstance(p, Seq):
        yield from _letters(p.first)
        yield from _letters(p.second)
    elif isinstance(p, Choice):
        yield from _letters(p.left)
        yield from _letters(p.right)
    elif isinstance(p, Star):
        yield from _letters(p.body)


def language_alphabet(p: Program) -> list[SequenceItem]:
    """Actions and tests of ``p`` in order of first appearance."""
    return list(dict.fromkeys(_letters(p)))


def strip_tests(omega: Sequence[SequenceItem]) -> tuple[Atom, ...]:
    return tuple(x for x in omega if isinstance(x, Atom))


def action_names(omega: Sequence[SequenceItem]) -> tuple[str, ...]:
    return tuple(x.name for x in omega if isinstance(x, Atom))


def is_star_free(x: Formula | Program) -> bool:
    if isinstance(x, Star):
        return False
    if isinstance(x, (Top, Prop, Atom)):
        return True
    if isinstance(x, (Not, Know)):
        return is_star_free(x.body)
    if isinstance(x, And):
        return is_star_free(x.left) and is_star_free(x.right)
    if isinstance(x, Box):
        return is_star_free(x.program) and is_star_free(x.body)
    if isinstance(x, Test):
        return is_star_free(x.formula)
    if isinstance(x, Seq):
        return is_star_free(x.first) and is_star_free(x.second)
    if isinstance(x, Choice):
        return is_star_free(x.left) and is_star_free(x.right)
    raise TypeError(f"not a formula or program: {x!r}")


def is_program_free(f: Formula) -> bool:
    return not any(isinstance(g, Box) for g in subformulas(f))


def modal_depth(f: Formula) -> int:
    if isinstance(f, (Top, Prop)):
        return 0
    if isinstance(f, Not):
        return modal_depth(f.body)
    if isinstance(f, And):
        return max(modal_depth(f.left), modal_depth(f.right))
    if isinstance(f, Know):
        return 1 + modal_depth(f.body)
    if isinstance(f, Box):
        return 1 + max(_program_depth(f.program), modal_depth(f.body))
    raise TypeError(f"not a formula: {f!r}")


def _program_depth(p: Program) -> int:
    if isinstance(p, Atom):
        return 0
    if isinstance(p, Test):
        return modal_depth(p.formula)
    if isinstance(p, Seq):
        return max(_program_depth(p.first), _program_depth(p.second))
    if isinstance(p, Choice):
        return max(_program_depth(p.left), _program_depth(p.right))
    return _program_depth(p.body)


def propositions(f: Formula) -> set[str]:
    return {g.name for g in subformulas(f) if isinstance(g, Prop)}


def actions_of(x: Formula | Program) -> set[str]:
    if isinstance(x, Program):
        x = Box(x, TOP)
    out = set()
    for g in subformulas(x):
        if isinstance(g, Box):
            out.update(a.name for a in _letters(g.program) if isinstance(a, Atom))
    return out


# -- printing ---------------------------------------------------------------

# Binding levels: 4 unary, 3 '&', 2 '|', 1 '->'.
def to_text(f: Formula) -> str:
    return _fmt(f, 0)


def _unsugar_or(f):
    if isinstance(f, Not) and isinstance(f.body, And):
        a, b = f.body.left, f.body.right
        if isinstance(a, Not) and isinstance(b, Not):
            return a.body, b.body
    return None


def _fmt(f: Formula, ctx: int) -> str:
    if isinstance(f, Top):
        return "T"
    if isinstance(f, Prop):
        return f.name
    if isinstance(f, Not):
        b = f.body
        if isinstance(b, Top):
            return "F"
        parts = _unsugar_or(f)
        if parts is not None:
            # the left disjunct sits in a left-assoc position, so a nested
            # '|' there needs no parentheses
            s = f"{_fmt(parts[0], 2)} | {_fmt(parts[1], 3)}"
            return s if ctx <= 2 else f"({s})"
        if isinstance(b, Box) and isinstance(b.body, Not):
            return f"<{program_to_text(b.program)}>{_fmt(b.body.body, 4)}"
        if isinstance(b, Know) and isinstance(b.body, Not):
            return f"Kh {_fmt(b.body.body, 4)}"
        return f"~{_fmt(b, 4)}"
    if isinstance(f, And):
        s = f"{_fmt(f.left, 3)} & {_fmt(f.right, 4)}"
        return s if ctx <= 3 else f"({s})"
    if isinstance(f, Know):
        return f"K {_fmt(f.body, 4)}"
    if isinstance(f, Box):
        return f"[{program_to_text(f.program)}]{_fmt(f.body, 4)}"
    raise TypeError(f"not a formula: {f!r}")


# Program levels: 3 postfix, 2 ';', 1 '+'.
def program_to_text(p: Program) -> str:
    return _pfmt(p, 0)


def _pfmt(p: Program, ctx: int) -> str:
    if isinstance(p, Atom):
        return p.name
    if isinstance(p, Test):
        return f"?{_fmt(p.formula, 4)}"
    if isinstance(p, Seq):
        s = f"{_pfmt(p.first, 2)} ; {_pfmt(p.second, 3)}"
        return s if ctx <= 2 else f"({s})"
    if isinstance(p, Choice):
        s = f"{_pfmt(p.left, 1)} + {_pfmt(p.right, 2)}"
        return s if ctx <= 1 else f"({s})"
    if isinstance(p, Star):
        return f"{_pfmt(p.body, 3)}*"
    raise TypeError(f"not a program: {p!r}")


# -- parsing ----------------------------------------------------------------

class ParseError(ValueError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


_TOKEN = re.compile(
    r"(?P<ws>\s+)"
    r"|(?P<op>\[\[|\]\]|->|[~&|\[\]<>()?;+*])"
    r"|(?P<ident>[A-Za-z_][A-Za-z0-9_']*)"
)
_KEYWORDS = {"T", "F", "K", "Kh"}


@dataclass
class _Tok:
    kind: str  # 'op', 'ident', 'kw', 'eof'
    text: str
    line: int
    col: int


def _tokenize(text: str) -> list[_Tok]:
    toks = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        s = m.group()
        if kind == "ws":
            for i, ch in enumerate(s):
                if ch == "\n":
                    line += 1
                    line_start = pos + i + 1
        else:
            if kind == "ident" and s in _KEYWORDS:
                kind = "kw"
            toks.append(_Tok(kind, s, line, pos - line_start + 1))
        pos = m.end()
    toks.append(_Tok("eof", "", line, pos - line_start + 1))
    return toks


class _Parser:
    def __init__(self, text: str):
        self.toks = _tokenize(text)
        self.i = 0

    @property
    def cur(self) -> _Tok:
        return self.toks[self.i]

    def error(self, expected: str):
        t = self.cur
        found = "end of input" if t.kind == "eof" else repr(t.text)
        raise ParseError(f"expected {expected}, found {found}", t.line, t.col)

    def accept(self, text: str) -> bool:
        if self.cur.kind in ("op", "kw") and self.cur.text == text:
            self.i += 1
            return True
        return False

    def expect(self, text: str):
        if not self.accept(text):
            self.error(repr(text))

    def finish(self):
        if self.cur.kind != "eof":
            self.error("end of input")

    # phi -> imp
    def formula(self) -> Formula:
        left = self.disjunction()
        if self.accept("->"):
            return implies(left, self.formula())
        return left

    def disjunction(self) -> Formula:
        f = self.conjunction()
        while self.accept("|"):
            f = lor(f, self.conjunction())
        return f

    def conjunction(self) -> Formula:
        f = self.unary()
        while self.accept("&"):
            f = And(f, self.unary())
        return f

    def unary(self) -> Formula:
        t = self.cur
        if t.kind == "ident":
            self.i += 1
            return Prop(t.text)
        if t.kind == "kw":
            self.i += 1
            if t.text == "T":
                return TOP
            if t.text == "F":
                return bot()
            if t.text == "K":
                return Know(self.unary())
            return khat(self.unary())
        if self.accept("~"):
            return Not(self.unary())
        if self.accept("[["):
            p = self.program()
            self.expect("]]")
            return strong(p, self.unary())
        if self.accept("["):
            p = self.program()
            self.expect("]")
            return Box(p, self.unary())
        if self.accept("<"):
            p = self.program()
            self.expect(">")
            return diamond(p, self.unary())
        if self.accept("("):
            f = self.formula()
            self.expect(")")
            return f
        self.error("a formula")

    def program(self) -> Program:
        p = self.sequence()
        while self.accept("+"):
            p = Choice(p, self.sequence())
        return p

    def sequence(self) -> Program:
        p = self.postfix()
        while self.accept(";"):
            p = Seq(p, self.postfix())
        return p

    def postfix(self) -> Program:
        p = self.primary_program()
        while self.accept("*"):
            p = Star(p)
        return p

    def primary_program(self) -> Program:
        t = self.cur
        if t.kind == "ident":
            self.i += 1
            return Atom(t.text)
        if self.accept("?"):
            return Test(self.unary())
        if self.accept("("):
            p = self.program()
            self.expect(")")
            return p
        self.error("a program")


def parse_formula(text: str) -> Formula:
    parser = _Parser(text)
    f = parser.formula()
    parser.finish()
    return f


def parse_program(text: str) -> Program:
    parser = _Parser(text)
    p = parser.program()
    parser.finish()
    return p

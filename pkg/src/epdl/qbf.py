"""QBF truth as star-free EPDL model checking.

For a prenex CNF formula ``E x1 A x2 E x3 ... phi`` we build a chain model
whose uncertainty set accumulates the choices made so far, and a formula
that picks a value for each variable with an alternating diamond/box.  The
dual knowledge operator then looks back at the accumulated choices.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import product

from .mc_contextual import mc
from .model import KripkeModel, UncertaintyMap
from .syntax import (
    Atom, Box, Choice, Formula, Prop, Seq, Test, conj, diamond, disj, khat, lor,
)


@dataclass(frozen=True)
class QBF:
    """Prenex CNF with the fixed prefix: odd variables existential, even universal.

    ``clauses`` holds signed 1-based variable indices.
    """

    n: int
    clauses: tuple

    def __post_init__(self):
        object.__setattr__(self, "clauses", tuple(tuple(c) for c in self.clauses))
        if self.n < 1:
            raise ValueError("a QBF needs at least one variable")
        for c in self.clauses:
            if not c:
                raise ValueError("empty clause")
            for lit in c:
                if lit == 0 or abs(lit) > self.n:
                    raise ValueError(f"literal {lit} out of range 1..{self.n}")

    def __str__(self):
        prefix = " ".join(("E" if i % 2 else "A") + f"x{i}" for i in range(1, self.n + 1))
        body = " & ".join("(" + " | ".join(("~" if l < 0 else "") + f"x{abs(l)}" for l in c) + ")"
                          for c in self.clauses)
        return f"{prefix}. {body}"


def state_name(i: int, positive: bool = True) -> str:
    if i == 0:
        return "x0"
    return f"x{i}" if positive else f"x{i}_bar"


def action_name(i: int, positive: bool = True) -> str:
    return f"a{i}" if positive else f"a{i}_bar"


def build_model(n: int) -> UncertaintyMap:
    """The chain model: ``x0`` then ``x_i`` / ``x_i_bar`` per variable, every
    action looping everywhere, ``U = {x0}``."""
    if n < 1:
        raise ValueError("n must be at least 1")
    states = ["x0"]
    for i in range(1, n + 1):
        states.append(state_name(i, True))
    for i in range(1, n + 1):
        states.append(state_name(i, False))
    loops = [(s, s) for s in states]
    edges = {}
    for i in range(1, n + 1):
        prev = ["x0"] if i == 1 else [state_name(i - 1, True), state_name(i - 1, False)]
        for pos in (True, False):
            edges[action_name(i, pos)] = loops + [(s, state_name(i, pos)) for s in prev]
    valuation = {}
    for i in range(1, n + 1):
        valuation[state_name(i, True)] = [f"p{i}"]
        valuation[state_name(i, False)] = [f"q{i}"]
    m = KripkeModel.from_edges(states, edges, valuation)
    return UncertaintyMap(m, m.belief(["x0"]))


def literal_formula(lit: int) -> Formula:
    i = abs(lit)
    return khat(Prop(f"p{i}" if lit > 0 else f"q{i}"))


def build_formula(alpha: QBF) -> Formula:
    psi = conj(disj(literal_formula(l) for l in c) for c in alpha.clauses)
    body = psi
    for i in range(alpha.n, 0, -1):
        pick = Seq(Choice(Atom(action_name(i, True)), Atom(action_name(i, False))),
                   Test(lor(Prop(f"p{i}"), Prop(f"q{i}"))))
        body = diamond(pick, body) if i % 2 else Box(pick, body)
    return body


def eval_qbf(alpha: QBF) -> bool:
    """Game-tree evaluation of the alternating prefix."""
    def matrix(values):
        return all(any(values[abs(l) - 1] == (l > 0) for l in c) for c in alpha.clauses)

    def go(i, values):
        if i > alpha.n:
            return matrix(values)
        branches = (go(i + 1, values + (v,)) for v in (True, False))
        return any(branches) if i % 2 else all(branches)

    return go(1, ())


def reduction_check(alpha: QBF) -> bool:
    um = build_model(alpha.n)
    return mc(um, "x0", (), build_formula(alpha))


def all_small_qbfs(n: int, max_clauses: int, max_literals: int):
    """Every QBF with ``n`` variables and 1..max_clauses clauses, each an
    ordered tuple of 1..max_literals literals (repeats and complementary
    pairs included)."""
    lits = [l for i in range(1, n + 1) for l in (i, -i)]
    clause_pool = [c for k in range(1, max_literals + 1) for c in product(lits, repeat=k)]
    for m in range(1, max_clauses + 1):
        for clauses in product(clause_pool, repeat=m):
            yield QBF(n, clauses)


def random_qbf(rng: random.Random, n: int, n_clauses: int, max_literals: int = 3) -> QBF:
    clauses = []
    for _ in range(n_clauses):
        k = rng.randint(1, min(max_literals, n))
        vars_ = rng.sample(range(1, n + 1), k)
        clauses.append(tuple(v if rng.random() < 0.5 else -v for v in vars_))
    return QBF(n, clauses)


def parse_qdimacs(text: str) -> QBF:
    """``p cnf n m`` header then clauses as signed integers ending in 0.

    ``c`` lines are comments; quantifier lines are not accepted since the
    prefix is fixed.
    """
    n = None
    clauses = []
    cur: list[int] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("p"):
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise ValueError(f"line {lineno}: bad header {line!r}")
            n = int(parts[2])
            continue
        if line[0] in "ae":
            raise ValueError(f"line {lineno}: quantifier lines are not supported (prefix is fixed)")
        if n is None:
            raise ValueError(f"line {lineno}: clause before 'p cnf' header")
        for tok in line.split():
            try:
                v = int(tok)
            except ValueError:
                raise ValueError(f"line {lineno}: bad literal {tok!r}") from None
            if v == 0:
                clauses.append(tuple(cur))
                cur = []
            else:
                cur.append(v)
    if cur:
        clauses.append(tuple(cur))
    if n is None:
        raise ValueError("missing 'p cnf' header")
    return QBF(n, clauses)

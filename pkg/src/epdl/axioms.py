"""Counterexample search for the axioms of the epistemic action logic.

Each schema is instantiated with random formulas and checked at every
point of many small random uncertainty maps.  Passing says nothing about
validity over all models; a failure is a definite counterexample, which
is shrunk before it is reported.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .mc_contextual import mc
from .model import KripkeModel, UncertaintyMap, bits
from .semantics_direct import DirectChecker
from .syntax import (
    TOP, And, Atom, Box, Choice, Formula, Know, Not, Program, Prop, Seq, Star, Test, diamond,
    guarded, iff, implies, lor, build_guarded_sequence_formula, build_plan_formula,
)

ACTIONS = list("abcde")
PROPS = ["p", "q", "r", "t"]


def _names(pool: list[str], k: int) -> list[str]:
    if k <= len(pool):
        return pool[:k]
    return pool + [f"{pool[0]}{i}" for i in range(k - len(pool))]


def random_model(n_states: int, n_actions: int, n_props: int, edge_density: float,
                 seed: int | random.Random) -> UncertaintyMap:
    """Reproducible random uncertainty map with a random nonempty ``U``."""
    if n_states < 1:
        raise ValueError("n_states must be at least 1")
    rng = seed if isinstance(seed, random.Random) else random.Random(seed)
    states = [f"s{i}" for i in range(n_states)]
    edges = {
        a: [(s, t) for s in states for t in states if rng.random() < edge_density]
        for a in _names(ACTIONS, n_actions)
    }
    valuation = {s: [p for p in _names(PROPS, n_props) if rng.random() < 0.5] for s in states}
    m = KripkeModel.from_edges(states, edges, valuation)
    u = 0
    while not u:
        u = sum(1 << i for i in range(n_states) if rng.random() < 0.5)
    return UncertaintyMap(m, u)


def random_formula(rng: random.Random, depth: int, props=("p", "q"), actions=("a", "b"),
                   star: bool = False, program_depth: int = 1) -> Formula:
    """Random formula whose constructor nesting is at most ``depth``."""
    if depth <= 0:
        return TOP if rng.random() < 0.1 else Prop(rng.choice(props))
    kind = rng.choice(["prop", "not", "and", "know", "box", "dia", "or"])
    sub = lambda: random_formula(rng, depth - 1, props, actions, star, program_depth)
    if kind == "prop":
        return Prop(rng.choice(props))
    if kind == "not":
        return Not(sub())
    if kind == "and":
        return And(sub(), sub())
    if kind == "or":
        return lor(sub(), sub())
    if kind == "know":
        return Know(sub())
    prog = random_program(rng, program_depth, depth - 1, props, actions, star)
    return Box(prog, sub()) if kind == "box" else diamond(prog, sub())


def random_program(rng: random.Random, depth: int, formula_depth: int, props=("p", "q"),
                   actions=("a", "b"), star: bool = False) -> Program:
    if depth <= 0:
        if formula_depth > 0 and rng.random() < 0.2:
            return Test(random_formula(rng, formula_depth - 1, props, actions, False, 0))
        return Atom(rng.choice(actions))
    kinds = ["atom", "test", "seq", "choice"] + (["star"] * 2 if star else [])
    kind = rng.choice(kinds)
    sub = lambda: random_program(rng, depth - 1, formula_depth, props, actions, star)
    if kind == "atom":
        return Atom(rng.choice(actions))
    if kind == "test":
        return Test(random_formula(rng, max(formula_depth - 1, 0), props, actions, star, 0))
    if kind == "seq":
        return Seq(sub(), sub())
    if kind == "choice":
        return Choice(sub(), sub())
    return Star(sub())


# -- schemas ----------------------------------------------------------------

p, q = Prop("p"), Prop("q")

TAUTOLOGIES = [
    implies(p, p),
    lor(p, Not(p)),
    implies(p, implies(q, p)),
    implies(And(p, q), p),
    implies(Not(Not(p)), p),
    implies(implies(p, q), implies(Not(q), Not(p))),
    implies(implies(implies(p, q), p), p),
]


def _schema(name: str, a: str, taut: int = 0) -> Formula:
    A = Atom(a)
    if name == "TAUT":
        return TAUTOLOGIES[taut]
    if name == "DISTK":
        return implies(Know(implies(p, q)), implies(Know(p), Know(q)))
    if name == "DIST_a":
        return implies(Box(A, implies(p, q)), implies(Box(A, p), Box(A, q)))
    if name == "T":
        return implies(Know(p), p)
    if name == "4":
        return implies(Know(p), Know(Know(p)))
    if name == "5":
        return implies(Not(Know(p)), Know(Not(Know(p))))
    if name == "PR_a":
        return implies(Know(Box(A, p)), Box(A, Know(p)))
    if name == "NM_a":
        return implies(diamond(A, Know(p)), Know(Box(A, p)))
    if name == "OBS_a":
        return lor(Know(diamond(A, TOP)), Know(Not(diamond(A, TOP))))
    if name == "NM_a_flipped":
        return implies(Know(Box(A, p)), diamond(A, Know(p)))
    raise KeyError(name)


SELA_SCHEMAS = ("TAUT", "DISTK", "DIST_a", "T", "4", "5", "PR_a", "NM_a")
DROPPED_SCHEMAS = ("OBS_a",)


def substitute(f: Formula, sub: Mapping[str, Formula]) -> Formula:
    """Uniform substitution of formulas for proposition letters."""
    if isinstance(f, Prop):
        return sub.get(f.name, f)
    if isinstance(f, (Not, Know)):
        return type(f)(substitute(f.body, sub))
    if isinstance(f, And):
        return And(substitute(f.left, sub), substitute(f.right, sub))
    if isinstance(f, Box):
        return Box(_substitute_program(f.program, sub), substitute(f.body, sub))
    return f


def _substitute_program(pr: Program, sub) -> Program:
    if isinstance(pr, Test):
        return Test(substitute(pr.formula, sub))
    if isinstance(pr, Seq):
        return Seq(_substitute_program(pr.first, sub), _substitute_program(pr.second, sub))
    if isinstance(pr, Choice):
        return Choice(_substitute_program(pr.left, sub), _substitute_program(pr.right, sub))
    if isinstance(pr, Star):
        return Star(_substitute_program(pr.body, sub))
    return pr


def replace(f: Formula, old: Formula, new: Formula) -> Formula:
    """Replace every occurrence of the subformula ``old`` by ``new``."""
    if f == old:
        return new
    if isinstance(f, (Not, Know)):
        return type(f)(replace(f.body, old, new))
    if isinstance(f, And):
        return And(replace(f.left, old, new), replace(f.right, old, new))
    if isinstance(f, Box):
        return Box(_replace_program(f.program, old, new), replace(f.body, old, new))
    return f


def _replace_program(pr: Program, old, new) -> Program:
    if isinstance(pr, Test):
        return Test(replace(pr.formula, old, new))
    if isinstance(pr, Seq):
        return Seq(_replace_program(pr.first, old, new), _replace_program(pr.second, old, new))
    if isinstance(pr, Choice):
        return Choice(_replace_program(pr.left, old, new), _replace_program(pr.right, old, new))
    if isinstance(pr, Star):
        return Star(_replace_program(pr.body, old, new))
    return pr


@dataclass(frozen=True)
class SchemaInstance:
    axiom: str
    substitution: tuple  # ((letter, formula), ...)
    action: str = "a"
    template: int = 0

    def formula(self) -> Formula:
        return substitute(_schema(self.axiom, self.action, self.template), dict(self.substitution))


def random_instance(rng: random.Random, axiom: str, depth: int = 3, actions=("a", "b"),
                    props=("p", "q")) -> SchemaInstance:
    sub = tuple((letter, random_formula(rng, rng.randint(0, depth), props, actions))
                for letter in ("p", "q"))
    return SchemaInstance(axiom, sub, rng.choice(actions), rng.randrange(len(TAUTOLOGIES)))


# -- checking ---------------------------------------------------------------

def check_validity(f: Formula, models: Iterable[UncertaintyMap], engine: str = "direct"):
    """First ``(model, point)`` where ``f`` fails, or ``None``."""
    for um in models:
        point = first_failure(f, um, engine)
        if point is not None:
            return um, point
    return None


def first_failure(f: Formula, um: UncertaintyMap, engine: str = "direct") -> int | None:
    if engine == "direct":
        checker = DirectChecker(um.model)
        for s in bits(um.uncertainty):
            if not checker.holds(um.uncertainty, s, f):
                return s
        return None
    if engine == "contextual":
        for s in bits(um.uncertainty):
            if not mc(um, s, (), f):
                return s
        return None
    raise ValueError(f"unknown engine {engine!r}")


def _without_state(um: UncertaintyMap, victim: int) -> UncertaintyMap | None:
    m = um.model
    if m.n == 1 or um.uncertainty == 1 << victim:
        return None
    keep = [i for i in range(m.n) if i != victim]
    states = [m.states[i] for i in keep]
    edges = {a: [(s, t) for s, t in m.edges(a) if m.states[victim] not in (s, t)] for a in m.actions}
    val = {m.states[i]: m.labels(i) for i in keep}
    nm = KripkeModel.from_edges(states, edges, val)
    return UncertaintyMap(nm, nm.belief(n for n in m.names(um.uncertainty) if n != m.states[victim]))


def _without_edge(um: UncertaintyMap, action: str, edge) -> UncertaintyMap:
    m = um.model
    edges = {a: [e for e in m.edges(a) if (a, e) != (action, edge)] for a in m.actions}
    val = {s: m.labels(i) for i, s in enumerate(m.states)}
    return UncertaintyMap(KripkeModel.from_edges(m.states, edges, val), um.uncertainty)


def minimize(f: Formula, um: UncertaintyMap, engine: str = "direct") -> tuple[UncertaintyMap, int]:
    """Greedily delete states, then edges, while ``f`` still fails somewhere in ``U``."""
    assert first_failure(f, um, engine) is not None
    changed = True
    while changed:
        changed = False
        for victim in range(um.model.n):
            smaller = _without_state(um, victim)
            if smaller is not None and first_failure(f, smaller, engine) is not None:
                um, changed = smaller, True
                break
        if changed:
            continue
        for a in um.model.actions:
            for e in um.model.edges(a):
                smaller = _without_edge(um, a, e)
                if first_failure(f, smaller, engine) is not None:
                    um, changed = smaller, True
                    break
            if changed:
                break
    return um, first_failure(f, um, engine)


# -- the suite --------------------------------------------------------------

def _validity_table(rng: random.Random, actions, props, star: bool) -> dict[str, Formula]:
    """Instances of the PDL validities and the planning equivalences."""
    rf = lambda d=2: random_formula(rng, d, props, actions, star)
    rp = lambda: random_program(rng, 1, 1, props, actions, star)
    pi1, pi2, phi, psi = rp(), rp(), rf(), rf()
    plan = [rng.choice(actions) for _ in range(rng.randint(0, 4))]
    a = rng.choice(actions)
    return {
        "PDL_seq": iff(diamond(Seq(pi1, pi2), phi), diamond(pi1, diamond(pi2, phi))),
        "PDL_choice": iff(Box(Choice(pi1, pi2), phi), And(Box(pi1, phi), Box(pi2, phi))),
        "PDL_test": iff(Box(Test(psi), phi), implies(psi, phi)),
        "executable_step": iff(build_plan_formula([a], phi), diamond(guarded(a), Know(phi))),
        "guarded_sequence": iff(build_plan_formula(plan, phi), build_guarded_sequence_formula(plan, phi)),
    }


VALIDITY_TABLE = ("PDL_seq", "PDL_choice", "PDL_test", "executable_step", "guarded_sequence")


@dataclass
class Report:
    passed: dict = field(default_factory=dict)
    total: dict = field(default_factory=dict)
    counterexamples: dict = field(default_factory=dict)

    def record(self, name: str, ok: bool, witness=None):
        self.total[name] = self.total.get(name, 0) + 1
        if ok:
            self.passed[name] = self.passed.get(name, 0) + 1
        else:
            self.passed.setdefault(name, 0)
            self.counterexamples.setdefault(name, []).append(witness)

    def merge(self, other: "Report") -> "Report":
        out = Report(dict(self.passed), dict(self.total),
                     {k: list(v) for k, v in self.counterexamples.items()})
        for k, v in other.total.items():
            out.total[k] = out.total.get(k, 0) + v
            out.passed[k] = out.passed.get(k, 0) + other.passed.get(k, 0)
        for k, v in other.counterexamples.items():
            out.counterexamples.setdefault(k, []).extend(v)
        return out

    @property
    def ok(self) -> bool:
        return not any(self.counterexamples.values())

    def lines(self) -> list[str]:
        out = []
        for name in self.total:
            n_bad = len(self.counterexamples.get(name, []))
            out.append(f"{name:18s} {self.passed[name]}/{self.total[name]} passed"
                       + (f", {n_bad} counterexample(s)" if n_bad else ""))
        return out


def soundness_suite(seed: int, trials: int, schemas: Iterable[str] | None = None,
                    validities: bool = True, max_states: int = 4, engine: str = "direct",
                    shrink: bool = True) -> Report:
    """Instantiate each schema ``trials`` times on fresh random models."""
    names = list(SELA_SCHEMAS if schemas is None else schemas)
    rng = random.Random(seed)
    report = Report()
    actions, props = ("a", "b"), ("p", "q")
    for _ in range(trials):
        um = random_model(rng.randint(1, max_states), 2, 2, rng.choice([0.2, 0.35, 0.5]), rng)
        for name in names:
            inst = random_instance(rng, name, 3, actions, props)
            _check_one(report, name, inst.formula(), um, engine, shrink, inst)
        if validities:
            for name, f in _validity_table(rng, actions, props, star=False).items():
                _check_one(report, name, f, um, engine, shrink, f)
    return report


def _check_one(report, name, f, um, engine, shrink, label):
    s = first_failure(f, um, engine)
    if s is None:
        report.record(name, True)
        return
    if shrink:
        um, s = minimize(f, um, engine)
    report.record(name, False, (label, um, s))

"""Conformant planning on uncertainty maps.

A plan ``a1 ... an`` over ``B`` is conformant for goal ``phi`` when
``K [[a1]] ... [[an]] phi`` holds; a plan exists iff
``<(sum_a (?K<a>T ; a))*> K phi`` holds.  Besides these two checks the
module extracts shortest plans by breadth-first search over beliefs and
offers a bisection reachability test that never builds the belief graph.
"""

from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass, field
from itertools import product
from typing import Iterable, Sequence

from .ets import check_full
from .model import Belief, KripkeModel, UncertaintyMap, bits, update_belief
from .semantics_direct import DirectChecker
from .syntax import (
    And, Formula, Know, Not, Prop, Top, build_plan_formula, build_theta, is_program_free,
)


@dataclass(frozen=True)
class PlanningProblem:
    map: UncertaintyMap
    goal: Formula
    actions: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        object.__setattr__(self, "actions", frozenset(self.actions))
        if not self.actions:
            raise ValueError("action set must be nonempty")
        if not isinstance(self.goal, Formula):
            raise TypeError(f"goal is not a formula: {self.goal!r}")

    @property
    def ordered_actions(self) -> list[str]:
        return sorted(self.actions)


Plan = tuple  # tuple[str, ...]


def _check_steps(problem: PlanningProblem, plan: Sequence[str]):
    for a in plan:
        if a not in problem.actions:
            raise ValueError(f"plan step {a!r} is not in the action set")


def verify_plan(problem: PlanningProblem, plan: Sequence[str], point: int | str | None = None) -> bool:
    """``K [[a1]]...[[an]] goal`` at one point of ``U`` (all points agree)."""
    _check_steps(problem, plan)
    return check_full(problem.map, problem.map.point(point), build_plan_formula(plan, problem.goal))


def plan_exists(problem: PlanningProblem, point: int | str | None = None) -> bool:
    theta = build_theta(problem.actions, problem.goal)
    return check_full(problem.map, problem.map.point(point), theta)


def knows_static(model: KripkeModel, belief: Belief, f: Formula) -> bool:
    """``K f`` with ``belief`` as uncertainty set, for program-free ``f``."""
    memo: dict = {}

    def ev(s: int, g: Formula) -> bool:
        key = (s, g)
        if key in memo:
            return memo[key]
        if isinstance(g, Top):
            r = True
        elif isinstance(g, Prop):
            r = bool(model.prop(g.name) >> s & 1)
        elif isinstance(g, Not):
            r = not ev(s, g.body)
        elif isinstance(g, And):
            r = ev(s, g.left) and ev(s, g.right)
        elif isinstance(g, Know):
            r = all(ev(u, g.body) for u in bits(belief))
        else:
            raise ValueError("goal must be program-free")
        memo[key] = r
        return r

    return all(ev(u, f) for u in bits(belief))


def guarded_successors(model: KripkeModel, belief: Belief, actions: Iterable[str]):
    """``(a, belief|a)`` for each ``a`` executable at every world of ``belief``."""
    for a in actions:
        if model.executable_everywhere(belief, a):
            yield a, update_belief(model, belief, a)


def guard_reachable_beliefs(model: KripkeModel, start: Belief, actions: Iterable[str]) -> list[Belief]:
    acts = sorted(actions)
    order = [start]
    seen = {start}
    for g in order:
        for _, nxt in guarded_successors(model, g, acts):
            if nxt not in seen:
                seen.add(nxt)
                order.append(nxt)
    return order


def find_plan(problem: PlanningProblem) -> Plan | None:
    """A shortest conformant plan, ties broken by action-name order."""
    if not is_program_free(problem.goal):
        return _deepening_plan(problem)
    model = problem.map.model
    acts = problem.ordered_actions
    start = problem.map.uncertainty
    parent: dict = {start: None}
    queue = deque([start])
    while queue:
        g = queue.popleft()
        if knows_static(model, g, problem.goal):
            steps = []
            while parent[g] is not None:
                g, a = parent[g]
                steps.append(a)
            return tuple(reversed(steps))
        for a, nxt in guarded_successors(model, g, acts):
            if nxt not in parent:
                parent[nxt] = (g, a)
                queue.append(nxt)
    return None


def _deepening_plan(problem: PlanningProblem) -> Plan | None:
    # a shortest plan never revisits a belief, hence the cap
    cap = len(guard_reachable_beliefs(problem.map.model, problem.map.uncertainty, problem.actions))
    acts = problem.ordered_actions
    for length in range(cap):
        for plan in product(acts, repeat=length):
            if verify_plan(problem, plan):
                return plan
    return None


def brute_force_plan(problem: PlanningProblem, max_len: int) -> Plan | None:
    """First plan in length-lex order that the direct engine verifies.

    Prefixes that are not executable at every world are not extended: no
    extension of such a prefix can verify.
    """
    um = problem.map
    checker = DirectChecker(um.model)
    point = um.point()
    acts = problem.ordered_actions
    goal = problem.goal

    def holds(plan, body):
        return checker.holds(um.uncertainty, point, build_plan_formula(plan, body))

    layer: list[tuple] = [()]
    for length in range(max_len + 1):
        for plan in layer:
            if holds(plan, goal):
                return plan
        if length == max_len:
            break
        layer = [p + (a,) for p in layer for a in acts if holds(p + (a,), Top())]
        if not layer:
            break
    return None


def savitch_reach(model: KripkeModel, start: Belief, actions: Iterable[str], goal: Formula,
                  memoize: bool = True) -> bool:
    """Is a belief where ``K goal`` holds reachable along guarded updates?

    Midpoint recursion: ``reach(x, y, k)`` asks for a path of at most
    ``2**k`` steps, trying every belief as midpoint.  ``k`` starts at the
    number of worlds, enough to cover all ``2**n - 1`` beliefs.  The belief
    graph is never built; one-step links are computed on demand.  With
    ``memoize`` the recursion caches its answers, trading the small-space
    bound for speed.
    """
    if not is_program_free(goal):
        raise ValueError("goal must be program-free")
    acts = sorted(set(actions))
    n = model.n
    every = range(1, 1 << n)
    cache: dict | None = {} if memoize else None

    def step(x: Belief, y: Belief) -> bool:
        return x == y or any(nxt == y for _, nxt in guarded_successors(model, x, acts))

    def reach(x: Belief, y: Belief, k: int) -> bool:
        if x == y:
            return True
        if k == 0:
            return step(x, y)
        if cache is not None:
            key = (x, y, k)
            hit = cache.get(key)
            if hit is not None:
                return hit
        r = any(reach(x, mid, k - 1) and reach(mid, y, k - 1) for mid in every)
        if cache is not None:
            cache[(x, y, k)] = r
        return r

    return any(knows_static(model, target, goal) and reach(start, target, n) for target in every)


def count_guarded_paths(model: KripkeModel, start: Belief, actions: Iterable[str], max_len: int) -> int:
    """Number of action sequences of length ``<= max_len`` executable at every
    step from ``start``; this is the size of ``brute_force_plan``'s search tree."""
    acts = sorted(set(actions))
    layer = {start: 1}
    total = 1
    for _ in range(max_len):
        nxt: dict = {}
        for g, k in layer.items():
            for _, h in guarded_successors(model, g, acts):
                nxt[h] = nxt.get(h, 0) + k
        total += sum(nxt.values())
        layer = nxt
        if not layer:
            break
    return total


def random_problem(rng: random.Random, max_states: int = 5, max_actions: int = 3,
                   prefix_budget: int | None = 20000) -> PlanningProblem:
    """Random problem with a program-free goal.

    Half of the draws use an unstructured random model with a random goal,
    which mostly yields empty plans or no plan at all.  The other half use a
    model whose actions funnel into a few hub states, with a goal made of
    literals true at some state, and already-known goals are mostly redrawn;
    these are where plans of length two and more come from.

    With ``prefix_budget`` set, models whose brute-force search tree (bounded
    by the guard-reachable belief count) would exceed the budget are redrawn.
    """
    from .axioms import random_model

    while True:
        n_states = rng.randint(1, max_states)
        n_actions = rng.randint(1, max_actions)
        if rng.random() < 0.5:
            um = random_model(n_states, n_actions, 2, rng.choice([0.15, 0.25, 0.4, 0.6]), rng)
            goal = _random_goal(rng)
        else:
            um = _funnel_model(rng, n_states, n_actions, rng.choice([0.85, 1.0]))
            goal = _anchored_goal(rng, um.model)
            if knows_static(um.model, um.uncertainty, goal) and rng.random() < 0.8:
                continue
        acts = um.model.actions or ["a"]
        k = rng.randint(1, len(acts))
        problem = PlanningProblem(um, goal, frozenset(rng.sample(acts, k)))
        if prefix_budget is None:
            return problem
        cap = len(guard_reachable_beliefs(um.model, um.uncertainty, problem.actions))
        if count_guarded_paths(um.model, um.uncertainty, problem.actions, cap) <= prefix_budget:
            return problem


def _funnel_model(rng: random.Random, n_states: int, n_actions: int,
                  exec_prob: float) -> UncertaintyMap:
    states = [f"s{i}" for i in range(n_states)]
    hubs = rng.sample(states, max(1, n_states // 2))
    edges = {}
    for a in [f"a{i}" for i in range(n_actions)]:
        pairs = []
        for s in states:
            if rng.random() < exec_prob:
                pool = hubs if rng.random() < 0.5 else states
                k = 1 if rng.random() < 0.75 else 2
                pairs.extend((s, t) for t in rng.sample(pool, min(k, len(pool))))
        edges[a] = pairs
    val = {s: [x for x in "pq" if rng.random() < 0.5] for s in states}
    m = KripkeModel.from_edges(states, edges, val)
    start = rng.sample(range(n_states), rng.randint(1, min(3, n_states)))
    return UncertaintyMap(m, sum(1 << i for i in start))


def _anchored_goal(rng: random.Random, m: KripkeModel) -> Formula:
    t = rng.randrange(m.n)
    lits = []
    for x in rng.sample("pq", rng.randint(1, 2)):
        lits.append(Prop(x) if m.prop(x) >> t & 1 else Not(Prop(x)))
    goal = lits[0] if len(lits) == 1 else And(*lits)
    return Know(goal) if rng.random() < 0.2 else goal


def _random_goal(rng: random.Random, depth: int = 2) -> Formula:
    if depth == 0 or rng.random() < 0.3:
        return Prop(rng.choice("pq"))
    kind = rng.choice(["not", "and", "know", "prop"])
    if kind == "not":
        return Not(_random_goal(rng, depth - 1))
    if kind == "and":
        return And(_random_goal(rng, depth - 1), _random_goal(rng, depth - 1))
    if kind == "know":
        return Know(_random_goal(rng, depth - 1))
    return Prop(rng.choice("pq"))

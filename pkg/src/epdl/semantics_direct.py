"""Update semantics by literal recursion on pointed uncertainty maps.

A pointed map over a fixed Kripke model is a pair ``(belief, state)`` with
``state`` in ``belief``.  Programs denote relations between such pairs: an
action moves the state along an edge and replaces the belief by its image,
a test filters, and ``;``, ``+``, ``*`` are composition, union and
reflexive-transitive closure.  Only beliefs reachable by updates ever
occur, so the closure is computed over that reachable fragment.

This engine is deliberately naive and serves as the reference the other
engines are checked against.
"""

from __future__ import annotations

from .model import Belief, KripkeModel, ModelError, UncertaintyMap, bits, update_belief
from .syntax import And, Atom, Box, Choice, Formula, Know, Not, Program, Prop, Seq, Star, Test, Top

Pointed = tuple  # (belief, state)


class DirectChecker:
    """Memoising evaluator bound to one Kripke model."""

    def __init__(self, model: KripkeModel):
        self.model = model
        self._sat: dict = {}
        self._post: dict = {}

    def holds(self, belief: Belief, state: int, f: Formula) -> bool:
        key = (belief, state, f)
        hit = self._sat.get(key)
        if hit is not None:
            return hit
        result = self._holds(belief, state, f)
        self._sat[key] = result
        return result

    def _holds(self, belief, state, f) -> bool:
        if isinstance(f, Top):
            return True
        if isinstance(f, Prop):
            return bool(self.model.prop(f.name) >> state & 1)
        if isinstance(f, Not):
            return not self.holds(belief, state, f.body)
        if isinstance(f, And):
            return self.holds(belief, state, f.left) and self.holds(belief, state, f.right)
        if isinstance(f, Know):
            return all(self.holds(belief, u, f.body) for u in bits(belief))
        if isinstance(f, Box):
            return all(self.holds(b, t, f.body) for b, t in self.post(belief, state, f.program))
        raise TypeError(f"not a formula: {f!r}")

    def post(self, belief: Belief, state: int, p: Program) -> frozenset:
        """Image of the pointed map ``(belief, state)`` under the program."""
        key = (belief, state, p)
        hit = self._post.get(key)
        if hit is None:
            hit = frozenset(self._post_of(belief, state, p))
            self._post[key] = hit
        return hit

    def _post_of(self, belief, state, p):
        if isinstance(p, Atom):
            succ = self.model.successors(p.name, state)
            if not succ:
                return ()
            new = update_belief(self.model, belief, p.name)
            return [(new, t) for t in bits(succ)]
        if isinstance(p, Test):
            return [(belief, state)] if self.holds(belief, state, p.formula) else ()
        if isinstance(p, Seq):
            out = set()
            for b, t in self.post(belief, state, p.first):
                out |= self.post(b, t, p.second)
            return out
        if isinstance(p, Choice):
            return self.post(belief, state, p.left) | self.post(belief, state, p.right)
        if isinstance(p, Star):
            # least fixpoint of X = {x} | post(X, body)
            seen = {(belief, state)}
            frontier = [(belief, state)]
            while frontier:
                b, s = frontier.pop()
                for nxt in self.post(b, s, p.body):
                    if nxt not in seen:
                        seen.add(nxt)
                        frontier.append(nxt)
            return seen
        raise TypeError(f"not a program: {p!r}")


def sat(m: UncertaintyMap, s: int | str, f: Formula, checker: DirectChecker | None = None) -> bool:
    """``M, s |= f``.  ``s`` must lie in the uncertainty set."""
    point = m.point(s)
    checker = checker or DirectChecker(m.model)
    if checker.model is not m.model:
        raise ModelError("checker is bound to a different model")
    return checker.holds(m.uncertainty, point, f)


def reachable_beliefs(model: KripkeModel, start: Belief) -> list[Belief]:
    """Beliefs reachable from ``start`` by nonempty action updates, BFS order."""
    order = [start]
    seen = {start}
    for b in order:
        for a in model.actions:
            nxt = update_belief(model, b, a)
            if nxt and nxt not in seen:
                seen.add(nxt)
                order.append(nxt)
    return order


def program_rel(m: KripkeModel, p: Program, start: Belief | None = None) -> frozenset:
    """The denotation of ``p`` restricted to pointed maps reachable from ``start``.

    Returns a set of ``((belief, state), (belief', state'))`` pairs.  With no
    ``start`` every nonempty belief is a source.
    """
    checker = DirectChecker(m)
    if start is None:
        sources = range(1, 1 << m.n)
    else:
        sources = reachable_beliefs(m, start)
    pairs = set()
    for b in sources:
        for s in bits(b):
            for tgt in checker.post(b, s, p):
                pairs.add(((b, s), tgt))
    return frozenset(pairs)

"""Two-dimensional models whose states are (world, belief) pairs.

``build_bullet`` unravels every belief update of a Kripke model into one
static structure: an ``a``-edge goes from ``s@G`` to ``t@G|a`` whenever
``s -a-> t``, and two states are epistemically related iff they share the
belief.  On that structure EPDL (star included) is checked by ordinary
bottom-up labelling.  ``build_circ`` is the planning variant that only
keeps ``a``-edges out of beliefs where ``a`` is executable at every world.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .model import (
    Belief, KripkeModel, Matrix, ModelError, UncertaintyMap, bits, diagonal, mat_mul, mat_or,
    star_closure, update_belief, zero,
)
from .syntax import And, Atom, Box, Choice, Formula, Know, Not, Program, Prop, Seq, Star, Test, Top


@dataclass(frozen=True, eq=False)
class ETSModel:
    base: KripkeModel
    states: tuple          # ((world, belief), ...)
    beliefs: tuple         # distinct beliefs; class id = position
    belief_class: tuple    # belief_class[x] = class id of state x
    classes: tuple         # classes[c] = bitset of ETS states with belief c
    action_relations: dict  # action -> Matrix over ETS states
    valuation: dict        # prop -> bitset over ETS states

    @property
    def size(self) -> int:
        return len(self.states)

    @property
    def all_states(self) -> int:
        return (1 << len(self.states)) - 1

    def state_id(self, world: int, belief: Belief) -> int:
        try:
            return self._ids[(world, belief)]
        except KeyError:
            raise ModelError(f"no ETS state for world {world} with belief {belief:b}") from None

    @property
    def _ids(self) -> dict:
        ids = self.__dict__.get("_ids_cache")
        if ids is None:
            ids = {st: i for i, st in enumerate(self.states)}
            object.__setattr__(self, "_ids_cache", ids)
        return ids

    def epistemic(self, x: int, y: int) -> bool:
        return self.belief_class[x] == self.belief_class[y]

    def name(self, x: int) -> str:
        w, b = self.states[x]
        return f"{self.base.states[w]}@{{{','.join(self.base.names(b))}}}"

    def relation(self, action: str) -> Matrix:
        rows = self.action_relations.get(action)
        return rows if rows is not None else zero(self.size)


def _reachable(m: KripkeModel, start: Belief, actions, guarded: bool) -> list[Belief]:
    order = [start]
    seen = {start}
    for g in order:
        for a in actions:
            if guarded and not m.executable_everywhere(g, a):
                continue
            nxt = update_belief(m, g, a)
            if nxt and nxt not in seen:
                seen.add(nxt)
                order.append(nxt)
    return order


def _assemble(m: KripkeModel, beliefs: list[Belief], actions, guarded: bool) -> ETSModel:
    states = [(w, g) for g in beliefs for w in bits(g)]
    ids = {st: i for i, st in enumerate(states)}
    cls_of = {g: c for c, g in enumerate(beliefs)}
    belief_class = tuple(cls_of[g] for _, g in states)
    classes = [0] * len(beliefs)
    for x, c in enumerate(belief_class):
        classes[c] |= 1 << x
    relations = {}
    for a in actions:
        rows = [0] * len(states)
        for x, (w, g) in enumerate(states):
            succ = m.successors(a, w)
            if not succ or (guarded and not m.executable_everywhere(g, a)):
                continue
            d = update_belief(m, g, a)
            if d not in cls_of:
                continue  # outside the constructed fragment
            for t in bits(succ):
                rows[x] |= 1 << ids[(t, d)]
        relations[a] = tuple(rows)
    valuation = {}
    for p, v in m.valuation.items():
        mask = 0
        for x, (w, _) in enumerate(states):
            if v >> w & 1:
                mask |= 1 << x
        valuation[p] = mask
    e = ETSModel(m, tuple(states), tuple(beliefs), belief_class, tuple(classes), relations, valuation)
    object.__setattr__(e, "_ids_cache", ids)
    return e


def build_bullet(m: KripkeModel, start: Belief, full: bool = False) -> ETSModel:
    """The bullet construction over beliefs reachable from ``start``.

    With ``full=True`` every nonempty belief is included (exponential).
    """
    if not start:
        raise ModelError("empty uncertainty set")
    if full:
        beliefs = [start] + [g for g in range(1, 1 << m.n) if g != start]
    else:
        beliefs = _reachable(m, start, m.actions, guarded=False)
    return _assemble(m, beliefs, m.actions, guarded=False)


def build_circ(m: KripkeModel, start: Belief, actions) -> ETSModel:
    """Planning variant: only actions in ``actions``, guarded by executability."""
    acts = sorted(set(actions))
    if not acts:
        raise ValueError("action set must be nonempty")
    if not start:
        raise ModelError("empty uncertainty set")
    beliefs = _reachable(m, start, acts, guarded=True)
    return _assemble(m, beliefs, acts, guarded=True)


class ETSLabeller:
    """Global labelling: each subformula maps to the bitset of states satisfying it."""

    def __init__(self, e: ETSModel):
        self.e = e
        self._labels: dict = {}
        self._rels: dict = {}

    def label(self, f: Formula) -> int:
        hit = self._labels.get(f)
        if hit is None:
            hit = self._label(f)
            self._labels[f] = hit
        return hit

    def _label(self, f: Formula) -> int:
        e = self.e
        if isinstance(f, Top):
            return e.all_states
        if isinstance(f, Prop):
            return e.valuation.get(f.name, 0)
        if isinstance(f, Not):
            return e.all_states & ~self.label(f.body)
        if isinstance(f, And):
            return self.label(f.left) & self.label(f.right)
        if isinstance(f, Know):
            body = self.label(f.body)
            out = 0
            for cls in e.classes:
                if cls & ~body == 0:
                    out |= cls
            return out
        if isinstance(f, Box):
            body = self.label(f.body)
            rows = self.relation(f.program)
            out = 0
            for x, row in enumerate(rows):
                if row & ~body == 0:
                    out |= 1 << x
            return out
        raise TypeError(f"not a formula: {f!r}")

    def relation(self, p: Program) -> Matrix:
        hit = self._rels.get(p)
        if hit is None:
            hit = self._relation(p)
            self._rels[p] = hit
        return hit

    def _relation(self, p: Program) -> Matrix:
        n = self.e.size
        if isinstance(p, Atom):
            return self.e.relation(p.name)
        if isinstance(p, Test):
            return diagonal(self.label(p.formula), n)
        if isinstance(p, Seq):
            return mat_mul(self.relation(p.first), self.relation(p.second))
        if isinstance(p, Choice):
            return mat_or(self.relation(p.left), self.relation(p.right))
        if isinstance(p, Star):
            return star_closure(self.relation(p.body))
        raise TypeError(f"not a program: {p!r}")


def ets_check(e: ETSModel, x: int, f: Formula, labeller: ETSLabeller | None = None) -> bool:
    labeller = labeller or ETSLabeller(e)
    return bool(labeller.label(f) >> x & 1)


def check_full(um: UncertaintyMap, s: int | str, f: Formula) -> bool:
    """``M, s |= f`` for full EPDL, via the bullet construction at ``s@U``."""
    point = um.point(s)
    e = build_bullet(um.model, um.uncertainty)
    return ets_check(e, e.state_id(point, um.uncertainty), f)


def ets_to_dict(e: ETSModel, start: Belief | None = None) -> dict:
    """Model-file rendering; states are named ``world@{belief}``."""
    names = [e.name(x) for x in range(e.size)]
    val = {}
    for p, mask in sorted(e.valuation.items()):
        for x in bits(mask):
            val.setdefault(names[x], []).append(p)
    rels = {}
    for a in sorted(e.action_relations):
        pairs = [[names[x], names[y]] for x, row in enumerate(e.relation(a)) for y in bits(row)]
        if pairs:
            rels[a] = pairs
    start_cls = e.beliefs.index(start) if start is not None else 0
    return {
        "states": names,
        "valuation": val,
        "relations": rels,
        "uncertainty": [names[x] for x in bits(e.classes[start_cls])],
    }


def dump_ets(e: ETSModel) -> str:
    return json.dumps(ets_to_dict(e), indent=2)

"""Uncertainty maps over a dense bit-matrix representation.

States are indexed by file order.  A set of states (a belief, or a row of
an adjacency matrix) is a Python ``int`` used as a bitset: bit ``i`` is
state ``i``.  A relation is a tuple of rows, ``rows[i]`` being the bitset
of ``i``'s successors, so the boolean vector-matrix product ``U x B`` is
the OR of the rows selected by ``U``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping, Sequence

Belief = int
Matrix = tuple  # tuple[int, ...], one bitset row per state


class ModelError(ValueError):
    pass


def bits(mask: int) -> Iterator[int]:
    """Indices of the set bits of ``mask``, ascending."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def popcount(mask: int) -> int:
    return bin(mask).count("1")


def mask_of(indices: Iterable[int]) -> int:
    m = 0
    for i in indices:
        m |= 1 << i
    return m


def identity(n: int) -> Matrix:
    return tuple(1 << i for i in range(n))


def zero(n: int) -> Matrix:
    return (0,) * n


def vec_mat(vec: int, mat: Matrix) -> int:
    out = 0
    for i in bits(vec):
        out |= mat[i]
    return out


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    return tuple(vec_mat(row, b) for row in a)


def mat_or(a: Matrix, b: Matrix) -> Matrix:
    return tuple(x | y for x, y in zip(a, b))


def diagonal(mask: int, n: int) -> Matrix:
    return tuple((1 << i) if mask >> i & 1 else 0 for i in range(n))


def star_closure(mat: Matrix) -> Matrix:
    """Reflexive-transitive closure by repeated squaring of ``I | R``."""
    cur = mat_or(identity(len(mat)), mat)
    while True:
        nxt = mat_mul(cur, cur)
        if nxt == cur:
            return cur
        cur = nxt


@dataclass(frozen=True, eq=False)
class KripkeModel:
    states: tuple[str, ...]
    relations: Mapping[str, Matrix]
    valuation: Mapping[str, int]
    _index: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        n = len(self.states)
        if n < 1:
            raise ModelError("a model needs at least one state")
        if len(set(self.states)) != n:
            dup = next(s for s in self.states if self.states.count(s) > 1)
            raise ModelError(f"duplicate state name {dup!r}")
        full = (1 << n) - 1
        for a, rows in self.relations.items():
            if len(rows) != n or any(r & ~full for r in rows):
                raise ModelError(f"relation {a!r} is not {n}x{n}")
        for p, v in self.valuation.items():
            if v & ~full:
                raise ModelError(f"valuation of {p!r} out of range")
        object.__setattr__(self, "_index", {s: i for i, s in enumerate(self.states)})

    @property
    def n(self) -> int:
        return len(self.states)

    @property
    def all_states(self) -> int:
        return (1 << self.n) - 1

    @property
    def actions(self) -> list[str]:
        return sorted(self.relations)

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise ModelError(f"unknown state {name!r}") from None

    def belief(self, names: Iterable[str]) -> Belief:
        return mask_of(self.index(s) for s in names)

    def names(self, mask: int) -> list[str]:
        return [self.states[i] for i in bits(mask)]

    def matrix(self, action: str) -> Matrix:
        rows = self.relations.get(action)
        return rows if rows is not None else zero(self.n)

    def successors(self, action: str, state: int) -> int:
        rows = self.relations.get(action)
        return rows[state] if rows is not None else 0

    def prop(self, name: str) -> int:
        return self.valuation.get(name, 0)

    def labels(self, state: int) -> list[str]:
        return sorted(p for p, v in self.valuation.items() if v >> state & 1)

    def executable_everywhere(self, belief: Belief, action: str) -> bool:
        """Every world of ``belief`` has an ``action``-successor."""
        rows = self.relations.get(action)
        if rows is None:
            return False
        return all(rows[i] for i in bits(belief))

    @classmethod
    def from_edges(cls, states: Sequence[str], edges: Mapping[str, Iterable[tuple[str, str]]],
                   valuation: Mapping[str, Iterable[str]] | None = None) -> "KripkeModel":
        """Build from labelled edge lists and a state -> propositions map."""
        index = {s: i for i, s in enumerate(states)}

        def idx(s):
            try:
                return index[s]
            except KeyError:
                raise ModelError(f"unknown state {s!r}") from None

        n = len(states)
        relations = {}
        for a, pairs in edges.items():
            rows = [0] * n
            for s, t in pairs:
                rows[idx(s)] |= 1 << idx(t)
            relations[a] = tuple(rows)
        val: dict[str, int] = {}
        for s, props in (valuation or {}).items():
            i = idx(s)
            for p in props:
                val[p] = val.get(p, 0) | (1 << i)
        return cls(tuple(states), relations, val)

    def edges(self, action: str) -> list[tuple[str, str]]:
        rows = self.matrix(action)
        return [(self.states[i], self.states[j]) for i in range(self.n) for j in bits(rows[i])]


@dataclass(frozen=True, eq=False)
class UncertaintyMap:
    model: KripkeModel
    uncertainty: Belief

    def __post_init__(self):
        if not self.uncertainty:
            raise ModelError("empty uncertainty set")
        if self.uncertainty & ~self.model.all_states:
            raise ModelError("uncertainty set out of range")

    def with_uncertainty(self, belief: Belief) -> "UncertaintyMap":
        return UncertaintyMap(self.model, belief)

    def point(self, name: str | int | None = None) -> int:
        """Resolve a designated state, which must lie in the uncertainty set."""
        if name is None:
            return next(bits(self.uncertainty))
        i = self.model.index(name) if isinstance(name, str) else name
        if not self.uncertainty >> i & 1:
            label = self.model.states[i] if 0 <= i < self.model.n else i
            raise ModelError(f"state {label!r} is not in the uncertainty set")
        return i

    def updated(self, action: str) -> "UncertaintyMap | None":
        u = update_belief(self.model, self.uncertainty, action)
        return UncertaintyMap(self.model, u) if u else None


@dataclass(frozen=True, eq=False)
class PointedUM:
    map: UncertaintyMap
    point: int

    def __post_init__(self):
        self.map.point(self.point)


def update_belief(m: KripkeModel, belief: Belief, action: str) -> Belief:
    """``U|^a``: every ``a``-successor of some state in ``U``; may be empty."""
    rows = m.relations.get(action)
    if rows is None:
        return 0
    return vec_mat(belief, rows)


def update_belief_seq(m: KripkeModel, belief: Belief, actions: Iterable[str]) -> Belief:
    for a in actions:
        belief = update_belief(m, belief, a)
    return belief


# -- file format ------------------------------------------------------------

def load_model(text: str) -> UncertaintyMap:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise ModelError(f"malformed model file: {e}") from None
    return model_from_dict(doc)


def model_from_dict(doc: Mapping) -> UncertaintyMap:
    if not isinstance(doc, Mapping):
        raise ModelError("model file must be an object")
    states = doc.get("states")
    if not isinstance(states, list) or not all(isinstance(s, str) for s in states):
        raise ModelError("'states' must be a list of names")
    if not states:
        raise ModelError("a model needs at least one state")
    seen = set()
    for s in states:
        if s in seen:
            raise ModelError(f"duplicate state name {s!r}")
        seen.add(s)
    relations = doc.get("relations", {})
    edges = {}
    for a, pairs in relations.items():
        try:
            edges[a] = [(s, t) for s, t in pairs]
        except (TypeError, ValueError):
            raise ModelError(f"relation {a!r} must be a list of [source, target] pairs") from None
    model = KripkeModel.from_edges(states, edges, doc.get("valuation", {}))
    unc = doc.get("uncertainty")
    if not isinstance(unc, list):
        raise ModelError("'uncertainty' must be a list of state names")
    if not unc:
        raise ModelError("empty uncertainty set")
    return UncertaintyMap(model, model.belief(unc))


def model_to_dict(um: UncertaintyMap) -> dict:
    m = um.model
    return {
        "states": list(m.states),
        "valuation": {s: m.labels(i) for i, s in enumerate(m.states) if m.labels(i)},
        "relations": {a: [list(e) for e in m.edges(a)] for a in m.actions if m.edges(a)},
        "uncertainty": m.names(um.uncertainty),
    }


def dump_model(um: UncertaintyMap) -> str:
    return json.dumps(model_to_dict(um), indent=2)


# -- fixtures ---------------------------------------------------------------

def _um(states, edges, valuation, uncertainty) -> UncertaintyMap:
    m = KripkeModel.from_edges(states, edges, valuation)
    return UncertaintyMap(m, m.belief(uncertainty))


def fixtures() -> dict[str, UncertaintyMap]:
    """The six worked models: spy hotel, context dependency, Examples 1-4."""
    s = [f"s{i}" for i in range(1, 9)]
    spy = _um(
        s,
        {"r": [("s1", "s2"), ("s2", "s3"), ("s3", "s4"), ("s4", "s5")],
         "u": [("s2", "s6"), ("s3", "s7"), ("s4", "s8")]},
        {"s4": ["Safe"], "s7": ["Safe"], "s8": ["Safe"]},
        ["s2", "s3"],
    )
    context = _um(
        ["s1", "s2", "s3", "s4"],
        {"a": [("s1", "s2"), ("s2", "s3"), ("s3", "s4")], "b": [("s1", "s3")]},
        {"s3": ["p"]},
        ["s1", "s2"],
    )
    example1 = _um(
        ["s1", "s2", "s3", "s4"],
        {"a": [("s1", "s2"), ("s1", "s3")], "b": [("s2", "s4")]},
        {"s4": ["p"]},
        ["s1"],
    )
    example2 = _um(
        [f"s{i}" for i in range(1, 7)],
        {"a": [("s1", "s3"), ("s4", "s6")], "b": [("s3", "s5"), ("s2", "s4")]},
        {"s5": ["p"], "s6": ["p"]},
        ["s1", "s2"],
    )
    example3 = _um(
        ["s1", "s2", "s4", "s5"],
        {"a": [("s1", "s2")], "b": [("s2", "s5"), ("s2", "s4")]},
        {"s5": ["p"]},
        ["s1"],
    )
    example4 = _um(
        [f"s{i}" for i in range(1, 6)],
        {"a": [("s1", "s3"), ("s2", "s4")], "b": [("s1", "s4"), ("s2", "s5")]},
        {"s3": ["p"], "s4": ["p", "q"], "s5": ["p", "q"]},
        ["s1", "s2"],
    )
    return {
        "spy": spy,
        "context": context,
        "example1": example1,
        "example2": example2,
        "example3": example3,
        "example4": example4,
    }

"""Model checking star-free EPDL with an explicit action context.

``M, s ||-_sigma phi`` keeps the Kripke model fixed and carries the action
sequence ``sigma`` performed so far; knowledge is evaluated over
``U|^sigma``.  A diamond ``<pi>phi`` is decided by enumerating candidate
computation sequences over the alphabet of ``pi`` in length-then-lex order,
keeping the ones accepted by an automaton for ``pi``, and composing their
step matrices.  Nothing but the current candidate and one matrix per
recursion level is held at a time.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

from .model import (
    Belief, KripkeModel, Matrix, ModelError, UncertaintyMap, bits, diagonal, identity,
    mat_mul, vec_mat,
)
from .syntax import (
    And, Atom, Box, Choice, Formula, Know, Not, Program, Prop, Seq, SequenceItem, Star, Test,
    Top, formula_size, is_star_free, language_alphabet, program_size,
)


class StarNotSupported(ValueError):
    pass


# -- program automata -------------------------------------------------------

@dataclass(frozen=True)
class ProgramAutomaton:
    """Thompson-style automaton over letters (atoms and whole tests)."""

    n_states: int
    initial: int
    accepting: int
    moves: tuple  # moves[q] = ((letter, q'), ...)
    eps: tuple    # eps[q] = (q', ...)

    def closure(self, qs: frozenset) -> frozenset:
        stack = list(qs)
        seen = set(qs)
        while stack:
            q = stack.pop()
            for r in self.eps[q]:
                if r not in seen:
                    seen.add(r)
                    stack.append(r)
        return frozenset(seen)

    def step(self, qs: frozenset, letter: SequenceItem) -> frozenset:
        return self.closure(frozenset(r for q in qs for x, r in self.moves[q] if x == letter))

    def accepts(self, word: Sequence[SequenceItem]) -> bool:
        cur = self.closure(frozenset([self.initial]))
        for x in word:
            cur = self.step(cur, x)
            if not cur:
                return False
        return self.accepting in cur


@lru_cache(maxsize=4096)
def build_automaton(p: Program) -> ProgramAutomaton:
    moves: list[list] = []
    eps: list[list] = []

    def new() -> int:
        moves.append([])
        eps.append([])
        return len(moves) - 1

    def build(q: Program) -> tuple[int, int]:
        if isinstance(q, (Atom, Test)):
            s, f = new(), new()
            moves[s].append((q, f))
            return s, f
        if isinstance(q, Seq):
            s1, f1 = build(q.first)
            s2, f2 = build(q.second)
            eps[f1].append(s2)
            return s1, f2
        if isinstance(q, Choice):
            s, f = new(), new()
            for part in (q.left, q.right):
                ps, pf = build(part)
                eps[s].append(ps)
                eps[pf].append(f)
            return s, f
        if isinstance(q, Star):
            s, f = new(), new()
            bs, bf = build(q.body)
            eps[s] += [bs, f]
            eps[bf] += [bs, f]
            return s, f
        raise TypeError(f"not a program: {q!r}")

    start, final = build(p)
    return ProgramAutomaton(
        len(moves), start, final,
        tuple(tuple(m) for m in moves), tuple(tuple(e) for e in eps),
    )


def memb_check(omega: Sequence[SequenceItem], p: Program) -> bool:
    """``omega`` is a computation sequence of ``p``."""
    return build_automaton(p).accepts(tuple(omega))


def max_word_length(p: Program) -> int:
    """Length of the longest computation sequence of a star-free program."""
    if isinstance(p, (Atom, Test)):
        return 1
    if isinstance(p, Seq):
        return max_word_length(p.first) + max_word_length(p.second)
    if isinstance(p, Choice):
        return max(max_word_length(p.left), max_word_length(p.right))
    raise StarNotSupported("star-free fragment only")


def next_sequence(omega: Sequence[SequenceItem], sig: Sequence[SequenceItem],
                  max_len: int | None = None) -> tuple | None:
    """Successor of ``omega`` in length-then-lexicographic order over ``sig``.

    ``omega`` is read as a base-``len(sig)`` numeral; overflow grows the
    length by one.  Returns ``None`` once the length would exceed ``max_len``.
    """
    pos = {x: i for i, x in enumerate(sig)}
    digits = [pos[x] for x in omega]
    k = len(digits) - 1
    while k >= 0 and digits[k] == len(sig) - 1:
        digits[k] = 0
        k -= 1
    if k < 0:
        digits = [0] * (len(digits) + 1)
    else:
        digits[k] += 1
    if max_len is not None and len(digits) > max_len:
        return None
    return tuple(sig[d] for d in digits)


def _skip_dead(omega: tuple, p: Program, sig: Sequence[SequenceItem]) -> tuple:
    """Last sequence of ``omega``'s length sharing its shortest dead prefix.

    If no word of ``L(p)`` starts with ``omega[:k+1]``, every sequence with
    that prefix is skipped in one jump; the candidates that survive and their
    order are unchanged.
    """
    aut = build_automaton(p)
    cur = aut.closure(frozenset([aut.initial]))
    for k, x in enumerate(omega):
        cur = aut.step(cur, x)
        if not cur:
            return omega[:k + 1] + (sig[-1],) * (len(omega) - k - 1)
    return omega


# -- the checker ------------------------------------------------------------

def cnu(m: KripkeModel, belief: Belief, sigma: Sequence[str]) -> Belief:
    """``U|^sigma`` as repeated vector-matrix products."""
    a_vec = belief
    for a in sigma:
        a_vec = vec_mat(a_vec, m.matrix(a))
    return a_vec


class ContextualChecker:
    """Evaluates ``M, s ||-_sigma phi`` for one uncertainty map.

    ``bound`` chooses the enumeration horizon for ``<pi>``: ``"size"`` uses
    ``|pi|`` literally, ``"word"`` the longest computation sequence of
    ``pi``.  Both cover every member of the program's language since the
    longest word never exceeds the size.
    """

    def __init__(self, um: UncertaintyMap, bound: str = "word"):
        if bound not in ("word", "size"):
            raise ValueError(f"unknown bound {bound!r}")
        self.um = um
        self.model = um.model
        self.bound = bound
        self._memo: dict = {}
        self._pw: dict = {}
        self._cnu: dict = {}
        self.max_depth = 0
        self._depth_limit = float("inf")

    def check(self, s: int, sigma: tuple[str, ...], f: Formula) -> bool:
        if not is_star_free(f):
            raise StarNotSupported("star-free fragment only")
        self._depth_limit = formula_size(f)
        return self.mc(s, tuple(sigma), f, 1)

    def uncertainty(self, sigma: tuple[str, ...]) -> Belief:
        hit = self._cnu.get(sigma)
        if hit is None:
            hit = cnu(self.model, self.um.uncertainty, sigma)
            self._cnu[sigma] = hit
        return hit

    def mc(self, s: int, sigma: tuple, f: Formula, depth: int) -> bool:
        if depth > self.max_depth:
            self.max_depth = depth
        assert depth <= self._depth_limit, "recursion deeper than the formula"
        key = (s, sigma, f)
        hit = self._memo.get(key)
        if hit is not None:
            return hit
        if isinstance(f, Top):
            r = True
        elif isinstance(f, Prop):
            r = bool(self.model.prop(f.name) >> s & 1)
        elif isinstance(f, Not):
            r = not self.mc(s, sigma, f.body, depth + 1)
        elif isinstance(f, And):
            r = self.mc(s, sigma, f.left, depth + 1) and self.mc(s, sigma, f.right, depth + 1)
        elif isinstance(f, Know):
            r = all(self.mc(v, sigma, f.body, depth + 1) for v in bits(self.uncertainty(sigma)))
        elif isinstance(f, Box):
            # [pi]phi == not <pi> not phi
            r = not self._some_run(s, sigma, f.program, f.body, False, depth)
        else:
            raise TypeError(f"not a formula: {f!r}")
        self._memo[key] = r
        return r

    def _some_run(self, s, sigma, p, body, want, depth) -> bool:
        """Is there ``omega`` in L(p) and ``t`` with ``s ->omega_sigma t`` and
        ``mc(t, sigma r(omega), body) == want``?"""
        sig = language_alphabet(p)
        limit = max_word_length(p) if self.bound == "word" else program_size(p)
        omega = (sig[0],)
        while omega is not None:
            if memb_check(omega, p):
                row = self.pw(omega, sigma, depth + 1)[s]
                if row:
                    ctx = sigma + tuple(x.name for x in omega if isinstance(x, Atom))
                    for t in bits(row):
                        if self.mc(t, ctx, body, depth + 1) == want:
                            return True
            omega = next_sequence(_skip_dead(omega, p, sig), sig, limit)
        return False

    def pw(self, omega: tuple, sigma: tuple, depth: int = 1) -> Matrix:
        """Matrix of ``->omega_sigma``: tests filter, actions step and extend the context."""
        key = (omega, sigma)
        hit = self._pw.get(key)
        if hit is not None:
            return hit
        n = self.model.n
        mat = identity(n)
        ctx = sigma
        for x in omega:
            if isinstance(x, Test):
                keep = 0
                for i in range(n):
                    if self.mc(i, ctx, x.formula, depth):
                        keep |= 1 << i
                mat = mat_mul(mat, diagonal(keep, n))
            else:
                mat = mat_mul(mat, self.model.matrix(x.name))
                ctx = ctx + (x.name,)
        self._pw[key] = mat
        return mat


def mc(um: UncertaintyMap, s: int | str, sigma: Sequence[str], f: Formula, bound: str = "word") -> bool:
    """``M, s ||-_sigma f``.  With an empty context ``s`` must be in ``U``."""
    sigma = tuple(sigma)
    if isinstance(s, str):
        s = um.model.index(s)
    if not sigma:
        s = um.point(s)
    elif not 0 <= s < um.model.n:
        raise ModelError(f"state {s} out of range")
    return ContextualChecker(um, bound).check(s, sigma, f)


def pw(um: UncertaintyMap, omega: Sequence[SequenceItem], sigma: Sequence[str]) -> Matrix:
    return ContextualChecker(um).pw(tuple(omega), tuple(sigma))

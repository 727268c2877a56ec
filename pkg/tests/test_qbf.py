import random

import pytest
from hypothesis import given, strategies as st

from epdl.qbf import (
    QBF, all_small_qbfs, build_formula, build_model, eval_qbf, parse_qdimacs, random_qbf,
    reduction_check,
)
from epdl.syntax import Test as Tst
from epdl.syntax import (
    Atom, Box, Choice, Prop, Seq, conj, diamond, disj, formula_size, is_star_free, khat, lor,
)

# |theta_alpha| <= C * (n + number of literals); the template costs 13 per
# variable and at most 8 per literal, so 13 covers both.
SIZE_CONSTANT = 13


def pick(i):
    return Seq(Choice(Atom(f"a{i}"), Atom(f"a{i}_bar")), Tst(lor(Prop(f"p{i}"), Prop(f"q{i}"))))


@st.composite
def qbfs(draw, max_n=3):
    n = draw(st.integers(1, max_n))
    lit = st.integers(1, n).flatmap(lambda v: st.sampled_from([v, -v]))
    clauses = draw(st.lists(st.lists(lit, min_size=1, max_size=3), min_size=1, max_size=4))
    return QBF(n, clauses)


class TestModel:
    def test_n1(self):
        um = build_model(1)
        m = um.model
        assert m.n == 3
        loops = {(s, s) for s in m.states}
        assert set(m.edges("a1")) == loops | {("x0", "x1")}
        assert set(m.edges("a1_bar")) == loops | {("x0", "x1_bar")}
        assert m.names(um.uncertainty) == ["x0"]

    def test_state_count(self):
        assert build_model(3).model.n == 7

    @pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
    def test_edge_counts(self, n):
        m = build_model(n).model
        for i in range(1, n + 1):
            extra = 1 if i == 1 else 2
            for act in (f"a{i}", f"a{i}_bar"):
                assert len(m.edges(act)) == (2 * n + 1) + extra

    def test_valuation(self):
        m = build_model(2).model
        assert m.labels(m.index("x0")) == []
        assert m.labels(m.index("x2")) == ["p2"]
        assert m.labels(m.index("x2_bar")) == ["q2"]

    def test_zero_rejected(self):
        with pytest.raises(ValueError):
            build_model(0)


class TestFormula:
    def test_single_existential(self):
        assert build_formula(QBF(1, [(1,)])) == diamond(pick(1), khat(Prop("p1")))

    def test_two_variables(self):
        got = build_formula(QBF(2, [(1, 2), (1, -2)]))
        psi = conj([disj([khat(Prop("p1")), khat(Prop("p2"))]),
                    disj([khat(Prop("p1")), khat(Prop("q2"))])])
        assert got == diamond(pick(1), Box(pick(2), psi))

    @given(qbfs(max_n=5))
    def test_star_free_and_linear(self, alpha):
        theta = build_formula(alpha)
        assert is_star_free(theta)
        literals = sum(len(c) for c in alpha.clauses)
        assert formula_size(theta) <= SIZE_CONSTANT * (alpha.n + literals)


class TestOracle:
    def test_examples(self):
        assert eval_qbf(QBF(1, [(1,)]))
        assert not eval_qbf(QBF(2, [(1,), (2,)]))
        assert eval_qbf(QBF(2, [(1, 2), (1, -2)]))

    def test_universal_needs_both_branches(self):
        # E x1 A x2 . (x2 | ~x2) is true, (x1 & x2 equal) is false
        assert eval_qbf(QBF(2, [(2, -2)]))
        assert not eval_qbf(QBF(2, [(1, 2), (-1, -2)]))

    @pytest.mark.parametrize("alpha", [QBF(1, [(1,)]), QBF(2, [(1,), (2,)]), QBF(2, [(1, 2), (1, -2)])])
    def test_reduction_examples(self, alpha):
        assert reduction_check(alpha) == eval_qbf(alpha)


def test_exhaustive_n1():
    for alpha in all_small_qbfs(1, 2, 2):
        assert reduction_check(alpha) == eval_qbf(alpha), alpha


def test_small_sweep_count():
    # 4 literals -> 4 + 16 clauses, then 20 + 400 clause lists
    assert sum(1 for _ in all_small_qbfs(2, 2, 2)) == 420


@given(qbfs(max_n=3))
def test_reduction_agrees(alpha):
    assert reduction_check(alpha) == eval_qbf(alpha)


def test_random_qbf_shape():
    alpha = random_qbf(random.Random(3), 4, 5)
    assert alpha.n == 4 and len(alpha.clauses) == 5
    assert all(1 <= abs(l) <= 4 for c in alpha.clauses for l in c)


class TestValidation:
    @pytest.mark.parametrize("n,clauses", [(0, [(1,)]), (2, [()]), (2, [(3,)]), (2, [(0,)])])
    def test_rejects(self, n, clauses):
        with pytest.raises(ValueError):
            QBF(n, clauses)

    def test_str(self):
        assert str(QBF(2, [(1, -2)])) == "Ex1 Ax2. (x1 | ~x2)"


class TestQdimacs:
    def test_parse(self):
        text = "c example\np cnf 2 2\n1 2 0\n1 -2 0\n"
        assert parse_qdimacs(text) == QBF(2, [(1, 2), (1, -2)])

    def test_clause_across_lines(self):
        assert parse_qdimacs("p cnf 3 1\n1 -2\n3 0").clauses == ((1, -2, 3),)

    @pytest.mark.parametrize("text", ["1 2 0", "p cnf 2 1\ne 1 0\n1 0", "p dnf 2 1\n1 0",
                                      "p cnf 2 1\n1 x 0", "p cnf 1 1\n2 0"])
    def test_rejects(self, text):
        with pytest.raises(ValueError):
            parse_qdimacs(text)

import pytest
from hypothesis import given, strategies as st

from epdl.mc_contextual import (
    ContextualChecker, StarNotSupported, _skip_dead, cnu, max_word_length, mc, memb_check,
    next_sequence, pw,
)
from epdl.model import identity, mat_mul, update_belief_seq
from epdl.qbf import QBF, build_formula, build_model, eval_qbf
from epdl.semantics_direct import sat
from epdl.syntax import Test as Tst
from epdl.syntax import (
    TOP, Atom, Choice, Know, Prop, Seq, Star, bot, build_theta, formula_size, language_alphabet,
    parse_formula, program_size,
)

from strategies import formulas, pointed, programs, uncertainty_maps

a, b = Atom("a"), Atom("b")
p = Prop("p")


def language(pi):
    """L(pi) for star-free pi, built straight from the inductive clauses."""
    if isinstance(pi, (Atom, Tst)):
        return {(pi,)}
    if isinstance(pi, Seq):
        return {x + y for x in language(pi.first) for y in language(pi.second)}
    if isinstance(pi, Choice):
        return language(pi.left) | language(pi.right)
    raise ValueError("star")


class TestNextSequence:
    def test_increment(self):
        assert next_sequence((a,), [a, b]) == (b,)

    def test_overflow_grows(self):
        assert next_sequence((b,), [a, b]) == (a, a)
        assert next_sequence((b, b), [a, b]) == (a, a, a)

    def test_middle_digit(self):
        assert next_sequence((a, b), [a, b]) == (b, a)

    def test_bound(self):
        assert next_sequence((b, b), [a, b], max_len=2) is None

    def test_enumeration_is_length_lex(self):
        sig = [a, b, Tst(p)]
        seen = [(a,)]
        while (nxt := next_sequence(seen[-1], sig, 3)) is not None:
            seen.append(nxt)
        assert len(seen) == 3 + 9 + 27
        key = [(len(w), [sig.index(x) for x in w]) for w in seen]
        assert key == sorted(key)


class TestMembership:
    def test_examples(self):
        kp = Tst(Know(p))
        assert memb_check((kp, a), Seq(kp, a))
        assert not memb_check((a, b), Choice(a, b))
        assert memb_check((), Star(a))

    def test_tests_compare_structurally(self):
        assert not memb_check((Tst(Prop("q")),), Tst(p))

    @given(programs())
    def test_agrees_with_language_oracle(self, pi):
        lang = language(pi)
        sig = language_alphabet(pi)
        limit = max(program_size(pi), 1)
        omega = (sig[0],)
        visited = set()
        while omega is not None:
            assert memb_check(omega, pi) == (omega in lang)
            visited.add(omega)
            omega = next_sequence(omega, sig, min(limit, 6))
        # every word of L(pi) lies within the enumeration horizon
        assert all(len(w) <= program_size(pi) for w in lang)
        # and starting at length one loses nothing: star-free languages omit the empty word
        assert () not in lang
        assert all(w in visited for w in lang if len(w) <= 6)

    @given(programs())
    def test_dead_prefix_skipping_keeps_members_in_order(self, pi):
        sig = language_alphabet(pi)
        limit = max_word_length(pi)

        def members(skip):
            out, omega = [], (sig[0],)
            while omega is not None:
                if memb_check(omega, pi):
                    out.append(omega)
                omega = next_sequence(_skip_dead(omega, pi, sig) if skip else omega, sig, limit)
            return out

        plain = members(False)
        assert members(True) == plain
        assert set(plain) == language(pi)

    @given(programs())
    def test_word_bound_is_longest_word(self, pi):
        assert max_word_length(pi) == max(len(w) for w in language(pi))
        assert max_word_length(pi) <= program_size(pi)


class TestPw:
    def test_empty_is_identity(self, fx):
        assert pw(fx["spy"], (), ()) == identity(8)

    def test_spy_r_then_u(self, fx):
        spy = fx["spy"]
        m = spy.model
        mat = pw(spy, (Atom("r"), Atom("u")), ())
        assert mat[m.index("s2")] >> m.index("s7") & 1
        assert mat[m.index("s3")] >> m.index("s8") & 1

    def test_failed_test_annihilates(self, fx):
        spy = fx["spy"]
        assert all(row == 0 for row in pw(spy, (Tst(bot()), Atom("r")), ()))

    @given(uncertainty_maps(max_states=4), st.data())
    def test_sequence_split(self, um, data):
        letters = st.one_of(st.sampled_from([a, b]), formulas(max_leaves=3).map(Tst))
        w1 = tuple(data.draw(st.lists(letters, max_size=3)))
        w2 = tuple(data.draw(st.lists(letters, max_size=3)))
        sigma = tuple(data.draw(st.lists(st.sampled_from(["a", "b"]), max_size=2)))
        moved = sigma + tuple(x.name for x in w1 if isinstance(x, Atom))
        assert pw(um, w1 + w2, sigma) == mat_mul(pw(um, w1, sigma), pw(um, w2, moved))

    @given(uncertainty_maps(max_states=5), st.lists(st.sampled_from(["a", "b"]), max_size=5))
    def test_cnu_is_update_fold(self, um, sigma):
        assert cnu(um.model, um.uncertainty, sigma) == update_belief_seq(um.model, um.uncertainty, sigma)


class TestWorkedExamples:
    def test_spy(self, fx):
        spy = fx["spy"]
        assert mc(spy, "s3", (), parse_formula("[r](Safe & ~K Safe)"))
        assert mc(spy, "s3", (), parse_formula("K[r][u](Safe & K Safe)"))

    def test_context(self, fx):
        assert mc(fx["context"], "s1", (), parse_formula("<b>K p & <a><a>~K p"))

    def test_example1(self, fx):
        assert mc(fx["example1"], "s1", (), parse_formula("[[a;b]]p"))
        assert not mc(fx["example1"], "s1", (), parse_formula("[[a]][[b]]p"))

    def test_nonempty_context(self, fx):
        spy = fx["spy"]
        s4 = spy.model.index("s4")
        # after r the agent considers s3 and s4 possible, so Safe is not known
        assert not mc(spy, s4, ("r",), parse_formula("K Safe"))
        assert mc(spy, s4, ("r",), parse_formula("Safe"))

    def test_small_qbfs(self):
        for alpha in (QBF(1, [(1,)]), QBF(2, [(1,), (2,)]), QBF(2, [(1, 2), (1, -2)])):
            assert mc(build_model(alpha.n), "x0", (), build_formula(alpha)) == eval_qbf(alpha)


class TestRejection:
    def test_star(self, fx):
        with pytest.raises(StarNotSupported, match="star-free fragment only"):
            mc(fx["example2"], "s1", (), build_theta(["a", "b"], p))

    def test_star_inside_test(self, fx):
        with pytest.raises(StarNotSupported):
            mc(fx["spy"], "s2", (), parse_formula("[?<r*>Safe]Safe"))

    def test_point_outside_uncertainty(self, fx):
        with pytest.raises(ValueError):
            mc(fx["spy"], "s1", (), TOP)


@given(pointed(max_states=5), formulas(max_leaves=10))
def test_agrees_with_direct_semantics(ps, f):
    um, s = ps
    assert mc(um, s, (), f) == sat(um, s, f)


@given(pointed(max_states=4), formulas(max_leaves=8))
def test_size_bound_agrees_with_word_bound(ps, f):
    um, s = ps
    assert mc(um, s, (), f, bound="size") == mc(um, s, (), f, bound="word")


@given(pointed(max_states=4), formulas(max_leaves=10))
def test_recursion_depth_bounded_by_size(ps, f):
    um, s = ps
    checker = ContextualChecker(um)
    checker.check(s, (), f)
    assert checker.max_depth <= formula_size(f)

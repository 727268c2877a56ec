import random

import pytest
from hypothesis import given, settings, strategies as st

from epdl.model import bits
from epdl.planner import (
    PlanningProblem, brute_force_plan, count_guarded_paths, find_plan, guard_reachable_beliefs,
    knows_static, plan_exists, random_problem, savitch_reach, verify_plan,
)
from epdl.semantics_direct import sat
from epdl.syntax import TOP, Prop, parse_formula

safe, p = Prop("Safe"), Prop("p")


def problem(fx, name, goal, actions):
    g = parse_formula(goal) if isinstance(goal, str) else goal
    return PlanningProblem(fx[name], g, frozenset(actions))


class TestVerify:
    def test_spy(self, fx):
        spy = problem(fx, "spy", safe, "ru")
        assert verify_plan(spy, ["r", "u"])
        assert not verify_plan(spy, ["r"])
        assert not verify_plan(spy, ["u"])

    def test_example4(self, fx):
        kp = problem(fx, "example4", "K p", "ab")
        assert verify_plan(kp, ["a"]) and verify_plan(kp, ["b"])
        only_p = problem(fx, "example4", "K p & ~K q", "ab")
        assert verify_plan(only_p, ["a"])
        assert not verify_plan(only_p, ["b"])

    def test_example1_is_stepwise(self, fx):
        ex = problem(fx, "example1", p, "ab")
        assert not verify_plan(ex, ["a", "b"])
        assert sat(fx["example1"], "s1", parse_formula("[[a;b]]p"))

    def test_step_outside_action_set(self, fx):
        with pytest.raises(ValueError):
            verify_plan(problem(fx, "spy", safe, "r"), ["u"])

    def test_empty_actions(self, fx):
        with pytest.raises(ValueError):
            PlanningProblem(fx["spy"], safe, frozenset())

    def test_goal_with_program(self, fx):
        spy = problem(fx, "spy", "<u>Safe", "ru")
        assert verify_plan(spy, ["r"]) == sat(fx["spy"], "s2", parse_formula("K[[r]]<u>Safe"))


class TestExistence:
    def test_examples(self, fx):
        assert plan_exists(problem(fx, "spy", safe, "ru"))
        assert not plan_exists(problem(fx, "example2", p, "ab"))
        assert not plan_exists(problem(fx, "example3", p, "ab"))
        assert plan_exists(problem(fx, "example4", "K p & ~K q", "ab"))

    def test_trivial_goal(self, fx):
        pr = problem(fx, "example2", TOP, "ab")
        assert plan_exists(pr)
        assert find_plan(pr) == ()
        assert brute_force_plan(pr, 3) == ()


class TestFindPlan:
    def test_spy(self, fx):
        assert find_plan(problem(fx, "spy", safe, "ru")) == ("r", "u")

    def test_example4(self, fx):
        assert find_plan(problem(fx, "example4", "K p", "ab")) == ("a",)
        assert find_plan(problem(fx, "example4", "K p & ~K q", "ab")) == ("a",)

    def test_no_plan(self, fx):
        assert find_plan(problem(fx, "example2", p, "ab")) is None
        assert find_plan(problem(fx, "example3", p, "ab")) is None

    def test_program_goal_uses_deepening(self, fx):
        pr = problem(fx, "spy", "[u]Safe", "ru")
        plan = find_plan(pr)
        assert plan is not None and verify_plan(pr, plan)

    def test_brute_force_examples(self, fx):
        assert brute_force_plan(problem(fx, "spy", safe, "ru"), 2) == ("r", "u")
        assert brute_force_plan(problem(fx, "example2", p, "ab"), 6) is None


class TestSavitch:
    @pytest.mark.parametrize("name,goal,acts", [
        ("spy", "Safe", "ru"), ("example2", "p", "ab"), ("example3", "p", "ab"),
        ("example4", "K p", "ab"), ("example4", "K p & ~K q", "ab"), ("context", "p", "ab"),
    ])
    def test_agrees_on_fixtures(self, fx, name, goal, acts):
        pr = problem(fx, name, goal, acts)
        um = pr.map
        assert savitch_reach(um.model, um.uncertainty, pr.actions, pr.goal) == plan_exists(pr)

    @pytest.mark.parametrize("name", ["example1", "example3", "context"])
    def test_small_space_mode(self, fx, name):
        # without the cache the midpoint recursion is exponential in time,
        # so only the four-state fixtures are practical
        pr = problem(fx, name, p, "ab")
        um = pr.map
        assert savitch_reach(um.model, um.uncertainty, pr.actions, pr.goal, memoize=False) == plan_exists(pr)

    def test_small_space_mode_positive(self):
        from epdl.model import KripkeModel, UncertaintyMap
        m = KripkeModel.from_edges(["x", "y", "z"], {"a": [("x", "y"), ("y", "z")], "b": [("z", "z")]},
                                   {"z": ["p"]})
        um = UncertaintyMap(m, m.belief(["x"]))
        assert savitch_reach(m, um.uncertainty, "ab", p, memoize=False)
        assert find_plan(PlanningProblem(um, p, frozenset("ab"))) == ("a", "a")

    def test_goal_already_known(self, fx):
        um = fx["example4"]
        assert savitch_reach(um.model, um.uncertainty, "ab", TOP)

    def test_program_goal_rejected(self, fx):
        um = fx["spy"]
        with pytest.raises(ValueError):
            savitch_reach(um.model, um.uncertainty, "ru", parse_formula("[r]Safe"))


def test_knows_static(fx):
    m = fx["spy"].model
    assert knows_static(m, m.belief(["s7", "s8"]), parse_formula("Safe & K Safe"))
    assert not knows_static(m, m.belief(["s3", "s4"]), safe)


def test_guarded_path_count(fx):
    um = fx["spy"]
    # from {s2,s3}: "", r, u, r r, r u  (r r r fails at s5)
    assert count_guarded_paths(um.model, um.uncertainty, "ru", 5) == 5


@settings(max_examples=40)
@given(st.integers(0, 10**6))
def test_existence_matches_search_and_extraction(seed):
    pr = random_problem(random.Random(seed), max_states=4)
    um = pr.map
    cap = len(guard_reachable_beliefs(um.model, um.uncertainty, pr.actions))
    exists = plan_exists(pr)
    brute = brute_force_plan(pr, cap)
    found = find_plan(pr)
    assert exists == (brute is not None) == (found is not None)
    if found is not None:
        assert verify_plan(pr, found)
        assert len(found) <= len(brute)
    assert savitch_reach(um.model, um.uncertainty, pr.actions, pr.goal) == exists


@settings(max_examples=30)
@given(st.integers(0, 10**6))
def test_verdict_invariant_across_uncertainty(seed):
    rng = random.Random(seed)
    pr = random_problem(rng, max_states=4)
    um = pr.map
    plan = [rng.choice(sorted(pr.actions)) for _ in range(rng.randint(0, 3))]
    verdicts = {verify_plan(pr, plan, u) for u in bits(um.uncertainty)}
    assert len(verdicts) == 1
    assert len({plan_exists(pr, u) for u in bits(um.uncertainty)}) == 1

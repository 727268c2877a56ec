"""Random conformant-planning problems: existence, extraction and the oracles.

For each problem, compares the plan-existence formula, brute-force search,
breadth-first extraction and the midpoint reachability check, and reports
the plan-length histogram.

    python3 scripts/plan_sweep.py --problems 500 --max-states 5
"""

import argparse
import random
from collections import Counter

from epdl.planner import (
    brute_force_plan, find_plan, guard_reachable_beliefs, plan_exists, random_problem,
    savitch_reach, verify_plan,
)
from epdl.syntax import to_text


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--problems", type=int, default=300)
    ap.add_argument("--max-states", type=int, default=5)
    ap.add_argument("--max-actions", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--budget", type=int, default=20000,
                    help="redraw problems whose brute-force tree exceeds this many prefixes")
    args = ap.parse_args()

    rng = random.Random(args.seed)
    lengths = Counter()
    failures = []
    for i in range(args.problems):
        pr = random_problem(rng, args.max_states, args.max_actions, args.budget)
        um = pr.map
        cap = len(guard_reachable_beliefs(um.model, um.uncertainty, pr.actions))
        exists = plan_exists(pr)
        brute = brute_force_plan(pr, cap)
        plan = find_plan(pr)
        reach = savitch_reach(um.model, um.uncertainty, pr.actions, pr.goal)
        ok = exists == (brute is not None) == (plan is not None) == reach
        if plan is not None:
            ok = ok and verify_plan(pr, plan) and len(plan) <= len(brute)
            lengths[len(plan)] += 1
        else:
            lengths["none"] += 1
        if not ok:
            failures.append((i, to_text(pr.goal), sorted(pr.actions)))
    print(f"{args.problems} problems, {len(failures)} inconsistencies")
    for k in sorted(lengths, key=lambda x: (x == "none", x if x != "none" else 0)):
        print(f"  plan length {k}: {lengths[k]}")
    for row in failures[:10]:
        print("  ", row)
    raise SystemExit(1 if failures else 0)


if __name__ == "__main__":
    main()

"""Cross-check the QBF reduction against game-tree evaluation.

Runs the exhaustive small sweep and then random instances of growing size,
printing agreement counts and the time model checking takes per size.

    python3 scripts/qbf_sweep.py --max-n 5 --per-size 50
"""

import argparse
import random
import time

from epdl.qbf import all_small_qbfs, build_formula, eval_qbf, random_qbf, reduction_check
from epdl.syntax import formula_size


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--max-n", type=int, default=4)
    ap.add_argument("--per-size", type=int, default=50)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    bad = 0
    total = 0
    for alpha in all_small_qbfs(2, 2, 2):
        bad += reduction_check(alpha) != eval_qbf(alpha)
        total += 1
    print(f"exhaustive n=2: {total - bad}/{total} agree")

    rng = random.Random(args.seed)
    print(f"{'n':>3} {'agree':>8} {'true':>5} {'avg |theta|':>12} {'mc seconds':>11}")
    for n in range(1, args.max_n + 1):
        agree = trues = size = 0
        spent = 0.0
        for _ in range(args.per_size):
            alpha = random_qbf(rng, n, rng.randint(1, 2 * n))
            truth = eval_qbf(alpha)
            t = time.perf_counter()
            got = reduction_check(alpha)
            spent += time.perf_counter() - t
            agree += got == truth
            trues += truth
            size += formula_size(build_formula(alpha))
        bad += args.per_size - agree
        print(f"{n:>3} {agree:>4}/{args.per_size:<3} {trues:>5} {size / args.per_size:>12.1f} {spent:>11.2f}")
    raise SystemExit(1 if bad else 0)


if __name__ == "__main__":
    main()

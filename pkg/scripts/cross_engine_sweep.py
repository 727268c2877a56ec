"""Compare the three engines on random models and formulas.

    python3 scripts/cross_engine_sweep.py --cases 2000 --max-states 6 --seed 1
"""

import argparse
import random
import time
from dataclasses import dataclass

from epdl.axioms import random_formula, random_model
from epdl.ets import check_full
from epdl.mc_contextual import mc
from epdl.semantics_direct import sat
from epdl.syntax import is_star_free, to_text


@dataclass
class SweepConfig:
    cases: int = 1000
    max_states: int = 6
    max_depth: int = 4
    star: bool = False
    seed: int = 0


def sweep(cfg: SweepConfig):
    rng = random.Random(cfg.seed)
    disagreements = []
    timings = {"direct": 0.0, "contextual": 0.0, "ets": 0.0}
    for i in range(cfg.cases):
        um = random_model(rng.randint(1, cfg.max_states), 2, 2, rng.choice([0.15, 0.3, 0.5]), rng)
        f = random_formula(rng, rng.randint(1, cfg.max_depth), star=cfg.star,
                           program_depth=2 if cfg.star else 1)
        s = rng.choice(um.model.names(um.uncertainty))
        verdicts = {}
        for name, fn in (("direct", sat), ("ets", check_full)):
            t = time.perf_counter()
            verdicts[name] = fn(um, s, f)
            timings[name] += time.perf_counter() - t
        if is_star_free(f):
            t = time.perf_counter()
            verdicts["contextual"] = mc(um, s, (), f)
            timings["contextual"] += time.perf_counter() - t
        if len(set(verdicts.values())) > 1:
            disagreements.append((i, s, to_text(f), verdicts))
    return disagreements, timings


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--cases", type=int, default=SweepConfig.cases)
    ap.add_argument("--max-states", type=int, default=SweepConfig.max_states)
    ap.add_argument("--max-depth", type=int, default=SweepConfig.max_depth)
    ap.add_argument("--star", action="store_true", help="allow starred programs (skips contextual)")
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    cfg = SweepConfig(args.cases, args.max_states, args.max_depth, args.star, args.seed)
    bad, timings = sweep(cfg)
    print(f"{cfg.cases} cases, {len(bad)} disagreements")
    for name, t in timings.items():
        print(f"  {name:10s} {t:.2f}s")
    for row in bad[:10]:
        print("  ", row)
    raise SystemExit(1 if bad else 0)


if __name__ == "__main__":
    main()

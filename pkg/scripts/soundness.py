"""Random soundness run over the axiom schemata and validity table.

    python3 scripts/soundness.py --trials 5000 --seed 3
    python3 scripts/soundness.py --schema OBS_a        # the dropped axiom: expect failures
"""

import argparse
import json

from epdl.axioms import soundness_suite
from epdl.model import model_to_dict
from epdl.syntax import to_text


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--trials", type=int, default=1000)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--max-states", type=int, default=4)
    ap.add_argument("--engine", choices=["direct", "contextual"], default="direct")
    ap.add_argument("--schema", action="append")
    args = ap.parse_args()

    report = soundness_suite(args.seed, args.trials, args.schema, validities=args.schema is None,
                             max_states=args.max_states, engine=args.engine)
    for line in report.lines():
        print(line)
    for name, cases in report.counterexamples.items():
        label, um, s = cases[0]
        f = label.formula() if hasattr(label, "formula") else label
        print(f"\n{name}: {to_text(f)}")
        print(f"  fails at {um.model.states[s]} of {json.dumps(model_to_dict(um))}")
    raise SystemExit(0 if report.ok else 1)


if __name__ == "__main__":
    main()

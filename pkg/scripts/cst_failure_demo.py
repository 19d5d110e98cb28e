#!/usr/bin/env python3
"""What-if walkthrough on the auxiliary feedwater model.

Loads the shipped fixture, shows the healthy baseline, marks CST-2 failed,
and prints the impacted chain plus the minimal success paths for the
"Supply Feedwater" function.
"""

import argparse
from pathlib import Path

from dml_engine import (
    DiagnosticRequest,
    Session,
    TaskType,
    load_model_file,
)

REPO_ROOT = Path(__file__).resolve().parent.parent


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument(
        "--model",
        default=str(REPO_ROOT / "fixtures" / "aux_feedwater.json"),
    )
    parser.add_argument("--component", default="CST-2")
    args = parser.parse_args()

    session = Session()
    session.load_model(load_model_file(args.model))
    graph = session.model

    counts = graph.count_elements()
    print(f"model: {graph.goal.name}")
    print(f"elements: {counts.as_dict()}  (total {counts.total})\n")

    baseline = session.run_upward(DiagnosticRequest(task=TaskType.UPWARD))
    goal = baseline.outcome_for(graph.goal.name)
    print(f"baseline goal probability: {goal.p_success:.6f} "
          f"(threshold {baseline.threshold}, impacted: {goal.impacted})")

    component = graph.by_name(args.component)[0]
    failed_state = {name: 0.0 for name in component.data.state_names}
    failed_state["failed"] = 1.0
    session.set_evidence({args.component: failed_state})
    print(f"\nevidence: {args.component} forced to the failed state")

    result = session.run_upward(DiagnosticRequest(task=TaskType.UPWARD))
    print("impacted nodes (probability < threshold):")
    for outcome in result.impacted:
        print(f"  {outcome.kind.value:17s} {outcome.name:55s} p={outcome.p_success:.6f}")

    print('\nminimal success paths for "Supply Feedwater":')
    collection = session.run_downward(
        DiagnosticRequest(task=TaskType.DOWNWARD, target="Supply Feedwater")
    )
    for i, rendered in enumerate(collection.qualified(graph), start=1):
        print(f"  path {i} ({len(rendered)} leaves):")
        for leaf in rendered:
            print(f"    - {leaf}")


if __name__ == "__main__":
    main()

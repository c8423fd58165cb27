"""The robot case studies.  Pass ``--sort`` to include the slow sorting case."""

import sys

from tesalg.scenario import run_case

cases = [("grid-division", {"horizon": 2}), ("update", {"horizon": 10})]
if "--sort" in sys.argv:
    cases.append(("sort", {"horizon": 6}))

for name, params in cases:
    report = run_case(name, **params)
    print(report.to_text())
    print(f"({report.elapsed:.1f} s)\n")

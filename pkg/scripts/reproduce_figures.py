#!/usr/bin/env python3
"""Regenerate the figure datasets (CSV + verification reports).

Writes fig2 (phase damping) and fig3 (phase flip) trajectories with oracle
columns into the output directory and prints the per-column verification
reports.  Plot with any CSV-aware tool, e.g.:

    python scripts/reproduce_figures.py --out-dir data
    python -c "import pandas as pd, matplotlib.pyplot as plt; \
d = pd.read_csv('data/fig2.csv'); \
d.plot(x='tau', y=['heat', 'coherence', 'delta_u']); plt.show()"
"""

import argparse
import sys

from qfirstlaw.experiment import reproduce_figure


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--out-dir", default="data", help="output directory (default: data)")
    args = parser.parse_args()

    all_passed = True
    for figure in ("fig2", "fig3"):
        outcome = reproduce_figure(figure, args.out_dir)
        print(outcome.report_path.read_text(), end="")
        print(f"-> {outcome.csv_path}")
        all_passed &= outcome.passed
    return 0 if all_passed else 1


if __name__ == "__main__":
    sys.exit(main())

"""
Method comparison sweeps
========================

``run_sweep`` evaluates every method across sample sizes and returns rows
ready for CSV. This reproduces the two comparison curves: amplitude damping
and depolarizing at q = 0.1 and eps = 1e-5, with three accurate trials per
point. Pass a path to save the CSV.
"""
import sys

import numpy as np

from finitekey.harness import SweepConfig, ambiguity_table, rows_to_csv, run_sweep
from finitekey.quantum import AmplitudeDamping, Depolarizing

sizes = tuple(int(m) for m in np.logspace(4, 7, 7))
out = sys.argv[1] if len(sys.argv) > 1 else None

# %%
# Run both sweeps. Accurate trials are independent, so they spread over
# worker processes without changing the result.

csv_parts = []
for channel in (AmplitudeDamping(0.1), Depolarizing(0.1)):
    config = SweepConfig(channel, sizes, eps_pe=1e-5, seed=1, trials_per_point=3)
    rows = run_sweep(config, workers=2)
    csv_parts.append(rows_to_csv(rows))
    table = ambiguity_table(rows)
    print(channel)
    print("m".rjust(10) + "".join(meth.rjust(12) for meth in config.methods))
    for m in sizes:
        print(f"{m:>10}" + "".join(f"{table[meth][m]:12.4f}" for meth in config.methods))

# %%
# Accurate values above are means over trials; the CSV keeps each trial.

if out:
    with open(out, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(csv_parts[0] + "".join(part.split("\n", 1)[1] for part in csv_parts[1:]))
    print("wrote", out)

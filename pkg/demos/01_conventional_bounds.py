"""
Conservative phase-error estimates from x-basis samples
=======================================================

Conventional estimation looks only at the rounds where Alice and Bob both
measured in the x basis and counts disagreements. From ``m`` such rounds with
an observed error rate ``Xbar`` we want an upper limit ``C`` on the true
phase error that holds with probability ``1 - eps``.

Five constructions are compared: two confidence regions (variational
distance, relative entropy) and three binomial tail bounds (Chernoff,
factorial moment, Klar).
"""
import numpy as np

from finitekey.binomialbounds import (TailBoundKind, chernoff_tail, exact_tail,
                                      factorial_moment_tail, invert_bound, klar_tail)
from finitekey.estimation import Construction, conventional_ambiguity, worst_case_phase_error

# %%
# Tail bounds against the exact binomial tail
# -------------------------------------------
# Each bound over-estimates ``P[Xbar <= p - delta]``; the exact tail is the
# floor they must never go below.

m, p = 100, 0.1
print(f"{'delta':>6} {'exact':>10} {'klar':>10} {'moment':>10} {'chernoff':>10}")
for delta in (0.02, 0.04, 0.06, 0.08):
    row = [exact_tail(m, p, delta), klar_tail(m, p, delta),
           factorial_moment_tail(m, p, delta), chernoff_tail(m, p, delta)]
    print(f"{delta:6.2f} " + " ".join(f"{v:10.3e}" for v in row))

# %%
# Inverting a bound
# -----------------
# ``u(m, C, C - Xbar)`` decreases in ``C``; bisection finds where it drops
# below eps. The exact tail gives the Clopper-Pearson limit for comparison.

m, observed, eps = 10_000, 0.05, 1e-5
for kind in TailBoundKind:
    interval = invert_bound(kind, m, observed, eps)
    print(f"{kind.value:>17}: C = {interval.upper:.6f}")

# %%
# From phase error to Eve's ambiguity
# -----------------------------------
# The worst-case phase error p~ turns into ``1 - h(p~)`` bits of ambiguity
# per key bit. Narrower intervals mean more key.

for c in Construction:
    p_tilde = worst_case_phase_error(c, m, observed, eps)
    amb = conventional_ambiguity(c, m, observed, eps)
    print(f"{c.value:>12}: p~ = {p_tilde:.5f}  ambiguity = {amb:.5f}")

# %%
# All five converge to ``1 - h(0.05) = 0.7136`` as m grows.

for m in np.logspace(3, 9, 7).astype(int):
    values = [conventional_ambiguity(c, int(m), observed, eps) for c in Construction]
    print(f"m = {m:>10}: " + " ".join(f"{v:.4f}" for v in values))

"""
Qubit channels, Choi matrices and Eve's ambiguity
=================================================

A qubit channel is described by its Choi matrix, the state obtained by
sending half of a Bell pair through it. For BB84 with Alice's key in the z
basis, Eve's ambiguity about a key bit is the conditional entropy
``S(X|E) = S(rho_XB) - S(rho_AB)``, where ``rho_XB`` is the Choi matrix with
Alice's qubit dephased.
"""
import numpy as np

from finitekey.optimizer import BASIS_LABELS, coords_from_choi
from finitekey.quantum import (AmplitudeDamping, Depolarizing, accurate_outcomes, choi_of,
                               cond_entropy_x_given_e, eigenvalues_sym4, pinch_alice,
                               stats_accurate, stats_conventional)

np.set_printoptions(precision=5, suppress=True)

# %%
# The two benchmark channels at q = 0.1.

for spec in (Depolarizing(0.1), AmplitudeDamping(0.1)):
    rho = choi_of(spec)
    print(spec)
    print(rho.entries)
    print("  spectrum        ", eigenvalues_sym4(rho))
    print("  pinched spectrum", eigenvalues_sym4(pinch_alice(rho.entries)))
    print("  S(X|E) =", round(cond_entropy_x_given_e(rho), 6))
    print("  phase error =", round(float(stats_conventional(rho).probs[0]), 6))

# %%
# The 16-outcome statistic
# ------------------------
# Accurate estimation keeps every round: both bases for both parties, and
# all four bit pairs. Matched-basis outcomes reveal the error rates;
# mismatched ones reveal how the channel mixes z and x.

rho = choi_of(AmplitudeDamping(0.1))
for label, p in zip(accurate_outcomes(), stats_accurate(rho).probs):
    print(label, f"{p:.5f}")

# %%
# What the statistic cannot see
# -----------------------------
# Real Choi matrices of trace-preserving channels have seven free
# coordinates. The z/x statistic pins down six of them; the YY correlation
# is invisible. Eve can choose it freely, so the minimum of S(X|E) over
# channels consistent with the depolarizing statistic is below the
# depolarizing channel's own value.

x = coords_from_choi(choi_of(Depolarizing(0.1)))
print({label: round(float(v), 5) for label, v in zip(BASIS_LABELS, x)})

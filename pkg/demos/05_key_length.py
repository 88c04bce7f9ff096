"""
From ambiguity to key length
============================

The final key length subtracts three costs from ``N`` times Eve's worst-case
ambiguity: a smoothing correction per bit, the bits disclosed during error
correction, and ``2 log2(1/eps_PA)`` for privacy amplification.
"""
from finitekey.estimation import Construction, conventional_ambiguity, xi_relative
from finitekey.keyrate import KeyRateParams, default_delta_bar, key_length, leak_model
from finitekey.optimizer import min_ambiguity_accurate
from finitekey.quantum import (AmplitudeDamping, choi_of, sample_statistics, stats_accurate,
                               stats_conventional)

eps_pe, eps_bar, eps_pa = 1e-5, 1e-10, 1e-10
rho = choi_of(AmplitudeDamping(0.1))
qber = float(stats_conventional(rho).probs[0])

# %%
# With ``m`` parameter-estimation rounds and ``N`` raw key bits, compare the
# key from the variational region and from accurate estimation.

print(f"{'N':>10} {'variational':>12} {'accurate':>12}")
for n_raw in (10**3, 10**4, 10**5, 10**6, 10**7):
    m = n_raw
    params = KeyRateParams(n_raw, eps_pe, eps_pa, default_delta_bar(n_raw, eps_bar),
                           leak_model(n_raw, qber, efficiency=1.1))
    var = conventional_ambiguity(Construction.VARIATIONAL, m // 4, qber, eps_pe)
    lam = sample_statistics(stats_accurate(rho), m, seed=5)
    acc = min_ambiguity_accurate(lam, xi_relative(m, 16, eps_pe)).value
    print(f"{n_raw:>10} {key_length(params, var):>12} {key_length(params, acc):>12}")

# %%
# At small N the fixed costs dominate and no key survives (length 0).

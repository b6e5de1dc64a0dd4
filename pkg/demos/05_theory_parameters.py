"""Why the asymptotic parameters cannot be simulated.

Run: python demos/05_theory_parameters.py
"""

from commitcap import bsc, derive_parameters

for sigma in (0.05, 0.1):
    ps = derive_parameters(bsc(0.1), [0.5, 0.5], 10**6, sigma, "theory")
    print(f"sigma={sigma}: eta={ps.eta:.3f} tau={ps.tau:.4g} test width={ps.epsilon_test:.4g}")
    print(f"  at n=1e6: eps bound {ps.epsilon_bound:.3g}, delta bound {ps.delta_bound:.3g}, "
          f"log2 K bound {ps.K_bound:.4g} (>= 0: {ps.K_bound_at_least_one})")
    print(f"  eps bound < 0.01 needs n >= {ps.crossover_n_epsilon:.4g}; "
          f"delta bound needs n >= {ps.crossover_n_delta:.4g}")
    print(f"  rate lower bound {ps.rate_lower_bound:.4f} bits/use")

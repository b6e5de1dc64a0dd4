"""Typical-set estimates checked by exact type-class enumeration.

Run: python demos/04_typical_sets.py
"""

from commitcap import bsc, chernoff_check, verify_bound_suite

res = verify_bound_suite(bsc(0.1), [0.5, 0.5], [(50, 0.1), (100, 0.05)], trials=5000, seed=0)
for r in res:
    print(f"n={r.detail['n']:<4} eps={r.detail['eps']:<5} {r.bound_name:<18} "
          f"bound={r.analytical_value:<12.6g} measured={r.measured_value:<12.6g} {'ok' if r.satisfied else 'VIOLATED'}")

# The per-word probability estimate with the constant taken as a max over
# input letters is violated: the deviation of log W^n(z|x) accumulates over
# every (x, z) cell, so the constant has to be a sum. The [sum] rows use it.

print()
for p, eta, N in [(0.5, 0.2, 100), (0.1, 1.0, 200), (0.3, 0.5, 400)]:
    r = chernoff_check(p, eta, N, trials=100_000, seed=0)
    print(f"Chernoff p={p} eta={eta} N={N}: tail {r.measured_value:.2e} "
          f"(exact {r.detail['exact_upper_tail']:.2e}) <= {r.analytical_value:.2e}")

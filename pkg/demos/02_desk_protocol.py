"""A commitment protocol over BSC(0.1) at block length 1000.

The asymptotic parameter formulas are vacuous here, so sizes and typicality
widths are chosen by hand and the security properties are measured.

Run: python demos/02_desk_protocol.py
"""

import numpy as np

from commitcap import Verdict, binding_attack, bsc, build_codebook, derive_parameters, run_protocol
from commitcap.commitment import verify_codebook
from commitcap.security import desk_book, measure_concealing, measure_soundness

W = bsc(0.1)
params = derive_parameters(W, [0.5, 0.5], 1000, 0.2, "desk", K=4, L=4, eps_test=0.05)
book = build_codebook(W, params, 4, 4, seed=7)
print("codebook:", book.construction_log)
print("structure:", verify_codebook(book))

runs = [run_protocol(book, W, 1 + i % 4, seed=i) for i in range(2000)]
print(f"honest acceptance over 2000 runs: {np.mean([r.verdict is Verdict.ACC for r in runs]):.4f}")

sound = measure_soundness(book, W, 2000, seed=1)
print(f"rejection rate {sound.value:.4f} (exact {sound.detail['exact_rejection']:.2e})")

# A cheater sends a word halfway between two codewords of different messages
# and hopes the output passes both tests.
for strategy in ("midpoint", "hillclimb"):
    rep = binding_attack(book, W, strategy, trials=1000, seed=2, budget=50)
    print(f"{strategy:>9}: joint acceptance {rep.delta_bind_measured.value:.4f}")

# Concealment can only be computed exactly on a much shorter code.
small = desk_book(W, 12, 0.1, 2, 4, seed=5, eps_test=0.2)
c = measure_concealing(small, W, 1, 2)
print(f"n=12 exact TV between messages: {c.value:.4f}")
print(f"  distances to the i.i.d. output law: {c.detail['distance_to_product_a']:.4f}, "
      f"{c.detail['distance_to_product_a_prime']:.4f}")

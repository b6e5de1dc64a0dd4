"""How much can a noisy channel hide? Commitment capacity on a few small channels.

Run: python demos/01_capacity_tour.py
"""

import numpy as np

from commitcap import bsc, bundled_channel, capacity_report
from commitcap.channel import binary_entropy

# A binary symmetric channel hides exactly the noise entropy H(p).
print("BSC family: commitment capacity vs H(p)")
for p in (0.0, 0.05, 0.1, 0.25, 0.45, 0.5):
    rep = capacity_report(bsc(p))
    print(f"  p={p:<5} C_com={rep.C_com:.6f}  H(p)={binary_entropy(p):.6f}  trivial={rep.trivial}")

# V: one noisy input and one clean one. Its two capacities add up to more than
# one bit, which no single input distribution could achieve for both at once.
V = bundled_channel("V")
rep = capacity_report(V)
print("\nchannel V")
print(f"  C_com = {rep.C_com:.4f} at P = {np.round(rep.argmax_com, 4)}")
print(f"  C     = {rep.C:.4f} at P = {np.round(rep.argmax_C, 4)}")
print(f"  sum   = {rep.total:.4f} > log2 min(|X|,|Z|) = {rep.entropy_ceiling}")

# T: the noisy input is a coin flip between the two clean ones, so a cheating
# sender could always claim either. After removing it nothing is hidden.
T = bundled_channel("T")
rep = capacity_report(T)
print("\nchannel T")
for sym, witness in rep.removed_symbols:
    print(f"  removed {sym!r} = mixture {witness}")
print(f"  trivial={rep.trivial}  C_com={rep.C_com}")

F = bundled_channel("F")
print(f"\nchannel F: C_com = {capacity_report(F).C_com:.6f}, eta = {capacity_report(F).eta:.6f}")

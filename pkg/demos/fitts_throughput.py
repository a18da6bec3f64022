"""Effective-width throughput from first principles.

Pointing performance is summarized by throughput TP = ID_e / MT, where the
effective index of difficulty ID_e = log2(A / W_e + 1) uses the spread of
actual selection endpoints instead of the nominal target width:
W_e = 4.133 * S_x, with S_x the sample standard deviation of endpoint
projections onto the task axis. This script simulates noisy selections
around a target and shows the estimate converging on the closed form.

Run: python3 demos/fitts_throughput.py
"""

import numpy as np

from headpoint import effective_id, effective_width, project_onto_axis, throughput

rng = np.random.default_rng(7)

prev = (50.0, 400.0)
target = (150.0, 400.0)   # amplitude A = 100 pt along the x axis
sigma = 10.0              # endpoint noise, pt
mt_s = 1.0                # movement time per trial, s

# With sigma = 10 the closed form gives W_e = 41.33 and
# TP = log2(100 / 41.33 + 1) = 1.7738 bits/s.
for n in (10, 100, 1000, 10000):
    endpoints = np.column_stack([
        rng.normal(target[0], sigma, n),
        rng.normal(target[1], sigma, n),
    ])
    proj = [project_onto_axis(prev, target, (x, y)) for x, y in endpoints]
    s_x, w_e = effective_width(proj)
    id_e = effective_id(100.0, w_e)
    tp = throughput(id_e, mt_s)
    print(f"n={n:>5}:  S_x={s_x:6.3f}  W_e={w_e:6.2f}  ID_e={id_e:.4f}  "
          f"TP={tp:.4f} bits/s")

print(f"\nclosed form: W_e={4.133 * sigma:.2f}  "
      f"TP={np.log2(100.0 / (4.133 * sigma) + 1.0):.4f} bits/s")

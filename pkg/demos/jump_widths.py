"""Widths of the transported jump: exact tail, closed form and POD.

Run with ``python3 demos/jump_widths.py``. Takes a few seconds.
"""

import numpy as np

import nwidth as nw
from nwidth.snapshots import pod_widths, singular_values, snapshot_matrix
from nwidth.widths import exact_width_curve, jump_width_trigamma, signal_spectrum, sort_spectrum

g = nw.jump_signal()
print("parity of sgn on (-1, 1):", nw.hws_classify(g))

# the sorted eigenvalue tail of the odd spectrum
curve = exact_width_curve(sort_spectrum(signal_spectrum(g, "odd", 4096)), 64)

# the same numbers in closed form through trigamma
closed = jump_width_trigamma(np.arange(65))

# and from the SVD of a 1000 x 1000 snapshot matrix
X = snapshot_matrix(g, 1000)
pod = pod_widths(singular_values(X), X.weight)

print(f"{'N':>4} {'sorted tail':>14} {'trigamma':>14} {'POD n=1000':>14}")
for N in (0, 1, 2, 4, 8, 16, 32, 64):
    print(f"{N:4d} {curve.delta[N]:14.8f} {closed[N]:14.8f} {pod[N]:14.8f}")

# slow decay: sqrt(N) * delta_N tends to 2/pi
N = 2000
print("sqrt(N) delta_N at N=2000:", np.sqrt(N) * jump_width_trigamma(N), " 2/pi =", 2 / np.pi)

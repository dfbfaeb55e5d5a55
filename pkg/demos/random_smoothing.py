"""Random step data smoothed by repeated box convolution.

Each pass of the box filter adds one derivative, and the fitted decay
rate of the POD widths goes up by roughly one.
"""

import numpy as np

from nwidth.experiments import fit_rate
from nwidth.signals import box_convolve, random_steps
from nwidth.snapshots import pod_widths, singular_values, snapshot_matrix

base = random_steps(20, seed=0)
for passes in range(4):
    g = base if passes == 0 else box_convolve(base, 0.1, passes)
    X = snapshot_matrix(g, 1000)
    d = pod_widths(singular_values(X), X.weight)
    print(f"passes={passes}  rate {fit_rate((np.arange(d.size), d), 32, 512).value:.2f}")

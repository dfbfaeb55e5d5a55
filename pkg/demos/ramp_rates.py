"""Smoother ramps give faster width decay.

Builds the half-wave symmetric ramp datum for m = 0..3 with the
reference steepness and fits log-log rates of both the exact widths and
the POD widths over N in [32, 512].
"""

import numpy as np

from nwidth.experiments import RAMP_EPS, fit_rate
from nwidth.signals import hws_assemble, ramp_signal
from nwidth.snapshots import pod_widths, singular_values, snapshot_matrix
from nwidth.widths import exact_width_curve, signal_spectrum, sort_spectrum

for m in range(4):
    g = hws_assemble(ramp_signal(m, RAMP_EPS[m]))
    exact = exact_width_curve(sort_spectrum(signal_spectrum(g, "odd", 8192)), 600)
    X = snapshot_matrix(g, 1000)
    d = pod_widths(singular_values(X), X.weight)
    r_exact = fit_rate(exact, 32, 512).value
    r_pod = fit_rate((np.arange(d.size), d), 32, 512).value
    print(f"m={m}  eps={RAMP_EPS[m]:.5f}  exact rate {r_exact:.3f}  POD rate {r_pod:.3f}")

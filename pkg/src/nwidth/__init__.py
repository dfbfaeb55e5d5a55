"""Kolmogorov and L2-average N-widths of linear transport manifolds.

The solution manifold ``{g(. - mu) : mu in [0, 1]}`` is studied through
exact Fourier spectra (:mod:`nwidth.widths`) and through snapshot SVDs on
midpoint grids (:mod:`nwidth.snapshots`).
"""

from .fourier import FourierCoefficients, HwsParts, coefficients, hws_classify, hws_split, sobolev_tail_diagnostic
from .piecewise import PiecewisePoly
from .signals import (
    Signal,
    antiderivative_signal,
    box_convolve,
    hws_assemble,
    jump_signal,
    parse_signal,
    ramp_signal,
    random_block_field,
    random_steps,
    transport2d_field,
)
from .snapshots import (
    basis_matrix,
    midpoint_grid,
    pod_width_curve,
    projection_distances,
    singular_values,
    snapshot_matrix,
)
from .special import trigamma
from .widths import (
    EigenSpectrum,
    SortedSpectrum,
    WidthCurve,
    decay_bounds,
    exact_width,
    exact_width_curve,
    gm_bounds,
    jump_width_trigamma,
    nonhws_bound,
    signal_spectrum,
    sort_spectrum,
    spectrum,
)

__version__ = "0.1.0"

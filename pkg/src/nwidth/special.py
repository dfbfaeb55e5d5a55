"""Trigamma function by recurrence and asymptotic series."""

from __future__ import annotations

import numpy as np

__all__ = ["trigamma"]

# B_2, B_4, ..., B_16. For x >= 10 the first omitted term (B_18 / x^19)
# is below 6e-18, i.e. under 1e-16 relative to psi1(x) ~ 1/x.
_BERNOULLI = np.array(
    [1 / 6, -1 / 30, 1 / 42, -1 / 30, 5 / 66, -691 / 2730, 7 / 6, -3617 / 510]
)
_LIFT = 10.0


def trigamma(x):
    """First derivative of the digamma function for ``x > 0``.

    Arguments below 10 are lifted with ``psi1(x) = psi1(x + 1) + 1/x^2``;
    then ``psi1(x) ~ 1/x + 1/(2x^2) + sum_{j=1}^{8} B_{2j} / x^{2j+1}``.
    """
    x0 = np.asarray(x, dtype=float)
    x = np.atleast_1d(x0)
    if np.any(~(x > 0)):
        raise ValueError("trigamma needs positive arguments")
    # number of recurrence steps needed to reach the asymptotic range
    n = np.where(x < _LIFT, np.ceil(_LIFT - x), 0.0)
    y = x + n
    inv = 1.0 / y
    inv2 = inv * inv
    series = np.zeros_like(y)
    for B in _BERNOULLI[::-1]:
        series = series * inv2 + B
    series *= inv2 * inv  # B_2 / x^3 + ...
    out = inv + (0.5 * inv2 + series)
    # add the recurrence terms smallest first
    for i in range(int(n.max(initial=0.0)), 0, -1):
        step = n >= i
        out[step] += 1.0 / (x[step] + (i - 1)) ** 2
    return out.reshape(x0.shape) if x0.ndim else float(out[0])

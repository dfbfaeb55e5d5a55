"""Catalog of transport data ``g`` on the periodic cell (-1, 1).

The transport solution is ``u_mu(x) = g(x - mu)`` for ``x`` in (0, 1), so
every datum here is an evaluable function with period 2. Piecewise
polynomial data carry an exact :class:`~nwidth.piecewise.PiecewisePoly` so
that integrals and Fourier coefficients can be computed in closed form.

Values at discontinuities default to the right limit. On matched midpoint
grids ``x_i - mu_j`` lands exactly on breakpoints, and a one-sided value
keeps the sampled snapshot matrix a faithful discretization there.
"""

from __future__ import annotations

from fractions import Fraction
from math import comb, pi
from typing import Callable

import numpy as np
from numpy.polynomial import polynomial as P

from .piecewise import PiecewisePoly, periodic_reduce

__all__ = [
    "Signal",
    "BlockField2D",
    "jump_signal",
    "antiderivative_signal",
    "smoothstep_coefficients",
    "ramp_signal",
    "hws_assemble",
    "random_steps",
    "box_convolve",
    "constant_signal",
    "function_signal",
    "random_block_field",
    "transport2d_field",
    "parse_signal",
    "SignalSpecError",
    "SIGMOID_DEPTH",
]

SIGMOID_DEPTH = 5
MAX_RAMP_ORDER = 5


class SignalSpecError(ValueError):
    """Raised for malformed or out-of-range signal spec strings."""


class Signal:
    """An evaluable real function on (-1, 1) extended with period 2.

    Either ``pp`` (exact piecewise polynomial), ``func`` (a vectorized
    callable on the reduced argument) or ``parts`` (a sum of signals) is
    set.
    """

    def __init__(self, kind: str, params: tuple = (), *, pp: PiecewisePoly | None = None,
                 func: Callable | None = None, breakpoints=None, parts=None, label: str | None = None):
        if sum(x is not None for x in (pp, func, parts)) != 1:
            raise ValueError("exactly one of pp, func, parts must be given")
        self.kind = kind
        self.params = tuple(params)
        self.pp = pp
        self.func = func
        self.parts = tuple(parts) if parts is not None else None
        if pp is not None:
            bps = pp.breakpoints
        elif parts is not None:
            bps = np.unique(np.concatenate([p.breakpoints for p in self.parts]))
        else:
            bps = np.unique(np.concatenate([[-1.0, 1.0], np.asarray(breakpoints if breakpoints is not None else [], float)]))
        self.breakpoints = np.asarray(bps, dtype=float)
        self.label = label or kind

    @property
    def is_piecewise(self) -> bool:
        if self.parts is not None:
            return all(p.is_piecewise for p in self.parts)
        return self.pp is not None

    def __call__(self, x, side: str = "right"):
        x = np.asarray(x, dtype=float)
        if self.pp is not None:
            return self.pp(x, side=side)
        if self.parts is not None:
            return sum(p(x, side=side) for p in self.parts)
        return np.asarray(self.func(periodic_reduce(x)), dtype=float)

    def __add__(self, other: "Signal") -> "Signal":
        parts = []
        for s in (self, other):
            parts.extend(s.parts if s.kind == "sum" else (s,))
        return Signal("sum", (), parts=parts, label=" + ".join(p.label for p in parts))

    def derivative(self) -> "Signal":
        if self.pp is None:
            raise TypeError("derivative needs a piecewise-polynomial signal")
        return Signal("piecewise", (), pp=self.pp.derivative(), label=f"d/dx {self.label}")

    def norm_sq(self) -> float:
        """``||g||^2`` over the full period (-1, 1)."""
        if self.pp is not None:
            return self.pp.norm_sq()
        from .fourier import composite_gauss_integral

        return composite_gauss_integral(lambda t: self(t) ** 2, self.breakpoints)

    def integral(self, lo: float = -1.0, hi: float = 1.0) -> float:
        if self.pp is not None:
            return self.pp.integral(lo, hi)
        from .fourier import composite_gauss_integral

        return composite_gauss_integral(self, np.concatenate([self.breakpoints, [lo, hi]]), lo, hi)

    def __repr__(self) -> str:
        return f"Signal({self.label!r})"


# ---------------------------------------------------------------------------
# catalog constructors


def constant_signal(c: float) -> Signal:
    return Signal("constant", (float(c),), pp=PiecewisePoly.constant(c), label=f"const:{c}")


def function_signal(func: Callable, breakpoints=(), label: str = "function") -> Signal:
    """Wrap a vectorized callable on the reduced argument in [-1, 1)."""
    return Signal("function", (), func=func, breakpoints=breakpoints, label=label)


def jump_signal() -> Signal:
    """``g = sgn(x)``, odd half-wave symmetric."""
    pp = PiecewisePoly([-1.0, 0.0, 1.0], [[-1.0], [1.0]])
    return Signal("jump", (), pp=pp, label="jump")


def _gm_global(m: int):
    """Global-variable polynomial coefficients (left, right) of ``g_m`` as
    exact fractions."""
    left, right = [Fraction(-1)], [Fraction(1)]

    def integ(c):
        return [Fraction(0)] + [ci / (i + 1) for i, ci in enumerate(c)]

    for _ in range(m):
        il, ir = integ(left), integ(right)
        half_mass = sum(ir) / 2  # 1/2 int_0^1 g_{m-1}
        il[0] -= half_mass
        ir[0] -= half_mass
        left, right = il, ir
    return left, right


def antiderivative_signal(m: int) -> Signal:
    """The recursive antiderivatives ``g_m`` of the jump.

    ``g_0 = sgn`` and ``g_m(x) = int_0^x g_{m-1} - 1/2 int_0^1 g_{m-1}``.
    Coefficients are built in exact rational arithmetic.
    """
    m = int(m)
    if m < 0:
        raise ValueError("m must be nonnegative")
    if m == 0:
        return jump_signal()
    left, right = _gm_global(m)
    pp = PiecewisePoly.from_global([-1.0, 0.0, 1.0], [[float(c) for c in left], [float(c) for c in right]])
    return Signal("gm", (m,), pp=pp, label=f"gm:{m}")


def smoothstep_coefficients(m: int) -> np.ndarray:
    """Coefficients (lowest first) of the degree ``2m+1`` smoothstep
    ``P_m`` on [0, 1] with ``m`` vanishing derivatives at both ends."""
    c = np.zeros(2 * m + 2)
    for n in range(m + 1):
        c[m + 1 + n] = comb(m + n, n) * comb(2 * m + 1, m - n) * (-1) ** n
    return c


def _sigmoid(eps: float, depth: int):
    """Recursive sine sigmoid rescaled to go from 0 to 1; returns
    ``(func, half_support)``."""
    scale = (pi / 2) ** depth
    half = scale * eps / 2

    def q(x):
        x = np.asarray(x, dtype=float)
        v = np.clip(2 * x / (eps * scale), -1.0, 1.0)
        for _ in range(depth):
            v = np.sin(pi / 2 * v)
        return 0.5 * (v + 1.0)

    return q, half


def ramp_signal(m, eps: float, depth: int = SIGMOID_DEPTH) -> Signal:
    """Ramp ``q`` rising from 0 to 1 around the origin.

    ``m`` in 0..5 selects the smoothstep ``q_m(x) = P_m(x/eps + 1/2)`` on
    ``[-eps/2, eps/2]``; ``m="inf"`` (or ``None``) selects the recursive
    sine sigmoid of the given depth, whose central slope matches ``q_0``.
    """
    eps = float(eps)
    if not 0 < eps < 1:
        raise ValueError("eps must lie in (0, 1)")
    if m is None or m == "inf":
        depth = int(depth)
        if depth < 0:
            raise ValueError("depth must be nonnegative")
        func, half = _sigmoid(eps, depth)
        if half >= 0.5:
            raise ValueError("sigmoid support exceeds the half-wave cell")
        return Signal("sigmoid", (eps, depth), func=func, breakpoints=[-half, half],
                      label=f"sigmoid:{eps}:{depth}")
    m = int(m)
    if not 0 <= m <= MAX_RAMP_ORDER:
        raise ValueError(f"ramp order must be in 0..{MAX_RAMP_ORDER}")
    pp = PiecewisePoly([-1.0, -eps / 2, eps / 2, 1.0], [[0.0], smoothstep_coefficients(m), [1.0]])
    return Signal("ramp", (m, eps), pp=pp, label=f"ramp:{m}:{eps}")


def hws_assemble(q: Signal) -> Signal:
    """Odd half-wave symmetric datum built from a ramp ``q`` on (-1/2, 1/2].

    ``g = 1 - 2q(x+1)`` on (-1, -1/2], ``2q(x) - 1`` on (-1/2, 1/2] and
    ``1 - 2q(x-1)`` on (1/2, 1).
    """
    kind = {"ramp": "ramp-hws", "sigmoid": "sigmoid-hws"}.get(q.kind, "hws")
    label = q.label if q.kind in ("ramp", "sigmoid") else f"hws({q.label})"
    inner = [c for c in q.breakpoints if -0.5 < c < 0.5]
    pts = [-1.0, -0.5, 0.5, 1.0] + inner + [c - 1 for c in inner if c > 0] + [c + 1 for c in inner if c < 0]

    if q.pp is not None:
        def rule(xm):
            if xm <= -0.5:
                return [(-2.0, q.pp, 1.0, 1.0)], 1.0
            if xm <= 0.5:
                return [(2.0, q.pp, 1.0, 0.0)], -1.0
            return [(-2.0, q.pp, 1.0, -1.0)], 1.0

        return Signal(kind, q.params, pp=PiecewisePoly.pullback(pts, rule), label=label)

    def g(x):
        return np.where(x <= -0.5, 1 - 2 * q(x + 1), np.where(x <= 0.5, 2 * q(x) - 1, 1 - 2 * q(x - 1)))

    return Signal(kind, q.params, func=g, breakpoints=pts, label=label)


def random_steps(n_steps: int, seed: int) -> Signal:
    """Piecewise constant datum with ``n_steps`` equal plateaus on (-1, 1).

    Heights are i.i.d. uniform on [0, 1) from ``numpy.random.default_rng(seed)``.
    """
    n_steps = int(n_steps)
    if n_steps < 1:
        raise ValueError("n_steps must be positive")
    heights = np.random.default_rng(seed).random(n_steps)
    pp = PiecewisePoly(np.linspace(-1.0, 1.0, n_steps + 1), [[h] for h in heights])
    return Signal("random-steps", (n_steps, seed), pp=pp, label=f"steps:{n_steps}:{seed}")


def box_convolve(g: Signal, width: float, passes: int = 1) -> Signal:
    """Apply ``passes`` periodic convolutions with a unit-mass box of the
    given width. Exact for piecewise polynomial input."""
    if g.pp is None:
        raise TypeError("box_convolve needs a piecewise-polynomial signal")
    passes = int(passes)
    if passes < 1:
        raise ValueError("passes must be positive")
    pp = g.pp
    for _ in range(passes):
        pp = pp.box_convolve(width)
    return Signal("convolved", (g.label, float(width), passes), pp=pp,
                  label=f"{g.label}:conv:{width}:{passes}")


# ---------------------------------------------------------------------------
# 2D tensor datum


class BlockField2D:
    """Datum ``G(x, y)`` on (-1, 1) x (0, 1) from piecewise constant blocks.

    ``G(x, y) = sum_ab H[a, b] A_a(x) B_b(y)`` with ``A_a`` the (convolved)
    indicator of the a-th x-block and ``B_b`` that of the b-th y-block. The
    x direction has period 2 and the y direction period 1. Blocks with
    ``x < 0`` hold the inflow datum, the others the initial datum.
    """

    def __init__(self, heights, passes: int = 0):
        self.heights = np.array(heights, dtype=float)
        if self.heights.ndim != 2:
            raise ValueError("heights must be a 2D array")
        self.passes = int(passes)
        nbx, nby = self.heights.shape
        bx = np.linspace(-1.0, 1.0, nbx + 1)
        # y in (0, 1) is mapped to t = 2y - 1 so the period-2 carrier applies
        by = np.linspace(-1.0, 1.0, nby + 1)
        self.x_factors = [self._indicator(bx, a, 2.0 / nbx) for a in range(nbx)]
        self.y_factors = [self._indicator(by, b, 2.0 / nby) for b in range(nby)]

    def _indicator(self, edges, i, width):
        coeffs = [[1.0] if j == i else [0.0] for j in range(edges.size - 1)]
        pp = PiecewisePoly(edges, coeffs)
        for _ in range(self.passes):
            pp = pp.box_convolve(width)
        return pp

    def x_values(self, x) -> np.ndarray:
        """Stack ``A_a(x)`` along a new last axis."""
        x = np.asarray(x, dtype=float)
        return np.stack([A(x) for A in self.x_factors], axis=-1)

    def y_values(self, y) -> np.ndarray:
        t = 2.0 * np.asarray(y, dtype=float) - 1.0
        return np.stack([B(t) for B in self.y_factors], axis=-1)

    def __call__(self, x, y):
        x, y = np.broadcast_arrays(np.asarray(x, float), np.asarray(y, float))
        return np.einsum("...a,ab,...b->...", self.x_values(x), self.heights, self.y_values(y))

    def y_factor_matrix(self, y) -> np.ndarray:
        """``C[a, l] = sum_b H[a, b] B_b(y_l)``."""
        return self.heights @ self.y_values(y).T


def random_block_field(nbx: int = 20, nby: int = 5, seed: int = 0, passes: int = 0) -> BlockField2D:
    """Random block heights, uniform on [0, 1), blockwise convolved
    ``passes`` times in each coordinate with box width = block width."""
    heights = np.random.default_rng(seed).random((nbx, nby))
    return BlockField2D(heights, passes)


def transport2d_field(G: BlockField2D, mu: float, x, y) -> np.ndarray:
    """Sample ``u_mu(x, y) = G(x - mu, y)`` on the tensor grid ``x`` by ``y``."""
    X, Y = np.meshgrid(np.asarray(x, float) - mu, np.asarray(y, float), indexing="ij")
    return G(X, Y)


# ---------------------------------------------------------------------------
# spec strings


def parse_signal(spec: str) -> Signal:
    """Build a catalog signal from a spec string.

    Accepted forms: ``jump``, ``gm:M``, ``ramp:M:EPS`` (odd HWS datum from
    the smoothstep ramp), ``sigmoid:EPS[:DEPTH]``, ``steps:N:SEED`` and
    ``steps:N:SEED:conv:WIDTH:PASSES``, ``const:C``.
    """
    parts = spec.strip().split(":")
    head, args = parts[0], parts[1:]
    try:
        if head == "jump" and not args:
            return jump_signal()
        if head == "gm" and len(args) == 1:
            m = int(args[0])
            if m < 0:
                raise SignalSpecError("gm order must be nonnegative")
            return antiderivative_signal(m)
        if head == "ramp" and len(args) == 2:
            return hws_assemble(ramp_signal(int(args[0]), float(args[1])))
        if head == "sigmoid" and len(args) in (1, 2):
            depth = int(args[1]) if len(args) == 2 else SIGMOID_DEPTH
            return hws_assemble(ramp_signal("inf", float(args[0]), depth))
        if head == "steps" and len(args) in (2, 5):
            g = random_steps(int(args[0]), int(args[1]))
            if len(args) == 5:
                if args[2] != "conv":
                    raise SignalSpecError(f"expected 'conv' in {spec!r}")
                g = box_convolve(g, float(args[3]), int(args[4]))
            return g
        if head == "const" and len(args) == 1:
            return constant_signal(float(args[0]))
    except SignalSpecError:
        raise
    except (ValueError, TypeError) as exc:
        raise SignalSpecError(f"bad signal spec {spec!r}: {exc}") from exc
    raise SignalSpecError(f"unknown signal spec {spec!r}")

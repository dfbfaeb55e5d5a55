"""Fourier coefficients on the periodic cell and half-wave symmetry.

Coefficients use the orthonormal basis ``{1/sqrt(2), cos(k pi x), sin(k pi x)}``
of L2(-1, 1)::

    a_0 = <g, 1/sqrt(2)>,  a_k = <g, cos(k pi x)>,  b_k = <g, sin(k pi x)>

so that Parseval reads ``||g||^2 = a_0^2 + sum_k (a_k^2 + b_k^2)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import sqrt

import numpy as np

from .signals import Signal

__all__ = [
    "FourierCoefficients",
    "HwsParts",
    "SobolevDiagnostic",
    "QuadratureError",
    "coefficients",
    "hws_classify",
    "hws_split",
    "sobolev_tail_diagnostic",
    "composite_gauss_integral",
]

_GL_NODES = 20
_MAX_PANELS = 1 << 22


class QuadratureError(RuntimeError):
    """Adaptive quadrature did not reach its tolerance."""


def _panels(breaks, lo, hi, max_width):
    """Composite panel edges on ``[lo, hi]`` honoring ``breaks``."""
    pts = np.unique(np.concatenate([[lo, hi], [b for b in breaks if lo < b < hi]]))
    edges = []
    for a, b in zip(pts[:-1], pts[1:]):
        n = max(1, int(np.ceil((b - a) / max_width)))
        edges.append(np.linspace(a, b, n + 1)[:-1])
    edges.append([hi])
    return np.concatenate(edges)


def _gauss_nodes(edges):
    t, w = np.polynomial.legendre.leggauss(_GL_NODES)
    h = np.diff(edges)
    mid = 0.5 * (edges[:-1] + edges[1:])
    x = (mid[:, None] + 0.5 * h[:, None] * t[None, :]).ravel()
    wx = (0.5 * h[:, None] * w[None, :]).ravel()
    return x, wx


def composite_gauss_integral(f, breakpoints, lo: float = -1.0, hi: float = 1.0,
                             tol: float = 1e-13, max_width: float = 0.25, max_panels: int = _MAX_PANELS) -> float:
    """Integrate ``f`` on ``[lo, hi]`` with panel-halving Gauss-Legendre.

    Panels never straddle a breakpoint. Raises :class:`QuadratureError`
    when successive halvings disagree by more than ``tol`` (relative to
    ``max(1, |I|)``) at the panel limit.
    """
    width = max_width
    prev = None
    while True:
        edges = _panels(np.asarray(breakpoints, float), lo, hi, width)
        x, w = _gauss_nodes(edges)
        val = float(np.dot(w, f(x)))
        if prev is not None and abs(val - prev) <= tol * max(1.0, abs(val)):
            return val
        if edges.size > max_panels:
            raise QuadratureError(
                f"integral not converged: last change {abs(val - prev):.3e} with {edges.size - 1} panels"
            )
        prev = val
        width /= 2


@dataclass
class FourierCoefficients:
    """Coefficients ``a_0`` and ``(a_k, b_k)`` for ``k = 1..K``.

    ``provenance[k]`` is ``"analytic"`` or ``"quadrature"`` for index ``k``
    (entry 0 belongs to ``a_0``).
    """

    a0: float
    a: np.ndarray
    b: np.ndarray
    provenance: tuple = ()
    signal: Signal | None = field(default=None, repr=False)

    @property
    def K(self) -> int:
        return int(self.a.size)

    @property
    def k(self) -> np.ndarray:
        return np.arange(1, self.K + 1)

    @property
    def energies(self) -> np.ndarray:
        """Block energies ``e_k = a_k^2 + b_k^2``."""
        return self.a ** 2 + self.b ** 2

    def parseval_sum(self) -> float:
        return float(self.a0 ** 2 + np.sum(self.energies))

    def parseval_partial_sums(self) -> np.ndarray:
        """``a_0^2 + sum_{k<=K'} e_k`` for ``K' = 0..K``."""
        return self.a0 ** 2 + np.concatenate([[0.0], np.cumsum(self.energies)])

    def __add__(self, other: "FourierCoefficients") -> "FourierCoefficients":
        if self.K != other.K:
            raise ValueError("truncation orders differ")
        prov = tuple(
            "analytic" if p == q == "analytic" else "quadrature"
            for p, q in zip(self.provenance, other.provenance)
        )
        return FourierCoefficients(self.a0 + other.a0, self.a + other.a, self.b + other.b, prov)


def _analytic(g: Signal, K: int) -> FourierCoefficients:
    I = g.pp.periodic_fourier_integrals(np.arange(1, K + 1))
    a0 = g.pp.integral() / sqrt(2.0)
    return FourierCoefficients(a0, I.real.copy(), -I.imag, ("analytic",) * (K + 1), g)


def _exp_sums(x, fw, K, block: int = 64):
    """``S_k = sum_j fw_j exp(-1j k pi x_j)`` for ``k = 1..K``.

    Powers of ``exp(-1j pi x)`` are built by repeated multiplication and
    restarted from an exact exponential every ``block`` frequencies, which
    keeps the rounding drift at ``block`` ulps.
    """
    z = np.exp(-1j * np.pi * x)
    out = np.empty(K, dtype=complex)
    for s in range(0, K, block):
        nb = min(block, K - s)
        M = np.empty((nb, x.size), dtype=complex)
        M[0] = np.exp(-1j * np.pi * (s + 1) * x)
        for i in range(1, nb):
            np.multiply(M[i - 1], z, out=M[i])
        out[s:s + nb] = M @ fw
    return out


def _quadrature(g: Signal, K: int, tol: float) -> FourierCoefficients:
    width = min(0.25, 2.0 / K)  # one period of the top mode per panel -> 20 nodes
    prev = None
    while True:
        edges = _panels(g.breakpoints, -1.0, 1.0, width)
        x, w = _gauss_nodes(edges)
        fw = g(x) * w
        S = _exp_sums(x, fw, K)
        a, b = S.real.copy(), -S.imag
        a0 = fw.sum() / sqrt(2.0)
        cur = np.concatenate([[a0], a, b])
        if prev is not None:
            err = float(np.max(np.abs(cur - prev)))
            if err <= tol:
                break
            if edges.size > _MAX_PANELS // 64:
                raise QuadratureError(
                    f"Fourier quadrature not converged for {g.label}: change {err:.3e} "
                    f"with {edges.size - 1} panels (tol {tol:.1e})"
                )
        prev = cur
        width /= 2
    return FourierCoefficients(a0, a, b, ("quadrature",) * (K + 1), g)


def coefficients(g: Signal, K: int, method: str = "auto", tol: float = 1e-12) -> FourierCoefficients:
    """Fourier coefficients of ``g`` up to frequency ``K``.

    Parameters
    ----------
    g : Signal
    K : int
        Truncation frequency, at least 1.
    method : {"auto", "analytic", "quadrature"}
        ``"auto"`` integrates piecewise polynomial signals in closed form and
        falls back to adaptive composite Gauss-Legendre quadrature (20 nodes
        per period of the top mode, panels halved until the change is below
        ``tol``) for everything else.
    """
    K = int(K)
    if K < 1:
        raise ValueError("K must be at least 1")
    if method not in ("auto", "analytic", "quadrature"):
        raise ValueError(f"unknown method {method!r}")
    if g.parts is not None:
        out = None
        for p in g.parts:
            c = coefficients(p, K, method, tol)
            out = c if out is None else out + c
        out.signal = g
        return out
    if g.pp is not None and method != "quadrature":
        return _analytic(g, K)
    if method == "analytic":
        raise TypeError(f"no closed form for {g.label}")
    return _quadrature(g, K, tol)


def hws_classify(g: Signal, tol: float | None = None, n_samples: int = 1000) -> str:
    """Classify ``g`` as ``"odd"``, ``"even"`` or ``"none"``.

    Odd means ``g(x) = -g(x + 1)`` and even ``g(x) = g(x + 1)`` on (-1, 0),
    checked on ``n_samples`` midpoints plus every breakpoint (both one-sided
    limits). Default tolerance is 1e-9 for piecewise polynomial signals and
    1e-6 otherwise. A zero signal is reported as odd.
    """
    if tol is None:
        tol = 1e-9 if g.is_piecewise else 1e-6
    if tol <= 0:
        raise ValueError("tol must be positive")
    bp = np.concatenate([g.breakpoints, g.breakpoints - 1.0])
    x = np.concatenate([(np.arange(n_samples) + 0.5) / n_samples - 1.0, bp[(bp >= -1.0) & (bp < 0.0)]])
    sides = ("right", "left") if g.is_piecewise else ("right",)
    lhs = [g(x, side=s) for s in sides]
    rhs = [g(x + 1.0, side=s) for s in sides]
    if max(np.max(np.abs(u + v)) for u, v in zip(lhs, rhs)) <= tol:
        return "odd"
    if max(np.max(np.abs(u - v)) for u, v in zip(lhs, rhs)) <= tol:
        return "even"
    return "none"


@dataclass
class HwsParts:
    """Even/odd half-wave split of a coefficient sequence.

    ``even_a[k-1] = a_{2k}``, ``odd_a[k-1] = a_{2k-1}`` and likewise for
    ``b``; ``a0`` belongs to the even part.
    """

    a0: float
    even_a: np.ndarray
    even_b: np.ndarray
    odd_a: np.ndarray
    odd_b: np.ndarray
    K: int
    signal: Signal | None = field(default=None, repr=False)

    @property
    def even_energies(self) -> np.ndarray:
        return self.even_a ** 2 + self.even_b ** 2

    @property
    def odd_energies(self) -> np.ndarray:
        return self.odd_a ** 2 + self.odd_b ** 2

    def reassemble(self) -> FourierCoefficients:
        a = np.empty(self.K)
        b = np.empty(self.K)
        a[1::2], b[1::2] = self.even_a, self.even_b
        a[0::2], b[0::2] = self.odd_a, self.odd_b
        return FourierCoefficients(self.a0, a, b, (), self.signal)


def hws_split(c: FourierCoefficients) -> HwsParts:
    """Split into the even (``a_0`` and even ``k``) and odd (odd ``k``) parts."""
    return HwsParts(
        c.a0, c.a[1::2].copy(), c.b[1::2].copy(), c.a[0::2].copy(), c.b[0::2].copy(), c.K, c.signal
    )


@dataclass
class SobolevDiagnostic:
    """Partial sums of ``sum_k (1 + k^2)^r e_k`` with a growth estimate.

    ``growth`` is the slope of ``log2`` of the dyadic block sums over the
    last few complete blocks: clearly negative means the series behaves
    like a convergent one, near zero or positive means it keeps growing.
    """

    r: float
    partial_sums: np.ndarray
    block_sums: np.ndarray
    growth: float
    verdict: str


def sobolev_tail_diagnostic(c: FourierCoefficients, r: float, n_blocks: int = 4) -> SobolevDiagnostic:
    """Weighted Parseval partial sums for judging membership in H^r.

    ``partial_sums[k]`` includes ``a_0^2`` and all modes up to ``k``. A
    finite ``K`` cannot decide membership, so the verdict is only
    ``"bounded"``, ``"divergent"`` or ``"inconclusive"``.
    """
    if r < 0:
        raise ValueError("r must be nonnegative")
    k = c.k.astype(float)
    terms = (1.0 + k ** 2) ** r * c.energies
    partial = c.a0 ** 2 + np.concatenate([[0.0], np.cumsum(terms)])
    nb = int(np.floor(np.log2(c.K + 1)))
    blocks = np.array([terms[(1 << j) - 1: (1 << (j + 1)) - 1].sum() for j in range(nb)])
    use = blocks[-n_blocks:]
    growth = float("nan")
    verdict = "inconclusive"
    if use.size >= 2 and np.all(use > 0):
        growth = float(np.polyfit(np.arange(use.size), np.log2(use), 1)[0])
        if growth < -0.25:
            verdict = "bounded"
        elif growth > -0.1:
            verdict = "divergent"
    elif use.size >= 2 and np.all(use == 0):
        growth, verdict = float("-inf"), "bounded"
    return SobolevDiagnostic(float(r), partial, blocks, growth, verdict)

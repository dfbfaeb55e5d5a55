"""Analytic N-widths of the shift manifold ``{g(. - mu) : mu in [0, 1]}``.

For a half-wave symmetric datum the kernel operator of the snapshot map is
diagonal in the trigonometric basis. Frequency block ``k`` carries the
eigenvalue ``lambda_k = e_k / 4`` twice (``e_k = a_k^2 + b_k^2``), and the
even part adds the constant mode ``lambda_const = a_0^2 / 2``, which equals
``(int_0^1 g)^2``. With the flattened, nonincreasing list ``lam~``::

    delta_N^2 = sum_{i > N} lam~_i

and ``d_N = delta_N`` whenever the first ``N`` entries hold whole blocks.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from math import e as _E, pi, sqrt
from typing import Sequence

import numpy as np
from scipy.special import zeta

from .fourier import FourierCoefficients, HwsParts, coefficients, composite_gauss_integral, hws_split
from .signals import Signal
from .special import trigamma

__all__ = [
    "EigenSpectrum",
    "SortedSpectrum",
    "WidthRow",
    "WidthCurve",
    "spectrum",
    "signal_spectrum",
    "sort_spectrum",
    "exact_width",
    "exact_width_curve",
    "jump_width_trigamma",
    "gm_eigenvalue",
    "gm_bounds",
    "nonhws_bound",
    "nonhws_corollary_bound",
    "decay_bounds",
    "shift_block_energies",
    "EXP_D",
    "EXP_K",
]

EXP_D = pi * _E / 2
EXP_K = sqrt(32 * _E / pi)

_PARITIES = ("even", "odd", "merged")


def gm_eigenvalue(m: int, k):
    """Block eigenvalue ``4 ((2k - 1) pi)^(-2(m+1))`` of ``g_m`` (``m = 0``
    is the jump)."""
    k = np.asarray(k, dtype=float)
    return 4.0 * ((2 * k - 1) * pi) ** (-2.0 * (m + 1))


def _gm_tail_mass(m: int, n_blocks: int) -> float:
    """``2 sum_{k > n_blocks} lambda_k`` for ``g_m`` via the Hurwitz zeta."""
    s = 2.0 * (m + 1)
    return float(8.0 * pi ** (-s) * 2.0 ** (-s) * zeta(s, n_blocks + 0.5))


def _closed_form_order(g: Signal | None):
    if g is None:
        return None
    if g.kind == "jump":
        return 0
    if g.kind == "gm":
        return int(g.params[0])
    return None


def _parity_part_norm_sq(g: Signal, parity: str) -> float:
    """``||g^par||^2`` on the full cell, ``g^par(x) = (g(x) +- g(x + 1)) / 2``."""
    sgn = 1.0 if parity == "even" else -1.0
    if parity == "merged":
        return g.norm_sq()
    if g.is_piecewise:
        pps = [p.pp for p in g.parts] if g.parts is not None else [g.pp]
        pp = pps[0]
        for q in pps[1:]:
            pp = pp + q
        part = 0.5 * (pp + sgn * pp.shifted(-1.0))
        return part.norm_sq()
    return composite_gauss_integral(lambda x: (0.5 * (g(x) + sgn * g(x + 1.0))) ** 2, np.concatenate(
        [g.breakpoints, g.breakpoints - 1.0, g.breakpoints + 1.0]))


@dataclass
class EigenSpectrum:
    """Block spectrum of one parity (or both, ``"merged"``).

    Attributes
    ----------
    freqs : ndarray
        Frequency ``k`` of each stored block (in ``cos(k pi x)``).
    energies : ndarray
        Block energies ``e_k``.
    lam_const : float or None
        Constant-mode eigenvalue, present for even and merged parity.
    remainder : float
        Flattened eigenvalue mass ``2 sum lambda`` of all blocks beyond the
        stored ones.
    remainder_method : str
        ``"closed"`` (zeta tail), ``"parseval"`` (exact norm minus stored
        mass) or ``"none"``.
    remainder_uncertainty : float
        Absolute uncertainty of ``remainder``; rounding level for
        ``"parseval"``.
    """

    parity: str
    freqs: np.ndarray
    energies: np.ndarray
    lam_const: float | None = None
    remainder: float = 0.0
    remainder_method: str = "none"
    remainder_uncertainty: float = 0.0
    components: tuple = field(default=(), repr=False)

    @property
    def lam(self) -> np.ndarray:
        return self.energies / 4.0

    def total_mass(self) -> float:
        """``2 sum lambda + lambda_const``, i.e. the mean squared snapshot norm."""
        return float(2 * np.sum(self.lam) + (self.lam_const or 0.0) + self.remainder)


def spectrum(parts: HwsParts, parity: str, *, remainder: str = "auto") -> EigenSpectrum:
    """Eigen-spectrum of one HWS part of a coefficient sequence.

    Parameters
    ----------
    parts : HwsParts
    parity : {"even", "odd", "merged"}
        ``"merged"`` pools both parities as used by the non-HWS bound.
    remainder : {"auto", "closed", "parseval", "none"}
        How the mass beyond the stored blocks is obtained. ``"auto"`` picks
        the zeta tail for the jump and ``g_m`` and the Parseval remainder
        (exact norm minus stored mass) when the signal is known.
    """
    if parity not in _PARITIES:
        raise ValueError(f"parity must be one of {_PARITIES}")
    g = parts.signal
    if parity == "merged":
        ev = spectrum(parts, "even", remainder=remainder)
        od = spectrum(parts, "odd", remainder=remainder)
        freqs = np.concatenate([ev.freqs, od.freqs])
        order = np.argsort(freqs, kind="stable")
        return EigenSpectrum(
            "merged", freqs[order], np.concatenate([ev.energies, od.energies])[order], ev.lam_const,
            ev.remainder + od.remainder, f"{ev.remainder_method}+{od.remainder_method}",
            ev.remainder_uncertainty + od.remainder_uncertainty, (ev, od),
        )
    if parity == "odd":
        freqs = 2 * np.arange(1, parts.odd_a.size + 1) - 1
        en = parts.odd_energies
        lam_const = None
    else:
        freqs = 2 * np.arange(1, parts.even_a.size + 1)
        en = parts.even_energies
        lam_const = parts.a0 ** 2 / 2.0
    m = _closed_form_order(g)
    if remainder == "auto":
        remainder = "closed" if m is not None else ("parseval" if g is not None else "none")
    if remainder == "closed":
        if m is None:
            raise ValueError("closed-form tail only for the jump and g_m")
        if parity == "odd":
            kb = np.arange(1, freqs.size + 1)
            en = 4.0 * gm_eigenvalue(m, kb)
            rem = _gm_tail_mass(m, freqs.size)
        else:
            en = np.zeros_like(en)
            lam_const = 0.0
            rem = 0.0
        return EigenSpectrum(parity, freqs, en, lam_const, rem, "closed", 0.0)
    if remainder == "parseval":
        mass = 0.5 * _parity_part_norm_sq(g, parity)
        stored = 0.5 * float(np.sum(en)) + (lam_const or 0.0)
        unc = 64 * np.finfo(float).eps * max(mass, 1e-300) * sqrt(max(freqs.size, 1))
        return EigenSpectrum(parity, freqs, en, lam_const, max(mass - stored, 0.0), "parseval", unc)
    if remainder == "none":
        return EigenSpectrum(parity, freqs, en, lam_const, 0.0, "none", 0.0)
    raise ValueError(f"unknown remainder mode {remainder!r}")


def signal_spectrum(g: Signal, parity: str, K: int = 8192, **kw) -> EigenSpectrum:
    """Shortcut: coefficients up to frequency ``K``, split, spectrum."""
    return spectrum(hws_split(coefficients(g, K)), parity, **kw)


@dataclass
class SortedSpectrum:
    """Spectrum with blocks sorted by nonincreasing energy.

    ``perm`` lists stored block indices in sorted order (ties by ascending
    frequency). ``flat`` is the flattened nonincreasing eigenvalue list with
    each block twice and the constant mode once; ``block_of[i]`` is the
    frequency of entry ``i`` (0 for the constant mode).
    """

    spectrum: EigenSpectrum
    perm: np.ndarray
    flat: np.ndarray
    block_of: np.ndarray
    _tails: np.ndarray = field(repr=False, default=None)

    def __post_init__(self):
        # tails[N] = sum_{i >= N} flat[i] + remainder, accumulated from the small end
        rev = np.cumsum(self.flat[::-1])[::-1]
        self._tails = np.concatenate([rev, [0.0]]) + self.spectrum.remainder

    @property
    def sigma(self) -> np.ndarray:
        """Sorted block frequencies."""
        return self.spectrum.freqs[self.perm]

    @property
    def n_stored(self) -> int:
        return int(self.flat.size)

    def tail(self, N) -> np.ndarray:
        """``sum_{i > N} lam~_i`` (1-based ``i``) for stored ``N``."""
        N = np.asarray(N)
        if np.any(N < 0) or np.any(N > self.n_stored):
            raise ValueError(f"N outside the stored range 0..{self.n_stored}")
        return self._tails[N]

    def certified(self, N) -> np.ndarray:
        """True where the sorted prefix of length ``N`` cannot change when
        unstored blocks are added (each unstored eigenvalue is at most half
        the remainder mass)."""
        N = np.atleast_1d(np.asarray(N))
        bound = 0.5 * (self.spectrum.remainder + self.spectrum.remainder_uncertainty)
        ok = np.ones(N.size, dtype=bool)
        pos = N > 0
        ok[pos] = self.flat[N[pos] - 1] >= bound
        ok &= N < self.n_stored
        return ok

    def matched(self, N) -> np.ndarray:
        """True where the first ``N`` entries hold whole blocks."""
        N = np.atleast_1d(np.asarray(N))
        out = np.ones(N.size, dtype=bool)
        inner = (N > 0) & (N < self.n_stored)
        out[inner] = self.block_of[N[inner] - 1] != self.block_of[N[inner]]
        return out


def sort_spectrum(s: EigenSpectrum) -> SortedSpectrum:
    """Sort blocks by nonincreasing energy, ties by ascending frequency.

    The constant mode is placed by value among the block eigenvalues and
    precedes blocks of equal eigenvalue.
    """
    by_freq = np.argsort(s.freqs, kind="stable")
    perm = by_freq[np.argsort(-s.energies[by_freq], kind="stable")]
    lam = s.energies[perm] / 4.0
    flat = np.repeat(lam, 2)
    block_of = np.repeat(s.freqs[perm], 2)
    if s.lam_const is not None:
        pos = int(np.searchsorted(-flat, -s.lam_const, side="left"))
        flat = np.insert(flat, pos, s.lam_const)
        block_of = np.insert(block_of, pos, 0)
    return SortedSpectrum(s, perm, flat, block_of)


@dataclass
class WidthRow:
    N: int
    delta: float
    d_lo: float
    d_hi: float
    exact: bool
    method: str


@dataclass
class WidthCurve:
    """Rows ``(N, delta_N, d_N bracket, exact flag, method)``."""

    rows: list

    @property
    def N(self) -> np.ndarray:
        return np.array([r.N for r in self.rows], dtype=int)

    @property
    def delta(self) -> np.ndarray:
        return np.array([r.delta for r in self.rows])

    @property
    def d_lo(self) -> np.ndarray:
        return np.array([r.d_lo for r in self.rows])

    @property
    def d_hi(self) -> np.ndarray:
        return np.array([r.d_hi for r in self.rows])

    def window(self, lo: int, hi: int) -> "WidthCurve":
        return WidthCurve([r for r in self.rows if lo <= r.N <= hi])

    def to_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["N", "delta_N", "d_N_lo", "d_N_hi", "exact", "method"])
            for r in self.rows:
                w.writerow([r.N, repr(float(r.delta)), repr(float(r.d_lo)), repr(float(r.d_hi)),
                            int(r.exact), r.method])

    @classmethod
    def from_deltas(cls, N: Sequence[int], delta: Sequence[float], method: str) -> "WidthCurve":
        nan = float("nan")
        return cls([WidthRow(int(n), float(d), nan, nan, False, method) for n, d in zip(N, delta)])


def exact_width_curve(s: SortedSpectrum, n_max: int) -> WidthCurve:
    """Rows ``N = 0..n_max`` of :func:`exact_width`."""
    if s.spectrum.parity == "merged":
        raise ValueError("exact widths need a pure-parity spectrum; use nonhws_bound")
    n_max = int(n_max)
    if n_max >= s.n_stored:
        raise ValueError(f"n_max={n_max} needs more stored blocks (have {s.n_stored} eigenvalues)")
    N = np.arange(n_max + 1)
    delta = np.sqrt(np.maximum(s.tail(N), 0.0))
    matched = s.matched(N)
    cert = s.certified(N)
    tag = s.spectrum.remainder_method
    rows = []
    last = 0
    for n in N:
        if matched[n]:
            last = n
            rows.append(WidthRow(int(n), delta[n], delta[n], delta[n], True, f"exact:{tag}"))
        else:
            rows.append(WidthRow(int(n), delta[n], delta[n], delta[last], False, f"bracket:{tag}"))
        if not cert[n]:
            rows[-1].method += ":uncertified"
    return WidthCurve(rows)


def exact_width(s: SortedSpectrum, N: int) -> WidthRow:
    """Exact ``delta_N`` and ``d_N`` (or a bracket for ``d_N`` when the
    first ``N`` sorted eigenvalues split a block)."""
    return exact_width_curve(s, N).rows[-1]


def jump_width_trigamma(N):
    """``delta_N`` of the jump from the closed trigamma form::

        delta_N^2 = (psi1(floor(N/2) + 1/2) + psi1(floor((N+1)/2) + 1/2)) / pi^2
    """
    N = np.asarray(N)
    if np.any(N < 0):
        raise ValueError("N must be nonnegative")
    d2 = (trigamma(N // 2 + 0.5) + trigamma((N + 1) // 2 + 0.5)) / pi ** 2
    return np.sqrt(d2)


def gm_bounds(m: int, N):
    """Lower and upper bounds on ``delta_N(g_m)``::

        lower = 2 (2m+1)^(-1/2) pi^(-(m+1)) (N+1)^(-(2m+1)/2)
        upper = sqrt(8) pi^(-(m+1)) N^(-(2m+1)/2)
    """
    N = np.asarray(N, dtype=float)
    if np.any(N < 1):
        raise ValueError("N must be at least 1")
    p = (2 * m + 1) / 2
    lower = 2.0 / sqrt(2 * m + 1) * pi ** (-(m + 1)) * (N + 1) ** (-p)
    upper = sqrt(8.0) * pi ** (-(m + 1)) * N ** (-p)
    return lower, upper


def nonhws_bound(merged: SortedSpectrum, N):
    """Upper bound ``sqrt(2 sum_{i > N} lam~_i)`` on ``d_N`` from the merged
    (both parities) sorted spectrum."""
    return np.sqrt(2.0 * np.maximum(merged.tail(N), 0.0))


def nonhws_corollary_bound(merged: SortedSpectrum, N):
    """Bound on ``d_{2N}`` with ``N`` directions per parity::

        d_{2N}^2 <= 2 (sum_{i > N} lam~even_i + sum_{i > N} lam~odd_i)

    each parity sorted on its own.
    """
    if not merged.spectrum.components:
        raise ValueError("need a merged spectrum")
    ev, od = (sort_spectrum(c) for c in merged.spectrum.components)
    return np.sqrt(2.0 * np.maximum(ev.tail(N) + od.tail(N), 0.0))


def decay_bounds(kind: str, N, *, r: float | None = None, c: float | None = None,
                 C: float | None = None):
    """Generic decay bounds on ``d_N``.

    ``kind="polynomial"`` gives ``c N^(-r)``; ``kind="exponential"`` gives
    ``C K d^(-N)`` with ``d = pi e / 2`` and ``K = sqrt(32 e / pi)``.
    """
    N = np.asarray(N, dtype=float)
    if kind == "polynomial":
        if r is None or c is None or r <= 0:
            raise ValueError("polynomial bound needs r > 0 and c")
        return c * N ** (-r)
    if kind == "exponential":
        if C is None or C < 0:
            raise ValueError("exponential bound needs C >= 0")
        return C * EXP_K * EXP_D ** (-N)
    raise ValueError(f"unknown bound kind {kind!r}")


def shift_block_energies(g: Signal, k: int, mus) -> np.ndarray:
    """``||Q_k u_mu||^2`` on (0, 1) for each ``mu``.

    ``Q_k`` projects onto ``sqrt(2) cos(k pi x)``, ``sqrt(2) sin(k pi x)``
    restricted to (0, 1); the value is ``2 |int_{-mu}^{1-mu} g e^{-i k pi t} dt|^2``.
    For an HWS datum of matching parity it equals ``e_k / 2`` for every ``mu``.
    """
    mus = np.atleast_1d(np.asarray(mus, dtype=float))
    out = np.empty(mus.size)
    for i, mu in enumerate(mus):
        if g.pp is not None:
            I = g.pp.fourier_integrals([k * pi], -mu, 1.0 - mu)[0]
        else:
            bps = np.concatenate([g.breakpoints, g.breakpoints - 2.0])
            re = composite_gauss_integral(lambda t: g(t) * np.cos(k * pi * t), bps, -mu, 1.0 - mu)
            im = composite_gauss_integral(lambda t: g(t) * np.sin(k * pi * t), bps, -mu, 1.0 - mu)
            I = complex(re, -im)
        out[i] = 2.0 * abs(I) ** 2
    return out

"""Exact piecewise polynomials on the periodic cell [-1, 1).

Each piece ``[b_j, b_{j+1})`` stores coefficients in the normalized local
coordinate ``s = (x - b_j) / h_j`` with ``s`` in ``[0, 1]``. This keeps
coefficients of steep ramps O(1) and makes integration, composition with
affine maps and Fourier moments well conditioned.
"""

from __future__ import annotations

from typing import Callable, Sequence

import numpy as np
from numpy.polynomial import polynomial as P

__all__ = ["PiecewisePoly", "periodic_reduce"]

PERIOD = 2.0
_BREAK_TOL = 1e-13


def periodic_reduce(x):
    """Map ``x`` into ``[-1, 1)`` by subtracting multiples of 2."""
    x = np.asarray(x, dtype=float)
    return x - PERIOD * np.floor((x + 1.0) / PERIOD)


def _compose_affine(coef, a0: float, a1: float) -> np.ndarray:
    """Coefficients of ``p(a0 + a1 s)`` given those of ``p``."""
    out = np.zeros(1)
    lin = np.array([a0, a1])
    for c in coef[::-1]:
        out = P.polyadd(P.polymul(out, lin), [c])
    return np.trim_zeros(out, "b") if np.any(out) else np.zeros(1)


def _unique_breaks(points) -> np.ndarray:
    pts = np.sort(np.asarray(points, dtype=float))
    keep = [pts[0]]
    for p in pts[1:]:
        if p - keep[-1] > _BREAK_TOL:
            keep.append(p)
    return np.array(keep)


def _moments(a: np.ndarray, deg: int) -> np.ndarray:
    """``M[i, k] = int_0^1 s^i exp(-1j a_k s) ds`` for i = 0..deg.

    Forward recurrence where it is stable (|a| >= deg), power series
    otherwise.
    """
    a = np.asarray(a, dtype=float)
    M = np.empty((deg + 1, a.size), dtype=complex)
    big = np.abs(a) >= max(deg, 1)
    if np.any(big):
        ab = a[big]
        ia = 1j * ab
        e = np.exp(-ia)
        m = (1.0 - e) / ia
        M[0, big] = m
        for i in range(1, deg + 1):
            m = (i * m - e) / ia
            M[i, big] = m
    small = ~big
    if np.any(small):
        z = -1j * a[small]
        # terms z^n / (n! (i + n + 1)); |z| < max(deg, 1) so 60 terms is plenty
        nmax = 40 + 2 * deg
        term = np.ones_like(z)
        acc = np.zeros((deg + 1, z.size), dtype=complex)
        idx = np.arange(deg + 1)[:, None]
        for n in range(nmax):
            acc += term[None, :] / (idx + n + 1)
            term = term * z / (n + 1)
        M[:, small] = acc
    return M


class PiecewisePoly:
    """Piecewise polynomial on ``[-1, 1]`` with period-2 extension.

    Parameters
    ----------
    breakpoints : array_like
        Strictly increasing, starting at -1 and ending at 1.
    coeffs : sequence of array_like
        One coefficient list per piece, lowest order first, in the local
        coordinate ``s = (x - b_j) / (b_{j+1} - b_j)``.
    """

    def __init__(self, breakpoints, coeffs: Sequence):
        b = np.array(breakpoints, dtype=float)
        if b.ndim != 1 or b.size < 2:
            raise ValueError("need at least two breakpoints")
        if abs(b[0] + 1.0) > 1e-12 or abs(b[-1] - 1.0) > 1e-12:
            raise ValueError("breakpoints must cover [-1, 1]")
        if np.any(np.diff(b) <= 0):
            raise ValueError("breakpoints must be strictly increasing")
        if len(coeffs) != b.size - 1:
            raise ValueError("need one coefficient list per piece")
        b[0], b[-1] = -1.0, 1.0
        self.breakpoints = b
        self.breakpoints.flags.writeable = False
        cs = []
        for c in coeffs:
            c = np.atleast_1d(np.asarray(c, dtype=float)).copy()
            if c.size == 0:
                raise ValueError("empty coefficient list")
            c.flags.writeable = False
            cs.append(c)
        self.coeffs = tuple(cs)

    # -- construction helpers ------------------------------------------------
    @classmethod
    def constant(cls, value: float) -> "PiecewisePoly":
        return cls([-1.0, 1.0], [[value]])

    @classmethod
    def from_global(cls, breakpoints, global_coeffs) -> "PiecewisePoly":
        """Build from coefficients in the global variable ``x`` per piece."""
        b = np.asarray(breakpoints, dtype=float)
        local = [
            _compose_affine(np.asarray(c, float), b[j], b[j + 1] - b[j])
            for j, c in enumerate(global_coeffs)
        ]
        return cls(b, local)

    @classmethod
    def pullback(cls, breakpoints, rule: Callable) -> "PiecewisePoly":
        """Assemble from affine pullbacks of other piecewise polynomials.

        ``rule(x_mid)`` returns a list of ``(scale, pp, alpha, beta)`` terms
        and an additive constant; on the piece containing ``x_mid`` the result
        is ``const + sum scale * pp(alpha * x + beta)``. Each image
        ``alpha * x + beta`` must stay inside one piece of ``pp`` (after
        periodic reduction), which holds when ``breakpoints`` contains all
        preimages of the source breakpoints.
        """
        b = _unique_breaks(breakpoints)
        out = []
        for j in range(b.size - 1):
            lo, hi = b[j], b[j + 1]
            terms, const = rule(0.5 * (lo + hi))
            acc = np.array([float(const)])
            for scale, pp, alpha, beta in terms:
                ym = alpha * 0.5 * (lo + hi) + beta
                shift = ym - periodic_reduce(ym)
                idx = pp._piece_index(periodic_reduce(ym))
                bj = pp.breakpoints[idx]
                hj = pp.breakpoints[idx + 1] - bj
                # s_src = (alpha*(lo + H s) + beta - shift - bj) / hj
                a0 = (alpha * lo + beta - shift - bj) / hj
                a1 = alpha * (hi - lo) / hj
                acc = P.polyadd(acc, scale * _compose_affine(pp.coeffs[idx], a0, a1))
            out.append(acc)
        return cls(b, out)

    # -- basic queries -------------------------------------------------------
    @property
    def n_pieces(self) -> int:
        return len(self.coeffs)

    @property
    def widths(self) -> np.ndarray:
        return np.diff(self.breakpoints)

    @property
    def degree(self) -> int:
        return max(c.size for c in self.coeffs) - 1

    def _piece_index(self, xr):
        idx = np.searchsorted(self.breakpoints, xr, side="right") - 1
        return np.clip(idx, 0, self.n_pieces - 1)

    def _eval_pieces(self, xr, idx, deriv: int = 0):
        b = self.breakpoints
        h = np.diff(b)
        s = (xr - b[idx]) / h[idx]
        out = np.zeros_like(s)
        for j in np.unique(idx):
            mask = idx == j
            c = self.coeffs[j]
            if deriv:
                c = P.polyder(c, deriv) / h[j] ** deriv if c.size > deriv else np.zeros(1)
            out[mask] = P.polyval(s[mask], c)
        return out

    def __call__(self, x, side: str = "right", deriv: int = 0):
        """Evaluate with periodic extension.

        ``side="right"`` returns right limits at breakpoints; ``"left"`` the
        left limits and ``"mid"`` their average.
        """
        x = np.asarray(x, dtype=float)
        xr = periodic_reduce(x).ravel()
        right = self._eval_pieces(xr, self._piece_index(xr), deriv)
        if side == "right":
            return right.reshape(x.shape)
        # left limit: evaluate the piece to the left at its right end
        idx_l = np.searchsorted(self.breakpoints, xr, side="left") - 1
        on_break = np.isin(xr, self.breakpoints)
        left = right.copy()
        if np.any(on_break):
            il = np.where(idx_l < 0, self.n_pieces - 1, idx_l)[on_break]
            xs = xr[on_break]
            xs = np.where(idx_l[on_break] < 0, 1.0, xs)
            left[on_break] = self._eval_pieces(xs, il, deriv)
        if side == "left":
            return left.reshape(x.shape)
        if side == "mid":
            return (0.5 * (left + right)).reshape(x.shape)
        raise ValueError(f"unknown side {side!r}")

    def one_sided_jumps(self, deriv: int = 0) -> np.ndarray:
        """Jump ``f(b+) - f(b-)`` of the ``deriv``-th derivative at every
        breakpoint in ``[-1, 1)`` (periodic wrap at -1)."""
        b = self.breakpoints[:-1]
        return self(b, "right", deriv) - self(b, "left", deriv)

    # -- calculus ------------------------------------------------------------
    def derivative(self) -> "PiecewisePoly":
        h = self.widths
        return PiecewisePoly(
            self.breakpoints,
            [P.polyder(c) / h[j] if c.size > 1 else np.zeros(1) for j, c in enumerate(self.coeffs)],
        )

    def piece_integrals(self) -> np.ndarray:
        h = self.widths
        return np.array([h[j] * np.sum(c / np.arange(1, c.size + 1)) for j, c in enumerate(self.coeffs)])

    def integral(self, lo: float = -1.0, hi: float = 1.0) -> float:
        """Exact integral over ``[lo, hi]`` (any real bounds, periodic)."""
        F = self.antiderivative_values
        return float(F(hi) - F(lo))

    def antiderivative_values(self, x):
        """``G(x) = int_{-1}^x f`` continued with drift beyond the cell."""
        x = np.asarray(x, dtype=float)
        xf = x.ravel()
        xr = periodic_reduce(xf)
        turns = np.round((xf - xr) / PERIOD)
        cum = np.concatenate([[0.0], np.cumsum(self.piece_integrals())])
        idx = self._piece_index(xr)
        h = self.widths
        s = (xr - self.breakpoints[idx]) / h[idx]
        partial = np.zeros_like(s)
        for j in np.unique(idx):
            mask = idx == j
            partial[mask] = h[j] * P.polyval(s[mask], P.polyint(self.coeffs[j]))
        return (cum[idx] + partial + turns * cum[-1]).reshape(x.shape)

    def antiderivative(self, origin: float = -1.0) -> "PiecewisePoly":
        """Piecewise antiderivative ``int_origin^x f`` on the cell (not
        periodic unless the mean vanishes)."""
        h = self.widths
        out, acc = [], 0.0
        for j, c in enumerate(self.coeffs):
            ci = h[j] * P.polyint(c)
            ci[0] += acc
            out.append(ci)
            acc = float(P.polyval(1.0, ci))
        pp = PiecewisePoly(self.breakpoints, out)
        if origin != -1.0:
            shift = float(pp(np.array([origin]))[0]) if origin < 1.0 else acc
            pp = pp + (-shift)
        return pp

    def norm_sq(self) -> float:
        """Exact ``int_{-1}^1 f^2``."""
        h = self.widths
        total = 0.0
        for j, c in enumerate(self.coeffs):
            sq = P.polymul(c, c)
            total += h[j] * float(np.sum(sq / np.arange(1, sq.size + 1)))
        return total

    def fourier_integrals(self, omega, lo: float = -1.0, hi: float = 1.0) -> np.ndarray:
        """Exact ``int_lo^hi f(x) exp(-1j omega x) dx`` for each omega.

        ``[lo, hi]`` may be any interval of length at most 2; the periodic
        extension is used outside the cell.
        """
        omega = np.atleast_1d(np.asarray(omega, dtype=float))
        if hi - lo > PERIOD + 1e-12 or hi < lo:
            raise ValueError("interval must have length in [0, 2]")
        pp = self if (lo == -1.0 and hi == 1.0) else self._window(lo, hi)
        b = pp.breakpoints
        h = pp.widths
        offset = lo + 1.0 if not (lo == -1.0 and hi == 1.0) else 0.0
        total = np.zeros(omega.size, dtype=complex)
        for j, c in enumerate(pp.coeffs):
            if h[j] <= 0:
                continue
            left = b[j] + offset
            M = _moments(omega * h[j], c.size - 1)
            total += h[j] * np.exp(-1j * omega * left) * (c @ M)
        return total

    def jump_table(self, rtol: float = 1e-12) -> np.ndarray:
        """``J[d, j]``: jump of the d-th derivative at breakpoint ``j`` (in
        ``[-1, 1)``), with rounding-level jumps set to zero."""
        h = self.widths
        J = np.empty((self.degree + 1, self.n_pieces))
        for d in range(self.degree + 1):
            J[d] = self.one_sided_jumps(d)
            scale = max(
                float(np.max(np.abs(P.polyder(c, d)) if c.size > d else 0.0) / h[j] ** d)
                for j, c in enumerate(self.coeffs)
            )
            J[d][np.abs(J[d]) <= rtol * max(scale, 1e-300)] = 0.0
        return J

    def periodic_fourier_integrals(self, k) -> np.ndarray:
        """``int_{-1}^1 f(x) exp(-1j k pi x) dx`` for integers ``k >= 1``.

        Large frequencies use the terminating integration-by-parts sum
        ``sum_d sum_j J[d, j] exp(-1j w b_j) / (1j w)^(d+1)``, which is
        exact for integer ``k`` and free of the cancellation that limits
        the moment formula. Small frequencies use the moments.
        """
        k = np.atleast_1d(np.asarray(k))
        omega = np.pi * k.astype(float)
        out = np.empty(k.size, dtype=complex)
        cut = 4.0 * (self.degree + 1) / float(np.min(self.widths))
        big = omega >= cut
        if np.any(~big):
            out[~big] = self.fourier_integrals(omega[~big])
        if np.any(big):
            J = self.jump_table()
            w = omega[big]
            ph = np.exp(-1j * np.outer(w, self.breakpoints[:-1]))  # (nw, nb)
            acc = np.zeros(w.size, dtype=complex)
            iw = 1j * w
            for d in range(J.shape[0] - 1, -1, -1):
                acc = (acc + ph @ J[d]) / iw
            out[big] = acc
        return out

    def _window(self, lo: float, hi: float) -> "PiecewisePoly":
        """Re-express ``f`` on ``[lo, hi]`` as a piecewise poly on
        ``[-1, -1 + (hi - lo)]`` padded with zero up to 1."""
        length = hi - lo
        shift = lo + 1.0
        src = periodic_reduce(self.breakpoints[:-1] - shift)
        pts = [-1.0, 1.0, -1.0 + length]
        pts += [p for p in src if -1.0 < p < -1.0 + length]

        def rule(xm):
            if xm > -1.0 + length:
                return [], 0.0
            return [(1.0, self, 1.0, shift)], 0.0

        return PiecewisePoly.pullback(pts, rule)

    # -- algebra -------------------------------------------------------------
    def _binary(self, other: "PiecewisePoly", sign: float) -> "PiecewisePoly":
        pts = np.concatenate([self.breakpoints, other.breakpoints])
        return PiecewisePoly.pullback(
            pts, lambda xm: ([(1.0, self, 1.0, 0.0), (sign, other, 1.0, 0.0)], 0.0)
        )

    def __add__(self, other):
        if isinstance(other, PiecewisePoly):
            return self._binary(other, 1.0)
        other = float(other)
        return PiecewisePoly(self.breakpoints, [P.polyadd(c, [other]) for c in self.coeffs])

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, PiecewisePoly):
            return self._binary(other, -1.0)
        return self + (-float(other))

    def __mul__(self, scalar):
        scalar = float(scalar)
        return PiecewisePoly(self.breakpoints, [scalar * c for c in self.coeffs])

    __rmul__ = __mul__

    def __neg__(self):
        return self * -1.0

    def shifted(self, t: float) -> "PiecewisePoly":
        """Periodic shift ``x -> f(x - t)``."""
        pts = list(periodic_reduce(self.breakpoints[:-1] + t)) + [-1.0, 1.0]
        return PiecewisePoly.pullback(pts, lambda xm: ([(1.0, self, 1.0, -t)], 0.0))

    def box_convolve(self, width: float) -> "PiecewisePoly":
        """Periodic convolution with the unit-mass indicator of
        ``[-width/2, width/2]``; degree goes up by one."""
        if not width > 0:
            raise ValueError("width must be positive")
        if width >= PERIOD:
            raise ValueError("box wider than the period")
        half = 0.5 * width
        G = self.antiderivative()
        total = float(self.piece_integrals().sum())
        src = self.breakpoints[:-1]
        pts = list(periodic_reduce(src + half)) + list(periodic_reduce(src - half)) + [-1.0, 1.0]

        def rule(xm):
            up, dn = xm + half, xm - half
            # G(y) for y outside the cell carries the drift turns * total
            k_up = np.floor((up + 1.0) / PERIOD)
            k_dn = np.floor((dn + 1.0) / PERIOD)
            const = (k_up - k_dn) * total / width
            return [(1.0 / width, G, 1.0, half), (-1.0 / width, G, 1.0, -half)], const

        return PiecewisePoly.pullback(pts, rule)

    def simplify(self, tol: float = 1e-14) -> "PiecewisePoly":
        """Drop negligible top coefficients."""
        out = []
        for c in self.coeffs:
            scale = max(np.max(np.abs(c)), 1.0)
            nz = np.nonzero(np.abs(c) > tol * scale)[0]
            out.append(c[: nz[-1] + 1] if nz.size else np.zeros(1))
        return PiecewisePoly(self.breakpoints, out)

    def __repr__(self) -> str:
        return f"PiecewisePoly(pieces={self.n_pieces}, degree={self.degree})"

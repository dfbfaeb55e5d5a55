"""Snapshot matrices, POD widths and projection errors on midpoint grids.

Space and parameter both live on (0, 1) and are sampled at midpoints,
``x_i = (2i - 1) / (2 n)``. The midpoint rule turns the continuous
L2-average width into ``delta_N^2 ~ sum_{k > N} sigma_k^2 / (n_x n_mu)``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla

from .signals import BlockField2D, Signal
from .widths import WidthCurve

__all__ = [
    "SnapshotMatrix",
    "BasisMatrix",
    "SVDConvergenceError",
    "midpoint_grid",
    "snapshot_matrix",
    "snapshot_matrix_2d",
    "reduced_snapshot_matrix_2d",
    "singular_values",
    "pod_width_curve",
    "pod_widths",
    "basis_matrix",
    "projection_distances",
]


class SVDConvergenceError(RuntimeError):
    """The LAPACK singular value driver failed to converge."""


def midpoint_grid(n: int) -> np.ndarray:
    """Nodes ``(2i - 1) / (2n)``, ``i = 1..n``."""
    n = int(n)
    if n < 1:
        raise ValueError("n must be positive")
    return (2.0 * np.arange(1, n + 1) - 1.0) / (2.0 * n)


@dataclass
class SnapshotMatrix:
    """``values[i, j] = u_{mu_j}(x_i)``; ``weight`` is the quadrature
    weight of one entry in the double average (``1 / (n_x n_mu)`` in 1D)."""

    values: np.ndarray
    x: np.ndarray
    mu: np.ndarray
    weight: float
    y: np.ndarray | None = None

    @property
    def n_x(self) -> int:
        return int(self.x.size)

    @property
    def n_mu(self) -> int:
        return int(self.mu.size)

    @property
    def shape(self):
        return self.values.shape


def snapshot_matrix(g: Signal, n_x: int, n_mu: int | None = None, side: str = "right") -> SnapshotMatrix:
    """Sample ``X[i, j] = g(x_i - mu_j)`` on midpoint grids.

    ``side`` picks the one-sided value where ``x_i - mu_j`` hits a
    discontinuity (``"mid"`` averages the two limits).
    """
    n_mu = n_x if n_mu is None else n_mu
    x, mu = midpoint_grid(n_x), midpoint_grid(n_mu)
    X = g(x[:, None] - mu[None, :], side=side)
    return SnapshotMatrix(np.ascontiguousarray(X), x, mu, 1.0 / (n_x * n_mu))


def snapshot_matrix_2d(G: BlockField2D, n_x: int, n_y: int, n_mu: int) -> SnapshotMatrix:
    """Full 2D snapshot matrix. Row ``i + n_x * l`` holds ``(x_i, y_l)``,
    i.e. the field is flattened column-major with ``x`` running fastest."""
    x, y, mu = midpoint_grid(n_x), midpoint_grid(n_y), midpoint_grid(n_mu)
    A = G.x_values(x[:, None] - mu[None, :])  # (n_x, n_mu, nbx)
    C = G.y_factor_matrix(y)  # (nbx, n_y)
    X = np.einsum("ija,al->lij", A, C).reshape(n_y * n_x, n_mu)
    return SnapshotMatrix(X, x, mu, 1.0 / (n_x * n_y * n_mu), y)


def reduced_snapshot_matrix_2d(G: BlockField2D, n_x: int, n_y: int, n_mu: int) -> SnapshotMatrix:
    """Small matrix with the same singular values as :func:`snapshot_matrix_2d`.

    With ``C = U S V^T`` the y-factor matrix, rotating the y rows by ``V``
    leaves ``rank(C)`` stacked blocks ``S_r sum_a U[a, r] A_a(x - mu)``.
    """
    x, y, mu = midpoint_grid(n_x), midpoint_grid(n_y), midpoint_grid(n_mu)
    A = G.x_values(x[:, None] - mu[None, :])
    U, S, _ = np.linalg.svd(G.y_factor_matrix(y), full_matrices=False)
    keep = S > S[0] * 1e-14 if S.size and S[0] > 0 else np.zeros(S.size, bool)
    B = np.einsum("ija,ar->rij", A, U[:, keep] * S[keep])
    return SnapshotMatrix(B.reshape(-1, n_mu), x, mu, 1.0 / (n_x * n_y * n_mu), y)


def singular_values(X, method: str = "gesdd") -> np.ndarray:
    """All singular values of ``X``, nonincreasing.

    ``method`` is a LAPACK driver (``"gesdd"``, ``"gesvd"``) or ``"gram"``
    for the symmetric eigen-solve of the smaller Gram matrix, which squares
    the condition number and loses small values below ``sqrt(eps) sigma_1``.
    """
    A = X.values if isinstance(X, SnapshotMatrix) else np.asarray(X, dtype=float)
    if not np.all(np.isfinite(A)):
        raise ValueError("matrix has non-finite entries")
    if method == "gram":
        M = A.T @ A if A.shape[0] >= A.shape[1] else A @ A.T
        ev = sla.eigvalsh(M)[::-1]
        return np.sqrt(np.clip(ev, 0.0, None))
    if method not in ("gesdd", "gesvd"):
        raise ValueError(f"unknown method {method!r}")
    try:
        return sla.svd(A, compute_uv=False, lapack_driver=method, check_finite=False)
    except np.linalg.LinAlgError as exc:
        raise SVDConvergenceError(
            f"{method} did not converge on a {A.shape[0]}x{A.shape[1]} matrix "
            f"(Frobenius norm {np.linalg.norm(A):.6g}): {exc}"
        ) from exc


def pod_widths(sigma, weight: float) -> np.ndarray:
    """``delta_N`` for ``N = 0..len(sigma)`` from ``weight * sum_{k > N} sigma_k^2``.

    Tails are accumulated from the smallest value up.
    """
    s2 = np.asarray(sigma, dtype=float) ** 2
    tail = np.concatenate([np.cumsum(s2[::-1])[::-1], [0.0]])
    return np.sqrt(weight * tail)


def pod_width_curve(sigma, n_x: int, n_mu: int, n_max: int | None = None, weight: float | None = None) -> WidthCurve:
    """POD width curve ``delta_N^2 = sum_{k > N} sigma_k^2 / (n_x n_mu)``.

    Pass ``weight`` to override the ``1 / (n_x n_mu)`` quadrature weight
    (2D fields also divide by ``n_y``).
    """
    w = 1.0 / (n_x * n_mu) if weight is None else weight
    d = pod_widths(sigma, w)
    n_max = d.size - 1 if n_max is None else min(int(n_max), d.size - 1)
    return WidthCurve.from_deltas(range(n_max + 1), d[: n_max + 1], "pod")


@dataclass
class BasisMatrix:
    """Node values of ``N`` functions orthonormal on (0, 1)."""

    values: np.ndarray
    parity: str
    freqs: np.ndarray

    @property
    def N(self) -> int:
        return int(self.values.shape[1])


def basis_matrix(parity: str, K: int, x, N: int | None = None) -> BasisMatrix:
    """Trigonometric basis restricted to (0, 1), scaled by ``sqrt(2)``.

    Odd parity uses frequencies ``(2k - 1) pi``, even parity the constant
    column and ``2k pi``, ``k = 1..K``; each frequency contributes a cosine
    column followed by a sine column. ``N`` keeps only the leading columns.
    """
    if parity not in ("odd", "even"):
        raise ValueError("parity must be 'odd' or 'even'")
    K = int(K)
    if K < 1:
        raise ValueError("K must be positive")
    x = np.asarray(x, dtype=float)
    k = np.arange(1, K + 1)
    f = 2 * k - 1 if parity == "odd" else 2 * k
    if x.size * 2.0 / f[-1] < 4:
        raise ValueError(f"K={K} needs at least {2 * f[-1]} grid nodes (fewer than 4 per period)")
    ph = np.pi * np.outer(x, f)
    cols = np.empty((x.size, 2 * K))
    cols[:, 0::2] = np.sqrt(2.0) * np.cos(ph)
    cols[:, 1::2] = np.sqrt(2.0) * np.sin(ph)
    freqs = np.repeat(f, 2)
    if parity == "even":
        cols = np.hstack([np.ones((x.size, 1)), cols])
        freqs = np.concatenate([[0], freqs])
    if N is not None:
        if N > cols.shape[1]:
            raise ValueError(f"N={N} exceeds the {cols.shape[1]} available columns")
        cols, freqs = cols[:, :N], freqs[:N]
    return BasisMatrix(cols, parity, freqs)


def projection_distances(X, Psi):
    """Projection errors of all snapshots onto ``span(Psi)``.

    With ``E = X - Psi Psi^T X / n_x`` and ``e_j = mean_i E_ij^2``, returns
    ``(dist_L2, dist_Linf, e)`` where ``dist_L2 = sqrt(mean_j e_j)`` and
    ``dist_Linf = sqrt(max_j e_j)``.
    """
    A = X.values if isinstance(X, SnapshotMatrix) else np.asarray(X, dtype=float)
    P = Psi.values if isinstance(Psi, BasisMatrix) else np.asarray(Psi, dtype=float)
    if P.shape[0] != A.shape[0]:
        raise ValueError("basis and snapshots use different grids")
    n_x = A.shape[0]
    E = A - P @ (P.T @ A) / n_x
    e = np.mean(E ** 2, axis=0)
    return float(np.sqrt(np.mean(e))), float(np.sqrt(np.max(e))), e

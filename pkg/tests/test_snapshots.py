import numpy as np
import pytest

from nwidth.signals import antiderivative_signal, constant_signal, jump_signal, parse_signal, random_block_field
from nwidth.snapshots import (
    SVDConvergenceError,
    basis_matrix,
    midpoint_grid,
    pod_width_curve,
    pod_widths,
    projection_distances,
    reduced_snapshot_matrix_2d,
    singular_values,
    snapshot_matrix,
    snapshot_matrix_2d,
)
from nwidth.widths import jump_width_trigamma, signal_spectrum, sort_spectrum


def test_midpoint_grid():
    np.testing.assert_allclose(midpoint_grid(2), [0.25, 0.75])
    x = midpoint_grid(2500)
    np.testing.assert_allclose(np.diff(x), 4e-4, rtol=1e-9)
    np.testing.assert_allclose(x + x[::-1], 1.0, atol=1e-15)
    assert x[0] > 0 and x[-1] < 1
    with pytest.raises(ValueError):
        midpoint_grid(0)


def test_snapshot_matrix_basic():
    X = snapshot_matrix(constant_signal(0.3), 8, 6)
    assert X.shape == (8, 6)
    np.testing.assert_allclose(X.values, 0.3)
    J = snapshot_matrix(jump_signal(), 100)
    assert set(np.unique(J.values)) == {-1.0, 1.0}
    # shifting mu by one grid spacing shifts the column pattern by one row
    np.testing.assert_array_equal(J.values[1:, 1], J.values[:-1, 0])


def test_snapshot_matrix_mid_convention():
    J = snapshot_matrix(jump_signal(), 10, side="mid")
    assert np.count_nonzero(J.values == 0) == 10  # diagonal hits sgn(0)


def test_singular_values_simple():
    n = 40
    s = singular_values(np.ones((n, n)))
    assert s[0] == pytest.approx(n)
    assert np.max(s[1:]) < 1e-12
    Q, _ = np.linalg.qr(np.random.default_rng(0).standard_normal((60, 20)))
    for method in ("gesdd", "gesvd", "gram"):
        np.testing.assert_allclose(singular_values(3 * Q, method=method), 3.0, rtol=1e-12)
    with pytest.raises(ValueError):
        singular_values(np.array([[np.nan]]))
    with pytest.raises(ValueError):
        singular_values(np.eye(2), method="power")


def test_singular_values_accuracy_against_known_spectrum():
    rng = np.random.default_rng(1)
    n = 800
    U, _ = np.linalg.qr(rng.standard_normal((n, n)))
    V, _ = np.linalg.qr(rng.standard_normal((n, n)))
    sig = np.geomspace(1, 1e-3, n)
    s = singular_values((U * sig) @ V.T)
    np.testing.assert_allclose(s[:500], sig[:500], rtol=1e-9)
    assert np.all(np.diff(s) <= 0)


def test_svd_error_wrapping(monkeypatch):
    import scipy.linalg

    def boom(*a, **k):
        raise np.linalg.LinAlgError("SVD did not converge")

    monkeypatch.setattr(scipy.linalg, "svd", boom)
    with pytest.raises(SVDConvergenceError, match="3x3"):
        singular_values(np.eye(3))


def test_jump_pairs_and_spectrum():
    n = 1000
    X = snapshot_matrix(jump_signal(), n)
    s = singular_values(X)
    rel = np.abs(s[0:100:2] - s[1:100:2]) / s[0:100:2]
    assert np.max(rel) <= 1e-3
    lam = sort_spectrum(signal_spectrum(jump_signal(), "odd", 1024)).flat
    np.testing.assert_allclose(s[:100] ** 2 / n ** 2, lam[:100], rtol=0.01)


@pytest.mark.parametrize("m", [1, 2])
def test_gm_spectrum_consistency(m):
    n = 2500
    s = singular_values(snapshot_matrix(antiderivative_signal(m), n))
    lam = sort_spectrum(signal_spectrum(antiderivative_signal(m), "odd", 1024)).flat
    np.testing.assert_allclose(s[:100] ** 2 / n ** 2, lam[:100], rtol=0.01)


def test_pod_width_curve():
    n = 400
    X = snapshot_matrix(jump_signal(), n)
    s = singular_values(X)
    c = pod_width_curve(s, n, n)
    assert c.delta[0] == pytest.approx(np.linalg.norm(X.values) / n, rel=1e-12)
    assert c.delta[0] == pytest.approx(1.0, rel=1e-12)
    rank = np.linalg.matrix_rank(X.values)
    assert np.all(c.delta[rank + 1:] < 1e-6)
    assert c.rows[0].method == "pod"
    assert pod_width_curve(s, n, n, n_max=10).N[-1] == 10


def test_basis_matrix():
    x = midpoint_grid(2500)
    for parity in ("odd", "even"):
        B = basis_matrix(parity, 200, x)
        G = B.values.T @ B.values / x.size
        np.testing.assert_allclose(G, np.eye(B.N), atol=1e-10)
    odd = basis_matrix("odd", 10, x)
    assert odd.N == 20 and basis_matrix("even", 10, x).N == 21
    # cosines of odd frequency average to zero on (0, 1); the sines do not
    np.testing.assert_allclose(odd.values[:, 0::2].mean(axis=0), 0, atol=1e-12)
    f = 2 * np.arange(1, 11) - 1
    np.testing.assert_allclose(odd.values[:, 1::2].mean(axis=0), 2 * np.sqrt(2) / (f * np.pi), rtol=1e-4)
    with pytest.raises(ValueError):
        basis_matrix("odd", 30, midpoint_grid(100))


def test_projection_distances():
    n = 200
    X = snapshot_matrix(jump_signal(), n)
    # an orthonormal basis of the whole grid space
    Q, _ = np.linalg.qr(np.random.default_rng(0).standard_normal((n, n)))
    l2, linf, _ = projection_distances(X, Q * np.sqrt(n))
    assert l2 <= 1e-10 and linf <= 1e-10
    n = 2500
    X = snapshot_matrix(jump_signal(), n)
    l2, linf, e = projection_distances(X, basis_matrix("odd", 1, X.x))
    target = np.sqrt(1 - 8 / np.pi ** 2)
    assert l2 == pytest.approx(target, rel=5e-3) and linf == pytest.approx(target, rel=5e-3)
    assert linf >= l2


def test_pod_optimality():
    n = 500
    X = snapshot_matrix(parse_signal("steps:20:3:conv:0.1:1"), n)
    d = pod_widths(singular_values(X), X.weight)
    for N in (2, 8, 20):
        for parity in ("odd", "even"):
            B = basis_matrix(parity, N // 2 + 1, X.x, N=N)
            assert d[N] <= projection_distances(X, B)[0] + 1e-8


def test_2d_reduced_equals_full():
    G = random_block_field(20, 5, seed=4, passes=1)
    F = snapshot_matrix_2d(G, 80, 15, 60)
    R = reduced_snapshot_matrix_2d(G, 80, 15, 60)
    assert F.shape == (80 * 15, 60) and F.weight == R.weight
    np.testing.assert_allclose(singular_values(F)[:40], singular_values(R)[:40], rtol=1e-10, atol=1e-10)
    # column-major flattening: row i + n_x*l holds (x_i, y_l)
    i, l, j = 7, 3, 11
    assert F.values[i + 80 * l, j] == pytest.approx(G(F.x[i] - F.mu[j], F.y[l]))


def test_2d_separable_matches_1d():
    # G(x, y) = a(x) b(y): 2D singular values are the 1D ones times ||b||
    H = np.zeros((20, 5))
    rng = np.random.default_rng(2)
    H[:] = np.outer(rng.random(20), rng.random(5))
    from nwidth.signals import BlockField2D, PiecewisePoly, Signal

    G = BlockField2D(H)
    a = Signal("custom", pp=PiecewisePoly(np.linspace(-1, 1, 21), [[h] for h in H[:, 0]]))
    n_x, n_y = 200, 50
    s2 = singular_values(snapshot_matrix_2d(G, n_x, n_y, n_x))
    s1 = singular_values(snapshot_matrix(a, n_x))
    b = G.y_values(midpoint_grid(n_y)) @ (H[0] / H[0, 0])
    np.testing.assert_allclose(s2[:30], s1[:30] * np.linalg.norm(b), rtol=1e-9)

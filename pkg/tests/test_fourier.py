import numpy as np
import pytest

from nwidth.fourier import (
    QuadratureError,
    coefficients,
    composite_gauss_integral,
    hws_classify,
    hws_split,
    sobolev_tail_diagnostic,
)
from nwidth.signals import antiderivative_signal, constant_signal, function_signal, jump_signal, parse_signal

CATALOG = ["jump", "gm:1", "gm:3", "ramp:0:0.1", "ramp:2:0.04002", "ramp:5:0.05592",
           "steps:20:0", "steps:20:0:conv:0.1:1", "steps:20:0:conv:0.1:3", "const:0.4"]


def _cos2():
    return function_signal(lambda x: np.cos(2 * np.pi * x), label="cos2")


def test_jump_coefficients():
    c = coefficients(jump_signal(), 200)
    k = c.k
    np.testing.assert_allclose(c.a, 0, atol=1e-15)
    np.testing.assert_allclose(c.b[0::2], 4 / (k[0::2] * np.pi), rtol=1e-14)
    np.testing.assert_allclose(c.b[1::2], 0, atol=1e-15)
    assert c.a0 == pytest.approx(0, abs=1e-15)
    assert set(c.provenance) == {"analytic"}


def test_constant_and_sine():
    c = coefficients(constant_signal(0.3), 10)
    assert c.a0 == pytest.approx(np.sqrt(2) * 0.3)
    assert np.max(np.abs(c.energies)) < 1e-28
    s = coefficients(function_signal(lambda x: np.sin(np.pi * x)), 10)
    assert s.b[0] == pytest.approx(1.0, abs=1e-12)
    assert np.max(np.abs(np.r_[s.a, s.b[1:], s.a0])) < 1e-12
    assert set(s.provenance) == {"quadrature"}


@pytest.mark.parametrize("m", range(6))
def test_gm_energies_closed_form(m):
    c = coefficients(antiderivative_signal(m), 4096)
    k = np.arange(1, 2049)
    np.testing.assert_allclose(c.energies[0::2], 16 * ((2 * k - 1) * np.pi) ** (-2.0 * (m + 1)), rtol=1e-9)
    assert np.max(c.energies[1::2]) < 1e-30


@pytest.mark.parametrize("spec", CATALOG)
def test_analytic_vs_quadrature(spec):
    g = parse_signal(spec)
    a = coefficients(g, 1024)
    q = coefficients(g, 1024, method="quadrature")
    assert abs(a.a0 - q.a0) <= 1e-10
    np.testing.assert_allclose(a.a, q.a, atol=1e-10)
    np.testing.assert_allclose(a.b, q.b, atol=1e-10)


def _total_variation(g):
    # exact for piecewise-constant/monotone-per-piece data; dense sampling otherwise
    x = np.sort(np.concatenate([np.linspace(-1, 1, 200_001), g.breakpoints]))
    return float(np.sum(np.abs(np.diff(g(x)))) + abs(g(np.array([-1.0]))[0] - g(np.array([1.0]), side="left")[0]))


@pytest.mark.parametrize("spec", CATALOG + ["sigmoid:0.025"])
def test_parseval_with_tail_bound(spec):
    # |a_n - i b_n| <= TV/(n pi) for BV data, so the tail beyond K is at most TV^2/(pi^2 K)
    g = parse_signal(spec)
    K = 4096
    c = coefficients(g, K)
    ps = c.parseval_partial_sums()
    assert np.all(np.diff(ps) >= 0)
    norm = g.norm_sq()
    assert ps[-1] <= norm + 1e-12
    tail = 1.05 * _total_variation(g) ** 2 / (np.pi ** 2 * K)
    assert norm - ps[-1] <= tail + 1e-12


def test_quadrature_nonconvergence_is_reported():
    rng = np.random.default_rng(0)
    noise = function_signal(lambda x: rng.standard_normal(np.shape(x)), label="noise")
    with pytest.raises(QuadratureError):
        coefficients(noise, 4, method="quadrature")
    with pytest.raises(QuadratureError):
        composite_gauss_integral(noise, [], max_panels=4096)


def test_hws_classify():
    assert hws_classify(jump_signal()) == "odd"
    assert hws_classify(_cos2()) == "even"
    assert hws_classify(jump_signal() + constant_signal(0.3)) == "none"
    assert hws_classify(constant_signal(2.0)) == "even"
    assert hws_classify(parse_signal("sigmoid:0.025")) == "odd"
    assert hws_classify(parse_signal("steps:20:1")) == "none"
    with pytest.raises(ValueError):
        hws_classify(jump_signal(), tol=0)


def test_hws_split_roundtrip_and_linearity():
    mix = jump_signal() + _cos2()
    c = coefficients(mix, 64)
    parts = hws_split(c)
    back = parts.reassemble()
    assert np.array_equal(back.a, c.a) and np.array_equal(back.b, c.b) and back.a0 == c.a0
    j = hws_split(coefficients(jump_signal(), 64))
    assert np.max(np.abs(np.r_[j.even_a, j.even_b, j.a0])) < 1e-15
    cs = hws_split(coefficients(_cos2(), 64))
    assert np.max(np.abs(np.r_[cs.odd_a, cs.odd_b])) < 1e-12
    np.testing.assert_allclose(parts.odd_b, j.odd_b, atol=1e-12)
    np.testing.assert_allclose(parts.even_a, cs.even_a, atol=1e-12)


def test_sobolev_diagnostic():
    j = coefficients(jump_signal(), 4096)
    d0 = sobolev_tail_diagnostic(j, 0)
    assert np.all(np.diff(d0.partial_sums) >= 0)
    assert d0.partial_sums[-1] == pytest.approx(2.0, abs=1e-3)
    assert d0.verdict == "bounded"
    d_half = sobolev_tail_diagnostic(j, 0.5)
    assert d_half.verdict == "divergent"
    assert d_half.partial_sums[4096] - d_half.partial_sums[2048] > 0.5  # ~ (8/pi^2) ln 2
    g1 = sobolev_tail_diagnostic(coefficients(antiderivative_signal(1), 4096), 1)
    assert g1.verdict == "bounded"

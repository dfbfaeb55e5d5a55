import numpy as np
import pytest

from nwidth.signals import (
    SignalSpecError,
    antiderivative_signal,
    box_convolve,
    constant_signal,
    hws_assemble,
    jump_signal,
    parse_signal,
    ramp_signal,
    random_block_field,
    random_steps,
    smoothstep_coefficients,
    transport2d_field,
)
from numpy.polynomial import polynomial as P


def test_jump_values():
    g = jump_signal()
    assert g(np.array([0.5]))[0] == 1
    assert g(np.array([-0.3]))[0] == -1
    # midpoint of the one-sided limits
    assert g(np.array([0.0]), side="mid")[0] == 0


def test_gm_values():
    g1 = antiderivative_signal(1)
    assert g1(np.array([0.75]))[0] == pytest.approx(0.25)
    assert g1(np.array([0.0]))[0] == pytest.approx(-0.5)
    assert antiderivative_signal(2)(np.array([0.5]))[0] == pytest.approx(-0.125)
    assert antiderivative_signal(0).kind == "jump"


@pytest.mark.parametrize("m", [1, 2, 3, 4, 5])
def test_gm_derivative_is_previous(m):
    x = np.linspace(-0.987, 0.991, 211)
    x = x[np.abs(x) > 1e-9]
    d = antiderivative_signal(m).derivative()
    np.testing.assert_allclose(d(x), antiderivative_signal(m - 1)(x), atol=1e-13)


@pytest.mark.parametrize("m", range(6))
def test_smoothstep_endpoint_conditions(m):
    c = smoothstep_coefficients(m)
    assert P.polyval(0.0, c) == 0
    assert P.polyval(1.0, c) == pytest.approx(1.0, abs=1e-12)
    assert P.polyval(0.5, c) == pytest.approx(0.5, abs=1e-12)
    for d in range(1, m + 1):
        dc = P.polyder(c, d)
        assert P.polyval(0.0, dc) == pytest.approx(0.0, abs=1e-9)
        assert P.polyval(1.0, dc) == pytest.approx(0.0, abs=1e-9)


def test_ramp_values_and_derivatives():
    eps = 0.1
    q0 = ramp_signal(0, eps)
    assert q0(np.array([-eps / 2]))[0] == 0
    assert q0(np.array([eps / 2]))[0] == pytest.approx(1.0)
    q1 = ramp_signal(1, eps)
    assert q1(np.array([0.0]))[0] == pytest.approx(0.5)
    dq = q1.pp.derivative()
    for b in (-eps / 2, eps / 2):
        assert dq(np.array([b]), side="left")[0] == pytest.approx(0.0, abs=1e-12)
        assert dq(np.array([b]), side="right")[0] == pytest.approx(0.0, abs=1e-12)


def test_ramp_validation():
    with pytest.raises(ValueError):
        ramp_signal(1, 1.0)
    with pytest.raises(ValueError):
        ramp_signal(6, 0.1)
    with pytest.raises(ValueError):
        ramp_signal("inf", 0.2)  # sigmoid support exceeds the cell


def test_sigmoid_matches_linear_ramp_slope():
    eps = 0.025
    q = ramp_signal("inf", eps)
    h = 1e-7
    slope = (q(np.array([h]))[0] - q(np.array([-h]))[0]) / (2 * h)
    assert slope == pytest.approx(1 / eps, rel=1e-6)
    assert q(np.array([-0.4]))[0] == 0 and q(np.array([0.4]))[0] == 1


@pytest.mark.parametrize("spec", ["ramp:0:0.1", "ramp:3:0.04592", "sigmoid:0.025", "sigmoid:0.05:3"])
def test_hws_assemble_is_odd(spec):
    g = parse_signal(spec)
    x = -1 + (np.arange(10_000) + 0.5) / 10_000
    assert np.max(np.abs(g(x) + g(x + 1))) <= 1e-12


def test_hws_assemble_branches():
    q = ramp_signal(2, 0.2)
    g = hws_assemble(q)
    assert g(np.array([0.0]))[0] == pytest.approx(2 * q(np.array([0.0]))[0] - 1)
    assert g(np.array([-0.75]))[0] == pytest.approx(1 - 2 * q(np.array([0.25]))[0])


def test_periodicity_all_kinds():
    x = np.linspace(-3, 3, 601)
    for spec in ["jump", "gm:3", "ramp:2:0.05", "sigmoid:0.025", "steps:20:7", "steps:20:7:conv:0.1:2"]:
        g = parse_signal(spec)
        assert np.array_equal(g(x), g(x + 2.0)), spec


def test_random_steps_contract():
    a, b = random_steps(20, 11), random_steps(20, 11)
    assert a.pp.breakpoints.size == 21
    assert all(np.array_equal(p, q) for p, q in zip(a.pp.coeffs, b.pp.coeffs))
    c = random_steps(1, 3)
    x = np.linspace(-1, 1, 9)
    assert np.ptp(c(x)) == 0
    heights = np.array([cc[0] for cc in a.pp.coeffs])
    assert np.all((heights >= 0) & (heights < 1))


def test_box_convolve_properties():
    c = constant_signal(0.7)
    np.testing.assert_allclose(box_convolve(c, 0.3)(np.linspace(-1, 1, 11)), 0.7, atol=1e-14)
    g = random_steps(20, 5)
    for p in (1, 2, 3):
        h = box_convolve(g, 0.1, p)
        assert abs(h.integral() - g.integral()) <= 1e-12
        assert h.pp.degree == p
        # smoothness class: derivatives below order p are continuous
        for d in range(p):
            assert np.max(np.abs(h.pp.one_sided_jumps(d))) <= 1e-9
        assert np.max(np.abs(h.pp.one_sided_jumps(p))) > 1e-3
    with pytest.raises(TypeError):
        box_convolve(parse_signal("sigmoid:0.025"), 0.1)


def test_parse_errors():
    for bad in ["ramp:9:0.1", "foo", "gm:-1", "steps:20", "steps:20:1:xx:0.1:1", "ramp:1:abc", "jump:2"]:
        with pytest.raises(SignalSpecError):
            parse_signal(bad)


def test_transport2d_field():
    G = random_block_field(20, 5, seed=3, passes=0)
    x = (np.arange(10) + 0.5) / 10
    y = (np.arange(4) + 0.5) / 4
    X, Y = np.meshgrid(x, y, indexing="ij")
    np.testing.assert_allclose(transport2d_field(G, 0.0, x, y), G(X, Y))
    # block lookup by hand: x=0.05 is block 10, y=0.125 is block 0
    assert G(np.array([0.05]), np.array([0.125]))[0] == pytest.approx(G.heights[10, 0])
    Gc = random_block_field(20, 5, seed=3, passes=1)
    t = np.linspace(0.001, 0.999, 2001)
    v = Gc(t, np.full_like(t, 0.3))
    assert np.max(np.abs(np.diff(v))) < 0.02  # continuous: no block jumps

"""Reproducible width-decay experiments and the fits used to read them.

Five named experiments are available: ``heaviside``, ``ramps``,
``steepness``, ``random1d`` and ``random2d``. Each writes one CSV per
figure into an output directory and appends its fits to ``summary.csv``.
"""

from __future__ import annotations

import csv
import logging
import os
from dataclasses import dataclass
from math import sqrt

import numpy as np

from .signals import box_convolve, hws_assemble, jump_signal, random_block_field, ramp_signal, random_steps
from .snapshots import (
    midpoint_grid,
    pod_widths,
    reduced_snapshot_matrix_2d,
    singular_values,
    snapshot_matrix,
)
from .widths import WidthCurve, exact_width_curve, jump_width_trigamma, signal_spectrum, sort_spectrum

__all__ = [
    "EXPERIMENTS",
    "RAMP_EPS",
    "ExperimentConfig",
    "FitResult",
    "FitWindowError",
    "ExperimentError",
    "load_config",
    "fit_epsilon",
    "fit_rate",
    "fit_constant",
    "run_experiment",
    "write_summary",
    "golden_section",
]

log = logging.getLogger(__name__)

EXPERIMENTS = ("heaviside", "ramps", "steepness", "random1d", "random2d")
# reference steepness and the smoothstep widths of matching L2 shape
REFERENCE_EPS = 0.025
RAMP_EPS = {0: 0.025, 1: 0.03316, 2: 0.04002, 3: 0.04592, 4: 0.05116, 5: 0.05592}
_GOLDEN = (sqrt(5.0) - 1.0) / 2.0


class FitWindowError(ValueError):
    """The minimizer ran into an end of its search window."""


class ExperimentError(RuntimeError):
    pass


@dataclass
class ExperimentConfig:
    """Settings of one experiment run.

    ``None`` entries fall back to per-experiment defaults in
    :func:`run_experiment`.
    """

    name: str = "heaviside"
    nx: int = 2500
    nmu: int | None = None
    nmax: int | None = None
    seed: int = 0
    window_lo: int = 32
    window_hi: int = 512
    eps_list: tuple | None = None
    m_list: tuple | None = None
    passes: int = 3
    outdir: str = "."
    plots: bool = False

    def __post_init__(self):
        if self.name not in EXPERIMENTS:
            raise ValueError(f"unknown experiment {self.name!r}; expected one of {EXPERIMENTS}")
        if self.nmu is None:
            self.nmu = self.nx
        if self.nx < 1 or self.nmu < 1:
            raise ValueError("grid sizes must be positive")
        if not 1 <= self.window_lo < self.window_hi:
            raise ValueError("need 1 <= window_lo < window_hi")
        if self.passes < 0:
            raise ValueError("passes must be nonnegative")


_INT_KEYS = {"nx", "nmu", "nmax", "seed", "window_lo", "window_hi", "passes"}
_LIST_KEYS = {"eps_list": float, "m_list": int}


def load_config(path, name: str, **overrides) -> ExperimentConfig:
    """Read a flat ``key=value`` file (``#`` comments, comma lists)."""
    vals = {}
    if path is not None:
        with open(path) as fh:
            for lineno, raw in enumerate(fh, 1):
                line = raw.split("#", 1)[0].strip()
                if not line:
                    continue
                if "=" not in line:
                    raise ValueError(f"{path}:{lineno}: expected key=value")
                key, val = (s.strip() for s in line.split("=", 1))
                if key in _INT_KEYS:
                    vals[key] = int(val)
                elif key in _LIST_KEYS:
                    vals[key] = tuple(_LIST_KEYS[key](v) for v in val.split(",") if v.strip())
                else:
                    raise ValueError(f"{path}:{lineno}: unknown key {key!r}")
    vals.update({k: v for k, v in overrides.items() if v is not None})
    return ExperimentConfig(name=name, **vals)


@dataclass
class FitResult:
    value: float
    residual: float
    window: tuple
    param: str = ""


# ---------------------------------------------------------------------------
# fits


def golden_section(f, lo: float, hi: float, tol: float):
    """Minimize a unimodal ``f`` on ``[lo, hi]``; returns ``(x, f(x))``."""
    a, b = lo, hi
    c = b - _GOLDEN * (b - a)
    d = a + _GOLDEN * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - _GOLDEN * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _GOLDEN * (b - a)
            fd = f(d)
    x = 0.5 * (a + b)
    return x, f(x)


def _hws_ramp(m, eps):
    return hws_assemble(ramp_signal(m, eps))


def fit_epsilon(m, eps_ref: float = REFERENCE_EPS, window=(0.02, 0.10), tol: float = 1e-6,
                n_grid: int = 10_000, m_ref=0) -> FitResult:
    """Steepness ``eps`` of the order-``m`` ramp closest to the reference.

    Minimizes ``||g_{q_m, eps} - g_{q_ref, eps_ref}||`` in L2(-1, 1), using
    the midpoint rule with ``n_grid`` nodes, by golden-section search.
    """
    lo, hi = window
    x = 2.0 * midpoint_grid(n_grid) - 1.0
    ref = _hws_ramp(m_ref, eps_ref)(x)

    def dist(eps):
        return sqrt(2.0 / n_grid * np.sum((_hws_ramp(m, eps)(x) - ref) ** 2))

    eps, res = golden_section(dist, lo, hi, tol)
    if eps - lo <= 2 * tol or hi - eps <= 2 * tol:
        raise FitWindowError(f"eps fit for m={m} hit the window [{lo}, {hi}] at {eps:.6g}")
    return FitResult(eps, res, (lo, hi), f"eps_m{m}")


def _curve_window(curve, N_lo, N_hi):
    if isinstance(curve, WidthCurve):
        N, d = curve.N.astype(float), curve.delta
    else:
        N, d = (np.asarray(v, dtype=float) for v in curve)
    sel = (N >= max(N_lo, 1)) & (N <= N_hi)
    if sel.sum() < 2:
        raise ValueError(f"fewer than two points in window [{N_lo}, {N_hi}]")
    N, d = N[sel], d[sel]
    if np.any(~(d > 0)):
        raise ValueError("widths must be positive inside the fit window")
    return N, d


def fit_rate(curve, N_lo: int = 32, N_hi: int = 512) -> FitResult:
    """Decay rate ``r`` from a least-squares line through ``(log N, log delta_N)``.

    Returns ``-slope``; the residual is the RMS of the log residuals.
    """
    N, d = _curve_window(curve, N_lo, N_hi)
    lx, ly = np.log(N), np.log(d)
    slope, icpt = np.polyfit(lx, ly, 1)
    res = float(np.sqrt(np.mean((ly - (slope * lx + icpt)) ** 2)))
    return FitResult(float(-slope), res, (int(N[0]), int(N[-1])), "rate")


def fit_constant(curve, r: float, N_lo: int = 32, N_hi: int = 512) -> FitResult:
    """Constant ``c`` in ``delta_N ~ c N^(-r)``: geometric mean of the
    compensated curve, residual = max relative deviation from ``c``."""
    N, d = _curve_window(curve, N_lo, N_hi)
    comp = d * N ** r
    c = float(np.exp(np.mean(np.log(comp))))
    return FitResult(c, float(np.max(np.abs(comp / c - 1.0))), (int(N[0]), int(N[-1])), "constant")


# ---------------------------------------------------------------------------
# experiment drivers


def _write_csv(path, header, columns):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        for row in zip(*columns):
            w.writerow([v if isinstance(v, (int, np.integer, str)) else repr(float(v)) for v in row])


def _pad(values, n):
    out = np.full(n, np.nan)
    k = min(n, len(values))
    out[:k] = values[:k]
    return out


def _pod_curve(g, n_x, n_mu):
    X = snapshot_matrix(g, n_x, n_mu)
    return pod_widths(singular_values(X), X.weight)


def _nmax(cfg, default):
    return default if cfg.nmax is None else cfg.nmax


def _even(n):
    return max(2, n - n % 2)


def _heaviside(cfg, summary):
    nmax = _nmax(cfg, 2000)
    N = np.arange(nmax + 1)
    tri = jump_width_trigamma(N)
    with np.errstate(divide="ignore"):
        ref = np.where(N > 0, 1.0 / np.sqrt(np.maximum(N, 1)), np.nan)
    cols, header = [N], ["N"]
    g = jump_signal()
    for n in sorted({_even(cfg.nx // 4), _even(cfg.nx // 2), cfg.nx}):
        d = _pod_curve(g, n, n if cfg.nmu == cfg.nx else max(1, cfg.nmu * n // cfg.nx))
        cols.append(_pad(d, N.size))
        header.append(f"delta_pod_n{n}")
    cols += [tri, ref, ref / tri]
    header += ["delta_trigamma", "N^-1/2", "ratio"]
    path = os.path.join(cfg.outdir, "heaviside.csv")
    _write_csv(path, header, cols)
    fr = fit_rate((N, tri), cfg.window_lo, cfg.window_hi)
    summary.append(("heaviside", "rate_trigamma", fr.value, fr.residual))
    fc = fit_constant((N, tri), 0.5, cfg.window_lo, cfg.window_hi)
    summary.append(("heaviside", "c_trigamma", fc.value, fc.residual))
    summary.append(("heaviside", f"ratio_N{nmax}", float(ref[-1] / tri[-1]), float(abs(ref[-1] / tri[-1] / (np.pi / 2) - 1))))
    return [path]


def _ramps(cfg, summary):
    m_list = cfg.m_list if cfg.m_list is not None else (0, 1, 2, 3)
    if cfg.eps_list is not None:
        if len(cfg.eps_list) != len(m_list):
            raise ExperimentError("eps_list and m_list differ in length")
        eps = dict(zip(m_list, cfg.eps_list))
    else:
        eps = {}
        for m in m_list:
            if m == 0:
                eps[m] = REFERENCE_EPS
            else:
                fr = fit_epsilon(m)
                eps[m] = fr.value
                summary.append(("ramps", f"eps_m{m}", fr.value, fr.residual))
    nmax = _nmax(cfg, min(cfg.nx, cfg.nmu))
    N = np.arange(nmax + 1)
    cols, header = [N], ["N"]
    for m in m_list:
        d = _pad(_pod_curve(_hws_ramp(m, eps[m]), cfg.nx, cfg.nmu), N.size)
        r = m + 0.5
        cols += [d, d * N ** r]
        header += [f"delta_pod_m{m}", f"compensated_m{m}"]
        fr = fit_rate((N, d), cfg.window_lo, cfg.window_hi)
        fc = fit_constant((N, d), r, cfg.window_lo, cfg.window_hi)
        summary.append(("ramps", f"rate_m{m}", fr.value, fr.residual))
        summary.append(("ramps", f"c_m{m}", fc.value, fc.residual))
    path = os.path.join(cfg.outdir, "ramps.csv")
    _write_csv(path, header, cols)
    return [path]


def _steepness(cfg, summary):
    eps_list = cfg.eps_list if cfg.eps_list is not None else (0.2, 0.1, 0.05, 0.025)
    nmax = _nmax(cfg, min(cfg.nx, cfg.nmu))
    N = np.arange(nmax + 1)
    cols, header = [N], ["N"]
    exact, rates = {}, []
    for e in eps_list:
        g = _hws_ramp(0, e)
        K = max(8192, 8 * (nmax + 1))
        ex = exact_width_curve(sort_spectrum(signal_spectrum(g, "odd", K)), nmax).delta
        exact[e] = ex
        pod = _pad(_pod_curve(g, cfg.nx, cfg.nmu), N.size)
        cols += [ex, pod]
        header += [f"delta_exact_eps{e}", f"delta_pod_eps{e}"]
        fr = fit_rate((N, ex), cfg.window_lo, cfg.window_hi)
        rates.append(fr.value)
        summary.append(("steepness", f"rate_eps{e}", fr.value, fr.residual))
        fp = fit_rate((N, pod), cfg.window_lo, cfg.window_hi)
        summary.append(("steepness", f"rate_pod_eps{e}", fp.value, fp.residual))
    r = float(np.mean(rates))
    for e in eps_list:
        fc = fit_constant((N, exact[e]), r, cfg.window_lo, cfg.window_hi)
        summary.append(("steepness", f"c_eps{e}", fc.value, fc.residual))
    path = os.path.join(cfg.outdir, "steepness.csv")
    _write_csv(path, header, cols)
    return [path]


def _random1d(cfg, summary):
    nmax = _nmax(cfg, min(cfg.nx, cfg.nmu))
    N = np.arange(nmax + 1)
    cols, header = [N], ["N"]
    base = random_steps(20, cfg.seed)
    for p in range(cfg.passes + 1):
        g = base if p == 0 else box_convolve(base, 2.0 / 20, p)
        d = _pad(_pod_curve(g, cfg.nx, cfg.nmu), N.size)
        cols.append(d)
        header.append(f"delta_pod_p{p}")
        fr = fit_rate((N, d), cfg.window_lo, cfg.window_hi)
        summary.append(("random1d", f"rate_p{p}", fr.value, fr.residual))
    path = os.path.join(cfg.outdir, "random1d.csv")
    _write_csv(path, header, cols)
    return [path]


def _random2d(cfg, summary):
    nmax = _nmax(cfg, min(cfg.nx, cfg.nmu))
    N = np.arange(nmax + 1)
    cols, header = [N], ["N"]
    n_y = max(5, cfg.nx // 5)
    for p in range(cfg.passes + 1):
        G = random_block_field(20, 5, cfg.seed, p)
        X = reduced_snapshot_matrix_2d(G, cfg.nx, n_y, cfg.nmu)
        d = _pad(pod_widths(singular_values(X), X.weight), N.size)
        cols.append(d)
        header.append(f"delta_pod_p{p}")
        fr = fit_rate((N, d), cfg.window_lo, cfg.window_hi)
        summary.append(("random2d", f"rate_p{p}", fr.value, fr.residual))
    path = os.path.join(cfg.outdir, "random2d.csv")
    _write_csv(path, header, cols)
    return [path]


_DRIVERS = {
    "heaviside": _heaviside,
    "ramps": _ramps,
    "steepness": _steepness,
    "random1d": _random1d,
    "random2d": _random2d,
}


def write_summary(path, rows) -> None:
    _write_csv(path, ["experiment", "parameter", "value", "residual"], list(zip(*rows)) or [[]] * 4)


def run_experiment(cfg: ExperimentConfig, summary_file: bool = True):
    """Run one experiment; returns ``(paths, summary_rows)``.

    CSVs go to ``cfg.outdir``; unless ``summary_file`` is false,
    ``summary.csv`` there lists ``experiment, parameter, value, residual``.
    """
    os.makedirs(cfg.outdir, exist_ok=True)
    summary = []
    log.info("running %s (nx=%d, nmu=%d)", cfg.name, cfg.nx, cfg.nmu)
    paths = _DRIVERS[cfg.name](cfg, summary)
    if cfg.plots:
        from .svg import plot_svg

        for p in list(paths):
            with open(p) as fh:
                head = next(csv.reader(fh))
            svg = p[:-4] + ".svg"
            plot_svg(p, head[0], [h for h in head[1:] if h.startswith("delta")], svg, loglog=True)
            paths.append(svg)
    if summary_file:
        spath = os.path.join(cfg.outdir, "summary.csv")
        write_summary(spath, summary)
        paths.append(spath)
    return paths, summary

"""Command line interface: ``nwidth <subcommand> ...``.

Exit codes: 0 on success, 1 on a domain error (bad numeric input, failed
fit or decomposition), 2 on a usage error including a malformed signal
spec.
"""

from __future__ import annotations

import argparse
import contextlib
import csv
import logging
import os
import sys

import numpy as np

from . import experiments as ex
from .fourier import coefficients, hws_classify
from .signals import SignalSpecError, parse_signal
from .snapshots import basis_matrix, pod_widths, projection_distances, singular_values, snapshot_matrix
from .special import trigamma
from .svg import PlotError, plot_svg
from .widths import exact_width_curve, signal_spectrum, sort_spectrum

log = logging.getLogger("nwidth")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


def _f(v) -> str:
    return repr(float(v))


def _signal(spec):
    try:
        return parse_signal(spec)
    except SignalSpecError as exc:
        raise UsageError(str(exc)) from exc


def _cmd_coeffs(a):
    g = _signal(a.signal)
    c = coefficients(g, a.k_max)
    with open(a.out, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["k", "a_k", "b_k", "provenance"])
        w.writerow([0, _f(c.a0), _f(0.0), c.provenance[0]])
        for k in range(1, c.K + 1):
            w.writerow([k, _f(c.a[k - 1]), _f(c.b[k - 1]), c.provenance[k]])


def _cmd_exact(a):
    g = _signal(a.signal)
    parity = a.parity
    if parity == "auto":
        parity = hws_classify(g)
        if parity == "none":
            raise ValueError(f"{a.signal} is not half-wave symmetric; exact widths need an HWS datum")
    K = max(8192, 8 * (a.n_max + 1))
    curve = exact_width_curve(sort_spectrum(signal_spectrum(g, parity, K)), a.n_max)
    curve.to_csv(a.out)


def _cmd_pod(a):
    g = _signal(a.signal)
    X = snapshot_matrix(g, a.nx, a.nmu)
    d = pod_widths(singular_values(X), X.weight)
    n_max = min(a.n_max, d.size - 1)
    header = ["N", "delta_pod"]
    basis = None
    if a.basis:
        try:
            parity, K = a.basis.split(":")
            basis = basis_matrix(parity, int(K), X.x)
        except ValueError as exc:
            if ":" not in a.basis:
                raise UsageError(f"--basis expects odd:K or even:K, got {a.basis!r}") from exc
            raise
        header += ["dist_L2_basis", "dist_Linf_basis"]
    with open(a.out, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        for N in range(n_max + 1):
            row = [N, _f(d[N])]
            if basis is not None:
                if N <= basis.N:
                    sub = basis.values[:, :N]
                    l2, linf, _ = projection_distances(X, sub)
                    row += [_f(l2), _f(linf)]
                else:
                    row += ["nan", "nan"]
            w.writerow(row)


def _cmd_trigamma(a):
    for x in a.x:
        print(_f(trigamma(x)))


def _cmd_experiment(a):
    names = ex.EXPERIMENTS if a.name == "all" else (a.name,)
    summary, failed = [], []
    for name in names:
        try:
            cfg = ex.load_config(a.config, name, seed=a.seed, nx=a.nx, nmu=a.nmu)
            cfg.outdir = a.outdir
            cfg.plots = a.plots
            _, rows = ex.run_experiment(cfg, summary_file=False)
            summary += rows
        except (ValueError, ArithmeticError, RuntimeError, np.linalg.LinAlgError) as exc:
            log.error("experiment %s failed: %s", name, exc)
            failed.append(name)
    os.makedirs(a.outdir, exist_ok=True)
    ex.write_summary(os.path.join(a.outdir, "summary.csv"), summary)
    if failed:
        raise ValueError(f"failed experiments: {', '.join(failed)}")


def _cmd_plot(a):
    out = a.out or os.path.splitext(a.csv)[0] + ".svg"
    plot_svg(a.csv, a.x, a.y, out, loglog=a.loglog, title=a.title)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="nwidth", description="N-widths of the linear transport solution manifold.")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="cmd", required=True, parser_class=_Parser)

    s = sub.add_parser("coeffs", help="Fourier coefficients of a signal")
    s.add_argument("--signal", required=True)
    s.add_argument("--k-max", type=int, required=True)
    s.add_argument("--out", required=True)
    s.set_defaults(func=_cmd_coeffs)

    s = sub.add_parser("exact", help="exact width curve of an HWS signal")
    s.add_argument("--signal", required=True)
    s.add_argument("--n-max", type=int, required=True)
    s.add_argument("--parity", choices=("auto", "odd", "even"), default="auto")
    s.add_argument("--out", required=True)
    s.set_defaults(func=_cmd_exact)

    s = sub.add_parser("pod", help="POD width curve from a snapshot matrix")
    s.add_argument("--signal", required=True)
    s.add_argument("--nx", type=int, default=2500)
    s.add_argument("--nmu", type=int, default=None)
    s.add_argument("--n-max", type=int, default=100)
    s.add_argument("--basis", default=None, help="odd:K or even:K")
    s.add_argument("--out", required=True)
    s.set_defaults(func=_cmd_pod)

    s = sub.add_parser("trigamma", help="evaluate the trigamma function")
    s.add_argument("x", type=float, nargs="+")
    s.set_defaults(func=_cmd_trigamma)

    s = sub.add_parser("experiment", help="run a named experiment")
    s.add_argument("name", choices=(*ex.EXPERIMENTS, "all"))
    s.add_argument("--config", default=None)
    s.add_argument("--outdir", required=True)
    s.add_argument("--seed", type=int, default=None)
    s.add_argument("--nx", type=int, default=None)
    s.add_argument("--nmu", type=int, default=None)
    s.add_argument("--plots", action="store_true")
    s.set_defaults(func=_cmd_experiment)

    s = sub.add_parser("plot", help="SVG line chart from a CSV file")
    s.add_argument("csv")
    s.add_argument("--x", default="N")
    s.add_argument("--y", nargs="+", required=True)
    s.add_argument("--loglog", action="store_true")
    s.add_argument("--title", default=None)
    s.add_argument("--out", default=None)
    s.set_defaults(func=_cmd_plot)
    return p


def _thread_limit():
    n = os.environ.get("NWIDTH_THREADS")
    if not n:
        return contextlib.nullcontext()
    from threadpoolctl import threadpool_limits

    return threadpool_limits(limits=int(n))


def main(argv=None) -> int:
    parser = build_parser()
    try:
        a = parser.parse_args(argv)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return 2
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if a.verbose else logging.WARNING, format="%(name)s: %(message)s")
    if getattr(a, "nmu", 1) is None and a.cmd == "pod":
        a.nmu = a.nx
    try:
        with _thread_limit():
            a.func(a)
    except UsageError as exc:
        print(f"nwidth: {exc}", file=sys.stderr)
        return 2
    except (ValueError, TypeError, ArithmeticError, RuntimeError, PlotError, OSError, np.linalg.LinAlgError) as exc:
        print(f"nwidth: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())

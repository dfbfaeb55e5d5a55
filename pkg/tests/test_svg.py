import re

import numpy as np
import pytest

from nwidth.svg import PlotError, plot_svg


def _points(svg, series):
    m = re.search(rf'data-series="{re.escape(series)}"[^>]*points="([^"]+)"', svg)
    return np.array([[float(v) for v in p.split(",")] for p in m.group(1).split()])


def _write(path, rows):
    path.write_text("\n".join(",".join(map(str, r)) for r in rows) + "\n")


def test_one_polyline_per_column(tmp_path):
    src = tmp_path / "a.csv"
    _write(src, [["N", "a", "b"]] + [[i, i * 2, i * i] for i in range(1, 6)])
    out = plot_svg(src, "N", ["a", "b"], tmp_path / "a.svg")
    svg = open(out).read()
    assert svg.count("<polyline") == 2
    assert svg.startswith("<svg") and svg.rstrip().endswith("</svg>")


def test_loglog_power_law_is_straight(tmp_path):
    src = tmp_path / "p.csv"
    N = np.arange(1, 300)
    _write(src, [["N", "d"]] + [[n, repr(float(3.0 * n ** -1.3))] for n in N])
    svg = open(plot_svg(src, "N", ["d"], tmp_path / "p.svg", loglog=True)).read()
    P = _points(svg, "d")
    A = np.c_[P[:, 0], np.ones(len(P))]
    coef, *_ = np.linalg.lstsq(A, P[:, 1], rcond=None)
    assert np.max(np.abs(A @ coef - P[:, 1])) < 1e-9


def test_deterministic(tmp_path):
    src = tmp_path / "a.csv"
    _write(src, [["N", "a"]] + [[i, 1.0 / i] for i in range(1, 20)])
    a = open(plot_svg(src, "N", ["a"], tmp_path / "1.svg", loglog=True)).read()
    b = open(plot_svg(src, "N", ["a"], tmp_path / "2.svg", loglog=True)).read()
    assert a == b


def test_errors(tmp_path):
    src = tmp_path / "a.csv"
    _write(src, [["N", "a"], [1, 2]])
    with pytest.raises(PlotError, match="zzz"):
        plot_svg(src, "N", ["zzz"], tmp_path / "x.svg")
    empty = tmp_path / "e.csv"
    empty.write_text("")
    with pytest.raises(PlotError):
        plot_svg(empty, "N", ["a"], tmp_path / "e.svg")
    assert not (tmp_path / "e.svg").exists()
    assert not (tmp_path / "x.svg").exists()

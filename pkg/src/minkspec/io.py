"""Problem files, result serialisation and CSV/SVG output.

A problem file is a JSON object in one of two forms::

    {"J": [[[re, im], ...], ...], "u": [[re, im], ...], "a": number}
    {"mu": [descending numbers], "d": [positive numbers], "a": number}

Floats are written with ``repr``, which round-trips every double exactly.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .analysis import AnalysisOutput, Problem
from .errors import IoError, ParseError
from .model import BorderedPencil, EigenvalueRecord, validate_problem
from .observability import ObservabilityReport
from .oracle import NuCurveSample
from .signs import CanonicalForm, SignedBlock
from .spectral import SpectralForm, spectral_form
from .sweep import TrajectoryPoint

_MATRIX_KEYS = {"J", "u", "a"}
_SPECTRAL_KEYS = {"mu", "d", "a"}


def _line_of(text, key):
    needle = f'"{key}"'
    for i, line in enumerate(text.splitlines(), 1):
        if needle in line:
            return i
    return None


def _where(text, key):
    line = _line_of(text, key)
    return f"key {key!r}" + (f" (line {line})" if line else "")


def _no_duplicates(pairs):
    out = {}
    for k, v in pairs:
        if k in out:
            raise ParseError(f"duplicate key {k!r}")
        out[k] = v
    return out


def _number(x, where):
    if isinstance(x, bool) or not isinstance(x, (int, float)):
        raise ParseError(f"{where}: expected a number, got {json.dumps(x)}")
    return float(x)


def _complex(x, where):
    if not (isinstance(x, list) and len(x) == 2):
        raise ParseError(f"{where}: expected a [re, im] pair, got {json.dumps(x)}")
    return complex(_number(x[0], where), _number(x[1], where))


def _number_list(x, where):
    if not isinstance(x, list):
        raise ParseError(f"{where}: expected an array")
    return [_number(v, where) for v in x]


def parse_problem(text: str) -> Problem:
    """Parse a problem file into a :class:`BorderedPencil` or :class:`SpectralForm`.

    Raises
    ------
    ParseError
        Malformed JSON, unknown or missing keys, wrong value types.
    ValidationError
        The data parse but do not define a valid problem.
    """
    try:
        data = json.loads(text, object_pairs_hook=_no_duplicates)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    if not isinstance(data, dict):
        raise ParseError("the problem file must contain a JSON object")
    keys = set(data)
    if "J" in keys or "u" in keys:
        expected = _MATRIX_KEYS
    elif "mu" in keys or "d" in keys:
        expected = _SPECTRAL_KEYS
    else:
        raise ParseError("expected either the keys J, u, a or the keys mu, d, a")
    unknown = sorted(keys - expected)
    if unknown:
        raise ParseError(f"unknown {_where(text, unknown[0])}")
    missing = sorted(expected - keys)
    if missing:
        raise ParseError(f"missing key {missing[0]!r}")
    a = _number(data["a"], _where(text, "a"))

    if expected is _SPECTRAL_KEYS:
        mu = _number_list(data["mu"], _where(text, "mu"))
        d = _number_list(data["d"], _where(text, "d"))
        return spectral_form(mu, d, a)

    where_J = _where(text, "J")
    rows = data["J"]
    if not isinstance(rows, list) or not all(isinstance(r, list) for r in rows):
        raise ParseError(f"{where_J}: expected an array of rows")
    J = [[_complex(x, f"{where_J}[{i}][{j}]") for j, x in enumerate(row)]
         for i, row in enumerate(rows)]
    if any(len(row) != len(J) for row in J):
        raise ParseError(f"{where_J}: J must be square")
    if not isinstance(data["u"], list):
        raise ParseError(f"{_where(text, 'u')}: expected an array")
    u = [_complex(x, f"{_where(text, 'u')}[{i}]") for i, x in enumerate(data["u"])]
    return validate_problem(np.array(J, dtype=complex).reshape(len(J), len(J)), u, a)


def load_problem(path) -> Problem:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}") from None
    except UnicodeDecodeError:
        raise ParseError(f"{path} is not UTF-8 text") from None
    return parse_problem(text)


def _pair(z):
    z = complex(z)
    return [z.real, z.imag]


def problem_to_dict(problem: Problem) -> dict:
    if isinstance(problem, BorderedPencil):
        return {"J": [[_pair(x) for x in row] for row in problem.J],
                "u": [_pair(x) for x in problem.u],
                "a": problem.a}
    if problem.detached.size:
        raise ValueError("a spectral form with detached eigenvalues has no file representation")
    return {"mu": [float(x) for x in problem.poles],
            "d": [float(x) for x in problem.residues],
            "a": problem.shift}


def serialize_problem(problem: Problem) -> str:
    return json.dumps(problem_to_dict(problem), indent=1)


def _form_to_dict(form: SpectralForm):
    return {"mu": [float(x) for x in form.poles], "d": [float(x) for x in form.residues],
            "a": form.shift, "detached": [float(x) for x in form.detached],
            "dropped": form.dropped}


def _form_from_dict(d):
    return SpectralForm(d["mu"], d["d"], d["a"], d["detached"], d["dropped"])


def analysis_to_dict(out: AnalysisOutput) -> dict:
    """Plain JSON-compatible view of an :class:`AnalysisOutput`."""
    obs = out.observability
    return {
        "case_label": out.case_label,
        "reduced_case_label": out.reduced_case_label,
        "observability": {
            "observable": obs.observable,
            "unobservable_dimension": obs.unobservable_dimension,
            "detached_spectrum": [float(x) for x in obs.detached_spectrum],
            "reduced": _form_to_dict(obs.reduced),
        },
        "eigenvalues": [
            {"value": _pair(r.value), "algebraic_multiplicity": r.algebraic_multiplicity,
             "jordan_block_size": r.jordan_block_size, "is_real": r.is_real,
             "interval_index": r.interval_index, "detached": r.detached}
            for r in out.records],
        "blocks": [
            {"block_type": b.block_type, "eigenvalue": _pair(b.eigenvalue), "size": b.size,
             "epsilon": b.epsilon, "detached": b.detached}
            for b in out.blocks],
        "canonical_valid": out.canonical_valid,
        "diagnostics": dict(out.diagnostics),
    }


def analysis_from_dict(d: dict) -> AnalysisOutput:
    o = d["observability"]
    obs = ObservabilityReport(o["observable"], o["unobservable_dimension"],
                              np.array(o["detached_spectrum"], dtype=float),
                              _form_from_dict(o["reduced"]))
    records = tuple(EigenvalueRecord(complex(*r["value"]), r["algebraic_multiplicity"],
                                     r["jordan_block_size"], r["is_real"], r["interval_index"],
                                     r["detached"])
                    for r in d["eigenvalues"])
    blocks = tuple(SignedBlock(b["block_type"], complex(*b["eigenvalue"]), b["size"],
                               b["epsilon"], b["detached"])
                   for b in d["blocks"])
    return AnalysisOutput(obs, records, d["case_label"], d["reduced_case_label"], blocks,
                          d["canonical_valid"], dict(d["diagnostics"]),
                          canonical=CanonicalForm(blocks, d["case_label"]))


def analysis_to_json(out: AnalysisOutput) -> str:
    return json.dumps(analysis_to_dict(out), indent=1)


def analysis_from_json(text: str) -> AnalysisOutput:
    return analysis_from_dict(json.loads(text))


@dataclass(frozen=True)
class GHPlotData:
    """Samples of g and h = x - a on a grid; g is NaN next to the poles."""

    x: np.ndarray
    g: np.ndarray
    h: np.ndarray
    poles: np.ndarray
    a: float


def gh_plot_data(form: SpectralForm, a=None, lo=None, hi=None, samples=2001) -> GHPlotData:
    """Tabulate g and h for a picture of the secular equation.

    The default window extends the pole range by its spread plus 2 on both
    sides and always contains the shift.
    """
    red = form.reduced()
    a = red.shift if a is None else float(a)
    poles = red.poles
    if lo is None or hi is None:
        p_lo, p_hi = (float(poles.min()), float(poles.max())) if red.m else (a, a)
        pad = (p_hi - p_lo) + 2.0
        lo = min(p_lo, a) - pad if lo is None else lo
        hi = max(p_hi, a) + pad if hi is None else hi
    x = np.linspace(float(lo), float(hi), int(samples))
    with np.errstate(divide="ignore", invalid="ignore"):
        g = -np.sum(red.residues / (x[:, None] - poles), axis=1) if red.m else np.zeros_like(x)
    if red.m:
        step = (hi - lo) / max(samples - 1, 1)
        near = np.min(np.abs(x[:, None] - poles), axis=1) < 0.5 * step
        g[near] = np.nan
    return GHPlotData(x, g, x - a, poles.copy(), a)


def _fmt(x):
    return repr(float(x))


def emit_csv(data, path) -> int:
    """Write sweep, nu-curve or g/h data as CSV; returns the number of data rows.

    Columns: sweep -> a, branch_index, re, im, case_label; nu-curves ->
    lambda, nu_1..nu_n; g/h data -> lambda, g, h.
    """
    rows = []
    if isinstance(data, GHPlotData):
        header = ["lambda", "g", "h"]
        rows = [[_fmt(x), _fmt(g), _fmt(h)] for x, g, h in zip(data.x, data.g, data.h)]
    else:
        data = list(data)
        if data and isinstance(data[0], TrajectoryPoint):
            header = ["a", "branch_index", "re", "im", "case_label"]
            for p in data:
                for j, z in enumerate(p.eigenvalues):
                    rows.append([_fmt(p.a), str(j), _fmt(z.real), _fmt(z.imag), p.case_label])
        elif data and isinstance(data[0], NuCurveSample):
            header = ["lambda"] + [f"nu_{j + 1}" for j in range(len(data[0].nus))]
            rows = [[_fmt(p.lam)] + [_fmt(v) for v in p.nus] for p in data]
        elif not data:
            header = ["a", "branch_index", "re", "im", "case_label"]
        else:
            raise TypeError(f"cannot write {type(data[0]).__name__} as CSV")
    try:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(header)
            writer.writerows(rows)
    except OSError as exc:
        raise IoError(f"cannot write {path}: {exc.strerror}") from None
    return len(rows)


# SVG -----------------------------------------------------------------------

_W, _H, _M = 640, 420, 48
_COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b",
           "#e377c2", "#7f7f7f", "#bcbd22", "#17becf")


def _ticks(lo, hi, count=5):
    span = hi - lo
    raw = span / count
    mag = 10.0 ** math.floor(math.log10(raw))
    step = next(k * mag for k in (1, 2, 5, 10) if k * mag >= raw)
    start = math.ceil(lo / step) * step
    out = []
    t = start
    while t <= hi + 1e-12 * span:
        out.append(0.0 if abs(t) < 1e-12 * span else t)
        t += step
    return out


def svg_plot(series: Sequence, xlim, ylim, vlines=(), dots=(), xlabel="", ylabel="", title=""):
    """Render a line plot as SVG text.

    ``series`` is a list of ``(x, y)`` array pairs drawn as polylines, split
    wherever y is not finite or leaves ``ylim``. ``vlines`` are drawn dashed;
    ``dots`` is a list of ``(x, y)`` points drawn as small circles.
    """
    x0, x1 = map(float, xlim)
    y0, y1 = map(float, ylim)
    if x1 <= x0:
        x0, x1 = x0 - 1.0, x0 + 1.0
    if y1 <= y0:
        y0, y1 = y0 - 1.0, y0 + 1.0

    def px(x):
        return _M + (x - x0) / (x1 - x0) * (_W - 2 * _M)

    def py(y):
        return _H - _M - (y - y0) / (y1 - y0) * (_H - 2 * _M)

    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{_W}" height="{_H}" '
           f'viewBox="0 0 {_W} {_H}" font-family="sans-serif" font-size="11">',
           f'<rect width="{_W}" height="{_H}" fill="white"/>']
    if title:
        out.append(f'<text x="{_W / 2:.1f}" y="18" text-anchor="middle" font-size="13">{title}</text>')
    # axes box and ticks
    out.append(f'<rect x="{_M}" y="{_M}" width="{_W - 2 * _M}" height="{_H - 2 * _M}" '
               f'fill="none" stroke="black"/>')
    for t in _ticks(x0, x1):
        X = px(t)
        out.append(f'<line x1="{X:.2f}" y1="{_H - _M}" x2="{X:.2f}" y2="{_H - _M + 4}" stroke="black"/>')
        out.append(f'<text x="{X:.2f}" y="{_H - _M + 16}" text-anchor="middle">{t:g}</text>')
    for t in _ticks(y0, y1):
        Y = py(t)
        out.append(f'<line x1="{_M - 4}" y1="{Y:.2f}" x2="{_M}" y2="{Y:.2f}" stroke="black"/>')
        out.append(f'<text x="{_M - 6}" y="{Y + 4:.2f}" text-anchor="end">{t:g}</text>')
    if x0 < 0.0 < x1:
        out.append(f'<line x1="{px(0):.2f}" y1="{_M}" x2="{px(0):.2f}" y2="{_H - _M}" stroke="#cccccc"/>')
    if y0 < 0.0 < y1:
        out.append(f'<line x1="{_M}" y1="{py(0):.2f}" x2="{_W - _M}" y2="{py(0):.2f}" stroke="#cccccc"/>')
    if xlabel:
        out.append(f'<text x="{_W / 2:.1f}" y="{_H - 10}" text-anchor="middle">{xlabel}</text>')
    if ylabel:
        out.append(f'<text x="14" y="{_H / 2:.1f}" text-anchor="middle" '
                   f'transform="rotate(-90 14 {_H / 2:.1f})">{ylabel}</text>')
    for v in vlines:
        if x0 <= v <= x1:
            out.append(f'<line x1="{px(v):.2f}" y1="{_M}" x2="{px(v):.2f}" y2="{_H - _M}" '
                       f'stroke="gray" stroke-dasharray="5,4"/>')
    for i, (xs, ys) in enumerate(series):
        color = _COLORS[i % len(_COLORS)]
        run = []
        for x, y in zip(xs, ys):
            if math.isfinite(y) and y0 <= y <= y1 and x0 <= x <= x1:
                run.append(f"{px(x):.2f},{py(y):.2f}")
                continue
            if len(run) > 1:
                out.append(f'<polyline points="{" ".join(run)}" fill="none" stroke="{color}"/>')
            run = []
        if len(run) > 1:
            out.append(f'<polyline points="{" ".join(run)}" fill="none" stroke="{color}"/>')
    for x, y in dots:
        if x0 <= x <= x1 and y0 <= y <= y1:
            out.append(f'<circle cx="{px(x):.2f}" cy="{py(y):.2f}" r="1.6" fill="black"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def _padded(lo, hi, frac=0.05):
    pad = frac * (hi - lo) if hi > lo else 1.0
    return lo - pad, hi + pad


def emit_svg(data, path, poles: Optional[Sequence[float]] = None, title="") -> None:
    """Write a plot of sweep, nu-curve or g/h data.

    Sweeps are drawn with Re(lambda) across and a upward, one polyline per
    branch and a dot for every non-real eigenvalue, so the poles (taken from
    ``poles``) are vertical. Nu-curves and g/h plots have lambda across.
    """
    if isinstance(data, GHPlotData):
        poles = data.poles if poles is None else poles
        h_lo, h_hi = float(np.min(data.h)), float(np.max(data.h))
        text = svg_plot([(data.x, data.g), (data.x, data.h)],
                        (data.x[0], data.x[-1]), _padded(h_lo, h_hi),
                        vlines=poles, xlabel="lambda", ylabel="g, h", title=title)
    else:
        data = list(data)
        if not data:
            raise ValueError("nothing to plot")
        if isinstance(data[0], TrajectoryPoint):
            a = np.array([p.a for p in data])
            vals = np.array([p.eigenvalues for p in data])
            series = [(vals[:, j].real, a) for j in range(vals.shape[1])]
            dots = [(z.real, p.a) for p in data for z in p.eigenvalues if z.imag != 0.0]
            re = vals.real
            text = svg_plot(series, _padded(float(re.min()), float(re.max())),
                            _padded(float(a[0]), float(a[-1]), 0.0),
                            vlines=() if poles is None else poles, dots=dots,
                            xlabel="Re lambda", ylabel="a", title=title)
        elif isinstance(data[0], NuCurveSample):
            lam = np.array([p.lam for p in data])
            nus = np.array([p.nus for p in data])
            series = [(lam, nus[:, j]) for j in range(nus.shape[1])]
            text = svg_plot(series, (lam[0], lam[-1]), _padded(float(nus.min()), float(nus.max())),
                            vlines=() if poles is None else poles, xlabel="lambda", ylabel="nu", title=title)
        else:
            raise TypeError(f"cannot plot {type(data[0]).__name__}")
    try:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    except OSError as exc:
        raise IoError(f"cannot write {path}: {exc.strerror}") from None

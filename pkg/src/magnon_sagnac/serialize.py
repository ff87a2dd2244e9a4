"""Deterministic output writers for sweep results.

CSV is the primary format: one row per grid point in row-major order,
floats printed with 17 significant digits so a reread reproduces them
bitwise, non-finite values spelled nan / inf / -inf, LF line endings.
Rerunning the same sweep yields byte-identical files regardless of
thread count.  JSON mirrors the CSV columns as an array of records
(non-finite values become the same strings, since strict JSON has no
tokens for them).

The SVG writer is intentionally minimal: line plots for one axis or a
small family of rows, a downsampled rectangle heatmap otherwise.  No
timestamps, random ids or library version strings are embedded, for the
same determinism reason.
"""

from __future__ import annotations

import json
import math
from pathlib import Path

import numpy as np

from .sweep import FigurePreset, SweepResult

CSV_HEADER = ("axis1,axis2,T12,T21,R,I_signed_db,I_abs_db,"
              "direction,error_code")


def _fmt(x: float) -> str:
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return f"{x:.16e}"


def jsonable(x: float):
    """A float if finite, else its nan/inf string (strict JSON has neither)."""
    return x if math.isfinite(x) else _fmt(x)


def _rows(result: SweepResult):
    directions = result.directions()
    i_abs = result.i_abs_db
    two_axes = len(result.axes) == 2
    for flat, idx in enumerate(np.ndindex(result.shape)):
        axis1 = result.axis_values[0][idx[0]]
        axis2 = _fmt(result.axis_values[1][idx[1]]) if two_axes else ""
        yield (_fmt(axis1), axis2, _fmt(result.t12[idx]),
               _fmt(result.t21[idx]), _fmt(result.ratio[idx]),
               _fmt(result.i_signed_db[idx]), _fmt(i_abs[idx]),
               str(directions[idx]), result.error_codes.get(flat, ""))


def csv_text(result: SweepResult) -> str:
    lines = [CSV_HEADER]
    lines.extend(",".join(row) for row in _rows(result))
    return "\n".join(lines) + "\n"


def write_csv(result: SweepResult, path) -> None:
    Path(path).write_text(csv_text(result), encoding="utf-8", newline="\n")


def json_records(result: SweepResult) -> list[dict]:
    directions = result.directions()
    i_abs = result.i_abs_db
    two_axes = len(result.axes) == 2
    records = []
    for flat, idx in enumerate(np.ndindex(result.shape)):
        records.append({
            "axis1": jsonable(float(result.axis_values[0][idx[0]])),
            "axis2": (jsonable(float(result.axis_values[1][idx[1]]))
                      if two_axes else None),
            "T12": jsonable(float(result.t12[idx])),
            "T21": jsonable(float(result.t21[idx])),
            "R": jsonable(float(result.ratio[idx])),
            "I_signed_db": jsonable(float(result.i_signed_db[idx])),
            "I_abs_db": jsonable(float(i_abs[idx])),
            "direction": str(directions[idx]),
            "error_code": result.error_codes.get(flat, ""),
        })
    return records


def json_text(result: SweepResult) -> str:
    return json.dumps(json_records(result), indent=1) + "\n"


def write_json(result: SweepResult, path) -> None:
    Path(path).write_text(json_text(result), encoding="utf-8", newline="\n")


# SVG rendering ---------------------------------------------------------

_WIDTH, _HEIGHT = 720, 480
_LEFT, _RIGHT, _TOP, _BOTTOM = 76, 20, 20, 48
_PALETTE = ("#c1121f", "#003049", "#588157", "#bc6c25", "#6a4c93",
            "#118ab2", "#9c6644", "#ef476f")
_HEAT_LOW = (29, 53, 87)      # #1d3557
_HEAT_HIGH = (230, 57, 70)    # #e63946
_HEAT_NAN = "#adb5bd"
_MAX_HEAT_CELLS = 120


def _finite_range(values) -> tuple[float, float]:
    finite = values[np.isfinite(values)]
    if finite.size == 0:
        return 0.0, 1.0
    lo, hi = float(finite.min()), float(finite.max())
    if lo == hi:
        lo, hi = lo - 0.5, hi + 0.5
    return lo, hi


def _scaler(lo: float, hi: float, out_lo: float, out_hi: float):
    span = hi - lo

    def to_pixels(v: float) -> float:
        return out_lo + (v - lo) / span * (out_hi - out_lo)

    return to_pixels


def _polyline_chunks(xs, ys, to_x, to_y):
    """Split a series at non-finite points and emit pixel coordinates."""
    chunks, current = [], []
    for x, y in zip(xs, ys):
        if math.isfinite(x) and math.isfinite(y):
            current.append(f"{to_x(x):.2f},{to_y(y):.2f}")
        elif current:
            chunks.append(current)
            current = []
    if current:
        chunks.append(current)
    return [" ".join(c) for c in chunks if len(c) >= 2]


def _axis_frame(to_x, to_y, x_range, y_range, x_label, y_label) -> list[str]:
    x0, x1 = _LEFT, _WIDTH - _RIGHT
    y0, y1 = _HEIGHT - _BOTTOM, _TOP
    parts = [f'<rect x="{x0}" y="{y1}" width="{x1 - x0}" height="{y0 - y1}" '
             'fill="none" stroke="#333333" stroke-width="1"/>']
    for i in range(5):
        vx = x_range[0] + (x_range[1] - x_range[0]) * i / 4
        px = to_x(vx)
        parts.append(f'<line x1="{px:.2f}" y1="{y0}" x2="{px:.2f}" '
                     f'y2="{y0 + 4}" stroke="#333333"/>')
        parts.append(f'<text x="{px:.2f}" y="{y0 + 18}" font-size="11" '
                     f'text-anchor="middle" fill="#333333">{vx:.6g}</text>')
        vy = y_range[0] + (y_range[1] - y_range[0]) * i / 4
        py = to_y(vy)
        parts.append(f'<line x1="{x0 - 4}" y1="{py:.2f}" x2="{x0}" '
                     f'y2="{py:.2f}" stroke="#333333"/>')
        parts.append(f'<text x="{x0 - 8}" y="{py + 4:.2f}" font-size="11" '
                     f'text-anchor="end" fill="#333333">{vy:.6g}</text>')
    parts.append(f'<text x="{(x0 + x1) / 2:.2f}" y="{_HEIGHT - 10}" '
                 f'font-size="12" text-anchor="middle" '
                 f'fill="#333333">{x_label}</text>')
    parts.append(f'<text x="16" y="{(y0 + y1) / 2:.2f}" font-size="12" '
                 f'text-anchor="middle" fill="#333333" '
                 f'transform="rotate(-90 16 {(y0 + y1) / 2:.2f})">'
                 f'{y_label}</text>')
    return parts


def _series_for(result: SweepResult, plot: str):
    if plot == "transmissions":
        return [("T12", result.t12), ("T21", result.t21)], "transmission"
    if plot == "i_signed":
        return [("I (dB)", result.i_signed_db)], "I (dB)"
    return [("|I| (dB)", result.i_abs_db)], "|I| (dB)"


def _heat_color(v: float) -> str:
    v = min(max(v, 0.0), 1.0)
    rgb = tuple(round(lo + v * (hi - lo))
                for lo, hi in zip(_HEAT_LOW, _HEAT_HIGH))
    return "#{:02x}{:02x}{:02x}".format(*rgb)


def svg_text(result: SweepResult, plot: str = "i_abs") -> str:
    body: list[str] = []
    fields, y_label = _series_for(result, plot)
    if len(result.axes) == 1 or result.shape[0] <= 8:
        if len(result.axes) == 1:
            xs = result.axis_values[0]
            series = [(label, values) for label, values in fields]
            x_label = result.axes[0].label()
        else:
            # A thin first axis renders as one line per first-axis value.
            xs = result.axis_values[1]
            label_base = result.axes[0].label()
            values = fields[0][1]
            series = [(f"{label_base}={result.axis_values[0][i]:.6g}",
                       values[i]) for i in range(result.shape[0])]
            x_label = result.axes[1].label()
        x_range = (float(xs[0]), float(xs[-1]))
        y_values = np.concatenate([np.asarray(v, dtype=float).ravel()
                                   for _, v in series])
        lo, hi = _finite_range(y_values)
        pad = 0.05 * (hi - lo)
        y_range = (lo - pad, hi + pad)
        to_x = _scaler(*x_range, _LEFT, _WIDTH - _RIGHT)
        to_y = _scaler(*y_range, _HEIGHT - _BOTTOM, _TOP)
        body.extend(_axis_frame(to_x, to_y, x_range, y_range, x_label, y_label))
        for i, (label, values) in enumerate(series):
            color = _PALETTE[i % len(_PALETTE)]
            for points in _polyline_chunks(xs, np.asarray(values, dtype=float),
                                           to_x, to_y):
                body.append(f'<polyline points="{points}" fill="none" '
                            f'stroke="{color}" stroke-width="1.5"/>')
            ly = _TOP + 16 + 16 * i
            body.append(f'<line x1="{_WIDTH - 190}" y1="{ly - 4}" '
                        f'x2="{_WIDTH - 166}" y2="{ly - 4}" stroke="{color}" '
                        'stroke-width="1.5"/>')
            body.append(f'<text x="{_WIDTH - 160}" y="{ly}" font-size="11" '
                        f'fill="#333333">{label}</text>')
    else:
        values = np.asarray(fields[0][1], dtype=float)
        n1, n2 = result.shape
        stride1 = max(1, math.ceil(n1 / _MAX_HEAT_CELLS))
        stride2 = max(1, math.ceil(n2 / _MAX_HEAT_CELLS))
        sub = values[::stride1, ::stride2]
        x_vals = result.axis_values[0][::stride1]
        y_vals = result.axis_values[1][::stride2]
        lo, hi = _finite_range(sub)
        x_range = (float(result.axis_values[0][0]),
                   float(result.axis_values[0][-1]))
        y_range = (float(result.axis_values[1][0]),
                   float(result.axis_values[1][-1]))
        to_x = _scaler(*x_range, _LEFT, _WIDTH - _RIGHT)
        to_y = _scaler(*y_range, _HEIGHT - _BOTTOM, _TOP)
        body.extend(_axis_frame(to_x, to_y, x_range, y_range,
                                result.axes[0].label(),
                                result.axes[1].label()))
        cell_w = (_WIDTH - _LEFT - _RIGHT) / len(x_vals)
        cell_h = (_HEIGHT - _TOP - _BOTTOM) / len(y_vals)
        for i, xv in enumerate(x_vals):
            px = _LEFT + i * cell_w
            for j, yv in enumerate(y_vals):
                v = sub[i, j]
                fill = (_heat_color((v - lo) / (hi - lo))
                        if math.isfinite(v) else _HEAT_NAN)
                py = _HEIGHT - _BOTTOM - (j + 1) * cell_h
                body.append(f'<rect x="{px:.2f}" y="{py:.2f}" '
                            f'width="{cell_w:.2f}" height="{cell_h:.2f}" '
                            f'fill="{fill}"/>')
        body.append(f'<text x="{_WIDTH - _RIGHT}" y="{_TOP - 6}" '
                    f'font-size="11" text-anchor="end" fill="#333333">'
                    f'{y_label}: {lo:.6g} (dark) to {hi:.6g} (red)</text>')
    header = (f'<svg xmlns="http://www.w3.org/2000/svg" width="{_WIDTH}" '
              f'height="{_HEIGHT}" viewBox="0 0 {_WIDTH} {_HEIGHT}">')
    return "\n".join([header, '<rect width="100%" height="100%" '
                      'fill="#ffffff"/>'] + body + ["</svg>"]) + "\n"


def write_svg(result: SweepResult, path, plot: str = "i_abs") -> None:
    Path(path).write_text(svg_text(result, plot), encoding="utf-8",
                          newline="\n")


def write_preset_outputs(preset: FigurePreset, result: SweepResult,
                         out_dir) -> list[Path]:
    """Write {name}.csv and {name}.svg for a preset run; returns paths."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    csv_path = out_dir / f"{preset.name}.csv"
    svg_path = out_dir / f"{preset.name}.svg"
    write_csv(result, csv_path)
    write_svg(result, svg_path, preset.plot)
    return [csv_path, svg_path]

"""Parameter sweeps over the steady-state transmissions.

Grids are evaluated through the vectorized closed-form kernel in
:mod:`.steady_state`, one or two axes at a time.  Points that fail
validation (non-positive damping rate, unstable squeezing input, no real
extremal shift, vanishing transmission) are marked with a per-point error
code and filled with nan instead of aborting the whole sweep; only a
sweep in which every single point fails raises.

The Fizeau shift can either be held at the base value (or swept as an
axis) or re-optimized per grid point through ``delta_f_policy``, which
picks the closed-form extremal shift of either sign branch and optionally
clamps it to a feasibility band.

Results are deterministic: rerunning a sweep with any thread count gives
bitwise identical arrays.  ``MAGNON_SAGNAC_THREADS`` (or the ``threads``
argument) chunks the leading axis across a thread pool, which only pays
off for large two-dimensional grids.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from enum import Enum

import numpy as np

from .model import (FEASIBLE_FIZEAU_BAND, CavityMode, PhysicsError,
                    SqueezeMode, SystemParams, has_uniform_ports, validate,
                    with_delta_f)
from .steady_state import TransmissionReport, transmission_grid
from .analysis import brute_force_optimum

THREADS_ENV_VAR = "MAGNON_SAGNAC_THREADS"

# Codes that invalidate a grid point; its result columns are set to nan.
# INF_ISOLATION is informational, the point keeps its (infinite) values.
_SCRUB_CODES = frozenset({"RATE_POSITIVE", "NONFINITE", "COUPLING_NEGATIVE",
                          "NO_REAL_EXTREMUM", "EXTREMUM_SEARCH_FAILED"})


class SweepError(Exception):
    """Sweep configuration is unusable or every grid point failed."""


class SweepParameter(Enum):
    DELTA_F = "delta_f"
    GAMMA_M = "gamma_m"
    KAPPA = "kappa"
    DELTA = "delta"
    SQUEEZE = "G"
    COUPLING_RATIO = "g2_over_g1"
    OMEGA_S = "omega_s"


class DeltaFPolicy(Enum):
    FIXED = "fixed"
    EXTREMAL_POSITIVE = "extremal_positive"
    EXTREMAL_NEGATIVE = "extremal_negative"


@dataclass(frozen=True)
class Axis:
    """One sweep axis: ``count`` uniform steps from ``start`` to ``stop``.

    With ``normalization`` set, axis values are dimensionless multiples of
    the *base* magnon or optical linewidth (the base one even when that
    same linewidth is swept on the other axis); the CSV columns report the
    normalized values while the physics uses values * divisor.
    """

    parameter: SweepParameter
    start: float
    stop: float
    count: int
    normalization: SweepParameter | None = None

    def __post_init__(self) -> None:
        if self.count < 2:
            raise ValueError("axis needs at least 2 points")
        if not (math.isfinite(self.start) and math.isfinite(self.stop)):
            raise ValueError("axis bounds must be finite")
        if not self.start < self.stop:
            raise ValueError("axis start must lie below stop")
        if self.normalization not in (None, SweepParameter.GAMMA_M,
                                      SweepParameter.KAPPA):
            raise ValueError("normalization divisor must be gamma_m or kappa")

    def values(self) -> np.ndarray:
        """Axis values as written to output files (normalized units)."""
        return np.linspace(self.start, self.stop, self.count)

    def scale(self, base: SystemParams) -> float:
        if self.normalization is None:
            return 1.0
        if self.normalization is SweepParameter.GAMMA_M:
            return base.magnon.gamma_m_mhz
        return base.mode_1.kappa_mhz

    def label(self) -> str:
        if self.normalization is None:
            return self.parameter.value
        return f"{self.parameter.value}/{self.normalization.value}"


def apply_parameter(params: SystemParams, parameter: SweepParameter,
                    value: float) -> SystemParams:
    """Copy of ``params`` with one physical quantity replaced.

    KAPPA rewrites both optical modes, preserving each mode's coupling
    fraction.  COUPLING_RATIO rescales g0_2 against the current g0_1.
    """
    if parameter is SweepParameter.DELTA_F:
        return replace(params, delta_f_mhz=value)
    if parameter is SweepParameter.DELTA:
        return replace(params, delta_mhz=value)
    if parameter is SweepParameter.GAMMA_M:
        return replace(params, magnon=replace(params.magnon, gamma_m_mhz=value))
    if parameter is SweepParameter.KAPPA:
        return replace(params,
                       mode_1=CavityMode.from_eta(value, params.mode_1.eta),
                       mode_2=CavityMode.from_eta(value, params.mode_2.eta))
    if parameter is SweepParameter.SQUEEZE:
        if params.squeeze.mode is not SqueezeMode.DIRECT:
            raise SweepError("sweeping the squeeze exponent requires DIRECT "
                             "squeezing, not FROM_PUMP")
        return replace(params, squeeze=replace(params.squeeze, g_squeeze=value))
    if parameter is SweepParameter.OMEGA_S:
        return replace(params,
                       squeeze=replace(params.squeeze, omega_s_override_mhz=value))
    if parameter is SweepParameter.COUPLING_RATIO:
        return replace(params, g0_2_mhz=value * params.g0_1_mhz)
    raise ValueError(f"unhandled sweep parameter {parameter}")


def parameter_value(params: SystemParams, parameter: SweepParameter) -> float:
    """Current value of a sweepable quantity, mirror of apply_parameter."""
    if parameter is SweepParameter.DELTA_F:
        return params.delta_f_mhz
    if parameter is SweepParameter.DELTA:
        return params.delta_mhz
    if parameter is SweepParameter.GAMMA_M:
        return params.magnon.gamma_m_mhz
    if parameter is SweepParameter.KAPPA:
        return params.mode_1.kappa_mhz
    if parameter is SweepParameter.SQUEEZE:
        if params.squeeze.mode is not SqueezeMode.DIRECT:
            raise SweepError("squeeze exponent is only explicit in DIRECT mode")
        return params.squeeze.g_squeeze
    if parameter is SweepParameter.OMEGA_S:
        return params.effective().omega_s_mhz
    if parameter is SweepParameter.COUPLING_RATIO:
        return params.g0_2_mhz / params.g0_1_mhz
    raise ValueError(f"unhandled sweep parameter {parameter}")


def _resolve_threads(threads: int | None) -> int:
    if threads is None:
        raw = os.environ.get(THREADS_ENV_VAR, "").strip()
        if not raw:
            return 1
        try:
            threads = int(raw)
        except ValueError:
            raise ValueError(f"{THREADS_ENV_VAR} must be an integer, "
                             f"got {raw!r}") from None
    if threads < 0:
        raise ValueError("thread count must be >= 0 (0 means single pass)")
    return threads if threads > 1 else 1


def _evaluate_grid(kernel_args: dict, shape: tuple[int, ...], n_threads: int):
    if n_threads <= 1 or shape[0] < 2 * n_threads:
        out = transmission_grid(**kernel_args)
    else:
        full = {k: np.broadcast_to(np.asarray(v), shape)
                for k, v in kernel_args.items()}
        bounds = np.linspace(0, shape[0], n_threads + 1, dtype=int)
        chunks = [slice(a, b) for a, b in zip(bounds[:-1], bounds[1:]) if a < b]

        def work(sl):
            return transmission_grid(**{k: v[sl] for k, v in full.items()})

        with ThreadPoolExecutor(max_workers=len(chunks)) as pool:
            parts = list(pool.map(work, chunks))
        # Reassembled in chunk order, so the result is independent of the
        # thread count (each element is computed by the same expression).
        out = tuple(np.concatenate([p[i] for p in parts], axis=0)
                    for i in range(4))
    return tuple(np.ascontiguousarray(np.broadcast_to(np.asarray(o, dtype=float),
                                                      shape)).copy()
                 for o in out)


def _base_kernel_args(base: SystemParams) -> dict:
    eff = base.effective()
    return {
        "delta": base.delta_mhz,
        "delta_f": base.delta_f_mhz,
        "kappa_1": base.mode_1.kappa_mhz,
        "kappa_2": base.mode_2.kappa_mhz,
        "gamma_m": base.magnon.gamma_m_mhz,
        "omega_s": eff.omega_s_mhz,
        "g_1": eff.g_eff_1_mhz,
        "g_2": eff.g_eff_2_mhz,
        "eta_1": base.mode_1.eta,
        "eta_2": base.mode_2.eta,
        "eta_3": base.magnon.eta3,
        "eps_1": base.drive.eps_1,
        "eps_2": base.drive.eps_2,
        "eps_3": base.drive.eps_3_eff,
    }


def _substitute(args: dict, base: SystemParams, parameter: SweepParameter,
                grid: np.ndarray) -> None:
    if parameter is SweepParameter.DELTA_F:
        args["delta_f"] = grid
    elif parameter is SweepParameter.DELTA:
        args["delta"] = grid
    elif parameter is SweepParameter.GAMMA_M:
        args["gamma_m"] = grid
    elif parameter is SweepParameter.KAPPA:
        args["kappa_1"] = grid
        args["kappa_2"] = grid
    elif parameter is SweepParameter.OMEGA_S:
        args["omega_s"] = grid
    elif parameter is SweepParameter.SQUEEZE:
        if base.squeeze.mode is not SqueezeMode.DIRECT:
            raise SweepError("sweeping the squeeze exponent requires DIRECT "
                             "squeezing, not FROM_PUMP")
        # The squeezed-frame drive eps_3_eff is part of the base and is
        # deliberately not rescaled along a squeeze axis.
        ch = np.cosh(2.0 * grid)
        args["g_1"] = base.g0_1_mhz * ch
        args["g_2"] = base.g0_2_mhz * ch
    elif parameter is SweepParameter.COUPLING_RATIO:
        args["g_2"] = grid * np.asarray(args["g_1"])
    else:
        raise ValueError(f"unhandled sweep parameter {parameter}")


@dataclass
class SweepResult:
    """Dense grid of transmissions plus sparse per-point error codes.

    Arrays are indexed ``[i]`` for one axis and ``[i, j]`` for two, with
    axis 0 the first axis given to :func:`sweep`.  ``axis_values`` holds
    the file-facing (possibly normalized) coordinates; ``delta_f_mhz`` the
    shift actually used at each point, which differs from the base value
    under an extremal policy.  ``error_codes`` maps flat (row-major)
    indices to a short code string for the points that failed, plus the
    informational INF_ISOLATION marker for points where the backward
    output vanishes exactly.
    """

    base: SystemParams
    axes: tuple[Axis, ...]
    axis_values: tuple[np.ndarray, ...]
    delta_f_mhz: np.ndarray
    t12: np.ndarray
    t21: np.ndarray
    ratio: np.ndarray
    i_signed_db: np.ndarray
    error_codes: dict[int, str] = field(default_factory=dict)
    meta: dict = field(default_factory=dict)

    @property
    def shape(self) -> tuple[int, ...]:
        return self.t12.shape

    @property
    def n_points(self) -> int:
        return self.t12.size

    @property
    def i_abs_db(self) -> np.ndarray:
        return np.abs(self.i_signed_db)

    def error_code_at(self, *idx: int) -> str | None:
        flat = int(np.ravel_multi_index(idx, self.shape))
        return self.error_codes.get(flat)

    def directions(self, tol_db: float = 1e-9) -> np.ndarray:
        """Per-point direction labels; failed points come back empty."""
        out = np.full(self.shape, "", dtype="<U10")
        i = self.i_signed_db
        finite = ~np.isnan(i)
        out[finite & (np.abs(i) <= tol_db)] = "reciprocal"
        out[finite & (i > tol_db)] = "forward"
        out[finite & (i < -tol_db)] = "backward"
        return out

    def params_at(self, *idx: int) -> SystemParams:
        """Reconstruct the full parameter set behind one grid point."""
        p = self.base
        for ax, values, k in zip(self.axes, self.axis_values, idx):
            p = apply_parameter(p, ax.parameter,
                                float(values[k]) * ax.scale(self.base))
        return with_delta_f(p, float(self.delta_f_mhz[idx]))

    def report_at(self, *idx: int) -> TransmissionReport:
        i_signed = float(self.i_signed_db[idx])
        return TransmissionReport(float(self.t12[idx]), float(self.t21[idx]),
                                  float(self.ratio[idx]), i_signed,
                                  abs(i_signed))


def sweep(base: SystemParams, axes, *,
          delta_f_policy: DeltaFPolicy | str = DeltaFPolicy.FIXED,
          delta_f_band: tuple[float, float] | None = None,
          threads: int | None = None) -> SweepResult:
    """Evaluate transmissions over one or two parameter axes.

    ``delta_f_policy`` FIXED uses the base (or swept) Fizeau shift; the
    EXTREMAL policies re-derive the shift at every grid point from the
    closed-form extremum condition, taking the positive or negative sign
    branch and clamping to ``delta_f_band`` when given.  Extremal policies
    exclude a DELTA_F axis.  For a base without uniform ports the closed
    form does not apply and each point falls back to a numeric search
    over the band (much slower).
    """
    axes = tuple(axes)
    if not 1 <= len(axes) <= 2:
        raise SweepError("sweep takes one or two axes")
    if len(axes) == 2 and axes[0].parameter is axes[1].parameter:
        raise SweepError("the two axes must sweep different parameters")
    policy = DeltaFPolicy(delta_f_policy)
    if delta_f_band is not None and not delta_f_band[0] < delta_f_band[1]:
        raise SweepError("delta_f_band must satisfy lo < hi")
    problems = validate(base)
    if problems:
        raise SweepError("base parameters invalid: "
                         + "; ".join(v.message for v in problems))
    if base.drive.eps_1 <= 0.0 or base.drive.eps_2 <= 0.0:
        raise SweepError("optical drive amplitudes must be positive")
    n_threads = _resolve_threads(threads)

    display = tuple(ax.values() for ax in axes)
    physical = tuple(vals * ax.scale(base) for ax, vals in zip(axes, display))
    if len(axes) == 1:
        grids = [physical[0]]
        shape: tuple[int, ...] = (axes[0].count,)
    else:
        mesh = np.meshgrid(physical[0], physical[1], indexing="ij")
        grids = list(mesh)
        shape = (axes[0].count, axes[1].count)

    args = _base_kernel_args(base)  # raises on unstable FROM_PUMP input
    # Apply a squeeze axis before a coupling-ratio axis so the ratio acts
    # on the squeeze-enhanced value.
    order = sorted(range(len(axes)),
                   key=lambda i: axes[i].parameter is not SweepParameter.SQUEEZE)
    for i in order:
        _substitute(args, base, axes[i].parameter, grids[i])

    errors: dict[int, str] = {}

    def mark(mask, code: str) -> None:
        for flat in np.flatnonzero(np.broadcast_to(mask, shape).ravel()):
            errors.setdefault(int(flat), code)

    for key in ("kappa_1", "kappa_2", "gamma_m"):
        mark(np.asarray(args[key]) <= 0.0, "RATE_POSITIVE")
    for key in ("g_1", "g_2"):
        mark(np.asarray(args[key]) < 0.0, "COUPLING_NEGATIVE")
    for key in ("delta", "delta_f", "kappa_1", "kappa_2", "gamma_m",
                "g_1", "g_2", "omega_s"):
        value = np.asarray(args[key], dtype=float)
        if value.ndim:
            mark(~np.isfinite(value), "NONFINITE")

    if policy is not DeltaFPolicy.FIXED:
        if any(ax.parameter is SweepParameter.DELTA_F for ax in axes):
            raise SweepError("a delta_f axis cannot be combined with an "
                             "extremal delta_f policy")
        positive = policy is DeltaFPolicy.EXTREMAL_POSITIVE
        if has_uniform_ports(base):
            shift = _extremal_shift_arrays(args, positive, shape, mark)
        else:
            shift = _extremal_shift_fallback(base, axes, physical, shape,
                                             positive, delta_f_band, errors)
        if delta_f_band is not None:
            shift = np.clip(shift, delta_f_band[0], delta_f_band[1])
        args["delta_f"] = shift

    t12, t21, ratio, i_signed = _evaluate_grid(args, shape, n_threads)
    mark(np.isnan(ratio), "NO_TRANSMISSION")
    mark(np.isinf(ratio), "INF_ISOLATION")

    delta_f_full = np.broadcast_to(np.asarray(args["delta_f"], dtype=float),
                                   shape).copy()
    for flat, code in errors.items():
        if code in _SCRUB_CODES:
            for arr in (t12, t21, ratio, i_signed, delta_f_full):
                arr.ravel()[flat] = math.nan

    n_failed = sum(1 for code in errors.values() if code != "INF_ISOLATION")
    if n_failed == int(np.prod(shape)):
        raise SweepError("every grid point failed validation")

    meta = {"delta_f_policy": policy.value,
            "delta_f_band": delta_f_band,
            "threads": n_threads,
            "axis_labels": tuple(ax.label() for ax in axes)}
    return SweepResult(base, axes, display, delta_f_full, t12, t21, ratio,
                       i_signed, errors, meta)


def _extremal_shift_arrays(args: dict, positive: bool, shape, mark) -> np.ndarray:
    """Vectorized extremal Fizeau shift (uniform ports assumed)."""
    with np.errstate(invalid="ignore", divide="ignore"):
        kappa = np.asarray(args["kappa_1"], dtype=float)
        gamma_m = np.asarray(args["gamma_m"], dtype=float)
        g1 = np.asarray(args["g_1"], dtype=float)
        g2 = np.asarray(args["g_2"], dtype=float)
        delta = np.asarray(args["delta"], dtype=float)
        rt = np.sqrt(kappa / gamma_m)
        u1 = rt * (g1 - g2)
        u2 = kappa * kappa + 4.0 * (delta - g1 * rt) * (delta - g2 * rt)
        disc = u1 * u1 + u2
        mark(np.isfinite(disc) & (disc < 0.0), "NO_REAL_EXTREMUM")
        root = np.sqrt(np.maximum(disc, 0.0))
        sign = 1.0 if positive else -1.0
        return np.broadcast_to(0.5 * (u1 + sign * root), shape).copy()


def _extremal_shift_fallback(base, axes, physical, shape, positive: bool,
                             band, errors: dict[int, str]) -> np.ndarray:
    """Per-point numeric extremum search for non-uniform ports."""
    lo, hi = band if band is not None else FEASIBLE_FIZEAU_BAND
    half = (0.0, hi) if positive else (lo, 0.0)
    shift = np.full(shape, math.nan)
    for flat, idx in enumerate(np.ndindex(shape)):
        if flat in errors:
            continue
        point = base
        for ax, values, k in zip(axes, physical, idx):
            point = apply_parameter(point, ax.parameter, float(values[k]))
        try:
            shift[idx] = brute_force_optimum(point, half,
                                             grid_points=301).delta_f_mhz
        except (PhysicsError, ValueError):
            errors.setdefault(flat, "EXTREMUM_SEARCH_FAILED")
    return shift


@dataclass(frozen=True)
class FigurePreset:
    """A bundled demonstration dataset: base parameters plus axes."""

    name: str
    description: str
    base: SystemParams
    axes: tuple[Axis, ...]
    delta_f_policy: DeltaFPolicy = DeltaFPolicy.FIXED
    delta_f_band: tuple[float, float] | None = None
    plot: str = "i_abs"  # rendering hint: transmissions | i_abs | i_signed


def _presets() -> dict[str, FigurePreset]:
    sym = SystemParams.symmetric
    spectrum = Axis(SweepParameter.DELTA_F, -16.0, 16.0, 6401,
                    SweepParameter.GAMMA_M)
    wide = Axis(SweepParameter.DELTA_F, -65.0 / 1.1, 65.0 / 1.1, 2001,
                SweepParameter.KAPPA)
    narrow = Axis(SweepParameter.DELTA_F, -4.0, 4.0, 6401,
                  SweepParameter.GAMMA_M)
    gamma_fine = Axis(SweepParameter.GAMMA_M, 1.0, 12.0, 551)
    out = [
        FigurePreset(
            "fig2a", "both transmissions against the normalized Fizeau shift",
            sym(), (spectrum,), plot="transmissions"),
        FigurePreset(
            "fig2b", "isolation against the normalized Fizeau shift",
            sym(), (spectrum,)),
        FigurePreset(
            "fig3a", "isolation over Fizeau shift and magnon linewidth, "
            "resonant pump",
            sym(), (wide, Axis(SweepParameter.GAMMA_M, 1.5, 12.0, 211))),
        FigurePreset(
            "fig3b", "isolation over Fizeau shift and magnon linewidth, "
            "detuned pump (direction reverses across gamma_0)",
            sym(delta_mhz=22.0),
            (wide, Axis(SweepParameter.GAMMA_M, 1.5, 12.0, 211))),
        FigurePreset(
            "fig4a", "isolation over Fizeau shift and optical linewidth, "
            "resonant pump",
            sym(), (narrow, Axis(SweepParameter.KAPPA, 0.114, 10.0, 201))),
        FigurePreset(
            "fig4b", "isolation over Fizeau shift and optical linewidth, "
            "detuned pump (direction reverses across kappa_0)",
            sym(delta_mhz=20.0),
            (narrow, Axis(SweepParameter.KAPPA, 0.112, 10.0, 201))),
        FigurePreset(
            "fig5a", "signed extremal isolation against magnon linewidth for "
            "three pump detunings, shift clamped to the feasible band",
            sym(), (Axis(SweepParameter.DELTA, 0.0, 22.0, 3), gamma_fine),
            DeltaFPolicy.EXTREMAL_POSITIVE, FEASIBLE_FIZEAU_BAND,
            plot="i_signed"),
        FigurePreset(
            "fig5b", "signed extremal isolation against optical linewidth for "
            "two pump detunings, shift clamped to the feasible band",
            sym(), (Axis(SweepParameter.DELTA, 0.0, 20.0, 2),
                    Axis(SweepParameter.KAPPA, 0.1, 2.0, 551)),
            DeltaFPolicy.EXTREMAL_POSITIVE, FEASIBLE_FIZEAU_BAND,
            plot="i_signed"),
        FigurePreset(
            "fig6", "extremal isolation against magnon linewidth for several "
            "squeeze exponents, shift left unclamped",
            sym(), (Axis(SweepParameter.SQUEEZE, 0.0, 1.0, 5), gamma_fine),
            DeltaFPolicy.EXTREMAL_POSITIVE),
        FigurePreset(
            "fig7a", "extremal isolation (positive shift branch) against "
            "magnon linewidth for three coupling ratios",
            sym(), (Axis(SweepParameter.COUPLING_RATIO, 1.0, 2.0, 3),
                    gamma_fine),
            DeltaFPolicy.EXTREMAL_POSITIVE, FEASIBLE_FIZEAU_BAND),
        FigurePreset(
            "fig7b", "extremal isolation (negative shift branch) against "
            "magnon linewidth for three coupling ratios",
            sym(), (Axis(SweepParameter.COUPLING_RATIO, 1.0, 2.0, 3),
                    gamma_fine),
            DeltaFPolicy.EXTREMAL_NEGATIVE, FEASIBLE_FIZEAU_BAND),
    ]
    return {p.name: p for p in out}


_PRESET_TABLE = _presets()
PRESET_NAMES = tuple(_PRESET_TABLE)


def figure_preset(name: str) -> FigurePreset:
    try:
        return _PRESET_TABLE[name]
    except KeyError:
        raise ValueError(f"unknown preset {name!r}; available: "
                         + ", ".join(PRESET_NAMES)) from None


def run_preset(name: str, threads: int | None = None) -> tuple[FigurePreset,
                                                               SweepResult]:
    preset = figure_preset(name)
    result = sweep(preset.base, preset.axes,
                   delta_f_policy=preset.delta_f_policy,
                   delta_f_band=preset.delta_f_band, threads=threads)
    return preset, result

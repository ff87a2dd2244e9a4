"""Extremal Fizeau shifts, impedance matching and direction bookkeeping.

For a symmetric system (equal ports, equal couplings g) the isolation
ratio as a function of the Fizeau shift takes the compact form

    R(delta_f) = (kappa^2/4 + (u - delta_f)^2) / (kappa^2/4 + (u + delta_f)^2)

with u = delta - g * sqrt(kappa / gamma_m), which is extremal at
delta_f = +/- sqrt(kappa^2/4 + u^2).  Note R is independent of the
squeezed-frame frequency omega_s; it cancels between the two drive
directions.  The asymmetric-coupling generalization keeps uniform ports
but lets g_1 and g_2 differ, turning the extremum condition into a
quadratic whose two roots are no longer mirror images.

The sign u = 0, i.e. delta = g * sqrt(kappa / gamma_m), is the impedance
matched point where transmission is reciprocal for every delta_f.  Solved
for the damping rates this gives the reversal thresholds gamma_0 and
kappa_0 reported by :func:`reciprocal_points`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from .model import (FEASIBLE_FIZEAU_BAND, PhysicsError, SystemParams,
                    has_uniform_ports, is_symmetric, with_delta_f)
from .steady_state import TransmissionReport, transmissions


class SymmetryRequiredError(PhysicsError):
    """Closed-form analysis invoked outside its symmetry preconditions."""


class NoRealExtremumError(PhysicsError):
    """The extremum quadratic has a negative discriminant."""

    def __init__(self, discriminant: float):
        super().__init__(f"no real extremal Fizeau shift, discriminant = "
                         f"{discriminant} MHz^2")
        self.discriminant = discriminant


class Direction(Enum):
    """Which transmission dominates: FORWARD means port 2 to port 1
    (T12 > T21), BACKWARD the reverse."""

    FORWARD = "forward"
    BACKWARD = "backward"
    RECIPROCAL = "reciprocal"


def classify_direction(report: TransmissionReport,
                       tol_db: float = 1e-9) -> Direction:
    if abs(report.i_signed_db) <= tol_db:
        return Direction.RECIPROCAL
    return Direction.FORWARD if report.i_signed_db > 0 else Direction.BACKWARD


def _in_band(value: float, band: tuple[float, float]) -> bool:
    return band[0] <= value <= band[1]


@dataclass(frozen=True)
class SymmetricExtrema:
    """Extremal shifts of a symmetric system; the plus branch maximizes R
    and the minus branch minimizes it, with ratio_minus = 1/ratio_plus and
    a common isolation magnitude."""

    delta_f_plus_mhz: float
    delta_f_minus_mhz: float
    ratio_plus: float
    ratio_minus: float
    isolation_db: float
    in_band_plus: bool
    in_band_minus: bool


def extremal_fizeau_symmetric(
        params: SystemParams,
        band: tuple[float, float] = FEASIBLE_FIZEAU_BAND) -> SymmetricExtrema:
    """Closed-form extremal Fizeau shifts for a fully symmetric system."""
    if not is_symmetric(params):
        raise SymmetryRequiredError(
            "extremal_fizeau_symmetric needs equal ports and equal couplings; "
            "see extremal_fizeau_general")
    eff = params.effective()
    kappa = params.mode_1.kappa_mhz
    gamma_m = params.magnon.gamma_m_mhz
    u = params.delta_mhz - eff.g_eff_1_mhz * math.sqrt(kappa / gamma_m)
    s = math.hypot(0.5 * kappa, u)
    # kappa > 0 guarantees s > |u|, so both branch ratios are finite and
    # strictly positive.
    ratio_plus = (s - u) / (s + u)
    ratio_minus = (s + u) / (s - u)
    isolation = abs(10.0 * math.log10(ratio_plus))
    return SymmetricExtrema(s, -s, ratio_plus, ratio_minus, isolation,
                            _in_band(s, band), _in_band(-s, band))


@dataclass(frozen=True)
class GeneralExtrema:
    """Extremal shifts with unequal couplings (uniform ports).

    ``u1_mhz`` and ``u2_mhz2`` are the linear and constant coefficients of
    the extremum quadratic delta_f^2 - u1 delta_f - u2/4 = 0, kept for
    inspection; the plus branch takes the + sign of the discriminant root.
    """

    u1_mhz: float
    u2_mhz2: float
    delta_f_plus_mhz: float
    delta_f_minus_mhz: float
    ratio_plus: float
    ratio_minus: float
    in_band_plus: bool
    in_band_minus: bool

    @property
    def isolation_plus_db(self) -> float:
        return abs(10.0 * math.log10(self.ratio_plus))

    @property
    def isolation_minus_db(self) -> float:
        return abs(10.0 * math.log10(self.ratio_minus))


def _branch_ratio(delta: float, delta_f: float, g1: float, g2: float,
                  rt: float) -> float:
    denom = delta + delta_f - g1 * rt
    if denom == 0.0:
        return math.inf
    return -(g1 / g2) ** 2 * (delta - delta_f - g2 * rt) / denom


def extremal_fizeau_general(
        params: SystemParams,
        band: tuple[float, float] = FEASIBLE_FIZEAU_BAND) -> GeneralExtrema:
    """Extremal Fizeau shifts allowing g_1 != g_2.

    Reduces to the symmetric result when the couplings match.  The
    discriminant u1^2 + u2 rearranges to kappa^2 + (2 delta - (g1 + g2) rt)^2,
    a sum of squares, so real extrema exist for every positive linewidth;
    NoRealExtremumError stays only as a guard against degenerate input.
    """
    if not has_uniform_ports(params):
        raise SymmetryRequiredError(
            "extremal_fizeau_general needs equal optical linewidths, coupling "
            "fractions and drive amplitudes")
    eff = params.effective()
    g1, g2 = eff.g_eff_1_mhz, eff.g_eff_2_mhz
    if g1 <= 0.0 or g2 <= 0.0:
        raise ValueError("extremal analysis needs strictly positive couplings")
    kappa = params.mode_1.kappa_mhz
    gamma_m = params.magnon.gamma_m_mhz
    delta = params.delta_mhz
    rt = math.sqrt(kappa / gamma_m)
    u1 = rt * (g1 - g2)
    u2 = kappa * kappa + 4.0 * (delta - g1 * rt) * (delta - g2 * rt)
    disc = u1 * u1 + u2
    if disc < 0.0:
        raise NoRealExtremumError(disc)
    root = math.sqrt(disc)
    df_plus = 0.5 * (u1 + root)
    df_minus = 0.5 * (u1 - root)
    return GeneralExtrema(
        u1, u2, df_plus, df_minus,
        _branch_ratio(delta, df_plus, g1, g2, rt),
        _branch_ratio(delta, df_minus, g1, g2, rt),
        _in_band(df_plus, band), _in_band(df_minus, band))


@dataclass(frozen=True)
class ReciprocalPoints:
    """Damping rates at which the response turns reciprocal.

    At fixed delta and coupling, transmission is direction-independent for
    every Fizeau shift once gamma_m = gamma_0 or kappa = kappa_0; crossing
    either threshold reverses the isolation direction.  ``matched`` flags
    whether the given parameters already sit on the reciprocal point.
    """

    gamma_0_mhz: float
    kappa_0_mhz: float
    matched: bool


def reciprocal_points(params: SystemParams) -> ReciprocalPoints:
    if not is_symmetric(params):
        raise SymmetryRequiredError("reciprocal_points needs a symmetric system")
    eff = params.effective()
    g = eff.g_eff_1_mhz
    kappa = params.mode_1.kappa_mhz
    gamma_m = params.magnon.gamma_m_mhz
    delta = params.delta_mhz
    w = g * math.sqrt(kappa / gamma_m)
    matched = abs(delta - w) <= 1e-9 * max(1.0, abs(delta), w)
    gamma_0 = g * g * kappa / delta ** 2 if delta != 0.0 else math.inf
    kappa_0 = delta ** 2 * gamma_m / (g * g) if g != 0.0 else math.inf
    return ReciprocalPoints(gamma_0, kappa_0, matched)


@dataclass(frozen=True)
class OptimumResult:
    delta_f_mhz: float
    isolation_db: float


def _golden_section_max(f, a: float, b: float, tol: float):
    """Golden-section maximization on [a, b] for a unimodal objective."""
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = f(c), f(d)
    while (b - a) > tol:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = f(d)
    x = 0.5 * (a + b)
    return x, f(x)


def brute_force_optimum(params: SystemParams,
                        band: tuple[float, float] = FEASIBLE_FIZEAU_BAND,
                        grid_points: int = 2001,
                        refine_tol_mhz: float = 1e-6,
                        method: str = "closed") -> OptimumResult:
    """Locate the Fizeau shift maximizing |I| inside ``band`` numerically.

    A uniform scan brackets the maximum (ties break toward the smallest
    |delta_f|), then golden-section refinement narrows it down to
    ``refine_tol_mhz``.  Makes no symmetry assumptions; this is the
    reference against which the closed-form extrema are checked.
    """
    lo, hi = band
    if not lo < hi:
        raise ValueError("band must satisfy lo < hi")
    if grid_points < 11:
        raise ValueError("grid_points must be at least 11")

    def objective(delta_f: float) -> float:
        return transmissions(with_delta_f(params, delta_f), method=method).i_abs_db

    step = (hi - lo) / (grid_points - 1)
    best_value, best_x, best_index = -math.inf, lo, 0
    for i in range(grid_points):
        x = lo + i * step
        v = objective(x)
        if v > best_value or (v == best_value and abs(x) < abs(best_x)):
            best_value, best_x, best_index = v, x, i
    a = lo + max(best_index - 1, 0) * step
    b = lo + min(best_index + 1, grid_points - 1) * step
    x_star, i_star = _golden_section_max(objective, a, b, refine_tol_mhz)
    if best_value > i_star:
        x_star, i_star = best_x, best_value
    return OptimumResult(x_star, i_star)

"""Parameter records and elementary physics for a spinning optical
microcavity coupled to a squeezed magnon mode.

Unit convention: every frequency-like quantity (detunings, linewidths,
couplings, Fizeau shifts) is a *linear* frequency in MHz, i.e. the angular
rate divided by 2*pi.  The steady-state expressions are homogeneous in
frequency, so transmissions and isolation ratios come out identical in
linear and angular units.  Planck's constant enters only through
:func:`drive_amplitude`, and the mechanical spin rate is kept in plain Hz
because it lives three orders of magnitude below everything optical.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from enum import Enum


class PhysicsError(Exception):
    """Base class for physics-level failures (as opposed to bad input)."""


class SqueezingInstabilityError(PhysicsError):
    """Two-magnon pump at or beyond the parametric threshold |E| >= |delta_m|."""


@dataclass(frozen=True)
class PhysicalConstants:
    """CODATA values used across the model."""

    c_m_per_s: float = 2.99792458e8
    hbar_j_s: float = 1.054571817e-34
    # Electron gyromagnetic ratio over 2*pi, in MHz per tesla (28 GHz/T).
    gyro_mhz_per_t: float = 28_000.0

    def __post_init__(self) -> None:
        if min(self.c_m_per_s, self.hbar_j_s, self.gyro_mhz_per_t) <= 0:
            raise ValueError("physical constants must be positive")


CONSTANTS = PhysicalConstants()

# Fizeau shifts reachable with few-kHz spin rates on a mm-scale resonator.
# Used as the default search window for extremal analysis; advisory only.
FEASIBLE_FIZEAU_BAND = (-65.0, 65.0)


class RotationDirection(Enum):
    CW = "cw"
    CCW = "ccw"
    NONE = "none"


@dataclass(frozen=True)
class RotationSpec:
    """Geometry and spin state of the resonator, input to the Fizeau shift.

    ``omega_rot_hz`` is the mechanical rotation rate as a linear frequency
    in Hz.  Defaults describe a millimetre silica-like sphere pumped near
    193 THz.
    """

    omega_rot_hz: float = 6.6e3
    direction: RotationDirection = RotationDirection.CW
    refractive_index: float = 2.2
    radius_m: float = 1.1e-3
    wavelength_m: float = CONSTANTS.c_m_per_s / 193.0e12
    dn_dwavelength_per_m: float = 0.0
    omega0_mhz: float = 1.93e8


def fizeau_shift(rotation: RotationSpec, first_term_only: bool = False,
                 constants: PhysicalConstants = CONSTANTS) -> float:
    """Fizeau drag shift of cavity mode 1, in MHz.

    A resonator spinning at Omega drags the counter-propagating resonances
    apart by

        delta_f = +/- Omega * n * r * omega0 / c
                  * (1 - 1/n**2 - (lambda/n) * dn/dlambda)

    Mode 1 picks up +delta_f under clockwise spin and -delta_f under
    counter-clockwise spin; mode 2 always takes the opposite sign.  With
    ``first_term_only`` the dispersion bracket is replaced by 1, which
    isolates the purely geometric part of the drag.

    The single factor of 2*pi below is what remains of the angular-rate
    product once both input rates and the output are written as linear
    frequencies.
    """
    sign = {RotationDirection.CW: 1.0,
            RotationDirection.CCW: -1.0,
            RotationDirection.NONE: 0.0}[rotation.direction]
    if sign == 0.0:
        return 0.0
    n = rotation.refractive_index
    bracket = 1.0
    if not first_term_only:
        bracket = (1.0 - 1.0 / n ** 2
                   - (rotation.wavelength_m / n) * rotation.dn_dwavelength_per_m)
    return (sign * 2.0 * math.pi * rotation.omega_rot_hz * n * rotation.radius_m
            * rotation.omega0_mhz / constants.c_m_per_s * bracket)


@dataclass(frozen=True)
class CavityMode:
    """Damping budget of one whispering-gallery mode."""

    kappa_mhz: float
    kappa_ext_mhz: float

    @property
    def kappa_int_mhz(self) -> float:
        return self.kappa_mhz - self.kappa_ext_mhz

    @property
    def eta(self) -> float:
        """External coupling fraction kappa_ext / kappa."""
        return self.kappa_ext_mhz / self.kappa_mhz

    @classmethod
    def from_eta(cls, kappa_mhz: float, eta: float) -> "CavityMode":
        return cls(kappa_mhz, eta * kappa_mhz)


@dataclass(frozen=True)
class MagnonMode:
    """Kittel-mode parameters of the magnetic sphere.

    ``bias_field_t`` is optional bookkeeping; when present it must agree
    with ``omega_m_mhz`` through the gyromagnetic ratio.
    """

    omega_m_mhz: float = 10_100.0
    gamma_m_mhz: float = 4.0
    eta3: float = 0.5
    bias_field_t: float | None = None


class SqueezeMode(Enum):
    DIRECT = "direct"
    FROM_PUMP = "from_pump"


@dataclass(frozen=True)
class SqueezeSpec:
    """Magnon squeezing, given directly or derived from a two-magnon pump.

    In FROM_PUMP mode the exponent follows from the pump detuning delta_m
    and strength e_pump as G = (1/4) ln((delta_m + e_pump)/(delta_m - e_pump))
    and the squeezed mode oscillates at omega_s = sqrt(delta_m^2 - e_pump^2).
    In DIRECT mode G is given and omega_s defaults to zero, the rotating
    frame used throughout the bundled demonstration datasets;
    ``omega_s_override_mhz`` pins it to any other value.  Isolation is
    independent of omega_s, the individual transmissions are not.
    """

    mode: SqueezeMode = SqueezeMode.DIRECT
    g_squeeze: float = 0.0
    delta_m_mhz: float | None = None
    e_pump_mhz: float | None = None
    omega_s_override_mhz: float | None = None

    @classmethod
    def direct(cls, g_squeeze: float,
               omega_s_mhz: float | None = None) -> "SqueezeSpec":
        return cls(SqueezeMode.DIRECT, g_squeeze, omega_s_override_mhz=omega_s_mhz)

    @classmethod
    def from_pump(cls, delta_m_mhz: float, e_pump_mhz: float,
                  omega_s_override_mhz: float | None = None) -> "SqueezeSpec":
        return cls(SqueezeMode.FROM_PUMP, 0.0, delta_m_mhz, e_pump_mhz,
                   omega_s_override_mhz)


@dataclass(frozen=True)
class EffectiveParams:
    """Bogoliubov-transformed couplings and squeezed-frame frequency."""

    g_eff_1_mhz: float
    g_eff_2_mhz: float
    eps3_factor: float  # e^{-G}; scales a bare magnon drive amplitude
    omega_s_mhz: float


def squeeze_exponent(delta_m_mhz: float, e_pump_mhz: float) -> float:
    """Squeezing exponent G of a two-magnon pump below threshold."""
    if abs(e_pump_mhz) >= abs(delta_m_mhz):
        raise SqueezingInstabilityError(
            f"two-magnon pump unstable: |e_pump| = {abs(e_pump_mhz)} MHz >= "
            f"|delta_m| = {abs(delta_m_mhz)} MHz")
    return 0.25 * math.log((delta_m_mhz + e_pump_mhz) / (delta_m_mhz - e_pump_mhz))


def derive_effective(params: "SystemParams") -> EffectiveParams:
    """Resolve squeezing into effective couplings g0_j * cosh(2G).

    Raises SqueezingInstabilityError in FROM_PUMP mode at or beyond the
    parametric threshold.
    """
    spec = params.squeeze
    if spec.mode is SqueezeMode.FROM_PUMP:
        if spec.delta_m_mhz is None or spec.e_pump_mhz is None:
            raise ValueError("FROM_PUMP squeezing needs delta_m_mhz and e_pump_mhz")
        g = squeeze_exponent(spec.delta_m_mhz, spec.e_pump_mhz)
        omega_s = math.sqrt(spec.delta_m_mhz ** 2 - spec.e_pump_mhz ** 2)
    else:
        g = spec.g_squeeze
        omega_s = 0.0
    if spec.omega_s_override_mhz is not None:
        omega_s = spec.omega_s_override_mhz
    ch = math.cosh(2.0 * g)
    return EffectiveParams(params.g0_1_mhz * ch, params.g0_2_mhz * ch,
                           math.exp(-g), omega_s)


def drive_amplitude(power_w: float, omega_p_mhz: float,
                    constants: PhysicalConstants = CONSTANTS) -> float:
    """Input-field amplitude sqrt(P / (hbar * omega_p)), in s^-1/2.

    ``omega_p_mhz`` is the pump's linear frequency.  Only ratios of drive
    amplitudes enter transmissions, so the absolute scale rarely matters.
    """
    if power_w < 0.0:
        raise ValueError("pump power must be non-negative")
    if omega_p_mhz <= 0.0:
        raise ValueError("pump frequency must be positive")
    return math.sqrt(power_w / (constants.hbar_j_s * 2.0 * math.pi
                                * omega_p_mhz * 1e6))


@dataclass(frozen=True)
class DriveAmplitudes:
    """Drive amplitudes in s^-1/2.

    ``eps_3_eff`` is the magnon drive already expressed in the squeezed
    frame, i.e. multiplied by e^{-G} when built from a bare drive.
    """

    eps_1: float = 1.0
    eps_2: float = 1.0
    eps_3_eff: float = 1.0

    @classmethod
    def equal(cls, value: float = 1.0) -> "DriveAmplitudes":
        return cls(value, value, value)

    @classmethod
    def from_powers(cls, p1_w: float, p2_w: float, p3_w: float,
                    omega_p_mhz: float, eps3_factor: float = 1.0,
                    constants: PhysicalConstants = CONSTANTS) -> "DriveAmplitudes":
        """Powers in W at a common pump frequency; ``eps3_factor`` is e^{-G}."""
        return cls(drive_amplitude(p1_w, omega_p_mhz, constants),
                   drive_amplitude(p2_w, omega_p_mhz, constants),
                   eps3_factor * drive_amplitude(p3_w, omega_p_mhz, constants))


@dataclass(frozen=True)
class SystemParams:
    """Complete parameter set of the two optical modes plus the magnon.

    ``delta_mhz`` is the common pump-cavity detuning and ``delta_f_mhz``
    the signed Fizeau shift as seen by mode 1, so the per-mode detunings
    are delta_1 = delta + delta_f and delta_2 = delta - delta_f.
    """

    mode_1: CavityMode
    mode_2: CavityMode
    magnon: MagnonMode
    squeeze: SqueezeSpec
    drive: DriveAmplitudes
    g0_1_mhz: float
    g0_2_mhz: float
    delta_mhz: float = 0.0
    delta_f_mhz: float = 0.0

    @property
    def delta_1_mhz(self) -> float:
        return self.delta_mhz + self.delta_f_mhz

    @property
    def delta_2_mhz(self) -> float:
        return self.delta_mhz - self.delta_f_mhz

    def effective(self) -> EffectiveParams:
        return derive_effective(self)

    @classmethod
    def symmetric(cls, *, g0_mhz: float = 41.0, g_squeeze: float = 0.5,
                  kappa_mhz: float = 1.1, eta: float = 0.5,
                  gamma_m_mhz: float = 4.0, eta3: float | None = None,
                  omega_m_mhz: float = 10_100.0, delta_mhz: float = 0.0,
                  delta_f_mhz: float = 0.0, eps: float = 1.0,
                  omega_s_mhz: float = 0.0) -> "SystemParams":
        """Equal-port preset: both optical modes share kappa and eta, both
        couplings share g0, and all three drives are set to the same
        amplitude (the magnon one directly in the squeezed frame).
        Defaults give the standard demonstration parameter set.
        """
        if eta3 is None:
            eta3 = eta
        mode = CavityMode.from_eta(kappa_mhz, eta)
        return cls(mode_1=mode, mode_2=mode,
                   magnon=MagnonMode(omega_m_mhz, gamma_m_mhz, eta3),
                   squeeze=SqueezeSpec.direct(g_squeeze, omega_s_mhz),
                   drive=DriveAmplitudes.equal(eps),
                   g0_1_mhz=g0_mhz, g0_2_mhz=g0_mhz,
                   delta_mhz=delta_mhz, delta_f_mhz=delta_f_mhz)


def default_params() -> SystemParams:
    """The demonstration parameter set (zero detuning, zero shift)."""
    return SystemParams.symmetric()


def with_delta_f(params: SystemParams, delta_f_mhz: float) -> SystemParams:
    return replace(params, delta_f_mhz=delta_f_mhz)


def _close(a: float, b: float, rel: float) -> bool:
    return abs(a - b) <= rel * max(1.0, abs(a), abs(b))


def has_uniform_ports(params: SystemParams, rel: float = 1e-9) -> bool:
    """Equal optical linewidths, equal coupling fractions on all three
    ports, and equal drive amplitudes.  The two couplings may differ."""
    d = params.drive
    return (_close(params.mode_1.kappa_mhz, params.mode_2.kappa_mhz, rel)
            and _close(params.mode_1.eta, params.mode_2.eta, rel)
            and _close(params.mode_1.eta, params.magnon.eta3, rel)
            and _close(d.eps_1, d.eps_2, rel)
            and _close(d.eps_1, d.eps_3_eff, rel))


def is_symmetric(params: SystemParams, rel: float = 1e-9) -> bool:
    """Uniform ports and equal bare couplings."""
    return (has_uniform_ports(params, rel)
            and _close(params.g0_1_mhz, params.g0_2_mhz, rel))


@dataclass(frozen=True)
class Violation:
    code: str
    message: str


def _finite(*values: float) -> bool:
    return all(math.isfinite(v) for v in values)


def validate(params: SystemParams,
             constants: PhysicalConstants = CONSTANTS) -> list[Violation]:
    """Collect every constraint violation; an empty list means valid.

    Violations are returned as data rather than raised so that parameter
    sweeps can mark individual grid points and carry on.
    """
    out: list[Violation] = []
    for label, mode in (("mode_1", params.mode_1), ("mode_2", params.mode_2)):
        if not _finite(mode.kappa_mhz, mode.kappa_ext_mhz):
            out.append(Violation("NONFINITE", f"{label}: non-finite linewidth"))
            continue
        if mode.kappa_mhz <= 0.0:
            out.append(Violation("RATE_POSITIVE",
                                 f"{label}: total linewidth must be positive"))
            continue
        if mode.kappa_ext_mhz < 0.0:
            out.append(Violation("ETA_RANGE",
                                 f"{label}: external linewidth must be >= 0"))
        elif mode.kappa_ext_mhz > mode.kappa_mhz:
            out.append(Violation("KAPPA_DECOMP",
                                 f"{label}: external linewidth exceeds total, "
                                 "intrinsic part would be negative"))
    mag = params.magnon
    if not _finite(mag.omega_m_mhz, mag.gamma_m_mhz, mag.eta3):
        out.append(Violation("NONFINITE", "magnon: non-finite parameter"))
    else:
        if mag.gamma_m_mhz <= 0.0:
            out.append(Violation("RATE_POSITIVE",
                                 "magnon: linewidth must be positive"))
        if mag.omega_m_mhz <= 0.0:
            out.append(Violation("FREQUENCY_RANGE",
                                 "magnon: mode frequency must be positive"))
        if not 0.0 <= mag.eta3 <= 1.0:
            out.append(Violation("ETA_RANGE",
                                 "magnon: drive coupling fraction outside [0, 1]"))
        if mag.bias_field_t is not None:
            expected = constants.gyro_mhz_per_t * mag.bias_field_t
            if not _close(mag.omega_m_mhz, expected, 1e-9):
                out.append(Violation(
                    "BIAS_FIELD_MISMATCH",
                    f"magnon: omega_m = {mag.omega_m_mhz} MHz but the bias "
                    f"field implies {expected} MHz"))
    for label, g0 in (("g0_1", params.g0_1_mhz), ("g0_2", params.g0_2_mhz)):
        if not _finite(g0):
            out.append(Violation("NONFINITE", f"{label}: non-finite coupling"))
        elif g0 < 0.0:
            out.append(Violation("COUPLING_NEGATIVE",
                                 f"{label}: coupling must be >= 0"))
    spec = params.squeeze
    if spec.mode is SqueezeMode.FROM_PUMP:
        if spec.delta_m_mhz is None or spec.e_pump_mhz is None:
            out.append(Violation("SQUEEZE_ARGS",
                                 "FROM_PUMP squeezing needs delta_m_mhz and "
                                 "e_pump_mhz"))
        elif not _finite(spec.delta_m_mhz, spec.e_pump_mhz):
            out.append(Violation("NONFINITE", "squeeze: non-finite pump parameter"))
        elif abs(spec.e_pump_mhz) >= abs(spec.delta_m_mhz):
            out.append(Violation("SQUEEZE_UNSTABLE",
                                 "two-magnon pump at or beyond threshold"))
    elif not _finite(spec.g_squeeze):
        out.append(Violation("NONFINITE", "squeeze: non-finite exponent"))
    if spec.omega_s_override_mhz is not None and not _finite(spec.omega_s_override_mhz):
        out.append(Violation("NONFINITE", "squeeze: non-finite omega_s override"))
    d = params.drive
    if not _finite(d.eps_1, d.eps_2, d.eps_3_eff):
        out.append(Violation("NONFINITE", "drive: non-finite amplitude"))
    elif min(d.eps_1, d.eps_2, d.eps_3_eff) < 0.0:
        out.append(Violation("DRIVE_NEGATIVE", "drive amplitudes must be >= 0"))
    if not _finite(params.delta_mhz, params.delta_f_mhz):
        out.append(Violation("NONFINITE", "non-finite detuning or Fizeau shift"))
    return out


def validate_rotation(rotation: RotationSpec) -> list[Violation]:
    values = (rotation.omega_rot_hz, rotation.refractive_index,
              rotation.radius_m, rotation.wavelength_m,
              rotation.dn_dwavelength_per_m, rotation.omega0_mhz)
    if not _finite(*values):
        return [Violation("NONFINITE", "rotation: non-finite parameter")]
    out = []
    if rotation.omega_rot_hz < 0.0:
        out.append(Violation("ROTATION_RANGE",
                             "rotation: spin rate must be >= 0 (use direction "
                             "to flip the sign)"))
    if rotation.refractive_index <= 1.0:
        out.append(Violation("ROTATION_RANGE",
                             "rotation: refractive index must exceed 1"))
    if rotation.radius_m <= 0.0:
        out.append(Violation("ROTATION_RANGE", "rotation: radius must be positive"))
    if rotation.wavelength_m <= 0.0:
        out.append(Violation("ROTATION_RANGE",
                             "rotation: wavelength must be positive"))
    if rotation.omega0_mhz <= 0.0:
        out.append(Violation("ROTATION_RANGE",
                             "rotation: optical frequency must be positive"))
    return out

"""Simulation and analysis of the rotating-analyzer measurement protocol.

The source is described by a polarized intensity I_P along some axis, an
unpolarized intensity I_U, and an infrared residual that reaches the
detector regardless of the visible-band optics.  The protocol has two
steps:

Step 1 (analyzer only): I(theta) = I_P cos^2(theta - axis) + I_U/2 + bg.
The fitted phase gives the transmission axis theta* of the source.

Step 2 (fixed polarizer + rotating analyzer): with the polarizer at psi
the light reaching the analyzer is fully polarized along psi with
intensity I_P cos^2(psi - axis) + I_U/2, so

    I(theta) = [I_P cos^2(psi - axis) + I_U/2] cos^2(theta - psi) + bg.

Fitting the two scans taken at psi = theta* and psi = theta* + 90 deg
gives amplitudes A_a = I_P + I_U/2 and A_b = I_U/2 (times a common
throughput), hence

    P = (A_a - A_b) / (A_a + A_b) = I_P / (I_P + I_U),

with the infrared residual absorbed into the fitted offsets.  All fits
use the exact linear least squares of the harmonic reparameterization

    A cos^2(theta - theta0) + F = c0 + c1 cos(2 theta) + c2 sin(2 theta),

so no iteration and no starting values are needed.

Angles are degrees at every interface, radians internally.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateInputError, DomainError, IdentifiabilityError


@dataclass(frozen=True)
class SourceModel:
    """Partially polarized source plus out-of-band background."""
    i_polarized: float
    i_unpolarized: float
    polarization_axis_deg: float = 0.0
    ir_background: float = 0.0

    def __post_init__(self):
        if self.i_polarized < 0 or self.i_unpolarized < 0 or self.ir_background < 0:
            raise DomainError(f"intensities must be >= 0: {self}")

    @property
    def polarization(self) -> float:
        total = self.i_polarized + self.i_unpolarized
        if total <= 0:
            raise DegenerateInputError("dark source: polarization undefined")
        return self.i_polarized / total


@dataclass(frozen=True)
class PolarimeterScan:
    """(analyzer angle, detector intensity) samples from one rotation."""
    angles_deg: np.ndarray
    intensities: np.ndarray
    step_deg: float

    def __post_init__(self):
        angles = np.asarray(self.angles_deg, dtype=float)
        intens = np.asarray(self.intensities, dtype=float)
        object.__setattr__(self, "angles_deg", angles)
        object.__setattr__(self, "intensities", intens)
        if angles.ndim != 1 or angles.shape != intens.shape:
            raise DomainError("scan needs matching 1-d angle and intensity arrays")
        if len(angles) >= 2 and not np.all(np.diff(angles) > 0):
            raise DomainError("scan angles must be strictly increasing")

    @property
    def span_deg(self) -> float:
        return float(self.angles_deg[-1] - self.angles_deg[0])


@dataclass(frozen=True)
class CosineSquaredFit:
    """Least-squares parameters of A cos^2(theta - theta0) + F."""
    amplitude: float
    phase_deg: float          # in [0, 180)
    offset: float
    residual_rms: float
    degenerate_phase: bool = False  # amplitude ~ 0, phase meaningless

    def model(self, theta_deg):
        th = np.radians(np.asarray(theta_deg, dtype=float) - self.phase_deg)
        return self.amplitude * np.cos(th) ** 2 + self.offset


@dataclass(frozen=True)
class PolarizationExtraction:
    p: float
    fit_a: CosineSquaredFit
    fit_b: CosineSquaredFit
    phase_error_a_deg: float | None
    phase_error_b_deg: float | None
    warnings: tuple[str, ...] = ()


def simulate_scan(source: SourceModel, *, polarizer_angle_deg: float | None = None,
                  step_deg: float = 0.5, span_deg: float = 360.0,
                  noise_rms: float = 0.0, seed: int = 0) -> PolarimeterScan:
    """Synthesize one analyzer rotation.

    ``polarizer_angle_deg = None`` is the analyzer-only step 1; a number
    inserts an ideal fixed polarizer at that angle (step 2).  Noise is
    additive Gaussian per sample with the given rms, deterministic for a
    fixed seed.
    """
    if step_deg <= 0:
        raise DomainError(f"step must be > 0, got {step_deg}")
    if noise_rms < 0:
        raise DomainError(f"noise rms must be >= 0, got {noise_rms}")
    theta = np.arange(0.0, span_deg, step_deg)
    axis = math.radians(source.polarization_axis_deg)
    th = np.radians(theta)
    if polarizer_angle_deg is None:
        intensity = (source.i_polarized * np.cos(th - axis) ** 2
                     + 0.5 * source.i_unpolarized + source.ir_background)
    else:
        psi = math.radians(polarizer_angle_deg)
        through = (source.i_polarized * math.cos(psi - axis) ** 2
                   + 0.5 * source.i_unpolarized)
        intensity = through * np.cos(th - psi) ** 2 + source.ir_background
    if noise_rms > 0:
        rng = np.random.default_rng(seed)
        intensity = intensity + rng.normal(0.0, noise_rms, size=theta.shape)
    return PolarimeterScan(theta, intensity, step_deg)


def fit_cos_squared(scan: PolarimeterScan) -> CosineSquaredFit:
    """Globally optimal least-squares fit of A cos^2(theta - theta0) + F.

    Linear in (c0, c1, c2) after the double-angle substitution; mapped
    back via A = 2 sqrt(c1^2 + c2^2), theta0 = atan2(c2, c1)/2, and
    F = c0 - A/2.  A constant scan is reported with amplitude 0 and the
    ``degenerate_phase`` flag instead of failing.
    """
    if len(scan.angles_deg) < 6:
        raise IdentifiabilityError(f"need at least 6 samples, got {len(scan.angles_deg)}")
    if scan.span_deg < 90.0:
        raise IdentifiabilityError(
            f"angles span only {scan.span_deg:g} deg; cos^2 parameters are "
            "not identifiable below a 90 deg span")
    two_th = 2.0 * np.radians(scan.angles_deg)
    design = np.column_stack([np.ones_like(two_th), np.cos(two_th), np.sin(two_th)])
    coef, *_ = np.linalg.lstsq(design, scan.intensities, rcond=None)
    c0, c1, c2 = (float(v) for v in coef)
    amplitude = 2.0 * math.hypot(c1, c2)
    resid = scan.intensities - design @ coef
    rms = float(np.sqrt(np.mean(resid ** 2)))
    scale = max(abs(c0), float(np.max(np.abs(scan.intensities))), 1e-300)
    if amplitude < 1e-12 * scale:
        return CosineSquaredFit(0.0, 0.0, c0, rms, degenerate_phase=True)
    phase = math.degrees(0.5 * math.atan2(c2, c1)) % 180.0
    return CosineSquaredFit(amplitude, phase, c0 - 0.5 * amplitude, rms)


def _phase_distance_deg(a: float, b: float) -> float:
    # distance on the 180-degree circle the cos^2 phase lives on
    d = abs(a - b) % 180.0
    return min(d, 180.0 - d)


def extract_polarization(scan_a: PolarimeterScan, scan_b: PolarimeterScan,
                         theta_star_deg: float | None = None) -> PolarizationExtraction:
    """Linear polarization from a pair of step-2 scans.

    ``scan_a`` must be the scan with the polarizer along the source axis
    theta*, ``scan_b`` the one at theta* + 90 deg.  When ``theta_star_deg``
    is given (from the step-1 fit) the fitted phases are compared against
    it and a warning is recorded above 0.5 deg of discrepancy.
    """
    fit_a = fit_cos_squared(scan_a)
    fit_b = fit_cos_squared(scan_b)
    total = fit_a.amplitude + fit_b.amplitude
    if total <= 0:
        raise DegenerateInputError("fitted amplitudes sum to zero")
    warnings = []
    err_a = err_b = None
    if theta_star_deg is not None:
        if not fit_a.degenerate_phase:
            err_a = _phase_distance_deg(fit_a.phase_deg, theta_star_deg)
            if err_a > 0.5:
                warnings.append(
                    f"scan A phase off the polarizer setting by {err_a:.3g} deg")
        if not fit_b.degenerate_phase:
            err_b = _phase_distance_deg(fit_b.phase_deg, theta_star_deg + 90.0)
            if err_b > 0.5:
                warnings.append(
                    f"scan B phase off the polarizer setting by {err_b:.3g} deg")
    return PolarizationExtraction(
        p=(fit_a.amplitude - fit_b.amplitude) / total,
        fit_a=fit_a, fit_b=fit_b,
        phase_error_a_deg=err_a, phase_error_b_deg=err_b,
        warnings=tuple(warnings))


def write_scan(path, scan: PolarimeterScan, header: str = "") -> None:
    """Write a scan as two whitespace-separated columns
    (theta_degrees, intensity); '#' lines are comments."""
    with open(path, "w", encoding="utf-8") as fh:
        for line in header.splitlines():
            fh.write(f"# {line}\n")
        fh.write("# columns: theta_degrees intensity\n")
        for theta, value in zip(scan.angles_deg, scan.intensities):
            fh.write(f"{float(theta)!r} {float(value)!r}\n")


def read_scan(path) -> PolarimeterScan:
    """Read a two-column scan file written by ``write_scan`` (or by an
    instrument using the same plain-text format)."""
    angles = []
    values = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            text = line.strip()
            if not text or text.startswith("#"):
                continue
            parts = text.split()
            if len(parts) != 2:
                raise DomainError(f"{path}:{lineno}: expected two columns, got {len(parts)}")
            try:
                angles.append(float(parts[0]))
                values.append(float(parts[1]))
            except ValueError as exc:
                raise DomainError(f"{path}:{lineno}: {exc}") from exc
    if not angles:
        raise DomainError(f"{path}: no data rows")
    steps = np.diff(angles)
    step = float(np.median(steps)) if len(steps) else 0.0
    return PolarimeterScan(np.array(angles), np.array(values), step)

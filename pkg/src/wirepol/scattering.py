"""Partial-wave scattering by an infinite homogeneous cylinder at normal
incidence, and the per-wavelength emission quantities that follow from it
via Kirchhoff's law.

For a wire of radius a, size parameter x = k*a and complex refraction
index n, the transition amplitudes of angular momentum m are

    T_m(TE) = [J'_m(nx) J_m(x) - n J'_m(x) J_m(nx)]
              / [J'_m(nx) H_m(x) - n J_m(nx) H'_m(x)]

    T_m(TM) = [J_m(nx) J'_m(x) - n J'_m(nx) J_m(x)]
              / [J_m(nx) H'_m(x) - n J'_m(nx) H_m(x)]

with H = H^(1).  TE means the electric field lies in the plane
orthogonal to the wire axis, TM means it is parallel to the wire.  The
code divides numerator and denominator by J_m(nx) and works with the
logarithmic derivative D_m = J'_m/J_m, which stays O(1) where J_m(nx)
itself would overflow (thick absorbing wires).

The per-polarization emissivity is the folded sum

    e = 4 * sum_m [Re(T_m) - |T_m|^2],   T_{-m} = T_m,

and the linear polarization is P = (e_TE - e_TM) / (e_TE + e_TM),
positive when the emitted field is polarized orthogonally to the wire.

All functions are pure; sweeps over (k, a) may be parallelized freely.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceError, DegenerateInputError, DomainError
from .special_functions import (
    bessel_j_all_orders,
    bessel_j_log_derivative,
    hankel1_all_orders,
)

DEFAULT_TOL = 1e-10

# Orders are evaluated in blocks of this size until the truncation rule
# fires; keeps the scipy calls vectorized without computing far past the
# convergence point (where H_m(x) would eventually overflow).
_BLOCK = 64


class Polarization(enum.Enum):
    TE = "TE"
    TM = "TM"

    @classmethod
    def coerce(cls, value) -> "Polarization":
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).upper())
        except ValueError:
            raise DomainError(f"unknown polarization {value!r}") from None


@dataclass(frozen=True)
class WireGeometry:
    """Wire radius plus the optional lengths entering the far-field check."""
    radius_um: float
    length_mm: float | None = None
    observation_distance_m: float | None = None

    def __post_init__(self):
        if self.radius_um <= 0:
            raise DomainError(f"wire radius must be > 0, got {self.radius_um}")


@dataclass(frozen=True)
class TransitionAmplitude:
    order: int
    polarization: Polarization
    value: complex


@dataclass(frozen=True)
class PolarizedEmissivity:
    """Emissivity sum for one or both polarizations.

    truncation_error_estimate is relative to the emissivity magnitude and
    is bounded by the tolerance the sum was requested with.
    """
    e_te: float | None
    e_tm: float | None
    terms_used: int
    truncation_error_estimate: float


@dataclass(frozen=True)
class FarFieldCheck:
    valid: bool
    lower_ratio: float   # (lambda * r) / a^2
    upper_ratio: float   # l^2 / (lambda * r)


def order_ceiling(x: float, n: complex) -> int:
    """Hard ceiling on the partial-wave order, m ~ |n| x plus an Airy
    transition margin."""
    nx = abs(n) * x
    return max(int(math.ceil(nx)) + int(math.ceil(10.0 * nx ** (1.0 / 3.0))) + 20, 5)


def _check_inputs(k: float, a: float, n: complex) -> None:
    if k <= 0 or not math.isfinite(k):
        raise DomainError(f"wavenumber k must be > 0, got {k}")
    if a <= 0 or not math.isfinite(a):
        raise DomainError(f"radius a must be > 0, got {a}")
    if complex(n).imag < 0:
        raise DomainError(f"refraction index must have Im(n) >= 0, got {n}")


def _amplitude_block(x: float, n: complex, d: np.ndarray,
                     m_lo: int, m_hi: int) -> tuple[np.ndarray, np.ndarray]:
    """T_m(TE), T_m(TM) for m = m_lo..m_hi (inclusive) as arrays."""
    j, jp = bessel_j_all_orders(m_hi, x, m_lo)
    h, hp = hankel1_all_orders(m_hi, x, m_lo)
    db = d[m_lo:m_hi + 1]
    t_te = (db * j - n * jp) / (db * h - n * hp)
    t_tm = (jp - n * db * j) / (hp - n * db * h)
    return t_te, t_tm


def transition_amplitude(m: int, polarization, k: float, a: float,
                         n: complex) -> TransitionAmplitude:
    """Transition amplitude T_m for one order and polarization.

    T_{-m} = T_m by parity, so negative orders map to |m|.  A wire with
    n = 1 is indistinguishable from vacuum and yields exactly 0.
    """
    polarization = Polarization.coerce(polarization)
    _check_inputs(k, a, n)
    n = complex(n)
    m = abs(int(m))
    if n == 1.0:
        return TransitionAmplitude(m, polarization, 0.0j)
    x = k * a
    try:
        d = bessel_j_log_derivative(n * x, m)
        t_te, t_tm = _amplitude_block(x, n, d, m, m)
    except (OverflowError, FloatingPointError) as exc:
        raise ConvergenceError(f"transition amplitude failed: {exc}",
                               order=m, ka=x, nka=n * x) from exc
    value = complex(t_te[0] if polarization is Polarization.TE else t_tm[0])
    if not (math.isfinite(value.real) and math.isfinite(value.imag)):
        raise ConvergenceError("transition amplitude is not finite",
                               order=m, ka=x, nka=n * x)
    return TransitionAmplitude(m, polarization, value)


def _emissivity_terms(k: float, a: float, n: complex,
                      tol: float) -> tuple[np.ndarray, np.ndarray, float]:
    """Per-order emissivity terms 4(Re T - |T|^2) for both polarizations,
    truncated adaptively.

    Returns (terms_te, terms_tm, relative_truncation_estimate) where the
    arrays run over m = 0..M.  Truncation: stop once three consecutive
    orders have both polarization terms below tol * (|partial| + 1e-300).
    """
    x = k * a
    n = complex(n)
    m_ceil = order_ceiling(x, n)
    d = bessel_j_log_derivative(n * x, m_ceil)
    terms_te: list[float] = []
    terms_tm: list[float] = []
    sum_te = 0.0
    sum_tm = 0.0
    consecutive = 0
    m_lo = 0
    while m_lo <= m_ceil:
        m_hi = min(m_lo + _BLOCK - 1, m_ceil)
        t_te, t_tm = _amplitude_block(x, n, d, m_lo, m_hi)
        blk_te = 4.0 * (t_te.real - np.abs(t_te) ** 2)
        blk_tm = 4.0 * (t_tm.real - np.abs(t_tm) ** 2)
        if not (np.all(np.isfinite(blk_te)) and np.all(np.isfinite(blk_tm))):
            bad = int(np.argmax(~(np.isfinite(blk_te) & np.isfinite(blk_tm))))
            raise ConvergenceError("non-finite partial-wave term",
                                   order=m_lo + bad, ka=x, nka=n * x)
        for i in range(len(blk_te)):
            m = m_lo + i
            w = 1.0 if m == 0 else 2.0
            terms_te.append(float(blk_te[i]))
            terms_tm.append(float(blk_tm[i]))
            sum_te += w * blk_te[i]
            sum_tm += w * blk_tm[i]
            scale = tol * (abs(sum_te) + abs(sum_tm) + 1e-300)
            if abs(blk_te[i]) < scale and abs(blk_tm[i]) < scale:
                consecutive += 1
                if consecutive >= 3:
                    tail = max(max(abs(t) for t in terms_te[-3:]),
                               max(abs(t) for t in terms_tm[-3:]))
                    est = float(tail / (abs(sum_te) + abs(sum_tm) + 1e-300))
                    return np.array(terms_te), np.array(terms_tm), est
            else:
                consecutive = 0
        m_lo = m_hi + 1
    last = max(abs(terms_te[-1]), abs(terms_tm[-1]))
    raise ConvergenceError(
        f"partial-wave sum did not converge within m_max = {m_ceil}",
        order=m_ceil, ka=x, nka=n * x, last_term=last)


def _fold(terms: np.ndarray) -> float:
    # fixed-order compensated reduction: deterministic regardless of how
    # callers parallelize around this
    return math.fsum([terms[0], *(2.0 * terms[1:])])


def emissivity_pair(k: float, a: float, n: complex,
                    tol: float = DEFAULT_TOL) -> PolarizedEmissivity:
    """Both polarized emissivities at wavenumber k (inverse micron) for a
    wire of radius a (micron) and refraction index n."""
    if tol <= 0:
        raise DomainError(f"tolerance must be > 0, got {tol}")
    _check_inputs(k, a, n)
    if complex(n) == 1.0:
        return PolarizedEmissivity(0.0, 0.0, 0, 0.0)
    terms_te, terms_tm, est = _emissivity_terms(k, a, n, tol)
    return PolarizedEmissivity(_fold(terms_te), _fold(terms_tm),
                               len(terms_te), est)


def emissivity(polarization, k: float, a: float, n: complex,
               tol: float = DEFAULT_TOL) -> PolarizedEmissivity:
    """Emissivity for a single polarization; the other side is None."""
    polarization = Polarization.coerce(polarization)
    pair = emissivity_pair(k, a, n, tol)
    if polarization is Polarization.TE:
        return PolarizedEmissivity(pair.e_te, None, pair.terms_used,
                                   pair.truncation_error_estimate)
    return PolarizedEmissivity(None, pair.e_tm, pair.terms_used,
                               pair.truncation_error_estimate)


def linear_polarization(k: float, a: float, n: complex,
                        tol: float = DEFAULT_TOL) -> float:
    """P = (e_TE - e_TM) / (e_TE + e_TM) at a single wavenumber."""
    pair = emissivity_pair(k, a, n, tol)
    total = pair.e_te + pair.e_tm
    if total < 1e-15:
        raise DegenerateInputError(
            "both emissivities vanish (vacuum wire?); polarization undefined")
    return (pair.e_te - pair.e_tm) / total


def validate_far_field(geom: WireGeometry, wavelength_um: float,
                       margin: float = 10.0) -> FarFieldCheck:
    """Check the far-field condition a^2 << lambda*r << l^2.

    True iff a^2 * margin <= lambda*r and lambda*r * margin <= l^2;
    margin = 1 reduces to the non-strict ordering.
    """
    if geom.length_mm is None or geom.observation_distance_m is None:
        raise DomainError("far-field check needs wire length and observation distance")
    if wavelength_um <= 0:
        raise DomainError(f"wavelength must be > 0, got {wavelength_um}")
    a2 = (geom.radius_um * 1e-6) ** 2
    l2 = (geom.length_mm * 1e-3) ** 2
    lam_r = wavelength_um * 1e-6 * geom.observation_distance_m
    valid = (a2 * margin <= lam_r) and (lam_r * margin <= l2)
    return FarFieldCheck(valid,
                         lower_ratio=lam_r / a2,
                         upper_ratio=l2 / lam_r if lam_r > 0 else math.inf)

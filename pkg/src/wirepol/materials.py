"""Drude-type complex permittivity of metals, tungsten in particular.

The permittivity combines damped bound-electron resonances with
free-electron conduction terms,

    eps(lambda) = 1 + sum_p K0_p lam^2 / (lam^2 - ls_p^2 - i d_p ls_p lam)
                    - lam^2 / (2 pi c eps0) * sum_q sigma_q / (lr_q + i lam)

written here in the exp(-i w t) convention, so that Im(eps) > 0 for a
passive absorber and outgoing cylindrical waves are H^(1).  (Optics
tables often quote the complex-conjugate n - ik convention; the two
differ only by the sign of every imaginary part.)

Wavelengths are microns at the interface, metres internally;
conductivities are ohm^-1 m^-1 throughout.

The tungsten parameter table (fit to reflectance data measured between
0.365 and 2.65 micron) ships as a JSON database next to this module; see
``load_database``.  Some free-electron relaxation wavelengths in that
table are known only as an upper bound; such terms carry
``tentative=True`` and are excluded from the permittivity sum unless the
model is built with ``include_tentative=True``.  Their conductivity
still counts toward ``dc_conductivity`` (at dc every conduction channel
contributes regardless of its relaxation wavelength).
"""

from __future__ import annotations

import cmath
import json
import math
import os
from dataclasses import dataclass, replace
from importlib import resources

from scipy import constants as _const

from .errors import DomainError, MaterialDataError, RangeError

# Wavelength range of the underlying tungsten reflectance measurements.
# The fit is analytic and may be evaluated outside it, at reduced trust.
FITTED_RANGE_UM = (0.365, 2.65)

ENV_DATABASE_PATH = "WIREPOL_MATERIAL_DB"

_TEMPERATURE_HARD_RANGE = (250.0, 3400.0)

_2PI_C_EPS0 = 2.0 * math.pi * _const.c * _const.epsilon_0


@dataclass(frozen=True)
class BoundTerm:
    """One damped bound-electron resonance: strength K0, resonant
    wavelength lambda_s (micron), damping delta."""
    k0: float
    lambda_s_um: float
    delta: float
    estimated: bool = False

    def __post_init__(self):
        if self.lambda_s_um <= 0 or self.delta <= 0:
            raise MaterialDataError(f"bound term requires lambda_s, delta > 0: {self}")


@dataclass(frozen=True)
class FreeTerm:
    """One free-electron conduction channel: dc conductivity sigma
    (ohm^-1 m^-1) and relaxation wavelength lambda_r (micron)."""
    sigma: float
    lambda_r_um: float
    tentative: bool = False
    estimated: bool = False

    def __post_init__(self):
        if self.sigma <= 0 or self.lambda_r_um <= 0:
            raise MaterialDataError(f"free term requires sigma, lambda_r > 0: {self}")


@dataclass(frozen=True)
class DrudePermittivityModel:
    """Parameter set of the permittivity formula for one temperature."""
    element: str
    temperature_k: float
    bound_terms: tuple[BoundTerm, ...]
    free_terms: tuple[FreeTerm, ...]
    sigma0: float | None = None
    include_tentative: bool = False
    note: str = ""

    def dc_conductivity(self) -> float:
        """Sum of all conduction-channel conductivities (the dc limit)."""
        return sum(t.sigma for t in self.free_terms)

    def active_free_terms(self) -> tuple[FreeTerm, ...]:
        if self.include_tentative:
            return self.free_terms
        return tuple(t for t in self.free_terms if not t.tentative)


def vacuum_model(temperature_k: float = 300.0) -> DrudePermittivityModel:
    """Trivial model with no material response: eps = 1 identically."""
    return DrudePermittivityModel("vacuum", temperature_k, (), (), sigma0=None)


def permittivity(model: DrudePermittivityModel, wavelength_um: float) -> complex:
    """Complex relative permittivity at the given vacuum wavelength.

    Im(eps) >= 0 for any model with at least one absorbing term;
    equality only in the vacuum limit.
    """
    if wavelength_um <= 0 or not math.isfinite(wavelength_um):
        raise DomainError(f"permittivity: wavelength must be > 0, got {wavelength_um}")
    lam = wavelength_um * 1e-6
    eps = 1.0 + 0.0j
    for t in model.bound_terms:
        ls = t.lambda_s_um * 1e-6
        eps += t.k0 * lam * lam / (lam * lam - ls * ls - 1j * t.delta * ls * lam)
    for t in model.active_free_terms():
        lr = t.lambda_r_um * 1e-6
        eps -= lam * lam / _2PI_C_EPS0 * t.sigma / (lr + 1j * lam)
    return eps


def refraction_index(eps: complex) -> complex:
    """n = sqrt(eps) on the branch with Im(n) >= 0 (decaying wave inside
    the absorber)."""
    n = cmath.sqrt(eps)
    if n.imag < 0:
        n = -n
    return n


# --------------------------------------------------------------------------
# database loading

_RECORD_KEYS = {"element", "temperature_K", "bound_terms", "free_terms", "sigma0", "note"}
_BOUND_KEYS = {"K0", "lambda_s", "delta", "estimated"}
_FREE_KEYS = {"sigma", "lambda_r", "tentative", "estimated"}
_TOP_KEYS = {"format", "version", "units", "provenance", "records"}


@dataclass(frozen=True)
class MaterialDatabase:
    records: tuple[DrudePermittivityModel, ...]
    provenance: str = ""
    version: int = 0

    def temperatures(self) -> tuple[float, ...]:
        return tuple(r.temperature_k for r in self.records)


def _reject_unknown(mapping: dict, allowed: set, where: str) -> None:
    unknown = set(mapping) - allowed
    if unknown:
        raise MaterialDataError(f"unknown field(s) {sorted(unknown)} in {where}")


def _parse_record(raw: dict, index: int) -> DrudePermittivityModel:
    where = f"record {index}"
    if not isinstance(raw, dict):
        raise MaterialDataError(f"{where}: expected an object")
    _reject_unknown(raw, _RECORD_KEYS, where)
    try:
        bound = []
        for j, b in enumerate(raw.get("bound_terms", [])):
            _reject_unknown(b, _BOUND_KEYS, f"{where} bound term {j}")
            bound.append(BoundTerm(float(b["K0"]), float(b["lambda_s"]),
                                   float(b["delta"]), bool(b.get("estimated", False))))
        free = []
        for j, f in enumerate(raw.get("free_terms", [])):
            _reject_unknown(f, _FREE_KEYS, f"{where} free term {j}")
            free.append(FreeTerm(float(f["sigma"]), float(f["lambda_r"]),
                                 bool(f.get("tentative", False)),
                                 bool(f.get("estimated", False))))
        return DrudePermittivityModel(
            element=str(raw["element"]),
            temperature_k=float(raw["temperature_K"]),
            bound_terms=tuple(bound),
            free_terms=tuple(free),
            sigma0=float(raw["sigma0"]) if raw.get("sigma0") is not None else None,
            note=str(raw.get("note", "")),
        )
    except KeyError as exc:
        raise MaterialDataError(f"{where}: missing field {exc}") from exc
    except (TypeError, ValueError) as exc:
        if isinstance(exc, MaterialDataError):
            raise
        raise MaterialDataError(f"{where}: {exc}") from exc


def load_database(path: str | None = None) -> MaterialDatabase:
    """Load a material database.

    Resolution order: explicit ``path`` argument, the WIREPOL_MATERIAL_DB
    environment variable, then the bundled tungsten table.
    """
    if path is None:
        path = os.environ.get(ENV_DATABASE_PATH) or None
    if path is None:
        text = resources.files("wirepol.data").joinpath("tungsten.json").read_text()
    else:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MaterialDataError(f"material database is not valid JSON: {exc}") from exc
    if not isinstance(raw, dict):
        raise MaterialDataError("material database: top level must be an object")
    _reject_unknown(raw, _TOP_KEYS, "database")
    records = tuple(_parse_record(r, i) for i, r in enumerate(raw.get("records", [])))
    if not records:
        raise MaterialDataError("material database contains no records")
    db = MaterialDatabase(records=records,
                          provenance=str(raw.get("provenance", "")),
                          version=int(raw.get("version", 0)))
    for rec in records:
        if rec.sigma0 is not None:
            total = rec.dc_conductivity()
            if abs(total - rec.sigma0) > 0.02 * rec.sigma0:
                raise MaterialDataError(
                    f"record at {rec.temperature_k} K: sum of sigma_q = {total:g} "
                    f"disagrees with sigma0 = {rec.sigma0:g} by more than 2%")
    return db


def model_for_temperature(db: MaterialDatabase, temperature_k: float,
                          include_tentative: bool = False) -> DrudePermittivityModel:
    """Model at the tabulated temperature nearest to ``temperature_k``.

    No interpolation between columns: the fits are compared against data
    as fixed-temperature curves, and interpolating the parameters would
    invent physics.  Temperatures outside [250, 3400] K are rejected as
    beyond any defensible snap.
    """
    lo, hi = _TEMPERATURE_HARD_RANGE
    if not (lo <= temperature_k <= hi):
        raise RangeError(
            f"temperature {temperature_k} K outside snap range [{lo:g}, {hi:g}] K")
    best = min(db.records, key=lambda r: abs(r.temperature_k - temperature_k))
    return replace(best, include_tentative=include_tentative)

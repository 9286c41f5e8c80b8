"""Drude permittivity model and the material database loader."""

import cmath
import json
import math

import pytest
from hypothesis import given, settings, strategies as st
from scipy import constants

from wirepol.errors import MaterialDataError, RangeError
from wirepol.materials import (
    FITTED_RANGE_UM,
    load_database,
    model_for_temperature,
    permittivity,
    refraction_index,
    vacuum_model,
)


@pytest.fixture(scope="module")
def db():
    return load_database()


def test_vacuum_model_is_unity():
    model = vacuum_model()
    for lam in (0.4, 0.6, 2.0):
        assert permittivity(model, lam) == 1.0
        assert refraction_index(permittivity(model, lam)) == 1.0


def test_permittivity_against_independent_expression(db):
    # single-expression re-evaluation of the dispersion formula, with the
    # tentative conduction term included so every tabulated number enters
    model = model_for_temperature(db, 2400.0, include_tentative=True)
    lam = 0.6
    eps = 1.0
    for k0, ls, d in [(10.9, 1.40, 1.0), (13.4, 0.57, 1.2), (12.0, 0.25, 1.0)]:
        eps += k0 * lam**2 / (lam**2 - ls**2 - 1j * d * ls * lam)
    conv = 1e-6 / (2 * math.pi * constants.c * constants.epsilon_0)
    for sig, lr in [(1.19e6, 3.66), (0.25e6, 0.36)]:
        eps -= lam**2 * conv * sig / (lr + 1j * lam)
    assert permittivity(model, lam) == pytest.approx(eps, rel=1e-12)


def test_tentative_term_excluded_by_default(db):
    base = model_for_temperature(db, 2400.0)
    full = model_for_temperature(db, 2400.0, include_tentative=True)
    lam = 0.6
    assert permittivity(base, lam) != permittivity(full, lam)
    assert len(base.active_free_terms()) == 1
    assert len(full.active_free_terms()) == 2


def test_dc_conductivity_limit(db):
    # at very long wavelength Im(eps) -> sigma_dc * lambda / (2 pi c eps0)
    model = model_for_temperature(db, 2400.0, include_tentative=True)
    lam = 1e4
    im = permittivity(model, lam).imag
    sigma = im * 2 * math.pi * constants.c * constants.epsilon_0 / (lam * 1e-6)
    assert sigma == pytest.approx(model.dc_conductivity(), rel=0.02)


def test_passivity_over_fitted_range(db):
    lo, hi = FITTED_RANGE_UM
    for rec_t in (298.0, 1600.0, 2000.0, 2200.0, 2400.0):
        model = model_for_temperature(db, rec_t)
        for i in range(40):
            lam = lo + (hi - lo) * i / 39
            eps = permittivity(model, lam)
            n = refraction_index(eps)
            assert eps.imag > 0.0
            assert n.imag >= 0.0


def test_metallic_behavior(db):
    # strongly absorbing in the visible; conduction-dominated (Re eps < 0)
    # in the near infrared
    model = model_for_temperature(db, 2400.0)
    for lam in (0.5, 0.6, 0.75):
        eps = permittivity(model, lam)
        assert eps.imag > 5.0
    for lam in (1.5, 2.0, 2.5):
        assert permittivity(model, lam).real < 0.0


def test_refraction_index_round_trip():
    for eps in (-30 + 20j, -1 + 0.01j, 2.5 + 1e-6j, -4.93 + 19.8j):
        n = refraction_index(eps)
        assert n * n == pytest.approx(eps, rel=1e-14)
        assert n.imag >= 0.0


@given(st.floats(-100.0, 100.0), st.floats(1e-9, 100.0))
@settings(max_examples=100, deadline=None)
def test_refraction_index_branch(re, im):
    n = refraction_index(complex(re, im))
    assert n.imag >= 0.0
    assert cmath.isclose(n * n, complex(re, im), rel_tol=1e-12)


def test_temperature_snap(db):
    assert model_for_temperature(db, 2350.0).temperature_k == 2400.0
    assert model_for_temperature(db, 310.0).temperature_k == 298.0
    assert model_for_temperature(db, 1850.0).temperature_k == 2000.0
    assert model_for_temperature(db, 1200.0).temperature_k == 1100.0


def test_temperature_out_of_range(db):
    with pytest.raises(RangeError):
        model_for_temperature(db, 100.0)
    with pytest.raises(RangeError):
        model_for_temperature(db, 5000.0)


def test_env_var_override(tmp_path, monkeypatch, db):
    path = tmp_path / "alt.json"
    bundled = load_database()
    # rewrite the bundled database with only the room-temperature record
    import importlib.resources as res
    raw = json.loads(res.files("wirepol").joinpath("data/tungsten.json").read_text())
    raw["records"] = [r for r in raw["records"] if r["temperature_K"] == 298]
    path.write_text(json.dumps(raw))
    monkeypatch.setenv("WIREPOL_MATERIAL_DB", str(path))
    small = load_database()
    assert len(small.records) == 1
    assert len(bundled.records) > 1


def test_unknown_field_rejected(tmp_path):
    import importlib.resources as res
    raw = json.loads(res.files("wirepol").joinpath("data/tungsten.json").read_text())
    raw["records"][0]["typo_field"] = 1
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(raw))
    with pytest.raises(MaterialDataError):
        load_database(str(path))


def test_conductivity_sum_checked(tmp_path):
    import importlib.resources as res
    raw = json.loads(res.files("wirepol").joinpath("data/tungsten.json").read_text())
    raw["records"][0]["sigma0"] = 99e6
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(raw))
    with pytest.raises(MaterialDataError):
        load_database(str(path))

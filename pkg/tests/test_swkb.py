import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from swkblab.errors import MultipleRegionError, ParamError
from swkblab.invariance import mutated
from swkblab.model import Kind, PhysParams, SuperpotentialModel
from swkblab.swkb import SwkbConfig, find_turning_points, swkb_integral, swkb_integral_scaled

pos = st.floats(min_value=0.1, max_value=10.0)


def closed_form_sho(e, omega):
    # pi A / (2 sqrt B) with A = E, B = omega^2/4
    return math.pi * e / (2.0 * math.sqrt(omega**2 / 4.0))


def closed_form_conventional(e, omega, ell):
    # pi (A / (4 sqrt B) - sqrt C / 2) with A = E + omega ell, B = omega^2/4, C = ell^2
    a, b, c = e + omega * ell, omega**2 / 4.0, ell**2
    return math.pi * (a / (4.0 * math.sqrt(b)) - math.sqrt(c) / 2.0)


@settings(max_examples=40, deadline=None)
@given(omega=pos, hbar=pos, n=st.integers(1, 10))
def test_sho_matches_closed_form(omega, hbar, n):
    m = SuperpotentialModel(Kind.HARMONIC, PhysParams(omega, 1.0, hbar))
    res = swkb_integral(m, n)
    assert res.integral == pytest.approx(closed_form_sho(res.energy, omega), rel=1e-10)
    assert abs(res.deviation) <= 1e-9


@settings(max_examples=40, deadline=None)
@given(omega=pos, lt=st.floats(0.6, 10.0), hbar=pos, n=st.integers(1, 10))
def test_conventional_matches_closed_form(omega, lt, hbar, n):
    ell = lt * hbar
    m = SuperpotentialModel(Kind.CONVENTIONAL, PhysParams(omega, ell, hbar))
    res = swkb_integral(m, n)
    assert res.integral == pytest.approx(closed_form_conventional(res.energy, omega, ell), rel=1e-10)
    assert abs(res.deviation) <= 1e-9
    assert res.scheme_agreement <= max(1e-10 * abs(res.integral), 1e-14)


def test_conventional_turning_points_analytic():
    omega, ell, hbar, n = 1.3, 0.8, 0.7, 4
    m = SuperpotentialModel(Kind.CONVENTIONAL, PhysParams(omega, ell, hbar))
    level = m.energy(n)
    tp = find_turning_points(m, level)
    s = math.sqrt(level.energy)
    # omega x^2/2 -/+ sqrt(E) x - ell = 0
    assert tp.x_left == pytest.approx((-s + math.sqrt(level.energy + 2 * omega * ell)) / omega, rel=1e-13)
    assert tp.x_right == pytest.approx((s + math.sqrt(level.energy + 2 * omega * ell)) / omega, rel=1e-13)
    assert max(tp.bracket_residuals) <= 1e-13 * level.energy
    assert tp.center == pytest.approx(0.5 * (tp.x_left + tp.x_right))


def test_turning_points_reject_ground_state():
    m = SuperpotentialModel(Kind.EXTENDED)
    with pytest.raises(ParamError):
        find_turning_points(m, m.energy(0))


@pytest.mark.parametrize("kind", list(Kind))
def test_ground_state_is_degenerate_and_exact(kind):
    res = swkb_integral(SuperpotentialModel(kind), 0)
    assert res.integral == 0.0 and res.deviation == 0.0
    assert res.turning.x_left == res.turning.x_right


def test_against_oracle_fixture(oracle_rows):
    for row in oracle_rows:
        m = SuperpotentialModel(row["model"], PhysParams(row["omega"], row["ell"], row["hbar"]))
        res = swkb_integral(m, row["n"])
        assert res.integral == pytest.approx(row["I"], rel=1e-12), row
        assert res.deviation == pytest.approx(row["deviation"], rel=1e-9, abs=1e-13), row
        # scheme B alone, pushed to 1e-14
        assert res.integral_b == pytest.approx(row["I"], rel=1e-13), row


def test_scheme_b_at_tight_tolerance(oracle_rows):
    cfg = SwkbConfig(quad_tol=1e-14)
    row = oracle_rows[0]
    m = SuperpotentialModel(row["model"], PhysParams(row["omega"], row["ell"], row["hbar"]))
    res = swkb_integral(m, row["n"], cfg)
    assert res.integral_b == pytest.approx(row["I"], rel=1e-14)


def test_extended_deviation_is_negative_and_decays_with_ell():
    devs = []
    for ell in (0.6, 1.0, 2.0, 5.0, 10.0):
        res = swkb_integral(SuperpotentialModel(Kind.EXTENDED, PhysParams(1.0, ell, 1.0)), 1)
        assert res.deviation < 0.0
        assert abs(res.deviation) > 100 * res.quad_error
        devs.append(abs(res.deviation))
    assert devs[-1] < 1e-5 and devs[0] > 0.1


@settings(max_examples=15, deadline=None)
@given(lt=st.floats(0.6, 10.0), n=st.integers(1, 6))
def test_scaled_integral_equals_physical_at_unit_scale(lt, n):
    j = swkb_integral_scaled(lt, n).integral
    phys = swkb_integral(SuperpotentialModel(Kind.EXTENDED, PhysParams(1.0, lt, 1.0)), n).integral
    assert j == pytest.approx(phys, rel=1e-12)


def test_omega_invariance():
    # I does not depend on omega at fixed ell/hbar
    base = swkb_integral(SuperpotentialModel(Kind.EXTENDED, PhysParams(1.0, 1.5, 1.0)), 3).integral
    for omega in (0.01, 3.0, 250.0):
        res = swkb_integral(SuperpotentialModel(Kind.EXTENDED, PhysParams(omega, 1.5, 1.0)), 3)
        assert res.integral == pytest.approx(base, rel=1e-12)


def test_multiple_regions_are_refused():
    # a strongly mutated W with an interior bump gives two allowed intervals
    m = mutated(SuperpotentialModel(Kind.EXTENDED), 2, -20.0)
    with pytest.raises(MultipleRegionError):
        swkb_integral(m, 100)


@pytest.mark.parametrize("field", ["root_tol", "quad_tol", "clamp"])
def test_config_validation(field):
    with pytest.raises(ParamError):
        SwkbConfig(**{field: -1.0})


def test_result_fields():
    res = swkb_integral(SuperpotentialModel(Kind.EXTENDED), 2)
    assert res.defect == pytest.approx(res.integral - 2 * math.pi, abs=1e-14)
    assert res.hbar == 1.0 and res.n == 2 and res.energy == 4.0
    assert len(res.romberg_history) >= 4


def test_oracle_generator_does_not_import_the_package():
    from pathlib import Path

    script = Path(__file__).resolve().parents[1] / "scripts" / "generate_oracle_fixture.py"
    text = script.read_text()
    assert "import swkblab" not in text and "from swkblab" not in text

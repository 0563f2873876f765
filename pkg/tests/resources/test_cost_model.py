import pytest
from hypothesis import given, seed as hypothesis_seed
from hypothesis import strategies as st
from pydantic import ValidationError

from src.resources.cost_model import (
    cost_breakdown,
    cost_report,
    query_reduction,
    ratio_one,
    register_inventory,
    t_one_new,
    t_one_prev,
    total_ratio,
)
from src.resources.schemas import CircuitMethod, ResourceParams

NEW_REGISTERS = [
    "R_samp", "R_dim", "R_com", "R_ind", "R_c", "R_f",
    "R_ph,f", "R_ctr1", "R_g", "R_ph,g", "R_ctr2",
]
PREVIOUS_REGISTERS = [
    "R_samp", "R_count", "R_PRN", "R_com", "R_ind", "R_c",
    "R_f", "R_sum,f", "R_g", "R_ph,g", "R_ctr",
]


@pytest.fixture
def reference() -> ResourceParams:
    return ResourceParams(n_prn=64, n_dig=16, n_icdf=109, n_samp=20, n_obl=20)


def test_reference_t_counts(reference):
    assert t_one_prev(reference) == 724_864
    assert t_one_new(reference) == 46_026_624
    assert ratio_one(reference) == pytest.approx(63.497, abs=1e-3)


def test_reference_report(reference):
    report = cost_report(reference, typical_scale=1e-2, delta_rel=1e-2)
    assert report.rounded_t_one_prev == 7.2e5
    assert report.rounded_t_one_new == 4.6e7
    assert report.rounded_ratio_one == 64
    assert report.rounded_query_reduction == pytest.approx(1e-2)
    assert report.rounded_total_ratio == pytest.approx(0.64)
    assert report.query_reduction == pytest.approx(1e4 / 2**20)
    assert report.total_ratio == pytest.approx(0.6055, abs=1e-4)
    assert report.total_ratio < 1.0


def test_report_with_explicit_dimension(reference):
    report = cost_report(reference, typical_scale=1e-2, delta_rel=1e-2, dimension=10**6)
    assert report.query_reduction == pytest.approx(1e-2)
    assert report.total_ratio == pytest.approx(ratio_one(reference) * 1e-2)


@pytest.mark.parametrize("method", list(CircuitMethod))
def test_breakdown_sums_to_total(reference, method):
    terms = cost_breakdown(reference, method)
    total = t_one_prev(reference) if method is CircuitMethod.PREVIOUS else t_one_new(reference)
    assert sum(term.t_count for term in terms) == total
    assert any(term.t_count == 0 and term.formula == "subleading" for term in terms)


def test_breakdown_reference_items(reference):
    previous = cost_breakdown(reference, CircuitMethod.PREVIOUS)
    assert previous[0].t_count == 573_440
    assert previous[1].t_count == 151_424
    new = cost_breakdown(reference, CircuitMethod.NEW)
    assert new[0].count == 160
    assert new[0].t_count == 45_875_200
    assert new[1].t_count == previous[1].t_count


@hypothesis_seed(17)
@given(
    n_prn=st.integers(min_value=1, max_value=128),
    n_dig=st.integers(min_value=1, max_value=64),
    n_icdf=st.integers(min_value=0, max_value=512),
    n_samp=st.integers(min_value=1, max_value=40),
    n_obl=st.integers(min_value=1, max_value=40),
)
def test_closed_forms(n_prn, n_dig, n_icdf, n_samp, n_obl):
    p = ResourceParams(n_prn=n_prn, n_dig=n_dig, n_icdf=n_icdf, n_samp=n_samp, n_obl=n_obl)
    conversion = 210 * n_dig**2 + 56 * n_dig * n_icdf
    assert t_one_prev(p) == 140 * n_prn**2 + conversion
    assert t_one_new(p) == 280 * (n_samp + n_obl) * n_prn**2 + conversion
    assert t_one_new(p) > t_one_prev(p)


def test_query_reduction():
    assert query_reduction(0.1, 0.1, 100) == pytest.approx(1.0)
    assert query_reduction(1e-2, 1e-2, 1 << 20) == pytest.approx(0.0095367, rel=1e-4)
    with pytest.raises(ValueError):
        query_reduction(0.0, 0.1, 100)
    with pytest.raises(ValueError):
        query_reduction(0.1, 0.1, 0)


def test_total_ratio_is_product(reference):
    assert total_ratio(reference, 0.05, 0.02, 4096) == pytest.approx(
        ratio_one(reference) * query_reduction(0.05, 0.02, 4096)
    )


def test_default_params_come_from_settings():
    p = ResourceParams()
    assert (p.n_prn, p.n_dig, p.n_icdf, p.n_samp, p.n_obl) == (64, 16, 109, 20, 20)
    assert p.n_exp == 40


def test_params_validation():
    with pytest.raises(ValidationError):
        ResourceParams(n_prn=0)
    with pytest.raises(ValidationError):
        ResourceParams(n_dig=16, qubits=3)


def test_register_inventories(reference):
    new = register_inventory(CircuitMethod.NEW, reference)
    previous = register_inventory(CircuitMethod.PREVIOUS, reference)
    assert [register.name for register in new] == NEW_REGISTERS
    assert [register.name for register in previous] == PREVIOUS_REGISTERS
    widths = {register.name: register.width for register in new}
    assert widths["R_samp"] == 20
    assert widths["R_dim"] == 20
    assert widths["R_ph,f"] == 1
    assert widths["R_ctr1"] is None
    assert {register.name: register.width for register in previous}["R_PRN"] == 64
    assert all(register.role for register in new + previous)

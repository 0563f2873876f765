import math

import numpy as np
import pytest
from hypothesis import given, seed as hypothesis_seed
from hypothesis import strategies as st
from pydantic import ValidationError

from src.qae.exceptions import AmplitudeDomainError
from src.qae.kernel import (
    CONFIDENCE_FLOOR,
    amplitude_from_theta,
    fold,
    h_bound,
    h_closed,
    h_direct,
    h_leading,
    h_product,
    qae_confidence,
    qae_pmf,
    qae_sample,
    qae_sample_many,
    second_moment,
    second_moment_closed,
    theta_from_amplitude,
)
from src.qae.schemas import QaeGrid, QaePmf

# max(0, (max|H|·M − 1)·M) over the calibration sweep below, frozen
H_CALIBRATION = 1e-6


def off_grid_thetas(grid: QaeGrid, count: int, rng: np.random.Generator) -> list[float]:
    thetas = []
    while len(thetas) < count:
        theta = float(rng.uniform(0.0, 0.5))
        if abs(theta * grid.M - round(theta * grid.M)) > 1e-6:
            thetas.append(theta)
    return thetas


def test_theta_amplitude_round_trip():
    assert theta_from_amplitude(0.0) == 0.0
    assert theta_from_amplitude(1.0) == 0.5
    assert theta_from_amplitude(0.5) == pytest.approx(0.25)
    assert float(amplitude_from_theta(theta_from_amplitude(0.3))) == pytest.approx(0.3)


@pytest.mark.parametrize("amplitude", [-1e-3, 1.0001])
def test_amplitude_domain(amplitude):
    with pytest.raises(AmplitudeDomainError):
        theta_from_amplitude(amplitude)


def test_grid_points_and_size():
    grid = QaeGrid.of_size(8)
    assert grid.m == 3
    assert grid.M == 8
    np.testing.assert_array_equal(grid.points, np.arange(8) / 8)
    with pytest.raises(ValueError):
        QaeGrid.of_size(6)


def test_on_grid_point_mass():
    grid = QaeGrid(m=3)
    pmf = qae_pmf(0.25, grid)
    assert pmf.probs[2] == 1.0
    assert math.fsum(pmf.probs) == 1.0


def test_theta_zero_point_mass():
    pmf = qae_pmf(0.0, QaeGrid(m=5))
    assert pmf.probs[0] == 1.0
    assert pmf.mode == 0.0


def test_off_grid_mass_concentrates_on_neighbours():
    grid = QaeGrid(m=2)
    pmf = qae_pmf(0.125, grid)
    assert pmf.probs[0] == pytest.approx(pmf.probs[1])
    assert pmf.probs[0] + pmf.probs[1] >= CONFIDENCE_FLOOR
    assert pmf.probs[0] == pytest.approx(1.0 / (16 * math.sin(math.pi / 8) ** 2), rel=1e-12)


@hypothesis_seed(5)
@given(theta=st.floats(min_value=0.0, max_value=1.0), m=st.integers(min_value=1, max_value=12))
def test_pmf_normalized(theta, m):
    pmf = qae_pmf(theta, QaeGrid(m=m))
    assert math.fsum(pmf.probs) == pytest.approx(1.0, abs=1e-12)
    assert np.all(pmf.probs >= 0.0)


def test_pmf_is_read_only():
    pmf = qae_pmf(0.1, QaeGrid(m=4))
    with pytest.raises(ValueError):
        pmf.probs[0] = 1.0


def test_pmf_rejects_unnormalized():
    with pytest.raises(ValidationError):
        QaePmf(grid=QaeGrid(m=1), theta=0.0, probs=np.array([0.7, 0.7]))


def test_mode_within_one_cell():
    grid = QaeGrid(m=6)
    for theta in (0.013, 0.21, 0.377, 0.49):
        assert abs(qae_pmf(theta, grid).mode - theta) <= 1.0 / grid.M


def test_sample_with_uniform_variate():
    grid = QaeGrid(m=3)
    assert qae_sample(0.25, grid, 0.0) == 0.25
    assert qae_sample(0.25, grid, 0.999) == 0.25
    pmf = qae_pmf(0.3, grid)
    first_nonzero = float(np.flatnonzero(pmf.probs)[0]) / grid.M
    assert qae_sample(0.3, grid, 0.0) == first_nonzero


def test_sample_many_frequencies(rng):
    grid = QaeGrid(m=3)
    theta = 0.3
    outcomes = qae_sample_many(theta, grid, rng, 20_000)
    counts = np.bincount(np.rint(outcomes * grid.M).astype(int), minlength=grid.M) / outcomes.size
    np.testing.assert_allclose(counts, qae_pmf(theta, grid).probs, atol=0.015)
    assert qae_sample_many(theta, grid, rng, 0).size == 0


def test_sample_accepts_generator(rng):
    value = qae_sample(0.1, QaeGrid(m=4), rng)
    assert value in set(QaeGrid(m=4).points.tolist())


def test_fold():
    np.testing.assert_array_equal(fold([0.0, 0.25, 0.5, 0.75, 0.875]), [0.0, 0.25, 0.5, 0.25, 0.125])


def test_confidence_floor_sweep(rng):
    thetas = rng.uniform(0.0, 0.5, size=100)
    for m in range(2, 11):
        grid = QaeGrid(m=m)
        for theta in thetas:
            assert qae_confidence(float(theta), grid) >= CONFIDENCE_FLOOR


@pytest.mark.slow
def test_confidence_floor_full_sweep():
    thetas = np.random.default_rng(99).uniform(0.0, 0.5, size=1000)
    violations = sum(
        qae_confidence(float(theta), QaeGrid(m=m)) < CONFIDENCE_FLOOR
        for m in range(2, 11)
        for theta in thetas
    )
    assert violations == 0


def test_on_grid_confidence_is_one():
    assert qae_confidence(0.25, QaeGrid(m=4)) == 1.0


def test_h_vanishes_on_grid():
    grid = QaeGrid(m=4)
    for theta in (0.0, 0.125, 0.25, 0.5):
        assert h_direct(theta, grid) == pytest.approx(0.0, abs=1e-15)
        assert h_closed(theta, grid) == 0.0
        assert h_product(theta, grid) == pytest.approx(0.0, abs=1e-15)
        assert h_leading(theta, grid) == pytest.approx(0.0, abs=1e-15)


def test_h_closed_forms_match_direct(rng):
    for m in range(2, 11):
        grid = QaeGrid(m=m)
        for theta in off_grid_thetas(grid, 40, rng):
            direct = h_direct(theta, grid)
            assert h_closed(theta, grid) == pytest.approx(direct, abs=1e-9)
            assert h_product(theta, grid) == pytest.approx(direct, abs=1e-9)


@pytest.mark.slow
def test_h_closed_form_randomized_pairs():
    rng = np.random.default_rng(4242)
    worst = 0.0
    for _ in range(1000):
        grid = QaeGrid(m=int(rng.integers(1, 11)))
        (theta,) = off_grid_thetas(grid, 1, rng)
        worst = max(worst, abs(h_closed(theta, grid) - h_direct(theta, grid)))
    assert worst <= 1e-9


def test_h_bound_with_calibration(rng):
    calibration = 0.0
    for m in range(1, 11):
        grid = QaeGrid(m=m)
        thetas = np.linspace(0.0, 0.5, 401)
        worst = max(abs(h_direct(float(theta), grid)) for theta in thetas) * grid.M
        calibration = max(calibration, (worst - 1.0) * grid.M)
        assert worst <= 1.0 + H_CALIBRATION / grid.M
        assert h_bound(grid) == 1.0 / grid.M
    assert calibration <= H_CALIBRATION


def test_worst_case_h_halves_per_qubit():
    thetas = np.linspace(0.001, 0.499, 997)
    worst = [
        max(abs(h_product(float(theta), QaeGrid(m=m))) for theta in thetas) for m in range(3, 9)
    ]
    for coarse, fine in zip(worst, worst[1:]):
        assert 0.4 <= fine / coarse <= 0.6


def test_second_moment_closed_form(rng):
    for m in range(1, 10):
        grid = QaeGrid(m=m)
        for theta in off_grid_thetas(grid, 10, rng):
            assert second_moment(theta, grid) == pytest.approx(
                second_moment_closed(theta, grid), rel=1e-9, abs=1e-15
            )


@pytest.mark.parametrize("m", [1, 3, 6, 9])
def test_pmf_mirrors_under_reflection(m, rng):
    grid = QaeGrid(m=m)
    mirror = (grid.M - np.arange(grid.M)) % grid.M
    for theta in off_grid_thetas(grid, 10, rng):
        original = qae_pmf(theta, grid).probs
        reflected = qae_pmf(1.0 - theta, grid).probs
        np.testing.assert_allclose(reflected, original[mirror], atol=1e-12)

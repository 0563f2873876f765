"""Exact outcome statistics of quantum amplitude estimation.

The estimation register is never simulated; each run is represented by the
outcome distribution G(θ̃; θ, M) = sin²(M(θ̃−θ)π) / (M² sin²((θ̃−θ)π)) over the
grid I_M, and the error moments used by the nested estimator are derived from it.
"""
import math

import numpy as np

from src.qae.exceptions import AmplitudeDomainError
from src.qae.schemas import QaeGrid, QaePmf

ON_GRID_TOLERANCE = 1e-12
CONFIDENCE_FLOOR = 8.0 / math.pi**2


def theta_from_amplitude(amplitude: float) -> float:
    """θ in [0, 1/2] with sin²(θπ) = amplitude.

    Raises:
        AmplitudeDomainError: If amplitude is outside [0, 1]
    """
    if not 0.0 <= amplitude <= 1.0:
        raise AmplitudeDomainError(amplitude)
    return math.asin(math.sqrt(amplitude)) / math.pi


def amplitude_from_theta(theta):
    return np.sin(np.asarray(theta) * np.pi) ** 2


def fold(theta_tilde):
    """Map outcomes above 1/2 to 1 − θ̃."""
    theta_tilde = np.asarray(theta_tilde, dtype=np.float64)
    return np.where(theta_tilde > 0.5, 1.0 - theta_tilde, theta_tilde)


def _grid_offset(theta: float, grid: QaeGrid) -> tuple[float, int | None]:
    """Return M·θ (mod M) and the grid index θ sits on, if any."""
    scaled = (theta % 1.0) * grid.M
    nearest = round(scaled)
    if abs(scaled - nearest) <= ON_GRID_TOLERANCE * grid.M:
        return scaled, nearest % grid.M
    return scaled, None


def qae_pmf(theta: float, grid: QaeGrid) -> QaePmf:
    """Outcome distribution G(·; θ, M) over I_M."""
    scaled, on_grid = _grid_offset(theta, grid)
    M = grid.M
    if on_grid is not None:
        # removable singularity: the analytic limit is a point mass
        probs = np.zeros(M)
        probs[on_grid] = 1.0
        return QaePmf(grid=grid, theta=theta, probs=probs)

    k = np.arange(M, dtype=np.float64)
    numerator = math.sin(math.pi * (scaled % 1.0)) ** 2
    probs = numerator / (M**2 * np.sin(np.pi * (k - scaled) / M) ** 2)
    probs = probs / math.fsum(probs)
    return QaePmf(grid=grid, theta=theta, probs=probs)


def qae_confidence(theta: float, grid: QaeGrid) -> float:
    """Probability that the folded outcome lies strictly within 1/M of θ."""
    pmf = qae_pmf(theta, grid)
    M = grid.M
    folded_index = np.minimum(np.arange(M), M - np.arange(M))
    near = np.abs(folded_index - theta * M) < 1.0
    return math.fsum(pmf.probs[near])


def _draw_indices(pmf: QaePmf, uniforms: np.ndarray) -> np.ndarray:
    cdf = np.cumsum(pmf.probs)
    cdf /= cdf[-1]
    indices = np.searchsorted(cdf, uniforms, side="right")
    return np.minimum(indices, pmf.grid.M - 1)


def qae_sample(
    theta: float, grid: QaeGrid, randomness: np.random.Generator | float
) -> float:
    """Draw one outcome θ̃ by inverting the cumulative distribution over I_M.

    Args:
        theta: True phase
        grid: Estimation register
        randomness: A numpy Generator, or a uniform variate in [0, 1) used directly

    Returns:
        float: The grid point k/M drawn
    """
    u = randomness.random() if isinstance(randomness, np.random.Generator) else randomness
    index = _draw_indices(qae_pmf(theta, grid), np.asarray([u]))[0]
    return float(index) / grid.M


def qae_sample_many(
    theta: float, grid: QaeGrid, rng: np.random.Generator, size: int
) -> np.ndarray:
    if size == 0:
        return np.empty(0)
    indices = _draw_indices(qae_pmf(theta, grid), rng.random(size))
    return indices / grid.M


def h_direct(theta: float, grid: QaeGrid) -> float:
    """H(θ, M) = Σ G(θ̃; θ, M)(sin²(θ̃π) − sin²(θπ)) summed literally."""
    pmf = qae_pmf(theta, grid)
    deviation = amplitude_from_theta(grid.points) - math.sin(theta * math.pi) ** 2
    return math.fsum(pmf.probs * deviation)


def h_closed(theta: float, grid: QaeGrid) -> float:
    """H via sin²(Mθπ)/M² [M cos(2θπ) + sin(2θπ) Σ cot((θ̃−θ)π)]."""
    scaled, on_grid = _grid_offset(theta, grid)
    if on_grid is not None:
        return 0.0
    M = grid.M
    k = np.arange(M, dtype=np.float64)
    cot_sum = math.fsum(1.0 / np.tan(np.pi * (k - scaled) / M))
    prefactor = math.sin(math.pi * (scaled % 1.0)) ** 2 / M**2
    return prefactor * (
        M * math.cos(2 * math.pi * theta) + math.sin(2 * math.pi * theta) * cot_sum
    )


def h_product(theta: float, grid: QaeGrid) -> float:
    """H = sin(Mθπ)·sin((M−2)θπ)/M, using Σ_k cot(x + kπ/M) = M·cot(Mx)."""
    M = grid.M
    return math.sin(M * theta * math.pi) * math.sin((M - 2) * theta * math.pi) / M


def h_leading(theta: float, grid: QaeGrid) -> float:
    """Leading term sin²(Mθπ)cos(2θπ)/M of H."""
    M = grid.M
    return math.sin(M * theta * math.pi) ** 2 * math.cos(2 * theta * math.pi) / M


def h_bound(grid: QaeGrid) -> float:
    return 1.0 / grid.M


def second_moment(theta: float, grid: QaeGrid) -> float:
    """V(θ, M) = Σ G(θ̃; θ, M)(sin²(θ̃π) − sin²(θπ))² summed literally."""
    pmf = qae_pmf(theta, grid)
    deviation = amplitude_from_theta(grid.points) - math.sin(theta * math.pi) ** 2
    return math.fsum(pmf.probs * deviation**2)


def second_moment_closed(theta: float, grid: QaeGrid) -> float:
    """V = sin²(Mθπ)/(2M); the kernel's heavy tails keep it O(1/M)."""
    M = grid.M
    return math.sin(M * theta * math.pi) ** 2 / (2 * M)

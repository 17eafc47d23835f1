"""
Deterministic test-function corpus: smooth samples compactly supported in the domain.

Members are built from analytic formulas whose parameters depend only on the
seed, so the same corpus can be resampled on refined grids.
"""
import logging
from typing import List, Tuple

import numpy as np

from ...errors import ParameterError
from .geometry import septic_smoothstep
from .models import Domain, Grid, GridFunction

logger = logging.getLogger(__name__)

# Bump vanishes within ZERO_ZONE*L of the boundary and ramps up over RAMP_WIDTH*L.
ZERO_ZONE = 0.1
RAMP_WIDTH = 0.25
TRIG_DEGREE = 4
OSCILLATORY_MODE = 8


def _unit_coordinates(domain: Domain, grid: Grid):
    """Node coordinates mapped to [0, 1] per axis of the bounding box."""
    return [(grid.nodes[:, k] - a) / (b - a) for k, (a, b) in enumerate(domain.box)]


def interior_bump(domain: Domain, grid: Grid) -> np.ndarray:
    """Fixed C3 bump equal to 1 in the core and 0 near the boundary."""
    if domain.kind == "ball":
        r = np.linalg.norm(grid.nodes - np.asarray(domain.center), axis=1) / domain.radius
        return septic_smoothstep((1.0 - r - 2.0 * ZERO_ZONE) / (2.0 * RAMP_WIDTH))
    out = np.ones(grid.size)
    for t in _unit_coordinates(domain, grid):
        gap = np.minimum(t, 1.0 - t)
        out *= septic_smoothstep((gap - ZERO_ZONE) / RAMP_WIDTH)
    return out


def _sine_modes(domain: Domain, grid: Grid, mode):
    out = np.ones(grid.size)
    for t, k in zip(_unit_coordinates(domain, grid), mode):
        out *= np.sin(k * np.pi * t)
    return out


def _trig_polynomial(domain, grid, coeffs):
    total = np.zeros(grid.size)
    for mode, a in coeffs:
        total += a * _sine_modes(domain, grid, mode)
    scale = sum(abs(a) for _, a in coeffs)
    return total / scale if scale > 0 else total


def _random_coefficients(rng, dim):
    coeffs = []
    modes = [(k,) for k in range(1, TRIG_DEGREE + 1)] if dim == 1 else \
        [(k, l) for k in range(1, TRIG_DEGREE) for l in range(1, TRIG_DEGREE)]
    for mode in modes:
        coeffs.append((mode, float(rng.normal()) / max(mode)))
    return coeffs


def make_corpus(domain: Domain, grid: Grid, count: int, seed: int) -> List[Tuple[GridFunction, GridFunction]]:
    """
    Build `count` (g, h) pairs of smooth functions vanishing near the boundary.

    The first three pairs are canonical: eigenfunction-shaped x eigenfunction-shaped,
    bump x bump, and bump x oscillatory. The rest are random trigonometric
    polynomials times the fixed bump, with sup-norms at most 3.

    Args:
        domain: Domain the grid was built on
        grid: Sampling grid
        count: Number of pairs (>= 1)
        seed: Seed for the parameter generator

    Returns:
        list of (g, h) GridFunction pairs
    """
    if count < 1:
        raise ParameterError("Corpus needs at least one pair.")
    dim = grid.dimension
    bump = interior_bump(domain, grid)
    ones = (1,) * dim

    def member(values):
        return GridFunction(grid, np.where(grid.inside, values, 0.0))

    canonical = [
        (member(bump * _sine_modes(domain, grid, ones)),
         member(bump * _sine_modes(domain, grid, (2,) + (1,) * (dim - 1)))),
        (member(bump), member(0.5 * bump)),
        (member(bump), member(bump * np.cos(OSCILLATORY_MODE * np.pi * _unit_coordinates(domain, grid)[0]))),
    ]
    pairs = canonical[:count]

    rng = np.random.default_rng(seed)
    while len(pairs) < count:
        amp_g, amp_h = rng.uniform(0.5, 3.0, size=2)
        g = amp_g * _trig_polynomial(domain, grid, _random_coefficients(rng, dim))
        h = amp_h * _trig_polynomial(domain, grid, _random_coefficients(rng, dim))
        pairs.append((member(bump * g), member(bump * h)))

    logger.debug(f"Corpus of {len(pairs)} pairs on {domain.describe()} (seed={seed})")
    return pairs


def corpus_functions(pairs) -> List[GridFunction]:
    """Flatten pairs into the list g_1, h_1, g_2, h_2, ..."""
    return [f for pair in pairs for f in pair]

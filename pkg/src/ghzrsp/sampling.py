"""Seeded random protocol parameters."""
from __future__ import annotations

import math

import numpy as np

from .qudit import TWO_PI, Angles2, Angles4, Angles8


def rng_for(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed))


def _phase(rng) -> float:
    # uniform() can return the upper bound after float rounding; keep [0, 2π)
    return float(rng.uniform(0.0, TWO_PI)) % TWO_PI


def random_angles2(rng: np.random.Generator) -> Angles2:
    return Angles2(float(rng.uniform(0.0, math.pi)), _phase(rng))


def random_angles4(rng: np.random.Generator) -> Angles4:
    g = rng.uniform(0.0, math.pi / 2, size=3)
    return Angles4(*(float(x) for x in g), *(_phase(rng) for _ in range(3)))


def random_angles8(rng: np.random.Generator) -> Angles8:
    mags = np.abs(rng.normal(size=8))
    mags /= np.linalg.norm(mags)
    thetas = tuple(float(x) for x in np.arccos(np.clip(mags, -1.0, 1.0)))
    phis = (0.0,) + tuple(_phase(rng) for _ in range(7))
    return Angles8(thetas, phis)


def random_unit_vector(rng: np.random.Generator, d: int) -> np.ndarray:
    v = rng.normal(size=d) + 1j * rng.normal(size=d)
    return v / np.linalg.norm(v)


def random_monomial(rng: np.random.Generator, d: int, n_grid: int | None = None) -> np.ndarray:
    """Random phased permutation; phases are drawn from ``n_grid`` equally spaced points if given."""
    perm = rng.permutation(d)
    if n_grid is None:
        phases = rng.uniform(0.0, TWO_PI, size=d)
    else:
        phases = TWO_PI * rng.integers(0, n_grid, size=d) / n_grid
    m = np.zeros((d, d), dtype=np.complex128)
    m[np.arange(d), perm] = np.exp(1j * phases)
    return m

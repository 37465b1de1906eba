"""Deterministic test-signal synthesis."""

from __future__ import annotations

import numpy as np

from .grid_signal import GridSpec, QSignal2D
from .quaternion_core import qmul_array

__all__ = [
    "GENERATORS",
    "gaussian",
    "chirp",
    "impulse",
    "random_smooth",
    "quaternion_random",
    "generate",
]


def gaussian(spec: GridSpec, width: float = 1.0) -> QSignal2D:
    """Real ``exp(-|t|^2 / (2 width^2))``."""
    return QSignal2D.from_function(spec, lambda a, b: np.exp(-(a * a + b * b) / (2 * width ** 2)))


def chirp(spec: GridSpec, rate: float = 0.5, width: float = 1.0) -> QSignal2D:
    """``exp(i rate t1^2) * gaussian * exp(j rate t2^2)``: i-chirp on the left, j-chirp on the right."""
    t1, t2 = spec.mesh()
    env = np.exp(-(t1 * t1 + t2 * t2) / (2 * width ** 2))
    left = np.zeros(t1.shape + (4,))
    left[..., 0], left[..., 1] = np.cos(rate * t1 * t1), np.sin(rate * t1 * t1)
    right = np.zeros(t1.shape + (4,))
    right[..., 0], right[..., 2] = np.cos(rate * t2 * t2), np.sin(rate * t2 * t2)
    return QSignal2D(spec, qmul_array(left, right) * env[..., None])


def impulse(spec: GridSpec) -> QSignal2D:
    """One sample of height ``1 / delta^2`` at the origin, so the quadrature mass is 1."""
    s = np.zeros((spec.n, spec.n, 4))
    o = spec.origin_index
    s[o, o, 0] = 1.0 / spec.delta ** 2
    return QSignal2D(spec, s)


def _atoms(spec: GridSpec, rng: np.random.Generator, n_atoms: int, quaternion: bool) -> QSignal2D:
    t1, t2 = spec.mesh()
    out = np.zeros((spec.n, spec.n, 4))
    for _ in range(n_atoms):
        c1, c2 = rng.uniform(-1.5, 1.5, size=2)
        w = rng.uniform(0.7, 1.2)
        coef = rng.normal(size=4) if quaternion else np.array([rng.normal(), 0, 0, 0])
        bump = np.exp(-((t1 - c1) ** 2 + (t2 - c2) ** 2) / (2 * w * w))
        out += bump[..., None] * coef
    return QSignal2D(spec, out)


def random_smooth(spec: GridSpec, rng: np.random.Generator, n_atoms: int = 3) -> QSignal2D:
    """Real sum of Gaussian bumps with random centres, widths and weights."""
    return _atoms(spec, rng, n_atoms, quaternion=False)


def quaternion_random(spec: GridSpec, rng: np.random.Generator, n_atoms: int = 3) -> QSignal2D:
    """Like :func:`random_smooth` but each bump carries a random quaternion weight."""
    return _atoms(spec, rng, n_atoms, quaternion=True)


GENERATORS = ("gaussian", "chirp", "impulse", "random-smooth", "quaternion-random")


def generate(name: str, spec: GridSpec, seed: int = 0, **opts) -> QSignal2D:
    if name == "gaussian":
        return gaussian(spec, opts.get("width", 1.0))
    if name == "chirp":
        return chirp(spec, opts.get("rate", 0.5), opts.get("width", 1.0))
    if name == "impulse":
        return impulse(spec)
    if name == "random-smooth":
        return random_smooth(spec, np.random.default_rng(seed))
    if name == "quaternion-random":
        return quaternion_random(spec, np.random.default_rng(seed))
    raise ValueError(f"unknown generator {name!r}; choose from {', '.join(GENERATORS)}")

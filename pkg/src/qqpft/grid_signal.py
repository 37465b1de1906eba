"""Sampled quaternion signals on centred square grids, plus quadrature norms.

A grid of ``n`` samples and physical width ``extent`` per axis has spacing
``delta = extent / n`` and coordinates ``t_m = -extent/2 + m * delta`` for
``m = 0 .. n-1``; for even ``n`` the origin sits at index ``n // 2``.
Arrays are row-major with the first axis following ``t1``.

Integrals are rectangle-rule sums. For smooth, rapidly decaying integrands
on these grids that rule is spectrally accurate.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterator

import numpy as np

from .quaternion_core import (
    Quaternion,
    conj_array,
    modulus_array,
    qmul_array,
)

__all__ = [
    "GridSpec",
    "FreqGridSpec",
    "QSignal2D",
    "TFGrid4D",
    "lp_norm",
    "inner_product",
    "scalar_inner",
    "lp_norm_4d",
    "scalar_inner_4d",
    "left_mul",
    "right_mul",
]


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a, dtype=float)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class GridSpec:
    """Centred uniform grid ``[-extent/2, extent/2)`` with ``n`` samples per axis."""

    n: int
    extent: float

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 2:
            raise ValueError(f"grid needs an integer n >= 2, got {self.n}")
        if not (self.extent > 0 and np.isfinite(self.extent)):
            raise ValueError(f"grid extent must be positive, got {self.extent}")
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "extent", float(self.extent))

    @property
    def delta(self) -> float:
        return self.extent / self.n

    @property
    def origin_index(self) -> int:
        return self.n // 2

    def coords(self) -> np.ndarray:
        return -self.extent / 2 + np.arange(self.n) * self.delta

    def mesh(self) -> tuple[np.ndarray, np.ndarray]:
        t = self.coords()
        return np.meshgrid(t, t, indexing="ij")


@dataclass(frozen=True, eq=False)
class FreqGridSpec:
    """Uniform, strictly increasing frequency samples for each axis."""

    n: int
    xi1: np.ndarray
    xi2: np.ndarray

    def __post_init__(self):
        xi1 = _frozen(self.xi1)
        xi2 = _frozen(self.xi2)
        for name, xi in (("xi1", xi1), ("xi2", xi2)):
            if xi.shape != (self.n,):
                raise ValueError(f"{name} must have {self.n} samples")
            if self.n < 2:
                raise ValueError("frequency grid needs at least two samples")
            d = np.diff(xi)
            if np.any(d <= 0):
                raise ValueError(f"{name} must be strictly increasing")
            if np.max(np.abs(d - d.mean())) > 1e-9 * abs(d.mean()):
                raise ValueError(f"{name} must be uniformly spaced")
        object.__setattr__(self, "xi1", xi1)
        object.__setattr__(self, "xi2", xi2)

    @property
    def d1(self) -> float:
        return float((self.xi1[-1] - self.xi1[0]) / (self.n - 1))

    @property
    def d2(self) -> float:
        return float((self.xi2[-1] - self.xi2[0]) / (self.n - 1))

    def __eq__(self, other):
        if not isinstance(other, FreqGridSpec):
            return NotImplemented
        return (self.n == other.n and np.array_equal(self.xi1, other.xi1)
                and np.array_equal(self.xi2, other.xi2))


@dataclass(frozen=True, eq=False)
class QSignal2D:
    """Quaternion samples ``f(t1, t2)`` stored as an ``(n, n, 4)`` array."""

    spec: GridSpec
    samples: np.ndarray

    def __post_init__(self):
        s = _frozen(self.samples)
        n = self.spec.n
        if s.shape != (n, n, 4):
            raise ValueError(f"samples must have shape {(n, n, 4)}, got {s.shape}")
        if not np.all(np.isfinite(s)):
            raise ValueError("signal samples must be finite")
        object.__setattr__(self, "samples", s)

    @classmethod
    def zeros(cls, spec: GridSpec) -> QSignal2D:
        return cls(spec, np.zeros((spec.n, spec.n, 4)))

    @classmethod
    def from_function(cls, spec: GridSpec, fn: Callable) -> QSignal2D:
        """Sample ``fn(t1, t2)``.

        ``fn`` receives meshgrid arrays and returns either a real array of
        shape ``(n, n)`` or a quaternion array of shape ``(n, n, 4)``.
        """
        t1, t2 = spec.mesh()
        v = np.asarray(fn(t1, t2), dtype=float)
        if v.shape == (spec.n, spec.n):
            v = np.stack([v, np.zeros_like(v), np.zeros_like(v), np.zeros_like(v)], axis=-1)
        return cls(spec, v)

    def __add__(self, other: QSignal2D) -> QSignal2D:
        _check_same_grid(self, other)
        return QSignal2D(self.spec, self.samples + other.samples)

    def __sub__(self, other: QSignal2D) -> QSignal2D:
        _check_same_grid(self, other)
        return QSignal2D(self.spec, self.samples - other.samples)

    def scaled(self, s: float) -> QSignal2D:
        return QSignal2D(self.spec, self.samples * float(s))

    def conj(self) -> QSignal2D:
        return QSignal2D(self.spec, conj_array(self.samples))

    def modulus(self) -> np.ndarray:
        return modulus_array(self.samples)


def _check_same_grid(f: QSignal2D, g: QSignal2D) -> None:
    if f.spec != g.spec:
        raise ValueError(f"grid mismatch: {f.spec} vs {g.spec}")


def left_mul(q: Quaternion, f: QSignal2D) -> QSignal2D:
    return QSignal2D(f.spec, qmul_array(q.to_array(), f.samples))


def right_mul(f: QSignal2D, q: Quaternion) -> QSignal2D:
    return QSignal2D(f.spec, qmul_array(f.samples, q.to_array()))


def _check_p(p: float) -> None:
    if not (p >= 1):
        raise ValueError(f"L^p norms need p >= 1 (or inf), got {p}")


def _lp_from_modulus(mod: np.ndarray, p: float, measure: float) -> float:
    _check_p(p)
    if np.isinf(p):
        return float(mod.max()) if mod.size else 0.0
    m = mod.max() if mod.size else 0.0
    if m == 0:
        return 0.0
    # rescale so large p does not overflow
    return float(m * (np.sum((mod / m) ** p) * measure) ** (1.0 / p))


def lp_norm(f: QSignal2D, p: float) -> float:
    """Quadrature ``L^p`` norm; ``p = inf`` gives the largest sample modulus."""
    return _lp_from_modulus(f.modulus(), p, f.spec.delta ** 2)


def inner_product(f: QSignal2D, g: QSignal2D) -> Quaternion:
    """Quaternion inner product ``sum f * conj(g) * delta^2``."""
    _check_same_grid(f, g)
    prod = qmul_array(f.samples, conj_array(g.samples))
    total = prod.reshape(-1, 4).sum(axis=0) * f.spec.delta ** 2
    return Quaternion.from_array(total)


def scalar_inner(f: QSignal2D, g: QSignal2D) -> float:
    """Real part of :func:`inner_product`, symmetric in ``f`` and ``g``."""
    _check_same_grid(f, g)
    return float(np.sum(f.samples * g.samples) * f.spec.delta ** 2)


# ---------------------------------------------------------------------------
# 4D time-frequency fields


class TFGrid4D:
    """Quaternion field on a product lattice ``(x1, x2, xi1, xi2)``.

    Values are either held in memory as an ``(nx, nx, nxi, nxi, 4)`` array
    or produced one ``x1`` row at a time by ``row_fn(i1)``, which returns an
    ``(nx, nxi, nxi, 4)`` array. Large lattices should stay lazy; reductions
    in this package iterate rows and never materialise the whole field.
    """

    def __init__(self, x1, x2, xi1, xi2, *, values=None, row_fn=None,
                 params=None, kind: str = "generic", source: GridSpec | None = None,
                 meta: dict | None = None):
        self.x1 = _frozen(x1)
        self.x2 = _frozen(x2)
        self.xi1 = _frozen(xi1)
        self.xi2 = _frozen(xi2)
        for name, a in (("x1", self.x1), ("x2", self.x2), ("xi1", self.xi1), ("xi2", self.xi2)):
            if a.ndim != 1 or a.size < 1:
                raise ValueError(f"{name} must be a non-empty 1D array")
        if (values is None) == (row_fn is None):
            raise ValueError("give exactly one of values or row_fn")
        if values is not None:
            values = np.asarray(values, dtype=float)
            if values.shape != self.shape + (4,):
                raise ValueError(f"values must have shape {self.shape + (4,)}, got {values.shape}")
            if not np.all(np.isfinite(values)):
                raise ValueError("field values must be finite")
            values = _frozen(values)
        self._values = values
        self._row_fn = row_fn
        self.params = params
        self.kind = kind
        self.source = source
        self.meta = dict(meta or {})

    @property
    def shape(self) -> tuple[int, int, int, int]:
        return (self.x1.size, self.x2.size, self.xi1.size, self.xi2.size)

    @property
    def is_lazy(self) -> bool:
        return self._values is None

    @staticmethod
    def _step(a: np.ndarray) -> float:
        return float((a[-1] - a[0]) / (a.size - 1)) if a.size > 1 else 1.0

    @property
    def cell_measure(self) -> float:
        return (self._step(self.x1) * self._step(self.x2)
                * self._step(self.xi1) * self._step(self.xi2))

    @property
    def nbytes(self) -> int:
        return int(np.prod(self.shape)) * 4 * 8

    def row(self, i1: int) -> np.ndarray:
        if self._values is not None:
            return self._values[i1]
        r = np.asarray(self._row_fn(i1), dtype=float)
        expected = self.shape[1:] + (4,)
        if r.shape != expected:
            raise RuntimeError(f"row_fn returned shape {r.shape}, expected {expected}")
        return r

    def slice(self, i1: int, i2: int) -> np.ndarray:
        """Values at one window position, shape ``(nxi, nxi, 4)``."""
        return self.row(i1)[i2]

    def iter_rows(self) -> Iterator[np.ndarray]:
        for i1 in range(self.shape[0]):
            yield self.row(i1)

    @property
    def values(self) -> np.ndarray:
        if self._values is None:
            raise RuntimeError("field is lazy; call materialize() first")
        return self._values

    def materialize(self) -> TFGrid4D:
        if self._values is not None:
            return self
        vals = np.stack(list(self.iter_rows()), axis=0)
        return TFGrid4D(self.x1, self.x2, self.xi1, self.xi2, values=vals,
                        params=self.params, kind=self.kind, source=self.source,
                        meta=self.meta)

    def modulus_rows(self) -> Iterator[np.ndarray]:
        for r in self.iter_rows():
            yield modulus_array(r)


def lp_norm_4d(F: TFGrid4D, p: float) -> float:
    """Quadrature ``L^p`` norm over the 4D lattice, streamed row by row."""
    _check_p(p)
    peak, acc = 0.0, 0.0
    for m in F.modulus_rows():
        mx = float(m.max())
        if np.isinf(p):
            peak = max(peak, mx)
            continue
        if mx > peak:
            # running rescale keeps large p from overflowing
            acc = acc * (peak / mx) ** p if peak > 0 else 0.0
            peak = mx
        if peak > 0:
            acc += float(np.sum((m / peak) ** p))
    if np.isinf(p) or peak == 0:
        return peak
    return float(peak * (acc * F.cell_measure) ** (1.0 / p))


def scalar_inner_4d(F: TFGrid4D, G: TFGrid4D) -> float:
    """``Sc sum F * conj(G)`` times the cell measure."""
    if F.shape != G.shape:
        raise ValueError("lattice mismatch")
    total = 0.0
    for i1 in range(F.shape[0]):
        total += float(np.sum(F.row(i1) * G.row(i1)))
    return total * F.cell_measure

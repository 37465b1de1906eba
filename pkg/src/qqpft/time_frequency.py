"""Windowed transforms on sampled grids: short-time, ambiguity and Wigner-Ville.

Window positions are integer sample lags, so every shift is exact. A lag
``k`` on a grid with spacing ``delta`` corresponds to ``x = k * delta``.

* Short-time: ``S(x, xi) = Q[f(.) conj(g(. - x))](xi)`` with ``x`` running
  over the signal grid.
* Ambiguity: ``A(x, xi) = Q[f(. + x/2) conj(g(. - x/2))](xi)``. The half
  lag must be a whole sample, so ``x`` runs over every other grid point.
* Wigner-Ville: ``W(x, xi) = Q[f(x + ./2) conj(g(x - ./2))](xi)``; the
  integration variable lives on a lag grid of twice the extent, whose
  samples are exactly twice the signal samples.

Samples shifted in from outside the grid are zero unless ``periodic=True``
is requested, which wraps the window cyclically.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .grid_signal import FreqGridSpec, GridSpec, QSignal2D, TFGrid4D
from .params_kernels import ParamPair, scaled_params, wvd_params
from .quaternion_core import conj_array, qmul_array
from .transforms import (
    QQPFTResult,
    _inverse_fast,
    canonical_freq_grid,
    is_canonical_axes,
    qqpft_at,
    qqpft_fast_array,
    qqpft_inverse,
)

__all__ = [
    "WindowedPair",
    "shift_samples",
    "translate",
    "dilate",
    "reflect",
    "stqqpft",
    "stqqpft_at",
    "stqqpft_inverse",
    "qqpaf",
    "qqpaf_at",
    "qqpwvd",
    "qqpwvd_at",
    "wvd_lag_grid",
    "scaled_pair",
    "wvd_pair",
]


@dataclass(frozen=True, eq=False)
class WindowedPair:
    f: QSignal2D
    g: QSignal2D
    params: ParamPair

    def __post_init__(self):
        if self.f.spec != self.g.spec:
            raise ValueError(f"signal and window grids differ: {self.f.spec} vs {self.g.spec}")
        if not np.any(self.g.samples):
            raise ValueError("window must be nonzero")


# ---------------------------------------------------------------------------
# sample shifts


def _shift_axis(a: np.ndarray, k: int, axis: int, periodic: bool) -> np.ndarray:
    if k == 0:
        return a
    if periodic:
        return np.roll(a, k, axis=axis)
    n = a.shape[axis]
    out = np.zeros_like(a)
    if abs(k) >= n:
        return out
    src = [slice(None)] * a.ndim
    dst = [slice(None)] * a.ndim
    if k > 0:
        src[axis], dst[axis] = slice(0, n - k), slice(k, n)
    else:
        src[axis], dst[axis] = slice(-k, n), slice(0, n + k)
    out[tuple(dst)] = a[tuple(src)]
    return out


def shift_samples(a: np.ndarray, k1: int, k2: int, periodic: bool = False) -> np.ndarray:
    """``out[m1, m2] = a[m1 - k1, m2 - k2]`` on the trailing ``(n, n, 4)`` block."""
    out = _shift_axis(np.asarray(a, dtype=float), int(k1), -3, periodic)
    return _shift_axis(out, int(k2), -2, periodic)


def translate(f: QSignal2D, k: tuple[int, int], periodic: bool = False) -> QSignal2D:
    """``f(t - k delta)`` for an integer lag pair, zero filled."""
    return QSignal2D(f.spec, shift_samples(f.samples, k[0], k[1], periodic))


def _dyadic_exponent(lam: float) -> int:
    if not (lam > 0 and math.isfinite(lam)):
        raise ValueError(f"dilation factor must be a positive power of two, got {lam}")
    m = round(math.log2(lam))
    if 2.0 ** m != lam:
        raise ValueError(f"dilation factor must be a power of two, got {lam}")
    return m


def dilate(f: QSignal2D, lam: float) -> QSignal2D:
    """``f(t / lam) / lam`` on the grid whose extent is ``lam`` times larger.

    The new coordinates are exactly ``lam`` times the old ones, so no
    interpolation happens.
    """
    _dyadic_exponent(lam)
    spec = GridSpec(f.spec.n, f.spec.extent * lam)
    return QSignal2D(spec, f.samples / lam)


def reflect(g: QSignal2D) -> QSignal2D:
    """``g(-t)``. Index ``j`` maps to ``n - j``; index 0 has no mirror and is zeroed."""
    n = g.spec.n
    out = np.zeros_like(g.samples)
    idx = (n - np.arange(1, n)) % n
    out[1:, 1:] = g.samples[np.ix_(idx, idx)]
    return QSignal2D(g.spec, out)


# ---------------------------------------------------------------------------
# short-time transform


def _lags(n: int) -> np.ndarray:
    return np.arange(n) - n // 2


def _window_products(f: np.ndarray, g: np.ndarray, k1: int, lags2, periodic: bool) -> np.ndarray:
    """``f * conj(g(. - (k1, k2)))`` for each ``k2`` in ``lags2``, stacked."""
    gc = conj_array(shift_samples(g, k1, 0, periodic))
    return np.stack([qmul_array(f, _shift_axis(gc, int(k2), -2, periodic)) for k2 in lags2])


def stqqpft(wp: WindowedPair, *, periodic: bool = False, direct: bool = False) -> TFGrid4D:
    """Short-time transform on the full lattice, evaluated lazily row by row."""
    spec, P = wp.f.spec, wp.params
    n = spec.n
    freq = canonical_freq_grid(spec, P)
    f, g = wp.f.samples, wp.g.samples
    lags = _lags(n)
    meta = {"periodic": periodic, "chirp_aliasing": False}

    def row(i1: int) -> np.ndarray:
        h = _window_products(f, g, int(lags[i1]), lags, periodic)
        if direct:
            return np.stack([qqpft_at(QSignal2D(spec, hx), P, freq.xi1, freq.xi2) for hx in h])
        vals, _, alias = qqpft_fast_array(h, spec, P)
        meta["chirp_aliasing"] = alias
        return vals

    t = spec.coords()
    return TFGrid4D(t, t, freq.xi1, freq.xi2, row_fn=row, params=P, kind="stqqpft",
                    source=spec, meta=meta)


def stqqpft_at(f: QSignal2D, g: QSignal2D, P: ParamPair, lag: tuple[int, int],
               xi1, xi2, periodic: bool = False) -> np.ndarray:
    """Direct evaluation at window lag ``lag`` and arbitrary frequencies."""
    h = qmul_array(f.samples, conj_array(shift_samples(g.samples, lag[0], lag[1], periodic)))
    return qqpft_at(QSignal2D(f.spec, h), P, xi1, xi2)


def stqqpft_inverse(S: TFGrid4D, g: QSignal2D, P: ParamPair | None = None,
                    *, periodic: bool | None = None) -> QSignal2D:
    """Reconstruct ``f`` from a short-time field.

    Each window slice is inverted back to ``f(t) conj(g(t - x))``, multiplied
    on the right by ``g(t - x)`` and summed over ``x``; dividing by the window
    energy recovers ``f``. With a periodic window this is an exact discrete
    frame; with zero fill it is exact wherever the window fits on the grid.
    """
    P = P if P is not None else S.params
    if P is None:
        raise ValueError("parameters are needed to invert")
    if periodic is None:
        periodic = bool(S.meta.get("periodic", False))
    spec = g.spec
    n = spec.n
    if S.shape != (n, n, n, n):
        raise ValueError(f"field shape {S.shape} does not match the window grid n={n}")
    g_energy = float(np.sum(g.samples ** 2))
    if g_energy == 0:
        raise ValueError("window must be nonzero")
    fast = is_canonical_axes(spec, P, S.xi1, S.xi2)

    lags = _lags(n)
    acc = np.zeros((n, n, 4))
    for i1, rowvals in enumerate(S.iter_rows()):
        if fast:
            h = _inverse_fast(rowvals, spec, P)
        else:
            fg = FreqGridSpec(S.xi1.size, S.xi1, S.xi2)
            h = np.stack([qqpft_inverse(QQPFTResult(P, fg, v), spec).samples for v in rowvals])
        g1 = shift_samples(g.samples, int(lags[i1]), 0, periodic)
        for i2, k2 in enumerate(lags):
            acc += qmul_array(h[i2], _shift_axis(g1, int(k2), -2, periodic))
    # sum over x of |g(t - x)|^2 delta^2, divided by ||g||^2 delta^2
    return QSignal2D(spec, acc / g_energy)


# ---------------------------------------------------------------------------
# ambiguity function


def _af_half_lags(n: int) -> np.ndarray:
    if n % 4:
        raise ValueError(f"the ambiguity lattice needs n divisible by 4, got {n}")
    return np.arange(n // 2) - n // 4


def _af_products(f: np.ndarray, g: np.ndarray, s1: int, half2) -> np.ndarray:
    fs = shift_samples(f, -s1, 0)
    gs = conj_array(shift_samples(g, s1, 0))
    return np.stack([qmul_array(_shift_axis(fs, -int(s2), -2, False),
                                _shift_axis(gs, int(s2), -2, False)) for s2 in half2])


def qqpaf(f: QSignal2D, g: QSignal2D, P: ParamPair) -> TFGrid4D:
    """Ambiguity function on ``x = 2 s delta`` for half lags ``s = -n/4 .. n/4 - 1``."""
    if f.spec != g.spec:
        raise ValueError("signal and window grids differ")
    spec = f.spec
    half = _af_half_lags(spec.n)
    freq = canonical_freq_grid(spec, P)
    meta = {"half_lags": half, "chirp_aliasing": False}

    def row(i1: int) -> np.ndarray:
        h = _af_products(f.samples, g.samples, int(half[i1]), half)
        vals, _, alias = qqpft_fast_array(h, spec, P)
        meta["chirp_aliasing"] = alias
        return vals

    x = 2.0 * half * spec.delta
    return TFGrid4D(x, x, freq.xi1, freq.xi2, row_fn=row, params=P, kind="qqpaf",
                    source=spec, meta=meta)


def qqpaf_at(f: QSignal2D, g: QSignal2D, P: ParamPair, half: tuple[int, int], xi1, xi2) -> np.ndarray:
    """Direct evaluation at ``x = 2 * half * delta``."""
    fs = shift_samples(f.samples, -half[0], -half[1])
    gs = conj_array(shift_samples(g.samples, half[0], half[1]))
    return qqpft_at(QSignal2D(f.spec, qmul_array(fs, gs)), P, xi1, xi2)


# ---------------------------------------------------------------------------
# Wigner-Ville distribution


def wvd_lag_grid(spec: GridSpec) -> GridSpec:
    """Lag grid whose samples are ``2 t_m``: same ``n``, twice the extent."""
    return GridSpec(spec.n, 2.0 * spec.extent)


def _wvd_products(f: np.ndarray, g: np.ndarray, c1: int, centres2) -> np.ndarray:
    """``h[l] = f[c + s] conj(g[c - s])`` with ``s = l - n/2``, per centre."""
    n = f.shape[0]
    s = np.arange(n) - n // 2
    gc = conj_array(g)

    def take(a, idx):
        ok = (idx >= 0) & (idx < n)
        out = np.zeros((n,) + a.shape[1:])
        out[ok] = a[idx[ok]]
        return out

    f1 = take(f, c1 + s)          # (l1, m2, 4)
    g1 = take(gc, c1 - s)
    rows = []
    for c2 in centres2:
        fa = np.swapaxes(take(np.swapaxes(f1, 0, 1), c2 + s), 0, 1)
        ga = np.swapaxes(take(np.swapaxes(g1, 0, 1), c2 - s), 0, 1)
        rows.append(qmul_array(fa, ga))
    return np.stack(rows)


def qqpwvd(f: QSignal2D, g: QSignal2D, P: ParamPair) -> TFGrid4D:
    """Wigner-Ville distribution at every grid point ``x``."""
    if f.spec != g.spec:
        raise ValueError("signal and window grids differ")
    spec = f.spec
    n = spec.n
    lag = wvd_lag_grid(spec)
    freq = canonical_freq_grid(lag, P)
    centres = np.arange(n)
    meta = {"lag_grid": lag, "chirp_aliasing": False}

    def row(i1: int) -> np.ndarray:
        h = _wvd_products(f.samples, g.samples, i1, centres)
        vals, _, alias = qqpft_fast_array(h, lag, P)
        meta["chirp_aliasing"] = alias
        return vals

    t = spec.coords()
    return TFGrid4D(t, t, freq.xi1, freq.xi2, row_fn=row, params=P, kind="qqpwvd",
                    source=spec, meta=meta)


def qqpwvd_at(f: QSignal2D, g: QSignal2D, P: ParamPair, centre: tuple[int, int], xi1, xi2) -> np.ndarray:
    """Direct evaluation at the grid point with index ``centre``."""
    h = _wvd_products(f.samples, g.samples, int(centre[0]), [int(centre[1])])[0]
    return qqpft_at(QSignal2D(wvd_lag_grid(f.spec), h), P, xi1, xi2)


def scaled_pair(P: ParamPair, lam: float) -> ParamPair:
    return ParamPair(scaled_params(P.l1, lam), scaled_params(P.l2, lam))


def wvd_pair(P: ParamPair) -> ParamPair:
    return ParamPair(wvd_params(P.l1), wvd_params(P.l2))

"""Two-sided quaternion quadratic-phase Fourier transform.

``Q f(xi) = sum_t K_i(L1, t1, xi1) f(t) K_j(L2, t2, xi2) delta^2``: the
i-kernel multiplies from the left and the j-kernel from the right.

Two evaluation routes are provided. :func:`qqpft_direct` forms the sum
literally and accepts any frequency samples; it is the reference. The fast
route strips the quadratic chirps, leaving a plain two-sided quaternion DFT,
which is evaluated with complex FFTs after splitting ``f = fa + fb j``.
On the canonical frequency grid both routes compute the same finite sum.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .grid_signal import FreqGridSpec, GridSpec, QSignal2D
from .params_kernels import FT_PAIR, INV_SQRT_2PI, ParamPair, ParamSet, phase
from .quaternion_core import from_pair, left_matrix, right_matrix, to_pair

__all__ = [
    "ChirpAliasingWarning",
    "QQPFTResult",
    "canonical_freq_grid",
    "canonical_axis",
    "kernel_matrix",
    "qqpft_direct",
    "qqpft_at",
    "qqpft_fast",
    "qqpft_fast_array",
    "qft_fast",
    "qqpft_inverse",
    "two_sided_dft",
    "is_canonical_axes",
]


class ChirpAliasingWarning(RuntimeWarning):
    """The pre-chirp changes by more than pi/4 between neighbouring samples."""


CHIRP_LIMIT = math.pi / 4


@dataclass(frozen=True, eq=False)
class QQPFTResult:
    params: ParamPair
    freq: FreqGridSpec
    values: np.ndarray
    source: GridSpec | None = None
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        v = np.ascontiguousarray(self.values, dtype=float)
        n = self.freq.n
        if v.shape != (n, n, 4):
            raise ValueError(f"values must have shape {(n, n, 4)}, got {v.shape}")
        if not np.all(np.isfinite(v)):
            raise ValueError("transform values must be finite")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @property
    def cell_measure(self) -> float:
        return self.freq.d1 * self.freq.d2

    def modulus(self) -> np.ndarray:
        return np.sqrt(np.sum(self.values ** 2, axis=-1))


# ---------------------------------------------------------------------------
# grids


def _is_pow2(n: int) -> bool:
    return n > 0 and n & (n - 1) == 0


def _require_pow2(n: int) -> None:
    if not _is_pow2(n):
        raise ValueError(f"the fast path needs n to be a power of two, got {n}")


def _omega(spec: GridSpec) -> np.ndarray:
    n = spec.n
    return 2.0 * np.pi * (np.arange(n) - n // 2) / (n * spec.delta)


def canonical_axis(spec: GridSpec, L: ParamSet) -> np.ndarray:
    """Frequencies ``omega / B`` for the centred FFT grid ``omega``, sorted increasing."""
    xi = _omega(spec) / L.b
    return xi[::-1].copy() if L.b < 0 else xi


def canonical_freq_grid(spec: GridSpec, P: ParamPair) -> FreqGridSpec:
    return FreqGridSpec(spec.n, canonical_axis(spec, P.l1), canonical_axis(spec, P.l2))


# ---------------------------------------------------------------------------
# direct quadrature


def kernel_matrix(axis: str, L: ParamSet, t: np.ndarray, xi: np.ndarray) -> np.ndarray:
    """Kernel values on the outer product ``xi x t``, shape ``(len(xi), len(t), 4)``."""
    if axis not in ("i", "j"):
        raise ValueError(f"axis must be 'i' or 'j', got {axis!r}")
    th = -phase(L, t[None, :], np.asarray(xi, dtype=float)[:, None])
    out = np.zeros(th.shape + (4,))
    out[..., 0] = np.cos(th) * INV_SQRT_2PI
    out[..., 1 if axis == "i" else 2] = np.sin(th) * INV_SQRT_2PI
    return out


def _sandwich(left: np.ndarray, f: np.ndarray, right: np.ndarray) -> np.ndarray:
    """``out[a, b] = sum_{m, l} left[a, m] * f[m, l] * right[b, l]``."""
    tmp = np.einsum("amij,mlj->ali", left_matrix(left), f, optimize=True)
    return np.einsum("blij,alj->abi", right_matrix(right), tmp, optimize=True)


def qqpft_at(f: QSignal2D, P: ParamPair, xi1, xi2) -> np.ndarray:
    """Direct sum on the outer product of arbitrary frequency samples.

    Returns an ``(len(xi1), len(xi2), 4)`` array. ``O(n^2)`` per point.
    """
    t = f.spec.coords()
    xi1 = np.atleast_1d(np.asarray(xi1, dtype=float))
    xi2 = np.atleast_1d(np.asarray(xi2, dtype=float))
    Ki = kernel_matrix("i", P.l1, t, xi1)
    Kj = kernel_matrix("j", P.l2, t, xi2)
    return _sandwich(Ki, f.samples, Kj) * f.spec.delta ** 2


def qqpft_direct(f: QSignal2D, P: ParamPair, freq: FreqGridSpec | None = None) -> QQPFTResult:
    """Reference quadrature; defaults to the canonical frequency grid."""
    if freq is None:
        freq = canonical_freq_grid(f.spec, P)
    vals = qqpft_at(f, P, freq.xi1, freq.xi2)
    return QQPFTResult(P, freq, vals, source=f.spec, meta={"method": "direct"})


# ---------------------------------------------------------------------------
# fast path


def _cdft(h: np.ndarray, a: np.ndarray, b: np.ndarray, sign: int, axis: int) -> np.ndarray:
    """``out_k = sum_m exp(sign * 1j * a_m * b_k) h_m`` along ``axis``.

    ``a`` and ``b`` are uniform grids of equal length with
    ``da * db = 2 pi / n``; the offsets ``a[0]`` and ``b[0]`` are handled by
    exact phase factors.
    """
    n = a.size
    shape = [1] * h.ndim
    shape[axis] = n
    pre = np.exp(sign * 1j * b[0] * (a - a[0])).reshape(shape)
    post = np.exp(sign * 1j * a[0] * b).reshape(shape)
    if sign < 0:
        core = np.fft.fft(h * pre, axis=axis)
    else:
        core = np.fft.ifft(h * pre, axis=axis) * n
    return core * post


def two_sided_dft(fa, fb, a1, b1, s1, a2, b2, s2):
    """``sum exp(s1 i a1 b1) f exp(s2 j a2 b2)`` in pair form.

    Axis ``-2`` runs over ``a1`` (left factor) and axis ``-1`` over ``a2``
    (right factor). Writing ``f = X + Y j`` after the left sum,
    ``X + iY`` picks up ``exp(+i s2 ...)`` from the right factor and
    ``X - iY`` picks up ``exp(-i s2 ...)``.
    """
    u = _cdft(fa + 1j * fb, a1, b1, s1, axis=-2)
    v = _cdft(fa - 1j * fb, a1, b1, s1, axis=-2)
    u = _cdft(u, a2, b2, s2, axis=-1)
    v = _cdft(v, a2, b2, -s2, axis=-1)
    return (u + v) / 2, 1j * (v - u) / 2


def _left_i(fa, fb, gamma):
    """Left multiplication by ``exp(i gamma)``; ``gamma`` broadcasts on axis -2."""
    e = np.exp(1j * gamma)[:, None]
    return fa * e, fb * e


def _right_j(fa, fb, gamma):
    """Right multiplication by ``exp(j gamma)``; ``gamma`` broadcasts on axis -1."""
    c, s = np.cos(gamma), np.sin(gamma)
    return fa * c - fb * s, fa * s + fb * c


def _chirp_excess(spec: GridSpec, P: ParamPair) -> float:
    t = spec.coords()
    return max(float(np.max(np.abs(2.0 * L.a * t * spec.delta))) for L in P)


def qqpft_fast_array(samples: np.ndarray, spec: GridSpec, P: ParamPair):
    """Fast transform of ``(..., n, n, 4)`` samples on the canonical grid.

    Returns ``(values, freq, aliasing)``.
    """
    _require_pow2(spec.n)
    samples = np.asarray(samples, dtype=float)
    t = spec.coords()
    w = _omega(spec)
    L1, L2 = P

    aliasing = _chirp_excess(spec, P) > CHIRP_LIMIT
    if aliasing:
        warnings.warn(
            f"quadratic chirp exceeds pi/4 per sample on this grid (A={L1.a}, {L2.a}); "
            "the sampled transform may alias",
            ChirpAliasingWarning, stacklevel=3)

    fa, fb = to_pair(samples)
    fa, fb = _left_i(fa, fb, -(L1.a * t * t + L1.d * t))
    fa, fb = _right_j(fa, fb, -(L2.a * t * t + L2.d * t))
    fa, fb = two_sided_dft(fa, fb, t, w, -1, t, w, -1)

    xi1, xi2 = w / L1.b, w / L2.b
    if L1.b < 0:
        fa, fb, xi1 = fa[..., ::-1, :], fb[..., ::-1, :], xi1[::-1]
    if L2.b < 0:
        fa, fb, xi2 = fa[..., :, ::-1], fb[..., :, ::-1], xi2[::-1]
    fa, fb = _left_i(fa, fb, -(L1.c * xi1 * xi1 + L1.e * xi1))
    fa, fb = _right_j(fa, fb, -(L2.c * xi2 * xi2 + L2.e * xi2))

    vals = from_pair(fa, fb) * (spec.delta ** 2 / (2.0 * np.pi))
    return vals, FreqGridSpec(spec.n, xi1, xi2), aliasing


def qqpft_fast(f: QSignal2D, P: ParamPair) -> QQPFTResult:
    vals, freq, aliasing = qqpft_fast_array(f.samples, f.spec, P)
    return QQPFTResult(P, freq, vals, source=f.spec,
                       meta={"method": "fast", "chirp_aliasing": aliasing})


def qft_fast(f: QSignal2D) -> QQPFTResult:
    """Plain two-sided quaternion Fourier transform (``A=C=D=E=0``, ``B=1``)."""
    return qqpft_fast(f, FT_PAIR)


# ---------------------------------------------------------------------------
# inversion


def is_canonical_axes(spec: GridSpec, P: ParamPair, xi1, xi2) -> bool:
    """Whether ``(xi1, xi2)`` is the canonical frequency grid of ``spec``."""
    if len(xi1) != spec.n or len(xi2) != spec.n or not _is_pow2(spec.n):
        return False
    ref = canonical_freq_grid(spec, P)
    scale = max(float(np.max(np.abs(ref.xi1))), float(np.max(np.abs(ref.xi2))))
    return (np.allclose(xi1, ref.xi1, rtol=0, atol=1e-12 * scale)
            and np.allclose(xi2, ref.xi2, rtol=0, atol=1e-12 * scale))


def _is_canonical(F: QQPFTResult, spec: GridSpec) -> bool:
    return is_canonical_axes(spec, F.params, F.freq.xi1, F.freq.xi2)


def _inverse_fast(values: np.ndarray, spec: GridSpec, P: ParamPair) -> np.ndarray:
    L1, L2 = P
    t = spec.coords()
    w = _omega(spec)
    xi1, xi2 = canonical_axis(spec, L1), canonical_axis(spec, L2)

    fa, fb = to_pair(values)
    fa, fb = _left_i(fa, fb, L1.c * xi1 * xi1 + L1.e * xi1)
    fa, fb = _right_j(fa, fb, L2.c * xi2 * xi2 + L2.e * xi2)
    # back to increasing omega order
    if L1.b < 0:
        fa, fb = fa[..., ::-1, :], fb[..., ::-1, :]
    if L2.b < 0:
        fa, fb = fa[..., :, ::-1], fb[..., :, ::-1]
    fa, fb = two_sided_dft(fa, fb, w, t, +1, w, t, +1)
    fa, fb = _left_i(fa, fb, L1.a * t * t + L1.d * t)
    fa, fb = _right_j(fa, fb, L2.a * t * t + L2.d * t)

    d1 = abs(xi1[1] - xi1[0])
    d2 = abs(xi2[1] - xi2[0])
    return from_pair(fa, fb) * (P.b_product * d1 * d2 / (2.0 * np.pi))


def _inverse_direct(F: QQPFTResult, spec: GridSpec) -> np.ndarray:
    t = spec.coords()
    P = F.params
    Ki = _conj_swap(kernel_matrix("i", P.l1, t, F.freq.xi1))
    Kj = _conj_swap(kernel_matrix("j", P.l2, t, F.freq.xi2))
    out = _sandwich(Ki, F.values, Kj)
    return out * (P.b_product * F.freq.d1 * F.freq.d2)


def _conj_swap(K: np.ndarray) -> np.ndarray:
    """``(xi, t, 4)`` kernel table to its conjugate indexed ``(t, xi, 4)``."""
    out = np.swapaxes(K, 0, 1).copy()
    out[..., 1:] *= -1.0
    return out


def qqpft_inverse(F: QQPFTResult, target: GridSpec | None = None, *, method: str = "auto") -> QSignal2D:
    """Invert on ``target`` (defaults to the producing grid).

    ``method="auto"`` uses inverse FFTs when ``F`` sits on the canonical grid
    of ``target`` and falls back to direct quadrature otherwise.
    """
    if target is None:
        target = F.source
    if target is None:
        raise ValueError("no target grid given and the result does not record its source")
    if method not in ("auto", "fast", "direct"):
        raise ValueError(f"unknown inversion method {method!r}")
    canonical = _is_canonical(F, target)
    if method == "fast" and not canonical:
        raise ValueError("fast inversion needs the canonical frequency grid of the target")
    if method == "direct" or not canonical:
        return QSignal2D(target, _inverse_direct(F, target))
    return QSignal2D(target, _inverse_fast(F.values, target, F.params))

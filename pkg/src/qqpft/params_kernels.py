"""Quadratic-phase parameter sets and kernel evaluations.

A :class:`ParamSet` ``(A, B, C, D, E)`` with ``B != 0`` defines the phase
polynomial ``A t^2 + B t xi + C xi^2 + D t + E xi``. The i-kernel is
``exp(-i * phase) / sqrt(2 pi)`` and the j-kernel uses ``j`` in place of
``i``. Everything here is scalar-valued; the ``*_phase`` helpers return the
real angle and the public functions wrap it into a :class:`Quaternion`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .quaternion_core import Quaternion, conj, exp_axis

__all__ = [
    "ParamSet",
    "ParamPair",
    "FT_PARAMS",
    "FT_PAIR",
    "phase",
    "kernel",
    "conj_kernel",
    "shift_phase",
    "shift_phase_angle",
    "shift_offset",
    "printed_shift_phase_angle",
    "wvd_phase",
    "wvd_phase_angle",
    "printed_wvd_phase_angle",
    "scaled_params",
    "wvd_params",
    "parse_params",
    "parse_pair",
    "format_pair",
]

INV_SQRT_2PI = 1.0 / math.sqrt(2.0 * math.pi)
B_MIN = 1e-12


@dataclass(frozen=True)
class ParamSet:
    a: float
    b: float
    c: float = 0.0
    d: float = 0.0
    e: float = 0.0

    def __post_init__(self):
        vals = [float(v) for v in (self.a, self.b, self.c, self.d, self.e)]
        if not all(math.isfinite(v) for v in vals):
            raise ValueError("parameters must be finite")
        if abs(vals[1]) < B_MIN:
            raise ValueError(f"invalid parameter B={self.b}: the constraint B ≠ 0 is required")
        for name, v in zip("abcde", vals):
            object.__setattr__(self, name, v)

    def astuple(self) -> tuple[float, float, float, float, float]:
        return (self.a, self.b, self.c, self.d, self.e)

    def __str__(self) -> str:
        return ",".join(repr(v) for v in self.astuple())


@dataclass(frozen=True)
class ParamPair:
    """Axis-1 (i-kernel, left) and axis-2 (j-kernel, right) parameters."""

    l1: ParamSet
    l2: ParamSet

    @property
    def b_product(self) -> float:
        """``|B1 B2|``."""
        return abs(self.l1.b * self.l2.b)

    def __iter__(self):
        return iter((self.l1, self.l2))

    def __str__(self) -> str:
        return format_pair(self)


FT_PARAMS = ParamSet(0.0, 1.0, 0.0, 0.0, 0.0)
FT_PAIR = ParamPair(FT_PARAMS, FT_PARAMS)


def phase(L: ParamSet, t, xi):
    """Phase polynomial; broadcasts over array arguments."""
    return L.a * t * t + L.b * t * xi + L.c * xi * xi + L.d * t + L.e * xi


def kernel(axis: str, L: ParamSet, t: float, xi: float) -> Quaternion:
    q = exp_axis(axis, -phase(L, t, xi))
    return Quaternion(q.r0 * INV_SQRT_2PI, q.r1 * INV_SQRT_2PI,
                      q.r2 * INV_SQRT_2PI, q.r3 * INV_SQRT_2PI)


def conj_kernel(axis: str, L: ParamSet, t: float, xi: float) -> Quaternion:
    return conj(kernel(axis, L, t, xi))


def shift_offset(L: ParamSet, r: float, k: float) -> float:
    """Frequency offset ``2 r k A / B`` that absorbs a time shift ``r k``."""
    return 2.0 * r * k * L.a / L.b


def shift_phase_angle(L: ParamSet, r: float, k: float, xi):
    """Angle ``theta`` with ``kernel(t + r k, xi) = kernel(t, xi + 2rkA/B) * exp(-u theta)``.

    Obtained by expanding both phase polynomials and completing the square
    in ``xi``; every ``t``-dependent term cancels.
    """
    a, b, c, d, e = L.astuple()
    s = r * k
    return (a * s * s + b * s * xi + d * s
            - 4.0 * a * c * s * xi / b
            - 4.0 * a * a * c * s * s / (b * b)
            - 2.0 * a * e * s / b)


def shift_phase(axis: str, L: ParamSet, r: float, k: float, xi: float) -> Quaternion:
    return exp_axis(axis, -shift_phase_angle(L, r, k, xi))


def printed_shift_phase_angle(L: ParamSet, r: float, k: float, xi):
    """The closed form as typeset in the source derivation (last term lacks ``E``).

    Kept only as a cross-check against :func:`shift_phase_angle`; the two
    agree exactly when ``A * (E - 1) == 0``.
    """
    a, b, c, d, e = L.astuple()
    return (a * r * r * k * k + d * r * k + b * r * k * xi
            - 4.0 * r * r * a * a * c * k * k / (b * b)
            - 4.0 * r * a * c * k * xi / b
            - 2.0 * r * a * k / b)


def wvd_params(L: ParamSet) -> ParamSet:
    """``(4A, 2B, C, 2D, E)``."""
    return ParamSet(4.0 * L.a, 2.0 * L.b, L.c, 2.0 * L.d, L.e)


def wvd_phase_angle(L: ParamSet, x: float, xi):
    """Angle ``theta`` with ``kernel_L(2(t - x), xi) = kernel_L'(t, xi - 4Ax/B) * exp(-u theta)``.

    Here ``L' = wvd_params(L)``. Derived by direct expansion; the result is
    independent of ``t``.
    """
    a, b, c, d, e = L.astuple()
    return (4.0 * a * x * x - 2.0 * b * x * xi - 2.0 * d * x
            + 8.0 * a * c * x * xi / b
            - 16.0 * a * a * c * x * x / (b * b)
            + 4.0 * a * e * x / b)


def wvd_phase(axis: str, L: ParamSet, x: float, xi: float) -> Quaternion:
    return exp_axis(axis, -wvd_phase_angle(L, x, xi))


def printed_wvd_phase_angle(L: ParamSet, x: float, xi):
    """Closed form for the WVD phase as typeset in the source; cross-check only."""
    a, b, c, d, e = L.astuple()
    return (4 * a * x ** 2 - 2 * b * x * xi - 2 * d * x
            - 16 * a ** 2 * c * x ** 2 / b ** 2
            + 8 * a * c * x * xi / b + 4 * a * e * x / b)


def scaled_params(L: ParamSet, lam: float) -> ParamSet:
    """``(lam^2 A, lam B, C, lam D, E)``, so that ``kernel_L(lam t) = kernel_L'(t)``."""
    if lam == 0:
        raise ValueError("scaling factor must be nonzero")
    return ParamSet(lam * lam * L.a, lam * L.b, L.c, lam * L.d, L.e)


def parse_params(text: str) -> ParamSet:
    """Parse ``"A,B,C,D,E"``."""
    parts = [p.strip() for p in text.split(",")]
    if len(parts) != 5:
        raise ValueError(f"expected five comma-separated numbers 'A,B,C,D,E', got {text!r}")
    try:
        vals = [float(p) for p in parts]
    except ValueError as exc:
        raise ValueError(f"malformed parameter list {text!r}: {exc}") from None
    return ParamSet(*vals)


def parse_pair(text: str) -> ParamPair:
    """Parse ``"A,B,C,D,E;A,B,C,D,E"``; a single quintuple is used for both axes."""
    halves = text.split(";")
    if len(halves) == 1:
        L = parse_params(halves[0])
        return ParamPair(L, L)
    if len(halves) != 2:
        raise ValueError(f"expected 'A,B,C,D,E;A,B,C,D,E', got {text!r}")
    return ParamPair(parse_params(halves[0]), parse_params(halves[1]))


def format_pair(P: ParamPair) -> str:
    return f"{P.l1};{P.l2}"


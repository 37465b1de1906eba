"""Hamilton quaternions: a scalar value type and vectorised array helpers.

Scalar values use :class:`Quaternion`. Signals and kernels are stored as
float64 arrays whose trailing axis holds the components ``(r0, r1, r2, r3)``
of ``r0 + i r1 + j r2 + k r3``; the ``*_array`` functions operate on those.

The multiplication table is the standard one: ``i^2 = j^2 = k^2 = -1`` and
``ij = k = -ji``, ``jk = i = -kj``, ``ki = j = -ik``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "Quaternion",
    "ONE",
    "I",
    "J",
    "K",
    "qmul",
    "conj",
    "modulus",
    "sc",
    "exp_axis",
    "qmul_array",
    "conj_array",
    "modulus_array",
    "left_matrix",
    "right_matrix",
    "to_pair",
    "from_pair",
]


@dataclass(frozen=True, slots=True)
class Quaternion:
    """Immutable quaternion ``r0 + i r1 + j r2 + k r3``."""

    r0: float = 0.0
    r1: float = 0.0
    r2: float = 0.0
    r3: float = 0.0

    @classmethod
    def from_array(cls, a) -> Quaternion:
        a = np.asarray(a, dtype=float)
        return cls(float(a[0]), float(a[1]), float(a[2]), float(a[3]))

    def to_array(self) -> np.ndarray:
        return np.array([self.r0, self.r1, self.r2, self.r3], dtype=float)

    def __iter__(self):
        return iter((self.r0, self.r1, self.r2, self.r3))

    def __add__(self, other: Quaternion) -> Quaternion:
        other = _coerce(other)
        return Quaternion(self.r0 + other.r0, self.r1 + other.r1,
                          self.r2 + other.r2, self.r3 + other.r3)

    __radd__ = __add__

    def __sub__(self, other: Quaternion) -> Quaternion:
        other = _coerce(other)
        return Quaternion(self.r0 - other.r0, self.r1 - other.r1,
                          self.r2 - other.r2, self.r3 - other.r3)

    def __rsub__(self, other) -> Quaternion:
        return _coerce(other) - self

    def __neg__(self) -> Quaternion:
        return Quaternion(-self.r0, -self.r1, -self.r2, -self.r3)

    def __mul__(self, other) -> Quaternion:
        return qmul(self, _coerce(other))

    def __rmul__(self, other) -> Quaternion:
        return qmul(_coerce(other), self)

    def __truediv__(self, s: float) -> Quaternion:
        return Quaternion(self.r0 / s, self.r1 / s, self.r2 / s, self.r3 / s)

    def __abs__(self) -> float:
        return modulus(self)

    def isclose(self, other: Quaternion, atol: float = 1e-12) -> bool:
        other = _coerce(other)
        return all(abs(a - b) <= atol for a, b in zip(self, other))


def _coerce(x) -> Quaternion:
    if isinstance(x, Quaternion):
        return x
    if isinstance(x, (int, float, np.floating, np.integer)):
        return Quaternion(float(x))
    raise TypeError(f"cannot interpret {type(x).__name__} as a quaternion")


ONE = Quaternion(1.0)
I = Quaternion(0.0, 1.0)
J = Quaternion(0.0, 0.0, 1.0)
K = Quaternion(0.0, 0.0, 0.0, 1.0)


def qmul(a: Quaternion, b: Quaternion) -> Quaternion:
    """Hamilton product ``a * b`` (non-commutative)."""
    a0, a1, a2, a3 = a
    b0, b1, b2, b3 = b
    return Quaternion(
        a0 * b0 - a1 * b1 - a2 * b2 - a3 * b3,
        a0 * b1 + a1 * b0 + a2 * b3 - a3 * b2,
        a0 * b2 - a1 * b3 + a2 * b0 + a3 * b1,
        a0 * b3 + a1 * b2 - a2 * b1 + a3 * b0,
    )


def conj(q: Quaternion) -> Quaternion:
    return Quaternion(q.r0, -q.r1, -q.r2, -q.r3)


def modulus(q: Quaternion) -> float:
    return math.sqrt(q.r0 * q.r0 + q.r1 * q.r1 + q.r2 * q.r2 + q.r3 * q.r3)


def sc(q: Quaternion) -> float:
    """Real scalar part."""
    return q.r0


def exp_axis(axis: str, theta: float) -> Quaternion:
    """``cos(theta) + u sin(theta)`` for the unit ``u`` named by ``axis``."""
    c, s = math.cos(theta), math.sin(theta)
    if axis == "i":
        return Quaternion(c, s, 0.0, 0.0)
    if axis == "j":
        return Quaternion(c, 0.0, s, 0.0)
    raise ValueError(f"axis must be 'i' or 'j', got {axis!r}")


# ---------------------------------------------------------------------------
# array forms, trailing axis of length 4


def qmul_array(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Elementwise Hamilton product of broadcastable ``(..., 4)`` arrays."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    a0, a1, a2, a3 = np.moveaxis(a, -1, 0)
    b0, b1, b2, b3 = np.moveaxis(b, -1, 0)
    return np.stack(
        [
            a0 * b0 - a1 * b1 - a2 * b2 - a3 * b3,
            a0 * b1 + a1 * b0 + a2 * b3 - a3 * b2,
            a0 * b2 - a1 * b3 + a2 * b0 + a3 * b1,
            a0 * b3 + a1 * b2 - a2 * b1 + a3 * b0,
        ],
        axis=-1,
    )


def conj_array(a: np.ndarray) -> np.ndarray:
    out = np.array(a, dtype=float, copy=True)
    out[..., 1:] *= -1.0
    return out


def modulus_array(a: np.ndarray) -> np.ndarray:
    a = np.asarray(a, dtype=float)
    return np.sqrt(np.sum(a * a, axis=-1))


def left_matrix(q: np.ndarray) -> np.ndarray:
    """Real 4x4 matrices ``L`` with ``L @ v == q * v`` for each quaternion in ``q``."""
    q = np.asarray(q, dtype=float)
    q0, q1, q2, q3 = np.moveaxis(q, -1, 0)
    rows = [
        [q0, -q1, -q2, -q3],
        [q1, q0, -q3, q2],
        [q2, q3, q0, -q1],
        [q3, -q2, q1, q0],
    ]
    return np.stack([np.stack(r, axis=-1) for r in rows], axis=-2)


def right_matrix(q: np.ndarray) -> np.ndarray:
    """Real 4x4 matrices ``R`` with ``R @ v == v * q`` for each quaternion in ``q``."""
    q = np.asarray(q, dtype=float)
    q0, q1, q2, q3 = np.moveaxis(q, -1, 0)
    rows = [
        [q0, -q1, -q2, -q3],
        [q1, q0, q3, -q2],
        [q2, -q3, q0, q1],
        [q3, q2, -q1, q0],
    ]
    return np.stack([np.stack(r, axis=-1) for r in rows], axis=-2)


def to_pair(a: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Split ``q = fa + fb j`` with ``fa = r0 + i r1`` and ``fb = r2 + i r3``.

    Both parts are returned as complex arrays where the complex unit plays
    the role of ``i``.
    """
    a = np.asarray(a, dtype=float)
    return a[..., 0] + 1j * a[..., 1], a[..., 2] + 1j * a[..., 3]


def from_pair(fa: np.ndarray, fb: np.ndarray) -> np.ndarray:
    """Inverse of :func:`to_pair`."""
    return np.stack([fa.real, fa.imag, fb.real, fb.imag], axis=-1)

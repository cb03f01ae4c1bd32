"""Quaternion arithmetic.

Components are stored as ``q = x0 + x1 i + x2 j + x3 k`` with the
right-handed Hamilton table ``ij = k, jk = i, ki = j``.  The symplectic
view writes ``q = z0 + z1 j`` with ``z0 = x0 + x1 i`` and ``z1 = x2 + x3 i``.

Besides the scalar :class:`Quaternion` type, the module exposes vectorised
helpers operating on ``(..., 4)`` float arrays; sampled quaternion fields
throughout the package use that layout.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from numbers import Real

import numpy as np


@dataclass(frozen=True)
class Quaternion:
    x0: float = 0.0
    x1: float = 0.0
    x2: float = 0.0
    x3: float = 0.0

    @classmethod
    def from_array(cls, a) -> "Quaternion":
        a = np.asarray(a, dtype=float)
        return cls(float(a[0]), float(a[1]), float(a[2]), float(a[3]))

    @classmethod
    def from_complex(cls, z: complex) -> "Quaternion":
        z = complex(z)
        return cls(z.real, z.imag, 0.0, 0.0)

    def to_array(self) -> np.ndarray:
        return np.array([self.x0, self.x1, self.x2, self.x3])

    @property
    def z0(self) -> complex:
        return complex(self.x0, self.x1)

    @property
    def z1(self) -> complex:
        return complex(self.x2, self.x3)

    @property
    def real(self) -> float:
        return self.x0

    def __add__(self, other):
        if isinstance(other, Real):
            other = Quaternion(float(other))
        if not isinstance(other, Quaternion):
            return NotImplemented
        return Quaternion(self.x0 + other.x0, self.x1 + other.x1,
                          self.x2 + other.x2, self.x3 + other.x3)

    __radd__ = __add__

    def __neg__(self):
        return Quaternion(-self.x0, -self.x1, -self.x2, -self.x3)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, Quaternion):
            return qmul(self, other)
        if isinstance(other, Real):
            s = float(other)
            return Quaternion(self.x0 * s, self.x1 * s, self.x2 * s, self.x3 * s)
        if isinstance(other, complex):
            return qmul(self, Quaternion.from_complex(other))
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, Real):
            return self * other
        if isinstance(other, complex):
            return qmul(Quaternion.from_complex(other), self)
        return NotImplemented

    def __truediv__(self, other):
        if isinstance(other, Real):
            return self * (1.0 / float(other))
        return NotImplemented

    def __abs__(self):
        return qnorm(self)

    def __iter__(self):
        return iter((self.x0, self.x1, self.x2, self.x3))


ONE = Quaternion(1.0)
I = Quaternion(0.0, 1.0)
J = Quaternion(0.0, 0.0, 1.0)
K = Quaternion(0.0, 0.0, 0.0, 1.0)
ZERO = Quaternion()


def qmul(p: Quaternion, q: Quaternion) -> Quaternion:
    """Hamilton product ``p q``."""
    a0, a1, a2, a3 = p.x0, p.x1, p.x2, p.x3
    b0, b1, b2, b3 = q.x0, q.x1, q.x2, q.x3
    return Quaternion(
        a0 * b0 - a1 * b1 - a2 * b2 - a3 * b3,
        a0 * b1 + a1 * b0 + a2 * b3 - a3 * b2,
        a0 * b2 - a1 * b3 + a2 * b0 + a3 * b1,
        a0 * b3 + a1 * b2 - a2 * b1 + a3 * b0,
    )


def qconj(q: Quaternion) -> Quaternion:
    return Quaternion(q.x0, -q.x1, -q.x2, -q.x3)


def qnorm(q: Quaternion) -> float:
    return math.sqrt(q.x0 * q.x0 + q.x1 * q.x1 + q.x2 * q.x2 + q.x3 * q.x3)


def from_symplectic(z0: complex, z1: complex) -> Quaternion:
    """Build ``z0 + z1 j`` from its two complex halves."""
    z0, z1 = complex(z0), complex(z1)
    return Quaternion(z0.real, z0.imag, z1.real, z1.imag)


def to_symplectic(q: Quaternion) -> tuple[complex, complex]:
    return q.z0, q.z1


def is_parallel(p: Quaternion, q: Quaternion, tol: float = 1e-12) -> bool:
    """True when ``p conj(q)`` is real up to ``tol * |p| |q|``.

    A zero argument is parallel to everything.
    """
    if tol < 0:
        raise ValueError("tol must be non-negative")
    scale = qnorm(p) * qnorm(q)
    if scale == 0.0:
        return True
    r = qmul(p, qconj(q))
    bound = tol * scale
    return abs(r.x1) <= bound and abs(r.x2) <= bound and abs(r.x3) <= bound


# -- array helpers -----------------------------------------------------------

def as_field(values) -> np.ndarray:
    """Coerce quaternions, complex or real samples to a ``(..., 4)`` array."""
    if isinstance(values, Quaternion):
        return values.to_array()
    a = np.asarray(values)
    if np.iscomplexobj(a):
        out = np.zeros(a.shape + (4,))
        out[..., 0] = a.real
        out[..., 1] = a.imag
        return out
    a = a.astype(float, copy=False)
    if a.shape and a.shape[-1] == 4:
        return a
    out = np.zeros(a.shape + (4,))
    out[..., 0] = a
    return out


def field_mul(a, b) -> np.ndarray:
    """Pointwise Hamilton product of two ``(..., 4)`` arrays (broadcasting)."""
    a = as_field(a)
    b = as_field(b)
    a0, a1, a2, a3 = np.moveaxis(a, -1, 0)
    b0, b1, b2, b3 = np.moveaxis(b, -1, 0)
    return np.stack([
        a0 * b0 - a1 * b1 - a2 * b2 - a3 * b3,
        a0 * b1 + a1 * b0 + a2 * b3 - a3 * b2,
        a0 * b2 - a1 * b3 + a2 * b0 + a3 * b1,
        a0 * b3 + a1 * b2 - a2 * b1 + a3 * b0,
    ], axis=-1)


def field_conj(a) -> np.ndarray:
    a = as_field(a).copy()
    a[..., 1:] *= -1.0
    return a


def field_norm2(a) -> np.ndarray:
    a = as_field(a)
    return np.sum(a * a, axis=-1)

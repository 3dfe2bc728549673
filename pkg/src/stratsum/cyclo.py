"""Exact sums of p^2-th roots of unity.

Every value of S(h; p^2) lies in Z[zeta] with zeta = exp(2 pi i / p^2).  The
powers zeta^0 .. zeta^{p(p-1)-1} form a Z-basis because the minimal polynomial
of zeta is Phi_{p^2}(x) = sum_{k<p} x^{kp}.  Writing values in that basis makes
equality a comparison of integer vectors.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

__all__ = ["RootCounter", "CycloElem", "canonicalize", "cyclo_eq", "cyclo_to_complex"]


@dataclass(frozen=True)
class RootCounter:
    """Multiset of exponents: ``counts[t]`` copies of zeta^t, 0 <= t < p^2."""

    p: int
    counts: tuple[int, ...]

    def __post_init__(self):
        if len(self.counts) != self.p * self.p:
            raise ValueError(f"need {self.p * self.p} counts, got {len(self.counts)}")

    @classmethod
    def zero(cls, p: int) -> RootCounter:
        return cls(p, (0,) * (p * p))

    @classmethod
    def from_exponents(cls, p: int, exps, weights=None) -> RootCounter:
        """Accumulate zeta^t for every t in ``exps`` (reduced mod p^2)."""
        q = p * p
        exps = np.asarray(exps, dtype=np.int64) % q
        if weights is None:
            c = np.bincount(exps, minlength=q)
            return cls(p, tuple(int(v) for v in c))
        acc = [0] * q
        for t, w in zip(exps.tolist(), weights):
            acc[t] += int(w)
        return cls(p, tuple(acc))

    @classmethod
    def from_mapping(cls, p: int, m: dict) -> RootCounter:
        acc = [0] * (p * p)
        for t, c in m.items():
            acc[t % (p * p)] += int(c)
        return cls(p, tuple(acc))

    def merge(self, other: RootCounter) -> RootCounter:
        if other.p != self.p:
            raise ValueError("cannot merge counters for different p")
        return RootCounter(self.p, tuple(a + b for a, b in zip(self.counts, other.counts)))

    __add__ = merge

    def conjugate(self) -> RootCounter:
        q = self.p * self.p
        return RootCounter(self.p, tuple(self.counts[(-t) % q] for t in range(q)))

    @property
    def total(self) -> int:
        return sum(self.counts)

    def to_complex(self) -> complex:
        q = self.p * self.p
        return sum(c * cmath.exp(2j * math.pi * t / q) for t, c in enumerate(self.counts) if c)


@dataclass(frozen=True)
class CycloElem:
    """Element of Z[zeta_{p^2}] in the canonical basis zeta^0 .. zeta^{p(p-1)-1}."""

    p: int
    coeffs: tuple[int, ...]

    def __post_init__(self):
        if len(self.coeffs) != self.p * (self.p - 1):
            raise ValueError("wrong basis length")

    @classmethod
    def zero(cls, p: int) -> CycloElem:
        return cls(p, (0,) * (p * (p - 1)))

    @classmethod
    def integer(cls, p: int, n: int) -> CycloElem:
        c = [0] * (p * (p - 1))
        c[0] = int(n)
        return cls(p, tuple(c))

    def _check(self, other):
        if not isinstance(other, CycloElem) or other.p != self.p:
            raise ValueError("cyclotomic elements for different p")

    def __add__(self, other: CycloElem) -> CycloElem:
        self._check(other)
        return CycloElem(self.p, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self) -> CycloElem:
        return CycloElem(self.p, tuple(-a for a in self.coeffs))

    def __sub__(self, other: CycloElem) -> CycloElem:
        return self + (-other)

    def scale(self, k: int) -> CycloElem:
        return CycloElem(self.p, tuple(k * a for a in self.coeffs))

    @property
    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def as_integer(self) -> int | None:
        """The rational integer this element equals, or None if it is not one."""
        if any(self.coeffs[1:]):
            return None
        return self.coeffs[0]

    @property
    def l1(self) -> int:
        return sum(abs(c) for c in self.coeffs)


def canonicalize(rc: RootCounter) -> CycloElem:
    """Rewrite a counter in the canonical basis.

    For t = p(p-1) + u with 0 <= u < p the relation Phi_{p^2}(zeta) zeta^u = 0
    gives zeta^t = -sum_{k=0}^{p-2} zeta^{kp+u}; one pass suffices.
    """
    p = rc.p
    base = p * (p - 1)
    out = list(rc.counts[:base])
    for u in range(p):
        c = rc.counts[base + u]
        if c:
            for k in range(p - 1):
                out[k * p + u] -= c
    return CycloElem(p, tuple(out))


def cyclo_eq(a: CycloElem, b: CycloElem) -> bool:
    if a.p != b.p:
        raise ValueError(f"mismatched p: {a.p} vs {b.p}")
    return a.coeffs == b.coeffs


def cyclo_to_complex(a: CycloElem) -> tuple[complex, float]:
    """Complex embedding zeta -> exp(2 pi i / p^2) and its absolute value.

    Absolute error is below 1e-9 times the l1 norm of the coefficients.
    """
    q = a.p * a.p
    z = complex(0.0, 0.0)
    for t, c in enumerate(a.coeffs):
        if c:
            z += c * cmath.exp(2j * math.pi * t / q)
    return z, abs(z)

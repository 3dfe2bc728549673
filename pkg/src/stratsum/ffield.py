"""Arithmetic in F_p, F_{p^e} and Z/p^2Z.

Ring elements are encoded as integers in ``[0, q)``.  For F_{p^e} the integer
``sum(c_i * p**i)`` stands for the residue class of ``c_0 + c_1 x + ... +
c_{e-1} x^{e-1}`` modulo the defining polynomial, so counting upwards through
the encodings is odometer order on coefficient vectors.

Scalar extension-field arithmetic (:func:`ext_arith`) is plain polynomial
arithmetic on coefficient tuples.  The vectorized ``add``/``mul`` used by the
enumeration engines run on numpy arrays of encodings; for extensions they go
through log/antilog tables that are themselves built from the scalar routines.
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass

import numpy as np

__all__ = [
    "ModulusSpec",
    "ExtElem",
    "is_prime",
    "prime_field",
    "prime_square",
    "build_extension",
    "is_irreducible",
    "ext_arith",
    "enumerate_field",
    "affine_points",
    "projective_points",
    "MAX_EXTENSION_DEGREE",
]

MAX_EXTENSION_DEGREE = 4
CHUNK = 1 << 18

PRIME = "prime-field"
EXTENSION = "extension-field"
PRIME_SQUARE = "prime-square-quotient"

ExtElem = tuple  # coefficient vector (c_0, ..., c_{e-1}) of residues mod p


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    k = 3
    while k * k <= n:
        if n % k == 0:
            return False
        k += 2
    return True


# -- polynomials over F_p as coefficient lists, lowest degree first ----------

def _trim(a):
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return a


def _pmod(a, b, p):
    """Remainder of a by b over F_p (b nonzero, trimmed)."""
    a = _trim(a)
    inv_lead = pow(b[-1], -1, p)
    db = len(b) - 1
    while len(a) - 1 >= db and a:
        f = a[-1] * inv_lead % p
        shift = len(a) - 1 - db
        for i, bc in enumerate(b):
            a[shift + i] = (a[shift + i] - f * bc) % p
        a = _trim(a)
    return a


def _pmul(a, b, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return out


def is_irreducible(f, p: int) -> bool:
    """Exhaustive test: f (monic, low-first) has no monic factor of degree <= deg/2."""
    f = _trim(f)
    n = len(f) - 1
    if n <= 0:
        return False
    if n == 1:
        return True
    for k in range(1, n // 2 + 1):
        for tail in itertools.product(range(p), repeat=k):
            g = list(tail) + [1]
            if not _pmod(f, g, p):
                return False
    return True


@dataclass(frozen=True)
class ModulusSpec:
    """One of the finite rings the library computes over.

    ``kind`` is ``"prime-field"``, ``"extension-field"`` or
    ``"prime-square-quotient"``.  ``modulus_poly`` (extensions only) holds the
    monic defining polynomial, lowest degree first, leading 1 included.
    """

    kind: str
    p: int
    e: int = 1
    modulus_poly: tuple[int, ...] | None = None

    def __post_init__(self):
        if not is_prime(self.p):
            raise ValueError(f"{self.p} is not prime")
        if self.kind == EXTENSION:
            mp = self.modulus_poly
            if mp is None or len(mp) != self.e + 1 or mp[-1] != 1:
                raise ValueError("extension needs a monic modulus polynomial of degree e")
            if not is_irreducible(mp, self.p):
                raise ValueError(f"{mp} is reducible over F_{self.p}")
        elif self.kind in (PRIME, PRIME_SQUARE):
            if self.e != 1 or self.modulus_poly is not None:
                raise ValueError(f"{self.kind} takes no extension data")
        else:
            raise ValueError(f"unknown ring kind {self.kind!r}")

    @property
    def q(self) -> int:
        if self.kind == PRIME_SQUARE:
            return self.p * self.p
        return self.p**self.e

    @property
    def is_field(self) -> bool:
        return self.kind != PRIME_SQUARE

    @property
    def one(self) -> int:
        return 1

    def __str__(self) -> str:
        if self.kind == PRIME:
            return f"F_{self.p}"
        if self.kind == PRIME_SQUARE:
            return f"Z/{self.q}Z"
        return f"F_{self.p}^{self.e}"

    # -- encoding ------------------------------------------------------------

    def to_coeffs(self, a: int) -> ExtElem:
        out = []
        for _ in range(self.e):
            a, r = divmod(a, self.p)
            out.append(r)
        return tuple(out)

    def from_coeffs(self, c) -> int:
        if len(c) != self.e:
            raise ValueError(f"expected {self.e} coefficients")
        return sum((int(ci) % self.p) * self.p**i for i, ci in enumerate(c))

    def encode(self, x) -> int:
        """Accept an encoded integer or (extensions) a coefficient tuple."""
        if isinstance(x, (tuple, list)):
            return self.from_coeffs(x)
        x = int(x)
        if self.kind == EXTENSION:
            if not 0 <= x < self.q:
                raise ValueError(f"encoded element {x} out of range for {self}")
            return x
        return x % self.q

    def embed_int(self, c: int) -> int:
        """Image of the integer c under Z -> ring."""
        return c % (self.q if self.kind == PRIME_SQUARE else self.p)

    def elem_str(self, a: int) -> str:
        if self.kind != EXTENSION:
            return str(a)
        parts = []
        for i, c in reversed(list(enumerate(self.to_coeffs(a)))):
            if not c:
                continue
            if i == 0:
                parts.append(str(c))
            else:
                mono = "x" if i == 1 else f"x^{i}"
                parts.append(mono if c == 1 else f"{c}{mono}")
        return "+".join(parts) or "0"

    # -- vectorized arithmetic on encodings ---------------------------------

    def add(self, a, b):
        if self.kind != EXTENSION:
            return (a + b) % self.q
        p = self.p
        if p == 2:
            return np.bitwise_xor(a, b)
        out = np.zeros(np.broadcast(a, b).shape, dtype=np.int64)
        pk = 1
        for _ in range(self.e):
            out = out + ((a // pk + b // pk) % p) * pk
            pk *= p
        return out

    def neg(self, a):
        if self.kind != EXTENSION:
            return (-a) % self.q
        p = self.p
        out = np.zeros(np.shape(a), dtype=np.int64)
        pk = 1
        for _ in range(self.e):
            out = out + ((-(a // pk)) % p) * pk
            pk *= p
        return out

    def mul(self, a, b):
        if self.kind != EXTENSION:
            return (a * b) % self.q
        exp, log = self._tables
        a = np.asarray(a)
        b = np.asarray(b)
        prod = exp[(log[a] + log[b]) % (self.q - 1)]
        return np.where((a == 0) | (b == 0), 0, prod)

    def inv(self, a):
        """Vectorized inverse; zero maps to zero (callers mask it out)."""
        if self.kind == PRIME_SQUARE:
            raise ValueError("inv is only defined on fields")
        a = np.asarray(a)
        exp, log = self._tables
        return np.where(a == 0, 0, exp[(-log[a]) % (self.q - 1)])

    @functools.cached_property
    def _tables(self):
        q = self.q
        g = _primitive_element(self)
        exp = np.zeros(q - 1, dtype=np.int64)
        log = np.zeros(q, dtype=np.int64)
        cur = self.to_coeffs(1)
        gc = self.to_coeffs(g)
        for k in range(q - 1):
            enc = self.from_coeffs(cur)
            exp[k] = enc
            log[enc] = k
            cur = ext_arith("mul", cur, gc, self)
        return exp, log


def _factor_primes(n):
    out, k = [], 2
    while k * k <= n:
        if n % k == 0:
            out.append(k)
            while n % k == 0:
                n //= k
        k += 1
    if n > 1:
        out.append(n)
    return out


def _ext_pow(a, k, m):
    result = m.to_coeffs(1)
    while k:
        if k & 1:
            result = ext_arith("mul", result, a, m)
        a = ext_arith("mul", a, a, m)
        k >>= 1
    return result


def _primitive_element(m: ModulusSpec) -> int:
    q = m.q
    one = m.to_coeffs(1)
    ps = _factor_primes(q - 1)
    for g in range(2, q):
        gc = m.to_coeffs(g)
        if all(_ext_pow(gc, (q - 1) // r, m) != one for r in ps):
            return g
    if q == 2:
        return 1
    raise AssertionError("no primitive element found")


def prime_field(p: int) -> ModulusSpec:
    return ModulusSpec(PRIME, p)


def prime_square(p: int) -> ModulusSpec:
    return ModulusSpec(PRIME_SQUARE, p)


@functools.lru_cache(maxsize=None)
def build_extension(p: int, e: int) -> ModulusSpec:
    """F_{p^e} defined by the lexicographically first monic irreducible of degree e.

    Candidates ``x^e + a_{e-1} x^{e-1} + ... + a_0`` are ordered by the tuple
    ``(a_{e-1}, ..., a_0)``.  ``e = 1`` gives the prime field.

    >>> build_extension(3, 2).modulus_poly
    (1, 0, 1)
    """
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if not 1 <= e <= MAX_EXTENSION_DEGREE:
        raise ValueError(f"extension degree must be in 1..{MAX_EXTENSION_DEGREE}")
    if e == 1:
        return prime_field(p)
    for high_first in itertools.product(range(p), repeat=e):
        f = list(reversed(high_first)) + [1]
        if is_irreducible(f, p):
            return ModulusSpec(EXTENSION, p, e, tuple(f))
    raise AssertionError("unreachable: irreducibles exist in every degree")


def ext_arith(op: str, a, b=None, m: ModulusSpec | None = None) -> ExtElem:
    """Scalar arithmetic on coefficient vectors: ``op`` in add, mul, inv, neg."""
    if m is None:
        raise TypeError("ext_arith needs a ModulusSpec")
    if not m.is_field:
        raise ValueError("ext_arith works over fields")
    p, e = m.p, m.e
    a = tuple(int(x) % p for x in a)
    if len(a) != e:
        raise ValueError(f"element must have {e} coefficients")
    pad = lambda c: tuple(c) + (0,) * (e - len(c))
    if op == "neg":
        return tuple((-x) % p for x in a)
    if op == "inv":
        if not any(a):
            raise ZeroDivisionError("inverse of zero")
        return _ext_pow(a, m.q - 2, m)
    b = tuple(int(x) % p for x in b)
    if len(b) != e:
        raise ValueError(f"element must have {e} coefficients")
    if op == "add":
        return tuple((x + y) % p for x, y in zip(a, b))
    if op == "mul":
        prod = _pmul(_trim(a), _trim(b), p)
        if m.modulus_poly is not None:
            prod = _pmod(prod, list(m.modulus_poly), p)
        return pad(prod)
    raise ValueError(f"unknown operation {op!r}")


def enumerate_field(m: ModulusSpec):
    """All q elements in odometer order, as encodings (0 .. q-1)."""
    return range(m.q)


def affine_points(q: int, n: int, chunk: int = CHUNK):
    """Yield ``(start, block)`` covering all of {0..q-1}^n in odometer order
    (last coordinate fastest), ``block`` of shape (k, n)."""
    total = q**n
    for start in range(0, total, chunk):
        idx = np.arange(start, min(start + chunk, total), dtype=np.int64)
        cols = []
        for _ in range(n):
            idx, r = np.divmod(idx, q)
            cols.append(r)
        yield start, np.stack(cols[::-1], axis=1)


def projective_points(m: ModulusSpec, n: int, chunk: int = CHUNK):
    """Normalized representatives of P^{n-1}(F_q): first nonzero coordinate 1.

    Blocks come out in increasing lexicographic order of the representatives.
    """
    if not m.is_field:
        raise ValueError("projective points need a field")
    q = m.q
    for lead in reversed(range(n)):
        rest = n - lead - 1
        for _, tail in affine_points(q, rest, chunk) if rest else [(0, np.zeros((1, 0), dtype=np.int64))]:
            k = tail.shape[0]
            block = np.zeros((k, n), dtype=np.int64)
            block[:, lead] = 1
            block[:, lead + 1 :] = tail
            yield block

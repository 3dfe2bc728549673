"""Integer multivariate forms: parsing, printing, exact and modular evaluation,
formal gradients, and the hypothesis checks that gate the sum engines.
"""

from __future__ import annotations

import functools
import re
from dataclasses import dataclass, field

import numpy as np

from .ffield import ModulusSpec, build_extension, is_prime, projective_points

__all__ = [
    "MultiPoly",
    "PolyParseError",
    "HypothesisError",
    "FormReport",
    "parse_poly",
    "eval_mod",
    "eval_array",
    "gradient",
    "analyze_form",
    "require_hypotheses",
]


class PolyParseError(ValueError):
    """Malformed polynomial text. ``pos`` is the 0-based offset of the problem."""

    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} at position {pos}")
        self.pos = pos


class HypothesisError(ValueError):
    """F fails the standing assumptions (homogeneous, d >= 2, p does not divide d,
    nonsingular mod p)."""


@dataclass(frozen=True)
class MultiPoly:
    """A polynomial in ``nvars`` variables with integer coefficients.

    ``terms`` is a tuple of ``(exponents, coefficient)`` pairs in canonical
    order: total degree descending, then exponent vectors descending.  The zero
    polynomial has no terms; it only arises as a partial derivative.
    """

    nvars: int
    terms: tuple[tuple[tuple[int, ...], int], ...]

    def __post_init__(self):
        if self.nvars < 1:
            raise ValueError("nvars must be >= 1")
        seen = set()
        for exps, c in self.terms:
            if len(exps) != self.nvars or any(k < 0 for k in exps):
                raise ValueError(f"bad exponent vector {exps}")
            if c == 0:
                raise ValueError("zero coefficient in canonical term list")
            if exps in seen:
                raise ValueError(f"duplicate monomial {exps}")
            seen.add(exps)

    @classmethod
    def from_dict(cls, nvars: int, coeffs: dict) -> MultiPoly:
        merged: dict[tuple[int, ...], int] = {}
        for exps, c in coeffs.items():
            exps = tuple(int(k) for k in exps)
            merged[exps] = merged.get(exps, 0) + int(c)
        items = [(e, c) for e, c in merged.items() if c != 0]
        items.sort(key=lambda t: (sum(t[0]), t[0]), reverse=True)
        return cls(nvars, tuple(items))

    @property
    def is_zero(self) -> bool:
        return not self.terms

    @functools.cached_property
    def degree(self) -> int:
        return max((sum(e) for e, _ in self.terms), default=0)

    @functools.cached_property
    def is_homogeneous(self) -> bool:
        return bool(self.terms) and all(sum(e) == self.degree for e, _ in self.terms)

    def coeff_dict(self) -> dict[tuple[int, ...], int]:
        return dict(self.terms)

    def __call__(self, *xs: int) -> int:
        """Exact integer value at an integer point."""
        if len(xs) == 1 and not isinstance(xs[0], int):
            xs = tuple(xs[0])
        if len(xs) != self.nvars:
            raise ValueError(f"expected {self.nvars} coordinates, got {len(xs)}")
        total = 0
        for exps, c in self.terms:
            v = c
            for x, k in zip(xs, exps):
                if k:
                    v *= int(x) ** k
            total += v
        return total

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        out = []
        for i, (exps, c) in enumerate(self.terms):
            mono = "*".join(
                f"x{j + 1}" if k == 1 else f"x{j + 1}^{k}"
                for j, k in enumerate(exps)
                if k
            )
            mag = abs(c)
            if not mono:
                body = str(mag)
            elif mag == 1:
                body = mono
            else:
                body = f"{mag}*{mono}"
            if i == 0:
                out.append(("-" if c < 0 else "") + body)
            else:
                out.append((" - " if c < 0 else " + ") + body)
        return "".join(out)


_TOKEN = re.compile(r"\s*(?:(\d+)|(x)(\d+)|(\^)|(\*)|([+-]))")


def _tokenize(text: str):
    pos = 0
    toks = []
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            # report the first non-blank offending character
            bad = pos + len(text[pos:]) - len(text[pos:].lstrip())
            raise PolyParseError(f"unexpected character {text[bad]!r}", bad)
        start = m.start() + len(m.group(0)) - len(m.group(0).lstrip())
        if m.group(1) is not None:
            toks.append(("int", int(m.group(1)), start))
        elif m.group(2) is not None:
            toks.append(("var", int(m.group(3)), start))
        elif m.group(4):
            toks.append(("^", None, start))
        elif m.group(5):
            toks.append(("*", None, start))
        else:
            toks.append(("sign", m.group(6), start))
        pos = m.end()
    toks.append(("end", None, len(text)))
    return toks


def parse_poly(text: str, nvars: int) -> MultiPoly:
    """Parse ``text`` into a canonical :class:`MultiPoly`.

    Grammar::

        poly     := [sign] term (sign term)*
        term     := [integer] ['*'] monomial ('*'? monomial)*  |  integer
        monomial := 'x' index ['^' exponent]

    Juxtaposition multiplies and whitespace is ignored, so ``"2x1^2 - x1x2"``
    and ``"2*x1^2 - x1*x2"`` are the same polynomial.

    >>> str(parse_poly("2*x1^2 - x1*x2 + x1^2", 2))
    '3*x1^2 - x1*x2'
    """
    if nvars < 1:
        raise ValueError("nvars must be >= 1")
    toks = _tokenize(text)
    i = 0
    acc: dict[tuple[int, ...], int] = {}

    def peek():
        return toks[i]

    sign = 1
    if peek()[0] == "sign":
        sign = -1 if peek()[1] == "-" else 1
        i += 1
    while True:
        kind, val, pos = peek()
        coeff = 1
        exps = [0] * nvars
        got_any = False
        if kind == "int":
            coeff = val
            got_any = True
            i += 1
            if peek()[0] == "*":
                i += 1
                if peek()[0] != "var":
                    raise PolyParseError("expected monomial after '*'", peek()[2])
        while peek()[0] == "var":
            _, idx, vpos = peek()
            if not 1 <= idx <= nvars:
                raise PolyParseError(f"variable x{idx} out of range 1..{nvars}", vpos)
            i += 1
            k = 1
            if peek()[0] == "^":
                i += 1
                if peek()[0] != "int":
                    raise PolyParseError("expected exponent after '^'", peek()[2])
                k = peek()[1]
                i += 1
            exps[idx - 1] += k
            got_any = True
            if peek()[0] == "*":
                i += 1
                if peek()[0] != "var":
                    raise PolyParseError("expected monomial after '*'", peek()[2])
        if not got_any:
            raise PolyParseError("expected term", pos)
        key = tuple(exps)
        acc[key] = acc.get(key, 0) + sign * coeff
        kind, val, pos = peek()
        if kind == "end":
            break
        if kind != "sign":
            raise PolyParseError("expected '+' or '-'", pos)
        sign = -1 if val == "-" else 1
        i += 1
    poly = MultiPoly.from_dict(nvars, acc)
    if poly.is_zero:
        raise PolyParseError("zero polynomial", 0)
    return poly


def gradient(F: MultiPoly) -> tuple[MultiPoly, ...]:
    """Formal partial derivatives over the integers; zero entries are kept."""
    out = []
    for j in range(F.nvars):
        d = {}
        for exps, c in F.terms:
            k = exps[j]
            if k:
                e = list(exps)
                e[j] -= 1
                d[tuple(e)] = c * k
        out.append(MultiPoly.from_dict(F.nvars, d))
    return tuple(out)


def eval_array(F: MultiPoly, pts: np.ndarray, m: ModulusSpec) -> np.ndarray:
    """Evaluate F at each row of ``pts`` (encoded ring elements) in the ring ``m``."""
    pts = np.asarray(pts, dtype=np.int64)
    if pts.ndim != 2 or pts.shape[1] != F.nvars:
        raise ValueError(f"points must have shape (N, {F.nvars})")
    N = pts.shape[0]
    total = np.zeros(N, dtype=np.int64)
    if F.is_zero:
        return total
    maxexp = [max(e[j] for e, _ in F.terms) for j in range(F.nvars)]
    powers = []
    for j in range(F.nvars):
        col = pts[:, j]
        pw = [np.full(N, m.one, dtype=np.int64)]
        for _ in range(maxexp[j]):
            pw.append(m.mul(pw[-1], col))
        powers.append(pw)
    for exps, c in F.terms:
        v = np.full(N, m.embed_int(c), dtype=np.int64)
        for j, k in enumerate(exps):
            if k:
                v = m.mul(v, powers[j][k])
        total = m.add(total, v)
    return total


def eval_mod(F: MultiPoly, pt, m: ModulusSpec) -> int:
    """F(pt) in the ring ``m``, returned as an encoded element.

    For extension fields coordinates may be given either as encoded integers or
    as coefficient tuples.
    """
    if len(pt) != F.nvars:
        raise ValueError(f"point has {len(pt)} coordinates, polynomial has {F.nvars} variables")
    row = [m.encode(x) for x in pt]
    return int(eval_array(F, np.array([row], dtype=np.int64), m)[0])


@dataclass(frozen=True)
class FormReport:
    p: int
    kmax: int
    homogeneous: bool
    degree: int
    d_mod_p: int
    p_divides_d: bool
    # (e, point) of the first singular point found, point given as encoded ints
    witness: tuple[int, tuple[int, ...]] | None
    notes: tuple[str, ...] = field(default=())

    @property
    def nonsingular(self) -> bool:
        return self.witness is None

    @property
    def hypotheses_ok(self) -> bool:
        return (
            self.homogeneous
            and self.degree >= 2
            and not self.p_divides_d
            and self.witness is None
        )


@functools.lru_cache(maxsize=256)
def analyze_form(F: MultiPoly, p: int, kmax: int = 2) -> FormReport:
    """Check the standing hypotheses for F at the prime p.

    The singular-point search walks F_{p^e}^n minus the origin for e = 1..kmax
    in odometer order and returns the first point where F and every partial
    derivative vanish.  The singular locus is a cone, so only normalized
    projective representatives are visited; the first of these is also the
    odometer-first affine witness.
    """
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if kmax < 1:
        raise ValueError("kmax must be >= 1")
    notes = []
    homog = F.is_homogeneous
    if not homog:
        notes.append("not homogeneous")
    d = F.degree
    witness = None
    grads = gradient(F)
    for e in range(1, kmax + 1):
        m = build_extension(p, e)
        for chunk in projective_points(m, F.nvars):
            mask = eval_array(F, chunk, m) == 0
            for g in grads:
                if not mask.any():
                    break
                mask &= eval_array(g, chunk, m) == 0
            hits = np.flatnonzero(mask)
            if hits.size:
                witness = (e, tuple(int(v) for v in chunk[hits[0]]))
                break
        if witness is not None:
            break
    if witness is None:
        notes.append(f"no singular point over F_{{{p}^e}}, e <= {kmax}")
    return FormReport(
        p=p,
        kmax=kmax,
        homogeneous=homog,
        degree=d,
        d_mod_p=d % p,
        p_divides_d=d % p == 0,
        witness=witness,
        notes=tuple(notes),
    )


def require_hypotheses(F: MultiPoly, p: int, kmax: int = 2) -> FormReport:
    """Raise :class:`HypothesisError` unless F is usable by the sum engines at p."""
    if F.is_zero:
        raise HypothesisError("zero polynomial")
    if not F.is_homogeneous:
        raise HypothesisError("F is not homogeneous")
    if F.degree < 2:
        raise HypothesisError("degree must be >= 2")
    rep = analyze_form(F, p, kmax)
    if rep.p_divides_d:
        raise HypothesisError(f"p = {p} divides the degree {F.degree}")
    if rep.witness is not None:
        e, pt = rep.witness
        raise HypothesisError(f"F is singular mod {p}: witness {pt} over F_{p}^{e}")
    return rep

"""Point counts for V_F and for the tangency systems W_{F,h}.

W_{F,h} is cut out by F(y) = 0 and h_i dF/dx_j(y) = h_j dF/dx_i(y) for i < j,
i.e. F vanishes at y and the gradient there is parallel to h.  Both V_F and
W_{F,h} are cones, so counts over a field come from normalized projective
representatives: affine = 1 + (q - 1) * projective.
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass, field

import numpy as np

from ._parallel import ordered_map
from .ffield import (
    CHUNK,
    PRIME_SQUARE,
    ModulusSpec,
    affine_points,
    build_extension,
    prime_field,
    prime_square,
    projective_points,
)
from .poly import HypothesisError, MultiPoly, analyze_form, eval_array, gradient

__all__ = [
    "WSpec",
    "DimEstimate",
    "LiftCount",
    "enumerate_points",
    "enumerate_W",
    "count_W",
    "count_W_projective",
    "count_mod_p2",
    "estimate_dim",
    "dim_from_counts",
    "round_log_half_down",
]


@dataclass(frozen=True)
class WSpec:
    F: MultiPoly
    h: tuple[int, ...]
    p: int

    def __post_init__(self):
        if len(self.h) != self.F.nvars:
            raise ValueError("h has the wrong length")
        object.__setattr__(self, "h", tuple(int(x) % self.p for x in self.h))
        if not self.F.is_homogeneous or self.F.degree < 2:
            raise HypothesisError("W_{F,h} needs F homogeneous of degree >= 2")


@dataclass(frozen=True)
class DimEstimate:
    affine_counts: dict
    proj_counts: dict
    dim_est: int
    method_note: str = field(default="", compare=False)


@dataclass(frozen=True)
class LiftCount:
    p: int
    n1: int
    n2_enum: int
    n2_formula: int | None
    agree: bool | None
    notes: tuple[str, ...] = ()


def _v_block(args):
    F, m, start, block = args
    vals = eval_array(F, block, m)
    return block[vals == 0]


def enumerate_points(F: MultiPoly, m: ModulusSpec, workers: int = 1) -> tuple[np.ndarray, int]:
    """All x in K^n with F(x) = 0, in odometer order, and their number."""
    if m.kind not in ("prime-field", "extension-field", PRIME_SQUARE):
        raise ValueError(f"unsupported ring {m.kind}")
    jobs = ((F, m, s, b) for s, b in affine_points(m.q, F.nvars))
    parts = ordered_map(_v_block, jobs, workers)
    pts = np.concatenate(parts) if parts else np.zeros((0, F.nvars), dtype=np.int64)
    return pts, int(pts.shape[0])


@functools.lru_cache(maxsize=64)
def _cached_points(F: MultiPoly, m: ModulusSpec) -> np.ndarray:
    pts, _ = enumerate_points(F, m)
    pts.setflags(write=False)
    return pts


def _w_mask(F, grads, h, block, m):
    mask = eval_array(F, block, m) == 0
    if not mask.any():
        return mask
    gv = [eval_array(g, block, m) for g in grads]
    hv = [m.embed_int(x) for x in h]
    for i, j in itertools.combinations(range(F.nvars), 2):
        if hv[i] == 0 and hv[j] == 0:
            continue
        lhs = m.mul(np.int64(hv[i]), gv[j])
        rhs = m.mul(np.int64(hv[j]), gv[i])
        mask &= lhs == rhs
    return mask


def _check_field(w: WSpec, m: ModulusSpec):
    if not m.is_field:
        raise ValueError("W is counted over F_p or its extensions")
    if m.p != w.p:
        raise ValueError(f"modulus characteristic {m.p} does not match W prime {w.p}")


def enumerate_W(w: WSpec, m: ModulusSpec) -> tuple[np.ndarray, int]:
    """All y in F_{p^e}^n on W_{F,h}, by direct affine enumeration."""
    _check_field(w, m)
    grads = gradient(w.F)
    parts = []
    for _, block in affine_points(m.q, w.F.nvars):
        parts.append(block[_w_mask(w.F, grads, w.h, block, m)])
    pts = np.concatenate(parts)
    return pts, int(pts.shape[0])


def count_W_projective(w: WSpec, m: ModulusSpec) -> int:
    _check_field(w, m)
    grads = gradient(w.F)
    return sum(int(_w_mask(w.F, grads, w.h, b, m).sum()) for b in projective_points(m, w.F.nvars))


def count_W(w: WSpec, m: ModulusSpec) -> int:
    """#W_{F,h}(F_q) through the cone structure (agrees with :func:`enumerate_W`)."""
    return 1 + (m.q - 1) * count_W_projective(w, m)


def count_mod_p2(F: MultiPoly, p: int, kmax: int = 2, workers: int = 1) -> LiftCount:
    """#V(F_p) and #V(Z/p^2 Z), the latter both by enumeration and by lifting.

    Each nonzero y in V(F_p) has a nonvanishing gradient mod p, so its lifts
    y + p z form an affine hyperplane of p^{n-1} solutions; the origin lifts to
    all p^n choices of z because F(p z) = 0 mod p^2 once d >= 2.
    """
    n = F.nvars
    n1 = enumerate_points(F, prime_field(p), workers)[1]
    n2 = enumerate_points(F, prime_square(p), workers)[1]
    notes = []
    try:
        if F.degree < 2 or not F.is_homogeneous:
            raise HypothesisError("F must be homogeneous of degree >= 2")
        rep = analyze_form(F, p, kmax)
        if rep.p_divides_d:
            raise HypothesisError(f"p = {p} divides d = {F.degree}")
        if rep.witness is not None:
            raise HypothesisError(f"singular mod {p} at {rep.witness[1]}")
    except HypothesisError as exc:
        notes.append(f"formula suppressed: {exc}")
        return LiftCount(p, n1, n2, None, None, tuple(notes))
    formula = p ** (n - 1) * (n1 - 1) + p**n
    return LiftCount(p, n1, n2, formula, formula == n2, tuple(notes))


def round_log_half_down(count: int, base: int) -> int:
    """Nearest integer to log_base(count), ties rounded down.

    Integer-exact: returns r with base^(2r-1) < count^2 <= base^(2r+1).
    """
    if count < 1:
        raise ValueError("count must be positive")
    c2 = count * count
    r = 0
    while c2 > base ** (2 * r + 1):
        r += 1
    return r


def dim_from_counts(affine_counts: dict, p: int, n: int) -> DimEstimate:
    """Dimension estimate from affine cone counts over F_{p^e}, e = 1..kmax.

    Zero when the origin is the only point over every field checked.
    Otherwise ``1 + round(log_{p^kmax}(projective count at kmax))`` clamped to
    [1, n-1]; if the kmax count is trivial while a smaller field had points the
    estimate is 1.
    """
    kmax = max(affine_counts)
    proj = {}
    for e, a in affine_counts.items():
        qe = p**e
        if a < 1 or (a - 1) % (qe - 1):
            raise ValueError(f"count {a} over F_{p}^{e} is not a cone count")
        proj[e] = (a - 1) // (qe - 1)
    top = proj[kmax]
    if all(v == 0 for v in proj.values()):
        dim = 0
        note = "only the origin over every checked field"
    elif top == 0:
        dim = 1
        note = f"points below e={kmax} only; minimal positive dimension"
    else:
        r = round_log_half_down(top, p**kmax)
        dim = min(max(1 + r, 1), n - 1)
        note = f"1 + round(log_{p}^{kmax}({top}))"
    counts = ", ".join(f"e={e}: {affine_counts[e]}" for e in sorted(affine_counts))
    return DimEstimate(dict(affine_counts), proj, dim, f"{note} [{counts}]")


def estimate_dim(w: WSpec, kmax: int = 2) -> DimEstimate:
    """Estimate dim W_{F,h} over the algebraic closure from counts over F_{p^e}.

    The result is a lower-biased heuristic: a component with no points over the
    fields checked is invisible.
    """
    if not 1 <= kmax <= 4:
        raise ValueError("kmax must be in 1..4")
    counts = {e: count_W(w, build_extension(w.p, e)) for e in range(1, kmax + 1)}
    return dim_from_counts(counts, w.p, w.F.nvars)

"""The nested sets G_{F,j} = {h in F_p^n : dim W_{F,h} >= j}.

Two ways to fill the per-h table:

``method="incidence"`` (default) walks the projective points y of V_F over each
F_{p^e} once, normalizes grad F(y), and files y under that direction.  For
h != 0, W_{F,h} consists of the origin, the points with vanishing gradient,
and the points whose gradient direction is the direction of h.  Cost is one
pass over P^{n-1}(F_{p^e}) instead of one per h.

``method="direct"`` runs :func:`estimate_dim` on every h separately.  It is
the reference the incidence route is tested against.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from .ffield import build_extension, projective_points
from .poly import HypothesisError, MultiPoly, eval_array, gradient, require_hypotheses
from .varieties import DimEstimate, WSpec, dim_from_counts, estimate_dim

__all__ = ["StrataTable", "CodimReport", "build_strata", "codim_report", "min_j", "normalize_direction"]


@dataclass(frozen=True)
class StrataTable:
    """Per-h dimension estimates over F_p^n (odometer order) and stratum sizes.

    Every G_j here is an *estimated* stratum: membership comes from counts over
    F_{p^e} with e <= kmax.
    """

    F: MultiPoly
    p: int
    kmax: int
    rows: dict = field(repr=False)
    sizes: tuple[int, ...]

    @property
    def n(self) -> int:
        return self.F.nvars

    def members(self, j: int) -> list[tuple[int, ...]]:
        return [h for h, r in self.rows.items() if r.dim_est >= j]

    def check_nesting(self) -> bool:
        return all(self.sizes[j + 1] <= self.sizes[j] for j in range(len(self.sizes) - 1))


@dataclass(frozen=True)
class CodimReport:
    F: MultiPoly
    primes: tuple[int, ...]
    # ratios[j][i] = #G_j(F_{p_i}) / p_i^{n-j}
    ratios: tuple[tuple[float, ...], ...]
    limits: tuple[float, ...]
    passed_by_j: tuple[bool, ...]
    passed: bool
    nesting_ok: bool


def normalize_direction(v, m):
    """Scale a nonzero vector of encodings so its first nonzero entry is 1."""
    v = np.asarray(v, dtype=np.int64)
    nz = v != 0
    lead_idx = nz.argmax(axis=-1)
    lead = np.take_along_axis(v, lead_idx[..., None], axis=-1)
    return m.mul(v, m.inv(lead))


def _incidence_counts(F: MultiPoly, p: int, e: int):
    """(#proj V, #proj points with grad = 0, Counter of F_p-rational directions)."""
    m = build_extension(p, e)
    grads = gradient(F)
    n_v = 0
    n_sing = 0
    dirs = Counter()
    for block in projective_points(m, F.nvars):
        on_v = block[eval_array(F, block, m) == 0]
        if not on_v.shape[0]:
            continue
        n_v += on_v.shape[0]
        G = np.stack([eval_array(g, on_v, m) for g in grads], axis=1)
        zero = ~G.any(axis=1)
        n_sing += int(zero.sum())
        G = normalize_direction(G[~zero], m)
        rational = (G < p).all(axis=1)
        for row in map(tuple, G[rational].tolist()):
            dirs[row] += 1
    return n_v, n_sing, dirs


def _all_h(p, n):
    return list(itertools.product(range(p), repeat=n))


def build_strata(F: MultiPoly, p: int, kmax: int = 2, method: str = "incidence") -> StrataTable:
    """Dimension estimate of W_{F,h} for every h in F_p^n, and #G_{F,j} for j = 0..n."""
    require_hypotheses(F, p, kmax)
    if F.degree < 2:
        raise HypothesisError("strata need degree >= 2")
    n = F.nvars
    hs = _all_h(p, n)
    rows: dict[tuple[int, ...], DimEstimate] = {}
    if method == "direct":
        for h in hs:
            rows[h] = estimate_dim(WSpec(F, h, p), kmax)
    elif method == "incidence":
        per_e = {e: _incidence_counts(F, p, e) for e in range(1, kmax + 1)}
        fp = build_extension(p, 1)
        for h in hs:
            if any(h):
                key = tuple(int(x) for x in normalize_direction(np.array(h), fp))
            counts = {}
            for e, (n_v, n_sing, dirs) in per_e.items():
                proj = n_v if not any(h) else n_sing + dirs.get(key, 0)
                counts[e] = 1 + (p**e - 1) * proj
            rows[h] = dim_from_counts(counts, p, n)
    else:
        raise ValueError(f"unknown method {method!r}")
    sizes = tuple(sum(1 for r in rows.values() if r.dim_est >= j) for j in range(n + 1))
    return StrataTable(F, p, kmax, rows, sizes)


def min_j(t: StrataTable, h) -> tuple[int, int]:
    """Smallest j with h outside G_{F,j}, and the exponent n + j - 2 of the bound."""
    h = tuple(int(x) for x in h)
    if h not in t.rows:
        raise KeyError(f"{h} is not a reduced vector in F_{t.p}^{t.n}")
    j = t.rows[h].dim_est + 1
    return j, t.n + j - 2


def codim_report(t: StrataTable, series=(), constant: float | None = None) -> CodimReport:
    """Compare #G_{F,j}(F_p) / p^{n-j} across primes.

    The first table in ``[t, *series]`` fixes the reference ratio for each j;
    later primes pass if their ratio stays within twice that reference, or
    within ``constant`` when one is given.
    """
    tables = [t, *series]
    for s in tables[1:]:
        if s.F != t.F or s.kmax != t.kmax:
            raise ValueError("series must share F and kmax")
    ps = [s.p for s in tables]
    if any(b <= a for a, b in zip(ps, ps[1:])):
        raise ValueError("primes must be strictly increasing")
    n = t.n
    ratios, limits, ok = [], [], []
    for j in range(n + 1):
        rj = tuple(s.sizes[j] / s.p ** (n - j) for s in tables)
        lim = constant if constant is not None else 2 * rj[0]
        ratios.append(rj)
        limits.append(lim)
        ok.append(all(r <= lim for r in rj[1:]))
    nesting = all(s.check_nesting() for s in tables)
    return CodimReport(
        F=t.F,
        primes=tuple(ps),
        ratios=tuple(ratios),
        limits=tuple(limits),
        passed_by_j=tuple(ok),
        passed=all(ok) and nesting,
        nesting_ok=nesting,
    )

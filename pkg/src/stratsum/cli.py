"""Command-line front end: ``stratsum {verify,strata,count,corpus}``.

Exit codes: 0 all checks pass, 1 some check failed, 2 the form fails the
hypotheses at a requested prime, 64 usage error.
"""

from __future__ import annotations

import argparse
import csv
import io
import itertools
import json
import sys
from dataclasses import dataclass

import numpy as np

from ._parallel import chunked, ordered_map, resolve_workers
from .corpus import CORPUS
from .expsum import bound_report, sums_bruteforce, sums_reduction
from .ffield import is_prime, prime_square
from .poly import MultiPoly, PolyParseError, analyze_form, parse_poly
from .strata import build_strata, codim_report
from .varieties import count_mod_p2

EXIT_OK, EXIT_FAIL, EXIT_HYPOTHESIS, EXIT_USAGE = 0, 1, 2, 64
DEFAULT_SAMPLES = 500
DEFAULT_SEED = 0


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(EXIT_USAGE)


@dataclass
class RunConfig:
    poly: str
    nvars: int
    primes: tuple[int, ...]
    h_spec: str | None
    seed: int | None
    kmax: int
    threads: int
    fmt: str
    out: str | None


def _parse_primes(text: str) -> tuple[int, ...]:
    try:
        ps = tuple(int(t) for t in text.split(",") if t.strip())
    except ValueError:
        raise UsageError(f"--p expects a comma-separated list of primes, got {text!r}")
    if not ps:
        raise UsageError("--p is empty")
    for p in ps:
        if not is_prime(p):
            raise UsageError(f"{p} is not prime")
    if any(b <= a for a, b in zip(ps, ps[1:])):
        raise UsageError("--p list must be strictly increasing")
    return ps


def select_h(spec: str | None, n: int, p: int, seed: int | None) -> tuple[list[tuple[int, ...]], int | None]:
    """Frequency vectors mod p^2 for ``--h``; returns them sorted, plus the seed used.

    ``all`` is every h; ``random:k`` draws k with the given seed; otherwise the
    value is a ``;``-separated list of comma-separated vectors.  With no
    ``--h``: everything, except for n >= 3 and p >= 7 where 500 seeded draws are
    joined with all h having at most one nonzero coordinate.
    """
    q = p * p
    if spec is None:
        if n >= 3 and p >= 7:
            seed = DEFAULT_SEED if seed is None else seed
            return _sampled(n, q, DEFAULT_SAMPLES, seed, axes=True), seed
        spec = "all"
    if spec == "all":
        return list(itertools.product(range(q), repeat=n)), seed
    if spec.startswith("random:"):
        if seed is None:
            raise UsageError("--seed is required with --h random:k")
        try:
            k = int(spec.split(":", 1)[1])
        except ValueError:
            raise UsageError(f"bad sample size in {spec!r}")
        return _sampled(n, q, k, seed, axes=False), seed
    hs = []
    for chunk in spec.split(";"):
        try:
            h = tuple(int(t) % q for t in chunk.split(","))
        except ValueError:
            raise UsageError(f"bad h vector {chunk!r}")
        if len(h) != n:
            raise UsageError(f"h vector {chunk!r} needs {n} coordinates")
        hs.append(h)
    return sorted(set(hs)), seed


def _sampled(n, q, k, seed, axes):
    rng = np.random.default_rng(seed)
    picks = {tuple(int(v) for v in row) for row in rng.integers(0, q, size=(k, n))}
    if axes:
        picks.add((0,) * n)
        for i in range(n):
            for v in range(1, q):
                h = [0] * n
                h[i] = v
                picks.add(tuple(h))
    return sorted(picks)


def _verify_chunk(args):
    F, p, kmax, table, hs = args
    brute = sums_bruteforce(F, hs, prime_square(p))
    red = sums_reduction(F, hs, p, kmax)
    recs = []
    for h, b, r in zip(hs, brute, red):
        rep = bound_report(F, h, p, kmax, table=table, value=r)
        equal = b.exact == r.exact
        recs.append(
            {
                "p": p,
                "h": list(rep.h),
                "h_mod_p": list(rep.h_mod_p),
                "S_re": _num(r.approx.real),
                "S_im": _num(r.approx.imag),
                "S_abs": _num(r.magnitude),
                "equal_exact": equal,
                "W_count": rep.W_count,
                "bound": rep.bound,
                "j_min": rep.j_min,
                "exponent": rep.exponent,
                "pass": bool(rep.passed and equal),
            }
        )
    return recs


def _num(x: float) -> float:
    x = round(x, 9)
    return 0.0 if x == 0 else x


def _check_form(F: MultiPoly, ps, kmax) -> str | None:
    for p in ps:
        rep = analyze_form(F, p, max(kmax, 2))
        if not rep.hypotheses_ok:
            why = []
            if not rep.homogeneous:
                why.append("not homogeneous")
            if rep.degree < 2:
                why.append("degree < 2")
            if rep.p_divides_d:
                why.append(f"p={p} divides d={rep.degree}")
            if rep.witness is not None:
                e, pt = rep.witness
                why.append(f"singular mod {p}: witness {pt} over F_{p**e}")
            return "; ".join(why)
    return None


def _meta(cfg: RunConfig, seed=None) -> dict:
    return {
        "poly": cfg.poly,
        "nvars": cfg.nvars,
        "p": list(cfg.primes) if len(cfg.primes) > 1 else cfg.primes[0],
        "kmax": cfg.kmax,
        "seed": seed,
    }


def cmd_verify(cfg: RunConfig, F: MultiPoly) -> tuple[int, dict]:
    why = _check_form(F, cfg.primes, cfg.kmax)
    if why:
        return EXIT_HYPOTHESIS, {"run": _meta(cfg, cfg.seed), "error": why}
    records = []
    seed_used = cfg.seed
    for p in cfg.primes:
        table = build_strata(F, p, cfg.kmax)
        hs, seed_used = select_h(cfg.h_spec, F.nvars, p, cfg.seed)
        jobs = [(F, p, cfg.kmax, table, c) for c in chunked(hs, 256)]
        for part in ordered_map(_verify_chunk, jobs, cfg.threads):
            records.extend(part)
    ok = all(r["pass"] and r["equal_exact"] for r in records)
    return (EXIT_OK if ok else EXIT_FAIL), {"run": _meta(cfg, seed_used), "records": records}


def cmd_strata(cfg: RunConfig, F: MultiPoly) -> tuple[int, dict]:
    why = _check_form(F, cfg.primes, cfg.kmax)
    if why:
        return EXIT_HYPOTHESIS, {"run": _meta(cfg), "error": why}
    tables = [build_strata(F, p, cfg.kmax) for p in cfg.primes]
    out_tables = []
    for t in tables:
        out_tables.append(
            {
                "p": t.p,
                "kmax": t.kmax,
                "sizes": list(t.sizes),
                "nesting": t.check_nesting(),
                "rows": [
                    {
                        "h": list(h),
                        "dim_est": r.dim_est,
                        "W_counts": [r.affine_counts[e] for e in sorted(r.affine_counts)],
                    }
                    for h, r in t.rows.items()
                ],
            }
        )
    codim = None
    ok = all(t.check_nesting() for t in tables)
    if len(tables) > 1:
        rep = codim_report(tables[0], tables[1:])
        codim = {
            "primes": list(rep.primes),
            "by_j": [
                {"j": j, "ratios": [_num(r) for r in rep.ratios[j]], "limit": _num(rep.limits[j]), "pass": rep.passed_by_j[j]}
                for j in range(F.nvars + 1)
            ],
            "pass": rep.passed,
        }
        ok = ok and rep.passed
    return (EXIT_OK if ok else EXIT_FAIL), {"run": _meta(cfg), "tables": out_tables, "codim": codim}


def cmd_count(cfg: RunConfig, F: MultiPoly) -> tuple[int, dict]:
    why = _check_form(F, cfg.primes, cfg.kmax)
    if why:
        return EXIT_HYPOTHESIS, {"run": _meta(cfg), "error": why}
    n = F.nvars
    rows = []
    for p in cfg.primes:
        lc = count_mod_p2(F, p, max(cfg.kmax, 2), cfg.threads)
        rows.append(
            {
                "p": p,
                "N1": lc.n1,
                "N2_enum": lc.n2_enum,
                "N2_formula": lc.n2_formula,
                "agree": lc.agree,
                "weil_deviation": _num(abs(lc.n1 - p ** (n - 1)) / p ** ((n - 1) / 2)),
            }
        )
    ok = all(r["agree"] for r in rows)
    return (EXIT_OK if ok else EXIT_FAIL), {"run": _meta(cfg), "counts": rows}


def cmd_corpus() -> dict:
    return {
        "forms": [
            {
                "name": c.name,
                "poly": c.text,
                "nvars": c.nvars,
                "degree": c.degree,
                "description": c.description,
                "primes": list(c.primes),
            }
            for c in CORPUS
        ]
    }


# -- rendering ----------------------------------------------------------------

def _flat_rows(command: str, doc: dict) -> list[dict]:
    if "error" in doc:
        return [{"error": doc["error"]}]
    if command == "verify":
        return [{k: (" ".join(map(str, v)) if isinstance(v, list) else v) for k, v in r.items()} for r in doc["records"]]
    if command == "count":
        return doc["counts"]
    if command == "corpus":
        return [{**f, "primes": " ".join(map(str, f["primes"]))} for f in doc["forms"]]
    rows = []
    for t in doc["tables"]:
        for j, size in enumerate(t["sizes"]):
            rows.append({"p": t["p"], "j": j, "size": size, "ratio": _num(size / t["p"] ** (len(t["sizes"]) - 1 - j))})
    if doc["codim"]:
        lim = {d["j"]: d for d in doc["codim"]["by_j"]}
        for r in rows:
            r["limit"] = lim[r["j"]]["limit"]
            r["codim_pass"] = lim[r["j"]]["pass"]
    return rows


def render(command: str, doc: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(doc, indent=2) + "\n"
    rows = _flat_rows(command, doc)
    if fmt == "csv":
        buf = io.StringIO()
        if rows:
            w = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
            w.writeheader()
            w.writerows(rows)
        return buf.getvalue()
    lines = []
    if "run" in doc:
        lines.append("  ".join(f"{k}={v}" for k, v in doc["run"].items()))
    if rows:
        cols = list(rows[0])
        widths = {c: max(len(c), *(len(str(r.get(c, ""))) for r in rows)) for c in cols}
        lines.append("  ".join(c.rjust(widths[c]) for c in cols))
        for r in rows:
            lines.append("  ".join(str(r.get(c, "")).rjust(widths[c]) for c in cols))
    if doc.get("codim") is not None:
        lines.append(f"codimension check: {'pass' if doc['codim']['pass'] else 'FAIL'}")
    return "\n".join(lines) + "\n"


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="stratsum", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name in ("verify", "strata", "count"):
        sp = sub.add_parser(name)
        sp.add_argument("--poly", required=True)
        sp.add_argument("--nvars", type=int, required=True)
        sp.add_argument("--p", required=True, help="prime or comma-separated increasing primes")
        sp.add_argument("--h", default=None, help="all | random:K | 'h1,h2;h1,h2;...'")
        sp.add_argument("--seed", type=int, default=None)
        sp.add_argument("--kmax", type=int, default=2)
        sp.add_argument("--threads", type=int, default=None)
        sp.add_argument("--format", choices=("json", "csv", "human"), default="human")
        sp.add_argument("--out", default=None)
    sp = sub.add_parser("corpus")
    sp.add_argument("--format", choices=("json", "csv", "human"), default="human")
    sp.add_argument("--out", default=None)
    return ap


def _emit(text: str, out: str | None):
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "corpus":
        _emit(render("corpus", cmd_corpus(), args.format), args.out)
        return EXIT_OK
    try:
        if args.nvars < 1:
            raise UsageError("--nvars must be >= 1")
        if not 1 <= args.kmax <= 4:
            raise UsageError("--kmax must be in 1..4")
        cfg = RunConfig(
            poly=args.poly,
            nvars=args.nvars,
            primes=_parse_primes(args.p),
            h_spec=args.h,
            seed=args.seed,
            kmax=args.kmax,
            threads=resolve_workers(args.threads),
            fmt=args.format,
            out=args.out,
        )
        F = parse_poly(cfg.poly, cfg.nvars)
        if args.command == "verify":
            # validate the h selection before any heavy work
            select_h(cfg.h_spec, cfg.nvars, cfg.primes[0], cfg.seed)
    except PolyParseError as exc:
        print(f"stratsum: error: cannot parse polynomial: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (UsageError, ValueError) as exc:
        print(f"stratsum: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    handler = {"verify": cmd_verify, "strata": cmd_strata, "count": cmd_count}[args.command]
    code, doc = handler(cfg, F)
    if code == EXIT_HYPOTHESIS:
        print(f"stratsum: hypotheses fail: {doc['error']}", file=sys.stderr)
    _emit(render(args.command, doc, cfg.fmt), cfg.out)
    return code


if __name__ == "__main__":
    sys.exit(main())

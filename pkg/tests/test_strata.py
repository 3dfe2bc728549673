import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from stratsum.poly import HypothesisError, parse_poly
from stratsum.strata import build_strata, codim_report, min_j

CONIC = parse_poly("x1^2+x2^2", 2)
FERMAT = parse_poly("x1^3+x2^3+x3^3", 3)
CYCLIC = parse_poly("x1^2x2 + x2^2x3 + x3^2x1", 3)

BINARY = {
    "x1**2+x2**2": (3, 5, 7, 11, 13),
    "x1**3+x2**3": (5, 7, 11, 13),
    "x1**4+x2**4": (3, 5, 7, 13, 17),
}


def binary_g1_oracle(text, p):
    # For n = 2, Euler's relation puts grad F(v) on the line v^perp, so any line
    # in W_{F,h} with h != 0 is F_p-rational: h is in G_1 iff W has a nonzero F_p-point.
    P = oracles.sym(text, 2)
    return sorted(
        h for h in itertools.product(range(p), repeat=2)
        if not any(h) or len(oracles.w_points_fp(P, 2, h, p)) > 1
    )


def test_conic_p5():
    t = build_strata(CONIC, 5)
    assert t.sizes == (25, 9, 0)
    # the two rational lines x2 = 2 x1 and x2 = 3 x1 contribute their gradient directions
    assert sorted(t.members(1)) == [(0, 0), (1, 2), (1, 3), (2, 1), (2, 4), (3, 1), (3, 4), (4, 2), (4, 3)]


def test_conic_p3_has_trivial_g1():
    t = build_strata(CONIC, 3)
    assert t.sizes == (9, 1, 0)


def test_binary_cubic_p7():
    t = build_strata(parse_poly("x1^3+x2^3", 2), 7)
    assert t.sizes[1] == 19


@pytest.mark.parametrize("text, p", [(k, p) for k, ps in BINARY.items() for p in ps])
def test_binary_g1_matches_oracle(text, p):
    t = build_strata(parse_poly(text.replace("**", "^"), 2), p)
    assert sorted(t.members(1)) == binary_g1_oracle(text, p)
    assert t.sizes[2] == 0


def test_fermat_p5():
    t = build_strata(FERMAT, 5)
    assert t.sizes == (125, 25, 1, 0)
    assert t.members(2) == [(0, 0, 0)]


@pytest.mark.parametrize("F, p", [(CONIC, 5), (CONIC, 7), (parse_poly("x1^3+x2^3", 2), 7), (FERMAT, 5), (CYCLIC, 5)])
def test_incidence_equals_direct(F, p):
    a = build_strata(F, p, method="incidence")
    b = build_strata(F, p, method="direct")
    assert a.sizes == b.sizes
    assert {h: r.dim_est for h, r in a.rows.items()} == {h: r.dim_est for h, r in b.rows.items()}


def test_unknown_method():
    with pytest.raises(ValueError):
        build_strata(CONIC, 5, method="guess")


def test_hypotheses_enforced():
    with pytest.raises(HypothesisError):
        build_strata(FERMAT, 3)
    with pytest.raises(HypothesisError):
        build_strata(CONIC, 2)


@pytest.mark.parametrize("F, p", [(CONIC, 13), (FERMAT, 7), (CYCLIC, 7), (parse_poly("x1^4+x2^4+x3^4", 3), 5)])
def test_structural_invariants(F, p):
    t = build_strata(F, p)
    n = F.nvars
    assert t.check_nesting()
    assert t.sizes[0] == p**n and t.sizes[n] == 0
    for j in range(n):
        assert (0,) * n in t.members(j)
    # G_j is a union of lines through the origin
    for h, r in t.rows.items():
        for lam in range(2, p):
            assert t.rows[tuple(lam * x % p for x in h)].dim_est == r.dim_est


@given(st.sampled_from([5, 7, 11]), st.integers(0, 10**6), st.integers(0, 10**6), st.integers(1, 10))
@settings(max_examples=40, deadline=None)
def test_scale_invariance_property(p, a, b, lam):
    t = build_strata(FERMAT, p)
    h = (a % p, b % p, (a + b) % p)
    if lam % p == 0:
        lam += 1
    assert t.rows[h].dim_est == t.rows[tuple(lam * x % p for x in h)].dim_est


def test_min_j_examples():
    t = build_strata(CONIC, 5)
    assert min_j(t, (1, 0)) == (1, 1)
    assert min_j(t, (1, 2)) == (2, 2)
    assert min_j(t, (0, 0)) == (2, 2)
    t = build_strata(FERMAT, 5)
    assert min_j(t, (1, 1, 1)) == (1, 2)
    assert min_j(t, (0, 0, 0)) == (3, 4)
    with pytest.raises(KeyError):
        min_j(t, (5, 0, 0))


def test_codim_conic_inert_primes():
    # p = 3 mod 4: V has no rational lines, G_1 = {0}, ratio 1/p
    tabs = [build_strata(CONIC, p) for p in (3, 7, 11)]
    rep = codim_report(tabs[0], tabs[1:])
    assert rep.ratios[0] == (1.0, 1.0, 1.0)
    assert rep.ratios[1] == pytest.approx((1 / 3, 1 / 7, 1 / 11))
    assert rep.passed and rep.nesting_ok


def test_codim_conic_split_prime_exceeds_twice_reference():
    tabs = [build_strata(CONIC, p) for p in (3, 5, 7, 11)]
    rep = codim_report(tabs[0], tabs[1:])
    assert rep.ratios[1][1] == pytest.approx(9 / 5)
    assert not rep.passed_by_j[1] and not rep.passed


def test_codim_fermat():
    tabs = [build_strata(FERMAT, p) for p in (5, 7, 11)]
    rep = codim_report(tabs[0], tabs[1:])
    assert rep.ratios[1][0] == 1.0 and rep.ratios[2][0] == pytest.approx(1 / 5)
    assert rep.passed


def test_codim_explicit_constant():
    tabs = [build_strata(CONIC, p) for p in (3, 5)]
    assert codim_report(tabs[0], tabs[1:], constant=2.0).passed


def test_codim_errors():
    with pytest.raises(ValueError):
        codim_report(build_strata(CONIC, 5), [build_strata(CONIC, 3)])
    with pytest.raises(ValueError):
        codim_report(build_strata(CONIC, 5), [build_strata(parse_poly("x1^4+x2^4", 2), 7)])
    with pytest.raises(ValueError):
        codim_report(build_strata(CONIC, 5, kmax=2), [build_strata(CONIC, 7, kmax=3)])

import itertools

import numpy as np
import pytest

import oracles
from stratsum.ffield import (
    ModulusSpec,
    affine_points,
    build_extension,
    enumerate_field,
    ext_arith,
    is_irreducible,
    prime_field,
    prime_square,
    projective_points,
)

SMALL_FIELDS = [(2, 2), (2, 3), (3, 2), (5, 2)]


def elems(m):
    return [m.to_coeffs(a) for a in enumerate_field(m)]


def test_first_irreducible_quadratic_mod_3():
    m = build_extension(3, 2)
    assert m.modulus_poly == (1, 0, 1)
    assert m.q == 9


def test_degree_one_is_the_prime_field():
    m = build_extension(5, 1)
    assert m.kind == "prime-field" and m.q == 5 and m.modulus_poly is None


@pytest.mark.parametrize("p, e", [(2, 2), (2, 3), (3, 2), (3, 3), (5, 2), (5, 3), (7, 2)])
def test_modulus_is_lex_first_irreducible(p, e):
    # degree <= 3: irreducible iff rootless, an independent criterion
    first = next(
        list(reversed(t)) + [1]
        for t in itertools.product(range(p), repeat=e)
        if oracles.irreducible_by_roots(list(reversed(t)) + [1], p)
    )
    m = build_extension(p, e)
    assert list(m.modulus_poly) == first
    assert m.q == p**e


def test_cubic_over_f2():
    assert build_extension(2, 3).modulus_poly == (1, 1, 0, 1)  # x^3 + x + 1


def test_quartic_irreducibility_sees_quadratic_factors():
    # (x^2+x+1)^2 = x^4 + x^2 + 1 over F_2 has no roots but is reducible
    assert not is_irreducible([1, 0, 1, 0, 1], 2)
    assert build_extension(2, 4).modulus_poly == (1, 1, 0, 0, 1)


def test_build_extension_errors():
    with pytest.raises(ValueError):
        build_extension(4, 2)
    with pytest.raises(ValueError):
        build_extension(3, 5)
    with pytest.raises(ValueError):
        ModulusSpec("extension-field", 3, 2, (0, 0, 1))


def test_build_extension_deterministic():
    build_extension.cache_clear()
    a = build_extension(5, 3).modulus_poly
    build_extension.cache_clear()
    assert build_extension(5, 3).modulus_poly == a


def test_mul_example_f9():
    m = build_extension(3, 2)
    assert ext_arith("mul", (1, 1), (1, 1), m) == (0, 2)


@pytest.mark.parametrize("p, e", SMALL_FIELDS)
def test_field_axioms(p, e):
    m = build_extension(p, e)
    E = elems(m)
    zero, one = m.to_coeffs(0), m.to_coeffs(1)
    add = lambda a, b: ext_arith("add", a, b, m)
    mul = lambda a, b: ext_arith("mul", a, b, m)
    for a in E:
        assert add(a, ext_arith("neg", a, m=m)) == zero
        if a != zero:
            assert mul(a, ext_arith("inv", a, m=m)) == one
    sample = E if m.q <= 9 else E[::3]
    for a, b, c in itertools.product(sample, repeat=3):
        assert mul(mul(a, b), c) == mul(a, mul(b, c))
        assert add(add(a, b), c) == add(a, add(b, c))
        assert mul(a, add(b, c)) == add(mul(a, b), mul(a, c))
    for a, b in itertools.product(E, repeat=2):
        assert mul(a, b) == mul(b, a)


def test_inverse_of_zero():
    with pytest.raises(ZeroDivisionError):
        ext_arith("inv", (0, 0), m=build_extension(3, 2))


@pytest.mark.parametrize("p, e", SMALL_FIELDS + [(2, 4), (3, 1), (7, 1)])
def test_frobenius_fixes_everything(p, e):
    m = build_extension(p, e)
    for a in elems(m):
        x = m.to_coeffs(1)
        for _ in range(m.q):
            x = ext_arith("mul", x, a, m)
        assert x == a


@pytest.mark.parametrize("p, e", SMALL_FIELDS + [(7, 2), (3, 1)])
def test_vectorized_ops_match_scalar(p, e):
    m = build_extension(p, e)
    A, B = np.meshgrid(np.arange(m.q), np.arange(m.q), indexing="ij")
    A, B = A.ravel(), B.ravel()
    add, mul = m.add(A, B), m.mul(A, B)
    for a, b, s, t in zip(A, B, add, mul):
        ca, cb = m.to_coeffs(int(a)), m.to_coeffs(int(b))
        assert m.to_coeffs(int(s)) == ext_arith("add", ca, cb, m)
        assert m.to_coeffs(int(t)) == ext_arith("mul", ca, cb, m)
    nz = np.arange(1, m.q)
    assert (m.mul(nz, m.inv(nz)) == 1).all()
    assert (m.add(nz, m.neg(nz)) == 0).all()


def test_enumerate_orders():
    assert list(enumerate_field(prime_field(3))) == [0, 1, 2]
    f9 = build_extension(3, 2)
    listing = list(enumerate_field(f9))
    assert len(set(listing)) == 9 and listing[0] == 0
    assert f9.elem_str(listing[-1]) == "2x+2"
    assert list(enumerate_field(prime_square(3))) == list(range(9))


def test_affine_points_odometer():
    blocks = [b for _, b in affine_points(3, 2, chunk=4)]
    got = [tuple(r) for b in blocks for r in b.tolist()]
    assert got == list(itertools.product(range(3), repeat=2))


def test_projective_points_cover_each_line_once():
    m = build_extension(2, 2)
    reps = np.concatenate(list(projective_points(m, 3)))
    assert reps.shape[0] == (m.q**3 - 1) // (m.q - 1)
    seen = set()
    for row in reps:
        line = frozenset(tuple(int(v) for v in m.mul(np.int64(c), row)) for c in range(1, m.q))
        assert line not in seen
        seen.add(line)
    assert [tuple(r) for r in reps.tolist()] == sorted(tuple(r) for r in reps.tolist())

import random

import pytest

from waringmat.gf import build_field
from waringmat.polyfactor import (
    Poly,
    factor,
    gcd_poly,
    is_irreducible,
    lcm_poly,
    monic_polys,
    squarefree_part,
    xgcd_poly,
    invert_mod,
)

F2 = build_field(2, 1)
F3 = build_field(3, 1)
F4 = build_field(2, 2)
F5 = build_field(5, 1)
F9 = build_field(3, 2)


def test_factor_examples():
    f = Poly.parse(F2, "1 + x + x^2")
    assert is_irreducible(f)
    assert factor(f).factors == ((f, 1),)
    g = Poly.parse(F2, "1 + x^2")
    assert [(str(a), m) for a, m in factor(g).factors] == [("1 + x", 2)]
    h = Poly.parse(F3, "2x + x^3")  # x^3 - x
    assert [str(a) for a, _ in factor(h).factors] == ["x", "1 + x", "2 + x"]


def test_small_contracts():
    assert is_irreducible(Poly.parse(F5, "3 + x"))
    cube = Poly.parse(F5, "4 + x") * Poly.parse(F5, "4 + x") * Poly.parse(F5, "4 + x")
    assert squarefree_part(cube) == Poly.parse(F5, "4 + x")
    assert gcd_poly(Poly.parse(F5, "4 + x^2"), Poly.parse(F5, "4 + x")) == Poly.parse(F5, "4 + x")


def test_factor_random_recompose():
    rnd = random.Random(7)
    for F in (F2, F3, F4, F9, F5):
        for _ in range(200):
            deg = rnd.randrange(1, 8)
            f = Poly.from_codes(F, [rnd.randrange(F.q) for _ in range(deg)] + [1])
            fac = factor(f)
            assert fac.product() == f
            for irr, _ in fac.factors:
                assert is_irreducible(irr)


def test_irreducibility_matches_trial_division():
    for F in (F2, F3, F4):
        for d in (2, 3, 4):
            for cand in monic_polys(F, d):
                has_divisor = False
                for dd in range(1, d // 2 + 1):
                    for g in monic_polys(F, dd):
                        if (cand % g).is_zero():
                            has_divisor = True
                            break
                    if has_divisor:
                        break
                assert is_irreducible(cand) == (not has_divisor), str(cand)


def test_big_path_equal_degree_splitting():
    # force the distinct-degree / seeded equal-degree route
    rnd = random.Random(3)
    for _ in range(5):
        f = Poly.from_codes(F9, [rnd.randrange(9) for _ in range(16)] + [1])
        fac = factor(f)
        assert fac.product() == f
        assert all(is_irreducible(a) for a, _ in fac.factors)


def test_char_p_multiplicities():
    f = Poly.parse(F3, "1 + x^2")
    cube = f * f * f
    fac = factor(cube)
    assert fac.factors == ((f, 3),)
    lin = Poly.parse(F3, "1 + x")
    nine = Poly.one(F3)
    for _ in range(9):
        nine = nine * lin
    assert factor(nine).factors == ((lin, 9),)


def test_parse_print_roundtrip():
    for F in (F5, F9):
        rnd = random.Random(11)
        for _ in range(50):
            f = Poly.from_codes(F, [rnd.randrange(F.q) for _ in range(5)] + [1])
            assert Poly.parse(F, str(f)) == f


def test_xgcd_and_modular_inverse():
    f = Poly.parse(F5, "1 + x + x^2")
    g = Poly.parse(F5, "2 + x^3")
    d, u, v = xgcd_poly(f, g)
    assert u * f + v * g == d
    mod = Poly.parse(F5, "1 + x + x^4")
    h = Poly.parse(F5, "3 + 2x")
    hi = invert_mod(h, mod)
    assert ((h * hi) % mod) == Poly.one(F5)


def test_lcm():
    a = Poly.parse(F3, "1 + x")
    b = Poly.parse(F3, "2 + x")
    assert lcm_poly(a * a, a * b) == a * a * b


def test_factor_rejects_nonmonic():
    with pytest.raises(ValueError):
        factor(Poly.parse(F5, "1 + 2x"))

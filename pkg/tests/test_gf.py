import random
from math import gcd

import pytest
from hypothesis import given, settings, strategies as st

from waringmat.errors import DegreeZero, NotPrime
from waringmat.gf import (
    ExtensionField,
    build_field,
    embed_scalar,
    joly_count,
    joly_counts_all,
    parse_field,
    scalar_profile,
    two_power_solve,
    _kth_root_large,
)

from conftest import prime_powers


def test_canonical_moduli():
    assert build_field(2, 1).modulus == (0, 1)
    assert build_field(2, 2).modulus == (1, 1, 1)  # only irreducible quadratic
    # lex scan over GF(3): x^2, x^2+x, x^2+2x reducible; x^2+1 irreducible
    assert build_field(3, 2).modulus == (1, 0, 1)


def test_build_field_errors():
    with pytest.raises(NotPrime):
        build_field(6, 1)
    with pytest.raises(DegreeZero):
        build_field(5, 0)


def test_parse_field():
    assert parse_field("3^2") is build_field(3, 2)
    assert parse_field("7") is build_field(7, 1)
    assert parse_field("7^1").q == 7


@settings(max_examples=200, deadline=None)
@given(st.sampled_from([(2, 2), (3, 2), (5, 1), (2, 4), (7, 2)]), st.data())
def test_field_axioms(pl, data):
    F = build_field(*pl)
    a = data.draw(st.integers(0, F.q - 1))
    b = data.draw(st.integers(0, F.q - 1))
    c = data.draw(st.integers(0, F.q - 1))
    assert F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c))
    assert F.add(a, F.neg(a)) == 0
    assert F.mul(F.mul(a, b), c) == F.mul(a, F.mul(b, c))
    if a:
        assert F.mul(a, F.inv(a)) == 1


def test_element_literals():
    F9 = build_field(3, 2)
    e = F9.elem("1+2g")
    assert e.coeffs == (1, 2)
    assert str(e) == "1+2g"
    assert F9.elem(str(e)) == e
    assert F9.elem(4).code == 1  # integers live in the prime subfield
    F7 = build_field(7, 1)
    assert str(F7.elem(5)) == "5"
    e = F9.elem("g") * F9.elem("g")  # g^2 = -1 = 2 for modulus x^2 + 1
    assert e == F9.elem(2)


def test_scalar_profile_gf7_cubes():
    F = build_field(7, 1)
    prof = scalar_profile(F, 3)
    assert prof.d == 3
    assert sorted(prof.residues) == [0, 1, 6]
    assert prof.gamma == 3  # {0,1,6} -> {0,1,2,5,6} -> all of F_7
    assert prof.ell == 1


def test_scalar_profile_k1():
    F = build_field(5, 1)
    prof = scalar_profile(F, 1)
    assert prof.d == 1 and prof.gamma == 1 and prof.ell == 1
    assert prof.residues == frozenset(range(5))


def test_scalar_profile_gf4_subfield_span():
    F = build_field(2, 2)
    prof = scalar_profile(F, 3, mmax=2)
    assert prof.d == 3
    assert prof.d_m == (3, 3)
    assert sorted(prof.residues) == [0, 1]
    assert prof.ell == 1 and prof.ell < F.l  # cubes span only GF(2)


def test_profile_k_split():
    F = build_field(7, 1)
    prof = scalar_profile(F, 12)  # q-1 = 6: k1 collects 2 and 3
    assert prof.k1 * prof.k2 == 12
    assert gcd(prof.k2, 6) == 1
    for r in (2, 3):
        assert prof.k1 % r == 0


def test_power_sets_match_effective_exponent():
    # {a^k} = {a^(d_m)} in every enumerable extension
    for (p, l, kset) in [(2, 8, (6, 12)), (3, 5, (2, 30)), (5, 4, (3, 8)), (7, 3, (21,)), (2, 14, (3,))]:
        E = build_field(p, l)
        for k in kset:
            d = gcd(k, E.q - 1)
            assert E.kth_powers(k) == E.kth_powers(d)


def test_two_power_examples():
    F7 = build_field(7, 1)
    assert two_power_solve(F7, 3, 3) is None  # sums of two cubes miss 3
    x, y = two_power_solve(F7, 2, 3)
    assert F7.add(F7.pow(x, 3), F7.pow(y, 3)) == 2
    # y = 0 admissible when b is itself a power
    F5 = build_field(5, 1)
    x, y = two_power_solve(F5, F5.pow(3, 4), 4)
    assert F5.add(F5.pow(x, 4), F5.pow(y, 4)) == F5.pow(3, 4)


def test_two_power_with_exclusions_gf37():
    F = build_field(37, 1)
    sol = two_power_solve(F, 1, 3, exclude_x={0}, exclude_y={0, 1})
    assert sol is not None
    x, y = sol
    assert x != 0 and y not in (0, 1)
    assert F.add(F.pow(x, 3), F.pow(y, 3)) == 1
    assert 37 >= (3 - 1) ** 4 + 6 * 3  # inside the guaranteed regime


def test_two_power_guarantee_exhaustive():
    # no misses when q > (d-1)^4 + 2(|E1|+|E2|) d and b != 0
    for q, p, l in prime_powers(128):
        F = build_field(p, l)
        for d in (1, 2, 3, 4):
            if (q - 1) % d:
                continue
            for E1, E2 in (((), ()), ((0,), (0,)), ((0,), (0, 1))):
                if q <= (d - 1) ** 4 + 2 * (len(E1) + len(E2)) * d:
                    continue
                for b in range(1, q):
                    assert two_power_solve(F, b, d, E1, E2) is not None, (q, d, b)


def test_joly_count_examples():
    F7 = build_field(7, 1)
    res = joly_count(F7, 3, (3, 3))
    assert res.n_solutions == 0 and res.delta == 4 and res.residual == 7
    assert res.bound_holds(7, 2)  # 49 <= 16 * 7
    res = joly_count(F7, 2, (3, 3))
    assert res.n_solutions == 9
    # affine line for k = 1
    F5 = build_field(5, 1)
    res = joly_count(F5, 2, (1, 1))
    assert res.n_solutions == 5 and res.delta == 0


def test_joly_count_matches_nested_loops():
    F = build_field(7, 1)
    for ks in ((3, 3), (2, 3), (3, 2, 2)):
        vec = joly_counts_all(F, ks)
        for b in range(7):
            brute = 0
            import itertools

            for xs in itertools.product(range(7), repeat=len(ks)):
                s = 0
                for x, k in zip(xs, ks):
                    s = F.add(s, F.pow(x, k))
                if s == b:
                    brute += 1
            assert vec[b] == brute


def test_embed_scalar():
    F2 = build_field(2, 1)
    emb = embed_scalar(F2, 2)
    assert emb.matrix_rows(emb.embed(1)) == ((1, 0), (0, 1))
    # the extension generator maps to the companion matrix of x^2 + x + 1
    assert emb.matrix_rows(2) == ((0, 1), (1, 1))
    rnd = random.Random(0)
    F3 = build_field(3, 1)
    emb = embed_scalar(F3, 3)
    E = emb.ext
    for _ in range(100):
        a = rnd.randrange(E.size)
        b = rnd.randrange(E.size)
        Ma = emb.matrix(a)
        Mb = emb.matrix(b)
        assert Ma * Mb == emb.matrix(E.mul(a, b))
        assert Ma + Mb == emb.matrix(E.add(a, b))


def test_extension_field_arithmetic():
    F4 = build_field(2, 2)
    E = ExtensionField(F4, 3)  # F_64 over F_4
    assert E.size == 64
    rnd = random.Random(1)
    for _ in range(100):
        a, b = rnd.randrange(64), rnd.randrange(64)
        assert E.mul(a, b) == E.mul(b, a)
        if a:
            assert E.mul(a, E.inv(a)) == 1
        assert E.pow(a, 63) in (0, 1)


def test_large_field_kth_root_against_enumeration():
    # the table-free root extractor agrees with exhaustive enumeration
    F = build_field(3, 1)
    E = ExtensionField(F, 4)  # 81 elements: both paths feasible
    for k in (2, 4, 5, 8, 16):
        for a in range(0, E.size, 7):
            want = sorted(x for x in range(E.size) if E.pow(x, k) == a)
            got = _kth_root_large(E, a, k)
            if want:
                assert got in want
            else:
                assert got is None


def test_large_extension_two_power():
    # beyond the enumeration limit: constructive scan with algebraic roots
    F = build_field(3, 1)
    E = ExtensionField(F, 12)  # 531441 elements
    sol = two_power_solve(E, 7, 5)
    assert sol is not None
    x, y = sol
    assert E.add(E.pow(x, 5), E.pow(y, 5)) == 7

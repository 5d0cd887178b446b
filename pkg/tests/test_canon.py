import random

import pytest

from waringmat.errors import NotIrreducible
from waringmat.gf import build_field
from waringmat.matgf import Mat, char_poly, enumerate_matrices, min_poly
from waringmat.polyfactor import Poly, lcm_poly
from waringmat.canon import gj_block, gj_form, gj_key, is_quasi_eligible, sim_transform

from conftest import rand_mat

F2 = build_field(2, 1)
F3 = build_field(3, 1)
F4 = build_field(2, 2)


def test_gj_block_examples():
    assert gj_block(Poly.x(F3), 1) == Mat.zero(F3, 1)
    assert gj_block(Poly.parse(F2, "1 + x + x^2"), 1).rows == ((0, 1), (1, 1))
    assert gj_block(Poly.parse(F3, "2 + x"), 2).rows == ((1, 1), (0, 1))
    with pytest.raises(NotIrreducible):
        gj_block(Poly.parse(F2, "1 + x^2"), 1)


def test_gj_block_shape_with_links():
    f = Poly.parse(F2, "1 + x + x^2")
    J = gj_block(f, 2)
    assert J.rows == (
        (0, 1, 1, 0),
        (1, 1, 0, 1),
        (0, 0, 0, 1),
        (0, 0, 1, 1),
    )


def test_gj_form_known_structure():
    M5 = Mat(F2, [[1, 0, 0], [0, 0, 1], [0, 0, 0]])
    form = gj_form(M5)
    assert [(str(f), m) for f, m in form.blocks] == [("x", 2), ("1 + x", 1)]
    assert form.transform * M5 * form.transform.inverse() == form.block_diagonal()


def test_gj_identity():
    form = gj_form(Mat.identity(F3, 3))
    assert all(str(f) == "2 + x" and m == 1 for f, m in form.blocks)


def test_gj_roundtrip_exhaustive_small():
    # gj_form internally asserts g A g^{-1} equals the block diagonal
    for F, n in ((F2, 2), (F3, 2), (F4, 2), (F2, 3), (F3, 3)):
        for A in enumerate_matrices(F, n):
            form = gj_form(A)
            assert gj_key(A) == form.key()
            mu = min_poly(A)
            chi = char_poly(A)
            lc = Poly.one(F)
            pr = Poly.one(F)
            for f, m in form.blocks:
                fm = Poly.one(F)
                for _ in range(m):
                    fm = fm * f
                lc = lcm_poly(lc, fm)
                pr = pr * fm
            assert lc == mu and pr == chi


def test_gj_roundtrip_exhaustive_3x3_gf4():
    for A in enumerate_matrices(F4, 3):
        gj_form(A)  # internal exactness assert


def test_gj_random_larger():
    rnd = random.Random(5)
    for _ in range(2000):
        p, l, n = rnd.choice([(2, 1, 5), (3, 1, 4), (2, 2, 3), (5, 1, 4), (3, 2, 3), (2, 1, 8), (7, 1, 3)])
        F = build_field(p, l)
        A = rand_mat(F, n, rnd)
        form = gj_form(A)
        assert gj_key(A) == form.key()


def test_gj_canonical_ordering_deterministic():
    rnd = random.Random(6)
    A = rand_mat(F3, 4, rnd)
    k1 = gj_form(A).key()
    k2 = gj_form(A).key()
    assert k1 == k2
    # conjugates share the key
    g = None
    while g is None or not g.is_invertible():
        g = rand_mat(F3, 4, rnd)
    assert gj_key(g * A * g.inverse()) == gj_key(A)


def test_sim_transform():
    A = Mat(F3, [[1, 1], [0, 1]])
    B = Mat(F3, [[1, 0], [1, 1]])
    g = sim_transform(A, B)
    assert g * A * g.inverse() == B
    with pytest.raises(ValueError):
        sim_transform(A, Mat.identity(F3, 2))


def test_quasi_eligible():
    assert not is_quasi_eligible(Mat.scalar(F3, 2, 2))
    assert is_quasi_eligible(Mat(F3, [[1, 1], [0, 1]]))
    assert is_quasi_eligible(gj_block(Poly.parse(F2, "1 + x + x^2"), 1))


def test_gjform_json():
    import json

    form = gj_form(Mat(F3, [[1, 1], [0, 1]]))
    obj = json.loads(form.to_json())
    assert obj["blocks"] == [{"f": "2 + x", "m": 2}]
    assert "transform" in obj

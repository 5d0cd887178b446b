import itertools
import random

import pytest

from waringmat.errors import NotCyclic, ScalarInput, TraceMismatch
from waringmat.gf import build_field
from waringmat.matgf import Mat, enumerate_matrices, is_scalar
from waringmat.polyfactor import Poly
from waringmat.canon import gj_block
from waringmat.cyclic import (
    cyclic_lu_split,
    cyclic_with_diagonal,
    find_cyclic_vector,
    lu_split_semisimple_conditions,
    quasi_cyclic_with_diagonal,
)

from conftest import rand_mat

F2 = build_field(2, 1)
F3 = build_field(3, 1)
F5 = build_field(5, 1)


def test_find_cyclic_vector_companion():
    A = Mat.companion(Poly.parse(F5, "1 + 2x + x^3"))
    assert find_cyclic_vector(A) == [1, 0, 0]
    J = gj_block(Poly.parse(F2, "1 + x + x^2"), 2)
    assert find_cyclic_vector(J) == [1, 0, 0, 0]
    with pytest.raises(NotCyclic):
        find_cyclic_vector(Mat.identity(F3, 2))


def test_cyclic_with_diagonal_recovers_companion():
    A = Mat.companion(Poly.parse(F5, "2 + x + 3x^2 + x^4"))
    u = (0, 0, 0, A.trace())
    g, a = cyclic_with_diagonal(A, u)
    assert g == Mat.identity(F5, 4)
    assert g * A * g.inverse() == A


def test_cyclic_with_diagonal_gf2_example():
    A = gj_block(Poly.parse(F2, "1 + x + x^2"), 1)
    g, a = cyclic_with_diagonal(A, (1, 0))
    M = g * A * g.inverse()
    assert M.rows[0][0] == 1 and M.rows[1][1] == 0 and M.rows[1][0] == 1


def test_cyclic_with_diagonal_known_conjugate():
    rnd = random.Random(2)
    for _ in range(50):
        F = build_field(*rnd.choice([(3, 1), (5, 1), (2, 2)]))
        n = rnd.randrange(2, 6)
        A = rand_mat(F, n, rnd)
        from waringmat.matgf import min_poly

        if min_poly(A).degree() != n:
            continue
        g0 = rand_mat(F, n, rnd)
        if not g0.is_invertible():
            continue
        u = (g0 * A * g0.inverse()).diag_codes()
        g, a = cyclic_with_diagonal(A, u)
        assert (g * A * g.inverse()).diag_codes() == u


def test_cyclic_errors():
    A = Mat.companion(Poly.parse(F5, "1 + x^2"))
    with pytest.raises(TraceMismatch):
        cyclic_with_diagonal(A, (1, 1))
    with pytest.raises(NotCyclic):
        cyclic_with_diagonal(Mat.identity(F5, 2), (1, 1))


def test_quasi_cyclic_exhaustive_2x2():
    for F in (F2, F3):
        for A in enumerate_matrices(F, 2):
            if is_scalar(A):
                continue
            tr = A.trace()
            for u0 in range(F.q):
                u = (u0, F.sub(tr, u0))
                g = quasi_cyclic_with_diagonal(A, u)
                assert (g * A * g.inverse()).diag_codes() == u


def test_quasi_cyclic_rank_one_shape():
    # Diag(1,0,0) over GF(3) with target (2,2,0): the rank-one escape
    A = Mat.diag(F3, [1, 0, 0])
    g = quasi_cyclic_with_diagonal(A, (2, 2, 0))
    assert (g * A * g.inverse()).diag_codes() == (2, 2, 0)


def test_quasi_cyclic_deadlock_shape():
    # Diag(J_3(1), 1) over GF(2) with constant zero target
    blk = Mat(F2, [[1, 1, 0], [0, 1, 1], [0, 0, 1]])
    A = Mat.block_diag([blk, Mat.identity(F2, 1)])
    g = quasi_cyclic_with_diagonal(A, (0, 0, 0, 0))
    assert (g * A * g.inverse()).diag_codes() == (0, 0, 0, 0)


def test_quasi_cyclic_scalar_rejected():
    with pytest.raises(ScalarInput):
        quasi_cyclic_with_diagonal(Mat.identity(F3, 2), (0, 2))
    with pytest.raises(ScalarInput):
        quasi_cyclic_with_diagonal(Mat.identity(F3, 2), (1, 1))


def test_quasi_cyclic_structured_families():
    # jordan-plus-scalar shapes with constant and generic targets
    for (p, mm, jj) in [(2, 3, 1), (2, 3, 3), (3, 4, 2), (2, 5, 1), (3, 3, 3), (5, 2, 3)]:
        F = build_field(p, 1)
        for r in range(F.q):
            blk_rows = [[r if i == j else (1 if j == i + 1 else 0) for j in range(mm)] for i in range(mm)]
            A = Mat.block_diag([Mat(F, blk_rows), Mat.scalar(F, jj, r)])
            n = A.n
            tr = A.trace()
            for c in range(F.q):
                s = 0
                for _ in range(n):
                    s = F.add(s, c)
                if s == tr:
                    u = (c,) * n
                    g = quasi_cyclic_with_diagonal(A, u)
                    assert (g * A * g.inverse()).diag_codes() == u


def test_cyclic_lu_split_patterns():
    A = Mat.companion(Poly.parse(F5, "1 + 2x + 3x^2 + x^3"))
    e = (1, 0, 1)
    u = (0, 1, F5.sub(A.trace(), 3))
    sp = cyclic_lu_split(A, e, u)
    n = 3
    # odd n: B takes the even subdiagonal slots, C the odd ones plus the column
    assert sp.B.rows[1][0] == 0 and sp.B.rows[2][1] == 1
    assert sp.C.rows[1][0] == 1 and sp.C.rows[2][1] == 0
    assert sp.B.diag_codes() == e and sp.C.diag_codes() == u
    for i in range(n):
        for j in range(n):
            if i != j and j != i - 1 and j != n - 1:
                assert sp.B.rows[i][j] == 0 and sp.C.rows[i][j] == 0
    assert sp.B + sp.C == sp.g * A * sp.g.inverse()


def test_cyclic_lu_split_even_pattern():
    A = Mat.companion(Poly.parse(F5, "1 + x + x^2 + 2x^3 + x^4"))
    e = (1, 1, 1, 1)
    u = (0, 0, 0, F5.sub(A.trace(), 4))
    sp = cyclic_lu_split(A, e, u)
    assert sp.B.rows[1][0] == 1 and sp.B.rows[2][1] == 0 and sp.B.rows[3][2] == 1
    assert sp.C.rows[1][0] == 0 and sp.C.rows[2][1] == 1 and sp.C.rows[3][2] == 0


def test_cyclic_lu_split_degenerate_plan():
    A = Mat.companion(Poly.parse(F5, "2 + x + x^3"))
    g0, _ = cyclic_with_diagonal(A, (1, 2, F5.sub(A.trace(), 3)))
    e = (1, 2, F5.sub(A.trace(), 3))
    u = (0, 0, 0)
    sp = cyclic_lu_split(A, e, u)
    assert sp.C.diag_codes() == (0, 0, 0)  # nilpotent-patterned side
    assert sp.B.diag_codes() == e


def test_decompex_eigenspace_dimensions():
    # 6x6 display over GF(5): eigenspace dimensions of the two banded
    # summands add up to 6 under the distinctness conditions
    F = F5

    def eigdims(M):
        out = {}
        for lam in range(5):
            d = len((M - Mat.scalar(F, M.n, lam)).nullspace())
            if d:
                out[lam] = d
        return out

    B = Mat(F, [
        [1, 0, 0, 0, 0, 0],
        [1, 0, 0, 0, 0, 0],
        [0, 0, 2, 0, 0, 0],
        [0, 0, 1, 0, 0, 0],
        [0, 0, 0, 0, 2, 0],
        [0, 0, 0, 0, 1, 0],
    ])
    assert eigdims(B) == {0: 3, 1: 1, 2: 2}
    rnd = random.Random(0)
    for _ in range(5):
        a = [rnd.randrange(5) for _ in range(5)]
        C = Mat(F, [
            [0, 0, 0, 0, 0, a[0]],
            [0, 1, 0, 0, 0, a[1]],
            [0, 1, 0, 0, 0, a[2]],
            [0, 0, 0, 2, 0, a[3]],
            [0, 0, 0, 1, 0, a[4]],
            [0, 0, 0, 0, 0, 3],
        ])
        assert eigdims(C) == {0: 3, 1: 1, 2: 1, 3: 1}


def test_lu_split_conditions_match_predicates():
    from waringmat.matgf import is_split_semisimple

    rnd = random.Random(8)
    for _ in range(200):
        F = build_field(*rnd.choice([(3, 1), (5, 1), (7, 1)]))
        n = rnd.randrange(2, 6)
        from waringmat.matgf import min_poly

        A = rand_mat(F, n, rnd)
        if min_poly(A).degree() != n:
            continue
        e = [rnd.randrange(F.q) for _ in range(n)]
        u = [rnd.randrange(F.q) for _ in range(n - 1)]
        s = 0
        for x in e + u:
            s = F.add(s, x)
        u.append(F.sub(A.trace(), s))
        sp = cyclic_lu_split(A, e, u)
        b_ok, c_ok = lu_split_semisimple_conditions(e, u, n)
        # the conditions are sufficient
        if b_ok:
            assert is_split_semisimple(sp.B)
        if c_ok:
            assert is_split_semisimple(sp.C)

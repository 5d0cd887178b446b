import random

import pytest

from waringmat.errors import (
    CharDividesK,
    DiagonalNotPower,
    OrderNotCoprime,
    TwoZeroDiagonal,
)
from waringmat.gf import build_field
from waringmat.matgf import Mat
from waringmat.lift import root_by_order, triangular_kth_root

F2 = build_field(2, 1)
F3 = build_field(3, 1)
F5 = build_field(5, 1)


def test_unipotent_2x2_example():
    X = triangular_kth_root(Mat(F5, [[1, 1], [0, 1]]), 3)
    assert X.rows == ((1, 2), (0, 1))  # 1/3 = 2 mod 5


def test_identity_and_diagonal():
    I = Mat.identity(F5, 4)
    assert triangular_kth_root(I, 7) ** 7 == I
    D = Mat.diag(F5, [F5.pow(b, 3) for b in (1, 2, 4)])
    X = triangular_kth_root(D, 3)
    assert X**3 == D
    assert all(X.rows[i][j] == 0 for i in range(3) for j in range(3) if i != j)


def test_lower_orientation():
    T = Mat(F3, [[1, 0, 0], [2, 2, 0], [1, 0, 1]])
    X = triangular_kth_root(T, 5)
    assert X**5 == T
    assert all(X.rows[i][j] == 0 for i in range(3) for j in range(i + 1, 3))


def test_errors():
    with pytest.raises(CharDividesK):
        triangular_kth_root(Mat.identity(F3, 2), 3)
    with pytest.raises(TwoZeroDiagonal):
        triangular_kth_root(Mat.diag(F5, [0, 0, 1]), 3)
    with pytest.raises(DiagonalNotPower):
        triangular_kth_root(Mat.diag(F5, [2, 1]), 2)  # 2 is not a square mod 5
    with pytest.raises(ValueError):
        triangular_kth_root(Mat(F5, [[1, 1], [1, 1]]), 3)


def test_root_by_order_examples():
    A = Mat(F2, [[0, 0, 1], [1, 0, 1], [0, 1, 0]])  # order 7
    X = root_by_order(A, 2)
    assert X == A**4 and X**2 == A
    I = Mat.identity(F5, 2)
    assert root_by_order(I, 9) == I
    U = Mat(F2, [[1, 1], [0, 1]])  # order 2
    with pytest.raises(OrderNotCoprime):
        root_by_order(U, 2)
    X = root_by_order(U, 7, group_order=8)
    assert X**7 == U


def test_group_order_hint_validation():
    A = Mat(F2, [[0, 0, 1], [1, 0, 1], [0, 1, 0]])
    with pytest.raises(ValueError):
        root_by_order(A, 2, group_order=6)  # 7 does not divide 6


def test_bulk_random_lifting():
    rnd = random.Random(99)
    for _ in range(1500):
        p, l = rnd.choice([(2, 1), (3, 1), (2, 2), (5, 1), (7, 1), (2, 3), (3, 2)])
        F = build_field(p, l)
        n = rnd.randrange(2, 9)
        while True:
            k = rnd.randrange(1, 31)
            if k % p:
                break
        nz = [v for v in F.kth_powers(k) if v]
        diag = [rnd.choice(nz) for _ in range(n)]
        if rnd.random() < 0.5:
            diag[rnd.randrange(n)] = 0
        rows = [[0] * n for _ in range(n)]
        for i in range(n):
            rows[i][i] = diag[i]
            for j in range(i + 1, n):
                rows[i][j] = rnd.randrange(F.q)
        T = Mat(F, rows)
        if rnd.random() < 0.5:
            T = T.transpose()
        X = triangular_kth_root(T, k)
        assert X**k == T

"""k-th roots of structured matrices.

Triangular matrices are handled by diagonal root choice plus stripe by
stripe correction through the nilpotent ideal filtration; invertible
matrices whose order is coprime to k are their own power circle, so a
root is just a power.
"""

from __future__ import annotations

from math import gcd

from . import _kernels as _K
from .errors import (
    CharDividesK,
    DiagonalNotPower,
    OrderNotCoprime,
    TwoZeroDiagonal,
)
from .gf import factor_int
from .matgf import Mat, order

if _K.HAVE:
    import numpy as _np


def triangular_kth_root(T: Mat, k: int) -> Mat:
    """X triangular of the same orientation with X^k = T exactly.

    Requires p coprime to k, every diagonal entry a k-th power, and at
    most one zero diagonal entry.  Diagonal roots are normalized so
    equal powers come from equal roots, which makes every stripe action
    scalar lambda_{i,j} nonzero; corrections then solve one stripe at a
    time and terminate after n-1 rounds.
    """
    F = T.field
    n = T.n
    if k < 1:
        raise ValueError("k must be >= 1")
    if k % F.p == 0:
        raise CharDividesK(f"k = {k} is divisible by the characteristic {F.p}")
    upper = all(T.rows[i][j] == 0 for i in range(n) for j in range(i))
    lower = all(T.rows[i][j] == 0 for i in range(n) for j in range(i + 1, n))
    if not (upper or lower):
        raise ValueError("matrix is not triangular")
    if not upper:
        return triangular_kth_root(T.transpose(), k).transpose()

    diag = T.diag_codes()
    if sum(1 for d in diag if d == 0) > 1:
        raise TwoZeroDiagonal("more than one zero diagonal entry")
    root_of = {}
    for d in set(diag):
        r = F.kth_root(d, k)
        if r is None:
            raise DiagonalNotPower(f"diagonal entry {F.format_code(d)} is not a k-th power")
        root_of[d] = r
    lam = [root_of[d] for d in diag]

    k_code = k % F.p
    if _K.HAVE and F.np_tables() is not None:
        t = F.np_tables()
        ok, X_arr = _K.tri_root(
            T.arr(), _np.array(lam, dtype=_np.int64), k, k_code, t[0], t[1], t[2], t[3]
        )
        assert ok, "triangular lifting failed verification"
        return Mat._from_arr(F, X_arr)
    rows = [[lam[i] if i == j else 0 for j in range(n)] for i in range(n)]
    for m in range(1, n):
        P = Mat(F, rows) ** k
        for i in range(n - m):
            j = i + m
            li, lj = lam[i], lam[j]
            if li == lj:
                lam_ij = F.mul(k_code, F.pow(li, k - 1))
            else:
                num = F.sub(F.pow(li, k), F.pow(lj, k))
                lam_ij = F.mul(num, F.inv(F.sub(li, lj)))
            assert lam_ij != 0, "stripe action vanished; root normalization bug"
            delta = F.sub(T.rows[i][j], P.rows[i][j])
            if delta:
                rows[i][j] = F.mul(delta, F.inv(lam_ij))
    X = Mat(F, rows)
    assert X**k == T, "triangular lifting failed verification"
    return X


def root_by_order(A: Mat, k: int, group_order: int | None = None) -> Mat:
    """X = A^s with X^k = A, for invertible A with gcd(k, order(A)) = 1.

    ``group_order`` may pass any multiple of the element order (e.g. the
    order of a subgroup containing A) to skip the full order search.
    """
    if group_order is not None:
        I = Mat.identity(A.field, A.n)
        if A**group_order != I:
            raise ValueError("group_order is not a multiple of the element order")
        o = group_order
        for r in factor_int(group_order):
            while o % r == 0 and A ** (o // r) == I:
                o //= r
    else:
        o = order(A)
    if gcd(k, o) != 1:
        raise OrderNotCoprime(f"gcd(k, order) = {gcd(k, o)} != 1")
    s = pow(k, -1, o) if o > 1 else 0
    X = A**s
    assert X**k == A
    return X

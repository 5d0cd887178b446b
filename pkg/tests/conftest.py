import random

import pytest

from waringmat.gf import build_field
from waringmat.matgf import Mat


@pytest.fixture(scope="session", autouse=True)
def warm_kernels():
    """Compile the jitted kernels once so timed tests measure the math."""
    F = build_field(5, 1)
    A = Mat(F, [[1, 2, 3], [4, 0, 1], [2, 2, 1]])
    (A * A).rank()
    A.inverse()
    from waringmat.matgf import min_poly, is_split_semisimple

    min_poly(A)
    is_split_semisimple(A)
    from waringmat.lift import triangular_kth_root

    triangular_kth_root(Mat(F, [[1, 1, 0], [0, 2, 1], [0, 0, 4]]), 3)
    yield


def rand_mat(field, n, rnd: random.Random) -> Mat:
    return Mat(field, [[rnd.randrange(field.q) for _ in range(n)] for _ in range(n)])


def prime_powers(limit):
    out = []
    for q in range(2, limit + 1):
        m, f = q, {}
        d = 2
        while d * d <= m:
            while m % d == 0:
                f[d] = f.get(d, 0) + 1
                m //= d
            d += 1
        if m > 1:
            f[m] = f.get(m, 0) + 1
        if len(f) == 1:
            ((p, l),) = f.items()
            out.append((q, p, l))
    return out

"""Prescribed diagonals up to similarity: cyclic matrices take any
diagonal of the right trace in an explicit banded shape, and every
nonscalar matrix takes any diagonal of the right trace.

The cyclic case follows the basis recursion w_{i+1} = A w_i - u_i w_i
starting from a cyclic vector.  The nonscalar case is a double
recursion over the generalized Jordan block structure: a cyclic chunk
absorbs the leading target entries, the trailing principal submatrix is
handled recursively, and two explicit escapes cover the degenerate
shapes (a rank-one construction for Diag(a, bI) and Diag(J_2(b), bI),
and a three-step detour through an auxiliary diagonal for the
one-scalar-coordinate deadlock).
"""

from __future__ import annotations

from dataclasses import dataclass

from . import config
from . import _kernels as _K
from .errors import NotCyclic, ScalarInput, TraceMismatch
from .gf import Field, FieldElem
from .matgf import Mat, is_scalar, min_poly
from .canon import GjForm, gj_block, gj_form, sim_transform
from .polyfactor import Poly

if _K.HAVE:
    import numpy as _np


@dataclass(frozen=True)
class DiagPlan:
    """A target diagonal with per-position constraint tags."""

    u: tuple[int, ...]
    tags: tuple[str, ...] = ()

    def __post_init__(self):
        if self.tags and len(self.tags) != len(self.u):
            raise ValueError("one tag per position")


@dataclass(frozen=True)
class LuSplit:
    """g A g^{-1} = B + C with the alternating banded sparsity patterns."""

    B: Mat
    C: Mat
    g: Mat
    parity: int


def _codes(field: Field, seq) -> tuple[int, ...]:
    out = []
    for x in seq:
        if isinstance(x, FieldElem):
            out.append(x.code)
        elif isinstance(x, str):
            out.append(field.parse_code(x))
        else:
            out.append(int(x))
    return tuple(out)


def _sum_codes(field: Field, seq) -> int:
    t = 0
    for c in seq:
        t = field.add(t, c)
    return t


def find_cyclic_vector(A: Mat, check: bool = True) -> list[int]:
    """A vector v with {v, Av, ..., A^{n-1}v} a basis; standard basis
    vectors first, then prefix sums, then seeded random combinations."""
    n = A.n
    F = A.field
    if check and min_poly(A).degree() != n:
        raise NotCyclic("matrix is not cyclic")

    if _K.HAVE and F.np_tables() is not None:
        t = F.np_tables()
        arr = A.arr()

        def krylov_rank(v) -> bool:
            return int(_K.krylov_rank(arr, _np.array(v, dtype=_np.int64), t[0], t[1], t[2], t[3])) == n

    else:

        def krylov_rank(v) -> bool:
            rows = []
            cur = list(v)
            for _ in range(n):
                rows.append(cur)
                cur = A.matvec(cur)
            return Mat(F, rows).rank() == n

    for i in range(n):
        v = [0] * n
        v[i] = 1
        if krylov_rank(v):
            return v
    for j in range(2, n + 1):
        v = [1 if i < j else 0 for i in range(n)]
        if krylov_rank(v):
            return v
    rnd = config.rng(salt=0x6379636C)
    for _ in range(2000):
        v = [rnd.randrange(F.q) for _ in range(n)]
        if any(v) and krylov_rank(v):
            return v
    raise AssertionError("no cyclic vector found for a cyclic matrix")


def _banded_form(A: Mat, u: tuple[int, ...]) -> tuple[Mat, Mat, Mat]:
    """(g, g^{-1}, M) with M = g A g^{-1} in the banded shape: diagonal u,
    ones on the subdiagonal, a free last column, zeros elsewhere."""
    F = A.field
    n = A.n
    if len(u) != n:
        raise ValueError("diagonal length mismatch")
    if min_poly(A).degree() != n:
        raise NotCyclic("matrix is not cyclic")
    if _sum_codes(F, u) != A.trace():
        raise TraceMismatch("sum of target diagonal must equal the trace")
    v = find_cyclic_vector(A, check=False)
    if _K.HAVE and F.np_tables() is not None:
        t = F.np_tables()
        W = _K.banded_chain(A.arr(), _np.array(v, dtype=_np.int64), _np.array(u, dtype=_np.int64), t[0], t[1], t[2])
        S = Mat._from_arr(F, W.T.copy())
    else:
        basis = [list(v)]
        for i in range(n - 1):
            w = A.matvec(basis[-1])
            ui = u[i]
            if ui:
                sub, mul = F.sub, F.mul
                w = [sub(x, mul(ui, y)) for x, y in zip(w, basis[-1])]
            basis.append(w)
        S = Mat(F, [[basis[j][i] for j in range(n)] for i in range(n)])
    g = S.inverse()
    M = g * A * S
    for i in range(n):
        assert M.rows[i][i] == u[i]
        if i + 1 < n:
            assert M.rows[i + 1][i] == 1
        for j in range(n - 1):
            if j != i and j != i - 1:
                assert M.rows[i][j] == 0, "banded shape violated"
    return g, S, M


def cyclic_with_diagonal(A: Mat, u) -> tuple[Mat, tuple[int, ...]]:
    """(g, a) with g A g^{-1} in the banded shape: diagonal u, ones on the
    subdiagonal, a_0..a_{n-2} in the last column, zeros elsewhere."""
    F = A.field
    u = _codes(F, u.u if isinstance(u, DiagPlan) else u)
    g, _, M = _banded_form(A, u)
    a = tuple(M.rows[i][A.n - 1] for i in range(A.n - 1))
    return g, a


# ---------------------------------------------------------------------------
# quasi-cyclic: any nonscalar matrix takes any admissible diagonal


def quasi_cyclic_with_diagonal(A: Mat, u) -> Mat:
    """g with diag(g A g^{-1}) = u, for nonscalar A and sum(u) = Tr(A)."""
    F = A.field
    u = _codes(F, u.u if isinstance(u, DiagPlan) else u)
    if len(u) != A.n:
        raise ValueError("diagonal length mismatch")
    if is_scalar(A):
        raise ScalarInput("scalar matrices only admit their own diagonal")
    if _sum_codes(F, u) != A.trace():
        raise TraceMismatch("sum of target diagonal must equal the trace")
    g = _qc(A, u)
    M = g * A * g.inverse()
    assert M.diag_codes() == u, "diagonal prescription failed verification"
    return g


def _eigen_code(f: Poly) -> int:
    # f = x - a monic linear
    return f.field.neg(f.coeffs[0])


def _qc(A: Mat, u: tuple[int, ...]) -> Mat:
    F = A.field
    n = A.n
    if n == 1:
        return Mat.identity(F, 1)
    if min_poly(A).degree() == n:
        return cyclic_with_diagonal(A, u)[0]
    form = gj_form(A)
    blocks = form.blocks
    h0 = form.transform

    # rank-one escapes: Diag(a, b I_m) with a != b, and Diag(J_2(b), b I_m)
    if all(f.degree() == 1 for f, _ in blocks):
        eigs = {}
        for f, m in blocks:
            eigs.setdefault(_eigen_code(f), []).append(m)
        if len(eigs) == 2 and all(m == 1 for ms in eigs.values() for m in ms):
            counts = {a: len(ms) for a, ms in eigs.items()}
            if 1 in counts.values():
                b = max(counts, key=lambda a: (counts[a], a))
                if counts[b] == n - 1:
                    return _qc_rank_one(A, u, b)
        if len(eigs) == 1:
            (b, ms), = eigs.items()
            if sorted(ms, reverse=True) == [2] + [1] * (len(ms) - 1):
                return _qc_rank_one(A, u, b)

    # general split candidates
    sizes = [f.degree() * m for f, m in blocks]
    for q_idx, sigma in _split_candidates(F, blocks, sizes, u):
        r_idx = [i for i in range(len(blocks)) if i not in q_idx]
        QM = Mat.block_diag([gj_block(*blocks[i]) for i in q_idx])
        RM = Mat.block_diag([gj_block(*blocks[i]) for i in r_idx])
        n_q = QM.n
        su = tuple(u[sigma[i]] for i in range(n)) if sigma else u
        heads = su[: n_q - 1]
        c = F.sub(QM.trace(), _sum_codes(F, heads))
        tail = su[n_q - 1 :]
        W = Mat.block_diag([Mat.scalar(F, 1, c), RM])
        if is_scalar(W):
            if any(t != c for t in tail):
                continue
            g_tail = Mat.identity(F, W.n)
        else:
            g_tail = _qc(W, tail)
        g_q = cyclic_with_diagonal(QM, heads + (c,))[0]
        perm = _block_permutation(F, blocks, sizes, list(q_idx) + r_idx)
        g = Mat.block_diag([Mat.identity(F, n_q - 1), g_tail]) * Mat.block_diag(
            [g_q, Mat.identity(F, n - n_q)]
        ) * perm * h0
        if sigma:
            g = _perm_matrix(F, sigma) * g
        return g

    return _qc_deadlock(A, u, form)


def _perm_matrix(F: Field, sigma) -> Mat:
    n = len(sigma)
    rows = [[0] * n for _ in range(n)]
    for k in range(n):
        rows[k][sigma[k]] = 1
    return Mat(F, rows)


def _block_permutation(F: Field, blocks, sizes, order) -> Mat:
    """Coordinate permutation putting the listed blocks first."""
    starts = []
    off = 0
    for s in sizes:
        starts.append(off)
        off += s
    coords = []
    for i in order:
        coords.extend(range(starts[i], starts[i] + sizes[i]))
    return _perm_matrix(F, coords)


def _split_candidates(F: Field, blocks, sizes, u):
    """Deterministic (Q-part indices, sigma) candidates; sigma permutes the
    target so the trailing recursion stays nonscalar."""
    n = len(u)
    idx_all = list(range(len(blocks)))

    def with_sigma(q_idx):
        n_q = sum(sizes[i] for i in q_idx)
        r_idx = [i for i in idx_all if i not in q_idx]
        if not r_idx or n_q < 2:
            return
        # is the rest a scalar r I_m, and which value
        r_scalar = None
        if all(blocks[i][0].degree() == 1 and blocks[i][1] == 1 for i in r_idx):
            vals = {_eigen_code(blocks[i][0]) for i in r_idx}
            if len(vals) == 1:
                r_scalar = vals.pop()
        tr_q = 0
        for i in q_idx:
            f, m = blocks[i]
            # trace of J_{f,m} = m * (coefficient of x^{r-1} in f, negated)
            t = F.neg(f.coeffs[f.degree() - 1])
            for _ in range(m):
                tr_q = F.add(tr_q, t)
        heads_sum = _sum_codes(F, u[: n_q - 1])
        c = F.sub(tr_q, heads_sum)
        if r_scalar is None or c != r_scalar:
            yield (list(q_idx), None)
            return
        # degenerate: W would be scalar; trivial tail or a head/tail swap
        if all(x == c for x in u[n_q - 1 :]):
            yield (list(q_idx), None)
            return
        for i in range(n_q - 1):
            for j in range(n_q - 1, n):
                if u[i] != u[j]:
                    sigma = list(range(n))
                    sigma[i], sigma[j] = sigma[j], sigma[i]
                    yield (list(q_idx), sigma)
                    return

    # one nonscalar block alone
    for i in idx_all:
        if sizes[i] >= 2:
            yield from with_sigma([i])
    # one block per distinct irreducible (largest multiplicity first in
    # canonical order), the maximal cyclic chunk
    seen = {}
    for i in idx_all:
        key = blocks[i][0].coeffs
        if key not in seen:
            seen[key] = i
    chunk = sorted(seen.values())
    if len(chunk) < len(idx_all):
        yield from with_sigma(chunk)
        # drop-one variants keep the chunk cyclic
        if len(chunk) > 1:
            for drop in chunk:
                rest = [i for i in chunk if i != drop]
                if sum(sizes[i] for i in rest) >= 2:
                    yield from with_sigma(rest)
    # pairs of distinct-eigenvalue 1x1 blocks
    ones = [i for i in idx_all if sizes[i] == 1]
    for ai in range(len(ones)):
        for bi in range(ai + 1, len(ones)):
            i, j = ones[ai], ones[bi]
            if blocks[i][0] != blocks[j][0]:
                yield from with_sigma([i, j])


def _qc_rank_one(A: Mat, u, b: int) -> Mat:
    """Escape via M = b I + column * row, which has diagonal u and the same
    canonical form as A (Diag(a, bI) or Diag(J_2(b), bI) up to shift)."""
    F = A.field
    n = A.n
    ub = [F.sub(x, b) for x in u]
    col = [1] + ub[1:]
    row = [ub[0]] + [1] * (n - 1)
    rows = [
        tuple(F.add(F.mul(col[i], row[j]), b if i == j else 0) for j in range(n))
        for i in range(n)
    ]
    M = Mat(F, rows)
    g = sim_transform(A, M)
    return g


def _qc_deadlock(A: Mat, u, form: GjForm) -> Mat:
    """All splits degenerate: A ~ Diag(Q0, r I_m) with a constant target.

    Translate by r, then walk through an auxiliary diagonal whose first
    entry u0 avoids 1 - u_n, fix the trailing 2 x 2, and finish on the
    leading principal submatrix.
    """
    F = A.field
    n = A.n
    blocks = form.blocks
    sizes = [f.degree() * m for f, m in blocks]
    choice = None
    for r_val in sorted({_eigen_code(f) for f, m in blocks if f.degree() == 1 and m == 1}):
        ones = [i for i in range(len(blocks)) if sizes[i] == 1 and _eigen_code(blocks[i][0]) == r_val]
        rest = [i for i in range(len(blocks)) if i not in ones]
        if not rest:
            continue
        RM = Mat.block_diag([gj_block(*blocks[i]) for i in rest])
        shifted = RM - Mat.scalar(F, RM.n, r_val)
        # the complement padded with the peeled zeros must stay nonscalar
        if not is_scalar(shifted) or len(ones) >= 2:
            choice = (r_val, rest, ones)
            break
    assert choice is not None, "deadlock structure not recognized"
    r_val, rest, ones = choice
    m = len(ones)
    perm = _block_permutation(F, blocks, sizes, rest + ones)
    h = perm * form.transform  # h A h^{-1} = Diag(Q0, r I_m)
    Q0 = Mat.block_diag([gj_block(*blocks[i]) for i in rest])
    u2 = tuple(F.sub(x, r_val) for x in u)  # targets for the shifted matrix
    Q0s = Q0 - Mat.scalar(F, Q0.n, r_val)

    if m >= 2:
        # peel all but one zero coordinate into the recursive head
        inner = Mat.block_diag([Q0s, Mat.zero(F, m - 1)])
        heads = u2[: n - 2]
        c2 = F.sub(inner.trace(), _sum_codes(F, heads))
        sigma = None
        if c2 == 0:
            for i in range(n - 2):
                for j in range(n - 2, n):
                    if u2[i] != u2[j]:
                        sigma = list(range(n))
                        sigma[i], sigma[j] = sigma[j], sigma[i]
                        break
                if sigma:
                    break
        if c2 == 0 and sigma is None:
            g_core = _qc_core_one_zero(Mat.block_diag([Q0s, Mat.zero(F, m - 1)]), u2)
            return g_core * h
        su = tuple(u2[sigma[i]] for i in range(n)) if sigma else u2
        heads = su[: n - 2]
        c2 = F.sub(inner.trace(), _sum_codes(F, heads))
        assert c2 != 0
        g_head = _qc(inner, heads + (c2,))
        W = Mat.diag(F, [c2, 0])
        g_tail = cyclic_with_diagonal(W, su[n - 2 :])[0]
        g = Mat.block_diag([Mat.identity(F, n - 2), g_tail]) * Mat.block_diag(
            [g_head, Mat.identity(F, 1)]
        ) * h
        if sigma:
            g = _perm_matrix(F, sigma) * g
        return g
    g_core = _qc_core_one_zero(Q0s, u2)
    return g_core * h


def _qc_core_one_zero(QM: Mat, u2) -> Mat:
    """Solve Diag(QM, 0_1) -> diagonal u2 for nonscalar QM (the detour with
    the free first entry u0)."""
    F = QM.field
    n2 = QM.n + 1
    target_mat = Mat.block_diag([QM, Mat.zero(F, 1)])
    if min_poly(target_mat).degree() == n2:
        return cyclic_with_diagonal(target_mat, u2)[0]
    assert n2 >= 4, "3x3 deadlocks are rank-one shapes"
    last = u2[-1]
    forbidden = F.sub(1, last)
    u0 = 0 if forbidden != 0 else 1
    rem = F.sub(F.sub(QM.trace(), 1), u0)
    mids = (0,) * (n2 - 4) + (rem,)
    p_target = (u0,) + mids + (1,)
    g1 = _qc(QM, p_target)
    gb = Mat.block_diag([g1, Mat.identity(F, 1)])
    B = gb * target_mat * gb.inverse()
    sub2 = Mat.diag(F, [1, 0])
    g2s = cyclic_with_diagonal(sub2, (forbidden, last))[0]
    g2 = Mat.block_diag([Mat.identity(F, n2 - 2), g2s])
    C = g2 * B * g2.inverse()
    c_sub = C.submatrix(range(n2 - 1))
    assert not is_scalar(c_sub)
    g3 = Mat.block_diag([_qc(c_sub, u2[: n2 - 1]), Mat.identity(F, 1)])
    return g3 * g2 * gb


# ---------------------------------------------------------------------------
# lower + upper split of a cyclic matrix


def cyclic_lu_split(A: Mat, e, u) -> LuSplit:
    """g A g^{-1} = B + C where B carries diagonal e with an alternating
    0/1 subdiagonal and C carries diagonal u, the complementary
    subdiagonal, and the free last column."""
    F = A.field
    n = A.n
    e = _codes(F, e)
    u = _codes(F, u)
    if len(e) != n or len(u) != n:
        raise ValueError("diagonal length mismatch")
    total = F.add(_sum_codes(F, e), _sum_codes(F, u))
    if total != A.trace():
        raise TraceMismatch("sum of the two target diagonals must equal the trace")
    v = tuple(F.add(a, b) for a, b in zip(e, u))
    g, _, M = _banded_form(A, v)
    a = tuple(M.rows[i][n - 1] for i in range(n - 1))
    # subdiagonal entry i (1-based, position (i+1, i)): for odd n, B takes
    # the even i; for even n, B takes the odd i
    b_rows = [[0] * n for _ in range(n)]
    c_rows = [[0] * n for _ in range(n)]
    parity = n % 2
    for i in range(n):
        b_rows[i][i] = e[i]
        c_rows[i][i] = u[i]
    for i in range(1, n):  # 1-based subdiagonal index
        take_b = (i % 2 == 0) if parity == 1 else (i % 2 == 1)
        if take_b:
            b_rows[i][i - 1] = 1
        else:
            c_rows[i][i - 1] = 1
    for i in range(n - 1):
        c_rows[i][n - 1] = a[i]
    B = Mat._raw(F, tuple(tuple(r) for r in b_rows))
    C = Mat._raw(F, tuple(tuple(r) for r in c_rows))
    assert B + C == M
    return LuSplit(B, C, g, parity)


def lu_split_semisimple_conditions(e, u, n: int) -> tuple[bool, bool]:
    """The distinctness conditions under which the two banded summands are
    split semisimple (sufficient, checked against the predicates by
    callers): consecutive linked diagonal entries differ, and for the
    column-bearing summand the last entry differs from all others."""
    e = list(e)
    u = list(u)
    if n % 2 == 1:
        b_ok = all(e[2 * i - 1] != e[2 * i] for i in range(1, (n - 1) // 2 + 1))
        c_ok = all(u[2 * i - 2] != u[2 * i - 1] for i in range(1, (n - 1) // 2 + 1))
    else:
        b_ok = all(e[2 * i - 2] != e[2 * i - 1] for i in range(1, n // 2 + 1))
        c_ok = all(u[2 * i - 1] != u[2 * i] for i in range(1, n // 2))
    c_ok = c_ok and all(u[n - 1] != u[j] for j in range(n - 1))
    return b_ok, c_ok

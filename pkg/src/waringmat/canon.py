"""Generalized Jordan normal form over F_q with an explicit transform.

Every matrix is conjugated to a block diagonal of generalized Jordan
blocks J_{f,m}: m companion blocks of an irreducible f on the diagonal
linked by identity blocks on the superdiagonal.  The transform is
produced constructively: chain tops are found through the kernel
filtration of f(A), and the basis that realizes the exact identity-link
shape comes from a Hensel lift of x inside F_q[x]/(f^m) (the lift yhat
satisfies f(yhat) = 0 there, and tau = x - yhat generates the radical,
so the vectors yhat(A)^s tau(A)^(m-t) v reproduce J_{f,m} literally).
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .errors import NotIrreducible
from .gf import Field
from .matgf import Mat, char_poly, is_scalar, min_poly
from .polyfactor import Poly, factor, invert_mod, is_irreducible


def poly_at_mat(f: Poly, A: Mat) -> Mat:
    """Evaluate f at a matrix by Horner's rule."""
    acc = Mat.zero(A.field, A.n)
    for c in reversed(f.coeffs):
        acc = acc * A + Mat.scalar(A.field, A.n, c)
    return acc


_GJ_BLOCK_CACHE: dict = {}


def gj_block(f: Poly, m: int) -> Mat:
    """The rm x rm generalized Jordan block for an irreducible monic f."""
    key = (id(f.field), f.coeffs, m)
    hit = _GJ_BLOCK_CACHE.get(key)
    if hit is not None:
        return hit
    if m < 1:
        raise ValueError("multiplicity must be >= 1")
    if not is_irreducible(f):
        raise NotIrreducible(f"{f} is not irreducible")
    base = Mat.companion(f)
    r = f.degree()
    n = r * m
    rows = [[0] * n for _ in range(n)]
    for t in range(m):
        off = t * r
        for i in range(r):
            for j in range(r):
                rows[off + i][off + j] = base.rows[i][j]
        if t + 1 < m:
            for i in range(r):
                rows[off + i][off + r + i] = 1
    out = Mat(f.field, rows)
    if len(_GJ_BLOCK_CACHE) > 4096:
        _GJ_BLOCK_CACHE.clear()
    _GJ_BLOCK_CACHE[key] = out
    return out


def _block_sort_key(fm):
    f, m = fm
    return (f.sort_key(), -m)


@dataclass(frozen=True)
class GjForm:
    """Block list [(f_i, m_i)] in canonical order plus the transform g
    with g A g^{-1} equal to Diag(J_{f_1,m_1}, ..., J_{f_t,m_t})."""

    blocks: tuple[tuple[Poly, int], ...]
    transform: Mat
    source: Mat

    def block_diagonal(self) -> Mat:
        return Mat.block_diag([gj_block(f, m) for f, m in self.blocks])

    def key(self):
        return tuple((f.coeffs, m) for f, m in self.blocks)

    def is_cyclic(self) -> bool:
        fs = [f for f, _ in self.blocks]
        return len(fs) == len(set(fs))

    def to_json_obj(self) -> dict:
        return {
            "blocks": [{"f": str(f), "m": m} for f, m in self.blocks],
            "transform": self.transform.to_json_obj(),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj())


class _Span:
    """Echelonized span with exact membership tests."""

    __slots__ = ("field", "n", "rows", "pivots")

    def __init__(self, field: Field, n: int):
        self.field = field
        self.n = n
        self.rows: list[list[int]] = []
        self.pivots: list[int] = []

    def _reduce(self, v):
        F = self.field
        v = list(v)
        for row, piv in zip(self.rows, self.pivots):
            c = v[piv]
            if c:
                v = [F.sub(x, F.mul(c, y)) for x, y in zip(v, row)]
        return v

    def contains(self, v) -> bool:
        return not any(self._reduce(v))

    def add(self, v) -> bool:
        """Insert if independent; returns True when the span grew."""
        F = self.field
        red = self._reduce(v)
        piv = next((i for i, x in enumerate(red) if x), None)
        if piv is None:
            return False
        inv = F.inv(red[piv])
        self.rows.append([F.mul(inv, x) for x in red])
        self.pivots.append(piv)
        return True


_HENSEL_CACHE: dict[tuple, tuple[Poly, Poly]] = {}


def _hensel_generators(f: Poly, m: int) -> tuple[Poly, Poly]:
    """(yhat, tau) in F_q[x]/(f^m): yhat = x mod f, f(yhat) = 0, tau = x - yhat."""
    key = (id(f.field), f.coeffs, m)
    hit = _HENSEL_CACHE.get(key)
    if hit is not None:
        return hit
    fm = Poly.one(f.field)
    for _ in range(m):
        fm = fm * f
    y = Poly.x(f.field)
    df = f.derivative()
    for _ in range(m + 2):
        fy = f.compose_mod(y, fm)
        if fy.is_zero():
            break
        y = (y - fy * invert_mod(df.compose_mod(y, fm), fm)) % fm
    else:
        raise AssertionError("Hensel lift did not converge")
    tau = (Poly.x(f.field) - y) % fm
    _HENSEL_CACHE[key] = (y, tau)
    return y, tau


def _poly_apply(f: Poly, A: Mat, v):
    """f(A) v by Horner on the vector."""
    F = A.field
    acc = [0] * A.n
    for c in reversed(f.coeffs):
        acc = A.matvec(acc)
        if c:
            acc = [F.add(x, F.mul(c, e)) for x, e in zip(acc, v)]
    return acc


def gj_form(A: Mat) -> GjForm:
    """Generalized Jordan form with transform; deterministic and verified."""
    F = A.field
    n = A.n
    chi = char_poly(A)
    fac = factor(chi)
    per_block: list[tuple[Poly, int, list[list[int]]]] = []  # (f, m, basis vectors)
    for f, e in fac.factors:
        r = f.degree()
        N = poly_at_mat(f, A)
        kernels = [None]  # K_0 = 0
        P = Mat.identity(F, n)
        for _ in range(e):
            P = P * N
            kernels.append(P.nullspace())
        # chain tops, top heights first
        tops: list[tuple[list[int], int]] = []
        for h in range(e, 0, -1):
            span = _Span(F, n)
            for v in kernels[h - 1] if h > 1 else []:
                span.add(v)
            for w, h2 in tops:
                layer = w
                for _ in range(h2 - h):
                    layer = N.matvec(layer)
                vec = layer
                for _ in range(r):
                    span.add(vec)
                    vec = A.matvec(vec)
            for cand in kernels[h]:
                if not span.contains(cand):
                    tops.append((cand, h))
                    vec = cand
                    for _ in range(r):
                        span.add(vec)
                        vec = A.matvec(vec)
        for w, h in tops:
            yhat, tau = _hensel_generators(f, h)
            base_t = [w]
            for _ in range(h - 1):
                base_t.append(_poly_apply(tau, A, base_t[-1]))
            # block t = 1..h uses tau^(h-t) w, so reverse the chain
            basis: list[list[int]] = []
            for t in range(h):
                b = base_t[h - 1 - t]
                vec = b
                for s in range(r):
                    basis.append(vec)
                    if s < r - 1:
                        vec = _poly_apply(yhat, A, vec)
            per_block.append((f, h, basis))
    per_block.sort(key=lambda it: _block_sort_key((it[0], it[1])))
    blocks = tuple((f, m) for f, m, _ in per_block)
    cols: list[list[int]] = []
    for _, _, basis in per_block:
        cols.extend(basis)
    S = Mat(F, [[cols[j][i] for j in range(n)] for i in range(n)])
    g = S.inverse()
    D = Mat.block_diag([gj_block(f, m) for f, m in blocks])
    assert g * A * S == D, "generalized Jordan reduction failed verification"
    return GjForm(blocks, g, A)


def gj_key(A: Mat):
    """Canonical conjugacy-class key, computed without the transform."""
    chi = char_poly(A)
    blocks: list[tuple[Poly, int]] = []
    for f, e in factor(chi).factors:
        if e == 1:
            blocks.append((f, 1))
            continue
        r = f.degree()
        N = poly_at_mat(f, A)
        dims = [0]
        P = Mat.identity(A.field, A.n)
        for _ in range(e):
            P = P * N
            dims.append(A.n - P.rank())
            if len(dims) > 2 and dims[-1] == dims[-2]:
                break
        while len(dims) <= e + 1:
            dims.append(dims[-1])
        counts = [(dims[j] - dims[j - 1]) // r for j in range(1, e + 1)]  # blocks of height >= j
        counts.append(0)
        for h in range(e, 0, -1):
            for _ in range(counts[h - 1] - counts[h]):
                blocks.append((f, h))
    blocks.sort(key=_block_sort_key)
    return tuple((f.coeffs, m) for f, m in blocks)


def sim_transform(A: Mat, B: Mat) -> Mat:
    """An explicit g with g A g^{-1} = B, via matching canonical forms."""
    fa = gj_form(A)
    fb = gj_form(B)
    if fa.key() != fb.key():
        raise ValueError("matrices are not similar")
    g = fb.transform.inverse() * fa.transform
    return g


def is_quasi_eligible(A: Mat) -> bool:
    """Eligible for arbitrary-diagonal conjugation: any nonscalar matrix."""
    return not is_scalar(A)

"""Dense exact matrices over GF(q): arithmetic, invariants, predicates,
and deterministic small-space enumeration.

Entries are stored as field codes in immutable row tuples.  Integer
entries passed to ``Mat`` are taken to be codes (for prime fields codes
and residues coincide); the text and JSON formats use element literals
and go through ``Field.elem``.
"""

from __future__ import annotations

import json
from math import gcd

from . import config
from . import _kernels as _K
from .errors import NotInvertible
from .gf import Field, FieldElem, factor_int
from .polyfactor import Poly, gcd_poly, lcm_poly

if _K.HAVE:
    import numpy as _np

Rows = tuple[tuple[int, ...], ...]


class Mat:
    """Immutable n x n matrix over a Field."""

    __slots__ = ("field", "n", "rows", "_mu", "_arr")

    def __init__(self, field: Field, rows):
        mat = []
        for row in rows:
            out = []
            for e in row:
                if isinstance(e, FieldElem):
                    out.append(e.code)
                elif isinstance(e, str):
                    out.append(field.parse_code(e))
                else:
                    if not 0 <= e < field.q:
                        raise ValueError(f"code {e} out of range for {field!r}")
                    out.append(e)
            mat.append(tuple(out))
        n = len(mat)
        if any(len(r) != n for r in mat):
            raise ValueError("matrix must be square")
        if n < 1:
            raise ValueError("empty matrix")
        self.field = field
        self.n = n
        self.rows = tuple(mat)
        self._mu = None
        self._arr = None

    @classmethod
    def _raw(cls, field: Field, rows: Rows) -> "Mat":
        m = object.__new__(cls)
        m.field = field
        m.n = len(rows)
        m.rows = rows
        m._mu = None
        m._arr = None
        return m

    @classmethod
    def _from_arr(cls, field: Field, arr) -> "Mat":
        m = cls._raw(field, tuple(tuple(r) for r in arr.tolist()))
        m._arr = arr
        return m

    def arr(self):
        """Cached numpy view for the jitted kernels."""
        a = self._arr
        if a is None:
            a = _np.array(self.rows, dtype=_np.int64)
            self._arr = a
        return a

    # -- constructors -----------------------------------------------------

    @classmethod
    def zero(cls, field: Field, n: int) -> "Mat":
        return cls._raw(field, tuple((0,) * n for _ in range(n)))

    @classmethod
    def identity(cls, field: Field, n: int) -> "Mat":
        return cls._raw(field, tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n)))

    @classmethod
    def scalar(cls, field: Field, n: int, code: int) -> "Mat":
        return cls._raw(field, tuple(tuple(code if i == j else 0 for j in range(n)) for i in range(n)))

    @classmethod
    def diag(cls, field: Field, codes) -> "Mat":
        codes = list(codes)
        n = len(codes)
        return cls._raw(field, tuple(tuple(codes[i] if i == j else 0 for j in range(n)) for i in range(n)))

    @classmethod
    def block_diag(cls, blocks) -> "Mat":
        blocks = list(blocks)
        field = blocks[0].field
        n = sum(b.n for b in blocks)
        rows = [[0] * n for _ in range(n)]
        off = 0
        for b in blocks:
            for i, row in enumerate(b.rows):
                rows[off + i][off : off + b.n] = row
            off += b.n
        return cls._raw(field, tuple(tuple(r) for r in rows))

    @classmethod
    def companion(cls, f: Poly) -> "Mat":
        """Companion matrix in the lower form: ones on the subdiagonal and
        the vector a with f = x^r - sum a_i x^i in the last column."""
        F = f.field
        r = f.degree()
        if r < 1 or not f.is_monic():
            raise ValueError("companion needs a monic polynomial of degree >= 1")
        a = [F.neg(c) for c in f.coeffs[:r]]
        rows = [[0] * r for _ in range(r)]
        for i in range(1, r):
            rows[i][i - 1] = 1
        for i in range(r):
            rows[i][r - 1] = a[i]
        return cls._raw(F, tuple(tuple(row) for row in rows))

    @classmethod
    def from_code(cls, field: Field, n: int, code: int) -> "Mat":
        q = field.q
        entries = []
        for _ in range(n * n):
            entries.append(code % q)
            code //= q
        return cls._raw(field, tuple(tuple(entries[i * n : (i + 1) * n]) for i in range(n)))

    def code(self) -> int:
        """Row-major base-q integer code; the census enumeration index."""
        q = self.field.q
        c = 0
        for i in range(self.n - 1, -1, -1):
            for j in range(self.n - 1, -1, -1):
                c = c * q + self.rows[i][j]
        return c

    # -- basics ------------------------------------------------------------

    def __eq__(self, other):
        return (
            isinstance(other, Mat)
            and self.field is other.field
            and self.rows == other.rows
        )

    def __hash__(self):
        return hash((id(self.field), self.rows))

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def entry(self, i: int, j: int) -> FieldElem:
        return FieldElem(self.field, self.rows[i][j])

    def diag_codes(self) -> tuple[int, ...]:
        return tuple(self.rows[i][i] for i in range(self.n))

    def trace(self) -> int:
        F = self.field
        t = 0
        for i in range(self.n):
            t = F.add(t, self.rows[i][i])
        return t

    def transpose(self) -> "Mat":
        return Mat._raw(self.field, tuple(zip(*self.rows)))

    def submatrix(self, idx) -> "Mat":
        idx = list(idx)
        return Mat._raw(self.field, tuple(tuple(self.rows[i][j] for j in idx) for i in idx))

    def __repr__(self):
        return f"Mat({self.field.spec_string}, {self.rows})"

    def __str__(self):
        return self.to_text()

    # -- arithmetic -----------------------------------------------------------

    def __add__(self, other: "Mat") -> "Mat":
        F = self.field
        if _K.HAVE:
            t = F.np_tables()
            if t is not None:
                return Mat._from_arr(F, t[0][self.arr(), other.arr()])
        add = F.add
        return Mat._raw(
            F,
            tuple(tuple(add(a, b) for a, b in zip(ra, rb)) for ra, rb in zip(self.rows, other.rows)),
        )

    def __neg__(self) -> "Mat":
        neg = self.field.neg
        return Mat._raw(self.field, tuple(tuple(neg(a) for a in row) for row in self.rows))

    def __sub__(self, other: "Mat") -> "Mat":
        F = self.field
        if _K.HAVE:
            t = F.np_tables()
            if t is not None:
                return Mat._from_arr(F, t[1][self.arr(), other.arr()])
        sub = F.sub
        return Mat._raw(
            F,
            tuple(tuple(sub(a, b) for a, b in zip(ra, rb)) for ra, rb in zip(self.rows, other.rows)),
        )

    def __mul__(self, other: "Mat") -> "Mat":
        F = self.field
        if _K.HAVE:
            t = F.np_tables()
            if t is not None:
                return Mat._from_arr(F, _K.matmul(self.arr(), other.arr(), t[0], t[2]))
        cols = tuple(zip(*other.rows))
        out = []
        add_t, mul_t = F._add_t, F._mul_t
        if mul_t is not None and F.p != 2:
            for ra in self.rows:
                row = []
                for cb in cols:
                    acc = 0
                    for x, y in zip(ra, cb):
                        if x and y:
                            acc = add_t[acc][mul_t[x][y]]
                    row.append(acc)
                out.append(tuple(row))
        elif F.p == 2 and F.l == 1:
            for ra in self.rows:
                row = []
                for cb in cols:
                    acc = 0
                    for x, y in zip(ra, cb):
                        acc ^= x & y
                    row.append(acc)
                out.append(tuple(row))
        elif mul_t is not None:  # p = 2, l > 1: addition is xor on codes
            for ra in self.rows:
                row = []
                for cb in cols:
                    acc = 0
                    for x, y in zip(ra, cb):
                        if x and y:
                            acc ^= mul_t[x][y]
                    row.append(acc)
                out.append(tuple(row))
        else:
            add, mul = F.add, F.mul
            for ra in self.rows:
                row = []
                for cb in cols:
                    acc = 0
                    for x, y in zip(ra, cb):
                        if x and y:
                            acc = add(acc, mul(x, y))
                    row.append(acc)
                out.append(tuple(row))
        return Mat._raw(F, tuple(out))

    def scale(self, code: int) -> "Mat":
        mul = self.field.mul
        return Mat._raw(self.field, tuple(tuple(mul(code, a) for a in row) for row in self.rows))

    def matvec(self, v) -> list[int]:
        F = self.field
        add_t, mul_t = F._add_t, F._mul_t
        out = []
        if mul_t is not None and F.p != 2:
            for row in self.rows:
                acc = 0
                for x, y in zip(row, v):
                    if x and y:
                        acc = add_t[acc][mul_t[x][y]]
                out.append(acc)
        elif mul_t is not None:
            for row in self.rows:
                acc = 0
                for x, y in zip(row, v):
                    if x and y:
                        acc ^= mul_t[x][y]
                out.append(acc)
        else:
            add, mul = F.add, F.mul
            for row in self.rows:
                acc = 0
                for x, y in zip(row, v):
                    if x and y:
                        acc = add(acc, mul(x, y))
                out.append(acc)
        return out

    def __pow__(self, e: int) -> "Mat":
        if e < 0:
            return self.inverse() ** (-e)
        F = self.field
        if _K.HAVE:
            t = F.np_tables()
            if t is not None:
                return Mat._from_arr(F, _K.matpow(self.arr(), e, t[0], t[2]))
        result = Mat.identity(F, self.n)
        base = self
        while e > 0:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    # -- elimination: rank, det, inverse, nullspace ------------------------------

    def _echelon(self, augment: bool = False):
        """Row-reduce; returns (rows, pivots, det_code, aug_rows)."""
        F = self.field
        n = self.n
        sub, mul, inv, neg = F.sub, F.mul, F.inv, F.neg
        rows = [list(r) for r in self.rows]
        aug = [[1 if i == j else 0 for j in range(n)] for i in range(n)] if augment else None
        det = 1
        pivots = []
        r = 0
        for c in range(n):
            piv = None
            for i in range(r, n):
                if rows[i][c]:
                    piv = i
                    break
            if piv is None:
                det = 0
                continue
            if piv != r:
                rows[r], rows[piv] = rows[piv], rows[r]
                if aug:
                    aug[r], aug[piv] = aug[piv], aug[r]
                det = neg(det)
            pv = rows[r][c]
            det = mul(det, pv)
            if pv != 1:
                inv_pv = inv(pv)
                rows[r] = [mul(inv_pv, x) for x in rows[r]]
                if aug:
                    aug[r] = [mul(inv_pv, x) for x in aug[r]]
            for i in range(n):
                if i != r and rows[i][c]:
                    f = rows[i][c]
                    rows[i] = [sub(x, mul(f, y)) for x, y in zip(rows[i], rows[r])]
                    if aug:
                        aug[i] = [sub(x, mul(f, y)) for x, y in zip(aug[i], aug[r])]
            pivots.append(c)
            r += 1
        return rows, pivots, det if r == n else 0, aug

    def _k_echelon(self, want_aug: bool):
        t = self.field.np_tables()
        if t is None:
            return None
        return _K.echelon(self.arr(), t[1], t[2], t[3], t[4], want_aug)

    def rank(self) -> int:
        if _K.HAVE:
            out = self._k_echelon(False)
            if out is not None:
                return int(out[2])
        return len(self._echelon()[1])

    def det(self) -> int:
        if _K.HAVE:
            out = self._k_echelon(False)
            if out is not None:
                return int(out[3])
        return self._echelon()[2]

    def is_invertible(self) -> bool:
        return self.det() != 0

    def inverse(self) -> "Mat":
        if _K.HAVE:
            out = self._k_echelon(True)
            if out is not None:
                if out[3] == 0:
                    raise NotInvertible("matrix is singular")
                return Mat._from_arr(self.field, out[4])
        rows, pivots, det, aug = self._echelon(augment=True)
        if det == 0:
            raise NotInvertible("matrix is singular")
        return Mat._raw(self.field, tuple(tuple(r) for r in aug))

    def nullspace(self) -> list[list[int]]:
        """Deterministic kernel basis (free variables in code order)."""
        F = self.field
        n = self.n
        if _K.HAVE:
            out = self._k_echelon(False)
            if out is not None:
                arr, piv_arr, r = out[0], out[1], int(out[2])
                pivots = [int(piv_arr[i]) for i in range(r)]
                rows = arr.tolist()
            else:
                rows, pivots, _, _ = self._echelon()
        else:
            rows, pivots, _, _ = self._echelon()
        piv_set = set(pivots)
        basis = []
        for c in range(n):
            if c in piv_set:
                continue
            v = [0] * n
            v[c] = 1
            for r_i, pc in enumerate(pivots):
                v[pc] = F.neg(rows[r_i][c])
            basis.append(v)
        return basis

    # -- text / JSON -------------------------------------------------------------

    def to_text(self) -> str:
        F = self.field
        return "\n".join(" ".join(F.format_code(e) for e in row) for row in self.rows)

    @classmethod
    def from_text(cls, field: Field, text: str) -> "Mat":
        rows = []
        for line in text.strip().splitlines():
            line = line.strip()
            if not line:
                continue
            rows.append([field.elem(tok).code for tok in line.split()])
        return cls(field, rows)

    def to_json_obj(self) -> dict:
        F = self.field
        if F.l == 1:
            rows = [list(r) for r in self.rows]
        else:
            rows = [[F.format_code(e) for e in row] for row in self.rows]
        return {"field": F.spec_string, "n": self.n, "rows": rows}

    @classmethod
    def from_json_obj(cls, obj: dict, field: Field | None = None) -> "Mat":
        from .gf import parse_field

        fld = field if field is not None else parse_field(obj["field"])
        rows = [[fld.elem(e).code for e in row] for row in obj["rows"]]
        if len(rows) != obj.get("n", len(rows)):
            raise ValueError("row count disagrees with n")
        return cls(fld, rows)

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj())


# ---------------------------------------------------------------------------
# invariants


def char_poly(A: Mat) -> Poly:
    """Characteristic polynomial det(xI - A), division-free (Berkowitz)."""
    F = A.field
    n = A.n
    R = A.rows
    neg, add, mul = F.neg, F.add, F.mul
    vec = [1, neg(R[n - 1][n - 1])]  # descending coefficients, trailing 1x1
    for i in range(n - 2, -1, -1):
        row = R[i][i + 1 :]
        colv = [R[j][i] for j in range(i + 1, n)]
        trail = [R[j][i + 1 :] for j in range(i + 1, n)]
        col = [1, neg(R[i][i])]
        v = colv
        steps = n - i - 1
        for t in range(steps):
            acc = 0
            for x, y in zip(row, v):
                if x and y:
                    acc = add(acc, mul(x, y))
            col.append(neg(acc))
            if t < steps - 1:
                v = [
                    _dot(F, trail_row, v)
                    for trail_row in trail
                ]
        need = n - i + 1
        out = [0] * need
        for a, ca in enumerate(col):
            if ca:
                for b, cb in enumerate(vec):
                    if cb and a + b < need:
                        out[a + b] = add(out[a + b], mul(ca, cb))
        vec = out
    return Poly.from_codes(F, list(reversed(vec)))


def _dot(F: Field, u, v) -> int:
    add, mul = F.add, F.mul
    acc = 0
    for x, y in zip(u, v):
        if x and y:
            acc = add(acc, mul(x, y))
    return acc


_UNIT_VECS: dict = {}


def _unit_vec(n: int, i: int):
    key = (n, i)
    v = _UNIT_VECS.get(key)
    if v is None:
        v = _np.zeros(n, dtype=_np.int64)
        v[i] = 1
        _UNIT_VECS[key] = v
    return v


def vector_annihilator(A: Mat, v) -> Poly:
    """The monic generator of {f : f(A)v = 0}, by Krylov elimination."""
    F = A.field
    n = A.n
    if _K.HAVE:
        t = F.np_tables()
        if t is not None:
            if isinstance(v, _np.ndarray):
                va = v
            else:
                nz = [i for i, x in enumerate(v) if x]
                if len(nz) == 1 and v[nz[0]] == 1:
                    va = _unit_vec(n, nz[0])
                else:
                    va = _np.array(v, dtype=_np.int64)
            coeffs = _K.annihilator(A.arr(), va, t[0], t[1], t[2], t[3])
            return Poly.from_codes(F, coeffs.tolist())
    sub, mul, inv = F.sub, F.mul, F.inv
    rows: list[tuple[list[int], list[int], int]] = []  # (reduced vec, combo, pivot)
    cur = list(v)
    for j in range(n + 1):
        red = list(cur)
        comb = [0] * j + [1]
        for rvec, rcomb, piv in rows:
            c = red[piv]
            if c:
                red = [sub(x, mul(c, y)) for x, y in zip(red, rvec)]
                pad = len(comb) - len(rcomb)
                comb = [sub(x, mul(c, y)) for x, y in zip(comb, rcomb + [0] * pad)]
        piv = next((i for i, x in enumerate(red) if x), None)
        if piv is None:
            return Poly.from_codes(F, comb)
        c = inv(red[piv])
        rows.append(([mul(c, x) for x in red], [mul(c, x) for x in comb], piv))
        cur = A.matvec(cur)
    raise AssertionError("no annihilator of degree <= n")  # unreachable


def min_poly(A: Mat) -> Poly:
    """Minimal polynomial as the lcm of cyclic-vector annihilators
    (memoized on the matrix; Mat is immutable).

    Standard-basis annihilators already generate the full annihilator
    ideal, and the loop exits early once degree n is reached.
    """
    if A._mu is not None:
        return A._mu
    n = A.n
    if _K.HAVE:
        t = A.field.np_tables()
        if t is not None:
            coeffs = _K.min_poly_t(A.arr(), t[0], t[1], t[2], t[3])
            mu = Poly.from_codes(A.field, coeffs.tolist())
            A._mu = mu
            return mu
    mu = None
    for i in range(n):
        v = [0] * n
        v[i] = 1
        ann = vector_annihilator(A, v)
        if mu is None or ann == mu:
            mu = ann
        elif ann.degree() == mu.degree():
            mu = lcm_poly(mu, ann)  # equal degrees, distinct: neither divides
        elif ann.degree() > mu.degree():
            mu = ann if (ann % mu).is_zero() else lcm_poly(mu, ann)
        elif not (mu % ann).is_zero():
            mu = lcm_poly(mu, ann)
        if mu.degree() == n:
            break
    A._mu = mu
    return mu


# ---------------------------------------------------------------------------
# structural predicates


def is_scalar(A: Mat) -> bool:
    d = A.rows[0][0]
    for i in range(A.n):
        for j in range(A.n):
            if A.rows[i][j] != (d if i == j else 0):
                return False
    return True


def is_idempotent(A: Mat) -> bool:
    return A * A == A


def is_cyclic(A: Mat) -> bool:
    """mu_A = chi_A, tested by degree."""
    return min_poly(A).degree() == A.n


def _squarefree_mu(mu: Poly) -> bool:
    dmu = mu.derivative()
    if dmu.is_zero():
        return mu.degree() == 0
    F = mu.field
    if _K.HAVE:
        t = F.np_tables()
        if t is not None:
            g = _K.poly_gcd_t(
                _np.array(mu.coeffs, dtype=_np.int64),
                _np.array(dmu.coeffs, dtype=_np.int64),
                t[1], t[2], t[3],
            )
            return g.shape[0] == 1
    return gcd_poly(mu, dmu).degree() == 0


def is_semisimple(A: Mat) -> bool:
    """mu_A squarefree; over a finite field separability is automatic."""
    return _squarefree_mu(min_poly(A))


def poly_roots(f: Poly) -> list[int]:
    """Roots in the base field, by scanning codes (q within table range)."""
    F = f.field
    coeffs = f.coeffs
    if not coeffs:
        return list(range(F.q))
    if _K.HAVE:
        t = F.np_tables()
        if t is not None:
            return _K.poly_roots_scan(_np.array(coeffs, dtype=_np.int64), F.q, t[0], t[2]).tolist()
    add, mul = F.add, F.mul
    out = []
    for a in range(F.q):
        acc = 0
        for c in reversed(coeffs):
            acc = add(mul(acc, a), c)
        if acc == 0:
            out.append(a)
    return out


def is_split_semisimple(A: Mat) -> bool:
    """mu_A a product of distinct linear factors, i.e. mu | x^q - x."""
    mu = min_poly(A)
    F = A.field
    if F.q <= 512:
        # split iff squarefree with a full set of roots
        if len(poly_roots(mu)) != mu.degree():
            return False
        dmu = mu.derivative()
        return not dmu.is_zero() and gcd_poly(mu, dmu).degree() == 0
    x = Poly.x(F)
    return (x.pow_mod(F.q, mu) - x % mu).is_zero()


def gl_order_factored(field: Field, n: int) -> dict[int, int]:
    """|GL_n(F_q)| as a prime factorization."""
    q = field.q
    fac: dict[int, int] = {}
    p_exp = field.l * (n * (n - 1) // 2)
    if p_exp:
        fac[field.p] = p_exp
    for j in range(1, n + 1):
        for r, e in factor_int(q**j - 1).items():
            fac[r] = fac.get(r, 0) + e
    return fac


def order(A: Mat) -> int:
    """Multiplicative order of an invertible matrix."""
    if not A.is_invertible():
        raise NotInvertible("order() needs an invertible matrix")
    fac = gl_order_factored(A.field, A.n)
    o = 1
    for r, e in fac.items():
        o *= r**e
    I = Mat.identity(A.field, A.n)
    for r in fac:
        while o % r == 0 and A ** (o // r) == I:
            o //= r
    return o


# ---------------------------------------------------------------------------
# enumeration


def enumerate_matrices(field: Field, n: int):
    """Every matrix in M_n(F_q) exactly once, in code order."""
    total = field.q ** (n * n)
    config.check_budget(total, f"matrix enumeration q^(n^2) = {total}")
    for code in range(total):
        yield Mat.from_code(field, n, code)


def enumerate_invertible(field: Field, n: int):
    for A in enumerate_matrices(field, n):
        if A.is_invertible():
            yield A


def gl_exponent(field: Field, n: int) -> tuple[int, int]:
    """(e, w): the exponent of GL_n(F_q) and the product of its prime divisors."""
    e = 1
    for A in enumerate_invertible(field, n):
        o = order(A)
        e = e * o // gcd(e, o)
    w = 1
    for r in factor_int(e):
        w *= r
    return e, w

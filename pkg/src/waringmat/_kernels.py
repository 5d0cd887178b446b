"""Optional jitted kernels for the table-driven hot paths.

Everything here mirrors a pure-Python implementation elsewhere in the
package bit for bit (same pivoting, same normalization); the kernels
only exist to make the census and the bulk acceptance sweeps fast.
Set WARINGMAT_NO_JIT=1 to force the pure-Python paths.
"""

from __future__ import annotations

import os

HAVE = False

if not os.environ.get("WARINGMAT_NO_JIT"):
    try:
        import numpy as np
        from numba import njit

        HAVE = True
    except Exception:  # pragma: no cover - numba genuinely absent
        HAVE = False

if HAVE:

    @njit(cache=True)
    def matmul(A, B, add2, mul2):
        n = A.shape[0]
        out = np.zeros((n, n), dtype=np.int64)
        for i in range(n):
            for j in range(n):
                acc = 0
                for t in range(n):
                    x = A[i, t]
                    y = B[t, j]
                    if x != 0 and y != 0:
                        acc = add2[acc, mul2[x, y]]
                out[i, j] = acc
        return out

    @njit(cache=True)
    def matpow(A, e, add2, mul2):
        n = A.shape[0]
        R = np.zeros((n, n), dtype=np.int64)
        for i in range(n):
            R[i, i] = 1
        base = A.copy()
        while e > 0:
            if e & 1:
                R = matmul(R, base, add2, mul2)
            e >>= 1
            if e > 0:
                base = matmul(base, base, add2, mul2)
        return R

    @njit(cache=True)
    def matvec(A, v, add2, mul2):
        n = A.shape[0]
        out = np.zeros(n, dtype=np.int64)
        for i in range(n):
            acc = 0
            for t in range(n):
                x = A[i, t]
                y = v[t]
                if x != 0 and y != 0:
                    acc = add2[acc, mul2[x, y]]
            out[i] = acc
        return out

    @njit(cache=True)
    def echelon(M, sub2, mul2, inv1, neg1, want_aug):
        """(rref, pivots, rank, det, aug); same pivoting as the Python path."""
        n = M.shape[0]
        rows = M.copy()
        if want_aug:
            aug = np.zeros((n, n), dtype=np.int64)
            for i in range(n):
                aug[i, i] = 1
        else:
            aug = np.zeros((1, 1), dtype=np.int64)
        det = 1
        pivots = np.full(n, -1, dtype=np.int64)
        r = 0
        for c in range(n):
            piv = -1
            for i in range(r, n):
                if rows[i, c] != 0:
                    piv = i
                    break
            if piv < 0:
                det = 0
                continue
            if piv != r:
                for j in range(n):
                    tmp = rows[r, j]
                    rows[r, j] = rows[piv, j]
                    rows[piv, j] = tmp
                if want_aug:
                    for j in range(n):
                        tmp = aug[r, j]
                        aug[r, j] = aug[piv, j]
                        aug[piv, j] = tmp
                det = neg1[det]
            pv = rows[r, c]
            det = mul2[det, pv]
            if pv != 1:
                ipv = inv1[pv]
                for j in range(n):
                    rows[r, j] = mul2[ipv, rows[r, j]]
                if want_aug:
                    for j in range(n):
                        aug[r, j] = mul2[ipv, aug[r, j]]
            for i in range(n):
                if i != r and rows[i, c] != 0:
                    f = rows[i, c]
                    for j in range(n):
                        rows[i, j] = sub2[rows[i, j], mul2[f, rows[r, j]]]
                    if want_aug:
                        for j in range(n):
                            aug[i, j] = sub2[aug[i, j], mul2[f, aug[r, j]]]
            pivots[r] = c
            r += 1
        if r < n:
            det = 0
        return rows, pivots, r, det, aug

    @njit(cache=True)
    def annihilator(A, v, add2, sub2, mul2, inv1):
        """Monic annihilator coefficients of v under A (little-endian)."""
        n = A.shape[0]
        basis = np.zeros((n + 1, n), dtype=np.int64)
        combos = np.zeros((n + 1, n + 2), dtype=np.int64)
        pivs = np.zeros(n + 1, dtype=np.int64)
        count = 0
        cur = v.copy()
        for j in range(n + 1):
            red = cur.copy()
            comb = np.zeros(n + 2, dtype=np.int64)
            comb[j] = 1
            for t in range(count):
                c = red[pivs[t]]
                if c != 0:
                    for x in range(n):
                        b = basis[t, x]
                        if b != 0:
                            red[x] = sub2[red[x], mul2[c, b]]
                    for x in range(j + 1):
                        b = combos[t, x]
                        if b != 0:
                            comb[x] = sub2[comb[x], mul2[c, b]]
            piv = -1
            for x in range(n):
                if red[x] != 0:
                    piv = x
                    break
            if piv < 0:
                return comb[: j + 1].copy()
            ic = inv1[red[piv]]
            for x in range(n):
                basis[count, x] = mul2[ic, red[x]]
            for x in range(j + 1):
                combos[count, x] = mul2[ic, comb[x]]
            pivs[count] = piv
            count += 1
            cur = matvec(A, cur, add2, mul2)
        return np.zeros(0, dtype=np.int64)  # unreachable

    @njit(cache=True)
    def krylov_rank(A, v, add2, sub2, mul2, inv1):
        """Rank of [v, Av, ..., A^{n-1}v] by on-the-fly elimination."""
        n = A.shape[0]
        basis = np.zeros((n, n), dtype=np.int64)
        pivs = np.zeros(n, dtype=np.int64)
        count = 0
        cur = v.copy()
        for _ in range(n):
            red = cur.copy()
            for t in range(count):
                c = red[pivs[t]]
                if c != 0:
                    for x in range(n):
                        b = basis[t, x]
                        if b != 0:
                            red[x] = sub2[red[x], mul2[c, b]]
            piv = -1
            for x in range(n):
                if red[x] != 0:
                    piv = x
                    break
            if piv >= 0:
                ic = inv1[red[piv]]
                for x in range(n):
                    basis[count, x] = mul2[ic, red[x]]
                pivs[count] = piv
                count += 1
                if count == n:
                    return count
            cur = matvec(A, cur, add2, mul2)
        return count

    @njit(cache=True)
    def banded_chain(A, v, u, add2, sub2, mul2):
        """Rows = the basis w_1 = v, w_{i+1} = A w_i - u_i w_i."""
        n = A.shape[0]
        W = np.zeros((n, n), dtype=np.int64)
        for x in range(n):
            W[0, x] = v[x]
        for i in range(n - 1):
            w = matvec(A, W[i], add2, mul2)
            ui = u[i]
            if ui != 0:
                for x in range(n):
                    c = W[i, x]
                    if c != 0:
                        w[x] = sub2[w[x], mul2[ui, c]]
            for x in range(n):
                W[i + 1, x] = w[x]
        return W

    @njit(cache=True)
    def tri_root(T, lam, k, k_code, add2, sub2, mul2, inv1):
        """Upper-triangular stripe lifting; returns (ok, X)."""
        n = T.shape[0]
        X = np.zeros((n, n), dtype=np.int64)
        for i in range(n):
            X[i, i] = lam[i]
        for m in range(1, n):
            P = matpow(X, k, add2, mul2)
            for i in range(n - m):
                j = i + m
                li = lam[i]
                lj = lam[j]
                if li == lj:
                    acc = k_code
                    for _ in range(k - 1):
                        acc = mul2[acc, li]
                    lam_ij = acc
                else:
                    pi = 1
                    pj = 1
                    for _ in range(k):
                        pi = mul2[pi, li]
                        pj = mul2[pj, lj]
                    lam_ij = mul2[sub2[pi, pj], inv1[sub2[li, lj]]]
                if lam_ij == 0:
                    return False, X
                delta = sub2[T[i, j], P[i, j]]
                if delta != 0:
                    X[i, j] = mul2[delta, inv1[lam_ij]]
        P = matpow(X, k, add2, mul2)
        for i in range(n):
            for j in range(n):
                if P[i, j] != T[i, j]:
                    return False, X
        return True, X

    @njit(cache=True)
    def poly_roots_scan(coeffs, q, add2, mul2):
        out = np.zeros(q, dtype=np.int64)
        cnt = 0
        d = coeffs.shape[0]
        for a in range(q):
            acc = 0
            for t in range(d - 1, -1, -1):
                acc = add2[mul2[acc, a], coeffs[t]]
            if acc == 0:
                out[cnt] = a
                cnt += 1
        return out[:cnt].copy()

if HAVE:

    @njit(cache=True)
    def _p_deg(a):
        for i in range(a.shape[0] - 1, -1, -1):
            if a[i] != 0:
                return i
        return -1

    @njit(cache=True)
    def _p_mod(a, b, sub2, mul2, inv1):
        """a mod b for little-endian coefficient arrays (b nonzero)."""
        r = a.copy()
        da = _p_deg(r)
        db = _p_deg(b)
        ilead = inv1[b[db]]
        while da >= db:
            c = mul2[r[da], ilead]
            if c != 0:
                for j in range(db + 1):
                    bj = b[j]
                    if bj != 0:
                        r[da - db + j] = sub2[r[da - db + j], mul2[c, bj]]
            da -= 1
            while da >= 0 and r[da] == 0:
                da -= 1
        return r[: max(da + 1, 0)].copy()

    @njit(cache=True)
    def _p_gcd(a, b, sub2, mul2, inv1):
        x = a.copy()
        y = b.copy()
        while _p_deg(y) >= 0:
            r = _p_mod(x, y, sub2, mul2, inv1)
            x = y
            y = r
        dx = _p_deg(x)
        out = x[: dx + 1].copy()
        if dx >= 0 and out[dx] != 1:
            c = inv1[out[dx]]
            for i in range(dx + 1):
                out[i] = mul2[c, out[i]]
        return out

    @njit(cache=True)
    def _p_mul(a, b, add2, mul2):
        da = _p_deg(a)
        db = _p_deg(b)
        out = np.zeros(da + db + 1, dtype=np.int64)
        for i in range(da + 1):
            x = a[i]
            if x != 0:
                for j in range(db + 1):
                    y = b[j]
                    if y != 0:
                        out[i + j] = add2[out[i + j], mul2[x, y]]
        return out

    @njit(cache=True)
    def _p_div_exact(a, b, sub2, mul2, inv1):
        """a // b assuming b | a."""
        r = a.copy()
        da = _p_deg(r)
        db = _p_deg(b)
        q = np.zeros(max(da - db + 1, 1), dtype=np.int64)
        ilead = inv1[b[db]]
        while da >= db:
            c = mul2[r[da], ilead]
            if c != 0:
                q[da - db] = c
                for j in range(db + 1):
                    bj = b[j]
                    if bj != 0:
                        r[da - db + j] = sub2[r[da - db + j], mul2[c, bj]]
            da -= 1
            while da >= 0 and r[da] == 0:
                da -= 1
        return q

    @njit(cache=True)
    def min_poly_t(A, add2, sub2, mul2, inv1):
        """Minimal polynomial coefficients, little-endian monic."""
        n = A.shape[0]
        mu = np.zeros(1, dtype=np.int64)
        have = False
        v = np.zeros(n, dtype=np.int64)
        for i in range(n):
            for x in range(n):
                v[x] = 0
            v[i] = 1
            ann = annihilator(A, v, add2, sub2, mul2, inv1)
            if not have:
                mu = ann
                have = True
            else:
                dm = _p_deg(mu)
                da = _p_deg(ann)
                same = dm == da
                if same:
                    for t in range(dm + 1):
                        if mu[t] != ann[t]:
                            same = False
                            break
                if not same:
                    g = _p_gcd(mu, ann, sub2, mul2, inv1)
                    if _p_deg(g) == da:
                        pass  # ann divides mu
                    elif _p_deg(g) == dm:
                        mu = ann  # mu divides ann
                    else:
                        mu = _p_mul(_p_div_exact(mu, g, sub2, mul2, inv1), ann, add2, mul2)
            if _p_deg(mu) == n:
                break
        return mu

    @njit(cache=True)
    def poly_gcd_t(a, b, sub2, mul2, inv1):
        return _p_gcd(a, b, sub2, mul2, inv1)

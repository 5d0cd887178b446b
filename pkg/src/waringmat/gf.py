"""Finite fields GF(p^l) with canonical moduli, plus the scalar Waring layer.

Elements are stored as integer codes ``sum(c_i * p**i)`` where
``(c_0, ..., c_{l-1})`` are the coordinates in the power basis of the
generator ``g`` (the class of x modulo the field's modulus polynomial).
The modulus is always the lexicographically smallest monic irreducible
of degree ``l`` over GF(p), comparing coefficient tuples
``(c_0, ..., c_{l-1})``, so serialized data is reproducible across runs.
All deterministic enumeration clauses in this package use the integer
code order.

The scalar Waring layer knows about power residues ``{a**d}``, the
sumset closure constant gamma and its stable span GF(p^ell), the
coprime split k = k1*k2, exact solution counts for diagonal power
equations, and deterministic solvers for ``b = x**k + y**k`` with
excluded values.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd, isqrt

from . import config
from .errors import BudgetExceeded, DegreeZero, NotPrime

# Size guards: full q x q operation tables, full-enumeration root maps,
# and exp/log tables each stop at a limit; beyond it arithmetic falls
# back to digit/log computations or (for roots) to the table-free solver.
_TABLE_LIMIT = 512
_ENUM_LIMIT = 1 << 16
_EXP_LIMIT = 1 << 20


# ---------------------------------------------------------------------------
# integer helpers


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def factor_int(n: int) -> dict[int, int]:
    """Prime factorization by trial division, as {prime: exponent}."""
    out: dict[int, int] = {}
    if n <= 1:
        return out
    for r in (2, 3):
        while n % r == 0:
            out[r] = out.get(r, 0) + 1
            n //= r
    f = 5
    while f * f <= n:
        for r in (f, f + 2):
            while n % r == 0:
                out[r] = out.get(r, 0) + 1
                n //= r
        f += 6
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def icbrt(n: int) -> int:
    """Integer cube root (largest t with t**3 <= n)."""
    if n < 0:
        raise ValueError("negative")
    t = round(n ** (1.0 / 3.0))
    while t**3 > n:
        t -= 1
    while (t + 1) ** 3 <= n:
        t += 1
    return t


# ---------------------------------------------------------------------------
# generic dense polynomial helpers over any field-like object
#
# Polynomials are lists of codes, little-endian, no trailing zeros.
# The field-like object must provide add/sub/mul/inv on codes.


def _ptrim(c):
    i = len(c)
    while i > 0 and c[i - 1] == 0:
        i -= 1
    return c[:i]


def _pmul(F, a, b):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    out[i + j] = F.add(out[i + j], F.mul(x, y))
    return _ptrim(out)


def _pdivmod(F, a, b):
    a = list(a)
    db, da = len(b) - 1, len(a) - 1
    if db < 0:
        raise ZeroDivisionError("polynomial division by zero")
    inv_lead = F.inv(b[-1])
    q = [0] * max(da - db + 1, 0)
    while da >= db:
        c = F.mul(a[da], inv_lead)
        if c:
            q[da - db] = c
            for j in range(db + 1):
                a[da - db + j] = F.sub(a[da - db + j], F.mul(c, b[j]))
        da -= 1
        while da >= 0 and a[da] == 0 and da >= db:
            da -= 1
        a = a[: max(da + 1, 0)]
        da = len(a) - 1
    return _ptrim(q), _ptrim(a)


def _pmod(F, a, b):
    return _pdivmod(F, a, b)[1]


def _ppowmod(F, base, e, mod):
    result = [1]
    base = _pmod(F, base, mod)
    while e > 0:
        if e & 1:
            result = _pmod(F, _pmul(F, result, base), mod)
        base = _pmod(F, _pmul(F, base, base), mod)
        e >>= 1
    return result


def _pgcd(F, a, b):
    a, b = _ptrim(list(a)), _ptrim(list(b))
    while b:
        a, b = b, _pmod(F, a, b)
    if a:
        c = F.inv(a[-1])
        a = [F.mul(c, x) for x in a]
    return a


def _rabin_irreducible(F, f, q: int) -> bool:
    """Rabin's criterion for a monic f over a field of q elements."""
    n = len(f) - 1
    if n <= 0:
        return False
    if n == 1:
        return True
    x = [0, 1]
    for r in factor_int(n):
        h = _ppowmod(F, x, q ** (n // r), f)
        h = _ptrim([F.sub(a, b) for a, b in zip(h + [0] * 3, x + [0] * len(h))])
        if len(_pgcd(F, h, f)) != 1:
            return False
    h = _ppowmod(F, x, q**n, f)
    h = _ptrim([F.sub(a, b) for a, b in zip(h + [0] * 3, x + [0] * len(h))])
    return not h


class _PrimeOps:
    """Arithmetic mod p on plain ints, used before a Field exists."""

    __slots__ = ("p",)

    def __init__(self, p):
        self.p = p

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def mul(self, a, b):
        return (a * b) % self.p

    def inv(self, a):
        return pow(a, -1, self.p)


def _canonical_modulus(p: int, l: int) -> tuple[int, ...]:
    """Lex-smallest monic irreducible of degree l over GF(p).

    Coefficient tuples (c_0, ..., c_{l-1}) are scanned in lexicographic
    order, c_0 most significant.
    """
    ops = _PrimeOps(p)
    # Iterate c_0 slowest: build the tuple from an index in base p with
    # c_0 as the most significant digit.
    for idx in range(p**l):
        digits = []
        v = idx
        for _ in range(l):
            digits.append(v % p)
            v //= p
        coeffs = tuple(reversed(digits))  # (c_0, ..., c_{l-1})
        f = list(coeffs) + [1]
        if _rabin_irreducible(ops, f, p):
            return tuple(f)
    raise AssertionError("no irreducible polynomial found")  # unreachable


# ---------------------------------------------------------------------------
# Field


class FieldElem:
    """Element of a Field, wrapping an integer code."""

    __slots__ = ("field", "code")

    def __init__(self, field: "Field", code: int):
        self.field = field
        self.code = code

    @property
    def coeffs(self) -> tuple[int, ...]:
        return self.field.digits(self.code)

    def _coerce(self, other) -> int:
        if isinstance(other, FieldElem):
            if other.field is not self.field:
                raise ValueError("field mismatch")
            return other.code
        return self.field.elem(other).code

    def __add__(self, other):
        return FieldElem(self.field, self.field.add(self.code, self._coerce(other)))

    __radd__ = __add__

    def __sub__(self, other):
        return FieldElem(self.field, self.field.sub(self.code, self._coerce(other)))

    def __rsub__(self, other):
        return FieldElem(self.field, self.field.sub(self._coerce(other), self.code))

    def __mul__(self, other):
        return FieldElem(self.field, self.field.mul(self.code, self._coerce(other)))

    __rmul__ = __mul__

    def __truediv__(self, other):
        return FieldElem(self.field, self.field.mul(self.code, self.field.inv(self._coerce(other))))

    def __neg__(self):
        return FieldElem(self.field, self.field.neg(self.code))

    def __pow__(self, e: int):
        return FieldElem(self.field, self.field.pow(self.code, e))

    def __eq__(self, other):
        if isinstance(other, FieldElem):
            return self.field is other.field and self.code == other.code
        if isinstance(other, (int, str)):
            return self.code == self.field.elem(other).code
        return NotImplemented

    def __hash__(self):
        return hash((id(self.field), self.code))

    def __bool__(self):
        return self.code != 0

    def __int__(self):
        return self.code

    def __repr__(self):
        return f"{self.field.spec_string}:{self.field.format_code(self.code)}"

    def __str__(self):
        return self.field.format_code(self.code)


class Field:
    """GF(p^l) with the canonical modulus and table-based arithmetic."""

    __slots__ = (
        "p", "l", "q", "modulus", "generator",
        "_exp", "_log", "_add_t", "_sub_t", "_mul_t", "_inv_t", "_neg_t",
        "_digit_cache", "_root_maps", "_power_sets", "_sylow_gens", "_np_t",
    )

    def __init__(self, p: int, l: int, _modulus: tuple[int, ...] | None = None):
        if not is_prime(p):
            raise NotPrime(f"{p} is not prime")
        if l < 1:
            raise DegreeZero("extension degree must be >= 1")
        self.p = p
        self.l = l
        self.q = p**l
        if self.q > _EXP_LIMIT:
            raise BudgetExceeded(f"GF({p}^{l}) is beyond the table limit {_EXP_LIMIT}")
        self.modulus = _modulus if _modulus is not None else _canonical_modulus(p, l)
        self._digit_cache = None
        self._root_maps = {}
        self._power_sets = {}
        self._sylow_gens = {}
        self._np_t = None
        self._build_tables()

    def np_tables(self):
        """(add2, sub2, mul2, inv1, neg1) as numpy arrays for the jitted
        kernels, or None when tables are unavailable."""
        if self._np_t is not None:
            return self._np_t if self._np_t is not False else None
        from . import _kernels

        if not _kernels.HAVE or self._mul_t is None:
            self._np_t = False
            return None
        import numpy as np

        add2 = np.array(self._add_t, dtype=np.int64)
        sub2 = np.array(self._sub_t, dtype=np.int64)
        mul2 = np.array(self._mul_t, dtype=np.int64)
        inv1 = np.array(self._inv_t, dtype=np.int64)
        if self.p == 2:
            neg1 = np.arange(self.q, dtype=np.int64)
        else:
            neg1 = np.array([self.neg_raw(a) for a in range(self.q)], dtype=np.int64)
        self._np_t = (add2, sub2, mul2, inv1, neg1)
        return self._np_t

    # -- representation -----------------------------------------------------

    @property
    def size(self) -> int:
        return self.q

    @property
    def spec_string(self) -> str:
        return f"{self.p}^{self.l}"

    def __repr__(self):
        return f"GF({self.p}^{self.l})" if self.l > 1 else f"GF({self.p})"

    def __reduce__(self):
        return (build_field, (self.p, self.l))

    def digits(self, code: int) -> tuple[int, ...]:
        out = []
        for _ in range(self.l):
            out.append(code % self.p)
            code //= self.p
        return tuple(out)

    def from_digits(self, digits) -> int:
        code = 0
        for c in reversed(list(digits)):
            code = code * self.p + c % self.p
        return code

    def elements(self):
        return (FieldElem(self, c) for c in range(self.q))

    # -- table construction ---------------------------------------------------

    def _raw_mul(self, a: int, b: int) -> int:
        """Multiplication straight from the polynomial model (no tables)."""
        p, l = self.p, self.l
        if p == 2:
            mask = 0
            for i, c in enumerate(self.modulus):
                if c:
                    mask |= 1 << i
            res = 0
            while b:
                if b & 1:
                    res ^= a
                b >>= 1
                a <<= 1
                if (a >> l) & 1:
                    a ^= mask
            return res
        da = self.digits(a)
        db = self.digits(b)
        prod = [0] * (2 * l - 1)
        for i, x in enumerate(da):
            if x:
                for j, y in enumerate(db):
                    prod[i + j] = (prod[i + j] + x * y) % p
        for i in range(2 * l - 2, l - 1, -1):
            c = prod[i]
            if c:
                prod[i] = 0
                for j in range(l):
                    prod[i - l + j] = (prod[i - l + j] - c * self.modulus[j]) % p
        return self.from_digits(prod[:l])

    def _raw_pow(self, a: int, e: int) -> int:
        r = 1
        while e > 0:
            if e & 1:
                r = self._raw_mul(r, a)
            a = self._raw_mul(a, a)
            e >>= 1
        return r

    def _build_tables(self):
        q = self.q
        m = q - 1
        # multiplicative generator: smallest code with full order
        if m == 1:
            gen = 1
        else:
            fac = factor_int(m)
            gen = None
            for c in range(2, q):
                if all(self._raw_pow(c, m // r) != 1 for r in fac):
                    gen = c
                    break
            assert gen is not None
        self.generator = gen
        exp = [1] * m
        for i in range(1, m):
            exp[i] = self._raw_mul(exp[i - 1], gen)
        log = [-1] * q
        for i, v in enumerate(exp):
            log[v] = i
        self._exp = exp
        self._log = log
        p, l = self.p, self.l
        if p == 2:
            self._neg_t = None
        else:
            self._neg_t = [self.from_digits(tuple((-d) % p for d in self.digits(c))) for c in range(q)] if q <= _ENUM_LIMIT else None
        if q <= _TABLE_LIMIT:
            if l == 1:
                add_t = [[(a + b) % p for b in range(q)] for a in range(q)]
            else:
                add_t = []
                for a in range(q):
                    da = self.digits(a)
                    row = []
                    for b in range(q):
                        db = self.digits(b)
                        row.append(self.from_digits(tuple((x + y) % p for x, y in zip(da, db))))
                    add_t.append(row)
            mul_t = [[0] * q for _ in range(q)]
            for a in range(1, q):
                la = log[a]
                row = mul_t[a]
                for b in range(1, q):
                    row[b] = exp[(la + log[b]) % m]
            inv_t = [0] * q
            for a in range(1, q):
                inv_t[a] = exp[(m - log[a]) % m]
            neg_row = [self.neg_raw(b) for b in range(q)] if p != 2 else None
            sub_t = add_t if p == 2 else [[add_t[a][neg_row[b]] for b in range(q)] for a in range(q)]
            self._add_t, self._sub_t, self._mul_t, self._inv_t = add_t, sub_t, mul_t, inv_t
        else:
            self._add_t = self._sub_t = self._mul_t = self._inv_t = None

    def neg_raw(self, a: int) -> int:
        if self.p == 2:
            return a
        p = self.p
        return self.from_digits(tuple((-x) % p for x in self.digits(a)))

    # -- arithmetic on codes --------------------------------------------------

    def add(self, a: int, b: int) -> int:
        if self.p == 2:
            return a ^ b
        t = self._add_t
        if t is not None:
            return t[a][b]
        p = self.p
        return self.from_digits(tuple((x + y) % p for x, y in zip(self.digits(a), self.digits(b))))

    def neg(self, a: int) -> int:
        if self.p == 2:
            return a
        t = self._neg_t
        if t is not None:
            return t[a]
        p = self.p
        return self.from_digits(tuple((-x) % p for x in self.digits(a)))

    def sub(self, a: int, b: int) -> int:
        if self.p == 2:
            return a ^ b
        t = self._sub_t
        if t is not None:
            return t[a][b]
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        t = self._mul_t
        if t is not None:
            return t[a][b]
        if a == 0 or b == 0:
            return 0
        return self._exp[(self._log[a] + self._log[b]) % (self.q - 1)]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("0 has no inverse")
        t = self._inv_t
        if t is not None:
            return t[a]
        m = self.q - 1
        return self._exp[(m - self._log[a]) % m]

    def pow(self, a: int, e: int) -> int:
        if e == 0:
            return 1
        if a == 0:
            return 0
        m = self.q - 1
        return self._exp[(self._log[a] * e) % m]

    # -- parsing / printing ---------------------------------------------------

    def elem(self, x) -> FieldElem:
        """Coerce an int (prime-subfield value), literal string, or FieldElem."""
        if isinstance(x, FieldElem):
            if x.field is not self:
                raise ValueError("field mismatch")
            return x
        if isinstance(x, int):
            return FieldElem(self, x % self.p)
        if isinstance(x, str):
            return FieldElem(self, self.parse_code(x))
        raise TypeError(f"cannot coerce {x!r} into {self!r}")

    def parse_code(self, text: str) -> int:
        """Parse an element literal: an integer, or a polynomial in g.

        Examples over GF(9): "0", "2", "g", "1+2g", "2g^1+1", "2+g".
        """
        s = text.replace(" ", "")
        if not s:
            raise ValueError("empty element literal")
        s = s.replace("-", "+-")
        if s.startswith("+"):
            s = s[1:]
        digits = [0] * self.l
        for term in s.split("+"):
            if not term:
                raise ValueError(f"bad element literal {text!r}")
            neg = term.startswith("-")
            if neg:
                term = term[1:]
            if "g" in term:
                coef_s, _, pow_s = term.partition("g")
                coef_s = coef_s.rstrip("*")
                coef = int(coef_s) if coef_s else 1
                if pow_s.startswith("^"):
                    e = int(pow_s[1:])
                elif not pow_s:
                    e = 1
                else:
                    raise ValueError(f"bad element literal {text!r}")
            else:
                coef = int(term)
                e = 0
            if e >= self.l:
                raise ValueError(f"power g^{e} out of range in {text!r} (degree {self.l})")
            if neg:
                coef = -coef
            digits[e] = (digits[e] + coef) % self.p
        return self.from_digits(digits)

    def format_code(self, code: int) -> str:
        if self.l == 1:
            return str(code)
        terms = []
        for i, c in enumerate(self.digits(code)):
            if not c:
                continue
            if i == 0:
                terms.append(str(c))
            elif i == 1:
                terms.append("g" if c == 1 else f"{c}g")
            else:
                terms.append(f"g^{i}" if c == 1 else f"{c}g^{i}")
        return "+".join(terms) if terms else "0"

    # -- powers and roots -------------------------------------------------------

    def _k_reduced(self, k: int) -> int:
        if k < 1:
            raise ValueError("exponent must be >= 1")
        m = self.q - 1
        if m == 0:
            return 1
        kk = k % m
        return kk if kk else m

    def kth_root_map(self, k: int) -> dict[int, tuple[int, ...]]:
        """Map value -> sorted tuple of its k-th roots, by full enumeration."""
        kk = self._k_reduced(k)
        cached = self._root_maps.get(kk)
        if cached is None:
            out: dict[int, list[int]] = {}
            for x in range(self.q):
                out.setdefault(self.pow(x, kk), []).append(x)
            cached = {v: tuple(roots) for v, roots in out.items()}
            self._root_maps[kk] = cached
        return cached

    def kth_powers(self, k: int) -> frozenset[int]:
        kk = self._k_reduced(k)
        cached = self._power_sets.get(kk)
        if cached is None:
            cached = frozenset(self.pow(x, kk) for x in range(self.q))
            self._power_sets[kk] = cached
        return cached

    def kth_roots(self, a: int, k: int) -> tuple[int, ...]:
        return self.kth_root_map(k).get(a, ())

    def kth_root(self, a: int, k: int) -> int | None:
        roots = self.kth_roots(a, k)
        return roots[0] if roots else None


_FIELD_CACHE: dict[tuple[int, int], Field] = {}


def build_field(p: int, l: int = 1) -> Field:
    """The field GF(p^l) with its canonical modulus (cached)."""
    key = (int(p), int(l))
    fld = _FIELD_CACHE.get(key)
    if fld is None:
        fld = Field(*key)
        _FIELD_CACHE[key] = fld
    return fld


def parse_field(spec: str) -> Field:
    """Parse a field spec string like "3^2" or "7"."""
    s = spec.strip()
    if "^" in s:
        p_s, _, l_s = s.partition("^")
        return build_field(int(p_s), int(l_s))
    return build_field(int(s), 1)


# ---------------------------------------------------------------------------
# extension fields F_{q^r} over a base Field (relative model)


class ExtensionField:
    """GF(q^r) as F_q[y]/(h) with h the canonical irreducible over F_q.

    Codes are integers ``sum(c_i * q**i)`` with digits c_i base-field
    codes.  Arithmetic is polynomial arithmetic mod h; no tables are
    built, so this scales to large cardinalities (pow is O(r^2 log e)).
    """

    __slots__ = ("base", "r", "size", "modulus", "_sylow_gens")

    def __init__(self, base: Field, r: int, modulus=None):
        if r < 1:
            raise DegreeZero("extension degree must be >= 1")
        self.base = base
        self.r = r
        self.size = base.q**r
        if modulus is not None:
            modulus = tuple(modulus)
            if len(modulus) != r + 1 or modulus[-1] != 1:
                raise ValueError("modulus must be monic of degree r")
            if not _rabin_irreducible(base, list(modulus), base.q):
                raise ValueError("modulus must be irreducible over the base field")
            self.modulus = modulus
        else:
            self.modulus = self._canonical_modulus()
        self._sylow_gens = {}

    def _canonical_modulus(self) -> tuple[int, ...]:
        base, r = self.base, self.r
        if r == 1:
            return (0, 1)
        for idx in range(base.q**r):
            digits = []
            v = idx
            for _ in range(r):
                digits.append(v % base.q)
                v //= base.q
            coeffs = tuple(reversed(digits))
            f = list(coeffs) + [1]
            if _rabin_irreducible(base, f, base.q):
                return tuple(f)
        raise AssertionError("no irreducible polynomial found")

    def __repr__(self):
        return f"GF(({self.base.spec_string})^{self.r})"

    def digits(self, code: int) -> list[int]:
        q = self.base.q
        out = []
        for _ in range(self.r):
            out.append(code % q)
            code //= q
        return out

    def from_digits(self, digits) -> int:
        q = self.base.q
        code = 0
        for c in reversed(list(digits)):
            code = code * q + c
        return code

    def embed(self, base_code: int) -> int:
        """F_q -> F_{q^r} as constant polynomials; codes are unchanged."""
        return base_code

    def add(self, a: int, b: int) -> int:
        K = self.base
        return self.from_digits([K.add(x, y) for x, y in zip(self.digits(a), self.digits(b))])

    def neg(self, a: int) -> int:
        K = self.base
        return self.from_digits([K.neg(x) for x in self.digits(a)])

    def sub(self, a: int, b: int) -> int:
        K = self.base
        return self.from_digits([K.sub(x, y) for x, y in zip(self.digits(a), self.digits(b))])

    def mul(self, a: int, b: int) -> int:
        K, r = self.base, self.r
        da, db = self.digits(a), self.digits(b)
        prod = [0] * (2 * r - 1)
        for i, x in enumerate(da):
            if x:
                for j, y in enumerate(db):
                    if y:
                        prod[i + j] = K.add(prod[i + j], K.mul(x, y))
        for i in range(2 * r - 2, r - 1, -1):
            c = prod[i]
            if c:
                prod[i] = 0
                for j in range(r):
                    m = self.modulus[j]
                    if m:
                        prod[i - r + j] = K.sub(prod[i - r + j], K.mul(c, m))
        return self.from_digits(prod[:r])

    def pow(self, a: int, e: int) -> int:
        if e == 0:
            return 1
        if a == 0:
            return 0
        e %= self.size - 1
        if e == 0:
            return 1
        result = 1
        while e > 0:
            if e & 1:
                result = self.mul(result, a)
            a = self.mul(a, a)
            e >>= 1
        return result

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("0 has no inverse")
        return self.pow(a, self.size - 2)

    def kth_roots(self, a: int, k: int) -> tuple[int, ...]:
        if self.size <= _ENUM_LIMIT:
            out = [x for x in range(self.size) if self.pow(x, k) == a]
            return tuple(out)
        y = _kth_root_large(self, a, k)
        if y is None:
            return ()
        d = gcd(k, self.size - 1)
        zeta = _unity_element(self, d)
        roots = []
        cur = y
        for _ in range(d):
            roots.append(cur)
            cur = self.mul(cur, zeta)
        return tuple(sorted(set(roots)))

    def kth_root(self, a: int, k: int) -> int | None:
        roots = self.kth_roots(a, k)
        return roots[0] if roots else None


# ---------------------------------------------------------------------------
# k-th roots in large cyclic groups (Adleman-Manders-Miller style)


def _sylow_generator(F, r: int):
    """Element of order r^s where r^s || (size-1); deterministic scan."""
    cached = F._sylow_gens.get(r)
    if cached is not None:
        return cached
    m = F.size - 1
    s = 0
    t = m
    while t % r == 0:
        t //= r
        s += 1
    assert s > 0
    for u in range(2, F.size):
        if F.pow(u, m // r) != 1:
            z = F.pow(u, t)
            F._sylow_gens[r] = (z, s, t)
            return z, s, t
    raise AssertionError("no Sylow generator found")


def _unity_element(F, d: int) -> int:
    """Element of order exactly d (d | size-1), via CRT of Sylow parts."""
    out = 1
    for r, e in factor_int(d).items():
        z, s, _t = _sylow_generator(F, r)
        out = F.mul(out, F.pow(z, r ** (s - e)))
    return out


def _kth_root_large(F, a: int, k: int) -> int | None:
    """One k-th root of a, or None, without enumerating the field."""
    if a == 0:
        return 0
    m = F.size - 1
    d = gcd(k, m)
    if F.pow(a, m // d) != 1:
        return None
    fac_m = factor_int(m)
    k1, k2 = 1, k
    for r in fac_m:
        while k2 % r == 0:
            k1 *= r
            k2 //= r
    y = F.pow(a, pow(k2 % m, -1, m)) if k2 % m != 1 else a
    for r, e in factor_int(k1).items():
        for _ in range(e):
            y = _amm_prime_root(F, y, r)
            if y is None:
                return None
    return y


def _amm_prime_root(F, c: int, r: int) -> int | None:
    m = F.size - 1
    if F.pow(c, m // r) != 1:
        return None
    if c == 1:
        return 1
    z, s, t = _sylow_generator(F, r)
    rs = r**s
    if t == 1:
        c_syl, c_t, y_t = c, 1, 1
    else:
        e_syl = (t * pow(t, -1, rs)) % m
        c_syl = F.pow(c, e_syl)
        c_t = F.pow(c, (1 - e_syl) % m)
        y_t = F.pow(c_t, pow(r, -1, t))
    # discrete log of c_syl in <z> by prime digits
    assert r <= 1_000_000, "prime too large for root digit scan"
    g_r = F.pow(z, r ** (s - 1))
    x = 0
    for j in range(s):
        w = F.pow(F.mul(c_syl, F.inv(F.pow(z, x))), r ** (s - 1 - j))
        xj = None
        probe = 1
        for cand in range(r):
            if probe == w:
                xj = cand
                break
            probe = F.mul(probe, g_r)
        if xj is None:
            return None
        x += xj * r**j
    if x % r != 0:
        return None
    y_s = F.pow(z, x // r)
    return F.mul(y_s, y_t)


# ---------------------------------------------------------------------------
# scalar Waring profile


@dataclass(frozen=True)
class ScalarWaringProfile:
    """Power residues of F_q for exponent k and their sumset closure."""

    field: Field
    k: int
    d: int
    d_m: tuple[int, ...]
    residues: frozenset[int]
    gamma: int
    ell: int
    k1: int
    k2: int


def scalar_profile(field: Field, k: int, mmax: int = 1) -> ScalarWaringProfile:
    """Residues {a^d}, the closure constant gamma, its span GF(p^ell),
    the subsidiary gcds d_m, and the split k = k1*k2.

    The s-fold sumsets of the residues increase until they stabilize on
    the subfield GF(p^ell); gamma is the first s where they do.  The
    stabilization index is at most d, which is asserted rather than used
    as a loop guard.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    q = field.q
    d = gcd(k, q - 1)
    residues = field.kth_powers(k)
    add = field.add
    level = set(residues)
    gamma = 1
    while True:
        nxt = {add(x, y) for x in level for y in residues}
        if nxt == level:
            break
        level = nxt
        gamma += 1
    assert 1 <= gamma <= d, f"sumset closure took {gamma} > d = {d} steps"
    span_size = len(level)
    ell = 0
    t = 1
    while t < span_size:
        t *= field.p
        ell += 1
    assert field.p**ell == span_size and field.l % ell == 0
    assert all(field.pow(x, field.p**ell) == x for x in level), "closure is not a subfield"
    d_m = tuple(gcd(k, q**m - 1) for m in range(1, mmax + 1))
    k1, k2 = 1, k
    for r in factor_int(k):
        if (q - 1) % r == 0:
            while k2 % r == 0:
                k1 *= r
                k2 //= r
    assert gcd(k2, q - 1) == 1
    return ScalarWaringProfile(field, k, d, d_m, residues, gamma, ell, k1, k2)


# ---------------------------------------------------------------------------
# two-power solver and exact diagonal equation counts


def _two_power_codes(F, b: int, k: int, exclude_x=(), exclude_y=()):
    """First (x, y) in code order with x^k + y^k = b, x/y outside the
    exclusion sets; None if no solution exists.

    F may be a Field or an ExtensionField.  Small fields use the full
    root map; large ones extract roots algebraically, which keeps the
    scan cheap whenever solutions are dense (the guaranteed regime
    q > (d-1)^4 + 2*(|E1|+|E2|)*d for b != 0).
    """
    E1 = frozenset(exclude_x)
    E2 = frozenset(exclude_y)
    if F.size <= _ENUM_LIMIT and isinstance(F, Field):
        roots = F.kth_root_map(k)
        sub = F.sub
        pw = F.pow
        for x in range(F.size):
            if x in E1:
                continue
            for y in roots.get(sub(b, pw(x, k)), ()):
                if y not in E2:
                    return (x, y)
        return None
    for x in range(F.size):
        if x in E1:
            continue
        z = F.sub(b, F.pow(x, k))
        for y in F.kth_roots(z, k):
            if y not in E2:
                return (x, y)
    return None


def two_power_solve(field, b, k: int, exclude_x=(), exclude_y=()):
    """Solve b = x^k + y^k over the field, scanning x in canonical order.

    Returns a code pair (x, y) or None when no solution exists.  When
    q > (d-1)^4 + 2*(|E1|+|E2|)*d and b != 0 a solution is guaranteed.
    Exclusion sets hold element codes (or FieldElem/literals for a Field).
    """
    if isinstance(field, Field):
        b_code = field.elem(b).code
        E1 = {field.elem(x).code for x in exclude_x}
        E2 = {field.elem(y).code for y in exclude_y}
    else:
        b_code = b
        E1, E2 = set(exclude_x), set(exclude_y)
    return _two_power_codes(field, b_code, k, E1, E2)


@dataclass(frozen=True)
class JolyCount:
    """Exact count for b = a_1 x_1^{k_1} + ... + a_s x_s^{k_s}."""

    n_solutions: int
    delta: int
    residual: int

    def bound_holds(self, q: int, s: int) -> bool:
        # residual <= delta * q^{(s-1)/2}, compared exactly as
        # residual^2 <= delta^2 * q^{s-1}
        return self.residual**2 <= self.delta**2 * q ** (s - 1)


def joly_counts_all(field: Field, exponents, coeffs=None) -> list[int]:
    """Solution counts for every right-hand side b at once, by
    convolving the per-variable value-count vectors (an aggregated form
    of the full q^s enumeration; exact)."""
    q = field.q
    ks = list(exponents)
    if coeffs is None:
        cs = [1] * len(ks)
    else:
        cs = [field.elem(c).code for c in coeffs]
    if any(c == 0 for c in cs):
        raise ValueError("coefficients must be nonzero")
    add = field.add
    mul = field.mul
    pw = field.pow
    np_add = None
    from . import _kernels

    if _kernels.HAVE:
        t = field.np_tables()
        if t is not None:
            import numpy as np

            np_add = t[0]
    vec: list[int] | None = None
    for k_i, a_i in zip(ks, cs):
        cnt = [0] * q
        for x in range(q):
            cnt[mul(a_i, pw(x, k_i))] += 1
        if vec is None:
            vec = cnt
        elif np_add is not None:
            import numpy as np

            out = np.zeros(q, dtype=np.int64)
            np.add.at(out, np_add, np.outer(np.array(vec, dtype=np.int64), np.array(cnt, dtype=np.int64)))
            vec = out.tolist()
        else:
            out = [0] * q
            for i, ui in enumerate(vec):
                if ui:
                    for j, vj in enumerate(cnt):
                        if vj:
                            out[add(i, j)] += ui * vj
            vec = out
    assert vec is not None
    return vec


def joly_count(field: Field, b, exponents, coeffs=None) -> JolyCount:
    """Exact N_s(b) for b != 0 plus Delta = prod(delta_i - 1) and the
    deviation |N_s(b) - q^{s-1}|."""
    ks = list(exponents)
    s = len(ks)
    if s < 2:
        raise ValueError("need at least two summands")
    b_code = field.elem(b).code
    if b_code == 0:
        raise ValueError("b must be nonzero")
    config.check_budget(field.q**s, "solution count")
    n = joly_counts_all(field, ks, coeffs)[b_code]
    delta = 1
    for k_i in ks:
        delta *= gcd(k_i, field.q - 1) - 1
    return JolyCount(n, delta, abs(n - field.q ** (s - 1)))


# ---------------------------------------------------------------------------
# scalar embedding F_q -> F_{q^r} -> M_r(F_q)


class ScalarEmbedding:
    """Handle for F_q -> F_{q^r} together with the regular representation.

    ``matrix_rows(a)`` is the matrix of multiplication by a on F_{q^r}
    in the power basis (1, y, ..., y^{r-1}), column j holding the
    coordinates of a*y^j.  It is a unit-preserving ring homomorphism
    into M_r(F_q).
    """

    __slots__ = ("base", "ext", "r")

    def __init__(self, base: Field, r: int):
        self.base = base
        self.r = r
        self.ext = ExtensionField(base, r)

    def embed(self, c) -> int:
        if isinstance(c, FieldElem):
            c = c.code
        return self.ext.embed(c)

    def matrix_rows(self, a: int) -> tuple[tuple[int, ...], ...]:
        ext, r = self.ext, self.r
        y = ext.base.q if r > 1 else 0  # code of y
        cols = []
        power = 1
        for _ in range(r):
            cols.append(ext.digits(ext.mul(a, power)))
            if r > 1:
                power = ext.mul(power, y)
        return tuple(tuple(cols[j][i] for j in range(r)) for i in range(r))

    def matrix(self, a: int):
        from .matgf import Mat

        return Mat(self.base, self.matrix_rows(a))


def embed_scalar(field: Field, r: int) -> ScalarEmbedding:
    return ScalarEmbedding(field, r)

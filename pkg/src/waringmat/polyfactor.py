"""Polynomial arithmetic and complete factorization over GF(q).

Factorization is deterministic-first: when enumerating all candidate
divisors up to half the degree is affordable it uses plain trial
division in canonical code order, so census runs are reproducible
bit for bit.  Above that threshold it switches to squarefree
decomposition, distinct-degree splitting, and seeded Cantor-Zassenhaus
equal-degree splitting.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import config
from .errors import NotIrreducible
from .gf import Field, FieldElem, factor_int

# Trial division is the deterministic-first path whenever the candidate
# scan is genuinely cheap; above this work bound the distinct-degree /
# seeded equal-degree path takes over (still reproducible: one global
# seed).
_TRIAL_LIMIT = 1 << 8


class Poly:
    """Dense univariate polynomial over a Field; coeffs little-endian."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field: Field, coeffs):
        codes = []
        for c in coeffs:
            if isinstance(c, FieldElem):
                codes.append(c.code)
            elif isinstance(c, str):
                codes.append(field.parse_code(c))
            else:
                codes.append(int(c) % field.p)
        while codes and codes[-1] == 0:
            codes.pop()
        self.field = field
        self.coeffs = tuple(codes)

    # -- constructors ----------------------------------------------------

    @classmethod
    def zero(cls, field: Field) -> "Poly":
        return cls._raw(field, ())

    @classmethod
    def one(cls, field: Field) -> "Poly":
        return cls._raw(field, (1,))

    @classmethod
    def x(cls, field: Field) -> "Poly":
        return cls._raw(field, (0, 1))

    @classmethod
    def x_minus(cls, field: Field, code: int) -> "Poly":
        """The linear x - a for an element given by its code."""
        if isinstance(code, FieldElem):
            code = code.code
        return cls._raw(field, (field.neg(code), 1)) if code else cls.x(field)

    @classmethod
    def _raw(cls, field: Field, codes: tuple[int, ...]) -> "Poly":
        p = object.__new__(cls)
        p.field = field
        p.coeffs = codes
        return p

    @classmethod
    def from_codes(cls, field: Field, codes) -> "Poly":
        codes = list(codes)
        while codes and codes[-1] == 0:
            codes.pop()
        return cls._raw(field, tuple(codes))

    # -- basics ------------------------------------------------------------

    def degree(self) -> int:
        """Degree, with -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.coeffs[-1] == 1

    def leading(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, other):
        return (
            isinstance(other, Poly)
            and self.field is other.field
            and self.coeffs == other.coeffs
        )

    def __hash__(self):
        return hash((id(self.field), self.coeffs))

    def sort_key(self):
        return (len(self.coeffs), self.coeffs)

    def __repr__(self):
        return f"Poly({self.field.spec_string}, {self!s})"

    # -- ring operations -----------------------------------------------------

    def __add__(self, other: "Poly") -> "Poly":
        F = self.field
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = F.add(out[i], c)
        return Poly.from_codes(F, out)

    def __neg__(self) -> "Poly":
        F = self.field
        return Poly._raw(F, tuple(F.neg(c) for c in self.coeffs))

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def __mul__(self, other: "Poly") -> "Poly":
        F = self.field
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return Poly.zero(F)
        add, mul = F.add, F.mul
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        out[i + j] = add(out[i + j], mul(x, y))
        return Poly.from_codes(F, out)

    def scale(self, c: int) -> "Poly":
        F = self.field
        return Poly.from_codes(F, (F.mul(c, x) for x in self.coeffs))

    def shift(self, e: int) -> "Poly":
        """Multiply by x^e."""
        if self.is_zero():
            return self
        return Poly._raw(self.field, (0,) * e + self.coeffs)

    def __divmod__(self, other: "Poly"):
        F = self.field
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        a = list(self.coeffs)
        b = other.coeffs
        db = len(b) - 1
        if len(a) - 1 < db:
            return Poly.zero(F), self
        inv_lead = F.inv(b[-1])
        q = [0] * (len(a) - db)
        sub, mul = F.sub, F.mul
        for i in range(len(a) - 1, db - 1, -1):
            c = a[i]
            if c:
                c = mul(c, inv_lead)
                q[i - db] = c
                for j in range(db + 1):
                    a[i - db + j] = sub(a[i - db + j], mul(c, b[j]))
        return Poly.from_codes(F, q), Poly.from_codes(F, a[:db])

    def __floordiv__(self, other: "Poly") -> "Poly":
        return divmod(self, other)[0]

    def __mod__(self, other: "Poly") -> "Poly":
        return divmod(self, other)[1]

    def monic(self) -> "Poly":
        if self.is_zero() or self.coeffs[-1] == 1:
            return self
        return self.scale(self.field.inv(self.coeffs[-1]))

    def pow_mod(self, e: int, mod: "Poly") -> "Poly":
        result = Poly.one(self.field)
        base = self % mod
        while e > 0:
            if e & 1:
                result = (result * base) % mod
            base = (base * base) % mod
            e >>= 1
        return result

    def derivative(self) -> "Poly":
        F = self.field
        out = []
        for i in range(1, len(self.coeffs)):
            c = self.coeffs[i]
            out.append(F.mul(c, i % F.p))
        return Poly.from_codes(F, out)

    def eval(self, a) -> int:
        """Evaluate at an element code (Horner)."""
        code = a.code if isinstance(a, FieldElem) else a
        F = self.field
        acc = 0
        for c in reversed(self.coeffs):
            acc = F.add(F.mul(acc, code), c)
        return acc

    def compose_mod(self, g: "Poly", mod: "Poly") -> "Poly":
        """self(g) mod `mod` by Horner."""
        acc = Poly.zero(self.field)
        for c in reversed(self.coeffs):
            acc = (acc * g + Poly.from_codes(self.field, (c,))) % mod
        return acc

    # -- literal syntax ---------------------------------------------------------

    def __str__(self):
        if self.is_zero():
            return "0"
        F = self.field
        terms = []
        for i, c in enumerate(self.coeffs):
            if not c:
                continue
            lit = F.format_code(c)
            if i == 0:
                terms.append(lit)
                continue
            xs = "x" if i == 1 else f"x^{i}"
            if c == 1:
                terms.append(xs)
            elif "+" in lit:
                terms.append(f"({lit}){xs}")
            else:
                terms.append(f"{lit}{xs}")
        return " + ".join(terms)

    @classmethod
    def parse(cls, field: Field, text: str) -> "Poly":
        """Parse "c0 + c1 x + ... + x^d" with element-literal coefficients."""
        s = text.replace(" ", "")
        if not s:
            raise ValueError("empty polynomial literal")
        # split on '+' not inside parentheses
        parts = []
        depth = 0
        cur = []
        for ch in s:
            if ch == "(":
                depth += 1
            elif ch == ")":
                depth -= 1
            if ch == "+" and depth == 0:
                parts.append("".join(cur))
                cur = []
            else:
                cur.append(ch)
        parts.append("".join(cur))
        coeffs: dict[int, int] = {}
        for term in parts:
            if not term:
                raise ValueError(f"bad polynomial literal {text!r}")
            if "x" in term:
                coef_s, _, pow_s = term.partition("x")
                coef_s = coef_s.rstrip("*")
                if coef_s.startswith("(") and coef_s.endswith(")"):
                    coef_s = coef_s[1:-1]
                code = field.parse_code(coef_s) if coef_s else 1
                if pow_s.startswith("^"):
                    e = int(pow_s[1:])
                elif not pow_s:
                    e = 1
                else:
                    raise ValueError(f"bad polynomial literal {text!r}")
            else:
                code = field.parse_code(term)
                e = 0
            coeffs[e] = field.add(coeffs.get(e, 0), code)
        out = [0] * (max(coeffs) + 1)
        for e, c in coeffs.items():
            out[e] = c
        return cls.from_codes(field, out)


# spec name for the polynomial type
MatPoly = Poly


def gcd_poly(f: Poly, g: Poly) -> Poly:
    """Monic gcd."""
    a, b = f, g
    while not b.is_zero():
        a, b = b, a % b
    return a.monic()


def lcm_poly(f: Poly, g: Poly) -> Poly:
    if f.is_zero() or g.is_zero():
        return Poly.zero(f.field)
    return ((f * g) // gcd_poly(f, g)).monic()


def xgcd_poly(f: Poly, g: Poly):
    """(d, u, v) with u*f + v*g = d, d monic gcd."""
    F = f.field
    r0, r1 = f, g
    s0, s1 = Poly.one(F), Poly.zero(F)
    t0, t1 = Poly.zero(F), Poly.one(F)
    while not r1.is_zero():
        q, r = divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if r0.is_zero():
        return r0, s0, t0
    c = F.inv(r0.leading())
    return r0.scale(c), s0.scale(c), t0.scale(c)


def invert_mod(f: Poly, mod: Poly) -> Poly:
    d, u, _ = xgcd_poly(f % mod, mod)
    if d.degree() != 0:
        raise ZeroDivisionError(f"{f} is not invertible mod {mod}")
    return u % mod


@dataclass(frozen=True)
class Factorization:
    """Complete factorization into monic irreducibles with multiplicities."""

    factors: tuple[tuple[Poly, int], ...]

    def product(self) -> Poly:
        fs = self.factors
        if not fs:
            raise ValueError("empty factorization")
        out = Poly.one(fs[0][0].field)
        for f, m in fs:
            for _ in range(m):
                out = out * f
        return out

    def distinct(self) -> tuple[Poly, ...]:
        return tuple(f for f, _ in self.factors)

    def is_squarefree(self) -> bool:
        return all(m == 1 for _, m in self.factors)

    def is_split(self) -> bool:
        return all(f.degree() == 1 for f, _ in self.factors)


def monic_polys(field: Field, degree: int):
    """All monic polynomials of the given degree, in canonical code order."""
    q = field.q
    for code in range(q**degree):
        coeffs = []
        v = code
        for _ in range(degree):
            coeffs.append(v % q)
            v //= q
        yield Poly.from_codes(field, coeffs + [1])


def is_irreducible(f: Poly) -> bool:
    """Rabin's deterministic criterion (monic input)."""
    n = f.degree()
    if n <= 0:
        return False
    if not f.is_monic():
        raise ValueError("input must be monic")
    if n == 1:
        return True
    q = f.field.q
    x = Poly.x(f.field)
    for r in factor_int(n):
        h = x.pow_mod(q ** (n // r), f) - x
        if gcd_poly(h, f).degree() != 0:
            return False
    return (x.pow_mod(q**n, f) - x).is_zero()


def _pth_root_poly(f: Poly) -> Poly:
    """For f with zero derivative, the g with g(x)^p = f(x)."""
    F = f.field
    p = F.p
    root_exp = F.q // p  # c -> c^(q/p) is the inverse of Frobenius
    out = []
    for i in range(0, len(f.coeffs), p):
        out.append(F.pow(f.coeffs[i], root_exp))
    return Poly.from_codes(F, out)


def _squarefree_parts(f: Poly) -> dict[Poly, int]:
    """Squarefree pieces with multiplicities, multiplying back to f.

    Pieces need not be coprime across rounds; downstream factoring
    accumulates per-irreducible multiplicities, which is all that is
    required.  Handles the char-p derivative-zero case by taking p-th
    roots.
    """
    out: dict[Poly, int] = {}

    def merge(piece: Poly, mult: int):
        if piece.degree() > 0:
            out[piece] = out.get(piece, 0) + mult

    def walk(g: Poly, mult: int):
        if g.degree() <= 0:
            return
        dg = g.derivative()
        if dg.is_zero():
            walk(_pth_root_poly(g), mult * g.field.p)
            return
        c = gcd_poly(g, dg)
        sf = g // c  # one copy of each factor whose multiplicity p does not divide
        merge(sf, mult)
        if c.degree() > 0:
            walk(g // sf, mult)

    walk(f.monic(), 1)
    return out


def _factor_trial(f: Poly) -> dict[Poly, int]:
    out: dict[Poly, int] = {}
    g = f
    d = 1
    while g.degree() >= 2 * d:
        for cand in monic_polys(f.field, d):
            count = 0
            while g.degree() >= d:
                quo, rem = divmod(g, cand)
                if not rem.is_zero():
                    break
                g = quo
                count += 1
            if count:
                out[cand] = count
            if g.degree() < 2 * d:
                # at most one irreducible factor (of degree >= d) left
                break
        d += 1
    if g.degree() > 0:
        out[g.monic()] = out.get(g.monic(), 0) + 1
    return out


def _cz_split_equal_degree(f: Poly, d: int, rand) -> list[Poly]:
    """Split a squarefree product of degree-d irreducibles."""
    if f.degree() == d:
        return [f.monic()]
    F = f.field
    q = F.q
    n = f.degree()
    while True:
        r = Poly.from_codes(F, [rand.randrange(q) for _ in range(n)] + [0])
        if r.degree() < 1:
            continue
        if F.p == 2:
            # trace map to GF(2)
            t = Poly.zero(F)
            h = r % f
            bits = d * F.l
            for _ in range(bits):
                t = (t + h) % f
                h = (h * h) % f
            g = gcd_poly(t, f)
        else:
            s = r.pow_mod((q**d - 1) // 2, f)
            g = gcd_poly(s - Poly.one(F), f)
        if 0 < g.degree() < n:
            return _cz_split_equal_degree(g, d, rand) + _cz_split_equal_degree(f // g, d, rand)


def _factor_big(f: Poly) -> dict[Poly, int]:
    rand = config.rng(salt=0x706F6C79)
    out: dict[Poly, int] = {}
    for piece, mult in _squarefree_parts(f).items():
        # distinct-degree on each squarefree piece
        g = piece.monic()
        x = Poly.x(f.field)
        h = x
        d = 1
        q = f.field.q
        while g.degree() >= 2 * d:
            h = h.pow_mod(q, g)
            gd = gcd_poly(h - x, g)
            if gd.degree() > 0:
                for irr in _cz_split_equal_degree(gd, d, rand):
                    out[irr] = out.get(irr, 0) + mult
                g = g // gd
                h = h % g
            d += 1
        if g.degree() > 0:
            out[g] = out.get(g, 0) + mult
    return out


def factor(f: Poly) -> Factorization:
    """Complete factorization of a monic f with deg f >= 1."""
    if not f.is_monic() or f.degree() < 1:
        raise ValueError("factor() wants a monic polynomial of degree >= 1")
    q = f.field.q
    half = f.degree() // 2
    cost = sum(q**d for d in range(1, half + 1))
    table = _factor_trial(f) if cost <= _TRIAL_LIMIT else _factor_big(f)
    factors = tuple(sorted(table.items(), key=lambda it: it[0].sort_key()))
    return Factorization(factors)


def squarefree_part(f: Poly) -> Poly:
    """Product of the distinct monic irreducible factors."""
    out = Poly.one(f.field)
    for g in factor(f).distinct():
        out = out * g
    return out


def require_irreducible(f: Poly) -> None:
    if not is_irreducible(f):
        raise NotIrreducible(f"{f} is not irreducible over {f.field!r}")

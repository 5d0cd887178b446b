"""Exhaustive verification engine: power sets, sumsets, conjugacy
classes, stabilizers, and a registry of checks that replays every
desk-scale classification claim by brute force.

Matrices are indexed by their row-major base-q code; membership sets
are plain sets of codes, merged deterministically regardless of worker
count when the enumeration pass is parallelized.
"""

from __future__ import annotations

import multiprocessing
from dataclasses import dataclass, field as dc_field
from math import gcd

from . import config
from .errors import BudgetExceeded, UnknownTheorem
from .gf import Field, build_field, factor_int
from .matgf import (
    Mat,
    gl_order_factored,
    is_cyclic,
    is_idempotent,
    is_scalar,
    is_semisimple,
    is_split_semisimple,
    min_poly,
    order,
)
from .canon import gj_key


# ---------------------------------------------------------------------------
# code arithmetic helpers


def _code_adder(field: Field, n: int):
    """Fast addition on matrix codes."""
    if field.p == 2 and field.l == 1:
        return lambda a, b: a ^ b
    q = field.q
    total = q ** (n * n)
    if total <= 4096:
        add = field.add
        cells = n * n
        table = []
        for a in range(total):
            row = []
            for b in range(total):
                s = 0
                aa, bb = a, b
                mul = 1
                for _ in range(cells):
                    s += add(aa % q, bb % q) * mul
                    aa //= q
                    bb //= q
                    mul *= q
                row.append(s)
            table.append(row)
        return lambda a, b: table[a][b]
    add = field.add
    cells = n * n

    def slow(a, b):
        s = 0
        mul = 1
        for _ in range(cells):
            s += add(a % q, b % q) * mul
            a //= q
            b //= q
            mul *= q
        return s

    return slow


# flag bits used in the enumeration pass
_INV, _SS, _IDEM = 1, 2, 4


def _enum_chunk(args):
    p, l, n, k, start, stop = args
    F = build_field(p, l)
    out = []
    for code in range(start, stop):
        A = Mat.from_code(F, n, code)
        flags = 0
        if A.is_invertible():
            flags |= _INV
        if is_split_semisimple(A):
            flags |= _SS
        if A * A == A:
            flags |= _IDEM
        out.append(((A**k).code(), flags))
    return out


@dataclass(frozen=True)
class ClassRow:
    key: tuple
    size: int
    representative: int  # code
    tag: str


@dataclass
class SumsetReport:
    """Membership sets over the code enumeration for one (n, q, k)."""

    field: Field
    n: int
    k: int
    pk: frozenset[int]
    P: frozenset[int]
    Q: frozenset[int]
    Pss: frozenset[int]
    Qss: frozenset[int]
    idem: frozenset[int]
    Pi: frozenset[int]
    classes: tuple[ClassRow, ...] = dc_field(default_factory=tuple)

    @property
    def total(self) -> int:
        return self.field.q ** (self.n * self.n)

    def full(self, S) -> bool:
        return len(S) == self.total


_CLASS_CACHE: dict = {}


def conjugacy_classes(field: Field, n: int) -> tuple[ClassRow, ...]:
    """Conjugacy classes by canonical block key, with size and a tag."""
    key0 = (id(field), n)
    hit = _CLASS_CACHE.get(key0)
    if hit is not None:
        return hit
    total = field.q ** (n * n)
    config.check_budget(total, "conjugacy classing")
    groups: dict[tuple, list[int]] = {}
    for code in range(total):
        A = Mat.from_code(field, n, code)
        groups.setdefault(gj_key(A), []).append(code)
    rows = []
    for key in sorted(groups):
        codes = groups[key]
        rep = Mat.from_code(field, n, codes[0])
        if rep == Mat.zero(field, n):
            tag = "zero"
        elif rep == Mat.identity(field, n):
            tag = "identity"
        elif is_idempotent(rep):
            tag = "idempotent"
        elif rep.is_invertible():
            tag = f"order {order(rep)}"
        elif (rep**n).code() == 0:
            tag = "nilpotent"
        else:
            tag = "singular"
        rows.append(ClassRow(key, len(codes), codes[0], tag))
    out = tuple(rows)
    _CLASS_CACHE[key0] = out
    return out


_ENUM_CACHE: dict = {}


def _enumeration_pass(field: Field, n: int, k: int, jobs: int = 1):
    """List of (power_code, flags) indexed by matrix code."""
    kk = field._k_reduced(k) if field.q > 2 else k  # matrix powers do not reduce mod q-1
    key = (id(field), n, k)
    hit = _ENUM_CACHE.get(key)
    if hit is not None:
        return hit
    total = field.q ** (n * n)
    config.check_budget(total, "census enumeration")
    if jobs and jobs > 1 and total >= 1 << 12:
        step = (total + jobs - 1) // jobs
        chunks = [
            (field.p, field.l, n, k, s, min(s + step, total))
            for s in range(0, total, step)
        ]
        with multiprocessing.Pool(jobs) as pool:
            parts = pool.map(_enum_chunk, chunks)
        data = [item for part in parts for item in part]
    else:
        data = _enum_chunk((field.p, field.l, n, k, 0, total))
    if len(_ENUM_CACHE) > 64:
        _ENUM_CACHE.clear()
    _ENUM_CACHE[key] = data
    return data


def power_sumsets(field: Field, n: int, k: int, jobs: int = 1, with_classes: bool = True) -> SumsetReport:
    """All the membership sets for (n, q, k): k-th powers, the two-power
    sumsets P/Q/Pss/Qss, idempotents and their sumset."""
    data = _enumeration_pass(field, n, k, jobs=jobs)
    adder = _code_adder(field, n)
    pk_all: set[int] = set()
    pk_inv: set[int] = set()
    pk_ss: set[int] = set()
    pk_inv_ss: set[int] = set()
    idem: set[int] = set()
    for code, (pcode, flags) in enumerate(data):
        pk_all.add(pcode)
        if flags & _INV:
            pk_inv.add(pcode)
        if flags & _SS:
            pk_ss.add(pcode)
            if flags & _INV:
                pk_inv_ss.add(pcode)
        if flags & _IDEM:
            idem.add(code)

    def sumset(S):
        lst = sorted(S)
        out = set()
        for i, a in enumerate(lst):
            for b in lst[i:]:
                out.add(adder(a, b))
        return frozenset(out)

    report = SumsetReport(
        field,
        n,
        k,
        frozenset(pk_all),
        sumset(pk_all),
        sumset(pk_inv),
        sumset(pk_ss),
        sumset(pk_inv_ss),
        frozenset(idem),
        sumset(idem),
        conjugacy_classes(field, n) if with_classes else (),
    )
    return report


# ---------------------------------------------------------------------------
# stabilizers


def stabilizer(field: Field, n: int, S, side: str = "left") -> list[Mat]:
    """Brute-force {g in GL : gS = S} (or Sg = S); verifies L = R when S
    is stable under conjugation."""
    codes = frozenset(S)
    total = field.q ** (n * n)
    config.check_budget(total, "stabilizer enumeration")
    mats = {code: Mat.from_code(field, n, code) for code in codes}
    out_left = []
    out_right = []
    units = [A for A in (Mat.from_code(field, n, c) for c in range(total)) if A.is_invertible()]
    for g in units:
        if all((g * M).code() in codes for M in mats.values()):
            out_left.append(g)
        if all((M * g).code() in codes for M in mats.values()):
            out_right.append(g)
    conj_stable = all(
        (g * M * g.inverse()).code() in codes for g in units for M in mats.values()
    )
    if conj_stable:
        assert {g.code() for g in out_left} == {g.code() for g in out_right}, (
            "left and right stabilizers differ for a conjugation-stable set"
        )
    return out_left if side == "left" else out_right


def is_conjugation_stable(field: Field, n: int, S) -> bool:
    codes = frozenset(S)
    total = field.q ** (n * n)
    config.check_budget(total, "conjugation stability check")
    for c in range(total):
        g = Mat.from_code(field, n, c)
        if not g.is_invertible():
            continue
        gi = g.inverse()
        for s in codes:
            if (g * Mat.from_code(field, n, s) * gi).code() not in codes:
                return False
    return True


# ---------------------------------------------------------------------------
# counting


@dataclass(frozen=True)
class CyclicCount:
    count: int
    group_order: int
    total: int
    doubling_exceeds_space: bool  # 2c > q^(n^2)
    lower_bound_holds: bool  # c >= |G| (1 - 1/(q(q^2-1)))


def count_invertible_cyclic(field: Field, n: int) -> CyclicCount:
    total = field.q ** (n * n)
    config.check_budget(total, "invertible cyclic count")
    c = 0
    g_order = 1
    for r, e in gl_order_factored(field, n).items():
        g_order *= r**e
    for code in range(total):
        A = Mat.from_code(field, n, code)
        if A.is_invertible() and min_poly(A).degree() == n:
            c += 1
    q = field.q
    lower = c * q * (q * q - 1) >= g_order * (q * (q * q - 1) - 1)
    return CyclicCount(c, g_order, total, 2 * c > total, lower)


# ---------------------------------------------------------------------------
# the tabulated class lists


def _m22_reps(F: Field):
    return {
        1: Mat.zero(F, 2),
        2: Mat(F, [[0, 1], [0, 0]]),
        3: Mat.identity(F, 2),
        4: Mat(F, [[1, 0], [0, 0]]),
        5: Mat(F, [[1, 1], [1, 0]]),
        6: Mat(F, [[1, 1], [0, 1]]),
    }


def _m32_reps(F: Field):
    return {
        1: Mat.zero(F, 3),
        2: Mat.identity(F, 3),
        3: Mat(F, [[1, 0, 0], [0, 0, 0], [0, 0, 0]]),
        4: Mat(F, [[1, 0, 0], [0, 1, 0], [0, 0, 0]]),
        5: Mat(F, [[1, 0, 0], [0, 0, 1], [0, 0, 0]]),
        6: Mat(F, [[0, 1, 0], [0, 0, 0], [0, 0, 0]]),
        7: Mat(F, [[0, 1, 0], [0, 0, 1], [0, 0, 0]]),
        8: Mat(F, [[1, 1, 0], [0, 1, 0], [0, 0, 0]]),
        9: Mat(F, [[1, 1, 0], [0, 1, 0], [0, 0, 1]]),
        10: Mat(F, [[1, 1, 0], [0, 1, 1], [0, 0, 1]]),
        11: Mat(F, [[0, 1, 0], [1, 1, 0], [0, 0, 0]]),
        12: Mat(F, [[0, 1, 0], [1, 1, 0], [0, 0, 1]]),
        13: Mat(F, [[0, 0, 1], [1, 0, 1], [0, 1, 0]]),
        14: Mat(F, [[0, 0, 1], [1, 0, 0], [0, 1, 1]]),
    }


def _m23_reps(F: Field):
    return {
        1: Mat.zero(F, 2),
        2: Mat.identity(F, 2),
        3: Mat(F, [[0, 0], [0, 1]]),
        4: Mat(F, [[1, 1], [0, 1]]),
        5: Mat(F, [[0, 1], [0, 0]]),
        6: Mat(F, [[0, 0], [0, 2]]),
        7: Mat(F, [[1, 0], [0, 2]]),
        8: Mat.scalar(F, 2, 2),
        9: Mat(F, [[2, 1], [0, 2]]),
        10: Mat(F, [[0, 2], [1, 0]]),
        11: Mat(F, [[0, 1], [1, 2]]),
        12: Mat(F, [[0, 1], [1, 1]]),
    }


_KEYMAP_CACHE: dict = {}


def _class_keymap(field: Field, reps: dict) -> dict:
    key0 = (id(field), tuple(sorted((i, M.code()) for i, M in reps.items())))
    hit = _KEYMAP_CACHE.get(key0)
    if hit is None:
        hit = {gj_key(M): i for i, M in reps.items()}
        _KEYMAP_CACHE[key0] = hit
    return hit


def m22_class_of(A: Mat) -> int:
    return _class_keymap(A.field, _m22_reps(A.field))[gj_key(A)]


def m32_class_of(A: Mat) -> int:
    return _class_keymap(A.field, _m32_reps(A.field))[gj_key(A)]


def m23_class_of(A: Mat) -> int:
    return _class_keymap(A.field, _m23_reps(A.field))[gj_key(A)]


def class_codes(field: Field, n: int, reps: dict, ids) -> set[int]:
    keymap = {gj_key(M): i for i, M in reps.items()}
    wanted = set(ids)
    out = set()
    for code in range(field.q ** (n * n)):
        A = Mat.from_code(field, n, code)
        i = keymap.get(gj_key(A))
        if i in wanted:
            out.add(code)
    return out


_CLASSCODE_CACHE: dict = {}


def _codes_of_classes(field: Field, n: int, which: str, ids) -> set[int]:
    key = (id(field), n, which, tuple(sorted(ids)))
    hit = _CLASSCODE_CACHE.get(key)
    if hit is None:
        reps = {"m22": _m22_reps, "m32": _m32_reps, "m23": _m23_reps}[which](field)
        hit = class_codes(field, n, reps, ids)
        _CLASSCODE_CACHE[key] = hit
    return hit


# ---------------------------------------------------------------------------
# the check registry


@dataclass
class TheoremCheck:
    theorem: str
    params: dict
    status: str  # "PASS" | "FAIL"
    mismatches: list
    details: dict = dc_field(default_factory=dict)

    def to_json_obj(self) -> dict:
        return {
            "theorem": self.theorem,
            "params": self.params,
            "status": self.status,
            "mismatches": self.mismatches,
            **({"details": self.details} if self.details else {}),
        }


def _mk_check(theorem, params, expected: set[int], actual: set[int], field: Field, n: int, details=None) -> TheoremCheck:
    mism = sorted(expected.symmetric_difference(actual))
    return TheoremCheck(
        theorem,
        params,
        "PASS" if not mism else "FAIL",
        [Mat.from_code(field, n, c).to_json_obj() for c in mism[:64]],
        details or {},
    )


def m22_expected(field: Field, k: int) -> set[int]:
    full = set(range(16))
    if k >= 2 and k % 6 == 0:
        return full - _codes_of_classes(field, 2, "m22", {5})
    return full


def m32_expected(field: Field, k: int) -> set[int]:
    full = set(range(512))
    if k < 2 or k % 42 != 0:
        return full
    if k % 84 == 42:
        return full - _codes_of_classes(field, 3, "m32", {14})
    return full - _codes_of_classes(field, 3, "m32", {11, 12, 13, 14})


def m23_expected(field: Field, k: int) -> set[int]:
    full = set(range(81))
    if k < 2 or k % 6 != 0:
        return full
    if k % 12 == 6:
        return full - _codes_of_classes(field, 2, "m23", {5})
    return full - _codes_of_classes(field, 2, "m23", {5, 9, 10, 12})


def check_theorem(theorem_id: str, jobs: int = 1, **params) -> TheoremCheck:
    """Replay a registered classification claim; PASS is required for a
    release, FAIL carries the full mismatch list."""
    tid = theorem_id.strip()
    low = tid.lower()

    if low in ("m22", "m32", "m23"):
        k = int(params.get("k", 6))
        spec = {"m22": (2, 2, m22_expected), "m32": (2, 3, m32_expected), "m23": (3, 2, m23_expected)}[low]
        p, n, expected_fn = spec
        F = build_field(p, 1)
        rep = power_sumsets(F, n, k, jobs=jobs, with_classes=False)
        return _mk_check(tid, {"k": k}, expected_fn(F, k), set(rep.P), F, n)

    if low == "exponent":
        q = int(params.get("q", 2))
        n = int(params.get("n", 2))
        F = build_field(*_pl_of(q))
        from .matgf import gl_exponent

        e, w = gl_exponent(F, n)
        k = int(params.get("k", e))
        rep = power_sumsets(F, n, k, jobs=jobs, with_classes=False)
        ok = (set(rep.pk) == set(rep.idem)) == (k % e == 0)
        return TheoremCheck(
            tid,
            {"n": n, "q": q, "k": k},
            "PASS" if ok else "FAIL",
            [],
            {"e": e, "w": w, "powers_are_idempotents": set(rep.pk) == set(rep.idem)},
        )

    if low in ("idemp22", "idemp32", "idemp23"):
        spec = {
            "idemp22": (2, 2, "m22", {5}),
            "idemp32": (2, 3, "m32", {11, 12, 13, 14}),
            "idemp23": (3, 2, "m23", {5, 9, 10, 12}),
        }[low]
        p, n, which, excluded = spec
        F = build_field(p, 1)
        rep = power_sumsets(F, n, 2, jobs=jobs, with_classes=False)
        expected = set(range(F.q ** (n * n))) - _codes_of_classes(F, n, which, excluded)
        return _mk_check(tid, {}, expected, set(rep.Pi), F, n)

    if low == "pi-proper":
        q = int(params.get("q", 2))
        n = int(params.get("n", 2))
        F = build_field(*_pl_of(q))
        rep = power_sumsets(F, n, 2, jobs=jobs, with_classes=False)
        ok = len(rep.Pi) < rep.total
        return TheoremCheck(tid, {"n": n, "q": q}, "PASS" if ok else "FAIL", [], {"pi_size": len(rep.Pi)})

    if low == "thm5a-count":
        q = int(params.get("q", 3))
        n = int(params.get("n", 2))
        F = build_field(*_pl_of(q))
        cc = count_invertible_cyclic(F, n)
        expected = q >= 3
        ok = cc.doubling_exceeds_space == expected and (q < 3 or cc.lower_bound_holds)
        return TheoremCheck(
            tid,
            {"n": n, "q": q},
            "PASS" if ok else "FAIL",
            [],
            {"count": cc.count, "2c_gt_total": cc.doubling_exceeds_space, "np00_lower": cc.lower_bound_holds},
        )

    if low == "remark4-stabilizer":
        F = build_field(2, 1)
        rep = power_sumsets(F, 2, 2, with_classes=False)
        stab = stabilizer(F, 2, rep.Pi, side="left")
        ok = len(stab) == 1 and stab[0] == Mat.identity(F, 2)
        return TheoremCheck(tid, {}, "PASS" if ok else "FAIL", [], {"stabilizer_size": len(stab)})

    if low == "ex1":
        q = int(params.get("q", 4))
        n = int(params.get("n", 2))
        F = build_field(*_pl_of(q))
        rep = power_sumsets(F, n, 2, jobs=jobs, with_classes=False)
        bad = []
        if q >= 4:
            for a in range(3, q):
                if Mat.scalar(F, n, a).code() in rep.Pi:
                    bad.append(Mat.scalar(F, n, a).to_json_obj())
        if F.p == 3:
            E = Mat(F, [[0, 1] + [0] * (n - 2)] + [[0] * n for _ in range(n - 1)])
            two_ie = Mat.scalar(F, n, 2) + E
            if two_ie.code() in rep.Pi:
                bad.append(two_ie.to_json_obj())
            half = F.inv(2)
            good = Mat.identity(F, n) + E.scale(half)
            if good.code() not in rep.Pi:
                bad.append(good.to_json_obj())
        return TheoremCheck(tid, {"n": n, "q": q}, "PASS" if not bad else "FAIL", bad)

    if low == "yo98-q2":
        # sums of two squares of invertibles: the full space for even n;
        # for odd n at most one distinguished scalar (0_n or I_n) can be
        # missing (0_n drops out when -1 is a nonsquare, by determinants)
        q = int(params.get("q", 3))
        n = int(params.get("n", 2))
        F = build_field(*_pl_of(q))
        rep = power_sumsets(F, n, 2, jobs=jobs, with_classes=False)
        total = set(range(rep.total))
        if n % 2 == 0:
            return _mk_check(tid, {"n": n, "q": q}, total, set(rep.Q), F, n)
        missing = total - set(rep.Q)
        allowed = {Mat.identity(F, n).code(), Mat.zero(F, n).code()}
        bad = missing - allowed
        return TheoremCheck(
            tid,
            {"n": n, "q": q},
            "PASS" if not bad else "FAIL",
            [Mat.from_code(F, n, c).to_json_obj() for c in sorted(bad)[:64]],
            {"missing_scalars": [Mat.from_code(F, n, c).to_json_obj() for c in sorted(missing)]},
        )

    if low == "ex4":
        q = int(params.get("q", 3))
        n = int(params.get("n", 2))
        if q <= 2:
            raise ValueError("EX4 is about q > 2")
        F = build_field(*_pl_of(q))
        rep = power_sumsets(F, n, 2, jobs=jobs, with_classes=False)
        return _mk_check(tid, {"n": n, "q": q, "k": 2}, set(range(rep.total)), set(rep.P), F, n)

    if low == "ex5":
        q = int(params.get("q", 2))
        n = int(params.get("n", 2))
        F = build_field(*_pl_of(q))
        rep = power_sumsets(F, n, 3, jobs=jobs, with_classes=False)
        if q not in (4, 7):
            return _mk_check(tid, {"n": n, "q": q, "k": 3}, set(range(rep.total)), set(rep.P), F, n)
        bad = []
        if q == 4:
            window = {0, 1}
        else:
            window = set()
            for m in (2 * n - 2, 2 * n - 1, 2 * n):
                window.add(m % 7)
        for code in range(rep.total):
            A = Mat.from_code(F, n, code)
            if is_scalar(A):
                if q == 7 and code not in rep.P:
                    bad.append(A.to_json_obj())
                continue
            if A.trace() in window and code not in rep.P:
                bad.append(A.to_json_obj())
        return TheoremCheck(tid, {"n": n, "q": q, "k": 3}, "PASS" if not bad else "FAIL", bad)

    raise UnknownTheorem(f"no registered check named {theorem_id!r}")


def _pl_of(q: int) -> tuple[int, int]:
    fac = factor_int(q)
    if len(fac) != 1:
        raise ValueError(f"{q} is not a prime power")
    ((p, l),) = fac.items()
    return p, l


KNOWN_CHECKS = (
    "M22",
    "M32",
    "M23",
    "exponent",
    "idemp22",
    "idemp32",
    "idemp23",
    "pi-proper",
    "thm5a-count",
    "remark4-stabilizer",
    "EX1",
    "yo98-q2",
    "EX4",
    "EX5",
)

import random
from collections import Counter

import pytest

from waringmat.errors import UnknownTheorem
from waringmat.gf import build_field
from waringmat.matgf import Mat, enumerate_matrices
from waringmat.census import (
    check_theorem,
    class_codes,
    conjugacy_classes,
    count_invertible_cyclic,
    is_conjugation_stable,
    m22_expected,
    m23_class_of,
    m23_expected,
    m32_class_of,
    m32_expected,
    power_sumsets,
    stabilizer,
    _m23_reps,
    _m32_reps,
)

F2 = build_field(2, 1)
F3 = build_field(3, 1)
F4 = build_field(2, 2)
F5 = build_field(5, 1)


def test_class_tables_match_listings():
    sizes22 = sorted(c.size for c in conjugacy_classes(F2, 2))
    assert sizes22 == [1, 1, 2, 3, 3, 6]
    sizes32 = sorted(c.size for c in conjugacy_classes(F2, 3))
    assert sizes32 == sorted([1, 1, 28, 28, 84, 21, 42, 84, 21, 42, 56, 56, 24, 24])
    sizes23 = sorted(c.size for c in conjugacy_classes(F3, 2))
    assert sizes23 == sorted([1, 1, 12, 8, 8, 12, 12, 1, 8, 6, 6, 6])
    # the two order-7 classes in M_{3,2} have 24 elements each
    tags = Counter(c.tag for c in conjugacy_classes(F2, 3))
    assert tags["order 7"] == 2


def test_class_identification():
    reps32 = _m32_reps(F2)
    for i, M in reps32.items():
        assert m32_class_of(M) == i
    reps23 = _m23_reps(F3)
    for i, N in reps23.items():
        assert m23_class_of(N) == i
    # class sizes via code scan
    assert len(class_codes(F2, 3, reps32, {13})) == 24
    assert len(class_codes(F3, 2, reps23, {9})) == 8
    assert len(class_codes(F3, 2, reps23, {10})) == 6


def test_power_sumsets_examples():
    rep = power_sumsets(F2, 2, 6, with_classes=False)
    assert len(rep.P) == 14
    order3 = class_codes(F2, 2, {5: Mat(F2, [[1, 1], [1, 0]])}, {5})
    assert set(rep.P) == set(range(16)) - order3
    rep = power_sumsets(F3, 2, 12, with_classes=False)
    assert set(rep.P) == m23_expected(F3, 12)
    rep = power_sumsets(F2, 2, 1, with_classes=False)
    assert rep.full(rep.P)


def test_sumset_report_idempotents():
    rep = power_sumsets(F2, 3, 2, with_classes=False)
    assert len(rep.idem) == 1 + 1 + 28 + 28  # zero, identity, two rank classes


def test_m22_all_k():
    for k in range(1, 25):
        assert check_theorem("M22", k=k).status == "PASS", k


def test_m23_all_k():
    for k in range(2, 49):
        assert check_theorem("M23", k=k).status == "PASS", k


def test_m32_passes_off_the_defect():
    for k in (6, 14, 21, 41, 84, 168):
        assert check_theorem("M32", k=k).status == "PASS", k


def test_m32_registered_table_defect_at_42():
    # the registered three-case table misses that class (13) also leaves P
    # when k = 42 mod 84; the census is the ground truth here
    for k in (42, 126):
        chk = check_theorem("M32", k=k)
        assert chk.status == "FAIL"
        rep = power_sumsets(F2, 3, k, with_classes=False)
        truth = set(range(512)) - class_codes(F2, 3, _m32_reps(F2), {13, 14})
        assert set(rep.P) == truth
        # every mismatch is a class-13 matrix
        for obj in chk.mismatches:
            M = Mat.from_json_obj(obj, field=F2)
            assert m32_class_of(M) == 13


def test_exponent_check():
    assert check_theorem("exponent", n=2, q=2, k=6).status == "PASS"
    assert check_theorem("exponent", n=2, q=3, k=24).status == "PASS"
    chk = check_theorem("exponent", n=2, q=3, k=12)
    assert chk.status == "PASS" and not chk.details["powers_are_idempotents"]
    assert check_theorem("exponent", n=3, q=2, k=84).details["e"] == 84


def test_idempotent_characterizations():
    assert check_theorem("idemp22").status == "PASS"
    assert check_theorem("idemp32").status == "PASS"
    assert check_theorem("idemp23").status == "PASS"


def test_pi_proper_and_stabilizer_checks():
    for n, q in ((2, 2), (2, 3), (3, 2), (2, 4)):
        assert check_theorem("pi-proper", n=n, q=q).status == "PASS"
    assert check_theorem("remark4-stabilizer").status == "PASS"


def test_thm5a_count_check():
    for n, q in ((2, 3), (2, 4), (2, 5)):
        assert check_theorem("thm5a-count", n=n, q=q).status == "PASS"
    chk = check_theorem("thm5a-count", n=2, q=2)
    assert chk.status == "PASS" and not chk.details["2c_gt_total"]


def test_ex1_check():
    assert check_theorem("EX1", n=2, q=4).status == "PASS"
    assert check_theorem("EX1", n=2, q=5).status == "PASS"
    assert check_theorem("EX1", n=2, q=3).status == "PASS"  # p = 3 branch


def test_yo98_check():
    assert check_theorem("yo98-q2", n=2, q=3).status == "PASS"
    assert check_theorem("yo98-q2", n=2, q=4).status == "PASS"
    assert check_theorem("yo98-q2", n=3, q=3).status == "PASS"


def test_ex4_ex5_checks():
    for q in (3, 4, 5, 7):
        assert check_theorem("EX4", n=2, q=q).status == "PASS"
    for q in (2, 3, 5):
        assert check_theorem("EX5", n=2, q=q).status == "PASS"
    assert check_theorem("EX5", n=2, q=4).status == "PASS"
    assert check_theorem("EX5", n=2, q=7).status == "PASS"


def test_unknown_theorem():
    with pytest.raises(UnknownTheorem):
        check_theorem("no-such-claim")


def test_stabilizers():
    rep = power_sumsets(F2, 2, 2, with_classes=False)
    stab = stabilizer(F2, 2, rep.Pi)
    assert [g.rows for g in stab] == [Mat.identity(F2, 2).rows]
    # full space is stabilized by everything
    stab = stabilizer(F2, 2, set(range(16)))
    assert len(stab) == 6
    # conjugation-stable sets have equal left and right stabilizers (asserted
    # internally); the set of squares over GF(3) is conjugation stable
    rep3 = power_sumsets(F3, 2, 2, with_classes=False)
    assert is_conjugation_stable(F3, 2, rep3.pk)
    stabilizer(F3, 2, rep3.pk)


def test_pi23_stabilizer_is_normal():
    rep = power_sumsets(F3, 2, 2, with_classes=False)
    stab = stabilizer(F3, 2, rep.Pi)
    stab_codes = {g.code() for g in stab}
    units = [A for A in enumerate_matrices(F3, 2) if A.is_invertible()]
    for g in units:
        gi = g.inverse()
        for h in stab:
            assert (g * h * gi).code() in stab_codes


def test_count_invertible_cyclic():
    cc = count_invertible_cyclic(F2, 2)
    assert cc.count == 5  # all invertible nonscalar 2x2 are cyclic
    assert not cc.doubling_exceeds_space  # 10 < 16
    cc = count_invertible_cyclic(F3, 2)
    assert cc.count == 46 and cc.doubling_exceeds_space and cc.lower_bound_holds
    cc = count_invertible_cyclic(F5, 2)
    assert cc.doubling_exceeds_space  # 2c > 625


def test_power_pattern_periodicity():
    # for k >= n the power set only depends on k mod the group exponent
    from waringmat.matgf import gl_exponent

    for F, n in ((F2, 2), (F3, 2), (F2, 3)):
        e, _ = gl_exponent(F, n)
        for k in (n + 1, n + 2, 7):
            k2 = k + e
            a = power_sumsets(F, n, k, with_classes=False)
            b = power_sumsets(F, n, k2, with_classes=False)
            assert a.pk == b.pk


def test_parallel_enumeration_matches_serial():
    a = power_sumsets(F2, 3, 6, jobs=1, with_classes=False)
    from waringmat.census import _ENUM_CACHE

    _ENUM_CACHE.clear()
    b = power_sumsets(F2, 3, 6, jobs=2, with_classes=False)
    assert a.pk == b.pk and a.P == b.P and a.Q == b.Q and a.Pi == b.Pi

from fractions import Fraction

import pytest

from goodgen.bounds import (COLUMNS, BoundError, broadbrush_margin, c9_count_bound, c9_count_check,
                            class_contribution, condition, dual_path_audit, leading_constants, log2_upper,
                            p1_bound, p_bound_total, p_tilde_bound_total, qpow_lower, qpow_upper,
                            theta_inequality_audit)
from goodgen.pairlab import exact_p1
from goodgen.clgroup import group


def test_p1_examples():
    assert p1_bound("SL", 3, 4) == Fraction(2, 3) - Fraction(4, 256) == Fraction(125, 192)
    assert p1_bound("Sp", 2, 2) == Fraction(7, 8)
    assert p1_bound("SU", 3, 3) == Fraction(1, 8) + Fraction(1, 162)
    with pytest.raises(BoundError):
        p1_bound("SO+", 2, 3)


def test_p1_sl_q2_not_clamped():
    rep = p_bound_total("SL", 3, 2)
    assert rep.p1 > 1 and not rep.p1_informative


def test_ledger_examples():
    assert class_contribution(2, "SO+", 4, 3)[0] == Fraction(1, 162)
    assert class_contribution(6, "SL", 2, 5)[0] == Fraction(1, 48)
    for X, n, q in (("SL", 3, 2), ("SU", 5, 3), ("Sp", 4, 5), ("SO-", 6, 3)):
        assert class_contribution(4, X, n, q)[0] == 0
        assert class_contribution(7, X, n, q)[0] == 0
    with pytest.raises(BoundError):
        class_contribution(10, "SL", 3, 2)
    with pytest.raises(BoundError):
        class_contribution(3, "SL", 3, 2, tilde=True)


def test_conditions_attached():
    rep = p_bound_total("SL", 3, 4)
    assert [e.i for e in rep.entries] == list(range(2, 10))
    assert all(e.condition for e in rep.entries)
    assert not rep.all_valid  # row 9 needs n >= 9
    assert condition(9, "SL", 9, 4)[0]
    assert rep.total >= max(e.value for e in rep.entries)


def test_certified_powers():
    assert qpow_upper(2, Fraction(26, 5)) == 37
    assert qpow_lower(2, Fraction(26, 5)) == 36
    assert qpow_upper(32, Fraction(1, 5)) == qpow_lower(32, Fraction(1, 5)) == 2
    assert qpow_upper(3, -2) == Fraction(1, 9)
    assert qpow_lower(2, Fraction(-1, 2)) <= 2 ** -0.5 <= qpow_upper(2, Fraction(-1, 2))
    assert 1.58 < log2_upper(3) and log2_upper(3) - Fraction(1, 2 ** 16) < 1.5849626


def test_leading_constants():
    lc = leading_constants()
    assert lc["SL"] == Fraction(21, 2)
    assert lc["Sp"] == Fraction(37, 10)
    assert lc["SO"] == Fraction(53, 5)
    rep = p_bound_total("SL", 10, 3)
    assert rep.leading_coefficient == Fraction(21, 2)


def test_dual_path():
    assert dual_path_audit(nmax=30) == []


def test_c9_counts():
    assert c9_count_bound(1, 2) == 74
    assert c9_count_check(9, 2)
    for q in range(2, 10):
        vals = [c9_count_bound(n, q) for n in range(1, 31)]
        assert vals == sorted(vals)
        assert all(c9_count_check(n, q) for n in range(9, 31))


def test_broadbrush():
    assert broadbrush_margin("Sp", 20, 2)[1]
    assert broadbrush_margin("SL", 20, 4)[1]
    margin, positive = broadbrush_margin("SL", 3, 4)
    assert positive == (margin > 0)


def test_tilde_column():
    rep = p_tilde_bound_total(4, 2)
    assert rep.column == "tilde"
    with pytest.raises(BoundError):
        p_tilde_bound_total(3, 2)


@pytest.mark.parametrize("X,n,q,m,strict", [("Sp", 2, 2, 3, True), ("Sp", 2, 3, 4, False)])
def test_p1_bound_exceeds_exact(X, n, q, m, strict):
    assert exact_p1(group(X, n, q), m, strict=strict) <= p1_bound(X, n, q)


def test_theta_relaxed_clean():
    viol = theta_inequality_audit(nmax=12, qs=range(2, 6), strict=False)
    assert all(not v for v in viol.values())
    assert set(COLUMNS) == {"SL", "SU", "Sp", "SO", "tilde"}

from fractions import Fraction

import pytest

from goodgen.clgroup import conjugate, contains, group, uniform_element
from goodgen.forms import restrict_form, standardize
from goodgen.matspace import Matrix, fixed_space, commutator_space, identity, image, mat_inv, mat_mul
from goodgen.pairlab import (PairError, classify_conjugate, classify_pair, estimate_p1, exact_p1, p1_report,
                             sp_even_so_audit, trial_rng, wilson_interval)
from goodgen.bounds import p1_bound
from goodgen.ppdgood import build_good_element


@pytest.fixture(scope="module")
def sp43():
    G = group("Sp", 2, 3)
    return G, build_good_element(G, 4, strict=False)


def _std_basis(form, S):
    P, _ = standardize(restrict_form(form, S))
    return mat_mul(P, S.matrix())


def test_identity_pair(sp43):
    G, ge = sp43
    pc = classify_pair(ge, identity(G.field, 4))
    assert pc.reducible
    assert "CommonFixedVector" in pc.subcases
    assert "Swap" not in pc.subcases


def test_swap_construction(sp43):
    G, ge = sp43
    bu, bw = _std_basis(G.form, ge.U), _std_basis(G.form, ge.W)
    src = Matrix(G.field, list(bu.rows) + list(bw.rows), 4)
    dst = Matrix(G.field, list(bw.rows) + list(bu.rows), 4)
    g = mat_mul(mat_inv(src), dst)
    assert contains(G, g)
    assert image(ge.W, g) == ge.U
    pc = classify_pair(ge, g)
    assert pc.reducible and "Swap" in pc.subcases


def test_transport_agrees_with_recomputation(sp43):
    G, ge = sp43
    for i in range(200):
        g = uniform_element(G, trial_rng(7, i))
        tg = conjugate(ge.t, g)
        assert image(ge.U, g) == fixed_space(tg)
        assert image(ge.W, g) == commutator_space(tg)
        assert classify_pair(ge, g, with_eps=False) == classify_conjugate(ge, tg)


def test_sp42_irreducible_reports_eps():
    G = group("Sp", 2, 2)
    ge = build_good_element(G, 3)
    seen = 0
    for i in range(300):
        pc = classify_pair(ge, uniform_element(G, trial_rng(0, i)))
        if not pc.reducible:
            assert pc.eps in (1, -1)
            seen += 1
    assert seen > 0


def test_non_member_rejected(sp43):
    G, ge = sp43
    bad = Matrix(G.field, [[1, 1, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]], 4)
    with pytest.raises(PairError):
        classify_pair(ge, bad)


def test_wilson():
    lo, hi = wilson_interval(0, 10)
    assert lo == 0 and 0 < hi < 1
    lo, hi = wilson_interval(30, 100, 0.999)
    assert lo < 0.3 < hi
    with pytest.raises(ValueError):
        wilson_interval(0, 0)


def test_estimate_reproducible_and_worker_independent():
    G = group("Sp", 2, 2)
    a = estimate_p1(G, 3, 400, seed=5)
    b = estimate_p1(G, 3, 400, seed=5, workers=2)
    assert a == b
    assert a.contains(a.estimate)
    assert estimate_p1(G, 3, 400, seed=6) != a


def test_estimate_zero_trials():
    with pytest.raises(ValueError):
        estimate_p1(group("Sp", 2, 2), 3, 0)


def test_exact_sp42():
    res = exact_p1(group("Sp", 2, 2), 3, detail=True)
    assert res.class_size == 40
    assert res.value == Fraction(11, 20)
    assert res.value <= p1_bound("Sp", 2, 2) == Fraction(7, 8)


def test_exact_sp43():
    res = exact_p1(group("Sp", 2, 3), 4, strict=False, detail=True)
    assert res.class_size == 540
    assert res.value == Fraction(17, 45)
    assert res.value <= Fraction(1, 2) - Fraction(1, 27)


def test_exact_matches_pairwise(sp43):
    # the batch sweep agrees with the one-pair classifier on a sample of the class
    G, ge = sp43
    from goodgen.clgroup import class_orbit

    orbit = class_orbit(ge.t, G, expected=540)
    k = sum(classify_conjugate(ge, t2).reducible for t2 in orbit)
    assert Fraction(k, 540) == Fraction(17, 45)


def test_exact_cap_and_cache(tmp_path):
    with pytest.raises(PairError):
        exact_p1(group("Sp", 2, 2), 3, cap=10)
    v1 = exact_p1(group("Sp", 2, 2), 3, cache_dir=str(tmp_path))
    assert list(tmp_path.iterdir())
    assert exact_p1(group("Sp", 2, 2), 3, cache_dir=str(tmp_path)) == v1


def test_so_audit_exhaustive_sp42():
    rep = sp_even_so_audit(group("Sp", 2, 2), 3, exhaustive=True)
    assert rep.pairs == 720
    assert rep.reducible + rep.plus + rep.minus == 720
    assert rep.reducible == 396


def test_so_audit_errors():
    with pytest.raises(PairError):
        sp_even_so_audit(group("Sp", 2, 3), 4, trials=10, strict=False)
    with pytest.raises(ValueError):
        sp_even_so_audit(group("Sp", 2, 2), 3, trials=0)


def test_report_fields():
    G = group("Sp", 2, 2)
    est = estimate_p1(G, 3, 100, seed=1)
    rep = p1_report(G, 3, est)
    assert rep["bound"] == "7/8"
    assert rep["bound_satisfied"] is True
    assert sum(rep["counts"].values()) == 100

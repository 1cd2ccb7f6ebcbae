import random

import pytest

from goodgen.matspace import has_order
from goodgen.symmod import (DeletedModule, SymmodError, act, action_matrix, c9_alt_audit, c9_alt_contribution,
                            configuration, cycle_types, fix_dim_direct, fix_dim_formula, fixed_vector_family,
                            good_cycle_type_audit, is_fixed_in_w, regime, signed_perm, fixed_row_predicate)


def test_module_dims():
    assert DeletedModule(6, 3).dim == 4
    assert DeletedModule(7, 3).dim == 6
    assert DeletedModule(8, 2).quotient_by_e
    assert not DeletedModule(9, 2).quotient_by_e


def test_act_examples():
    v = (1, 2, 0, 0, 0, 0)
    assert act(signed_perm([1] * 6), 3, v) == DeletedModule(6, 3).canonical(v)
    v1 = (1, -1, 0, 0, 0)
    assert act(signed_perm([2, 1, 1, 1]), 5, v1) == DeletedModule(5, 5).canonical((-1, 1, 0, 0, 0))
    assert act(signed_perm([2, 1, 1, 1]), 7, v1) == (6, 1, 0, 0, 0)
    with pytest.raises(SymmodError):
        act(signed_perm([2, 1]), 5, (1, 1, 0))


def test_three_cycle_order():
    assert has_order(action_matrix(signed_perm([3, 1, 1, 1]), 3), 3)


def test_fixed_vector_family():
    sp = signed_perm([4, 2, 1])
    v, cond = fixed_vector_family(sp, [0, 0, 0], 0, 5)
    assert v == (0,) * 7 and cond == (0, 0, 0)
    # single ell-cycle, a = 1, b = 0: the constant vector c e
    v, _ = fixed_vector_family(signed_perm([6]), [2], 0, 3)
    assert v == (2,) * 6 and sum(v) % 3 == 0
    v, _ = fixed_vector_family(signed_perm([7]), [2], 0, 3)
    assert sum(v) % 3 != 0


def test_minus_sign_odd_cycles():
    # a = -1: a fixed coset needs a_i = b/2 on every odd cycle
    sp = signed_perm([3, 2], a=-1)
    p = 5
    b = 4
    for a1 in range(p):
        v, _ = fixed_vector_family(sp, [a1, 0], b, p)
        if is_fixed_in_w(sp, p, v):
            assert a1 == b * pow(2, -1, p) % p


@pytest.mark.parametrize("ct,p,dim", [([3, 3], 3, 2), ([2, 2, 2, 2], 2, 4), ([5, 1, 1, 1, 1], 5, 4)])
def test_fix_dim_examples(ct, p, dim):
    sp = signed_perm(ct)
    assert fix_dim_direct(sp, p) == fix_dim_formula(sp, p) == dim


def test_fix_dim_brute_force_p2_ell8():
    # the 64 vectors of U for g = (12)(34)(56)(78)
    sp = signed_perm([2, 2, 2, 2])
    M = DeletedModule(8, 2)
    fixed = set()
    for bits in range(2 ** 8):
        v = [(bits >> i) & 1 for i in range(8)]
        if sum(v) % 2 == 0 and act(sp, 2, v) == M.canonical(v):
            fixed.add(M.canonical(v))
    assert len(fixed) == 2 ** 4


def test_fix_dim_exhaustive():
    for ell in range(3, 13):
        for p in (2, 3, 5, 7):
            if regime(ell, p) is None:
                continue
            for ct in cycle_types(ell):
                for a in ((1, -1) if p % 2 else (1,)):
                    sp = signed_perm(ct, a)
                    assert fix_dim_direct(sp, p) == fix_dim_formula(sp, p), (ct, a, p)


def test_regime_error():
    with pytest.raises(SymmodError):
        fix_dim_formula(signed_perm([3, 3]), 5)
    with pytest.raises(SymmodError):
        fix_dim_direct(signed_perm([2, 1], a=-1), 2)


@pytest.mark.parametrize("ct,p,a", [((4, 2), 3, 1), ((3, 3), 3, 1), ((2, 2, 2, 2), 2, 1), ((5, 2, 1), 2, 1),
                                    ((3, 2, 1), 5, 1), ((4, 3), 5, -1), ((3, 3, 1), 7, -1), ((6,), 3, -1)])
def test_fixed_row_characterization(ct, p, a):
    sp = signed_perm(ct, a)
    rng = random.Random(hash((ct, p, a)) & 0xffff)
    for _ in range(1000):
        if rng.random() < 0.5:
            v = tuple(rng.randrange(p) for _ in range(sp.ell))
        else:
            v, _ = fixed_vector_family(sp, [rng.randrange(p) for _ in ct], rng.randrange(p), p)
        assert is_fixed_in_w(sp, p, v) == fixed_row_predicate(sp, p, v), v


def test_partition_counts():
    assert len(cycle_types(10)) == 42
    assert len(cycle_types(13)) == 101


def test_configurations():
    assert configuration(4, 5, 10)[0] == 2
    assert configuration(4, 2, 10) == (3, "Sp")
    assert configuration(6, 7, 13)[0] == 1
    with pytest.raises(SymmodError):
        good_cycle_type_audit(4, 3, 10)


def test_good_type_sp8_2():
    rep = good_cycle_type_audit(4, 2, 10)
    assert rep["matches_expected"] and rep["largest_prime_ok"]


@pytest.mark.parametrize("n,p,ell", [(4, 5, 10), (4, 2, 10), (6, 7, 13)])
def test_good_type_structural(n, p, ell):
    rep = good_cycle_type_audit(n, p, ell, mode="structural")
    assert rep["good_types"] == [{"cycle_type": [n + 1] + [1] * (ell - n - 1), "a": 1, "order": n + 1}]
    assert rep["largest_prime_ok"]


def test_literal_phi_out_of_reach():
    # Φ^SO(4,5) and Φ^SO(6,7) consist of orders that no element of ±S_ell has
    assert good_cycle_type_audit(4, 5, 10)["phi"] == [13, 26]
    assert good_cycle_type_audit(6, 7, 13)["phi"] == [43, 86, 172, 344]


def test_c9_alt_examples():
    assert c9_alt_contribution("SO+", 4, 5, 10)[1]
    assert c9_alt_contribution("Sp", 4, 2, 10)[1]
    assert c9_alt_contribution("Sp", 10, 2, 22)[1]
    with pytest.raises(SymmodError):
        c9_alt_contribution("Sp", 2, 2, 6)
    assert c9_alt_audit(nmax=16) == []

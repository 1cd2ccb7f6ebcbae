from fractions import Fraction

import pytest
from sympy import isprime

from goodgen.clgroup import class_orbit, group, group_order
from goodgen.forms import orth_type, restrict_form
from goodgen.matspace import det, fixed_space, mat_pow
from goodgen.ppdgood import (GoodElementError, build_good_element, cent_ratio, cent_ratio_audit, cent_ratio_bound,
                             cent_ratio_sharp_bound, check_good_element, good_class_count, is_degenerate_order,
                             is_prime_power, phi_set, ppd_primes, torus_and_centralizer_order)

PRIME_POWERS = [q for q in range(2, 17) if is_prime_power(q)]


def test_ppd_examples():
    assert ppd_primes(4, 2) == [5]
    assert ppd_primes(6, 2) == []
    assert ppd_primes(3, 9) == [7, 13]


def test_ppd_congruence():
    for n in range(2, 13):
        for q in PRIME_POWERS:
            assert all(r % n == 1 for r in ppd_primes(n, q))


def test_zsigmondy_exceptions():
    empty = {(n, q) for n in range(2, 13) for q in PRIME_POWERS if not ppd_primes(n, q)}
    mersenne = {(2, q) for q in PRIME_POWERS if isprime(q) and (q + 1) & q == 0}
    assert empty == {(6, 2)} | mersenne
    assert mersenne == {(2, 3), (2, 7)}


def test_phi_examples():
    assert phi_set("SL", 2, 5) == [3]
    assert phi_set("Sp", 4, 2) == [5]
    assert phi_set("SU", 3, 3) == [7]
    # literal reading: m divides 3 yet must be divisible by 7
    assert phi_set("SU", 3, 2) == []
    assert 40 in phi_set("SL", 4, 3)


def test_class_count_examples():
    assert good_class_count("Sp", 4, 2, 5) == (1, True)
    assert good_class_count("SU", 3, 3, 7) == (2, True)
    assert good_class_count("SL", 4, 3, 40) == (4, True)
    assert good_class_count("Sp", 2, 3, 2) == (Fraction(1, 2), False)
    with pytest.raises(GoodElementError):
        good_class_count("Sp", 4, 2, 3)


def test_torus_centralizer_examples():
    assert torus_and_centralizer_order("Sp", 2, 3) == (4, 96)
    assert torus_and_centralizer_order("SL", 2, 4) == (5, 900)
    assert torus_and_centralizer_order("Sp", 2, 2) == (3, 18)


def test_class_count_by_orbits():
    # Sp_4(4), m = 5: phi(5)/2 = 2 classes among the powers t^k, k coprime to 5
    G = group("Sp", 2, 4)
    ge = build_good_element(G, 5)
    size = group_order(G) // torus_and_centralizer_order("Sp", 2, 4)[1]
    assert size == 3264
    keys = class_orbit(ge.t, G, expected=size, as_keys=True)
    inside = [k for k in range(1, 5) if mat_pow(ge.t, k).key() in keys]
    assert inside == [1, 4]


def test_cent_ratio_examples():
    r = cent_ratio("Sp", 2, 3)
    assert r == Fraction(96 * 96, 51840) == Fraction(8, 45)
    # the stated constant 25/16 fails here; the sharper bound holds
    assert r > cent_ratio_bound("Sp", 2, 3)
    assert r <= cent_ratio_sharp_bound("Sp", 2, 3)
    assert cent_ratio("SL", 3, 2) <= Fraction(2, 2 ** 12)
    assert cent_ratio("SL", 3, 2) > 0


def test_cent_ratio_audit():
    assert cent_ratio_audit(nmax=12) == [("Sp", 2, 2, Fraction(9, 20), Fraction(25, 64)),
                                         ("Sp", 2, 3, Fraction(8, 45), Fraction(25, 144))]
    assert cent_ratio_audit(nmax=12, sharp=True) == []


def test_build_sp8_2():
    ge = build_good_element(group("Sp", 4, 2), 5)
    assert ge.U.dim == 4 and ge.W.dim == 4
    assert check_good_element(ge) == []


def test_build_sl4_4():
    ge = build_good_element(group("SL", 2, 4), 5)
    assert fixed_space(ge.t).dim == 2
    assert det(ge.t) == 1


def test_build_soplus8_2_types():
    G = group("SO+", 4, 2)
    ge = build_good_element(G, 5)
    assert orth_type(restrict_form(G.form, ge.W)).eps == -1
    assert orth_type(restrict_form(G.form, ge.U)).eps == -1
    assert check_good_element(ge) == []


def test_random_representative():
    import random

    ge = build_good_element(group("SU", 3, 3), 7, rng=random.Random(1))
    assert check_good_element(ge) == []


@pytest.mark.parametrize("X,n,q", [("SL", 2, 3), ("Sp", 2, 3)])
def test_degenerate_rejected(X, n, q):
    assert is_degenerate_order(X, n, q, 2)
    with pytest.raises(GoodElementError, match="degenerate"):
        build_good_element(group(X, n, q), 2)


def test_small_grid_postconditions():
    for X, ns in (("SL", (2, 3)), ("SU", (3,)), ("Sp", (2,)), ("SO+", (4,)), ("SO-", (4,))):
        for n in ns:
            for q in (2, 3, 4, 5):
                if X == "SU" and q > 3:
                    continue
                for m in phi_set(X, n, q):
                    if is_degenerate_order(X, n, q, m):
                        continue
                    assert check_good_element(build_good_element(group(X, n, q), m)) == []


def test_errors():
    with pytest.raises(GoodElementError):
        phi_set("SU", 2, 3)
    with pytest.raises(GoodElementError):
        phi_set("SL", 2, 6)
    with pytest.raises(GoodElementError):
        build_good_element(group("Sp", 4, 2), 3)

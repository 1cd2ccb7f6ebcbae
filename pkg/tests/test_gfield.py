from itertools import product

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from goodgen import poly
from goodgen.gfield import (FieldError, element_order, ext_field, frobenius, generator, gf,
                            make_field, norm, parse_element, parse_field, serialize_element, trace)

SMALL = [2, 3, 4, 5, 7, 8, 9, 16, 25, 27, 32, 49, 64, 81, 121, 125, 128, 243, 256]


def test_prime_field():
    F = gf(2)
    assert F.q == 2 and F.gen == 1 and F.base is None


def test_gf9_least_quadratic():
    # monic quadratics over GF(3) with no root, ordered by c0 + 3 c1
    roots_free = [(c0, c1) for c1, c0 in product(range(3), repeat=2)
                  if all((x * x + c1 * x + c0) % 3 for x in range(3))]
    c0, c1 = min(roots_free, key=lambda c: c[0] + 3 * c[1])
    assert gf(9).poly == (c0, c1, 1) == (1, 0, 1)


def test_gf16_generator_order():
    F = gf(16)
    powers = {F.pow(F.gen, k) for k in range(15)}
    assert len(powers) == 15 and element_order(generator(F)) == 15


def test_ext_field_degrees():
    E = ext_field(gf(4), 3)
    assert E.q == 64 and E.degree == 3 and E.base is gf(4)
    assert ext_field(gf(2), 4).q == make_field(2, 4).q == 16
    assert [E.embed(a, gf(4)) for a in range(4)] == [0, 1, 2, 3]


def test_norm_gf9_fibres():
    F, E = gf(3), gf(9)
    counts = {}
    for x in range(1, 9):
        v = E.norm(x, F)
        counts[v] = counts.get(v, 0) + 1
    assert counts == {1: 4, 2: 4}


def test_norm_of_torus_element():
    E, B = gf(16), gf(2)
    z = generator(E) ** 3
    assert element_order(z) == 5 and norm(z, B).code == 1
    assert trace(E(0), B).code == 0


def test_tower_coherence():
    F2, F4 = gf(2), gf(4)
    E = ext_field(F4, 2)
    for x in range(16):
        assert E.norm(x, F2) == F4.norm(E.norm(x, F4), F2)


def test_frobenius_order():
    for q in [2, 3, 4, 5, 7, 8, 9, 16, 25, 27, 32, 49, 64, 81]:
        F = gf(q)
        assert all(frobenius(F(x), F.e).code == x for x in range(q))


def test_element_orders():
    assert element_order(generator(gf(4))) == 3
    E = gf(16)
    assert element_order(E(E.pow(E.gen, 3))) == 5
    assert element_order(E(1)) == 1
    with pytest.raises(FieldError):
        element_order(E(0))


@pytest.mark.parametrize("q", SMALL)
def test_tables_distributive_and_orders(q):
    F = gf(q)
    add = np.array(F.addt, dtype=np.int64).reshape(q, q)
    mul = np.array(F.mult, dtype=np.int64).reshape(q, q)
    a = np.arange(q)[:, None, None]
    b = np.arange(q)[None, :, None]
    c = np.arange(q)[None, None, :]
    assert (mul[a, add[b, c]] == add[mul[a, b], mul[a, c]]).all()
    assert all((q - 1) % F.order(x) == 0 for x in range(1, q))


def test_serialization_round_trip():
    for F in (gf(9), gf(64), ext_field(gf(4), 3), ext_field(gf(9), 3, limit=None)):
        assert parse_field(F.serialize()) is F
        x = F(F.gen)
        assert parse_element(F, serialize_element(x)) == x
    assert gf(9).serialize() == "3^2:[1,0,1]"


def test_errors():
    with pytest.raises(FieldError):
        gf(6)
    with pytest.raises(FieldError):
        gf(2 ** 21)
    with pytest.raises(FieldError):
        parse_field("2^2:[1,0,1]")  # x^2 + 1 is reducible over GF(2)
    with pytest.raises(FieldError):
        gf(16).norm(3, gf(3))


def test_defining_polys_irreducible():
    for q in SMALL:
        F = gf(q)
        if F.base is not None:
            assert poly.is_irreducible(F.base, list(F.poly))


@settings(max_examples=200, deadline=None)
@given(st.sampled_from([4, 8, 9, 27, 49, 81, 256]), st.data())
def test_field_axioms(q, data):
    F = gf(q)
    x, y, z = (data.draw(st.integers(0, q - 1)) for _ in range(3))
    assert F.mul(x, F.add(y, z)) == F.add(F.mul(x, y), F.mul(x, z))
    assert F.add(x, F.neg(x)) == 0
    if x:
        assert F.mul(x, F.inv(x)) == 1
        assert F.pow(x, q - 1) == 1

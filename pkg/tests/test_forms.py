import random
from itertools import product

import pytest

from goodgen.clgroup import enumerate_elements, group, uniform_element
from goodgen.forms import (FormError, anisotropic_plane, dickson_invariant, format_form, invariant_form_solve,
                           is_isometry, orth_type, orthogonal_sum, parse_form, quadratic_from_upper,
                           singular_count, singular_count_formula, standard_form, standardize, transport)
from goodgen.gfield import gf
from goodgen.matspace import Matrix, det, identity, mat_inv, mat_mul, mat_scale


def rand_invertible(F, d, rng):
    while True:
        M = Matrix(F, [[rng.randrange(F.q) for _ in range(d)] for _ in range(d)])
        if det(M):
            return M


def test_standard_symplectic():
    f = standard_form("Sp", 4, 2)
    assert [list(r) for r in f.gram.rows] == [[0, 0, 0, 1], [0, 0, 1, 0], [0, 1, 0, 0], [1, 0, 0, 0]]


def test_minus_plane_gf3_anisotropic():
    f = standard_form("SO", 2, 3, -1)
    assert singular_count(f) == 0 and orth_type(f).eps == -1


def test_plus_plane_gf2():
    f = standard_form("SO", 2, 2, 1)
    assert singular_count(f) == 2 and orth_type(f).eps == 1


def test_norm_form_gf4_minus():
    F = gf(2)
    f = quadratic_from_upper(Matrix(F, anisotropic_plane(F)))
    assert singular_count(f) == 0 and orth_type(f).eps == -1


def test_minus_plus_minus():
    m = standard_form("SO", 2, 3, -1)
    s = orthogonal_sum(m, m)
    assert orth_type(s).eps == 1 and singular_count(s) == singular_count_formula(2, 3, 1)


@pytest.mark.parametrize("q,d", [(2, 2), (2, 4), (2, 6), (2, 8), (3, 2), (3, 4), (4, 2), (4, 4), (5, 2)])
def test_singular_count_formula(q, d):
    for eps in (1, -1):
        f = standard_form("SO", d, q, eps)
        assert orth_type(f).eps == eps
        assert singular_count(f) == singular_count_formula(d // 2, q, eps)


def test_isometry_examples():
    f = standard_form("Sp", 4, 3)
    F = f.field
    assert is_isometry(identity(F, 4), f)
    assert is_isometry(mat_scale(identity(F, 4), F.neg(1)), f)
    rng = random.Random(0)
    M = rand_invertible(F, 4, rng)
    while is_isometry(M, f):
        M = rand_invertible(F, 4, rng)
    assert not is_isometry(M, f)


@pytest.mark.parametrize("q,eps", [(2, 1), (2, -1), (3, 1), (3, -1), (4, -1), (5, 1)])
def test_type_invariant_under_transport(q, eps):
    f = standard_form("SO", 4, q, eps)
    rng = random.Random(q * 10 + eps)
    for _ in range(200):
        P = rand_invertible(f.field, 4, rng)
        g = transport(f, P)
        assert orth_type(g).eps == eps
        P2, std = standardize(g)
        assert std == f and transport(g, P2) == std


def test_standardize_symplectic_and_hermitian():
    rng = random.Random(5)
    for f in (standard_form("Sp", 4, 3), standard_form("SU", 3, 2), standard_form("SU", 2, 3)):
        g = transport(f, rand_invertible(f.field, f.dim, rng))
        P, std = standardize(g)
        assert std == f and transport(g, P) == f
    P, std = standardize(standard_form("Sp", 4, 3))
    assert std == standard_form("Sp", 4, 3)


def test_standardize_rejects_degenerate():
    F = gf(3)
    with pytest.raises(FormError):
        standardize(quadratic_from_upper(Matrix(F, [[1, 0], [0, 0]])))


def test_invariant_form_solve_examples():
    F = gf(3)
    res = invariant_form_solve([identity(F, 4)], "symplectic")
    assert res.status == "ok" and res.solution_dim == 6
    # elementary generators of SL_4(3) leave no form invariant
    x = Matrix(F, [[1, 1, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]])
    c = Matrix(F, [[0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1], [2, 0, 0, 0]])
    for kind in ("symplectic", "quadratic"):
        assert invariant_form_solve([x, c], kind).status == "zero"


def test_invariant_form_contains_known_form():
    rng = random.Random(9)
    for X, n, q in [("Sp", 2, 3), ("SOplus", 2, 3), ("SU", 1, 3), ("SOminus", 2, 2)]:
        G = group(X, n, q)
        gens = [uniform_element(G, rng) for _ in range(2)]
        kind = G.form.kind
        res = invariant_form_solve(gens, kind)
        assert res.status == "ok" and all(is_isometry(g, res.form) for g in gens)


def test_pinned_quadratic_solve_polarizes():
    G = group("Sp", 2, 2)
    Q = standard_form("SO", 4, 2, 1)
    gens = [g for g in enumerate_elements(group("SOplus", 2, 2))][:5]
    res = invariant_form_solve(gens, "quadratic", B_known=G.form.gram)
    assert res.status == "ok" and res.form.gram == G.form.gram
    assert all(is_isometry(g, res.form) for g in gens)
    assert Q.gram == G.form.gram


def test_dickson_invariant_homomorphism():
    for eps in (1, -1):
        f = standard_form("SO", 4, 2, eps)
        F = f.field
        # the full orthogonal group by brute force over GF(2)^{4x4}
        els = []
        for e in product(range(2), repeat=16):
            M = Matrix(F, [e[i * 4:(i + 1) * 4] for i in range(4)])
            if det(M) and is_isometry(M, f):
                els.append(M)
        assert len(els) == (72 if eps == 1 else 120)
        dk = {M.key(): dickson_invariant(M, f) for M in els}
        assert set(dk.values()) == {0, 1}
        rng = random.Random(eps)
        for _ in range(400):
            A, B = rng.choice(els), rng.choice(els)
            assert dk[mat_mul(A, B).key()] == dk[A.key()] ^ dk[B.key()]


def test_transvection_dickson():
    f = standard_form("SO", 4, 2, 1)
    F = f.field
    assert dickson_invariant(identity(F, 4), f) == 0
    # orthogonal transvection v -> v + B(v, a) a for a nonsingular vector a
    a = [1, 0, 0, 1]
    rows = []
    for i in range(4):
        e = [int(i == j) for j in range(4)]
        b = f.gram.rows[i][0] * a[0] + f.gram.rows[i][3] * a[3]
        b = sum(e[k] * f.gram.rows[k][j] * a[j] for k in range(4) for j in range(4)) % 2
        rows.append([(x + b * y) % 2 for x, y in zip(e, a)])
    T = Matrix(F, rows)
    assert is_isometry(T, f) and dickson_invariant(T, f) == 1
    assert dickson_invariant(mat_mul(T, T), f) == 0
    with pytest.raises(FormError):
        dickson_invariant(Matrix(F, [[1, 1, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]]), f)


def test_form_text_round_trip():
    for f in (standard_form("SO", 4, 3, -1), standard_form("SU", 2, 3), standard_form("Sp", 4, 4)):
        assert parse_form(format_form(f)) == f


def test_orth_type_errors():
    with pytest.raises(FormError):
        orth_type(standard_form("Sp", 2, 3))
    with pytest.raises(FormError):
        standard_form("SO", 3, 3, 1)

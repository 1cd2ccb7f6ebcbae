"""Symplectic, hermitian and quadratic forms.

A form is stored by its Gram matrix G (for a quadratic form, G is the Gram
matrix of the polarization B(x, y) = Q(x+y) - Q(x) - Q(y)) plus, for a
quadratic form, the upper-triangular matrix A with Q(x) = sum_{i<=j} A_ij x_i x_j.
Hermitian forms live over GF(q^2) = ext_field(GF(q), 2) with conjugation
a -> a^q.

Basis changes use rows: if the rows of P are a new basis, the form in the new
coordinates has Gram P G P^T (P G conj(P)^T for hermitian).
"""

from dataclasses import dataclass
from itertools import product
import random

from .gfield import ext_field, gf
from .matspace import (Matrix, Subspace, block_diag, conj, identity, mat_add, mat_mul,
                       mat_sub, nullspace, rank, right_nullspace, solve_affine, vec_mat,
                       zeros)

KINDS = ("symplectic", "hermitian", "quadratic")


class FormError(ValueError):
    pass


@dataclass(frozen=True)
class FormSpec:
    kind: str
    gram: Matrix
    qmat: Matrix = None

    @property
    def field(self):
        return self.gram.field

    @property
    def dim(self):
        return self.gram.nrows

    @property
    def conj_exp(self):
        """Exponent of the field automorphism (q for hermitian over GF(q^2), else 1)."""
        if self.kind == "hermitian":
            return self.field.base.q
        return 1


@dataclass(frozen=True)
class OrthType:
    eps: int  # +1 or -1
    witness: int  # Arf value (even q) or discriminant code (odd q)

    @property
    def sign(self):
        return "+" if self.eps == 1 else "-"


@dataclass(frozen=True)
class FormSolve:
    """Outcome of invariant_form_solve.

    status is "ok" (a nondegenerate invariant form was found), "zero" (only
    the zero form is invariant), "degenerate" (nonzero invariant forms exist,
    all tried ones degenerate) or "inconsistent" (pinned system unsolvable).
    """

    status: str
    form: FormSpec = None
    solution_dim: int = 0


# -- evaluation


def bil(form, x, y):
    F = form.field
    if form.kind == "hermitian":
        k = form.conj_exp
        y = [F.pow(c, k) if c else 0 for c in y]
    xg = vec_mat(F, x, form.gram)
    s = 0
    for a, b in zip(xg, y):
        if a and b:
            s = F.add(s, F.mul(a, b))
    return s


def qval(form, x):
    F = form.field
    if form.kind != "quadratic":
        raise FormError("Q is only defined for quadratic forms")
    s = 0
    rows = form.qmat.rows
    n = len(x)
    for i in range(n):
        xi = x[i]
        if not xi:
            continue
        row = rows[i]
        t = 0
        for j in range(i, n):
            if row[j] and x[j]:
                t = F.add(t, F.mul(row[j], x[j]))
        if t:
            s = F.add(s, F.mul(xi, t))
    return s


def _upper(M):
    """Upper-triangular representative of the quadratic form x M x^T."""
    F = M.field
    n = M.nrows
    rows = [[0] * n for _ in range(n)]
    for i in range(n):
        rows[i][i] = M.rows[i][i]
        for j in range(i + 1, n):
            rows[i][j] = F.add(M.rows[i][j], M.rows[j][i])
    return Matrix(F, rows)


def polarization(A):
    return mat_add(A, A.T)


def quadratic_from_upper(A):
    return FormSpec("quadratic", polarization(A), _upper(A))


def _tr(form, P):
    if form.kind == "hermitian":
        return conj(P, form.conj_exp).T
    return P.T


def transport(form, P):
    """The form in the coordinates whose basis is the rows of P."""
    G = mat_mul(mat_mul(P, form.gram), _tr(form, P))
    A = None
    if form.kind == "quadratic":
        A = _upper(mat_mul(mat_mul(P, form.qmat), P.T))
    return FormSpec(form.kind, G, A)


def is_nondegenerate(form):
    return rank(form.gram) == form.dim


def restrict_form(form, S):
    """The form restricted to the subspace S, in S's RREF basis."""
    return transport(form, S.matrix())


def perp(form, S):
    """{v : B(v, s) = 0 for all s in S}."""
    if S.dim == 0:
        return Subspace(form.field, [[1 if i == j else 0 for j in range(form.dim)] for i in range(form.dim)], form.dim)
    M = mat_mul(form.gram, _tr(form, S.matrix()))
    return nullspace(M)


def is_isometry(M, form):
    if M.nrows != form.dim or M.ncols != form.dim:
        return False
    if mat_mul(mat_mul(M, form.gram), _tr(form, M)) != form.gram:
        return False
    if form.kind == "quadratic":
        return all(qval(form, r) == form.qmat.rows[i][i] for i, r in enumerate(M.rows))
    return True


# -- standard forms


def _parse_x(X, eps):
    X = X.replace("plus", "+").replace("minus", "-")
    if X in ("SO+", "O+"):
        return "SO", 1
    if X in ("SO-", "O-"):
        return "SO", -1
    if X in ("SO", "O"):
        if eps in ("+", 1):
            return "SO", 1
        if eps in ("-", -1):
            return "SO", -1
        raise FormError("orthogonal forms need eps = + or -")
    if X in ("Sp", "SU", "GU"):
        return ("SU" if X == "GU" else X), None
    raise FormError("no standard form for %r" % X)


def anisotropic_plane(F):
    """Upper-triangular Q of the norm form of GF(q^2)/GF(q): a^2 - c1 ab + c0 b^2."""
    E = ext_field(F, 2)
    c0, c1 = E.poly[0], E.poly[1]
    return [[1, F.neg(c1)], [0, c0]]


def standard_form(X, dim, q, eps=None):
    """Fixed standard forms: antidiagonal hyperbolic pairs, identity for hermitian."""
    kind, sign = _parse_x(X, eps)
    if kind in ("Sp", "SO") and dim % 2:
        raise FormError("%s needs even dimension" % kind)
    if dim < 1:
        raise FormError("dimension must be positive")
    if kind == "SU":
        E = ext_field(gf(q), 2)
        return FormSpec("hermitian", identity(E, dim))
    F = gf(q)
    n = dim // 2
    if kind == "Sp":
        rows = [[0] * dim for _ in range(dim)]
        for i in range(dim):
            rows[i][dim - 1 - i] = 1 if i < n else F.neg(1)
        return FormSpec("symplectic", Matrix(F, rows))
    A = [[0] * dim for _ in range(dim)]
    for i in range(n):
        A[i][dim - 1 - i] = 1
    if sign == -1:
        plane = anisotropic_plane(F)
        A[n - 1][n] = 0
        A[n - 1][n - 1], A[n - 1][n] = plane[0]
        A[n][n] = plane[1][1]
    return quadratic_from_upper(Matrix(F, A))


def form_kind(X):
    return {"Sp": "symplectic", "SU": "hermitian", "SO": "quadratic"}[_parse_x(X, "+")[0]]


# -- classification


def _add_scaled(F, v, c, w):
    if not c:
        return list(v)
    return [F.add(a, F.mul(c, b)) for a, b in zip(v, w)]


def _project_out(form, vecs, e, f):
    """Project vectors onto <e,f>^perp (e, f isotropic with B(e,f) != 0)."""
    F = form.field
    bef, bfe = bil(form, e, f), bil(form, f, e)
    out = []
    for v in vecs:
        a = F.div(bil(form, v, f), bef)
        b = F.div(bil(form, v, e), bfe)
        w = _add_scaled(F, v, F.neg(a), e)
        w = _add_scaled(F, w, F.neg(b), f)
        out.append(w)
    S = Subspace(F, out, form.dim)
    return [list(r) for r in S.basis]


def _combos(F, basis):
    """Vectors of span(basis), zero excluded, in a fixed order."""
    n = len(basis[0]) if basis else 0
    for coeffs in product(range(F.q), repeat=len(basis)):
        if not any(coeffs):
            continue
        w = [0] * n
        for c, b in zip(reversed(coeffs), basis):
            w = _add_scaled(F, w, c, b)
        yield w


def _hyperbolic_pairs(form, basis):
    """Split off hyperbolic pairs (e, f), B(e,f)=1, Q(e)=Q(f)=0, while possible.

    Returns (pairs, rest) where rest spans the anisotropic remainder.
    """
    F = form.field
    quad = form.kind == "quadratic"
    pairs = []
    while basis:
        if quad:
            e = next((w for w in _combos(F, basis) if qval(form, w) == 0), None)
            if e is None:
                break
        else:
            e = basis[0]
        w = next((b for b in basis if bil(form, e, b)), None)
        if w is None:
            raise FormError("degenerate form")
        f = [F.mul(F.inv(bil(form, e, w)), x) for x in w]
        if quad:
            f = _add_scaled(F, f, F.neg(qval(form, f)), e)
        pairs.append((e, f))
        basis = _project_out(form, basis, e, f)
    return pairs, basis


def orth_type(form):
    """Type of a nondegenerate even-dimensional quadratic form."""
    if form.kind != "quadratic":
        raise FormError("orth_type needs a quadratic form")
    if form.dim % 2 or not is_nondegenerate(form):
        raise FormError("orth_type needs a nondegenerate even-dimensional form")
    F = form.field
    k = form.dim // 2
    if F.p == 2:
        sform = FormSpec("symplectic", form.gram)
        basis = [list(r) for r in identity(F, form.dim).rows]
        pairs, _ = _hyperbolic_pairs(sform, basis)
        arf = 0
        for e, f in pairs:
            arf = F.add(arf, F.mul(qval(form, e), qval(form, f)))
        # arf is in {x^2 + x} iff its absolute trace vanishes
        tr, x = 0, arf
        for _ in range(F.e):
            tr = F.add(tr, x)
            x = F.mul(x, x)
        return OrthType(1 if tr == 0 else -1, arf)
    from .matspace import det

    d = det(form.gram)
    if k % 2:
        d = F.neg(d)
    return OrthType(1 if F.is_square(d) else -1, d)


def singular_count(form):
    """Number of nonzero singular vectors (exhaustive)."""
    F = form.field
    return sum(1 for v in product(range(F.q), repeat=form.dim) if any(v) and qval(form, v) == 0)


def singular_count_formula(k, q, eps):
    return (q ** k - eps) * (q ** (k - 1) + eps)


def dickson_invariant(M, form):
    if form.field.p != 2:
        raise FormError("Dickson invariant is defined here for even q only")
    if not is_isometry(M, form):
        raise FormError("matrix is not an isometry of the form")
    return rank(mat_sub(M, identity(M.field, M.nrows))) % 2


# -- standardization


def standardize(form):
    """(P, standard) with transport(form, P) == standard."""
    F = form.field
    d = form.dim
    if not is_nondegenerate(form):
        raise FormError("degenerate form")
    basis = [list(r) for r in identity(F, d).rows]
    if form.kind == "hermitian":
        rows = []
        k = form.conj_exp
        while basis:
            v = next((b for b in basis if bil(form, b, b)), None)
            if v is None:
                v = next(w for w in _combos(F, basis) if bil(form, w, w))
            h = bil(form, v, v)
            target = F.inv(h)
            lam = next(x for x in range(1, F.q) if F.pow(x, k + 1) == target)
            v = [F.mul(lam, x) for x in v]
            rows.append(v)
            out = []
            for w in basis:
                out.append(_add_scaled(F, w, F.neg(bil(form, w, v)), v))
            S = Subspace(F, out, d)
            basis = [list(r) for r in S.basis]
        P = Matrix(F, rows)
        std = standard_form("SU", d, F.base.q)
    else:
        pairs, rest = _hyperbolic_pairs(form, basis)
        mid = []
        if form.kind == "quadratic" and rest:
            if len(rest) != 2:
                raise FormError("anisotropic kernel of dimension %d" % len(rest))
            plane = anisotropic_plane(F)
            vecs = list(_combos(F, rest))
            x = next(v for v in vecs if qval(form, v) == 1)
            y = next(v for v in vecs if qval(form, v) == plane[1][1] and bil(form, x, v) == plane[0][1])
            mid = [x, y]
        rows = [e for e, _ in pairs] + mid + [f for _, f in reversed(pairs)]
        P = Matrix(F, rows)
        if form.kind == "symplectic":
            std = standard_form("Sp", d, F.q)
        else:
            std = standard_form("SO", d, F.q, 1 if not mid else -1)
    got = transport(form, P)
    if got != std:
        raise FormError("standardization failed")  # pragma: no cover
    return P, std


# -- invariant forms


def _basis_forms(kind, F, d):
    """Basis of the space of forms of the given kind, with its scalar field."""
    out = []
    if kind == "symplectic":
        for i in range(d):
            for j in range(i + 1, d):
                M = [[0] * d for _ in range(d)]
                M[i][j], M[j][i] = 1, F.neg(1)
                out.append(Matrix(F, M))
        return out, F
    if kind == "quadratic":
        for i in range(d):
            for j in range(i, d):
                M = [[0] * d for _ in range(d)]
                M[i][j] = 1
                out.append(Matrix(F, M))
        return out, F
    K = F.base
    k = K.q
    w = k  # code of the generator x of GF(q^2) over GF(q)
    wbar = F.pow(w, k)
    for i in range(d):
        for j in range(i, d):
            if i == j:
                M = [[0] * d for _ in range(d)]
                M[i][i] = 1
                out.append(Matrix(F, M))
            else:
                for a, b in ((1, 1), (w, wbar)):
                    M = [[0] * d for _ in range(d)]
                    M[i][j], M[j][i] = a, b
                    out.append(Matrix(F, M))
    return out, K


def _defect(kind, g, M, k):
    """g M g* - M, reduced to independent coordinates (upper part)."""
    if kind == "quadratic":
        return mat_sub(_upper(mat_mul(mat_mul(g, M), g.T)), M)
    gt = conj(g, k).T if kind == "hermitian" else g.T
    return mat_sub(mat_mul(mat_mul(g, M), gt), M)


def _coords(kind, D, K):
    F = D.field
    d = D.nrows
    out = []
    for i in range(d):
        for j in range(i if kind != "symplectic" else i + 1, d):
            c = D.rows[i][j]
            if kind == "hermitian":
                out.extend(F.to_vec(c))
            else:
                out.append(c)
    return out


def _make_form(kind, M):
    if kind == "quadratic":
        return quadratic_from_upper(M)
    return FormSpec(kind, M)


def _lin_comb(F, coeffs, mats):
    d = mats[0].nrows
    acc = zeros(F, d, d)
    for c, M in zip(coeffs, mats):
        if c:
            acc = mat_add(acc, Matrix(F, [[F.mul(c, x) for x in r] for r in M.rows]))
    return acc


def invariant_form_solve(generators, kind, B_known=None, tries=200):
    """Solve F(vg) = F(v) for all generators over the space of forms of `kind`.

    With B_known (quadratic kind only) the off-diagonal coefficients of Q are
    pinned to those of B_known and only the diagonal is unknown, so the
    returned Q polarizes to B_known.
    """
    if kind not in KINDS:
        raise FormError("unknown form kind %r" % kind)
    F = generators[0].field
    d = generators[0].nrows
    k = F.base.q if kind == "hermitian" else 1
    if B_known is not None:
        if kind != "quadratic":
            raise FormError("pinning applies to quadratic forms")
        A0 = Matrix(F, [[B_known.rows[i][j] if j > i else 0 for j in range(d)] for i in range(d)])
        diag = []
        for i in range(d):
            M = [[0] * d for _ in range(d)]
            M[i][i] = 1
            diag.append(Matrix(F, M))
        rows, rhs = [], []
        for g in generators:
            cols = [_coords(kind, _defect(kind, g, E, k), F) for E in diag]
            base = _coords(kind, _defect(kind, g, A0, k), F)
            for r in range(len(base)):
                rows.append([c[r] for c in cols])
                rhs.append(F.neg(base[r]))
        x = solve_affine(F, rows, rhs, d)
        if x is None:
            return FormSolve("inconsistent")
        kernel = right_nullspace(Matrix(F, rows, d)).dim if rows else d
        A = mat_add(A0, _lin_comb(F, x, diag))
        form = quadratic_from_upper(A)
        status = "ok" if is_nondegenerate(form) else "degenerate"
        return FormSolve(status, form, kernel)

    basis, K = _basis_forms(kind, F, d)
    rows = []
    for g in generators:
        cols = [_coords(kind, _defect(kind, g, M, k), K) for M in basis]
        for r in range(len(cols[0])):
            rows.append([c[r] for c in cols])
    sol = right_nullspace(Matrix(K, rows, len(basis))) if rows else None
    sols = [list(v) for v in sol.basis] if sol is not None else \
        [[1 if i == j else 0 for j in range(len(basis))] for i in range(len(basis))]
    if not sols:
        return FormSolve("zero")
    # prefer a standard form when it is invariant
    std_names = {"symplectic": [("Sp", None)], "hermitian": [("SU", None)],
                 "quadratic": [("SO", 1), ("SO", -1)]}[kind]
    if d % 2 == 0 or kind == "hermitian":
        q = K.q
        for X, eps in std_names:
            std = standard_form(X, d, q, eps)
            if std.field is F and all(is_isometry(g, std) for g in generators):
                return FormSolve("ok", std, len(sols))
    cands = [_make_form(kind, _lin_comb(F, s, basis)) for s in sols]
    rng = random.Random(0)
    for _ in range(tries):
        if cands:
            form = cands.pop(0)
        else:
            coeffs = [rng.randrange(K.q) for _ in sols]
            if not any(coeffs):
                continue
            comb = [0] * len(basis)
            for c, s in zip(coeffs, sols):
                comb = [K.add(a, K.mul(c, b)) for a, b in zip(comb, s)]
            form = _make_form(kind, _lin_comb(F, comb, basis))
        if is_nondegenerate(form):
            return FormSolve("ok", form, len(sols))
    return FormSolve("degenerate", None, len(sols))


def orthogonal_sum(f1, f2):
    G = block_diag(f1.gram, f2.gram)
    A = block_diag(f1.qmat, f2.qmat) if f1.kind == "quadratic" else None
    return FormSpec(f1.kind, G, A)


# -- serialization


def format_form(form):
    from .matspace import format_matrix

    out = "%s\n%s" % (form.kind, format_matrix(form.gram))
    if form.qmat is not None:
        out += format_matrix(form.qmat)
    return out


def parse_form(text):
    """Inverse of format_form."""
    from .matspace import parse_matrix

    lines = text.strip().splitlines()
    kind = lines[0].strip()
    if kind not in KINDS:
        raise FormError("unknown form kind %r" % kind)
    d = len(lines[2].split())
    gram = parse_matrix("\n".join(lines[1:d + 2]))
    qmat = parse_matrix("\n".join(lines[d + 2:2 * d + 3])) if kind == "quadratic" else None
    return FormSpec(kind, gram, qmat)

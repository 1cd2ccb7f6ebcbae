"""Dense linear algebra over a FieldSpec.

Vectors are rows and matrices act on the right, v -> vM. Entries are field
codes; matrices need a tabled field (order <= 256), which covers every field a
matrix lives over here (q <= 9 and q^2 <= 81).
"""

import numpy as np

from . import poly
from .gfield import FieldError, parse_field


class Matrix:
    """Immutable matrix over a tabled field; rows are tuples of codes."""

    __slots__ = ("field", "rows", "nrows", "ncols")

    def __init__(self, field, rows, ncols=None):
        if not field.tabled:
            raise FieldError("matrices need a tabled field (order <= 256)")
        self.field = field
        self.rows = tuple(tuple(r) for r in rows)
        self.nrows = len(self.rows)
        self.ncols = len(self.rows[0]) if self.rows else (ncols or 0)

    def __eq__(self, other):
        return (isinstance(other, Matrix) and self.field is other.field
                and self.rows == other.rows)

    def __hash__(self):
        return hash(self.rows)

    def __matmul__(self, other):
        return mat_mul(self, other)

    def __repr__(self):
        return "Matrix(%s,\n %s)" % (self.field.q, "\n ".join(map(str, self.rows)))

    def key(self):
        """Compact hashable form (one byte per entry)."""
        return bytes(c for r in self.rows for c in r)

    @property
    def T(self):
        return Matrix(self.field, zip(*self.rows), self.nrows)

    def is_square(self):
        return self.nrows == self.ncols


def from_key(field, key, n):
    return Matrix(field, [key[i * n:(i + 1) * n] for i in range(n)])


def identity(F, n):
    return Matrix(F, [[1 if i == j else 0 for j in range(n)] for i in range(n)])


def zeros(F, r, c):
    return Matrix(F, [[0] * c for _ in range(r)], c)


def block_diag(A, B):
    F = A.field
    n1, n2 = A.nrows, B.nrows
    rows = [list(r) + [0] * n2 for r in A.rows] + [[0] * n1 + list(r) for r in B.rows]
    return Matrix(F, rows)


def mat_mul(A, B):
    if A.ncols != B.nrows:
        raise ValueError("shape mismatch %dx%d @ %dx%d" % (A.nrows, A.ncols, B.nrows, B.ncols))
    F = A.field
    q, addt, mult = F.q, F.addt, F.mult
    cols = list(zip(*B.rows))
    out = []
    for row in A.rows:
        nz = [(k, a * q) for k, a in enumerate(row) if a]
        r = []
        for col in cols:
            s = 0
            for k, aq in nz:
                b = col[k]
                if b:
                    s = addt[s * q + mult[aq + b]]
            r.append(s)
        out.append(tuple(r))
    return Matrix(F, out, B.ncols)


def vec_mat(F, v, M):
    q, addt, mult = F.q, F.addt, F.mult
    out = [0] * M.ncols
    for a, row in zip(v, M.rows):
        if a:
            aq = a * q
            for j, b in enumerate(row):
                if b:
                    out[j] = addt[out[j] * q + mult[aq + b]]
    return out


def mat_add(A, B):
    F = A.field
    q, addt = F.q, F.addt
    return Matrix(F, [[addt[a * q + b] for a, b in zip(ra, rb)] for ra, rb in zip(A.rows, B.rows)], A.ncols)


def mat_sub(A, B):
    F = A.field
    q, addt, negt = F.q, F.addt, F.negt
    return Matrix(F, [[addt[a * q + negt[b]] for a, b in zip(ra, rb)] for ra, rb in zip(A.rows, B.rows)], A.ncols)


def mat_scale(A, c):
    F = A.field
    q, mult = F.q, F.mult
    return Matrix(F, [[mult[c * q + a] for a in r] for r in A.rows], A.ncols)


def mat_map(A, fn):
    return Matrix(A.field, [[fn(a) for a in r] for r in A.rows], A.ncols)


def conj(A, k):
    """Entrywise a -> a^k (for hermitian forms, k = q)."""
    F = A.field
    return mat_map(A, lambda a: F.pow(a, k) if a else 0)


def mat_pow(A, k):
    if k < 0:
        A, k = mat_inv(A), -k
    result = identity(A.field, A.nrows)
    while k:
        if k & 1:
            result = mat_mul(result, A)
        k >>= 1
        if k:
            A = mat_mul(A, A)
    return result


def has_order(A, m):
    """True iff A has multiplicative order exactly m."""
    from sympy import factorint

    I = identity(A.field, A.nrows)
    if mat_pow(A, m) != I:
        return False
    return all(mat_pow(A, m // r) != I for r in factorint(m))


def mat_order(A, bound=10 ** 7):
    I = identity(A.field, A.nrows)
    X = A
    for k in range(1, bound + 1):
        if X == I:
            return k
        X = mat_mul(X, A)
    raise ValueError("order exceeds bound")


# -- elimination


def _rref_rows(F, rows, ncols):
    """Reduced row echelon form of a list of lists; returns (rows, pivots)."""
    q, addt, mult, negt, invt = F.q, F.addt, F.mult, F.negt, F.invt
    rows = [list(r) for r in rows]
    pivots = []
    r = 0
    nr = len(rows)
    for c in range(ncols):
        piv = None
        for i in range(r, nr):
            if rows[i][c]:
                piv = i
                break
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        pr = rows[r]
        inv = invt[pr[c]]
        if inv != 1:
            iq = inv * q
            pr = rows[r] = [mult[iq + x] for x in pr]
        for i in range(nr):
            if i != r:
                row = rows[i]
                f = row[c]
                if f:
                    nf = negt[f] * q
                    rows[i] = [addt[x * q + mult[nf + y]] if y else x for x, y in zip(row, pr)]
        pivots.append(c)
        r += 1
        if r == nr:
            break
    return rows[:r], pivots


def rref(M):
    rows, _ = _rref_rows(M.field, M.rows, M.ncols)
    return Matrix(M.field, rows, M.ncols) if rows else zeros(M.field, 0, M.ncols)


def rank(M):
    return len(_rref_rows(M.field, M.rows, M.ncols)[0])


def rank_rows(F, rows, ncols):
    return len(_rref_rows(F, rows, ncols)[0])


def _null_rows(F, rows, ncols):
    red, pivots = _rref_rows(F, rows, ncols)
    free = [c for c in range(ncols) if c not in set(pivots)]
    out = []
    for fc in free:
        v = [0] * ncols
        v[fc] = 1
        for r, pc in zip(red, pivots):
            if r[fc]:
                v[pc] = F.negt[r[fc]]
        out.append(v)
    return out


def nullspace(M):
    """Left-acting kernel {v : vM = 0}, as a Subspace of F^nrows."""
    return Subspace(M.field, _null_rows(M.field, list(zip(*M.rows)), M.nrows), M.nrows)


def right_nullspace(M):
    """{x : M x^T = 0}, i.e. solutions of the linear system with rows of M."""
    return Subspace(M.field, _null_rows(M.field, M.rows, M.ncols), M.ncols)


def det(M):
    F = M.field
    n = M.nrows
    rows = [list(r) for r in M.rows]
    d = 1
    for c in range(n):
        piv = next((i for i in range(c, n) if rows[i][c]), None)
        if piv is None:
            return 0
        if piv != c:
            rows[c], rows[piv] = rows[piv], rows[c]
            d = F.neg(d)
        pc = rows[c][c]
        d = F.mul(d, pc)
        inv = F.inv(pc)
        for i in range(c + 1, n):
            f = rows[i][c]
            if f:
                f = F.mul(f, inv)
                rows[i] = [F.sub(x, F.mul(f, y)) for x, y in zip(rows[i], rows[c])]
    return d


def mat_inv(M):
    F = M.field
    n = M.nrows
    aug = [list(r) + [1 if i == j else 0 for j in range(n)] for i, r in enumerate(M.rows)]
    red, pivots = _rref_rows(F, aug, 2 * n)
    if len(red) < n or pivots[n - 1] != n - 1:
        raise ZeroDivisionError("singular matrix")
    return Matrix(F, [r[n:] for r in red])


def solve_affine(F, rows, rhs, ncols):
    """One solution x of rows . x = rhs (as a list), or None if inconsistent."""
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    red, pivots = _rref_rows(F, aug, ncols + 1)
    if pivots and pivots[-1] == ncols:
        return None
    x = [0] * ncols
    for r, pc in zip(red, pivots):
        x[pc] = r[ncols]
    return x


# -- subspaces


class Subspace:
    """Subspace of F^ambient stored by its canonical RREF basis."""

    __slots__ = ("field", "basis", "ambient", "pivots")

    def __init__(self, field, vectors, ambient):
        rows, pivots = _rref_rows(field, [list(v) for v in vectors], ambient)
        self.field = field
        self.basis = tuple(tuple(r) for r in rows)
        self.ambient = ambient
        self.pivots = tuple(pivots)

    @property
    def dim(self):
        return len(self.basis)

    def __eq__(self, other):
        return (isinstance(other, Subspace) and self.field is other.field
                and self.ambient == other.ambient and self.basis == other.basis)

    def __hash__(self):
        return hash((self.ambient, self.basis))

    def __repr__(self):
        return "Subspace(dim=%d of %d, %s)" % (self.dim, self.ambient, list(self.basis))

    def matrix(self):
        return Matrix(self.field, self.basis, self.ambient)

    def coords(self, v):
        """Coordinates of v in the RREF basis (v assumed to lie in the space)."""
        return [v[c] for c in self.pivots]

    def contains(self, v):
        F = self.field
        c = self.coords(v)
        w = [0] * self.ambient
        for a, b in zip(c, self.basis):
            if a:
                w = [F.add(x, F.mul(a, y)) for x, y in zip(w, b)]
        return list(w) == list(v)

    def vectors(self):
        """All vectors of the subspace (small cases only)."""
        from itertools import product

        F = self.field
        for coeffs in product(range(F.q), repeat=self.dim):
            w = [0] * self.ambient
            for a, b in zip(coeffs, self.basis):
                if a:
                    w = [F.add(x, F.mul(a, y)) for x, y in zip(w, b)]
            yield tuple(w)


def span(F, vectors, ambient):
    return Subspace(F, vectors, ambient)


def whole(F, n):
    return Subspace(F, [[1 if i == j else 0 for j in range(n)] for i in range(n)], n)


def zero_space(F, n):
    return Subspace(F, [], n)


def image(S, M):
    """S M = {vM : v in S}."""
    F = S.field
    return Subspace(F, [vec_mat(F, v, M) for v in S.basis], M.ncols)


def _check_ambient(A, B):
    if A.ambient != B.ambient or A.field is not B.field:
        raise ValueError("subspaces live in different spaces")


def subspace_sum(A, B):
    _check_ambient(A, B)
    return Subspace(A.field, A.basis + B.basis, A.ambient)


def sum_dim(A, B):
    _check_ambient(A, B)
    return rank_rows(A.field, A.basis + B.basis, A.ambient)


def subspace_intersection(A, B):
    """Zassenhaus: rows (a|a) and (b|0); rows with zero left half give A∩B."""
    _check_ambient(A, B)
    F, n = A.field, A.ambient
    rows = [list(a) + list(a) for a in A.basis] + [list(b) + [0] * n for b in B.basis]
    red, pivots = _rref_rows(F, rows, 2 * n)
    inter = [r[n:] for r, pc in zip(red, pivots) if pc >= n]
    out = Subspace(F, inter, n)
    # left-half pivots span A+B: modular law dim(A+B) + dim(A∩B) = dim A + dim B
    assert sum(1 for pc in pivots if pc < n) + out.dim == A.dim + B.dim
    return out


def fixed_space(M):
    return nullspace(mat_sub(M, identity(M.field, M.nrows)))


def commutator_space(M):
    D = mat_sub(M, identity(M.field, M.nrows))
    return Subspace(M.field, D.rows, M.ncols)


def is_invariant(S, M):
    return all(S.contains(vec_mat(S.field, v, M)) for v in S.basis)


def restrict(M, S):
    """Matrix of M on an invariant subspace S in S's RREF basis."""
    if not is_invariant(S, M):
        raise ValueError("subspace is not invariant")
    F = S.field
    return Matrix(F, [S.coords(vec_mat(F, v, M)) for v in S.basis], S.dim)


# -- polynomials of matrices


def char_poly(M):
    """Characteristic polynomial det(xI - M), low degree first, via Hessenberg form."""
    F = M.field
    n = M.nrows
    H = [list(r) for r in M.rows]
    for m in range(1, n - 1):
        i = next((i for i in range(m, n) if H[i][m - 1]), None)
        if i is None:
            continue
        if i != m:
            H[i], H[m] = H[m], H[i]
            for row in H:
                row[i], row[m] = row[m], row[i]
        t = F.inv(H[m][m - 1])
        for j in range(m + 1, n):
            u = F.mul(H[j][m - 1], t)
            if u:
                H[j] = [F.sub(a, F.mul(u, b)) for a, b in zip(H[j], H[m])]
                for row in H:
                    row[m] = F.add(row[m], F.mul(u, row[j]))
    # p_k = (x - h_kk) p_{k-1} - sum_{i<k} h_ik (prod_{j=i+1..k} h_{j,j-1}) p_{i-1}
    ps = [[1]]
    for k in range(n):
        pk = poly.mul(F, [F.neg(H[k][k]), 1], ps[k])
        prod_ = 1
        for i in range(k - 1, -1, -1):
            prod_ = F.mul(prod_, H[i + 1][i])
            if prod_ == 0:
                break
            c = F.mul(H[i][k], prod_)
            if c:
                pk = poly.sub(F, pk, poly.scale(F, ps[i], c))
        ps.append(pk)
    return ps[n]


def is_irreducible_on(M, S):
    """True iff the characteristic polynomial of M on the invariant subspace S is irreducible."""
    if S.dim == 0:
        return False
    return poly.is_irreducible(M.field, char_poly(restrict(M, S)))


def mult_matrix(zeta):
    """Matrix of x -> x*zeta on E = zeta.field over its base, basis 1, x, ..., x^(n-1)."""
    E = zeta.field
    if E.base is None:
        raise FieldError("element of a prime field has no registered base")
    B = E.base
    rows = []
    for i in range(E.degree):
        xi = E.from_vec([1 if j == i else 0 for j in range(E.degree)])
        rows.append(E.to_vec(E.mul(xi, zeta.code)))
    return Matrix(B, rows)


def companion(F, f):
    """Companion matrix of monic f (row convention: e_i -> e_{i+1})."""
    n = len(f) - 1
    rows = []
    for i in range(n - 1):
        rows.append([1 if j == i + 1 else 0 for j in range(n)])
    rows.append([F.neg(c) for c in f[:n]])
    return Matrix(F, rows)


# -- spinning


def spin_closure(generators, v, check=False):
    """Smallest subspace containing v and invariant under all generators."""
    F = generators[0].field
    n = generators[0].nrows
    q, addt, mult, negt, invt = F.q, F.addt, F.mult, F.negt, F.invt
    echelon = []  # (pivot, normalized row)
    queue = []

    def reduce_(w):
        w = list(w)
        for pc, row in echelon:
            c = w[pc]
            if c:
                nc = negt[c] * q
                w = [addt[x * q + mult[nc + y]] if y else x for x, y in zip(w, row)]
        return w

    def insert(w):
        pc = next((i for i, x in enumerate(w) if x), None)
        if pc is None:
            return False
        inv = invt[w[pc]] * q
        w = [mult[inv + x] for x in w]
        echelon.append((pc, w))
        queue.append(w)
        return True

    insert(reduce_(v))
    while queue and len(echelon) < n:
        w = queue.pop()
        for g in generators:
            insert(reduce_(vec_mat(F, w, g)))
            if len(echelon) == n:
                break
    S = Subspace(F, [row for _, row in echelon], n)
    if check:
        assert all(is_invariant(S, g) for g in generators)
    return S


def projective_points(F, n):
    """Representatives of the 1-spaces of F^n (first nonzero coordinate 1)."""
    from itertools import product

    for lead in range(n):
        for tail in product(range(F.q), repeat=n - lead - 1):
            yield (0,) * lead + (1,) + tail


def _orbit_points_reducible(generators, cap):
    F = generators[0].field
    n = generators[0].nrows
    npts = (F.q ** n - 1) // (F.q - 1)
    if npts > cap:
        raise ValueError("projective point count %d exceeds cap %d" % (npts, cap))
    for v in projective_points(F, n):
        if spin_closure(generators, v).dim < n:
            return True
    return False


def _kernel_reducible(generators):
    # Any proper invariant subspace contains an irreducible F[a]-submodule for
    # a = generators[0], hence a nonzero v with f(a) v = 0 for an irreducible
    # factor f of charpoly(a); vectors in one cyclic irreducible submodule
    # spin to the same closure, so one representative per submodule suffices.
    a = generators[0]
    F = a.field
    n = a.nrows
    for f, _ in poly.factor(F, char_poly(a)):
        K = nullspace(poly.compose_matrix(F, f, a))
        seen = set()
        for v in projective_points(F, K.dim):
            w = [0] * n
            for c, b in zip(v, K.basis):
                if c:
                    w = [F.add(x, F.mul(c, y)) for x, y in zip(w, b)]
            w = tuple(w)
            if w in seen:
                continue
            S = spin_closure(generators, w)
            if S.dim < n:
                return True
            cyc = spin_closure([a], w)
            for u in cyc.vectors():
                if any(u):
                    seen.add(_normalize(F, u))
            seen.add(_normalize(F, w))
        # fallthrough: every irreducible a-submodule inside ker f(a) spins to V
    return False


def _normalize(F, v):
    lead = next(x for x in v if x)
    inv = F.inv(lead)
    return tuple(F.mul(inv, x) for x in v)


def is_reducible_oracle(generators, cap=10 ** 5, method="auto"):
    """True iff the matrix group generated by `generators` fixes a proper nonzero subspace.

    method "full" spins every projective point (at most `cap` of them);
    "kernel" spins one vector per irreducible cyclic submodule of the first
    generator, which decides the same predicate; "auto" uses "full" up to
    2000 points.
    """
    F = generators[0].field
    n = generators[0].nrows
    npts = (F.q ** n - 1) // (F.q - 1)
    if method == "auto":
        method = "full" if npts <= 2000 else "kernel"
    if method == "full":
        return _orbit_points_reducible(generators, cap)
    if method == "kernel":
        return _kernel_reducible(generators)
    raise ValueError("unknown method %r" % method)


# -- text format


def format_matrix(M):
    lines = [M.field.serialize()]
    for r in M.rows:
        lines.append(" ".join("[%s]" % ",".join(map(str, M.field.to_vec(c))) for c in r))
    return "\n".join(lines) + "\n"


def parse_matrix(text):
    lines = [ln for ln in text.strip().splitlines()]
    F = parse_field(lines[0].strip())
    rows = []
    for ln in lines[1:]:
        rows.append([F.from_vec([int(c) for c in tok.strip("[]").split(",")]) for tok in ln.split()])
    return Matrix(F, rows)


# -- batched ranks (numpy)


def np_tables(F):
    """(add, mul, neg, inv) lookup tables as uint8 arrays."""
    q = F.q
    return (np.array(F.addt, dtype=np.uint8).reshape(q, q),
            np.array(F.mult, dtype=np.uint8).reshape(q, q),
            np.array(F.negt, dtype=np.uint8),
            np.array(F.invt, dtype=np.uint8))


def batch_rank(F, A, tables=None):
    """Ranks of a stack of matrices A of shape (N, r, c) over F."""
    addt, mult, negt, invt = tables or np_tables(F)
    A = np.array(A, dtype=np.uint8, copy=True)
    N, r, c = A.shape
    rk = np.zeros(N, dtype=np.int64)
    rows = np.arange(r)
    for col in range(c):
        mask = (A[:, :, col] != 0) & (rows[None, :] >= rk[:, None])
        has = mask.any(axis=1)
        if not has.any():
            continue
        idx = np.nonzero(has)[0]
        piv = mask[idx].argmax(axis=1)
        dst = rk[idx]
        prow = A[idx, piv].copy()
        A[idx, piv] = A[idx, dst]
        prow = mult[invt[prow[:, col]][:, None], prow]
        A[idx, dst] = prow
        sub = A[idx]
        coef = negt[sub[:, :, col]]
        below = rows[None, :] > dst[:, None]
        coef = np.where(below, coef, 0).astype(np.uint8)
        sub = addt[sub, mult[coef[:, :, None], prow[:, None, :]]]
        A[idx] = sub
        rk[idx] += 1
    return rk

"""Classical groups: descriptors, orders, membership, sampling, class orbits.

The groups are SL_{2n}(q), SU_{2n}(q), Sp_{2n}(q) and SO^{+-}_{2n}(q) acting on
row vectors and preserving the standard forms of the forms module. For even q
SO is the kernel of the Dickson invariant inside O; for odd q it is O ∩ SL.
"""

from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from itertools import product
from math import prod
import random

import numpy as np

from .forms import (bil, dickson_invariant, is_isometry, qval, standard_form, anisotropic_plane)
from .gfield import ext_field, gf
from .matspace import (Matrix, Subspace, det, from_key, identity, mat_inv, mat_mul, mat_scale,
                       rank_rows)

TYPES = ("SL", "SU", "Sp", "SOplus", "SOminus")
_ALIASES = {"SO+": "SOplus", "SO-": "SOminus", "SOplus": "SOplus", "SOminus": "SOminus",
            "SL": "SL", "SU": "SU", "Sp": "Sp"}

DEFAULT_GROUP_CAP = 10 ** 6
DEFAULT_CLASS_CAP = 5 * 10 ** 6


class GroupError(ValueError):
    pass


def normalize_type(X):
    try:
        return _ALIASES[X]
    except KeyError:
        raise GroupError("unknown group type %r (use one of %s)" % (X, ", ".join(TYPES))) from None


@dataclass(frozen=True)
class GroupSpec:
    """X_{2n}(q) with its natural module over GF(q^delta)."""

    X: str
    n: int
    q: int
    form: object = dc_field(default=None, compare=False, repr=False)

    @property
    def dim(self):
        return 2 * self.n

    @property
    def delta(self):
        return 2 if self.X == "SU" else 1

    @property
    def eps(self):
        return {"SOplus": 1, "SOminus": -1}.get(self.X)

    @property
    def field(self):
        if self.X == "SU":
            return ext_field(gf(self.q), 2)
        return gf(self.q)

    @property
    def name(self):
        return "%s_%d(%d)" % ({"SOplus": "SO+", "SOminus": "SO-"}.get(self.X, self.X), self.dim, self.q)


def group(X, n, q):
    X = normalize_type(X)
    if n < 1:
        raise GroupError("n must be positive")
    gf(q)
    form = None
    if X == "SU":
        form = standard_form("SU", 2 * n, q)
    elif X == "Sp":
        form = standard_form("Sp", 2 * n, q)
    elif X in ("SOplus", "SOminus"):
        form = standard_form("SO", 2 * n, q, 1 if X == "SOplus" else -1)
    return GroupSpec(X, n, q, form)


# -- orders


def theta(k, n, q, sign=1):
    """Θ(k,n;q) = prod_{i=k}^n (1 - q^{-i}); sign=-1 gives Θ(k,n;-q)."""
    if k == 0:
        return Fraction(1)
    if not (1 <= k <= n) or q < 2:
        raise ValueError("theta needs 1 <= k <= n (or k = 0) and q >= 2")
    base = Fraction(sign * q)
    out = Fraction(1)
    for i in range(k, n + 1):
        out *= 1 - base ** (-i)
    return out


def order_formula(kind, d, q):
    """Orders of the full groups (and the derived SL, SU, SO) for dimension d."""
    if kind == "GL":
        v = q ** (d * d) * theta(1, d, q)
    elif kind == "SL":
        v = q ** (d * d) * theta(1, d, q) / (q - 1)
    elif kind == "GU":
        v = q ** (d * d) * theta(1, d, q, -1)
    elif kind == "SU":
        v = q ** (d * d) * theta(1, d, q, -1) / (q + 1)
    elif kind == "Sp":
        m = d // 2
        v = q ** (2 * m * m + m) * theta(1, m, q * q)
    elif kind in ("O+", "O-", "SO+", "SO-"):
        m = d // 2
        e = 1 if kind.endswith("+") else -1
        v = 2 * Fraction(q) ** (2 * m * m - m) * (1 - e * Fraction(q) ** (-m)) * theta(1 if m > 1 else 0, m - 1, q * q)
        if kind.startswith("SO"):
            v /= 2
    elif kind == "Oodd":
        v = 2 * Fraction(q) ** ((d * d - d) // 2) * theta(1 if d > 1 else 0, (d - 1) // 2, q * q) \
            if d > 1 else Fraction(2)
    else:
        raise GroupError("unknown group kind %r" % kind)
    if v.denominator != 1:
        raise GroupError("non-integral order")  # pragma: no cover
    return int(v)


def order_product(kind, d, q):
    """Independent product formulas, e.g. |GL_d(q)| = prod (q^d - q^i)."""
    if kind == "GL":
        return prod(q ** d - q ** i for i in range(d))
    if kind == "SL":
        return order_product("GL", d, q) // (q - 1)
    if kind == "GU":
        return q ** (d * (d - 1) // 2) * prod(q ** i - (-1) ** i for i in range(1, d + 1))
    if kind == "SU":
        return order_product("GU", d, q) // (q + 1)
    m = d // 2
    if kind == "Sp":
        return q ** (m * m) * prod(q ** (2 * i) - 1 for i in range(1, m + 1))
    if kind in ("O+", "O-", "SO+", "SO-"):
        e = 1 if kind.endswith("+") else -1
        v = 2 * q ** (m * (m - 1)) * (q ** m - e) * prod(q ** (2 * i) - 1 for i in range(1, m))
        return v // 2 if kind.startswith("SO") else v
    raise GroupError("unknown group kind %r" % kind)


def _kind(G):
    return {"SL": "SL", "SU": "SU", "Sp": "Sp", "SOplus": "SO+", "SOminus": "SO-"}[G.X]


def group_order(G):
    """|G| for a GroupSpec, or for a (kind, dim, q) descriptor such as ("GU", 2, 2)."""
    if isinstance(G, GroupSpec):
        return order_formula(_kind(G), G.dim, G.q)
    kind, d, q = G
    return order_formula(kind, d, q)


# -- membership


def contains(G, M):
    if M.nrows != G.dim or M.ncols != G.dim or M.field is not G.field:
        raise GroupError("matrix does not match the group's dimension and field")
    if G.X == "SL":
        return det(M) == 1
    if not is_isometry(M, G.form):
        return False
    if G.X == "Sp":
        return True
    if G.X == "SU":
        return det(M) == 1
    if G.q % 2 == 0:
        return dickson_invariant(M, G.form) == 0
    return det(M) == 1


# -- sampling and enumeration by images of the standard basis


def _rand_vec(F, basis, rng):
    n = len(basis[0])
    w = [0] * n
    for b in basis:
        c = rng.randrange(F.q)
        if c:
            w = [F.add(x, F.mul(c, y)) for x, y in zip(w, b)]
    return w


def _span_vectors(F, basis):
    n = len(basis[0])
    for coeffs in product(range(F.q), repeat=len(basis)):
        w = [0] * n
        for c, b in zip(coeffs, basis):
            if c:
                w = [F.add(x, F.mul(c, y)) for x, y in zip(w, b)]
        yield w


def _project(form, basis, e, f):
    F = form.field
    bef, bfe = bil(form, e, f), bil(form, f, e)
    out = []
    for v in basis:
        a = F.neg(F.div(bil(form, v, f), bef))
        b = F.neg(F.div(bil(form, v, e), bfe))
        w = [F.add(F.add(x, F.mul(a, y)), F.mul(b, z)) for x, y, z in zip(v, e, f)]
        out.append(w)
    return [list(r) for r in Subspace(F, out, form.dim).basis]


def _pair_f(G, e, w):
    F = G.field
    f = [F.mul(F.inv(bil(G.form, e, w)), x) for x in w]
    if G.form.kind == "quadratic":
        c = F.neg(qval(G.form, f))
        f = [F.add(x, F.mul(c, y)) for x, y in zip(f, e)]
    return f


def _fix_det(G, rows):
    F = G.field
    M = Matrix(F, rows)
    d = det(M)
    if d != 1:
        inv = F.inv(d)
        rows = [[F.mul(inv, x) for x in rows[0]]] + [list(r) for r in rows[1:]]
        M = Matrix(F, rows)
    return M


def uniform_element(G, rng):
    """Exactly uniform element of G."""
    F = G.field
    d = G.dim
    n = G.n
    if G.X == "SL":
        rows = []
        while len(rows) < d:
            v = [rng.randrange(F.q) for _ in range(d)]
            if rank_rows(F, rows + [v], d) == len(rows) + 1:
                rows.append(v)
        return _fix_det(G, rows)
    form = G.form
    full = [list(r) for r in identity(F, d).rows]
    while True:
        cur = full
        images = [None] * d
        if G.X == "SU":
            for i in range(d):
                while True:
                    v = _rand_vec(F, cur, rng)
                    if bil(form, v, v) == 1:
                        break
                images[i] = v
                cur = [list(r) for r in Subspace(F, [[F.sub(x, F.mul(bil(form, w, v), y)) for x, y in zip(w, v)]
                                                      for w in cur], d).basis] if i < d - 1 else []
            return _fix_det(G, images)
        quad = form.kind == "quadratic"
        pairs = n - 1 if G.X == "SOminus" else n
        for i in range(pairs):
            while True:
                e = _rand_vec(F, cur, rng)
                if any(e) and (not quad or qval(form, e) == 0):
                    break
            while True:
                w = _rand_vec(F, cur, rng)
                if bil(form, e, w):
                    break
            f = _pair_f(G, e, w)
            images[i], images[d - 1 - i] = e, f
            cur = _project(form, cur, e, f)
        if G.X == "SOminus":
            plane = anisotropic_plane(F)
            vecs = list(_span_vectors(F, cur))
            xs = [v for v in vecs if qval(form, v) == 1]
            x = xs[rng.randrange(len(xs))]
            ys = [v for v in vecs if qval(form, v) == plane[1][1] and bil(form, x, v) == plane[0][1]]
            images[n - 1], images[n] = x, ys[rng.randrange(len(ys))]
        M = Matrix(F, images)
        if G.X == "Sp" or contains(G, M):
            return M


def enumerate_elements(G, limit=DEFAULT_GROUP_CAP):
    """Yield every element of G (tree search over images of the standard basis)."""
    order = group_order(G)
    if order > limit:
        raise GroupError("|G| = %d exceeds enumeration limit %d" % (order, limit))
    F = G.field
    d = G.dim
    n = G.n
    full = [list(r) for r in identity(F, d).rows]
    if G.X == "SL":
        def rec_sl(rows):
            if len(rows) == d:
                M = Matrix(F, rows)
                if det(M) == 1:
                    yield M
                return
            for v in _span_vectors(F, full):
                if rank_rows(F, rows + [v], d) == len(rows) + 1:
                    yield from rec_sl(rows + [v])
        yield from rec_sl([])
        return
    form = G.form
    if G.X == "SU":
        def rec_su(images, cur):
            if len(images) == d:
                M = Matrix(F, images)
                if det(M) == 1:
                    yield M
                return
            for v in _span_vectors(F, cur):
                if bil(form, v, v) == 1:
                    nxt = [list(r) for r in Subspace(F, [[F.sub(x, F.mul(bil(form, w, v), y)) for x, y in zip(w, v)]
                                                          for w in cur], d).basis]
                    yield from rec_su(images + [v], nxt)
        yield from rec_su([], full)
        return
    quad = form.kind == "quadratic"
    pairs = n - 1 if G.X == "SOminus" else n
    plane = anisotropic_plane(F) if G.X == "SOminus" else None

    def rec(i, images, cur):
        if i == pairs:
            if G.X == "SOminus":
                vecs = list(_span_vectors(F, cur))
                for x in vecs:
                    if qval(form, x) != 1:
                        continue
                    for y in vecs:
                        if qval(form, y) == plane[1][1] and bil(form, x, y) == plane[0][1]:
                            out = list(images)
                            out[n - 1], out[n] = x, y
                            M = Matrix(F, out)
                            if contains(G, M):
                                yield M
                return
            M = Matrix(F, images)
            if G.X == "Sp" or contains(G, M):
                yield M
            return
        vecs = list(_span_vectors(F, cur))
        for e in vecs:
            if not any(e) or (quad and qval(form, e) != 0):
                continue
            be = [bil(form, e, w) for w in vecs]
            for w, b in zip(vecs, be):
                if b != 1 or (quad and qval(form, w) != 0):
                    continue
                out = list(images)
                out[i], out[d - 1 - i] = e, w
                yield from rec(i + 1, out, _project(form, cur, e, w))

    yield from rec(0, [None] * d, full)


def brute_force_centralizer_order(t, G, limit=DEFAULT_GROUP_CAP):
    return sum(1 for g in enumerate_elements(G, limit) if mat_mul(g, t) == mat_mul(t, g))


def brute_force_order(kind, d, q, limit=2 ** 16):
    """Count the d x d matrices in a group of the given kind by testing every matrix.

    kind is one of GL, SL, GU, SU, Sp, O+, O-, SO+, SO-; the forms are the
    standard ones. Independent of the order formulas and of enumerate_elements.
    """
    if kind in ("GL", "SL"):
        F, form = gf(q), None
    elif kind in ("GU", "SU"):
        form = standard_form("SU", d, q)
        F = form.field
    elif kind == "Sp":
        form = standard_form("Sp", d, q)
        F = form.field
    elif kind in ("O+", "O-", "SO+", "SO-"):
        form = standard_form("O" + kind[-1], d, q)
        F = form.field
    else:
        raise GroupError("unknown group kind %r" % kind)
    if F.q ** (d * d) > limit:
        raise GroupError("%d matrices exceed the brute-force limit %d" % (F.q ** (d * d), limit))
    count = 0
    for entries in product(range(F.q), repeat=d * d):
        M = Matrix(F, [list(entries[i * d:(i + 1) * d]) for i in range(d)])
        D = det(M)
        if D == 0:
            continue
        if form is not None and not is_isometry(M, form):
            continue
        if kind in ("SL", "SU") and D != 1:
            continue
        if kind in ("SO+", "SO-"):
            if (q % 2 == 0 and dickson_invariant(M, form)) or (q % 2 and D != 1):
                continue
        count += 1
    return count


# -- class orbits


def _np_tables(F):
    q = F.q
    return (np.array(F.addt, dtype=np.uint8).reshape(q, q),
            np.array(F.mult, dtype=np.uint8).reshape(q, q))


def batch_mul(F, A, B, tables=None):
    """A @ B over F for A of shape (N, n, n) and B of shape (n, n) or (N, n, n)."""
    addt, mult = tables or _np_tables(F)
    out = np.zeros((A.shape[0], A.shape[1], B.shape[-1]), dtype=np.uint8)
    for k in range(A.shape[2]):
        a = A[:, :, k][:, :, None]
        b = B[k, :][None, None, :] if B.ndim == 2 else B[:, k, :][:, None, :]
        out = addt[out, mult[a, b]]
    return out


def class_generators(G, count=2, seed=0):
    """A seeded list of uniform random elements of G used to generate it."""
    rng = random.Random("class-generators:%s:%d" % (G.name, seed))
    return [uniform_element(G, rng) for _ in range(count)]


def orbit_keys(t, gens, cap=DEFAULT_CLASS_CAP):
    """Keys of the closure of {t} under conjugation by the given matrices."""
    F = t.field
    n = t.nrows
    tables = _np_tables(F)
    pairs = [(np.array(mat_inv(g).rows, dtype=np.uint8), np.array(g.rows, dtype=np.uint8)) for g in gens]
    start = t.key()
    seen = {start}
    frontier = [start]
    while frontier:
        arr = np.frombuffer(b"".join(frontier), dtype=np.uint8).reshape(-1, n, n)
        new = []
        for ginv, g in pairs:
            # g^{-1} x g for every x in the frontier
            left = np.broadcast_to(ginv, arr.shape)
            res = batch_mul(F, batch_mul(F, np.ascontiguousarray(left), arr, tables), g, tables)
            flat = res.reshape(len(frontier), n * n)
            for row in flat:
                k = row.tobytes()
                if k not in seen:
                    seen.add(k)
                    new.append(k)
            if len(seen) > cap:
                raise GroupError("class size exceeds cap %d" % cap)
        frontier = new
    return seen


def class_orbit(t, G, cap=DEFAULT_CLASS_CAP, expected=None, seed=0, as_keys=False):
    """The conjugacy class t^G.

    Conjugates by a seeded random generating set. When `expected` is given the
    orbit size is certified against it, adding generators until it is reached.
    Without it the orbit is only stable: generators are added until three more
    uniform elements leave its size unchanged (uncertified).
    """
    count = 2
    if expected is None:
        keys = orbit_keys(t, class_generators(G, count, seed), cap)
        stable = 0
        while stable < 3:
            count += 1
            nxt = orbit_keys(t, class_generators(G, count, seed), cap)
            stable = stable + 1 if len(nxt) == len(keys) else 0
            keys = nxt
    else:
        while True:
            keys = orbit_keys(t, class_generators(G, count, seed), cap)
            if len(keys) == expected:
                break
            if len(keys) > expected or count >= 6:
                raise GroupError("orbit size %d does not match expected %d" % (len(keys), expected))
            count += 1
    if as_keys:
        return keys
    return {from_key(t.field, k, t.nrows) for k in keys}


def conjugate(t, g):
    """t^g = g^{-1} t g."""
    return mat_mul(mat_mul(mat_inv(g), t), g)

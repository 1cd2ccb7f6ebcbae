"""Primitive prime divisors, the sets Φ^X(n,q), and good elements.

A good element t of X_{2n}(q) has order in Φ^X(n,q) and an n-dimensional
fixed space U; it acts irreducibly on a complement W. It is built as
t = I_U ⊕ (multiplication by ζ on W ≅ GF(q^{δn})), transported so that the
ambient form is the standard one.
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd

from sympy import divisors, factorint, isprime, totient

from .clgroup import (GroupSpec, contains, group, group_order, normalize_type, order_formula,
                      uniform_element)
from .forms import (form_kind, invariant_form_solve, orth_type, orthogonal_sum, perp,
                    restrict_form, standard_form, standardize)
from .gfield import FieldElement, ext_field, multiplicative_order_mod
from .matspace import (Subspace, block_diag, commutator_space, fixed_space, has_order, identity,
                       image, is_irreducible_on, mat_inv, mat_mul, mat_pow, mult_matrix)


class GoodElementError(ValueError):
    pass


def is_ppd(r, n, q):
    if not isprime(r) or q % r == 0:
        return False
    return multiplicative_order_mod(q, r) == n


def ppd_primes(n, q):
    return sorted(r for r in factorint(q ** n - 1) if is_ppd(r, n, q))


def is_prime_power(q):
    return q > 1 and len(factorint(q)) == 1


def admissible(X, n):
    X = _norm(X)
    if n < 2:
        return False
    if X == "SU":
        return n % 2 == 1
    if X == "Sp":
        return n % 2 == 0
    if X in ("SOplus", "SOminus"):
        return n % 2 == 0 and n >= 4
    return True


def _norm(X):
    return normalize_type(X)


def _check(X, n, q=None):
    X = _norm(X)
    if not admissible(X, n):
        raise GoodElementError("(%s, n=%d) is not admissible for good elements" % (X, n))
    if q is not None and not is_prime_power(q):
        raise GoodElementError("q = %d is not a prime power" % q)
    return X


def torus_order(X, n, q):
    X = _check(X, n, q)
    if X == "SL":
        return (q ** n - 1) // (q - 1)
    if X == "SU":
        return (q ** n + 1) // (q + 1)
    return q ** (n // 2) + 1


def phi_set(X, n, q):
    """Φ^X(n,q) as a sorted list (possibly empty)."""
    X = _check(X, n, q)
    if n == 2:
        return [(q + 1) // gcd(q - 1, 2)]
    delta = 2 if X == "SU" else 1
    Q = q ** delta
    primes = ppd_primes(n, Q)
    target = torus_order(X, n, q)
    out = []
    for m in divisors(target):
        if any(m % r == 0 for r in primes) or ((n, Q) == (6, 2) and m % 9 == 0):
            out.append(int(m))
    return out


def good_class_count(X, n, q, m):
    """φ(m)/n as an exact rational, with a flag telling whether it is integral."""
    if m not in phi_set(X, n, q):
        raise GoodElementError("m = %d is not in Φ" % m)
    v = Fraction(int(totient(m)), n)
    return v, v.denominator == 1


def torus_and_centralizer_order(X, n, q):
    """(|T|, |C_G(t)|)."""
    X = _check(X, n)
    T = torus_order(X, n, q)
    if X == "SL":
        return T, (q ** n - 1) * order_formula("SL", n, q)
    if X == "SU":
        return T, (q ** n + 1) * order_formula("SU", n, q)
    if X == "Sp":
        return T, T * order_formula("Sp", n, q)
    other = "SO-" if X == "SOplus" else "SO+"
    return T, T * order_formula(other, n, q)


def normalizer_order(X, n, q):
    return n * torus_and_centralizer_order(X, n, q)[1]


def cent_ratio(X, n, q):
    X = _check(X, n)
    C = torus_and_centralizer_order(X, n, q)[1]
    return Fraction(C * C, group_order(group(X, n, q)))


def cent_ratio_bound(X, n, q):
    """The stated centralizer-ratio bounds."""
    X = _check(X, n)
    if X == "SL":
        return Fraction((q ** n - 1) ** 2, (q - 1) * q ** (2 * n * n - 1))
    if X == "SU":
        return Fraction(16 * (q ** n + 1) ** 2, 15 * q ** (2 * n * n))
    if X == "Sp":
        return Fraction(25, 16) * Fraction(1, q ** (n * n - n))
    return Fraction(25, 9) * Fraction(1, q ** (n * n - n))


def cent_ratio_sharp_bound(X, n, q):
    """Sharper centralizer-ratio bounds, one per case, from the underlying estimate."""
    X = _check(X, n)
    if X in ("SL", "SU"):
        return cent_ratio_bound(X, n, q)
    h = Fraction(1, q ** (n // 2))
    base = (1 + h) ** 2 / q ** (n * n - n)
    if X == "Sp":
        return base
    return base * (1 + Fraction(2, q ** (n // 2) - 1)) / (1 - Fraction(1, q ** n))


# -- construction


@dataclass(frozen=True)
class GoodElement:
    t: object
    group: GroupSpec
    m: int
    U: Subspace
    W: Subspace
    zeta: FieldElement
    zeta_matrix: object
    torus_generator: object
    torus_order: int
    U_type: object = None
    W_type: object = None
    strict: bool = True


@lru_cache(maxsize=None)
def _torus(X, n, q):
    """Torus generator τ, U, W in standard coordinates, plus ζ_T."""
    G = group(X, n, q)
    B = G.field
    E = ext_field(B, n, limit=None)
    T = torus_order(X, n, q)
    zT = FieldElement(E, E.pow(E.gen, (E.q - 1) // T))
    tauW = mult_matrix(zT)
    I = identity(B, n)
    coords = [list(r) for r in identity(B, 2 * n).rows]
    U_blk = Subspace(B, coords[:n], 2 * n)
    W_blk = Subspace(B, coords[n:], 2 * n)
    if G.X == "SL":
        return block_diag(I, tauW), U_blk, W_blk, zT, None, None
    kind = form_kind(G.X)
    sol = invariant_form_solve([tauW], kind)
    if sol.status != "ok":
        raise GoodElementError("no nondegenerate t|_W-invariant form (%s)" % sol.status)
    formW = sol.form
    if kind == "quadratic" and orth_type(formW).eps != -1:
        raise GoodElementError("W is not of minus type")
    PW, stdW = standardize(formW)
    tauW = mat_mul(mat_mul(PW, tauW), mat_inv(PW))
    if G.X == "Sp":
        stdU = standard_form("Sp", n, q)
    elif G.X == "SU":
        stdU = standard_form("SU", n, q)
    else:
        stdU = standard_form("SO", n, q, -G.eps)
    P, std = standardize(orthogonal_sum(stdU, stdW))
    if std.gram != G.form.gram or std.qmat != G.form.qmat:
        raise GoodElementError("standardized block form differs from the group form")  # pragma: no cover
    Pinv = mat_inv(P)
    tau = mat_mul(mat_mul(P, block_diag(I, tauW)), Pinv)
    U = image(U_blk, Pinv)
    W = image(W_blk, Pinv)
    return tau, U, W, zT, orth_type(stdU) if kind == "quadratic" else None, \
        orth_type(stdW) if kind == "quadratic" else None


def is_degenerate_order(X, n, q, m):
    """True when ζ of order m lies in a proper subfield, so t|_W is reducible."""
    Qb = q ** (2 if _norm(X) == "SU" else 1)
    return any((Qb ** d - 1) % m == 0 for d in divisors(n) if d < n)


def build_good_element(G, m, rng=None, strict=True, verify=True):
    """A good element of order m in G.

    With strict=False any m dividing the torus order is accepted provided
    t|_W is irreducible (used for Sp_4(3) and SL_4(3), whose Φ is degenerate).
    """
    if not isinstance(G, GroupSpec):
        G = group(*G)
    X, n, q = G.X, G.n, G.q
    T = torus_order(X, n, q)
    if strict:
        phi = phi_set(X, n, q)
        if not phi:
            raise GoodElementError("Φ^%s(%d,%d) is empty" % (X, n, q))
        if m not in phi:
            raise GoodElementError("m = %d is not in Φ^%s(%d,%d) = %s" % (m, X, n, q, phi))
    elif T % m:
        raise GoodElementError("m = %d does not divide the torus order %d" % (m, T))
    if is_degenerate_order(X, n, q, m):
        raise GoodElementError("degenerate order m = %d: t|_W would be reducible" % m)
    tau, U, W, zT, Utype, Wtype = _torus(X, n, q)
    t = mat_pow(tau, T // m)
    zeta = zT ** (T // m)
    if rng is not None:
        g = uniform_element(G, rng)
        gi = mat_inv(g)
        t = mat_mul(mat_mul(gi, t), g)
        tau = mat_mul(mat_mul(gi, tau), g)
        U, W = image(U, g), image(W, g)
    ge = GoodElement(t, G, m, U, W, zeta, mult_matrix(zeta), tau, T, Utype, Wtype, strict)
    if verify:
        bad = check_good_element(ge)
        if bad:
            raise GoodElementError("postconditions failed: %s" % ", ".join(bad))
    return ge


def check_good_element(ge):
    """Names of the GoodElement invariants that fail (empty when all hold)."""
    G, t, n = ge.group, ge.t, ge.group.n
    bad = []
    if not contains(G, t):
        bad.append("membership")
    if not has_order(t, ge.m):
        bad.append("order")
    if ge.strict and ge.m not in phi_set(G.X, n, G.q):
        bad.append("order in Phi")
    if fixed_space(t) != ge.U or ge.U.dim != n:
        bad.append("fixed space")
    if commutator_space(t) != ge.W or ge.W.dim != n:
        bad.append("commutator space")
    if not is_irreducible_on(t, ge.W):
        bad.append("irreducible on W")
    if G.X != "SL":
        if perp(G.form, ge.W) != ge.U:
            bad.append("U = W^perp")
        if G.X in ("SOplus", "SOminus"):
            if orth_type(restrict_form(G.form, ge.W)).eps != -1:
                bad.append("W minus type")
            if orth_type(restrict_form(G.form, ge.U)).eps != -G.eps:
                bad.append("U type")
    return bad


def torus_elements(ge):
    """All elements of the cyclic torus T = <τ>."""
    out = []
    x = identity(ge.t.field, ge.t.nrows)
    for _ in range(ge.torus_order):
        out.append(x)
        x = mat_mul(x, ge.torus_generator)
    return out


def least_m(X, n, q):
    phi = phi_set(X, n, q)
    if not phi:
        raise GoodElementError("Φ^%s(%d,%d) is empty" % (_norm(X), n, q))
    return phi[0]


def cent_ratio_audit(nmax=30, qs=range(2, 10), sharp=False):
    """Admissible (X, n, q) where |C|^2/|G| exceeds the centralizer-ratio bound."""
    bound = cent_ratio_sharp_bound if sharp else cent_ratio_bound
    out = []
    qs = [q for q in qs if is_prime_power(q)]
    for X in ("SL", "SU", "Sp", "SOplus", "SOminus"):
        for n in range(2, nmax + 1):
            if not admissible(X, n):
                continue
            for q in qs:
                r, b = cent_ratio(X, n, q), bound(X, n, q)
                if r > b:
                    out.append((X, n, q, r, b))
    return out

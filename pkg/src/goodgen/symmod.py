"""The fully deleted permutation module of S_ell over GF(p).

V = GF(p)^ell, W = sum-zero vectors, E = <(1,...,1)>, U = W/(W ∩ E).
Elements ±g (g a permutation) act on U; their fixed-space dimensions have
closed forms depending only on the cycle type of g.
"""

from dataclasses import dataclass
from fractions import Fraction
from math import factorial, gcd, lcm

from sympy import isprime, primefactors
from sympy.utilities.iterables import partitions

from .gfield import gf
from .matspace import Matrix, rank
from .ppdgood import cent_ratio, is_ppd, is_prime_power, phi_set


class SymmodError(ValueError):
    pass


@dataclass(frozen=True)
class DeletedModule:
    ell: int
    p: int

    @property
    def quotient_by_e(self):
        """True when E ⊆ W, i.e. p | ell."""
        return self.ell % self.p == 0

    @property
    def dim(self):
        return self.ell - 2 if self.quotient_by_e else self.ell - 1

    def canonical(self, v):
        """Canonical coset representative: first coordinate 0 when p | ell."""
        p = self.p
        v = [x % p for x in v]
        if sum(v) % p:
            raise SymmodError("vector is not in W")
        if self.quotient_by_e and v[0]:
            c = v[0]
            v = [(x - c) % p for x in v]
        return tuple(v)

    def coords(self, v):
        """Coordinates of the coset of v in the basis v_i = e_i - e_{i+1}."""
        p = self.p
        v = self.canonical(v)
        c, acc = [], 0
        for x in v[:-1]:
            acc = (acc + x) % p
            c.append(acc)
        if self.quotient_by_e:
            # remove the multiple of e = sum_i i v_i that makes c_{ell-1} vanish
            lam = c[-1] * pow(self.ell - 1, -1, p) % p
            c = [(ci - lam * (i + 1)) % p for i, ci in enumerate(c)][:-1]
        return tuple(c)

    def basis_vector(self, i):
        v = [0] * self.ell
        v[i], v[i + 1] = 1, self.p - 1
        return v


@dataclass(frozen=True)
class SignedPerm:
    """a * g with g the product of consecutive cycles of the given lengths."""

    cycle_type: tuple
    a: int = 1

    @property
    def ell(self):
        return sum(self.cycle_type)

    @property
    def s(self):
        return len(self.cycle_type)

    @property
    def offsets(self):
        out, acc = [], 0
        for k in self.cycle_type:
            out.append(acc)
            acc += k
        return out

    def image(self, i):
        for off, k in zip(self.offsets, self.cycle_type):
            if off <= i < off + k:
                return off + (i - off + 1) % k
        raise IndexError(i)

    def order(self):
        o = lcm(*self.cycle_type)
        return o if self.a == 1 else lcm(o, 2)

    def stats(self, p):
        """(I1, I2, I3) of the cycle type."""
        ks = self.cycle_type
        return (sum(1 for k in ks if k % p), sum(1 for k in ks if k % 4 == 2),
                sum(1 for k in ks if k % 2))


def signed_perm(cycle_type, a=1):
    ct = tuple(int(k) for k in cycle_type)
    if not ct or min(ct) < 1:
        raise SymmodError("cycle lengths must be positive")
    if a not in (1, -1):
        raise SymmodError("a must be +1 or -1")
    return SignedPerm(ct, a)


def act(sp, p, v):
    """a * (v permuted by g), reduced to the canonical coset representative."""
    M = DeletedModule(len(v), p)
    if sp.ell != len(v):
        raise SymmodError("length mismatch")
    out = [0] * len(v)
    for i, x in enumerate(v):
        out[sp.image(i)] = (sp.a * x) % p
    return M.canonical(out)


def action_matrix(sp, p):
    """Matrix of a*g on U in the basis v_i (rows are images, acting on the right)."""
    M = DeletedModule(sp.ell, p)
    rows = [M.coords(act(sp, p, M.basis_vector(i))) for i in range(M.dim)]
    return Matrix(gf(p), rows, M.dim)


def _check_sign(sp, p):
    if sp.a == -1 and p == 2:
        raise SymmodError("a = -1 needs odd p")


def fix_dim_direct(sp, p):
    _check_sign(sp, p)
    A = action_matrix(sp, p)
    F = A.field
    D = Matrix(F, [[F.sub(x, 1 if i == j else 0) for j, x in enumerate(r)] for i, r in enumerate(A.rows)])
    return A.nrows - rank(D)


def regime(ell, p):
    if ell % 2 == 0 and ell % p == 0:
        return "divisible"
    if ell % 2 == 1 and ell % p:
        return "coprime"
    return None


def fix_dim_formula(sp, p):
    """Closed forms: the p | ell = 2n+2 table, and s-1 / s-I3 for p ∤ ell = 2n+1."""
    _check_sign(sp, p)
    ell, s = sp.ell, sp.s
    I1, I2, I3 = sp.stats(p)
    reg = regime(ell, p)
    if reg is None:
        raise SymmodError("(ell=%d, p=%d) is outside the tabulated regimes" % (ell, p))
    if sp.a == -1:
        return s - I3
    if reg == "coprime":
        return s - 1
    n = (ell - 2) // 2
    if p == 2:
        if I3 == 0:
            return s if n % 2 else s - 1
        return s - 2
    return s if I1 == 0 else s - 2


# -- fixed-vector parameterization


def fixed_vector_family(sp, a_params, b, p):
    """(v, conditions): v = sum_i v(i, a_i, a, b) and, per cycle, the value
    (1 + a + ... + a^{k_i-1})((a-1) a_i + b), which must vanish for a fixed coset."""
    if len(a_params) != sp.s:
        raise SymmodError("need one a_i per cycle")
    a = sp.a
    v = []
    cond = []
    for k, ai in zip(sp.cycle_type, a_params):
        for j in range(1, k + 1):
            if a == 1:
                v.append((ai + (j - 1) * b) % p)
            else:
                v.append(((-1) ** (j - 1) * ai + ((j - 1) % 2) * b) % p)
        geo = sum(a ** i for i in range(k))
        cond.append(geo * ((a - 1) * ai + b) % p)
    return tuple(v), tuple(cond)


def is_fixed_in_w(sp, p, v):
    """Direct test: v ∈ W and the coset of v is fixed by a*g."""
    if sum(v) % p:
        return False
    M = DeletedModule(sp.ell, p)
    return act(sp, p, v) == M.canonical(v)


def fixed_row(sp, p):
    """Index (1-5) of the fixed-vector row that applies to the cycle type."""
    I1, I2, _ = sp.stats(p)
    if sp.a == -1:
        return 5
    if I1 > 0:
        return 4
    if p == 2:
        return 2 if I2 % 2 == 0 else 3
    return 1


def fixed_row_conditions(sp, p, a_params, b):
    """The fixed-vector conditions on (a_i, b) for the row matching sp."""
    row = fixed_row(sp, p)
    divides = sp.ell % p == 0
    if row in (1, 2):
        return divides or b % p == 0
    if row == 3:
        return b % p == 0
    if row == 4:
        return b % p == 0 and sum(k * ai for k, ai in zip(sp.cycle_type, a_params)) % p == 0
    half_b = b * pow(2, -1, p) % p
    ok = all(ai % p == half_b for k, ai in zip(sp.cycle_type, a_params) if k % 2)
    return ok and (divides or b % p == 0)


def fixed_row_predicate(sp, p, v):
    """True when v = sum_i v(i, a_i, a, b) for some parameters meeting the row conditions."""
    firsts = [v[off] for off in sp.offsets]
    for b in range(p if any(k > 1 for k in sp.cycle_type) else 1):
        w, _ = fixed_vector_family(sp, firsts, b, p)
        if w == tuple(x % p for x in v) and fixed_row_conditions(sp, p, firsts, b):
            return True
    if all(k == 1 for k in sp.cycle_type):
        # b is invisible in v; any b allowed by the row will do
        return any(fixed_row_conditions(sp, p, firsts, b) for b in range(p))
    return False


# -- cycle types and good types


def cycle_types(ell):
    """All partitions of ell, as non-increasing tuples."""
    out = []
    for part in partitions(ell):
        ct = []
        for k in sorted(part, reverse=True):
            ct.extend([k] * part[k])
        out.append(tuple(ct))
    return sorted(out, reverse=True)


def configuration(n, p, ell):
    """Which of the embeddings [1.]-[4.] applies, with the ambient group type."""
    if p % 2:
        if ell == 2 * n + 1 and ell % p:
            return 1, "SO"
        if ell == 2 * n + 2 and (n + 1) % p == 0:
            return 2, "SO"
        return None, None
    if ell == 2 * n + 2:
        return 3, ("Sp" if n % 2 == 0 else ("SO+" if n % 4 == 3 else "SO-"))
    if ell == 2 * n + 1 and n % 2 == 0:
        return 4, ("SO+" if n % 4 == 0 else "SO-")
    return None, None


def good_cycle_type_audit(n, p, ell, mode="literal"):
    """Sweep cycle types and signs for good-compatible elements of ±S_ell.

    literal: order in Φ^X(n,p) and fixed dimension n.
    structural: order divisible by a prime r ≡ 1 (mod n) and fixed dimension n.
    """
    if n % 2 or n < 4:
        raise SymmodError("the audit needs n even and n >= 4")
    cfg, kind = configuration(n, p, ell)
    if cfg is None:
        raise SymmodError("(n=%d, p=%d, ell=%d) is not one of the configurations [1.]-[4.]" % (n, p, ell))
    X = "Sp" if kind == "Sp" else "SOplus"
    phi = set(phi_set(X, n, p))
    found = []
    largest_prime_ok = True
    for ct in cycle_types(ell):
        for a in ((1, -1) if p % 2 else (1,)):
            sp = SignedPerm(ct, a)
            o = sp.order()
            if mode == "literal":
                order_ok = o in phi
            elif mode == "structural":
                order_ok = any(r % n == 1 for r in primefactors(o))
            else:
                raise SymmodError("mode must be literal or structural")
            if order_ok and fix_dim_formula(sp, p) == n:
                found.append({"cycle_type": list(ct), "a": a, "order": o})
                r = max(primefactors(o))
                if r not in (n + 1, 2 * n + 1) or (mode == "literal" and not is_ppd(r, n, p)):
                    largest_prime_ok = False
    expected = [{"cycle_type": [n + 1] + [1] * (ell - n - 1), "a": 1, "order": n + 1}]
    return {
        "n": n, "p": p, "ell": ell, "mode": mode, "configuration": cfg, "group": kind,
        "phi": sorted(phi), "good_types": found,
        "n_plus_1_prime": bool(isprime(n + 1)),
        "largest_prime_ok": largest_prime_ok,
        "matches_expected": found == expected and isprime(n + 1),
    }


# -- alternating-group contribution


def c9_alt_contribution(X, n, q, ell, min_ell=7):
    """(value, bound_ok) with value = (|C|^2/|G|) ell! (2,q-1) / ((n+1)^2 (ell-n-1)!^2).

    min_ell=5 admits the small cases ell = 5, 6 (n = 2) for reporting."""
    if X not in ("Sp", "SO+", "SO-", "SOplus", "SOminus"):
        raise SymmodError("X must be Sp or SO")
    if ell not in (2 * n + 1, 2 * n + 2) or ell < min_ell:
        raise SymmodError("need ell in {2n+1, 2n+2} and ell >= %d" % min_ell)
    ratio = cent_ratio(X, n, q)
    value = ratio * Fraction(factorial(ell) * gcd(2, q - 1), (n + 1) ** 2 * factorial(ell - n - 1) ** 2)
    e = -n * n + 4 * n + 3
    bound = Fraction(q) ** e
    return value, value < bound


def c9_alt_audit(nmax=30, qs=range(2, 10)):
    """Configurations (X, n, q, ell) with ell >= 7 where the bound fails."""
    out = []
    for X in ("Sp", "SOplus", "SOminus"):
        for n in range(4, nmax + 1, 2):
            for q in filter(is_prime_power, qs):
                for ell in (2 * n + 1, 2 * n + 2):
                    value, ok = c9_alt_contribution(X, n, q, ell)
                    if not ok:
                        out.append((X, n, q, ell, value))
    return out


def c9_alt_small_ell(qs=range(2, 10)):
    """Values at ell = 5, 6 (Sp, n = 2), reported without a verdict."""
    return [{"q": q, "ell": ell, "value": value, "bound_ok": ok}
            for q in filter(is_prime_power, qs) for ell in (5, 6)
            for value, ok in [c9_alt_contribution("Sp", 2, q, ell, min_ell=5)]]

"""Closed-form probability bounds as exact rationals.

Fractional powers q^{a/b} are replaced by certified rational upper bounds
(integer-root ceilings or floors), so no bound is ever rounded down.
Per-class contributions are evaluated along two paths, from a coefficient/exponent
table and from the per-class formulas directly; the two must agree.
"""

from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from functools import lru_cache
from math import gcd

from sympy import integer_nthroot

from .ppdgood import _norm, admissible, is_prime_power

COLUMNS = ("SL", "SU", "Sp", "SO", "tilde")


class BoundError(ValueError):
    pass


# -- certified powers


def _root_ceil(x, b):
    r, exact = integer_nthroot(x, b)
    return r if exact else r + 1


def _root_floor(x, b):
    return integer_nthroot(x, b)[0]


def qpow_upper(q, e):
    """Rational upper bound for q^e (exact when q^e is rational)."""
    e = Fraction(e)
    a, b = e.numerator, e.denominator
    if a >= 0:
        return Fraction(_root_ceil(q ** a, b))
    return Fraction(1, _root_floor(q ** -a, b))


def qpow_lower(q, e):
    """Rational lower bound for q^e (exact when q^e is rational)."""
    e = Fraction(e)
    a, b = e.numerator, e.denominator
    if a >= 0:
        return Fraction(_root_floor(q ** a, b))
    return Fraction(1, _root_ceil(q ** -a, b))


def _fits(num, den, c):
    """num / den <= 2^c."""
    return num <= den << c if c >= 0 else num << -c <= den


@lru_cache(maxsize=None)
def log2_upper(x, bits=16):
    """Rational upper bound for log2(x), x a positive rational, with denominator 2^bits."""
    x = Fraction(x)
    if x <= 0:
        raise BoundError("log of a non-positive number")
    k = 1 << bits
    num, den = x.numerator ** k, x.denominator ** k
    c = num.bit_length() - den.bit_length() - 1
    while not _fits(num, den, c):
        c += 1
    return Fraction(c, k)


def loglog2_upper(q, bits=16):
    """Certified upper bound for log2(log2(q))."""
    return log2_upper(log2_upper(q, bits), bits)


# -- p1 bounds


def p1_bound(X, n, q):
    X = _norm(X)
    if not admissible(X, n):
        raise BoundError("(%s, n=%d) is not admissible" % (X, n))
    if X == "SL":
        return Fraction(2, q - 1) - Fraction(4, q ** (n + 1))
    if X == "SU":
        return Fraction(1, q * q - 1) + Fraction(3, 2 * q ** (n + 2))
    if X == "Sp":
        return Fraction(1, q - 1) - Fraction(1, q ** (n + 1))
    tail = 3 if X == "SOplus" else 4
    return (Fraction(1, gcd(2, q - 1) * q) + Fraction(1, q * (q - 1))
            + Fraction(tail, q ** (n // 2 + 1)))


# -- validity conditions


def _mersenne_like(q):
    """q = 2^a - 1 for some a."""
    return (q + 1) & q == 0


def condition(i, X, n, q):
    """(holds, text) for the validity condition of row i."""
    col = _column(X)
    if i == 1:
        return (not (q == 2 and col in ("SL", "Sp", "tilde")), "q != 2 if X = SL or Sp")
    if i == 2:
        return (not (n == 2 and (q == 5 or _mersenne_like(q))), "(n,q) != (2,5), (2,2^a-1)")
    if i == 3:
        return ((n, q) not in ((2, 3), (2, 7)), "(n,q) != (2,3), (2,7)")
    if i in (4, 5, 7):
        return (n >= 3, "n >= 3")
    if i == 6:
        return (not (n == 2 and _mersenne_like(q)), "(n,q) != (2,2^a-1)")
    if i == 8:
        return (n >= 3 or col != "SL", "n >= 3 if X = SL")
    if i == 9:
        return (n >= 9, "n >= 9")
    raise BoundError("row index must be in 1..9")


def _column(X):
    if X in COLUMNS:
        return X
    X = _norm(X)
    return "SO" if X in ("SOplus", "SOminus") else X


# -- contribution table, tabulated path

F = Fraction
_T = {
    # (i, column): [(coefficient, (c2, c1, c0))] with exponent c2 n^2 + c1 n + c0
    (2, "SL"): [(F(1), (F(-1), F(0), F(0)))],
    (2, "SO"): [(F(1, 2), (F(-1), F(3), F(0)))],
    (3, "SL"): [(F(36, 10), (F(-1), F(0), F(0)))],
    (3, "SU"): [(F(5), (F(-4, 3), F(0), F(0)))],
    (3, "Sp"): [(F(37, 10), (F(-1, 2), F(0), F(0)))],
    (3, "SO"): [(F(106, 10), (F(-1, 2), F(0), F(0)))],
    (3, "tilde"): [(F(37, 10), (F(-1, 2), F(0), F(0)))],
    (5, "SL"): [(F(8), (F(-1), F(1), F(2)))],
    (5, "SU"): [(F(9), (F(-4, 3), F(4, 3), F(2)))],
    (5, "Sp"): [(F(3), (F(-2, 3), F(2, 3), F(0)))],
    (5, "SO"): [(F(4), (F(-2, 3), F(2, 3), F(0)))],
    (5, "tilde"): [(F(3), (F(-2, 3), F(2, 3), F(0)))],
    (8, "SL"): [(F(25, 10), (F(-1), F(1), F(2)))],
    (9, "SL"): [(F(6), (F(-2), F(106, 10), F(0)))],
    (9, "SU"): [(F(6), (F(-2), F(166, 10), F(0)))],
    (9, "Sp"): [(F(9), (F(-1), F(96, 10), F(0)))],
    (9, "SO"): [(F(9), (F(-1), F(96, 10), F(0)))],
    (9, "tilde"): [(F(9), (F(-1), F(96, 10), F(0)))],
}
del F


def _exponent(poly, n):
    c2, c1, c0 = poly
    return c2 * n * n + c1 * n + c0


def column_terms(i, col):
    return list(_T.get((i, col), []))


def ledger_value(i, X, n, q):
    """Contribution table cell (certified upper bound); the SL 1/48 cell applies at (n,q) = (2,5) only."""
    if i not in range(2, 10):
        raise BoundError("row index must be in 2..9")
    col = _column(X)
    if i == 6:
        return Fraction(1, 48) if (col, n, q) == ("SL", 2, 5) else Fraction(0)
    return sum((c * qpow_upper(q, _exponent(e, n)) for c, e in column_terms(i, col)), Fraction(0))


# -- contribution table, direct path


def _pow_inv(q, num, den=1):
    """Upper bound for 1 / q^(num/den) with num/den >= 0."""
    r = Fraction(num, den)
    if r.denominator == 1:
        return Fraction(1, q ** r.numerator)
    return Fraction(1, _root_floor(q ** r.numerator, r.denominator))


def _pow_up(q, num, den=1):
    """Upper bound for q^(num/den), any sign."""
    r = Fraction(num, den)
    if r < 0:
        return _pow_inv(q, -r.numerator, r.denominator)
    return Fraction(_root_ceil(q ** r.numerator, r.denominator))


def direct_value(i, X, n, q):
    """Contribution bound for row i from its per-class formula.

    X may be SL, SU, Sp (q odd), SO+, SO- or "tilde" (Sp, q even)."""
    t = X if X == "tilde" else _norm(X)
    n2 = n * n
    if i == 2:  # C2, imprimitive
        if t == "SL":
            return _pow_inv(q, n2)
        if t == "SOplus":
            return Fraction(1, 2) * _pow_inv(q, n2 - 3 * n)
        return Fraction(0)
    if i == 3:  # C3, extension field
        return {"SL": Fraction(36, 10) * _pow_inv(q, n2),
                "SU": 5 * _pow_inv(q, 4 * n2, 3),
                "Sp": Fraction(37, 10) * _pow_inv(q, n2, 2),
                "tilde": Fraction(37, 10) * _pow_inv(q, n2, 2)}.get(
            t, Fraction(106, 10) * _pow_inv(q, n2, 2))
    if i in (4, 7):  # C4, C7
        return Fraction(0)
    if i == 5:  # C5, subfield
        return {"SL": 8 * _pow_up(q, -n2 + n + 2),
                "SU": 9 * _pow_up(q, -4 * (n2 - n) + 6, 3),
                "Sp": 3 * _pow_inv(q, 2 * (n2 - n), 3),
                "tilde": 3 * _pow_inv(q, 2 * (n2 - n), 3)}.get(
            t, 4 * _pow_inv(q, 2 * (n2 - n), 3))
    if i == 6:  # C6, extraspecial normalizer
        return Fraction(1, 48) if (t, n, q) == ("SL", 2, 5) else Fraction(0)
    if i == 8:  # C8, classical
        return Fraction(25, 10) * _pow_up(q, -n2 + n + 2) if t == "SL" else Fraction(0)
    if i == 9:  # C9, almost simple
        if t == "SL":
            return 6 * _pow_up(q, -10 * n2 + 53 * n, 5)
        if t == "SU":
            return 6 * _pow_up(q, -10 * n2 + 83 * n, 5)
        return 9 * _pow_up(q, -5 * n2 + 48 * n, 5)
    raise BoundError("row index must be in 2..9")


def direct_column_value(i, X, n, q):
    """Direct-path value for a table column: the SO column merges both ε."""
    col = _column(X)
    if col == "SO":
        return max(direct_value(i, "SO+", n, q), direct_value(i, "SO-", n, q))
    return direct_value(i, col if col != "tilde" else "tilde", n, q)


def class_contribution(i, X, n, q, tilde=False):
    """(value, condition holds, condition text) for row i of the contribution table."""
    col = "tilde" if tilde else _column(X)
    if tilde and _column(X) != "Sp":
        raise BoundError("the tilde column is for Sp")
    holds, text = condition(i, col, n, q)
    return ledger_value(i, col, n, q), holds, text


# -- column totals


@dataclass(frozen=True)
class BoundEntry:
    i: int
    value: Fraction
    valid: bool
    condition: str
    source: str


@dataclass(frozen=True)
class BoundReport:
    X: str
    n: int
    q: int
    column: str
    p1: Fraction
    p1_informative: bool
    entries: tuple
    total: Fraction
    all_valid: bool
    leading_coefficient: Fraction
    leading_exponent: tuple
    next_exponent: tuple
    extras: dict = dc_field(default_factory=dict)


SOURCES = {2: "C2 imprimitive", 3: "C3 extension field", 4: "C4 tensor product", 5: "C5 subfield",
           6: "C6 extraspecial normalizer", 7: "C7 tensor induced", 8: "C8 classical", 9: "C9 almost simple"}


def leading_term(col):
    """(coefficient, exponent, next exponent) of the column sum as n grows."""
    exps = {}
    for i in range(2, 10):
        for c, e in column_terms(i, col):
            exps[e] = exps.get(e, Fraction(0)) + c
    order = sorted(exps, reverse=True)
    top = order[0]
    nxt = order[1] if len(order) > 1 else None
    return exps[top], top, nxt


def _report(X, n, q, col):
    p1 = p1_bound(X, n, q)
    entries = []
    for i in range(2, 10):
        holds, text = condition(i, col, n, q)
        entries.append(BoundEntry(i, ledger_value(i, col, n, q), holds, text, SOURCES[i]))
    total = sum((e.value for e in entries), Fraction(0))
    coef, top, nxt = leading_term(col)
    return BoundReport(_norm(X), n, q, col, p1, p1 < 1, tuple(entries), total,
                       all(e.valid for e in entries), coef, top, nxt)


def p_bound_total(X, n, q):
    X = _norm(X)
    if not admissible(X, n):
        raise BoundError("(%s, n=%d) is not admissible" % (X, n))
    return _report(X, n, q, _column(X))


def p_tilde_bound_total(n, q):
    if not admissible("Sp", n):
        raise BoundError("(Sp, n=%d) is not admissible" % n)
    return _report("Sp", n, q, "tilde")


# -- C9 class counts and the broad-brush margin


def c9_count_bound(n, q):
    """Certified upper bound for N(n,q) = 2(2n)^5.2 + 2n log2 log2 q."""
    if n < 1 or q < 2:
        raise BoundError("need n >= 1 and q >= 2")
    return 2 * qpow_upper(2 * n, Fraction(26, 5)) + 2 * n * loglog2_upper(q)


def c9_count_check(n, q):
    """N(n,q) < 3 q^{2.6n}, certified (upper bound of N vs lower bound of the right side)."""
    return c9_count_bound(n, q) < 3 * qpow_lower(q, Fraction(13 * n, 5))


def broadbrush_margin(X, n, q):
    """(margin, positive): (1 - p1 bound) - contribution column total.
    For Sp with q even the tilde column is used."""
    X = _norm(X)
    rep = p_tilde_bound_total(n, q) if X == "Sp" and q % 2 == 0 else p_bound_total(X, n, q)
    margin = (1 - rep.p1) - rep.total
    return margin, margin > 0


# -- Θ-product inequalities


def _theta(k, n, q, sign=1):
    from .clgroup import theta

    return theta(k, n, q, sign)


def theta_inequality_audit(nmax=30, qs=range(2, 10), strict=True):
    """Check the Θ-product inequalities for 1 <= k <= n <= nmax (ratio clauses
    for k < n, and m < n for the quotient clauses). Returns {clause: [violations]}.

    strict=True tests the inequalities as stated; strict=False relaxes every
    strict "<" to "<=", so a violation then means a value on the wrong side.
    """
    lt = (lambda a, b: a < b) if strict else (lambda a, b: a <= b)
    le = lambda a, b: a <= b
    viol = {c: [] for c in ("plus_range", "minus_range_odd", "minus_range_even", "plus_ratio", "minus_ratio_odd",
                            "minus_ratio_even", "square_ratio", "minus_quotient_up", "minus_quotient_down")}

    def check(clause, ok, args):
        if not ok:
            viol[clause].append(args)

    one = Fraction(1)
    for q in qs:
        c = 1 - Fraction(1, q) - Fraction(1, q * q)
        for n in range(1, nmax + 1):
            for k in range(1, n + 1):
                a, b = _theta(k, n, q), _theta(k, n, q, -1)
                qk = Fraction(1, q ** k)
                check("plus_range", lt(c, a) and lt(a, one), (k, n, q))
                if k % 2:
                    check("minus_range_odd", lt(one, b) and le(b, 1 + qk), (k, n, q))
                else:
                    check("minus_range_even", lt(1 - qk, b) and lt(b, one), (k, n, q))
                if k < n:
                    r = _theta(k + 1, n, q) / _theta(1, n - k, q)
                    check("plus_ratio", lt(one, r) and lt(r, 1 / c), (k, n, q))
                    r = _theta(k + 1, n, q, -1) / _theta(1, n - k, q, -1)
                    qk1 = Fraction(1, q ** (k + 1))
                    if k % 2:
                        check("minus_ratio_odd", lt((1 - qk1) / (1 + Fraction(1, q)), r) and lt(r, one), (k, n, q))
                    else:
                        check("minus_ratio_even", lt(1 / (1 + Fraction(1, q)), r) and lt(r, 1 + qk1), (k, n, q))
            if n % 2 == 0 and n >= 4:
                Q = q * q
                r = _theta(1, n // 2 - 1, Q) / _theta(n // 2, n - 1, Q)
                qn = 1 - Fraction(1, q ** n)
                lo = (1 - Fraction(1, q ** 2) - Fraction(1, q ** 4)) / qn
                check("square_ratio", lt(lo, r) and lt(r, 1 / qn), (n, q))
            for m in range(1, n):
                qm1 = Fraction(1, q ** (m + 1))
                r = _theta(1, n, q, -1) / _theta(1, m, q, -1)
                check("minus_quotient_up", le(r, one if m % 2 else 1 + qm1), (m, n, q))
                r = _theta(1, m, q, -1) / _theta(1, n, q, -1)
                check("minus_quotient_down", le(r, one if m % 2 == 0 else 1 / (1 - qm1)), (m, n, q))
    return viol


# -- grid audits


def dual_path_audit(nmax=30, qs=range(2, 10)):
    """Cells where the tabulated and direct paths disagree, as (i, column, n, q, table, direct)."""
    out = []
    for col in COLUMNS:
        for n in range(2, nmax + 1):
            X = "Sp" if col == "tilde" else ("SOplus" if col == "SO" else col)
            if not admissible(X, n):
                continue
            for q in filter(is_prime_power, qs):
                if col == "tilde" and q % 2:
                    continue
                for i in range(2, 10):
                    a, b = ledger_value(i, col, n, q), direct_column_value(i, col, n, q)
                    if a != b:
                        out.append((i, col, n, q, a, b))
    return out


def leading_constants():
    """Leading coefficient of each column sum, keyed by column."""
    return {col: leading_term(col)[0] for col in COLUMNS}

"""Finite fields GF(p^e) and extension towers.

Elements are plain ints. In a degree-f extension of a base field B an element
is the int sum(c_i * |B|**i), where c_i are codes of base elements (low degree
first). So the base field is the set of codes below |B|, embeddings along a
tower are the identity on codes, and the base-p digits of a code are its
coordinates over the prime field.

Fields of order <= 256 carry full addition and multiplication tables; larger
fields use polynomial arithmetic over the base.
"""

from dataclasses import dataclass
import numpy as np
from sympy import factorint, isprime

from . import poly

DEFAULT_LIMIT = 1 << 20
TABLE_LIMIT = 256

_CACHE = {}


class FieldError(ValueError):
    pass


class FieldSpec:
    """GF(p^e), possibly built as an extension of a smaller FieldSpec.

    Attributes:
        p: characteristic.
        e: absolute degree over GF(p).
        q: field order p**e.
        base: immediate base field (None for a prime field).
        degree: degree over the base.
        poly: defining polynomial over the base, low degree first, monic.
        gen: code of a fixed multiplicative generator.
    """

    def __init__(self, p, base, poly_, key):
        self.p = p
        self.base = base
        self.degree = len(poly_) - 1 if base is not None else 1
        self.e = self.degree * (base.e if base is not None else 1)
        self.q = p ** self.e
        self.poly = tuple(poly_)
        self.key = key
        self.bq = base.q if base is not None else p
        self.tabled = self.q <= TABLE_LIMIT
        self._powers_p = [p ** i for i in range(self.e)]
        if self.tabled:
            self._build_tables()
        self.gen = self._find_generator()
        if self.tabled:
            self._build_mult()

    # -- construction helpers

    def _digits(self, a):
        out = []
        for _ in range(self.e):
            a, r = divmod(a, self.p)
            out.append(r)
        return out

    def _build_tables(self):
        q, p = self.q, self.p
        codes = np.arange(q)
        if p == 2:
            self.addt = (codes[:, None] ^ codes[None, :]).ravel().tolist()
        else:
            digits = np.array([self._digits(a) for a in range(q)], dtype=np.int64)
            w = np.array(self._powers_p, dtype=np.int64)
            s = (digits[:, None, :] + digits[None, :, :]) % p
            self.addt = (s @ w).ravel().tolist()
        self.negt = [0] * q
        for a in range(q):
            for b in range(q):
                if self.addt[a * q + b] == 0:
                    self.negt[a] = b
                    break

    def _build_mult(self):
        q = self.q
        g = self.gen
        expt = [1] * (q - 1)
        for i in range(1, q - 1):
            expt[i] = self._slow_mul(expt[i - 1], g)
        logt = [0] * q
        for i, a in enumerate(expt):
            logt[a] = i
        mult = [0] * (q * q)
        for a in range(1, q):
            la = logt[a]
            row = a * q
            for b in range(1, q):
                mult[row + b] = expt[(la + logt[b]) % (q - 1)]
        self.expt, self.logt, self.mult = expt, logt, mult
        self.invt = [0] + [expt[(-logt[a]) % (q - 1)] for a in range(1, q)]

    def _find_generator(self):
        if self.q == 2:
            return 1
        primes = list(factorint(self.q - 1))
        for g in range(1, self.q):
            if all(self._slow_pow(g, (self.q - 1) // r) != 1 for r in primes):
                return g
        raise FieldError("no generator found")  # pragma: no cover

    # -- coordinates

    def to_vec(self, a):
        """Coordinates over the immediate base, low degree first."""
        out = []
        for _ in range(self.degree):
            a, r = divmod(a, self.bq)
            out.append(r)
        return out

    def from_vec(self, v):
        a = 0
        for c in reversed(v):
            a = a * self.bq + c
        return a

    def to_prime_vec(self, a):
        return self._digits(a)

    # -- arithmetic on codes

    def add(self, a, b):
        if self.tabled:
            return self.addt[a * self.q + b]
        if self.p == 2:
            return a ^ b
        da, db = self._digits(a), self._digits(b)
        return sum(((x + y) % self.p) * w for x, y, w in zip(da, db, self._powers_p))

    def neg(self, a):
        if self.tabled:
            return self.negt[a]
        if self.p == 2:
            return a
        return sum(((-x) % self.p) * w for x, w in zip(self._digits(a), self._powers_p))

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        if self.tabled and hasattr(self, "mult"):
            return self.mult[a * self.q + b]
        return self._slow_mul(a, b)

    def _slow_mul(self, a, b):
        if a == 0 or b == 0:
            return 0
        if self.base is None:
            return a * b % self.p
        B = self.base
        prod_ = poly.mul(B, poly.trim(self.to_vec(a)), poly.trim(self.to_vec(b)))
        r = poly.mod(B, prod_, list(self.poly))
        return self.from_vec(r)

    def _slow_pow(self, a, k):
        result = 1
        while k:
            if k & 1:
                result = self._slow_mul(result, a)
            k >>= 1
            if k:
                a = self._slow_mul(a, a)
        return result

    def pow(self, a, k):
        if a == 0:
            if k == 0:
                return 1
            if k < 0:
                raise ZeroDivisionError("0 has no inverse")
            return 0
        if self.tabled and hasattr(self, "expt"):
            return self.expt[(self.logt[a] * k) % (self.q - 1)]
        if k < 0:
            a, k = self.inv(a), -k
        return self._slow_pow(a, k % (self.q - 1))

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("0 has no inverse")
        if self.tabled and hasattr(self, "invt"):
            return self.invt[a]
        return self._slow_pow(a, self.q - 2)

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def frob(self, a, k=1):
        """a^(p^k)."""
        return self.pow(a, self.p ** (k % self.e)) if a else 0

    def elements(self):
        return range(self.q)

    def is_square(self, a):
        if a == 0 or self.p == 2:
            return True
        return self.pow(a, (self.q - 1) // 2) == 1

    def sqrt(self, a):
        for x in range(self.q):
            if self.mul(x, x) == a:
                return x
        return None

    def order(self, a):
        """Multiplicative order of a nonzero code."""
        if a == 0:
            raise FieldError("0 has no multiplicative order")
        o = self.q - 1
        for r, k in factorint(o).items():
            for _ in range(k):
                if self.pow(a, o // r) == 1:
                    o //= r
                else:
                    break
        return o

    # -- towers

    def tower(self):
        """Fields from this one down to the prime field."""
        out, F = [], self
        while F is not None:
            out.append(F)
            F = F.base
        return out

    def _rel_degree(self, sub):
        for F in self.tower():
            if F is sub:
                return self.e // sub.e
        if sub.base is None and sub.p == self.p and self.tower()[-1].q == sub.q:
            return self.e
        raise FieldError("subfield is not on a registered tower of this field")

    def norm(self, a, sub):
        d = self._rel_degree(sub)
        out, x = 1, a
        for _ in range(d):
            out = self.mul(out, x)
            x = self.pow(x, sub.q)
        if out >= sub.q:
            raise FieldError("norm left the subfield")  # pragma: no cover
        return out

    def trace(self, a, sub):
        d = self._rel_degree(sub)
        out, x = 0, a
        for _ in range(d):
            out = self.add(out, x)
            x = self.pow(x, sub.q) if x else 0
        if out >= sub.q:
            raise FieldError("trace left the subfield")  # pragma: no cover
        return out

    def embed(self, a, sub):
        """Image in this field of an element of a tower subfield (identity on codes)."""
        self._rel_degree(sub)
        if not 0 <= a < sub.q:
            raise FieldError("not an element of the subfield")
        return a

    def project(self, a, sub):
        """Inverse of embed; fails when a is outside sub."""
        self._rel_degree(sub)
        if a >= sub.q:
            raise FieldError("element does not lie in the subfield")
        return a

    def serialize(self):
        return self.key

    def __repr__(self):
        return "GF(%d)[%s]" % (self.q, self.key)

    def __reduce__(self):
        return (parse_field, (self.key,))

    def __call__(self, code):
        return FieldElement(self, code)


@dataclass(frozen=True)
class FieldElement:
    """A field element as a code plus its field."""

    field: FieldSpec
    code: int

    def _wrap(self, c):
        return FieldElement(self.field, c)

    def _c(self, other):
        if isinstance(other, FieldElement):
            if other.field is not self.field:
                raise FieldError("elements from different fields")
            return other.code
        return other % self.field.p if self.field.base is None else other

    def __add__(self, o):
        return self._wrap(self.field.add(self.code, self._c(o)))

    def __sub__(self, o):
        return self._wrap(self.field.sub(self.code, self._c(o)))

    def __mul__(self, o):
        return self._wrap(self.field.mul(self.code, self._c(o)))

    def __truediv__(self, o):
        return self._wrap(self.field.div(self.code, self._c(o)))

    def __neg__(self):
        return self._wrap(self.field.neg(self.code))

    def __pow__(self, k):
        return self._wrap(self.field.pow(self.code, k))

    def __bool__(self):
        return self.code != 0

    @property
    def coeffs(self):
        return self.field.to_vec(self.code)

    def __repr__(self):
        return "%s%s" % (self.field.q, self.coeffs)


def prime_field(p):
    if not isinstance(p, int) or not isprime(p):
        raise FieldError("characteristic must be prime, got %r" % (p,))
    key = "%d^1:[0,1]" % p
    if key not in _CACHE:
        _CACHE[key] = FieldSpec(p, None, (0, 1), key)
    return _CACHE[key]


def least_irreducible(base, f):
    """Lexicographically least monic irreducible of degree f over base.

    Candidates are ordered by the int whose base-|base| digits are
    (c_0, ..., c_{f-1}), i.e. compared from the highest non-leading
    coefficient down.
    """
    B = base.q
    for code in range(B ** f):
        coeffs = []
        c = code
        for _ in range(f):
            c, r = divmod(c, B)
            coeffs.append(r)
        cand = coeffs + [1]
        if f > 1 and cand[0] == 0:
            continue
        if B <= 4096:
            if any(poly.evaluate(base, cand, x) == 0 for x in range(B)):
                continue
        if poly.is_irreducible(base, cand):
            return cand
    raise FieldError("no irreducible polynomial found")  # pragma: no cover


def ext_field(base, f, limit=DEFAULT_LIMIT):
    """Degree-f extension of base with the least irreducible defining polynomial."""
    if not isinstance(f, int) or f < 1:
        raise FieldError("extension degree must be a positive integer")
    if f == 1:
        return base
    if limit is not None and base.q ** f > limit:
        raise FieldError("field order %d exceeds limit %d" % (base.q ** f, limit))
    cand = least_irreducible(base, f)
    key = "%s/%d^%d:[%s]" % (base.key, base.p, base.e * f, ",".join(map(str, cand)))
    if base.base is None:
        key = "%d^%d:[%s]" % (base.p, f, ",".join(map(str, cand)))
    if key not in _CACHE:
        _CACHE[key] = FieldSpec(base.p, base, cand, key)
    return _CACHE[key]


def make_field(p, e, limit=DEFAULT_LIMIT):
    """GF(p^e) as a degree-e extension of GF(p)."""
    if not isinstance(e, int) or e < 1:
        raise FieldError("degree must be a positive integer")
    F = prime_field(p)
    if limit is not None and p ** e > limit:
        raise FieldError("field order %d exceeds limit %d" % (p ** e, limit))
    return ext_field(F, e, limit)


def gf(q, limit=DEFAULT_LIMIT):
    """GF(q) for a prime power q."""
    fac = factorint(q)
    if len(fac) != 1:
        raise FieldError("%d is not a prime power" % q)
    (p, e), = fac.items()
    return make_field(p, e, limit)


def parse_field(text):
    """Inverse of FieldSpec.serialize; the polynomials are re-verified."""
    if text in _CACHE:
        return _CACHE[text]
    F = None
    for part in text.split("/"):
        head, coeffs = part.split(":")
        p, e = (int(x) for x in head.split("^"))
        cs = [int(x) for x in coeffs.strip("[]").split(",")]
        if F is None:
            F = prime_field(p)
            if e == 1:
                continue
        if F.p != p or cs[-1] != 1 or F.e * (len(cs) - 1) != e:
            raise FieldError("malformed field text %r" % text)
        if not poly.is_irreducible(F, cs):
            raise FieldError("defining polynomial is reducible")
        key = part if F.base is None else "%s/%s" % (F.key, part)
        if key not in _CACHE:
            _CACHE[key] = FieldSpec(p, F, cs, key)
        F = _CACHE[key]
    return F


def serialize_element(x):
    return "[%s]" % ",".join(map(str, x.coeffs))


def parse_element(field, text):
    return FieldElement(field, field.from_vec([int(c) for c in text.strip("[]").split(",")]))


def norm(x, sub):
    return FieldElement(sub, x.field.norm(x.code, sub))


def trace(x, sub):
    return FieldElement(sub, x.field.trace(x.code, sub))


def frobenius(x, k):
    return FieldElement(x.field, x.field.frob(x.code, k))


def element_order(x):
    return x.field.order(x.code)


def generator(field):
    return FieldElement(field, field.gen)


def multiplicative_order_mod(q, r):
    """Order of q modulo r (r coprime to q)."""
    k, x = 1, q % r
    while x != 1:
        x = x * q % r
        k += 1
    return k


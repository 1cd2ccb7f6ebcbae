"""Univariate polynomials over a FieldSpec.

A polynomial is a list of element codes, lowest degree first, with no
trailing zeros (the zero polynomial is the empty list). Every function takes
the coefficient field first.
"""

import random

from sympy import factorint


def trim(f):
    f = list(f)
    while f and f[-1] == 0:
        f.pop()
    return f


def deg(f):
    return len(f) - 1


def add(F, f, g):
    n = max(len(f), len(g))
    out = [F.add(f[i] if i < len(f) else 0, g[i] if i < len(g) else 0) for i in range(n)]
    return trim(out)


def sub(F, f, g):
    n = max(len(f), len(g))
    out = [F.sub(f[i] if i < len(f) else 0, g[i] if i < len(g) else 0) for i in range(n)]
    return trim(out)


def scale(F, f, c):
    if c == 0:
        return []
    return trim([F.mul(a, c) for a in f])


def mul(F, f, g):
    if not f or not g:
        return []
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a == 0:
            continue
        for j, b in enumerate(g):
            if b:
                out[i + j] = F.add(out[i + j], F.mul(a, b))
    return trim(out)


def divmod_(F, f, g):
    if not g:
        raise ZeroDivisionError("polynomial division by zero")
    r = list(f)
    dg = len(g) - 1
    if len(r) - 1 < dg:
        return [], trim(r)
    lead_inv = F.inv(g[-1])
    qt = [0] * (len(r) - dg)
    for k in range(len(r) - 1, dg - 1, -1):
        c = r[k]
        if c == 0:
            continue
        c = F.mul(c, lead_inv)
        qt[k - dg] = c
        for j in range(dg + 1):
            if g[j]:
                r[k - dg + j] = F.sub(r[k - dg + j], F.mul(c, g[j]))
    return trim(qt), trim(r[:dg])


def mod(F, f, g):
    return divmod_(F, f, g)[1]


def monic(F, f):
    if not f:
        return []
    return scale(F, f, F.inv(f[-1]))


def gcd(F, f, g):
    f, g = trim(f), trim(g)
    while g:
        f, g = g, mod(F, f, g)
    return monic(F, f)


def powmod(F, f, k, m):
    result = [1]
    base = mod(F, f, m)
    while k:
        if k & 1:
            result = mod(F, mul(F, result, base), m)
        k >>= 1
        if k:
            base = mod(F, mul(F, base, base), m)
    return result


def evaluate(F, f, x):
    acc = 0
    for c in reversed(f):
        acc = F.add(F.mul(acc, x), c)
    return acc


def derivative(F, f):
    out = []
    for i in range(1, len(f)):
        c = 0
        for _ in range(i % F.p):
            c = F.add(c, f[i])
        out.append(c)
    return trim(out)


def compose_matrix(F, f, M):
    """f(M) for a square Matrix M over F, by Horner."""
    from .matspace import identity, mat_mul, mat_add, mat_scale

    n = M.nrows
    acc = mat_scale(identity(F, n), 0)
    for c in reversed(f):
        acc = mat_add(mat_mul(acc, M), mat_scale(identity(F, n), c))
    return acc


def _x_power_frob(F, m, times):
    # x^(Q^times) mod m, Q = |F|
    h = [0, 1]
    for _ in range(times):
        h = powmod(F, h, F.q, m)
    return h


def is_irreducible(F, f):
    """Rabin's test over F."""
    f = trim(f)
    d = deg(f)
    if d < 1:
        return False
    if d == 1:
        return True
    if f[0] == 0:
        return False
    f = monic(F, f)
    if _x_power_frob(F, f, d) != [0, 1]:
        return False
    for r in factorint(d):
        h = _x_power_frob(F, f, d // r)
        if deg(gcd(F, f, sub(F, h, [0, 1]))) > 0:
            return False
    return True


def _pth_root(F, f):
    # f is a polynomial in x^p; return g with g^p = f
    p = F.p
    e_inv = F.q // p  # a -> a^(q/p) inverts Frobenius on F
    return trim([F.pow(f[i], e_inv) for i in range(0, len(f), p)])


def squarefree_factors(F, f):
    """List of (g, k) with f = lc * prod g^k, each g squarefree."""
    f = monic(F, f)
    if deg(f) < 1:
        return []
    out = []
    df = derivative(F, f)
    if not df:
        for g, k in squarefree_factors(F, _pth_root(F, f)):
            out.append((g, k * F.p))
        return out
    c = gcd(F, f, df)
    w = divmod_(F, f, c)[0]
    i = 1
    while deg(w) > 0:
        y = gcd(F, w, c)
        z = divmod_(F, w, y)[0]
        if deg(z) > 0:
            out.append((monic(F, z), i))
        i += 1
        w = y
        c = divmod_(F, c, y)[0]
    if deg(c) > 0:
        for g, k in squarefree_factors(F, _pth_root(F, c)):
            out.append((g, k * F.p))
    return out


def _distinct_degree(F, f):
    out = []
    h = [0, 1]
    d = 0
    while deg(f) >= 2 * (d + 1):
        d += 1
        h = powmod(F, h, F.q, f)
        g = gcd(F, f, sub(F, h, [0, 1]))
        if deg(g) > 0:
            out.append((g, d))
            f = divmod_(F, f, g)[0]
            h = mod(F, h, f)
    if deg(f) > 0:
        out.append((monic(F, f), deg(f)))
    return out


def _equal_degree(F, f, d, rng):
    n = deg(f)
    if n == d:
        return [monic(F, f)]
    while True:
        a = trim([rng.randrange(F.q) for _ in range(n)])
        if deg(a) < 1:
            continue
        if F.p == 2:
            # absolute trace map a + a^2 + ... + a^(2^(k d - 1))
            t = list(a)
            acc = list(a)
            for _ in range(F.e * d - 1):
                acc = mod(F, mul(F, acc, acc), f)
                t = add(F, t, acc)
            b = t
        else:
            b = sub(F, powmod(F, a, (F.q ** d - 1) // 2, f), [1])
        g = gcd(F, f, b)
        if 0 < deg(g) < n:
            return _equal_degree(F, g, d, rng) + _equal_degree(F, divmod_(F, f, g)[0], d, rng)


def factor(F, f, seed=0):
    """Monic irreducible factorization of f as a sorted list of (g, k)."""
    rng = random.Random(seed)
    out = []
    for g, k in squarefree_factors(F, f):
        for h, d in _distinct_degree(F, g):
            for piece in _equal_degree(F, h, d, rng):
                out.append((tuple(piece), k))
    merged = {}
    for g, k in out:
        merged[g] = merged.get(g, 0) + k
    return sorted((list(g), k) for g, k in merged.items())

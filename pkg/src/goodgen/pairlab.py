"""Pairs (t, t^g) of good elements: exact reducibility classification,
Monte Carlo estimates of p1, exact class sweeps, and the Sp even-q audit.

With V = U ⊕ W the decomposition for t, the pair generates a reducible group
exactly when U ∩ U^g ≠ 0, or U = W^g, or W = U^g, or (SL only) W + W^g is a
proper subspace.
"""

from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from hashlib import blake2b
from math import sqrt
import os
from statistics import NormalDist
import random

import numpy as np

from .clgroup import (GroupSpec, batch_mul, class_orbit, conjugate, contains, enumerate_elements,
                      group, group_order, uniform_element)
from .forms import invariant_form_solve, orth_type
from .matspace import (batch_rank, commutator_space, fixed_space, image, np_tables, sum_dim)
from .ppdgood import build_good_element, torus_and_centralizer_order

SUBCASES = ("CommonFixedVector", "HyperplaneSL", "Swap")


class PairError(ValueError):
    pass


@dataclass(frozen=True)
class PairClass:
    reducible: bool
    subcases: frozenset = frozenset()
    eps: int = None  # ε of the invariant quadratic form (Sp, even q, irreducible)

    @property
    def outcome(self):
        return "Reducible" if self.reducible else "Irreducible"

    @property
    def label(self):
        if self.reducible:
            return "Reducible(%s)" % "+".join(s for s in SUBCASES if s in self.subcases)
        if self.eps is not None:
            return "Irreducible(%s)" % ("+" if self.eps == 1 else "-")
        return "Irreducible"


def _subcases(X, n, U, W, Ug, Wg):
    subs = set()
    if sum_dim(U, Ug) < 2 * n:
        subs.add("CommonFixedVector")
    if X == "SL" and sum_dim(W, Wg) < 2 * n:
        subs.add("HyperplaneSL")
    if U == Wg or W == Ug:
        subs.add("Swap")
    return frozenset(subs)


def so_form_type(G, gens):
    """ε of the quadratic form polarizing to the symplectic form and invariant
    under gens (Sp, even q). Raises PairError when none exists."""
    sol = invariant_form_solve(list(gens), "quadratic", B_known=G.form.gram)
    if sol.status != "ok":
        raise PairError("no nondegenerate invariant quadratic form (%s)" % sol.status)
    return orth_type(sol.form).eps


def _needs_eps(G):
    return G.X == "Sp" and G.q % 2 == 0


def classify_pair(ge, g, check=True, with_eps=True):
    """Classify <t, t^g> from the transported decomposition U^g ⊕ W^g."""
    G = ge.group
    if check and not contains(G, g):
        raise PairError("g is not in %s" % G.name)
    Ug, Wg = image(ge.U, g), image(ge.W, g)
    subs = _subcases(G.X, G.n, ge.U, ge.W, Ug, Wg)
    eps = None
    if not subs and with_eps and _needs_eps(G):
        eps = so_form_type(G, [ge.t, conjugate(ge.t, g)])
    return PairClass(bool(subs), subs, eps)


def classify_conjugate(ge, t2, with_eps=False):
    """Recomputation path: U', W' are read off t2 itself (audit use)."""
    G = ge.group
    subs = _subcases(G.X, G.n, ge.U, ge.W, fixed_space(t2), commutator_space(t2))
    eps = None
    if not subs and with_eps and _needs_eps(G):
        eps = so_form_type(G, [ge.t, t2])
    return PairClass(bool(subs), subs, eps)


# -- Monte Carlo


@dataclass(frozen=True)
class Estimate:
    trials: int
    successes: int
    estimate: float
    interval: tuple
    confidence: float
    seed: int
    counts: dict = dc_field(default_factory=dict)

    def contains(self, x):
        return self.interval[0] <= x <= self.interval[1]


def wilson_interval(k, n, confidence=0.99):
    if n < 1:
        raise ValueError("need at least one trial")
    z = NormalDist().inv_cdf(1 - (1 - confidence) / 2)
    p = k / n
    den = 1 + z * z / n
    centre = (p + z * z / (2 * n)) / den
    half = z * sqrt(p * (1 - p) / n + z * z / (4 * n * n)) / den
    return max(0.0, centre - half), min(1.0, centre + half)


def trial_rng(seed, index):
    h = blake2b(b"%d:%d" % (seed, index), digest_size=16).digest()
    return random.Random(int.from_bytes(h, "big"))


def _run_trials(args):
    X, n, q, m, strict, seed, lo, hi = args
    G = group(X, n, q)
    ge = build_good_element(G, m, strict=strict, verify=False)
    counts = Counter()
    for i in range(lo, hi):
        g = uniform_element(G, trial_rng(seed, i))
        counts[classify_pair(ge, g, check=False, with_eps=False).label] += 1
    return counts


def estimate_p1(G, m, trials, seed=0, confidence=0.99, workers=1, strict=True):
    """Fraction of trials g for which <t, t^g> is reducible."""
    if trials < 1:
        raise ValueError("trials must be at least 1")
    if not isinstance(G, GroupSpec):
        G = group(*G)
    build_good_element(G, m, strict=strict)  # validates m and the construction up front
    chunk = max(1, min(5000, -(-trials // max(1, workers * 4))))
    jobs = [(G.X, G.n, G.q, m, strict, seed, lo, min(trials, lo + chunk))
            for lo in range(0, trials, chunk)]
    counts = Counter()
    if workers > 1:
        with ProcessPoolExecutor(workers) as ex:
            for c in ex.map(_run_trials, jobs):
                counts.update(c)
    else:
        for job in jobs:
            counts.update(_run_trials(job))
    k = sum(v for lab, v in counts.items() if lab.startswith("Reducible"))
    return Estimate(trials, k, k / trials, wilson_interval(k, trials, confidence), confidence, seed,
                    dict(sorted(counts.items())))


# -- exact class sweep


@dataclass(frozen=True)
class ExactP1:
    value: Fraction
    class_size: int
    counts: dict


def _batch_subcases(ge, arr, tables):
    """Subcase flags for a stack of conjugates arr of shape (N, d, d)."""
    G = ge.group
    F = ge.t.field
    n, d = G.n, 2 * G.n
    addt, mult, negt, invt = tables
    eye = np.eye(d, dtype=np.uint8)
    D = addt[arr, negt[eye][None, :, :]]  # t' - I
    N = arr.shape[0]
    Bu = np.array(ge.U.matrix().rows, dtype=np.uint8)
    Bw = np.array(ge.W.matrix().rows, dtype=np.uint8)
    mt = (addt, mult)
    uD = batch_mul(F, np.ascontiguousarray(np.broadcast_to(Bu, (N, n, d))), D, mt)
    cfv = batch_rank(F, uD, tables) < n
    swap_a = batch_rank(F, np.concatenate([np.broadcast_to(Bu, (N, n, d)), D], axis=1), tables) == n
    wD = batch_mul(F, np.ascontiguousarray(np.broadcast_to(Bw, (N, n, d))), D, mt)
    swap_b = ~wD.reshape(N, -1).any(axis=1)
    if G.X == "SL":
        hyp = batch_rank(F, np.concatenate([np.broadcast_to(Bw, (N, n, d)), D], axis=1), tables) < d
    else:
        hyp = np.zeros(N, dtype=bool)
    return cfv, hyp, swap_a | swap_b


def _class_keys(ge, size, cap, cache_dir=None):
    """Sorted class keys of ge.t, optionally cached as an .npy file."""
    G = ge.group
    d = 2 * G.n
    path = None
    if cache_dir:
        path = os.path.join(cache_dir, "class_%s_%d_%d_m%d_%s.npy"
                            % (G.X, G.n, G.q, ge.m, "strict" if ge.strict else "loose"))
        if os.path.exists(path):
            arr = np.load(path)
            if arr.shape == (size, d * d):
                return [row.tobytes() for row in arr]
    keys = sorted(class_orbit(ge.t, G, cap=cap, expected=size, as_keys=True))
    if path:
        os.makedirs(cache_dir, exist_ok=True)
        np.save(path, np.frombuffer(b"".join(keys), dtype=np.uint8).reshape(-1, d * d))
    return keys


def exact_p1(G, m, cap=2 * 10 ** 6, strict=True, detail=False, chunk=100000, cache_dir=None):
    """p1 = #{t' in the class of t : <t, t'> reducible} / |class|."""
    if not isinstance(G, GroupSpec):
        G = group(*G)
    ge = build_good_element(G, m, strict=strict)
    size = group_order(G) // torus_and_centralizer_order(G.X, G.n, G.q)[1]
    if size > cap:
        raise PairError("class size %d exceeds cap %d" % (size, cap))
    F = ge.t.field
    d = 2 * G.n
    tables = np_tables(F)
    keys = _class_keys(ge, size, cap, cache_dir)
    counts = Counter()
    for lo in range(0, len(keys), chunk):
        block = keys[lo:lo + chunk]
        arr = np.frombuffer(b"".join(block), dtype=np.uint8).reshape(-1, d, d)
        cfv, hyp, swap = _batch_subcases(ge, arr, tables)
        for a, b, c in zip(cfv.tolist(), hyp.tolist(), swap.tolist()):
            subs = frozenset(s for s, f in zip(SUBCASES, (a, b, c)) if f)
            counts[PairClass(bool(subs), subs).label] += 1
    k = sum(v for lab, v in counts.items() if lab.startswith("Reducible"))
    res = ExactP1(Fraction(k, len(keys)), len(keys), dict(sorted(counts.items())))
    return res if detail else res.value


# -- quadratic form audit


@dataclass(frozen=True)
class SOAudit:
    pairs: int
    reducible: int
    plus: int
    minus: int


def sp_even_so_audit(G, m, trials=None, seed=0, exhaustive=False, strict=True):
    """Every irreducible pair in Sp_{2n}(q), q even, must preserve a quadratic
    form polarizing to the symplectic form; a failure raises PairError."""
    if not isinstance(G, GroupSpec):
        G = group(*G)
    if G.X != "Sp" or G.q % 2:
        raise PairError("the audit applies to Sp with q even")
    ge = build_good_element(G, m, strict=strict)
    if exhaustive:
        gs = enumerate_elements(G)
    else:
        if not trials or trials < 1:
            raise ValueError("trials must be at least 1")
        gs = (uniform_element(G, trial_rng(seed, i)) for i in range(trials))
    tally = Counter()
    for g in gs:
        pc = classify_pair(ge, g, check=False)
        tally["pairs"] += 1
        if pc.reducible:
            tally["reducible"] += 1
        else:
            tally["plus" if pc.eps == 1 else "minus"] += 1
    return SOAudit(tally["pairs"], tally["reducible"], tally["plus"], tally["minus"])


def p1_report(G, m, est, bound=None):
    """Experiment report as a plain dict (JSON-ready)."""
    from .bounds import p1_bound

    if bound is None:
        bound = p1_bound(G.X, G.n, G.q)
    return {
        "group": G.name, "X": G.X, "n": G.n, "q": G.q, "m": m,
        "trials": est.trials, "seed": est.seed, "counts": est.counts,
        "successes": est.successes, "estimate": est.estimate,
        "interval": list(est.interval), "confidence": est.confidence,
        "bound": str(bound), "bound_float": float(bound),
        "bound_satisfied": est.interval[1] <= bound,
    }

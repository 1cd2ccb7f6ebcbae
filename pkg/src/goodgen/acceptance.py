"""The desk-scale acceptance suite: one function per criterion.

Each function returns a CriterionResult whose `passed` flag is the criterion
exactly as stated; `detail` carries the evidence and any supplementary checks
(reported, never folded into the verdict).
"""

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
import time

from . import bounds, clgroup, pairlab, ppdgood, symmod
from .clgroup import conjugate, group, uniform_element
from .matspace import is_reducible_oracle
from .ppdgood import build_good_element

# (X, n, q, m, strict) for the pair experiments; Φ is degenerate for Sp_4(3)
# and SL_4(3), so those use the order-4 torus element.
CASES = {
    "Sp4(2)": ("Sp", 2, 2, 3, True),
    "Sp4(3)": ("Sp", 2, 3, 4, False),
    "SL4(3)": ("SL", 2, 3, 4, False),
    "SL4(4)": ("SL", 2, 4, 5, True),
    "SU6(3)": ("SU", 3, 3, 7, True),
}


@dataclass
class CriterionResult:
    number: int
    title: str
    passed: bool
    detail: dict = dc_field(default_factory=dict)
    seconds: float = 0.0

    def line(self):
        return "criterion %2d  %-5s %s (%.1fs)" % (self.number, "PASS" if self.passed else "FAIL",
                                                   self.title, self.seconds)


def _ge(name):
    X, n, q, m, strict = CASES[name]
    return build_good_element(group(X, n, q), m, strict=strict)


# -- 1


ORDER_CASES = [("GL", 2, 2, 6), ("GL", 2, 3, 48), ("GU", 2, 2, 18), ("Sp", 2, 3, 24),
               ("Sp", 4, 2, 720), ("O+", 2, 3, 4), ("O-", 2, 3, 8)]


def criterion_1():
    rows = []
    ok = True
    for kind, d, q, expected in ORDER_CASES:
        brute = clgroup.brute_force_order(kind, d, q)
        formula = clgroup.group_order((kind, d, q))
        good = brute == formula == expected
        ok &= good
        rows.append({"group": "%s_%d(%d)" % (kind, d, q), "brute_force": brute, "formula": formula,
                     "expected": expected, "ok": good})
    for kind, d, q, expected in [("Sp", 4, 3, 51840), ("SL", 4, 4, 987033600)]:
        formula, product = clgroup.group_order((kind, d, q)), clgroup.order_product(kind, d, q)
        good = formula == product == expected
        ok &= good
        rows.append({"group": "%s_%d(%d)" % (kind, d, q), "formula": formula, "product": product,
                     "expected": expected, "ok": good})
    return ok, {"rows": rows}


# -- 2


def criterion_2():
    strict = bounds.theta_inequality_audit(strict=True)
    relaxed = bounds.theta_inequality_audit(strict=False)
    n_strict = sum(len(v) for v in strict.values())
    n_relaxed = sum(len(v) for v in relaxed.values())
    return n_strict == 0, {
        "violations_as_stated": {k: len(v) for k, v in strict.items()},
        "first_witnesses": {k: [list(w) for w in v[:3]] for k, v in strict.items() if v},
        "violations_non_strict": n_relaxed,
        "note": "the stated strict inequalities fail only where both sides are equal" if n_relaxed == 0 and n_strict else "",
    }


# -- 3


def criterion_3(nmax=6, qmax=9):
    failures = []
    built = 0
    empty = []
    rejected = []
    for X in ("SL", "SU", "Sp", "SOplus", "SOminus"):
        for n in range(2, nmax + 1):
            if not ppdgood.admissible(X, n):
                continue
            for q in range(2, qmax + 1):
                if not ppdgood.is_prime_power(q):
                    continue
                phi = ppdgood.phi_set(X, n, q)
                if not phi:
                    empty.append([X, n, q])
                    continue
                G = group(X, n, q)
                for m in phi:
                    degenerate = ppdgood.is_degenerate_order(X, n, q, m)
                    try:
                        ge = build_good_element(G, m, verify=False)
                        bad = ppdgood.check_good_element(ge)
                    except ppdgood.GoodElementError as e:
                        bad = [str(e)]
                    if degenerate:
                        # t|_W would be scalar; these inputs must be rejected with the specific error
                        if bad and "degenerate" in bad[0]:
                            rejected.append([X, n, q, m])
                        else:
                            failures.append([X, n, q, m, ["degenerate input accepted"]])
                        continue
                    built += 1
                    if bad:
                        failures.append([X, n, q, m, bad])
    return not failures, {"built": built, "failures": failures, "empty_phi": empty,
                          "degenerate_rejected": rejected}


# -- 4


def _torus_meets_class(ge):
    G = ge.group
    C = ppdgood.torus_and_centralizer_order(G.X, G.n, G.q)[1]
    size = clgroup.group_order(G) // C
    keys = clgroup.class_orbit(ge.t, G, expected=size, as_keys=True)
    return sum(1 for x in ppdgood.torus_elements(ge) if x.key() in keys), size


def criterion_4():
    rows = []
    ok = True
    for name in ("Sp4(2)", "Sp4(3)"):
        ge = _ge(name)
        G = ge.group
        brute = clgroup.brute_force_centralizer_order(ge.t, G)
        table = ppdgood.torus_and_centralizer_order(G.X, G.n, G.q)[1]
        good = brute == table == {"Sp4(2)": 18, "Sp4(3)": 96}[name]
        ok &= good
        rows.append({"case": name, "check": "centralizer", "brute_force": brute, "formula": table, "ok": good})
    for name in ("Sp4(2)", "Sp4(3)", "SL4(3)", "SL4(4)"):
        ge = _ge(name)
        meet, size = _torus_meets_class(ge)
        good = meet == ge.group.n
        ok &= good
        rows.append({"case": name, "check": "torus meets class", "count": meet, "expected": ge.group.n,
                     "class_size": size, "torus_order": ge.torus_order, "ok": good})
    return ok, {"rows": rows}


# -- 5


def _oracle_chunk(args):
    name, seed, lo, hi = args
    ge = _ge(name)
    G = ge.group
    bad = []
    for i in range(lo, hi):
        g = uniform_element(G, pairlab.trial_rng(seed, i))
        got = pairlab.classify_pair(ge, g, check=False, with_eps=False).reducible
        want = is_reducible_oracle([ge.t, conjugate(ge.t, g)])
        if got != want:
            bad.append(i)
    return bad


def oracle_mismatches(name, pairs, seed=0, workers=1, chunk=500):
    jobs = [(name, seed, lo, min(pairs, lo + chunk)) for lo in range(0, pairs, chunk)]
    if workers > 1:
        with ProcessPoolExecutor(workers) as ex:
            parts = list(ex.map(_oracle_chunk, jobs))
    else:
        parts = [_oracle_chunk(j) for j in jobs]
    return sorted(i for p in parts for i in p)


def exhaustive_oracle_mismatches(name):
    ge = _ge(name)
    bad, total = [], 0
    for g in clgroup.enumerate_elements(ge.group):
        total += 1
        got = pairlab.classify_pair(ge, g, check=False, with_eps=False).reducible
        if got != is_reducible_oracle([ge.t, conjugate(ge.t, g)], method="full"):
            bad.append(g.key().hex())
    return bad, total


def criterion_5(pairs=10 ** 4, seed=0, workers=1, full_crosscheck=5):
    rows = []
    ok = True
    for name in ("SL4(4)", "Sp4(3)", "SU6(3)", "Sp4(2)"):
        bad = oracle_mismatches(name, pairs, seed, workers)
        ok &= not bad
        rows.append({"case": name, "pairs": pairs, "mismatches": len(bad), "witnesses": bad[:5]})
    bad, total = exhaustive_oracle_mismatches("Sp4(2)")
    ok &= not bad
    rows.append({"case": "Sp4(2) exhaustive", "pairs": total, "mismatches": len(bad), "witnesses": bad[:5]})
    # SU6(3) has 66430 projective points, so the seeded run above uses the kernel
    # spin method; confirm it against the all-points method on a few pairs.
    ge = _ge("SU6(3)")
    agree = 0
    for i in range(full_crosscheck):
        gens = [ge.t, conjugate(ge.t, uniform_element(ge.group, pairlab.trial_rng(seed, i)))]
        agree += is_reducible_oracle(gens, method="full") == is_reducible_oracle(gens, method="kernel")
    ok &= agree == full_crosscheck
    rows.append({"case": "SU6(3) kernel vs all points", "pairs": full_crosscheck,
                 "mismatches": full_crosscheck - agree})
    return ok, {"rows": rows}


# -- 6 and 7


P1_CASES = ("Sp4(2)", "Sp4(3)", "SL4(4)")


def _exact(name):
    X, n, q, m, strict = CASES[name]
    return pairlab.exact_p1(group(X, n, q), m, strict=strict, detail=True)


def criterion_6():
    rows = []
    ok = True
    for name in P1_CASES:
        X, n, q, m, strict = CASES[name]
        res = _exact(name)
        bound = bounds.p1_bound(X, n, q)
        good = res.value <= bound
        ok &= good
        rows.append({"case": name, "m": m, "exact": str(res.value), "class_size": res.class_size,
                     "bound": str(bound), "counts": res.counts, "ok": good})
    return ok, {"rows": rows}


EXACT_P1 = {"Sp4(2)": Fraction(11, 20), "Sp4(3)": Fraction(17, 45), "SL4(4)": Fraction(14949, 30464)}


def criterion_7(trials=10 ** 5, seed=0, workers=1, exact=None):
    exact = exact or EXACT_P1
    rows = []
    ok = True
    for name in P1_CASES:
        X, n, q, m, strict = CASES[name]
        est = pairlab.estimate_p1(group(X, n, q), m, trials, seed=seed, confidence=0.999,
                                  workers=workers, strict=strict)
        good = est.contains(exact[name])
        ok &= good
        rows.append({"case": name, "trials": trials, "successes": est.successes,
                     "interval": list(est.interval), "exact": str(exact[name]), "ok": good})
    return ok, {"rows": rows}


# -- 8


def criterion_8(trials=10 ** 4, seed=0):
    detail = {}
    failures = 0
    try:
        small = pairlab.sp_even_so_audit(group("Sp", 2, 2), 3, exhaustive=True)
        detail["Sp4(2)"] = small.__dict__
    except pairlab.PairError as e:
        failures += 1
        small = None
        detail["Sp4(2)"] = {"failure": str(e)}
    try:
        big = pairlab.sp_even_so_audit(group("Sp", 4, 2), 5, trials=trials, seed=seed)
        detail["Sp8(2)"] = big.__dict__
    except pairlab.PairError as e:
        failures += 1
        detail["Sp8(2)"] = {"failure": str(e)}
    both = small is not None and small.plus > 0 and small.minus > 0
    detail["failures"] = failures
    detail["both_types_in_Sp4(2)"] = both
    return failures == 0 and both, detail


# -- 9


def fix_dim_mismatches(ell_max=12, primes=(2, 3, 5, 7)):
    bad, checked = [], 0
    for ell in range(2, ell_max + 1):
        for p in primes:
            if symmod.regime(ell, p) is None:
                continue
            for ct in symmod.cycle_types(ell):
                for a in ((1, -1) if p % 2 else (1,)):
                    sp = symmod.SignedPerm(ct, a)
                    checked += 1
                    if symmod.fix_dim_direct(sp, p) != symmod.fix_dim_formula(sp, p):
                        bad.append([list(ct), a, p])
    return bad, checked


SWEEPS = ((4, 5, 10), (4, 2, 10), (6, 7, 13))


def criterion_9():
    bad, checked = fix_dim_mismatches()
    literal = [symmod.good_cycle_type_audit(n, p, ell) for n, p, ell in SWEEPS]
    structural = [symmod.good_cycle_type_audit(n, p, ell, mode="structural") for n, p, ell in SWEEPS]
    ok = not bad and all(r["matches_expected"] for r in literal)
    return ok, {
        "fix_dim_checked": checked, "fix_dim_mismatches": bad,
        "sweeps_as_stated": [{k: r[k] for k in ("n", "p", "ell", "phi", "good_types", "matches_expected")}
                             for r in literal],
        "sweeps_structural": [{k: r[k] for k in ("n", "p", "ell", "good_types", "matches_expected")}
                              for r in structural],
    }


# -- 10


LEADING = {"SL": Fraction(21, 2), "SU": Fraction(9), "Sp": Fraction(37, 10), "SO": Fraction(53, 5)}


def criterion_10():
    dual = bounds.dual_path_audit()
    lead = bounds.leading_constants()
    lead_ok = all(lead[c] == v for c, v in LEADING.items())
    ratio = ppdgood.cent_ratio_audit()
    ratio_sharp = ppdgood.cent_ratio_audit(sharp=True)
    # a smaller constant 6/5 q^-2 for n = 2 is checked and reported
    n2_small_constant = [q for q in (2, 3, 4, 5, 7, 8, 9)
                 if ppdgood.cent_ratio("Sp", 2, q) >= Fraction(6, 5) / q ** 2]
    c9 = symmod.c9_alt_audit()
    ok = not dual and lead_ok and not ratio and not c9
    return ok, {
        "dual_path_disagreements": [[str(x) for x in r] for r in dual],
        "leading_constants": {c: str(v) for c, v in lead.items()},
        "centralizer_ratio_violations": [[X, n, q, str(r), str(b)] for X, n, q, r, b in ratio],
        "centralizer_ratio_sharp_bound_violations": len(ratio_sharp),
        "sp_n2_small_constant_6_5_fails_at_q": n2_small_constant,
        "c9_alt_violations": [[X, n, q, ell, str(v)] for X, n, q, ell, v in c9],
        # ell = 5, 6 lie below the ell >= 7 threshold: reported, not judged
        "c9_alt_small_ell": [dict(r, value=str(r["value"])) for r in symmod.c9_alt_small_ell()],
    }


# -- 11


MARGIN_CASES = (("Sp", 20, 2), ("SL", 20, 4))


def criterion_11():
    rows = []
    ok = True
    for X, n, q in MARGIN_CASES:
        margin, positive = bounds.broadbrush_margin(X, n, q)
        ok &= positive
        rows.append({"X": X, "n": n, "q": q, "positive": positive, "margin_float": float(margin)})
    return ok, {"rows": rows, "note": "p = O(q^(-n^2/2)) and the absolute constant are not measured"}


TITLES = {
    1: "order formulas vs brute force",
    2: "Θ-product inequalities",
    3: "good-element construction grid",
    4: "torus and centralizer",
    5: "classifier vs spin oracle",
    6: "exact p1 within the bound",
    7: "Monte Carlo interval contains exact p1",
    8: "invariant quadratic form audit",
    9: "deleted permutation module suite",
    10: "bound ledger",
    11: "broad-brush margin",
}

CRITERIA = {1: criterion_1, 2: criterion_2, 3: criterion_3, 4: criterion_4, 5: criterion_5,
            6: criterion_6, 7: criterion_7, 8: criterion_8, 9: criterion_9, 10: criterion_10,
            11: criterion_11}


def run_criterion(k, **kw):
    t0 = time.perf_counter()
    passed, detail = CRITERIA[k](**kw)
    return CriterionResult(k, TITLES[k], bool(passed), detail, time.perf_counter() - t0)


def run_all(workers=1, log=None):
    out = []
    for k in sorted(CRITERIA):
        kw = {"workers": workers} if k in (5, 7) else {}
        res = run_criterion(k, **kw)
        if log:
            log(res.line())
        out.append(res)
    return out

"""Command-line front end. Every command prints one JSON report (or a CSV
flattening of it); progress goes to stderr only.

Exit codes: 0 success, 1 bound or audit violation (witness on stderr), 2 usage error.
"""

import argparse
import csv
import io
import json
import os
import sys
from fractions import Fraction

from . import acceptance, bounds, clgroup, pairlab, ppdgood, symmod
from .clgroup import group
from .gfield import FieldError, gf

SCHEMA_VERSION = "1.0"
DOMAIN_ERRORS = (clgroup.GroupError, ppdgood.GoodElementError, pairlab.PairError, bounds.BoundError,
                 symmod.SymmodError, FieldError)
# flags that never change results
NOT_CONFIG = ("format", "output", "cache_dir", "workers", "func")


class Violation(Exception):
    def __init__(self, result, witness):
        super().__init__(witness)
        self.result = result
        self.witness = witness


def _jsonable(x):
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple, frozenset, set)):
        items = [_jsonable(v) for v in x]
        return sorted(items) if isinstance(x, (set, frozenset)) else items
    if hasattr(x, "item") and not isinstance(x, (str, bytes)):  # numpy scalars
        return x.item()
    return x


def render_json(report):
    return json.dumps(_jsonable(report), sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def _flatten(x, prefix, out):
    if isinstance(x, dict):
        for k in sorted(x):
            _flatten(x[k], "%s.%s" % (prefix, k) if prefix else str(k), out)
    elif isinstance(x, list):
        for i, v in enumerate(x):
            _flatten(v, "%s.%d" % (prefix, i), out)
    else:
        out.append((prefix, x))


def render_csv(report):
    rows = []
    _flatten(_jsonable(report), "", rows)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["field", "value"])
    w.writerows(rows)
    return buf.getvalue()


def _matrix(M):
    return [list(r) for r in M.rows]


def _group(a):
    return group(a.type, a.n, a.q)


def _m(a, G):
    return a.m if a.m is not None else ppdgood.least_m(G.X, G.n, G.q)


# -- commands


def cmd_orders(a):
    G = _group(a)
    order = clgroup.group_order(G)
    product = clgroup.order_product(clgroup._kind(G), G.dim, G.q)
    if order != product:
        raise Violation({"order": order, "product": product}, "formula %d != product %d" % (order, product))
    return {"group": G.name, "order": order, "product_check": product}


def cmd_theta(a):
    if a.k is not None:
        return {"k": a.k, "n": a.n, "q": a.q, "sign": a.sign,
                "value": clgroup.theta(a.k, a.n, a.q, a.sign)}
    viol = bounds.theta_inequality_audit(a.nmax, range(2, a.qmax + 1), strict=not a.relaxed)
    result = {"nmax": a.nmax, "qmax": a.qmax, "strict": not a.relaxed,
              "violations": {k: len(v) for k, v in viol.items()},
              "witnesses": {k: [list(w) for w in v[:5]] for k, v in viol.items() if v}}
    if any(viol.values()):
        first = next((k, v[0]) for k, v in viol.items() if v)
        raise Violation(result, "clause %s fails at %s" % first)
    return result


def cmd_phi(a):
    X = clgroup.normalize_type(a.type)
    phi = ppdgood.phi_set(X, a.n, a.q)
    Q = a.q ** (2 if X == "SU" else 1)
    return {"X": X, "n": a.n, "q": a.q, "phi": phi, "ppd_primes": ppdgood.ppd_primes(a.n, Q),
            "torus_order": ppdgood.torus_order(X, a.n, a.q)}


def cmd_good(a):
    G = _group(a)
    m = _m(a, G)
    ge = ppdgood.build_good_element(G, m, strict=not a.non_strict, verify=False)
    bad = ppdgood.check_good_element(ge)
    T, C = ppdgood.torus_and_centralizer_order(G.X, G.n, G.q)
    result = {"group": G.name, "m": m, "strict": ge.strict, "t": _matrix(ge.t),
              "U": [list(v) for v in ge.U.basis], "W": [list(v) for v in ge.W.basis],
              "torus_order": T, "centralizer_order": C,
              "normalizer_order": ppdgood.normalizer_order(G.X, G.n, G.q),
              "failed_invariants": bad}
    if ge.strict:
        count, integral = ppdgood.good_class_count(G.X, G.n, G.q, m)
        result["class_count"] = {"value": count, "integral": integral}
    if bad:
        raise Violation(result, "invariants failed: %s" % ", ".join(bad))
    return result


def cmd_classify(a):
    G = _group(a)
    m = _m(a, G)
    ge = ppdgood.build_good_element(G, m, strict=not a.non_strict)
    g = clgroup.uniform_element(G, pairlab.trial_rng(a.seed, a.index))
    pc = pairlab.classify_pair(ge, g)
    result = {"group": G.name, "m": m, "seed": a.seed, "index": a.index, "g": _matrix(g),
              "label": pc.label, "reducible": pc.reducible, "subcases": sorted(pc.subcases), "eps": pc.eps}
    if a.oracle:
        from .matspace import is_reducible_oracle

        want = is_reducible_oracle([ge.t, clgroup.conjugate(ge.t, g)])
        result["oracle_reducible"] = want
        if want != pc.reducible:
            raise Violation(result, "classifier says %s, oracle says %s" % (pc.reducible, want))
    return result


def cmd_estimate(a):
    G = _group(a)
    m = _m(a, G)
    est = pairlab.estimate_p1(G, m, a.trials, seed=a.seed, confidence=a.confidence,
                              workers=a.workers, strict=not a.non_strict)
    rep = pairlab.p1_report(G, m, est)
    rep["bound_informative"] = bounds.p1_bound(G.X, G.n, G.q) < 1
    if not rep["bound_satisfied"]:
        raise Violation(rep, "Wilson upper %.6f exceeds bound %s" % (est.interval[1], rep["bound"]))
    return rep


def cmd_exact(a):
    G = _group(a)
    m = _m(a, G)
    res = pairlab.exact_p1(G, m, cap=a.cap, strict=not a.non_strict, detail=True, cache_dir=a.cache_dir)
    bound = bounds.p1_bound(G.X, G.n, G.q)
    result = {"group": G.name, "m": m, "p1": res.value, "p1_float": float(res.value),
              "class_size": res.class_size, "counts": res.counts, "bound": bound,
              "bound_satisfied": res.value <= bound}
    if res.value > bound:
        raise Violation(result, "p1 = %s exceeds bound %s" % (res.value, bound))
    return result


def cmd_so_audit(a):
    G = _group(a)
    m = _m(a, G)
    try:
        au = pairlab.sp_even_so_audit(G, m, trials=a.trials, seed=a.seed, exhaustive=a.exhaustive,
                                      strict=not a.non_strict)
    except pairlab.PairError as e:
        raise Violation({"group": G.name, "m": m, "failure": str(e)}, str(e))
    return {"group": G.name, "m": m, "exhaustive": a.exhaustive, "pairs": au.pairs,
            "reducible": au.reducible, "irreducible_plus": au.plus, "irreducible_minus": au.minus}


def cmd_sym_audit(a):
    if a.ell is None:
        bad, checked = acceptance.fix_dim_mismatches(a.ell_max)
        result = {"ell_max": a.ell_max, "checked": checked, "mismatches": bad}
        if bad:
            raise Violation(result, "fixed dimension mismatch at %s" % bad[0])
        return result
    result = symmod.good_cycle_type_audit(a.n, a.p, a.ell, mode=a.mode)
    if not result["matches_expected"]:
        raise Violation(result, "good cycle types %s differ from the expected single type"
                        % result["good_types"])
    return result


def _entry(e):
    return {"class": e.i, "value": e.value, "value_float": float(e.value), "condition": e.condition,
            "valid": e.valid, "source": e.source}


def cmd_bounds(a):
    rep = bounds.p_tilde_bound_total(a.n, a.q) if a.tilde else bounds.p_bound_total(a.type, a.n, a.q)
    margin, positive = bounds.broadbrush_margin(a.type, a.n, a.q)
    return {"X": rep.X, "n": rep.n, "q": rep.q, "column": rep.column, "p1_bound": rep.p1,
            "p1_informative": rep.p1_informative, "entries": [_entry(e) for e in rep.entries],
            "total": rep.total, "total_float": float(rep.total), "all_conditions_hold": rep.all_valid,
            "leading": {"coefficient": rep.leading_coefficient,
                        "exponent": [str(c) for c in rep.leading_exponent]},
            "margin": margin, "margin_float": float(margin), "margin_positive": positive}


def cmd_grid(a):
    ok, detail = acceptance.criterion_3(a.nmax, a.qmax)
    if not ok:
        raise Violation(detail, "construction failures: %s" % detail["failures"][:3])
    return detail


def cmd_selftest(a):
    results = acceptance.run_all(workers=a.workers, log=lambda s: print(s, file=sys.stderr, flush=True))
    out = {"criteria": [{"number": r.number, "title": r.title, "passed": r.passed, "detail": r.detail}
                        for r in results],
           "passed": sum(r.passed for r in results), "total": len(results)}
    failed = [r.number for r in results if not r.passed]
    if failed:
        raise Violation(out, "criteria failing: %s" % failed)
    return out


# -- parser


def _add_group(p, m=True):
    p.add_argument("--type", required=True, help="SL, SU, Sp, SO+ or SO-")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--q", type=int, required=True)
    if m:
        p.add_argument("--m", type=int, default=None, help="element order (default: least element of Φ)")
        p.add_argument("--non-strict", action="store_true",
                       help="accept any m dividing the torus order (degenerate Φ)")


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--output", default=None, help="write the report here instead of stdout")
    common.add_argument("--cache-dir", default=os.environ.get("GOODGEN_CACHE_DIR"),
                        help="cache for enumerated classes (default $GOODGEN_CACHE_DIR)")
    common.add_argument("--workers", type=int, default=1, help="worker processes (results do not depend on it)")
    parser = argparse.ArgumentParser(prog="goodgen", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)
    _sub = sub.add_parser

    def add(name, **kw):
        return _sub(name, parents=[common], **kw)

    sub.add_parser = add

    p = sub.add_parser("orders", help="group order")
    _add_group(p, m=False)
    p.set_defaults(func=cmd_orders)

    p = sub.add_parser("theta", help="Θ(k,n;q), or the inequality audit when --k is omitted")
    p.add_argument("--k", type=int)
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--q", type=int, default=None)
    p.add_argument("--sign", type=int, choices=(1, -1), default=1)
    p.add_argument("--nmax", type=int, default=30)
    p.add_argument("--qmax", type=int, default=9)
    p.add_argument("--relaxed", action="store_true", help="read strict inequalities as non-strict")
    p.set_defaults(func=cmd_theta)

    p = sub.add_parser("phi", help="the set of good-element orders")
    _add_group(p, m=False)
    p.set_defaults(func=cmd_phi)

    p = sub.add_parser("good", help="construct a good element")
    _add_group(p)
    p.set_defaults(func=cmd_good)

    p = sub.add_parser("classify", help="classify <t, t^g> for a seeded uniform g")
    _add_group(p)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--index", type=int, default=0)
    p.add_argument("--oracle", action="store_true", help="cross-check with the spin oracle")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("estimate-p1", help="Monte Carlo estimate of p1")
    _add_group(p)
    p.add_argument("--trials", type=int, default=10000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--confidence", type=float, default=0.99)
    p.set_defaults(func=cmd_estimate)

    p = sub.add_parser("exact-p1", help="exact p1 by sweeping the class of t")
    _add_group(p)
    p.add_argument("--cap", type=int, default=2 * 10 ** 6)
    p.set_defaults(func=cmd_exact)

    p = sub.add_parser("so-audit", help="invariant quadratic forms for irreducible pairs (Sp, q even)")
    _add_group(p)
    p.add_argument("--trials", type=int, default=None)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--exhaustive", action="store_true")
    p.set_defaults(func=cmd_so_audit)

    p = sub.add_parser("sym-audit", help="deleted permutation module checks")
    p.add_argument("--n", type=int)
    p.add_argument("--p", type=int)
    p.add_argument("--ell", type=int, help="partition sweep for (n, p, ell); omit for the fixed-dimension check")
    p.add_argument("--ell-max", type=int, default=12)
    p.add_argument("--mode", choices=("literal", "structural"), default="literal")
    p.set_defaults(func=cmd_sym_audit)

    p = sub.add_parser("bounds", help="per-class contribution column report and broad-brush margin")
    _add_group(p, m=False)
    p.add_argument("--tilde", action="store_true", help="use the Sp even-q column")
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("grid", help="good-element construction over a grid")
    p.add_argument("--nmax", type=int, default=6)
    p.add_argument("--qmax", type=int, default=9)
    p.set_defaults(func=cmd_grid)

    p = sub.add_parser("selftest", help="run the acceptance suite")
    p.set_defaults(func=cmd_selftest)
    return parser


def _config(a):
    return {k: v for k, v in sorted(vars(a).items()) if k not in NOT_CONFIG}


def _emit(a, report):
    text = render_csv(report) if a.format == "csv" else render_json(report)
    if a.output:
        with open(a.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def run(argv=None):
    parser = build_parser()
    try:
        a = parser.parse_args(argv)
    except SystemExit as e:
        return 2 if e.code else 0
    if a.command == "theta" and a.k is not None and (a.n is None or a.q is None):
        parser.print_usage(sys.stderr)
        print("goodgen: theta --k needs --n and --q", file=sys.stderr)
        return 2
    if a.command == "sym-audit" and a.ell is not None and (a.n is None or a.p is None):
        print("goodgen: sym-audit --ell needs --n and --p", file=sys.stderr)
        return 2
    config = _config(a)
    code = 0
    try:
        if getattr(a, "q", None) is not None:
            gf(a.q)
        result = a.func(a)
    except Violation as v:
        result = v.result
        print("violation: %s" % v.witness, file=sys.stderr)
        code = 1
    except DOMAIN_ERRORS as e:
        print("goodgen: %s" % e, file=sys.stderr)
        return 2
    if "m" in config and config["m"] is None and isinstance(result, dict) and "m" in result:
        config["m"] = result["m"]
    _emit(a, {"schema_version": SCHEMA_VERSION, "command": a.command, "config": config, "result": result})
    return code


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()

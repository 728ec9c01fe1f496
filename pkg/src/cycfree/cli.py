"""Command-line frontend: ingest distributions as JSON, run conversions,
convolutions and verifications, emit deterministic tables.

Rationals travel as strings "p/q" (lowest terms, q > 0) so nothing is ever
rounded.  Exit codes: 0 success, 1 verification failures found, 2 input
errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import cumulants as cm
from . import graphs as gr
from . import joint as jt
from . import limits as lm
from . import series as se

HARD_CAP = 14
DEFAULT_ORDER = 10


class InputError(Exception):
    pass


def parse_rational(s):
    try:
        return Fraction(str(s))
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError("bad rational %r: %s" % (s, exc)) from None


def format_rational(x):
    f = Fraction(x.numerator, x.denominator)
    return "%d/%d" % (f.numerator, f.denominator)


def load_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except FileNotFoundError:
        raise InputError("no such file: %s" % path) from None
    except json.JSONDecodeError as exc:
        raise InputError(
            "%s: malformed JSON at line %d column %d: %s"
            % (path, exc.lineno, exc.colno, exc.msg)
        ) from None


def parse_functional(obj, name="functional"):
    for field in ("alphabet", "moments"):
        if field not in obj:
            raise InputError("%s: missing field %r" % (name, field))
    alphabet = tuple(obj["alphabet"])
    vals = {}
    for word, v in obj["moments"].items():
        letters = tuple(word.split(","))
        if any(x not in alphabet for x in letters):
            raise InputError("%s: word %r uses letters outside the alphabet" % (name, word))
        vals[letters] = parse_rational(v)
    unit = parse_rational(obj.get("unit", "1"))
    return cm.MomentFunctional(alphabet, vals, unit)

def parse_series(obj, name="series"):
    if not isinstance(obj, list):
        raise InputError("%s: expected a JSON array of rationals" % name)
    return [parse_rational(v) for v in obj]


def parse_marginal_series(obj, which, order):
    out = {}
    for key in which:
        if key not in obj:
            raise InputError("marginal file missing %r series" % key)
        out[key] = parse_series(obj[key], key)[: order + 1]
    return out


def check_order(order):
    if order > HARD_CAP:
        raise InputError("order %d exceeds the hard cap %d" % (order, HARD_CAP))
    return order


def emit(payload, args):
    if args.format == "json":
        text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    else:
        rows = payload.get("csv", [])
        text = "\n".join(",".join(str(c) for c in row) for row in rows) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def words_sorted(table):
    return sorted(table, key=lambda w: (len(w), w))


# -- subcommands --------------------------------------------------------------------


def run_cumulants(args):
    data = load_json(args.input)
    fam = args.family
    order = check_order(args.order)

    def fn(key, unit="1"):
        if key not in data:
            raise InputError("input must carry a %r functional for family %s" % (key, fam))
        return parse_functional(data[key], key)

    if fam == "free":
        table = cm.free_cumulants(fn("psi"), order)
    elif fam == "boolean":
        table = cm.boolean_cumulants(fn("phi"), order)
    elif fam == "monotone":
        table = cm.monotone_cumulants(fn("phi"), order)
    elif fam == "conditional":
        table = cm.conditional_cumulants(fn("psi"), fn("phi"), order)
    elif fam == "infinitesimal":
        table = cm.infinitesimal_cumulants_general(fn("psi"), fn("omega"), order)
    elif fam == "cyclic_free":
        table = cm.cyclic_free_cumulants_general(fn("psi"), fn("omega"), order)
    elif fam == "cyclic_conditional":
        table = cm.cyclic_conditional_cumulants(fn("psi"), fn("phi"), fn("omega"), order)
    elif fam == "cyclic_boolean":
        table = cm.cyclic_boolean_cumulants(fn("phi"), fn("omega"), order)
    else:
        raise InputError("unknown family %r" % fam)
    payload = {
        "family": fam,
        "cumulants": {",".join(w): format_rational(table.values[w]) for w in table.values},
        "csv": [
            [",".join(w), format_rational(table.values[w])] for w in words_sorted(table.values)
        ],
    }
    emit(payload, args)
    return 0


TRANSFORMS = ("M", "eta", "rho", "R", "S", "mk", "boolean", "free", "G", "F")


def run_transform(args):
    check_order(args.order)
    m = parse_series(load_json(args.input))
    order = min(args.order, len(m) - 1)
    m = m[: order + 1]
    name = args.name
    if name == "M":
        out = m[1:]
    elif name == "eta":
        out = se.eta_series(m).coeffs[1:]
    elif name == "rho":
        out = se.rho_series(m).coeffs
    elif name == "R":
        out = se.free_cumulant_series(m)
    elif name == "S":
        try:
            out = se.s_transform(m).coeffs
        except ZeroDivisionError as exc:
            raise InputError(str(exc)) from None
    elif name == "mk":
        out = se.mk_series(m)
    elif name == "boolean":
        out = se.eta_series(m).coeffs[1:]
    elif name == "free":
        out = se.free_cumulant_series(m)
    elif name == "G":
        out = m
    elif name == "F":
        f = se.f_series(m)
        out = f.coeffs
    else:
        raise InputError("unknown transform %r" % name)
    payload = {
        "transform": name,
        "coefficients": [format_rational(x) for x in out],
        "csv": [[i, format_rational(x)] for i, x in enumerate(out)],
    }
    emit(payload, args)
    return 0


ADD_INPUTS = {
    "free": ("psi",),
    "boolean": ("phi",),
    "monotone": ("psi",),
    "conditional": ("psi", "phi"),
    "infinitesimal": ("psi", "dpsi"),
    "cyclic_conditional": ("psi", "phi", "omega"),
    "cyclic_boolean": ("phi", "omega"),
    "cyclic_monotone": ("phi", "omega"),
}


def run_convolve(args):
    mode = args.mode
    order = check_order(args.order)
    if mode not in ADD_INPUTS:
        raise InputError("unknown mode %r" % mode)
    keys = ADD_INPUTS[mode]
    a = parse_marginal_series(load_json(args.a), keys, order)
    b = parse_marginal_series(load_json(args.b), keys, order)

    def tup(d):
        return d[keys[0]] if len(keys) == 1 else tuple(d[k] for k in keys)

    failures = []
    payload = {"mode": mode, "kind": args.kind}
    if args.kind == "add":
        res = se.additive_convolve(mode, tup(a), tup(b))
        if mode == "free":
            payload["moments"] = [format_rational(x) for x in res.moments]
            payload["omega_a"] = _useries_json(res.omega_a)
            payload["omega_b"] = _useries_json(res.omega_b)
            if not se.check_free_subordination(a["psi"], b["psi"], res, res.order):
                failures.append("free subordination identity")
        elif mode in ("boolean", "monotone"):
            payload["moments"] = [format_rational(x) for x in res.moments]
        elif mode == "conditional":
            payload["psi"] = [format_rational(x) for x in res.psi]
            payload["phi"] = [format_rational(x) for x in res.phi]
            if not se.check_conditional_f_identity(
                (a["psi"], a["phi"]), (b["psi"], b["phi"]), res, res.order
            ):
                failures.append("conditional F identity")
        elif mode == "infinitesimal":
            payload["psi"] = [format_rational(x) for x in res.psi]
            payload["dpsi"] = [format_rational(x) for x in res.dpsi]
            if not se.check_infinitesimal_subordination(
                (a["psi"], a["dpsi"]), (b["psi"], b["dpsi"]), res, res.order - 1
            ):
                failures.append("infinitesimal subordination identity")
        else:
            for field in ("psi", "phi", "omega"):
                if hasattr(res, field):
                    payload[field] = [format_rational(x) for x in getattr(res, field)]
    else:
        res = se.multiplicative_convolve(mode, tup(a), tup(b))
        for field in ("moments", "psi", "phi", "omega", "dpsi"):
            if hasattr(res, field):
                payload[field] = [format_rational(x) for x in getattr(res, field)]
        if mode == "free" and not se.check_free_mult_subordination(
            a["psi"], b["psi"], res, res.order
        ):
            failures.append("free multiplicative subordination")
    payload["verified"] = not failures
    payload["failures"] = failures
    payload["csv"] = [
        [k] + list(v)
        for k, v in sorted(payload.items())
        if isinstance(v, list) and k not in ("failures", "csv")
    ]
    emit(payload, args)
    return 1 if failures else 0


def _useries_json(u):
    return {"shift": u.shift, "coefficients": [format_rational(c) for c in u.coeffs]}


def run_jointcheck(args):
    data = load_json(args.input)
    degree = check_order(args.degree)
    if "marginals" not in data:
        raise InputError("jointcheck input needs a 'marginals' list")
    margs = []
    for mobj in data["marginals"]:
        for field in ("label", "alphabet"):
            if field not in mobj:
                raise InputError("marginal missing %r" % field)
        states = {}
        for st in ("psi", "phi", "omega"):
            if st in mobj:
                states[st] = {
                    tuple(w.split(",")): parse_rational(v) for w, v in mobj[st].items()
                }
        margs.append(
            jt.MarginalSpec(
                mobj["label"],
                tuple(mobj["alphabet"]),
                omega_unit=parse_rational(data["omega_unit"]) if "omega_unit" in data else None,
                **states,
            )
        )
    triple = jt.build_joint(
        args.mode,
        margs,
        degree,
        omega_unit=parse_rational(data["omega_unit"]) if "omega_unit" in data else None,
    )
    violations = jt.verify_defining_conditions(triple, args.mode, degree)
    payload = {
        "mode": args.mode,
        "degree": degree,
        "violations": len(violations),
        "witnesses": [
            {"condition": kind, "runs": repr(runs), "lhs": format_rational(l), "rhs": format_rational(r)}
            for kind, runs, l, r in violations[:10]
        ],
        "csv": [[args.mode, degree, len(violations)]],
    }
    emit(payload, args)
    return 0 if not violations else 1


def parse_graph(obj, name="graph"):
    for field in ("vertices", "edges", "root"):
        if field not in obj:
            raise InputError("%s: missing %r" % (name, field))
    n = obj["vertices"]
    if not isinstance(n, int) or n < 1:
        raise InputError("%s: vertices must be a positive count" % name)
    edges = [(e[0], e[1], (e[2] if len(e) > 2 else 1)) for e in obj["edges"]]
    return gr.RootedGraph(list(range(n)), edges, obj["root"])


def run_graph(args):
    degree = check_order(args.degree)
    files = args.graphs
    if args.product == "conditional":
        if len(files) != 4:
            raise InputError("conditional product needs h1 h2 g1 g2")
        h1, h2, g1, g2 = (parse_graph(load_json(f), f) for f in files)
        prod = gr.conditional_product(h1, h2, g1, g2, degree)
        report = gr.verify_graph_theorems(h1, h2, g1, g2, degree)
        ok = all(report.values())
        payload = {
            "product": "conditional",
            "root_moments": [format_rational(x) for x in prod.root_moments(degree)],
            "report": {k: bool(v) for k, v in report.items()},
            "csv": [[k, str(v)] for k, v in sorted(report.items())],
        }
        emit(payload, args)
        return 0 if ok else 1
    if len(files) != 2:
        raise InputError("product %r needs two graph files" % args.product)
    g1, g2 = (parse_graph(load_json(f), f) for f in files)
    prod = gr.graph_product(args.product, g1, g2, depth=degree)
    moments = prod.root_moments(degree)
    payload = {
        "product": args.product,
        "root_moments": [format_rational(x) for x in moments],
        "csv": [[n, format_rational(m)] for n, m in enumerate(moments)],
    }
    emit(payload, args)
    return 0


def run_limits(args):
    order = check_order(args.order)
    params = {k: parse_rational(v) for k, v in json.loads(args.params).items()}
    moments = lm.limit_moments(args.law, params, order)
    payload = {
        "law": args.law,
        "moments": [format_rational(x) for x in moments],
    }
    rows = []
    if args.nfold:
        n_list = [int(x) for x in args.nfold.split(",")]
        marginal = params
        if args.marginal:
            marginal = {
                k: (parse_series(v) if isinstance(v, list) else parse_rational(v))
                for k, v in load_json(args.marginal).items()
            }
        gaps = lm.nfold_check(args.law, marginal, n_list, min(order, 6), params)
        rows = [[N, k, format_rational(g)] for N, k, g in gaps]
        payload["gaps"] = rows
        payload["richardson_consistent"] = lm.richardson_consistent(gaps, min(order, 6))
    payload["csv"] = rows or [[n, format_rational(m)] for n, m in enumerate(moments)]
    emit(payload, args)
    return 0


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--order", type=int, default=DEFAULT_ORDER, help="truncation order")
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--out", default=None, help="write output to a file")
    common.add_argument("--seed", type=int, default=0, help="seed for randomized suites")
    ap = argparse.ArgumentParser(
        prog="cycfree",
        description="Exact combinatorics and transforms for cyclic and conditional "
        "non-commutative probability.",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    c = sub.add_parser("cumulants", help="moment file -> cumulant table", parents=[common])
    c.add_argument("family", choices=cm.FAMILIES)
    c.add_argument("input")
    c.set_defaults(fn=run_cumulants)

    t = sub.add_parser("transform", help="univariate series transforms", parents=[common])
    t.add_argument("name", choices=TRANSFORMS)
    t.add_argument("input")
    t.set_defaults(fn=run_transform)

    v = sub.add_parser("convolve", help="marginal files -> convolved series", parents=[common])
    v.add_argument("mode")
    v.add_argument("kind", choices=("add", "mul"))
    v.add_argument("a")
    v.add_argument("b")
    v.set_defaults(fn=run_convolve)

    j = sub.add_parser("jointcheck", help="marginals -> violation report", parents=[common])
    j.add_argument("mode", choices=jt.MODES)
    j.add_argument("input")
    j.add_argument("--degree", type=int, default=5)
    j.set_defaults(fn=run_jointcheck)

    g = sub.add_parser("graph", help="graph files -> moments and theorem report", parents=[common])
    g.add_argument("product", choices=("star", "comb", "orthogonal", "free", "conditional"))
    g.add_argument("graphs", nargs="+")
    g.add_argument("--degree", type=int, default=6)
    g.set_defaults(fn=run_graph)

    l = sub.add_parser("limits", help="limit laws and convergence tables", parents=[common])
    l.add_argument("law", choices=lm.LAWS)
    l.add_argument("--params", required=True, help="JSON object of law parameters")
    l.add_argument("--nfold", default=None, help="comma-separated N values")
    l.add_argument("--marginal", default=None, help="marginal JSON for the N-fold scheme")
    l.set_defaults(fn=run_limits)
    return ap


def main(argv=None):
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.fn(args)
    except InputError as exc:
        print("input error: %s" % exc, file=sys.stderr)
        return 2
    except ValueError as exc:
        print("input error: %s" % exc, file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

"""Command-line front door: products, bases and verification suites.

Element grammar (see `hall mul --help`):

    unit            the identity
    1[s<i>]         characteristic function of the simple at vertex i
    1[prep:m]       Kronecker preprojective of dimension (m+1, m)
    1[prei:n]       Kronecker preinjective of dimension (n, n+1)
    H[n] E[n] P[n]  the regular class functions of weight n
    M[a,b,...]      regular class function of quasi-length type (a, b, ...)
    dp(<spec>, n)   divided power
    <a> * <b>       product

Exit codes: 0 all checks passed / command succeeded, 1 some check failed,
2 usage or parse error, 3 engine error, 4 resource budget exceeded.
"""

import argparse
import json
import sys
from concurrent.futures import ThreadPoolExecutor

from . import engine as eng
from . import reports
from .fplinalg import ResourceError
from .qpoly import NonPolynomialCountError


class CliError(Exception):
    def __init__(self, message, code):
        super().__init__(message)
        self.code = code


def parse_element(spec, engine_):
    spec = spec.strip()
    if "*" in spec:
        parts = spec.split("*")
        out = parse_element(parts[0], engine_)
        for part in parts[1:]:
            out = engine_.multiply(out, parse_element(part, engine_))
        return out
    if spec == "unit":
        return eng.unit(engine_.fam)
    if spec.startswith("dp(") and spec.endswith(")"):
        body = spec[3:-1]
        inner, _, npart = body.rpartition(",")
        try:
            n = int(npart)
        except ValueError:
            raise CliError(f"bad divided power {spec!r}", 2)
        return engine_.divided_power(parse_element(inner, engine_), n)
    if spec.startswith("1[") and spec.endswith("]"):
        body = spec[2:-1]
        if body.startswith("s"):
            return eng.simple(engine_.fam, int(body[1:]))
        if body.startswith("prep:"):
            from .reps import KroneckerClass
            return eng.char_fn(engine_.fam,
                               KroneckerClass((int(body[5:]),), (), ()))
        if body.startswith("prei:"):
            from .reps import KroneckerClass
            return eng.char_fn(engine_.fam,
                               KroneckerClass((), (), (int(body[5:]),)))
        raise CliError(f"unknown class spec {body!r}", 2)
    for head, kind in (("H[", "h"), ("E[", "e"), ("P[", "p"), ("M[", "m")):
        if spec.startswith(head) and spec.endswith("]"):
            nums = [int(x) for x in spec[2:-1].split(",") if x.strip()]
            if engine_.fam.tag == "kronecker":
                from . import kronecker_basis as kb
                ctx = kb.context()
                if kind == "h":
                    return ctx.h_fn(nums[0])
                if kind == "e":
                    return ctx.e_fn(nums[0])
                if kind == "p":
                    return ctx.p_fn(nums[0])
                return ctx.m_fn(tuple(nums))
            if engine_.fam.tag.startswith("a2tilde"):
                from . import tame_basis as tb
                ctx = tb.context()
                if kind == "m":
                    return ctx.m_fn(tuple(nums))
            raise CliError(
                f"{spec!r} is only available on the kronecker/a2tilde "
                "families", 2)
    raise CliError(f"cannot parse element spec {spec!r}", 2)


def cmd_mul(args):
    engine_ = eng.shared_engine(args.quiver, budget=args.budget)
    f = parse_element(args.f, engine_)
    g = parse_element(args.g, engine_)
    prod = engine_.multiply(f, g)
    payload = {"quiver": args.quiver, "f": args.f, "g": args.g,
               "product": prod.to_json()}
    if args.json:
        with open(args.json, "w") as fh:
            json.dump(payload, fh, indent=1)
    print(f"# {args.f} * {args.g} on {args.quiver}")
    if prod.is_zero():
        print("0")
    for cls in prod.support():
        print(f"  {prod.terms[cls]}\t{engine_.fam.class_label(cls)}")
    return 0


def cmd_basis(args):
    engine_ = eng.shared_engine(args.quiver, budget=args.budget)
    dim = tuple(int(x) for x in args.dim.split(","))
    rows = []
    if args.quiver.startswith("cyclic:"):
        from . import cyclic_basis as cb
        ctx = cb.context(int(args.quiver.split(":")[1]))
        basis = ctx.build_E_basis(dim)
        for pi in ctx.aperiodic_order(dim):
            rows.append(("E", engine_.fam.class_label(pi), basis[pi]))
    elif args.quiver == "kronecker":
        from . import kronecker_basis as kb
        ctx = kb.context()
        for cls in ctx.basis_monomials(dim):
            rows.append(("B", engine_.fam.class_label(cls),
                         ctx.basis_monomial_element(cls)))
    elif args.quiver.startswith("a2tilde"):
        from . import tame_basis as tb
        ctx = tb.context()
        for cls in ctx.bc_index_set(dim):
            rows.append(("B", engine_.fam.class_label(cls),
                         ctx.bc_element(cls)))
    else:
        raise CliError(f"unsupported quiver {args.quiver!r}", 2)
    payload = []
    print(f"# basis elements of dimension {dim} on {args.quiver}")
    if sum(dim) == 0:
        print("  unit")
        payload.append({"index": "unit", "element": eng.unit(engine_.fam).to_json()})
    for tag, label, el in rows:
        print(f"  {tag}[{label}] =")
        for cls in el.support():
            print(f"      {el.terms[cls]}\t{engine_.fam.class_label(cls)}")
        payload.append({"index": label, "element": el.to_json()})
    if args.json:
        with open(args.json, "w") as fh:
            json.dump(payload, fh, indent=1)
    return 0


def _run_checks(thunks, jobs):
    results = []
    if jobs and jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            for out in pool.map(lambda t: t(), thunks):
                results.extend(out if isinstance(out, list) else [out])
    else:
        for t in thunks:
            out = t()
            results.extend(out if isinstance(out, list) else [out])
    return results


def verify_kronecker(max_degree, jobs=1):
    from . import kronecker_basis as kb
    ctx = kb.context()
    thunks = [
        lambda: ctx.verify_structure_constants(max_degree),
        lambda: [ctx.expand_divided_monomial(kind, n)[1]
                 for kind in (1, 2, 3) for n in range(1, max_degree + 1)],
        lambda: [ctx.verify_ph_recursion(n)
                 for n in range(1, max_degree + 1)],
        lambda: [r for n in range(1, max_degree + 1)
                 for r in ctx.verify_hem(n)],
        lambda: [r for d1 in range(max_degree + 1)
                 for d2 in range(max_degree + 1)
                 for r in ctx.verify_char_fn_property((d1, d2))],
        lambda: ctx.verify_basis_products((max_degree, max_degree)),
        lambda: [r for r in ctx.verify_support_shape(1, 1)],
    ]
    return _run_checks(thunks, jobs)


def verify_cyclic(r, max_weight, jobs=1):
    from . import cyclic_basis as cb
    ctx = cb.context(r)
    alphas = []

    def rec(i, acc):
        if i == r:
            if 0 < sum(acc) <= max_weight:
                alphas.append(tuple(acc))
            return
        for x in range(max_weight + 1):
            if sum(acc) + x <= max_weight:
                rec(i + 1, acc + [x])

    rec(0, [])
    thunks = [lambda a=a: ctx.verify_suite(a) for a in sorted(alphas)]
    return _run_checks(thunks, jobs)


def verify_tame(max_degree, jobs=1):
    from . import tame_basis as tb
    ctx = tb.context()
    thunks = [
        lambda: ctx.verify_multiplicity_bookkeeping(),
        lambda: [ctx.verify_bc_unitriangular((1, 1, 1)),
                 ctx.verify_bc_linear_independence((1, 1, 1)),
                 ctx.verify_bc_linear_independence((2, 2, 2))],
        lambda: ctx.verify_bc_products(max_degree),
        lambda: [ctx.prep_prei_factorization({(0, 0, 1): 2}),
                 ctx.prep_prei_factorization({(0, 0, 1): 1, (0, 1, 1): 1}),
                 ctx.prep_prei_factorization({(1, 0, 0): 1, (1, 1, 0): 1},
                                             side="prei")],
    ]
    return _run_checks(thunks, jobs)


def verify_engine(jobs=1, seed=0, triples=10, max_total=5):
    from .acceptance import engine_soundness_checks
    return engine_soundness_checks(n_triples=triples, seed=seed,
                                   max_total=max_total)


def cmd_verify(args):
    suites = ([args.suite] if args.suite != "all"
              else ["engine", "kronecker", "cyclic", "tame"])
    results = []
    for suite in suites:
        if suite == "kronecker":
            results += verify_kronecker(args.max_degree, args.jobs)
        elif suite == "cyclic":
            results += verify_cyclic(args.r, args.max_weight, args.jobs)
        elif suite == "tame":
            results += verify_tame(args.max_degree, args.jobs)
        elif suite == "engine":
            results += verify_engine(args.jobs, seed=args.seed)
        else:
            raise CliError(f"unknown suite {suite!r}", 2)
    for line in reports.summary_lines(results):
        print(line)
    n_fail = sum(1 for r in results if r.status == "fail")
    n_skip = sum(1 for r in results if r.status == "skip")
    print(f"# {len(results)} checks, {n_fail} failed, {n_skip} skipped")
    if args.json:
        reports.dump(results, args.json)
    return 0 if n_fail == 0 else 1


def cmd_catalog(args):
    from . import tame
    delta, prep, prei, quasi = tame.root_system()
    td = tame.tube_data()
    payload = {
        "quiver": "a2tilde:1",
        "delta": list(delta),
        "prep_roots": [list(v) for v in prep if sum(v) <= args.max_total],
        "prei_roots": [list(v) for v in prei if sum(v) <= args.max_total],
        "tube": {"rank": td.rank,
                 "quasi_simple_roots": [list(v) for v in td.quasi_roots]},
    }
    text = json.dumps(payload, indent=1)
    if args.json:
        with open(args.json, "w") as fh:
            fh.write(text)
    print(text)
    return 0


def build_parser():
    ap = argparse.ArgumentParser(
        prog="hall",
        description="exact composition-algebra toolkit: products, bases and "
                    "verification suites over counting polynomials")
    ap.add_argument("--budget", type=int, default=eng.DEFAULT_BUDGET,
                    help="subspace enumeration budget")
    sub = ap.add_subparsers(dest="command", required=True)

    mul = sub.add_parser("mul", help="multiply two elements")
    mul.add_argument("-q", "--quiver", default="kronecker")
    mul.add_argument("f")
    mul.add_argument("g")
    mul.add_argument("--json")
    mul.set_defaults(fn=cmd_mul)

    basis = sub.add_parser("basis", help="print basis elements of one grade")
    basis.add_argument("-q", "--quiver", required=True)
    basis.add_argument("--dim", required=True, help="comma separated")
    basis.add_argument("--json")
    basis.set_defaults(fn=cmd_basis)

    ver = sub.add_parser("verify", help="run a verification suite")
    ver.add_argument("--suite", default="all",
                     choices=["kronecker", "cyclic", "tame", "engine", "all"])
    ver.add_argument("-q", "--quiver", default=None,
                     help="quiver for the tame suite (a2tilde)")
    ver.add_argument("--max-degree", type=int, default=2)
    ver.add_argument("--r", type=int, default=2)
    ver.add_argument("--max-weight", type=int, default=4)
    ver.add_argument("--primes", default=None,
                     help="unused override hook; nodes are chosen per check")
    ver.add_argument("--seed", type=int, default=0)
    ver.add_argument("--jobs", type=int, default=1)
    ver.add_argument("--json")
    ver.set_defaults(fn=cmd_verify)

    cat = sub.add_parser("catalog",
                         help="dump the discovered root/tube catalog")
    cat.add_argument("-q", "--quiver", default="a2tilde:1")
    cat.add_argument("--max-total", type=int, default=8)
    cat.add_argument("--json")
    cat.set_defaults(fn=cmd_catalog)
    return ap


def main(argv=None):
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        return args.fn(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except ResourceError as exc:
        print(f"resource budget exceeded: {exc}", file=sys.stderr)
        return 4
    except NonPolynomialCountError as exc:
        print(f"engine error (non-polynomial count): {exc}", file=sys.stderr)
        return 3
    except (ValueError, RuntimeError) as exc:
        print(f"engine error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())

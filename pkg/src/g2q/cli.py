"""g2q command line: verification suites, dimensions, invariants, diagram values."""

from __future__ import annotations

import argparse
import glob
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor

from . import algebra, diagrams, invariants, rep
from .report import Report
from .tensorla import decode

TARGETS = ("rep", "functor", "sqv", "pre-am", "commute", "fft", "classical", "all")
COMMUTE = ("constructions",) + tuple(invariants.SUITES)
DEFAULT_CACHE = os.path.join(os.path.expanduser("~"), ".cache", "g2q")


def _ints(text):
    try:
        return tuple(int(t) for t in text.replace(" ", "").split(",") if t)
    except ValueError:
        raise argparse.ArgumentTypeError("expected comma separated integers, got %r" % text)


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--m", type=int, default=None, help="number of bands")
    common.add_argument("--max-degree", type=int, default=4, help="largest S_q(V) degree (default 4)")
    common.add_argument("--max-total-degree", type=int, default=4, help="largest |d| in the fft check (default 4)")
    common.add_argument("--jobs", type=int, default=1, help="worker processes")
    common.add_argument("--report", metavar="PATH", help="write a JSON report")
    common.add_argument("--cache-dir", metavar="DIR", help="kernel cache directory")

    p = argparse.ArgumentParser(prog="g2q", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", parents=[common], help="run verification suites")
    v.add_argument("target", choices=TARGETS)
    v.add_argument("--suite", choices=COMMUTE, action="append", help="commute: run only these lemmas")

    d = sub.add_parser("dim", parents=[common], help="dimensions")
    d.add_argument("kind", choices=("sqv", "invariants", "component"))
    d.add_argument("--n", type=int, help="degree (sqv) or tensor power (invariants)")
    d.add_argument("--d", type=_ints, help="multidegree for component, e.g. 1,1,1,1")

    i = sub.add_parser("invariant", parents=[common], help="build an invariant of A_m(V)")
    i.add_argument("kind", choices=("phi", "psi", "upsilon", "theta"))
    i.add_argument("--indices", type=_ints, required=True)
    i.add_argument("--print", action="store_true", dest="show", help="print the element in full")

    e = sub.add_parser("eval", parents=[common], help="evaluate a diagram")
    e.add_argument("--diagram", required=True)

    c = sub.add_parser("cache", parents=[common], help="build or clear the kernel cache")
    c.add_argument("action", choices=("build", "clear"))
    return p


# ---------------------------------------------------------------------------
# suites


def _suite_jobs(args):
    """(name, callable, kwargs) for every suite the target asks for; all picklable."""
    t = args.target
    jobs = []
    if t in ("rep", "all"):
        jobs += [("rep", rep.rep_suite, {}), ("structure", rep.gamma_p_suite, {})]
    if t in ("functor", "all"):
        jobs += [("functor", diagrams.relation_suite, {}), ("cycle-reduction", diagrams.cycle_reduction_suite, {})]
    if t in ("sqv", "all"):
        jobs.append(("sqv", algebra.verify_sqv, {"max_degree": args.max_degree}))
    if t in ("pre-am", "all"):
        jobs.append(("pre-am", algebra.verify_prop_preAm, {}))
    if t in ("commute", "all"):
        for s in args.suite or COMMUTE:
            if s == "constructions":
                jobs.append((s, invariants.verify_constructions, {"m": args.m or 4}))
            else:
                jobs.append((s, invariants.verify_commutation, {"suite_id": s, "m": args.m}))
    if t in ("fft", "all"):
        ms = [args.m] if args.m else [1, 2, 3]
        for m in ms:
            jobs.append(("fft-m%d" % m, invariants.fft_span_check, {"m": m, "dmax": args.max_total_degree}))
        if not args.m:
            jobs.append((
                "fft-m4",
                invariants.fft_span_check,
                {"m": 4, "dmax": 0, "extra": [(1, 1, 1, 1)], "space_dims": [(2, 1), (3, 1), (4, 4), (5, 10)]},
            ))
    if t in ("classical", "all"):
        jobs.append(("classical", algebra.classical_limit_check, {"max_n": min(args.max_degree, 3)}))
    return jobs


def _run_job(job, cache_dir):
    name, fn, kwargs = job
    if cache_dir:
        algebra.set_cache_dir(cache_dir)
    return name, fn(**kwargs)


def _print_report(r, out):
    print(r.summary(), file=out)
    for c in r.failures():
        w = c.witness or ""
        print("  FAIL %s: %s" % (c.id, w if len(w) <= 300 else w[:300] + " ..."), file=out)


def cmd_verify(args, out):
    jobs = _suite_jobs(args)
    if args.jobs > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(_run_job, jobs, [args.cache_dir] * len(jobs)))
    else:
        results = [_run_job(j, args.cache_dir) for j in jobs]
    env = {"max_degree": args.max_degree, "m": args.m, "cache_dir": args.cache_dir}
    total = Report("verify-" + args.target, environment=env)
    for name, r in results:
        _print_report(r, out)
        total.extend(r, prefix=name + "/")
    print(total.summary(), file=out)
    _write_report(args, total)
    return 0 if total.passed else 1


def _write_report(args, report):
    if not args.report:
        return
    with open(args.report, "w") as fh:
        json.dump(report.to_json(), fh, indent=2, sort_keys=True)
        fh.write("\n")


# ---------------------------------------------------------------------------
# queries


def cmd_dim(args, out):
    if args.kind == "sqv":
        if args.n is None:
            raise UsageError("dim sqv needs --n")
        print(algebra.sqv_dim(args.n), file=out)
    elif args.kind == "invariants":
        if args.n is None:
            raise UsageError("dim invariants needs --n")
        print(rep.invariant_space(args.n).dim, file=out)
    else:
        if args.d is None:
            raise UsageError("dim component needs --d")
        m = args.m or len(args.d)
        if m != len(args.d):
            raise UsageError("--d has %d entries but --m is %d" % (len(args.d), m))
        print(invariants.invariant_dim(m, args.d), file=out)
    return 0


_ARITY = {"phi": 2, "psi": 3, "upsilon": 4, "theta": 5}


def cmd_invariant(args, out):
    idx = args.indices
    if len(idx) != _ARITY[args.kind]:
        raise UsageError("%s takes %d indices, got %d" % (args.kind, _ARITY[args.kind], len(idx)))
    m = args.m or max(idx)
    fn = getattr(invariants, args.kind)
    try:
        val = fn(*idx, m)
    except invariants.InvarianceError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 1
    except ValueError as exc:
        raise UsageError(str(exc))
    x = val.elem
    print("%s in A_%d(V): %d terms, multidegrees %s" % (val.source, m, len(x.terms()), sorted(x.degrees())), file=out)
    if args.show:
        print(x, file=out)
    return 0


def cmd_eval(args, out):
    try:
        f = diagrams.evaluate(args.diagram)
    except (diagrams.DiagramSyntaxError, diagrams.WidthMismatch) as exc:
        raise UsageError(str(exc))
    if f.in_legs == 0 and f.out_legs == 0:
        print(f.scalar_value(), file=out)
        return 0
    print("map V^%d -> V^%d" % (f.in_legs, f.out_legs), file=out)
    for i in sorted(f.cols):
        for o in sorted(f.cols[i]):
            print("%s -> %s: %s" % (list(decode(i, f.in_legs)), list(decode(o, f.out_legs)), f.cols[i][o]), file=out)
    return 0


def cmd_cache(args, out):
    d = args.cache_dir or DEFAULT_CACHE
    if args.action == "clear":
        files = sorted(glob.glob(os.path.join(d, "kernel-n*.txt")))
        for p in files:
            os.remove(p)
        print("removed %d files from %s" % (len(files), d), file=out)
        return 0
    algebra.set_cache_dir(d)
    for n in range(args.max_degree + 1):
        algebra.save_kernel(n)
        data = algebra.degree_data(n)
        print("degree %d: dim %d" % (n, data.dim), file=out)
    return 0


class UsageError(Exception):
    pass


COMMANDS = {"verify": cmd_verify, "dim": cmd_dim, "invariant": cmd_invariant, "eval": cmd_eval, "cache": cmd_cache}


def run(argv=None, out=None):
    """Run one command; returns 0 on success, 1 on failed checks, 2 on usage errors."""
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 2
    if args.jobs < 1:
        print("g2q: error: --jobs must be positive", file=sys.stderr)
        return 2
    if args.cache_dir and args.command != "cache":
        algebra.set_cache_dir(args.cache_dir)
    try:
        return COMMANDS[args.command](args, out)
    except UsageError as exc:
        print("g2q: error: %s" % exc, file=sys.stderr)
        return 2


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()

"""Command-line front end.

Exit codes: 0 when every requested check passes, 1 when a bundled claim
fails verification, 2 for usage errors (unknown names, malformed specs,
bad files).  ``--format json`` emits canonical JSON: keys sorted,
rationals rendered as "p/q" strings, so reports round-trip byte for
byte through a parse/re-render cycle.
"""

import argparse
import json
import sys
from fractions import Fraction

import numpy as np

from . import catalog, geodesic, quotients, solvers
from .algebra import load_algebra, to_definition
from .integrals import QuotientInduced, parse_integral
from .poisson import PoissonEngine, verify_iso_homomorphism

EXIT_OK = 0
EXIT_CLAIM_FAILED = 1
EXIT_USAGE = 2

DRIFT_TOL = 1e-8


def canonical_json(payload):
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"


def _emit(args, payload, text_lines):
    if args.format == "json":
        sys.stdout.write(canonical_json(payload))
    else:
        for line in text_lines:
            print(line)


def _frac_str(x):
    return str(Fraction(x))


def _matrix_json(m):
    return [[_frac_str(c) for c in row] for row in m]


class _Target:
    """Either a catalog entry or a bare algebra loaded from a file."""

    def __init__(self, entry=None, alg=None, label=""):
        self.entry = entry
        self.alg = entry.descriptor if entry is not None else alg
        self.label = label

    def parse(self, spec):
        if self.entry is not None:
            return self.entry.parse(spec)
        return parse_integral(self.alg, spec)


def _resolve(args):
    if getattr(args, "file", None):
        return _Target(alg=load_algebra(args.file), label=args.file)
    if not getattr(args, "name", None):
        raise ValueError("an algebra name or --file is required")
    entry = catalog.get(args.name)
    return _Target(entry=entry, label=entry.name)


# -- verbs ---------------------------------------------------------------

def cmd_catalog(args):
    if args.name:
        entry = catalog.get(args.name)
        payload = {
            "name": entry.name,
            "definition": to_definition(entry.descriptor),
            "step": entry.descriptor.analyze().step,
            "complete_set": [f.spec_string() for f in entry.complete_set or []],
            "basis_aliases": dict(sorted(entry.basis_aliases.items())),
            "lattices": {k: [[_frac_str(c) for c in g] for g in v.generators]
                         for k, v in entry.lattices.items()},
            "notes": entry.notes,
        }
        lines = ["%s  (dim %d, step %d)" % (entry.name, entry.descriptor.dim,
                                            payload["step"])]
        if payload["complete_set"]:
            lines.append("complete set: " + ", ".join(payload["complete_set"]))
        else:
            lines.append("no complete set claimed")
        for k in entry.lattices:
            lines.append("lattice: %s" % k)
        if entry.notes:
            lines.append(entry.notes)
        _emit(args, payload, lines)
        return EXIT_OK
    rows = []
    for name in catalog.names():
        entry = catalog.get(name)
        rows.append({"name": name, "dim": entry.descriptor.dim,
                     "step": entry.descriptor.analyze().step,
                     "members": len(entry.complete_set or [])})
    lines = ["%-12s dim %d  step %d  set %d"
             % (r["name"], r["dim"], r["step"], r["members"]) for r in rows]
    _emit(args, {"entries": rows}, lines)
    return EXIT_OK


def cmd_check(args):
    report = catalog.verify_entry(args.name, nsamples=args.samples)
    payload = {"name": report.name, "ok": report.ok,
               "checks": [{"label": lbl, "ok": ok, "detail": det}
                          for lbl, ok, det in report.checks]}
    lines = ["%s:" % report.name] + ["  " + l for l in report.lines()]
    lines.append("result: %s" % ("ok" if report.ok else "CLAIMS FAILED"))
    _emit(args, payload, lines)
    return EXIT_OK if report.ok else EXIT_CLAIM_FAILED


def cmd_derivations(args):
    target = _resolve(args)
    basis = solvers.skew_derivations(target.alg)
    payload = {"algebra": target.label, "dimension": len(basis),
               "basis": [_matrix_json(m) for m in basis]}
    lines = ["skew-symmetric derivations: dimension %d" % len(basis)]
    for m in basis:
        lines.append("  " + "; ".join(
            ",".join(_frac_str(c) for c in row) for row in m))
    _emit(args, payload, lines)
    return EXIT_OK


def cmd_killing2(args):
    target = _resolve(args)
    basis = solvers.killing2_tensors(target.alg)
    span_ok = solvers.killing2_same_span(target.alg)
    payload = {"algebra": target.label, "dimension": len(basis),
               "structured_span_matches": span_ok,
               "basis": [_matrix_json(m) for m in basis]}
    lines = ["symmetric Killing 2-tensors: dimension %d" % len(basis),
             "structured solver spans the same space: %s" % span_ok]
    for m in basis:
        lines.append("  " + "; ".join(
            ",".join(_frac_str(c) for c in row) for row in m))
    _emit(args, payload, lines)
    return EXIT_OK if span_ok else EXIT_CLAIM_FAILED


def cmd_bracket(args):
    target = _resolve(args)
    f = target.parse(args.f)
    g = target.parse(args.g)
    engine = target.entry.engine() if target.entry else PoissonEngine(target.alg)
    cands = target.entry.candidates() if target.entry else None
    res = engine.bracket(f, g, candidates=cands)
    payload = {"algebra": target.label, "f": f.spec_string(),
               "g": g.spec_string(), "bracket": str(res.poly),
               "is_zero": res.is_zero, "matches": res.matched_integral}
    lines = ["{%s, %s} = %s" % (f.spec_string(), g.spec_string(), res.poly)]
    if res.is_zero:
        lines.append("= 0")
    elif res.matched_integral:
        lines.append("= %s" % res.matched_integral)
    _emit(args, payload, lines)
    return EXIT_OK


def cmd_involution(args):
    target = _resolve(args)
    if args.integrals:
        fs = [target.parse(s) for s in args.integrals]
    elif target.entry and target.entry.complete_set:
        fs = list(target.entry.complete_set)
    else:
        raise ValueError("no integrals given and no bundled set available")
    engine = target.entry.engine() if target.entry else PoissonEngine(target.alg)
    pairs = []
    bad = 0
    for i, j, res in engine.involution_table(fs):
        pairs.append({"f": fs[i].spec_string(), "g": fs[j].spec_string(),
                      "is_zero": res.is_zero, "bracket": str(res.poly)})
        if not res.is_zero:
            bad += 1
    payload = {"algebra": target.label, "pairs": pairs,
               "involutive": bad == 0}
    lines = []
    for p in pairs:
        lines.append("{%s, %s} = %s"
                     % (p["f"], p["g"], "0" if p["is_zero"] else p["bracket"]))
    lines.append("involutive: %s" % (bad == 0))
    _emit(args, payload, lines)
    return EXIT_OK if bad == 0 else EXIT_CLAIM_FAILED


def cmd_independence(args):
    target = _resolve(args)
    if args.integrals:
        fs = [target.parse(s) for s in args.integrals]
    elif target.entry and target.entry.complete_set:
        fs = list(target.entry.complete_set)
    else:
        raise ValueError("no integrals given and no bundled set available")
    pred = target.entry.dense_predicate if target.entry else None
    rep = solvers.independence_scan(target.alg, fs, predicate=pred,
                                    nsamples=args.samples, seed=args.seed,
                                    exact=args.exact)
    ok = rep.accepted > 0 and rep.fraction >= catalog.INDEPENDENCE_FRACTION
    payload = {"algebra": target.label, "target_rank": rep.target_rank,
               "accepted": rep.accepted, "full_rank": rep.full_rank,
               "fraction": rep.fraction, "exact": bool(args.exact),
               "predicate": pred.description if pred else None,
               "ok": ok}
    lines = ["rank %d on %d of %d accepted samples (%.1f%%)"
             % (rep.target_rank, rep.full_rank, rep.accepted,
                100.0 * rep.fraction)]
    if pred:
        lines.append("dense predicate: %s" % pred.description)
    _emit(args, payload, lines)
    return EXIT_OK if ok else EXIT_CLAIM_FAILED


def _parse_coords(text, n, what):
    parts = [p for p in text.split(",") if p.strip()]
    if len(parts) != n:
        raise ValueError("%s needs %d comma-separated values" % (what, n))
    return [float(Fraction(p.strip())) for p in parts]


def cmd_geodesic(args):
    target = _resolve(args)
    n = target.alg.dim
    rng = np.random.default_rng(args.seed)
    if args.w0:
        w0 = np.array([_parse_coords(args.w0, n, "--w0")])
    else:
        w0 = rng.uniform(-1.0, 1.0, (1, n))
    if args.y0:
        y0 = np.array([_parse_coords(args.y0, n, "--y0")])
    else:
        y0 = rng.uniform(-1.0, 1.0, (1, n))
    if args.integrals:
        fs = [target.parse(s) for s in args.integrals]
    elif target.entry and target.entry.complete_set:
        fs = list(target.entry.complete_set)
    else:
        fs = [target.parse("E")]
    traj = geodesic.integrate(target.alg, w0, y0, dt=args.dt, t_end=args.t)
    if args.format == "csv":
        geodesic.write_csv(traj, sys.stdout)
        return EXIT_OK
    report = geodesic.conservation_report(fs, traj)
    worst = max(d for _, d in report) if report else 0.0
    payload = {"algebra": target.label, "dt": args.dt, "t": args.t,
               "drift": {label: drift for label, drift in report},
               "max_drift": worst, "tolerance": args.tol,
               "ok": worst < args.tol}
    lines = ["%-14s drift %.3e" % (label, drift) for label, drift in report]
    lines.append("max drift %.3e (tolerance %.1e)" % (worst, args.tol))
    _emit(args, payload, lines)
    return EXIT_OK if worst < args.tol else EXIT_CLAIM_FAILED


def cmd_quotient(args):
    entry = catalog.get(args.name)
    if args.lattice not in entry.lattices:
        raise ValueError("entry %s has no lattice %r (available: %s)"
                         % (entry.name, args.lattice,
                            ", ".join(sorted(entry.lattices)) or "none"))
    lat = entry.lattices[args.lattice]
    if args.integrals:
        fs = [entry.parse(s) for s in args.integrals]
    else:
        fs = list(entry.quotient_functions.get(args.lattice, []))
    if not fs:
        raise ValueError("no quotient functions stored for %s; pass specs"
                         % args.lattice)
    results = []
    worst = 0.0
    for f in fs:
        dev, acc = quotients.invariance_check(entry.descriptor, lat, f,
                                              nsamples=args.samples,
                                              seed=args.seed)
        worst = max(worst, dev)
        shifts = {}
        if isinstance(f, QuotientInduced):
            for g in lat.generators:
                c = quotients.shift_multiplier(entry.descriptor, g,
                                               f.num, f.den)
                key = "(" + ",".join(_frac_str(x) for x in g) + ")"
                shifts[key] = None if c is None else _frac_str(c)
        results.append({"integral": f.spec_string(), "max_deviation": dev,
                        "accepted": acc, "shift_multipliers": shifts})
    payload = {"algebra": entry.name, "lattice": args.lattice,
               "results": results, "max_deviation": worst,
               "ok": worst < catalog.INVARIANCE_TOL}
    lines = []
    for r in results:
        lines.append("%s: max deviation %.3e on %d samples"
                     % (r["integral"], r["max_deviation"], r["accepted"]))
        for g, c in sorted(r["shift_multipliers"].items()):
            lines.append("  generator %s shifts numerator by %s * denominator"
                         % (g, c))
    lines.append("invariant: %s" % (worst < catalog.INVARIANCE_TOL))
    _emit(args, payload, lines)
    return EXIT_OK if worst < catalog.INVARIANCE_TOL else EXIT_CLAIM_FAILED


def cmd_verify(args):
    names = args.names or catalog.names()
    failed = []
    summaries = []
    lines = []
    for name in names:
        entry = catalog.get(name)
        report = catalog.verify_entry(entry, nsamples=args.samples)
        checks = [{"label": lbl, "ok": ok, "detail": det}
                  for lbl, ok, det in report.checks]
        iso_ok = None
        if not args.skip_iso:
            iso = verify_iso_homomorphism(entry.descriptor,
                                          engine=entry.engine())
            iso_ok = iso.ok and iso.injectivity_ok
            checks.append({"label": "iso-homomorphism", "ok": iso_ok,
                           "detail": "%d pairs checked" % iso.checked_pairs})
        entry_ok = report.ok and (iso_ok is not False)
        if not entry_ok:
            failed.append(name)
        summaries.append({"name": name, "ok": entry_ok, "checks": checks})
        lines.append("%s: %s" % (name, "ok" if entry_ok else "CLAIMS FAILED"))
        for c in checks:
            if not c["ok"]:
                lines.append("  %-26s FAIL  %s" % (c["label"], c["detail"]))
    lines.append("%d/%d entries verified; failing: %s"
                 % (len(names) - len(failed), len(names),
                    ", ".join(failed) or "none"))
    payload = {"entries": summaries, "failed": failed,
               "ok": not failed}
    _emit(args, payload, lines)
    return EXIT_OK if not failed else EXIT_CLAIM_FAILED


# -- argument plumbing ---------------------------------------------------

def _add_format(p, extra=()):
    p.add_argument("--format", choices=["text", "json"] + list(extra),
                   default="text")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="nilflow",
        description="verification toolkit for geodesic-flow first integrals "
                    "on nilpotent Lie groups")
    sub = parser.add_subparsers(dest="verb", required=True)

    p = sub.add_parser("catalog", help="list bundled algebras")
    p.add_argument("name", nargs="?")
    _add_format(p)
    p.set_defaults(fn=cmd_catalog)

    p = sub.add_parser("check", help="verify one bundled entry")
    p.add_argument("name")
    p.add_argument("--samples", type=int, default=None)
    _add_format(p)
    p.set_defaults(fn=cmd_check)

    for verb, fn in (("derivations", cmd_derivations),
                     ("killing2", cmd_killing2)):
        p = sub.add_parser(verb, help="solve for the %s basis" % verb)
        p.add_argument("name", nargs="?")
        p.add_argument("--file", help="algebra definition file")
        _add_format(p)
        p.set_defaults(fn=fn)

    p = sub.add_parser("bracket", help="Poisson bracket of two integrals")
    p.add_argument("name")
    p.add_argument("f")
    p.add_argument("g")
    _add_format(p)
    p.set_defaults(fn=cmd_bracket)

    p = sub.add_parser("involution", help="pairwise brackets of a set")
    p.add_argument("name")
    p.add_argument("integrals", nargs="*")
    _add_format(p)
    p.set_defaults(fn=cmd_involution)

    p = sub.add_parser("independence", help="rank scan of gradients")
    p.add_argument("name")
    p.add_argument("integrals", nargs="*")
    p.add_argument("--samples", type=int, default=None)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--exact", action="store_true")
    _add_format(p)
    p.set_defaults(fn=cmd_independence)

    p = sub.add_parser("geodesic", help="integrate the flow, report drift")
    p.add_argument("name")
    p.add_argument("--w0", help="comma-separated initial configuration")
    p.add_argument("--y0", help="comma-separated initial velocity")
    p.add_argument("--dt", type=float, default=1e-3)
    p.add_argument("--t", type=float, default=10.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tol", type=float, default=DRIFT_TOL)
    p.add_argument("--integrals", nargs="*")
    _add_format(p, extra=("csv",))
    p.set_defaults(fn=cmd_geodesic)

    p = sub.add_parser("quotient", help="lattice invariance of induced maps")
    p.add_argument("name")
    p.add_argument("lattice")
    p.add_argument("integrals", nargs="*")
    p.add_argument("--samples", type=int, default=None)
    p.add_argument("--seed", type=int, default=0)
    _add_format(p)
    p.set_defaults(fn=cmd_quotient)

    p = sub.add_parser("verify",
                       help="re-run every bundled claim across the catalog")
    p.add_argument("names", nargs="*")
    p.add_argument("--samples", type=int, default=None)
    p.add_argument("--skip-iso", action="store_true")
    _add_format(p)
    p.set_defaults(fn=cmd_verify)

    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except (ValueError, KeyError, OSError) as exc:
        print("error: %s" % exc, file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())

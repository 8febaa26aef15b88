"""Command-line interface.

Subcommands: expdim, certify, reduce, bound, sweep.  Exit codes: 0 when the
question was decided (nonspecial-certified / special-exact), 2 when the
outcome is suspected/inconclusive, 1 on usage or configuration errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor

from . import elliptic, gfmat, interp, linsys
from .elliptic import InapplicableError
from .gfmat import DEFAULT_PRIME
from .linsys import GENERIC, ON_CUBIC, FatPointSystem
from .store import CertificateStore, record_key

THREADS_ENV = "FATPOINTS_THREADS"
DEFAULT_MAX_MATRIX_ENTRIES = 4_000_000

EXIT_DECIDED = 0
EXIT_USAGE = 1
EXIT_UNDECIDED = 2


class UsageError(Exception):
    pass


def parse_mults(text: str):
    """Multiplicity vector syntax: comma list of M or MxK blocks, e.g. 4x10 or 3,2x4,1."""
    if not text:
        return ()
    out = []
    for part in text.split(","):
        part = part.strip()
        if "x" in part:
            m, k = part.split("x", 1)
            out.extend([int(m)] * int(k))
        elif part:
            out.append(int(part))
    return tuple(out)


def parse_range(text: str):
    """A single value 'v' or an inclusive range 'lo:hi'."""
    if ":" in text:
        lo, hi = text.split(":", 1)
        lo, hi = int(lo), int(hi)
        if hi < lo:
            return []
        return list(range(lo, hi + 1))
    return [int(text)]


def _system_dict(s: FatPointSystem) -> dict:
    return {"d": s.d, "mults": list(s.mults), "tags": list(s.tags)}


def _config_dict(args) -> dict:
    return {"prime": str(args.prime), "seed": str(args.seed),
            "trials": args.trials}


def _check_runconfig(args, max_degree: int) -> None:
    if not gfmat.is_prime(args.prime):
        raise UsageError(f"--prime {args.prime} is not prime")
    if args.prime <= max(2 * max_degree, 3):
        raise UsageError(f"--prime {args.prime} too small for degree {max_degree}")


def _emit(obj: dict, lines, fmt: str) -> None:
    if fmt == "json":
        print(json.dumps(obj, sort_keys=True, separators=(",", ":")))
    else:
        for line in lines:
            print(line)


def _store(args):
    return CertificateStore(args.store) if args.store else None


def _persist(args, command: str, s: FatPointSystem, cert):
    st = _store(args)
    if st is not None:
        st.put(command, _system_dict(s), _config_dict(args), cert)


def cmd_expdim(args) -> int:
    mults = parse_mults(args.mults)
    s = FatPointSystem(args.d, mults)
    inv = linsys.invariants(s)
    obj = {"d": s.d, "mults": list(mults), "chi": inv.chi, "v": inv.v,
           "monomials": inv.monomials, "conditions": inv.conditions}
    _emit(obj, [f"system        {s}",
                f"chi           {inv.chi}",
                f"expected dim  {inv.v}",
                f"monomials     {inv.monomials}",
                f"conditions    {inv.conditions}"], args.format)
    return EXIT_DECIDED


def cmd_certify(args) -> int:
    mults = parse_mults(args.mults)
    tag = ON_CUBIC if args.placement == "cubic" else GENERIC
    s = FatPointSystem(args.d, mults, (tag,) * len(mults))
    _check_runconfig(args, max(args.d, 0))
    cert = interp.certify(s, trials=args.trials, p=args.prime, seed=args.seed)
    _persist(args, "certify", s, cert)
    _emit(cert.to_dict(),
          [f"system   {s}  ({args.placement})",
           f"verdict  {cert.verdict}",
           f"method   {cert.method}",
           f"chi      {cert.chi}",
           f"h0       {cert.h0}",
           f"h1       {cert.h1}"], args.format)
    return EXIT_DECIDED if cert.decided else EXIT_UNDECIDED


def cmd_reduce(args) -> int:
    s = linsys.homogeneous_system(args.d, args.n, args.m)
    bound = elliptic.mu_bound(args.d, args.n, args.m)
    mu = args.mu if args.mu is not None else max(int(bound), 0) if bound > 0 else 0
    plan = elliptic.reduce(s, args.n, mu)
    integral = bound.denominator == 1
    red = plan.reduced
    warn = None
    exact = elliptic._exact_h0(red)
    if exact is not None:
        h1 = exact - plan.chi_reduced
        if exact > 0 and h1 > 0:
            warn = f"reduced system is special (h0 = h1 = {exact})" if exact == h1 \
                else f"reduced system is special (h0 = {exact}, h1 = {h1})"
    obj = {"d": args.d, "n": args.n, "m": args.m, "mu": mu,
           "mu_bound": str(bound), "mu_bound_integral": integral,
           "reduced": _system_dict(red),
           "chi_original": plan.chi_original, "chi_reduced": plan.chi_reduced,
           "chi_S": plan.chi_S, "hypothesis": plan.hypothesis,
           "warning": warn}
    lines = [f"original      {s}",
             f"mu            {mu}  (bound {bound}, integral: {integral})",
             f"reduced       {red}  (first {plan.k} points on the cubic)",
             f"chi original  {plan.chi_original}",
             f"chi reduced   {plan.chi_reduced}",
             f"chi ruled     {plan.chi_S}",
             f"hypothesis    {plan.hypothesis}"]
    if warn:
        lines.append(f"warning       {warn}")
    _emit(obj, lines, args.format)
    return EXIT_DECIDED


def _bound_for(d: int, n: int, m: int, args):
    """Best h0 upper bound over all admissible integral twists.

    Scans mu from the top of the admissible range down, pruning twists whose
    chi already rules out an improvement, and stops once the bound reaches
    the unconditional floor max(chi, 0).
    """
    top = elliptic.mu_bound(d, n, m)
    if top < 0:
        return None, None
    s = linsys.homogeneous_system(d, n, m)
    floor = max(linsys.chi(s), 0)
    best = None
    best_mu = None
    for mu in range(int(top), -1, -1):
        plan = elliptic.reduce(s, n, mu)
        if not plan.hypothesis:
            continue
        # any bound from this twist is at least max(chi_reduced, 0)
        if best is not None and max(plan.chi_reduced, 0) >= best:
            continue
        red = plan.reduced
        if elliptic._exact_h0(red) is None:
            size = (linsys.conditions_count(linsys.effective_part(red))
                    * linsys.monomial_count(red.d))
            if size > args.max_matrix_entries:
                continue
        cert = elliptic.theorem_upper_bound(plan, trials=args.trials,
                                            p=args.prime, seed=args.seed)
        if best is None or cert.h0_bound < best:
            best, best_mu = cert.h0_bound, mu
        if best == floor:
            break
    return best, best_mu


def cmd_bound(args) -> int:
    _check_runconfig(args, max(args.d, 0))
    best, best_mu = _bound_for(args.d, args.n, args.m, args)
    s = linsys.homogeneous_system(args.d, args.n, args.m)
    if best is None:
        _emit({"d": args.d, "n": args.n, "m": args.m, "h0_bound": None,
               "status": "unbounded-by-this-method"},
              ["unbounded-by-this-method"], args.format)
        return EXIT_UNDECIDED
    _emit({"d": args.d, "n": args.n, "m": args.m, "h0_bound": best,
           "mu": best_mu, "chi": linsys.chi(s)},
          [f"system    {s}",
           f"h0 bound  {best}  (at twist mu = {best_mu})"], args.format)
    return EXIT_DECIDED


def _mu_info(d: int, n: int, m: int):
    """(printable bound, usable-as-integer flag); n <= 9 has no bound."""
    if n <= 9:
        return "", False
    mu = elliptic.mu_bound(d, n, m)
    return str(mu), mu.denominator == 1 and mu > 0


def _sweep_item(d: int, n: int, m: int, args):
    s = linsys.homogeneous_system(d, n, m)
    v = linsys.expected_dim(s)
    mu, integral = _mu_info(d, n, m)
    try:
        if integral:
            cert = elliptic.corollary_nonspecial(d, n, m, trials=args.trials,
                                                 p=args.prime, seed=args.seed)
        else:
            size = linsys.conditions_count(s) * linsys.monomial_count(d)
            if size > args.max_matrix_entries:
                return {"d": d, "n": n, "m": m, "v": v, "mu": mu,
                        "integral": integral, "verdict": "skipped-too-large",
                        "h0": None, "cert": None}
            cert = interp.certify(s, trials=args.trials, p=args.prime,
                                  seed=args.seed)
    except Exception as e:  # per-item failures are recorded, not fatal
        return {"d": d, "n": n, "m": m, "v": v, "mu": mu,
                "integral": integral, "verdict": f"error: {e}", "h0": None,
                "cert": None}
    return {"d": d, "n": n, "m": m, "v": v, "mu": mu,
            "integral": integral, "verdict": cert.verdict,
            "h0": cert.h0 if cert.h0 is not None else cert.h0_bound,
            "cert": cert}


def cmd_sweep(args) -> int:
    ds, ns, ms = parse_range(args.d_range), parse_range(args.n_range), parse_range(args.m_range)
    items = [(d, n, m) for d in ds for n in ns for m in ms]
    if items:
        _check_runconfig(args, max(d for d, _, _ in items))
    st = _store(args)
    results = [None] * len(items)
    todo = []
    for i, (d, n, m) in enumerate(items):
        s = linsys.homogeneous_system(d, n, m)
        key = record_key("sweep", _system_dict(s), _config_dict(args))
        cert = st.lookup_certificate(key) if st is not None else None
        if cert is not None:
            mu, integral = _mu_info(d, n, m)
            results[i] = {"d": d, "n": n, "m": m, "v": linsys.expected_dim(s),
                          "mu": mu,
                          "integral": integral,
                          "verdict": cert.verdict,
                          "h0": cert.h0 if cert.h0 is not None else cert.h0_bound,
                          "cert": None}
        else:
            todo.append(i)

    def run(i):
        d, n, m = items[i]
        return _sweep_item(d, n, m, args)

    if args.threads > 1 and len(todo) > 1:
        with ThreadPoolExecutor(max_workers=args.threads) as ex:
            for i, res in zip(todo, ex.map(run, todo)):
                results[i] = res
    else:
        for i in todo:
            results[i] = run(i)

    # single-writer persistence, input order
    if st is not None:
        for i in todo:
            res = results[i]
            if res and res["cert"] is not None:
                d, n, m = items[i]
                s = linsys.homogeneous_system(d, n, m)
                st.put("sweep", _system_dict(s), _config_dict(args), res["cert"])

    header = "d,n,m,v,mu,integral,verdict,h0"
    rows = []
    for res in results:
        rows.append("{d},{n},{m},{v},{mu},{integral},{verdict},{h0}".format(
            **{k: ("" if res[k] is None else res[k]) for k in
               ("d", "n", "m", "v", "mu", "integral", "verdict", "h0")}))
    if args.format == "json":
        out = [{k: r[k] for k in ("d", "n", "m", "v", "mu", "integral",
                                  "verdict", "h0")} for r in results]
        print(json.dumps(out, sort_keys=True, separators=(",", ":")))
    else:
        print(header)
        for row in rows:
            print(row)
    return EXIT_DECIDED


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--prime", type=int, default=DEFAULT_PRIME)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--trials", type=int, default=interp.DEFAULT_TRIALS)
    common.add_argument("--threads", type=int,
                        default=int(os.environ.get(THREADS_ENV, "1")))
    common.add_argument("--store", type=str, default=None,
                        help="newline-delimited JSON certificate store")
    common.add_argument("--max-matrix-entries", type=int,
                        default=DEFAULT_MAX_MATRIX_ENTRIES)
    common.add_argument("--format", choices=("table", "json", "csv"),
                        default="table")

    ap = argparse.ArgumentParser(
        prog="fatpoints",
        description="dimension bounds and certificates for plane-curve "
                    "linear systems with multiple base points")
    sub = ap.add_subparsers(dest="command", required=True)

    def add_parser(name, **kw):
        return sub.add_parser(name, parents=[common], **kw)

    p = add_parser("expdim", help="chi, expected dimension, counts")
    p.add_argument("d", type=int)
    p.add_argument("mults", nargs="?", default="")
    p.set_defaults(func=cmd_expdim)

    p = add_parser("certify", help="certify (non)speciality by sampling")
    p.add_argument("d", type=int)
    p.add_argument("mults")
    p.add_argument("--placement", choices=("generic", "cubic"),
                   default="generic")
    p.set_defaults(func=cmd_certify)

    p = add_parser("reduce", help="specialize points to a cubic and twist")
    p.add_argument("d", type=int)
    p.add_argument("n", type=int)
    p.add_argument("m", type=int)
    p.add_argument("--mu", type=int, default=None)
    p.set_defaults(func=cmd_reduce)

    p = add_parser("bound", help="best h0 upper bound over twists")
    p.add_argument("d", type=int)
    p.add_argument("n", type=int)
    p.add_argument("m", type=int)
    p.set_defaults(func=cmd_bound)

    p = add_parser("sweep", help="batch run over (d, n, m) ranges")
    p.add_argument("d_range")
    p.add_argument("n_range")
    p.add_argument("m_range")
    p.set_defaults(func=cmd_sweep)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code not in (0, None) else 0
    try:
        return args.func(args)
    except (UsageError, ValueError, InapplicableError,
            elliptic.ReductionError, interp.ConfigError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())

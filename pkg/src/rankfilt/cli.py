"""Command-line front end: summand tables, polynomials, cubes, reports.

Exit codes, so CI can tell math findings from plumbing failures:

    0   success, all requested verifications passed
    2   usage error (bad arguments or unparsable descriptor)
    3   engine mismatch: Molien and Cartan disagree (a math bug signal)
    4   a verification verdict failed (the report is still emitted)
    5   resource limit hit (the offending degree is reported)

Output is deterministic: JSON is emitted with sorted keys, and polynomial
maps are keyed by degree in sorted order.  A persistent JSON result cache
can be pointed at with ``--cache`` or the RANKFILT_CACHE environment
variable; a corrupt cache is ignored with a warning, never fatal.
Defaults (cutoffs, the cube size guard, the basis budget) can be set in a
JSON config file via ``--config`` or RANKFILT_CONFIG.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time

from . import cartan, combinat, decomp, spectra
from .combinat import ContractViolation
from .orbitspace import DescriptorError, NotTorusCommensurable, parse_descriptor
from .poly import Poly

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_ENGINE_MISMATCH = 3
EXIT_VERIFICATION = 4
EXIT_RESOURCE = 5

ENGINE_VERSION = "rankfilt-0.1.0"

CONFIG_DEFAULTS = {
    "default_cutoff": None,  # None: per-descriptor default inside the engine
    "cutoff_cap": cartan.DEFAULT_CUTOFF_CAP,
    "basis_budget": cartan.DEFAULT_BASIS_BUDGET,
    "m_max": spectra.DEFAULT_M_MAX,
    "k_cap": spectra.DEFAULT_K_CAP,
}


def load_config(path):
    cfg = dict(CONFIG_DEFAULTS)
    if not path:
        path = os.environ.get("RANKFILT_CONFIG")
    if path:
        try:
            with open(path) as fh:
                data = json.load(fh)
            for key in cfg:
                if key in data:
                    cfg[key] = data[key]
        except (OSError, ValueError) as exc:
            print("warning: ignoring config %s (%s)" % (path, exc), file=sys.stderr)
    return cfg


# ---------------------------------------------------------------------------
# persistent result cache


class ResultCache:
    """Single-document JSON cache of polynomial computations."""

    def __init__(self, path):
        self.path = path
        self.entries = {}
        self.dirty = False
        if path and os.path.exists(path):
            try:
                with open(path) as fh:
                    doc = json.load(fh)
                if isinstance(doc, dict) and isinstance(doc.get("entries"), dict):
                    self.entries = doc["entries"]
                else:
                    raise ValueError("unexpected cache layout")
            except (OSError, ValueError) as exc:
                print("warning: ignoring cache %s (%s)" % (path, exc), file=sys.stderr)
                self.entries = {}

    @staticmethod
    def key(descriptor, engine, cutoff):
        return "%s|%s|%s" % (descriptor, engine, "exact" if cutoff is None else cutoff)

    def get(self, key):
        entry = self.entries.get(key)
        if entry is None:
            return None
        try:
            trunc = entry["truncation"]
            return Poly({int(d): int(c) for d, c in entry["value"].items()}, trunc)
        except (KeyError, TypeError, ValueError):
            return None

    def put(self, key, poly):
        self.entries[key] = {
            "value": poly.to_map(),
            "truncation": poly.truncation,
            "engine_version": ENGINE_VERSION,
            "timestamp": int(time.time()),
        }
        self.dirty = True

    def save(self):
        if not self.path or not self.dirty:
            return
        doc = {"version": 1, "engine_version": ENGINE_VERSION, "entries": self.entries}
        try:
            with open(self.path, "w") as fh:
                json.dump(doc, fh, sort_keys=True, indent=1)
                fh.write("\n")
        except OSError as exc:
            print("warning: could not write cache %s (%s)" % (self.path, exc), file=sys.stderr)


def _recompute_entry(key, cfg):
    desc_str, engine, cutoff_tag = key.rsplit("|", 2)
    desc = parse_descriptor(desc_str)
    cutoff = None if cutoff_tag == "exact" else int(cutoff_tag)
    return cartan.poincare(desc, cutoff=cutoff, engine=engine, basis_budget=cfg["basis_budget"])


# ---------------------------------------------------------------------------
# output helpers


def emit_json(doc):
    print(json.dumps(doc, sort_keys=True, indent=2))


def emit_csv(rows):
    for row in rows:
        print(",".join(str(cell) for cell in row))


# ---------------------------------------------------------------------------
# subcommands


def cmd_summands(args, cfg):
    k, l, t = args.k, args.l, args.t
    if args.subquotient is not None:
        ss = combinat.subquotient_summands(k, l, t, args.subquotient, positive_only=args.positive)
        mode = "subquotient m=%d%s" % (args.subquotient, " (positive)" if args.positive else "")
    elif args.latching:
        ss = combinat.latching_quotient(k, l, t, args.max_rank)
        mode = "latching"
    else:
        ss = combinat.enumerate_summands(k, l, t, args.max_rank)
        mode = "filtration"
    if args.json:
        doc = ss.to_json()
        doc["mode"] = mode
        if l > k:
            doc["note"] = "l>k: the mapping spectrum is contractible"
        emit_json(doc)
    elif args.csv:
        rows = [["index"] + ["m%d" % (i + 1) for i in range(t)] + ["rank"]]
        for i, it in enumerate(ss):
            rows.append([i] + list(it.entries) + [it.rank])
        emit_csv(rows)
    else:
        print("summands k=%d l=%d t=%d (%s): %d" % (k, l, t, mode, len(ss)))
        for it in ss:
            print("  (%s)  rank %d" % (", ".join(map(str, it.entries)), it.rank))
        if l > k:
            print("  note: l>k, the mapping spectrum is contractible")
    return EXIT_OK


def cmd_poincare(args, cfg):
    desc = parse_descriptor(args.descriptor)
    cache = ResultCache(args.cache or os.environ.get("RANKFILT_CACHE"))
    cutoff = args.cutoff if args.cutoff is not None else cfg["default_cutoff"]
    key = ResultCache.key(desc.canonical_string(), args.engine, cutoff)

    if args.verify_cache:
        bad = []
        for entry_key in sorted(cache.entries):
            try:
                fresh = _recompute_entry(entry_key, cfg)
            except Exception as exc:  # unparsable key counts as a stale entry
                bad.append((entry_key, "recompute failed: %s" % exc))
                continue
            if cache.get(entry_key) != fresh:
                bad.append((entry_key, "value differs"))
        if bad:
            for entry_key, why in bad:
                print("cache audit FAILED for %s: %s" % (entry_key, why), file=sys.stderr)
            return EXIT_VERIFICATION
        print("cache audit passed: %d entries recomputed bit-identically" % len(cache.entries))

    poly = cache.get(key)
    if poly is None:
        poly = cartan.poincare(
            desc, cutoff=cutoff, engine=args.engine, basis_budget=cfg["basis_budget"]
        )
        cache.put(key, poly)
        cache.save()
    if args.json:
        emit_json(
            {
                "descriptor": desc.canonical_string(),
                "engine": args.engine,
                "cutoff": poly.truncation,
                "poincare": poly.to_map(),
                "pretty": poly.pretty(),
            }
        )
    else:
        print(poly.pretty())
    return EXIT_OK


def cmd_cube(args, cfg):
    if args.m > cfg["m_max"] and not args.allow_large:
        raise ContractViolation(
            "m=%d is beyond the configured M_max=%d; pass --allow-large to force"
            % (args.m, cfg["m_max"])
        )
    report = decomp.cube_report(
        args.m, args.l, args.k, cutoff=args.cutoff, basis_budget=cfg["basis_budget"]
    )
    if args.json:
        emit_json(report.to_json())
    else:
        print(
            "cube m=%d (k=%d, l=%d): %d vertices, %d edges"
            % (report.m, report.k, report.l, len(report.vertices), len(report.edges))
        )
        for v in report.vertices:
            print("  X(%s): %s" % ("{%s}" % ",".join(map(str, v.subset)), v.poincare.pretty()))
        for e in report.edges:
            status = "ok" if e.ok else "FAILED: " + "; ".join(e.mismatches)
            print("  edge {%s} <-> +{%d}: %s" % (",".join(map(str, e.subset)), report.m, status))
        print("  signed sum: %s" % report.signed_sum.pretty())
        print("  verified: %s" % report.verified)
    return EXIT_OK if report.verified else EXIT_VERIFICATION


def cmd_report(args, cfg):
    report = spectra.small_range_report(
        args.k, args.l, cutoff=args.cutoff, m_max=cfg["m_max"], k_cap=cfg["k_cap"]
    )
    if args.json:
        emit_json(report.to_json())
    elif args.csv:
        emit_csv(report.csv_rows())
    else:
        if report.vanishes:
            print("report k=%d l=%d: vanishes (l > k), pi0 = 0" % (args.k, args.l))
        else:
            kind = "one-stage" if report.one_stage else "%d stages" % report.length
            print("report k=%d l=%d: %s, pi0 = %d" % (args.k, args.l, kind, report.pi0))
            print("  rational homology (first stage): %s" % report.first_stage.pretty())
            if report.endomorphism is not None:
                print("  endomorphism polynomial: %s" % report.endomorphism.pretty())
            for s in report.stages:
                flag = "-" if s.prime_power is None else ("yes" if s.prime_power else "no")
                print("  stage m=%d  prime power: %s  %s" % (s.m, flag, s.verdict))
            print("  note: %s" % report.note)
    return EXIT_OK if report.verified else EXIT_VERIFICATION


def cmd_ku_series(args, cfg):
    series = spectra.ku_limit_series(
        args.l,
        args.t,
        args.cutoff,
        max_rank=args.max_rank,
        check_stabilization=args.check_stabilization,
        sample_ks=tuple(args.sample_k or ()),
    )
    if args.json:
        emit_json(
            {
                "l": args.l,
                "t": args.t,
                "cutoff": args.cutoff,
                "max_rank": args.max_rank,
                "series": series.to_map(),
                "pretty": series.pretty(),
            }
        )
    else:
        print(series.pretty())
    return EXIT_OK


# ---------------------------------------------------------------------------
# argument parsing


def build_parser():
    parser = argparse.ArgumentParser(
        prog="rankfilt",
        description="Exact invariants of the rank filtration of matrix mapping spectra.",
    )
    parser.add_argument("--config", help="JSON config file (or RANKFILT_CONFIG)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("summands", help="wedge-summand index tuples for a pointed set")
    p.add_argument("k", type=int)
    p.add_argument("l", type=int)
    p.add_argument("t", type=int)
    p.add_argument("--max-rank", type=int, default=None, dest="max_rank")
    p.add_argument("--subquotient", type=int, default=None, metavar="M")
    p.add_argument("--positive", action="store_true", help="all entries >= 1 (with --subquotient)")
    p.add_argument("--latching", action="store_true")
    p.add_argument("--json", action="store_true")
    p.add_argument("--csv", action="store_true")
    p.set_defaults(func=cmd_summands)

    p = sub.add_parser("poincare", help="Poincare polynomial of an orbit descriptor")
    p.add_argument("descriptor")
    p.add_argument("--cutoff", type=int, default=None)
    p.add_argument("--engine", choices=["molien", "cartan", "auto"], default="auto")
    p.add_argument("--json", action="store_true")
    p.add_argument("--cache", help="JSON cache path (or RANKFILT_CACHE)")
    p.add_argument("--verify-cache", action="store_true", dest="verify_cache")
    p.set_defaults(func=cmd_poincare)

    p = sub.add_parser("cube", help="decomposition-chain cube with rational verification")
    p.add_argument("m", type=int)
    p.add_argument("--k", type=int, default=None)
    p.add_argument("--l", type=int, default=1)
    p.add_argument("--cutoff", type=int, default=None)
    p.add_argument("--allow-large", action="store_true", help="permit m beyond M_max")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_cube)

    p = sub.add_parser("report", help="rank-filtration report for a pair (k, l)")
    p.add_argument("k", type=int)
    p.add_argument("l", type=int)
    p.add_argument("--cutoff", type=int, default=None)
    p.add_argument("--json", action="store_true")
    p.add_argument("--csv", action="store_true")
    p.set_defaults(func=cmd_report)

    p = sub.add_parser("ku-series", help="classifying-space limit series of a filtration stage")
    p.add_argument("l", type=int)
    p.add_argument("t", type=int)
    p.add_argument("--cutoff", type=int, required=True)
    p.add_argument("--max-rank", type=int, default=1, dest="max_rank")
    p.add_argument("--check-stabilization", action="store_true", dest="check_stabilization")
    p.add_argument("--sample-k", type=int, action="append", dest="sample_k")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_ku_series)

    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    cfg = load_config(args.config)
    try:
        return args.func(args, cfg)
    except cartan.EngineMismatch as exc:
        print("engine mismatch on %s" % exc.descriptor.canonical_string(), file=sys.stderr)
        print("  molien: %s" % exc.molien.pretty(), file=sys.stderr)
        print("  cartan: %s" % exc.cartan.pretty(), file=sys.stderr)
        return EXIT_ENGINE_MISMATCH
    except cartan.ResourceLimit as exc:
        print(
            "resource limit: degree %d needs %d basis elements (budget %d)"
            % (exc.degree, exc.size, exc.budget),
            file=sys.stderr,
        )
        return EXIT_RESOURCE
    except (ContractViolation, DescriptorError, NotTorusCommensurable, spectra.Vanishes) as exc:
        print("error: %s" % exc, file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())

"""Command-line entry point: ``gaplab <subcommand> [options]``.

Exit codes: 0 success, 2 domain or usage error, 3 constraint violation
(a mathematical condition that fails for the given inputs), 1 I/O error.
"""
from __future__ import annotations

import argparse
import sys
import warnings

from . import arith
from .config import Param, integer, rational, read_config, resolve, text
from .constants import ComponentConstants, derive_c_LG
from .construction import (DEFAULT_BAND_EPS, build_prime_sets, parse_bands, random_construction,
                           survivor_stats)
from .errors import ConditioningError, ConstraintViolation, DomainError, GapLabError
from .reports import default_output, emit_report, write_atomic
from .sieve_lab import brun_titchmarsh_sweep, gap_records, mertens_product, ub_pair_sweep
from .variational import check_cIJ_bound, maximize_ratio
from .zero_region import MCCURLEY_R, mccurley_constants, selberg_CUB, zero_region_chain, zfr_admissible

EXIT_OK, EXIT_IO, EXIT_DOMAIN, EXIT_CONSTRAINT = 0, 1, 2, 3

STRATEGY_NAMES = {"uniform": "uniform-random", "zero": "zero-class", "greedy": "greedy-cover"}


def int_list(value) -> tuple:
    if isinstance(value, (list, tuple)):
        return tuple(integer(v) for v in value)
    return tuple(integer(v) for v in str(value).split(",") if v.strip())


def strategy(value) -> str:
    v = text(value)
    return STRATEGY_NAMES.get(v, v)


COMMON = [
    Param("seed", integer, 0, "seed for random draws"),
    Param("threads", integer, 1, "worker threads for sieving"),
]


def _failed(checks):
    return [c for c in checks if not c["passed"]]


def _trace_report(trace):
    d = trace.to_dict()
    return d["trace"], d["checks"]


# -- subcommands -------------------------------------------------------------------


def run_derive(cfg):
    cs = ComponentConstants(
        theta=cfg["theta"], c_IJ=cfg["c_IJ"], C_PAP=cfg["C_PAP"], D_PAP=cfg["D_PAP"],
        C_UB=cfg["C_UB"], D_UB=cfg["D_UB"])
    d = derive_c_LG(cs, cfg["k"], log2x=cfg["log2x"])
    tree, checks = _trace_report(d.trace)
    result = {
        "c_LG": tree["midpoint"],
        "c_LG_lo": tree["value_lo"],
        "c_LG_hi": tree["value_hi"],
        "max_relative_width": d.trace.max_relative_width(),
        "all_checks_passed": not _failed(checks),
    }
    report = {"result": result, "checks": checks, "trace": tree}
    return report, d.trace.flat_rows(), ["name", "midpoint", "radius", "formula"], _failed(checks)


def run_zero_constants(cfg):
    _, R1 = mccurley_constants()
    if not zfr_admissible(cfg["c_ZFR"], R1):
        raise ConstraintViolation(
            f"c_ZFR = {cfg['c_ZFR']} is not below 1/(4 R1) = {arith.midpoint(1 / (4 * R1)):.6g}",
            quantity="c_ZFR", value=cfg["c_ZFR"])
    consts, D_PAP, C_PAP, C_UB, trace = zero_region_chain(
        cfg["c_ZFR"], cfg["jutila_exp"], cfg["trivial_exp"], cfg["R"])
    _, ratio = selberg_CUB(cfg["x"])
    tree, checks = _trace_report(trace)
    result = {
        "D_PAP": D_PAP,
        "C_PAP": arith.midpoint(C_PAP),
        "C_UB": arith.midpoint(C_UB),
        "R1": arith.midpoint(consts.R1),
        "a": consts.a,
        "c_ZD": consts.c_ZD,
        "mertens_squared_ratio": ratio,
        "all_checks_passed": not _failed(checks),
    }
    report = {"result": result, "checks": checks, "trace": tree}
    return report, trace.flat_rows(), ["name", "midpoint", "radius", "formula"], _failed(checks)


def run_maynard(cfg):
    res = maximize_ratio(cfg["r"], cfg["degree"])
    result = res.to_dict()
    row = {"r": res.r, "degree": res.degree, "basis_size": len(res.basis), "ratio": res.ratio,
           "certified_ratio": res.certified_ratio}
    failed = []
    if res.r >= 2:
        chk = check_cIJ_bound(res.r, res.ratio, cfg["c_IJ"])
        result["cIJ_check"] = {"c_IJ": cfg["c_IJ"], "threshold": chk.threshold, "margin": chk.margin,
                               "passed": chk.passed}
        row.update(threshold=chk.threshold, margin=chk.margin, passed=chk.passed)
        if not chk.passed:
            failed.append({"name": "ratio >= c_IJ log r / r", "passed": False})
    return {"result": result}, [row], None, failed


def run_gaps(cfg):
    recs = gap_records(cfg["max"], cfg["k"], threads=cfg["threads"])
    if not recs:
        raise DomainError(f"G_{cfg['k']}({cfg['max']}) is undefined: too few primes")
    rows = [r.to_row() for r in recs]
    last = recs[-1]
    result = {"k": cfg["k"], "X": cfg["max"], "G_k": last.value, "witness": list(last.witness),
              "record_count": len(recs)}
    return {"result": result, "records": rows}, rows, ["k", "X", "gap", "witness_primes"], []


def run_mertens(cfg):
    rows = []
    for x in cfg["x"]:
        m = mertens_product(x)
        rows.append({"x": x, "product": m.product, "ratio": m.ratio})
    dist = [abs(r["ratio"] - 1) for r in rows]
    result = {"points": len(rows), "improving": all(b < a for a, b in zip(dist, dist[1:]))}
    return {"result": result, "rows": rows}, rows, ["x", "product", "ratio"], []


def run_bt_check(cfg):
    res = brun_titchmarsh_sweep(cfg["x"], cfg["qmax"])
    rows = [{"x": r.x, "q": r.q, "a": r.a, "count": r.count, "bound": r.bound, "holds": r.holds} for r in res]
    bad = [r for r in rows if not r["holds"]]
    result = {"checks": len(rows), "all_hold": not bad,
              "max_count_over_bound": max(r["count"] / r["bound"] for r in rows)}
    failed = [{"name": f"Brun-Titchmarsh at q={r['q']}, a={r['a']}", "passed": False} for r in bad]
    return {"result": result, "rows": rows}, rows, ["x", "q", "a", "count", "bound", "holds"], failed


def run_ub_pairs(cfg):
    res = ub_pair_sweep(cfg["x"], cfg["b0"], cfg["z"], cfg["pairs"], cfg["seed"], threads=cfg["threads"])
    cols = ["x", "B0", "Z", "a", "b", "count", "bound", "holds", "toy_regime", "short_circuit"]
    rows = [{c: getattr(r, c) for c in cols} for r in res]
    bad = [r for r in rows if not r["holds"]]
    result = {"pairs": len(rows), "all_hold": not bad, "max_count": max(r["count"] for r in rows),
              "bound": rows[0]["bound"], "toy_regime": rows[0]["toy_regime"]}
    failed = [{"name": f"pair bound at (a, b) = ({r['a']}, {r['b']})", "passed": False} for r in bad]
    return {"result": result, "rows": rows}, rows, cols, failed


def run_construct(cfg):
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        system = build_prime_sets(cfg["x"], cfg["b0"], c=cfg["c"], s_min=cfg["smin"], y=cfg["y"],
                                  z=cfg["z"], threads=cfg["threads"])
    for w in caught:
        print(f"warning: {w.message}", file=sys.stderr)
    assignment, T = random_construction(system, cfg["seed"], cfg["strategy"])
    rows = []
    for alpha, beta in parse_bands(cfg["bands"]):
        b = survivor_stats(T, system.y, alpha, beta, cfg["A"], system.x, cfg["eps"])
        rows.append({"alpha": b.alpha, "beta": b.beta, "count": b.count, "upper_band": b.upper_band,
                     "lower_band": b.lower_band, "short_band": b.short_band})
    result = {
        "system": system.to_dict(),
        "size_T": len(T),
        "provenance": T.provenance,
        "strategy": assignment.strategy,
        "assignment_sha256": assignment.digest(),
        "bands": rows,
    }
    if cfg["members"]:
        write_atomic(cfg["members"], "".join(f"{n}\n" for n in T.members.tolist()))
    return {"result": result}, rows, ["alpha", "beta", "count", "upper_band", "lower_band", "short_band"], []


COMMANDS = {
    "derive": (run_derive, "explicit constant chain and its audit trace", [
        Param("k", integer, 1, "number of consecutive gaps"),
        Param("theta", rational, "1/3"),
        Param("c_IJ", rational, "1/4"),
        Param("C_PAP", rational, None, "default: from the zero-region chain"),
        Param("D_PAP", rational, None, "default: from the zero-region chain"),
        Param("C_UB", rational, None, "default: 8 e^(2 gamma)"),
        Param("D_UB", rational, 1),
        Param("log2x", rational, None, "log log x for the construction parameters"),
    ]),
    "zero-constants": (run_zero_constants, "component constants from the zero-region chain", [
        Param("c_ZFR", rational, "1/24"),
        Param("jutila_exp", rational, None, "default 6"),
        Param("trivial_exp", rational, None, "default 15"),
        Param("R", rational, str(MCCURLEY_R)),
        Param("x", integer, 100000, "cutoff for the finite Mertens ratio"),
    ]),
    "maynard": (run_maynard, "maximise J/I over symmetric polynomials", [
        Param("r", integer, 2),
        Param("degree", integer, 3),
        Param("c_IJ", rational, "1/4"),
    ]),
    "gaps": (run_gaps, "maximal k-gap records up to a bound", [
        Param("max", integer, 1000000),
        Param("k", integer, 1),
    ]),
    "mertens": (run_mertens, "Mertens products against e^gamma log x", [
        Param("x", int_list, "1000,10000,100000,1000000"),
    ]),
    "bt-check": (run_bt_check, "Brun-Titchmarsh sweep over moduli and classes", [
        Param("x", integer, 10000),
        Param("qmax", integer, 50),
    ]),
    "ub-pairs": (run_ub_pairs, "prime pair counts at a primorial modulus", [
        Param("x", integer, 5),
        Param("b0", integer, 1),
        Param("z", integer, 1000),
        Param("pairs", integer, 50),
    ]),
    "construct": (run_construct, "residue-class interval construction", [
        Param("x", integer, 10000),
        Param("b0", integer, 1),
        Param("c", rational, None, "default: the theoretical sieve scale"),
        Param("smin", rational, None, "default: log^20 x"),
        Param("y", rational, None),
        Param("z", rational, None),
        Param("strategy", strategy, "uniform", choices=tuple(STRATEGY_NAMES.values())),
        Param("bands", text, "0:1/4,1/4:1/2,1/2:3/4,3/4:1"),
        Param("A", rational, 1),
        Param("eps", rational, str(DEFAULT_BAND_EPS)),
        Param("members", text, None, "write survivors here, one per line"),
    ]),
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="gaplab", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (_, help_text, params) in COMMANDS.items():
        p = sub.add_parser(name, help=help_text)
        for prm in params + COMMON:
            flags = [prm.flag] + ([prm.flag.lower()] if prm.flag.lower() != prm.flag else [])
            default = "" if prm.default is None else f" (default: {prm.default})"
            p.add_argument(*flags, dest=prm.name, default=None, help=prm.help + default)
        p.add_argument("--config", help="key = value file; flags override it")
        p.add_argument("--out", help="output path, '-' for stdout")
        p.add_argument("--format", choices=("json", "csv"), default="json")
    return parser


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    handler, _, params = COMMANDS[args.command]
    params = params + COMMON
    try:
        file_values = read_config(args.config) if args.config else {}
        cfg = resolve(params, file_values, {p.name: getattr(args, p.name) for p in params})
        report, rows, columns, failed = handler(cfg)
    except ConstraintViolation as exc:
        print(f"constraint violation: {exc}", file=sys.stderr)
        return EXIT_CONSTRAINT
    except (DomainError, ConditioningError, GapLabError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    full = {"command": args.command, "config": {**cfg, "format": args.format}}
    full.update(report)
    out = args.out if args.out is not None else default_output(args.command, args.format)
    try:
        path = emit_report(full, rows, args.format, out, columns)
    except OSError as exc:
        print(f"error: cannot write report: {exc}", file=sys.stderr)
        return EXIT_IO
    if path is not None:
        print(f"wrote {path}", file=sys.stderr)
    if failed:
        names = ", ".join(f["name"] for f in failed)
        print(f"constraint violation: failed check(s): {names}", file=sys.stderr)
        return EXIT_CONSTRAINT
    return EXIT_OK


def main(argv=None) -> int:
    return run(argv)


if __name__ == "__main__":
    sys.exit(main())

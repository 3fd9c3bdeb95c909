"""Batch experiment runner: generate witness maps, run certificate suites,
compute exact distances between measure files, and summarize reports.

Commands
--------
generate   build a balloon or dumbbell tower from a config and write it
           (with its certified levels) to a JSON map file
analyze    load a map file, run a certificate suite, write report.json and
           summary.csv
prohorov   exact distance between two measure files
report     print the pass/fail table of an existing report

Exit codes: 0 all certificates pass, 2 some certificate failed,
3 configuration or usage error.

All rationals cross this boundary as "p/q" strings; reports are
deterministic given the config and seed (timings live in a separate field).
"""

from __future__ import annotations

import argparse
import configparser
import csv
import json
import random
import sys
import time
from fractions import Fraction
from pathlib import Path

from .certs import Certificate, to_jsonable
from .dynamics import (
    chain_connect_homeo,
    chain_connect_map,
    chain_step_count,
    chain_continuity_test,
    entropy_estimate,
    equicontinuity_certificate,
    sample_modulus_pairs,
    transitivity_check,
    weak_shadowing_refutation,
)
from .errors import CantorDynError, ParameterError, ResourceBudgetError
from .grids import li_yorke_scan, random_cell_measure, simplex_grid
from .measures import measure_from_lines, measure_to_lines, prohorov, prohorov_two_sided
from .orbits import PairClass
from .recurrence import (
    AdmissibleChoice,
    approx_by_periodic,
    consistency_check,
    enumerate_admissible_choices,
    loop_support_check,
    periodic_measure,
    recurrence_certificate,
    transient_perturbation,
)
from .towers import make_balloon_tower, make_dumbbell_tower, tower_from_dict, tower_to_dict

SUITES = ("liyorke", "entropy", "chains", "shadowing", "recurrence", "all")


def _fractions(raw: str) -> list[Fraction]:
    return [Fraction(part.strip()) for part in raw.split(",") if part.strip()]


def _ints(raw: str) -> list[int]:
    return [int(part.strip()) for part in raw.split(",") if part.strip()]


def load_config(path: str) -> configparser.ConfigParser:
    parser = configparser.ConfigParser(inline_comment_prefixes=(";", "#"))
    read = parser.read(path)
    if not read:
        raise ParameterError(f"config file not found: {path}")
    return parser


def build_tower_from_config(cfg: configparser.ConfigParser):
    sec = cfg["map"]
    kind = sec.get("kind", "balloon")
    if kind == "balloon":
        levels = [
            (int(d), int(q))
            for d, q in (pair.split(":") for pair in sec["levels"].split(","))
        ]
        counts = _ints(sec["counts"])
        return make_balloon_tower(levels, counts)
    if kind == "dumbbell":
        depth, q = (int(x) for x in sec["level"].split(":"))
        return make_dumbbell_tower(
            (depth, q), sec.getint("count", 1), sec.getint("bar_length", 1)
        )
    raise ParameterError(f"unknown map kind {kind!r}")


def cmd_generate(args) -> int:
    cfg = load_config(args.config)
    tower = build_tower_from_config(cfg)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    path = out_dir / cfg["run"].get("map_file", "map.json")
    path.write_text(json.dumps(tower_to_dict(tower), indent=2, sort_keys=True) + "\n")
    print(f"wrote {path}: {tower.kind} tower, {len(tower.levels)} level(s), "
          f"{len(tower.table.rules)} rules")
    for i, level in enumerate(tower.levels):
        partition = level.partition()
        print(f"  level {i}: q={level.q} components={len(level.components)} "
              f"cells={len(partition)} mesh={partition.mesh()}")
    return 0


def _suite_liyorke(tower, cfg, rng):
    resolution = cfg.getint("analysis", "grid_resolution", fallback=2)
    level = cfg.getint("analysis", "level", fallback=0)
    scan = li_yorke_scan(tower.table, tower.levels[level].partition(), resolution)
    yield Certificate(
        operation="li_yorke_scan",
        passed=scan.counts[PairClass.LI_YORKE_PAIR.value] == 0,
        verdict="no_li_yorke_pairs"
        if scan.counts[PairClass.LI_YORKE_PAIR.value] == 0
        else "li_yorke_pair_found",
        parameters={"resolution": resolution, "level": level,
                    "grid_size": len(scan.grid), "pairs": scan.pair_count},
        witnesses={"counts": scan.counts},
        details={"preperiod": scan.family.preperiod, "period": scan.family.period},
    )


def _suite_entropy(tower, cfg, rng):
    level = cfg.getint("analysis", "level", fallback=0)
    resolution = cfg.getint("analysis", "entropy_resolution", fallback=2)
    horizon = cfg.getint("analysis", "entropy_horizon", fallback=6)
    eps_list = _fractions(cfg.get("analysis", "entropy_eps", fallback="1/2, 1/4"))
    partition = tower.levels[level].partition()
    grid = simplex_grid(partition, resolution)
    table = entropy_estimate(tower.table, grid, eps_list, horizon)
    for eps in eps_list:
        counts = {n: table.counts[(n, eps)] for n in table.horizons}
        ok = (
            table.is_monotone_in_n(eps)
            and table.normalized_log_nonincreasing(eps)
            and table.slope_zero_at_horizon(eps)
        )
        yield Certificate(
            operation="entropy_growth",
            passed=ok,
            verdict="zero_growth_at_horizon" if ok else "growth_detected",
            parameters={"eps": eps, "horizon": horizon, "grid_size": table.grid_size,
                        "exact": table.exact},
            witnesses={"separated_counts": counts},
            details={},
        )


def _suite_chains(tower, cfg, rng):
    backend = cfg.get("analysis", "backend", fallback="auto")
    deltas = _fractions(cfg.get("analysis", "chain_deltas", fallback="3/4, 1/2"))
    extra = cfg.getint("analysis", "chain_lengths_extra", fallback=2)
    level = cfg.getint("analysis", "level", fallback=0)
    partition = tower.levels[level].partition()
    pair_count = cfg.getint("analysis", "chain_pairs", fallback=4)
    pairs = [
        (random_cell_measure(partition, rng, 4), random_cell_measure(partition, rng, 4))
        for _ in range(pair_count)
    ]
    homeo = tower.table.is_homeomorphism()
    for delta in deltas:
        k0 = chain_step_count(delta)
        failures = []
        for idx, (mu, nu) in enumerate(pairs):
            for k in range(k0, k0 + extra + 1):
                try:
                    if homeo:
                        chain_connect_homeo(tower.table, mu, nu, delta, k, backend=backend)
                    else:
                        chain_connect_map(tower.table, mu, nu, delta, k, backend=backend)
                except CantorDynError as exc:
                    failures.append({"pair": idx, "k": k, "error": str(exc)})
        yield Certificate(
            operation="chain_connection",
            passed=not failures,
            verdict="all_chains_verified" if not failures else "chain_failure",
            parameters={"delta": delta, "k0": k0,
                        "lengths": list(range(k0, k0 + extra + 1)),
                        "pairs": pair_count, "mode": "homeo" if homeo else "map"},
            witnesses={"failures": failures},
            details={},
        )
    yield chain_continuity_test(
        tower.table,
        cfg.getint("analysis", "continuity_depth", fallback=3),
        Fraction(cfg.get("analysis", "eps", fallback="1/4")),
        Fraction(cfg.get("analysis", "delta", fallback="1/2")),
    )


def _suite_shadowing(tower, cfg, rng):
    level = cfg.getint("analysis", "level", fallback=0)
    yield transitivity_check(tower.table, tower.levels[level].partition())
    if tower.kind == "dumbbell":
        eps = Fraction(cfg.get("analysis", "eps", fallback="1/4"))
        delta = Fraction(cfg.get("analysis", "delta", fallback="1/2"))
        resolution = cfg.getint("analysis", "grid_resolution", fallback=2)
        grid = simplex_grid(tower.levels[level].partition(), resolution)
        yield weak_shadowing_refutation(tower, eps, delta, grid)


def _suite_recurrence(tower, cfg, rng):
    periods = _ints(cfg.get("analysis", "periods", fallback="1, 2"))
    eps = Fraction(cfg.get("analysis", "eps", fallback="1/4"))
    lam_list = _fractions(cfg.get("analysis", "lambda", fallback="1/4"))
    for p in periods:
        choices = enumerate_admissible_choices(tower, period=p)
        measures = [periodic_measure(tower, c, level=len(c.components) - 1) for c in choices]
        distinct = len(set(measures))
        yield Certificate(
            operation="periodic_measures",
            passed=distinct == len(measures),
            verdict="distinct_periodic_points" if distinct == len(measures) else "collision",
            parameters={"period": p, "choices": len(choices)},
            witnesses={"distinct": distinct},
            details={},
        )
        if len(tower.levels) >= 2 and choices:
            yield consistency_check(tower, choices[0], 0, 1)
    base_choice = AdmissibleChoice(
        components=tuple(0 for _ in tower.levels), period=periods[0]
    )
    mu = periodic_measure(tower, base_choice, level=len(tower.levels) - 1)
    yield loop_support_check(tower, mu)
    yield recurrence_certificate(tower, mu, eps)
    for lam in lam_list:
        _, cert = transient_perturbation(tower, mu, lam)
        yield cert
    _, cert = approx_by_periodic(tower, mu, eps)
    yield cert


def run_suite(tower, suite: str, cfg, rng):
    runners = {
        "liyorke": (_suite_liyorke,),
        "entropy": (_suite_entropy,),
        "chains": (_suite_chains,),
        "shadowing": (_suite_shadowing,),
        "recurrence": (_suite_recurrence,),
        "all": (_suite_liyorke, _suite_entropy, _suite_chains,
                _suite_shadowing, _suite_recurrence),
    }
    certificates = []
    timings = []
    for runner in runners[suite]:
        t0 = time.monotonic()
        try:
            certificates.extend(runner(tower, cfg, rng))
        except ResourceBudgetError as exc:
            # budgets fail the item, never the whole run
            certificates.append(
                Certificate(
                    operation=runner.__name__.lstrip("_"),
                    passed=False,
                    verdict="resource_budget_exceeded",
                    witnesses={"error": str(exc)},
                )
            )
        timings.append({"stage": runner.__name__, "ms": int(1000 * (time.monotonic() - t0))})
    return certificates, timings


def _config_echo(cfg) -> dict:
    return {section: dict(cfg[section]) for section in cfg.sections()}


def cmd_analyze(args) -> int:
    cfg = load_config(args.config)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    map_path = out_dir / cfg["run"].get("map_file", "map.json")
    if not map_path.exists():
        raise ParameterError(f"map file not found: {map_path} (run generate first)")
    tower = tower_from_dict(json.loads(map_path.read_text()))
    seed = args.seed if args.seed is not None else cfg["run"].getint("seed", 0)
    if args.backend is not None:
        if not cfg.has_section("analysis"):
            cfg.add_section("analysis")
        cfg["analysis"]["backend"] = args.backend
    rng = random.Random(seed)
    certificates, timings = run_suite(tower, args.suite, cfg, rng)
    payloads = [c.payload() for c in certificates]
    report = {
        "config": _config_echo(cfg),
        "suite": args.suite,
        "seed": seed,
        "certificates": payloads,
        "summary": {
            "total": len(payloads),
            "passed": sum(1 for p in payloads if p["passed"]),
        },
    }
    report_path = out_dir / f"report_{args.suite}.json"
    full = dict(report)
    full["timings"] = timings
    report_path.write_text(json.dumps(full, indent=2, sort_keys=True) + "\n")
    csv_path = out_dir / f"summary_{args.suite}.csv"
    with csv_path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["operation", "verdict", "passed", "parameters", "witnesses"])
        for p in payloads:
            writer.writerow(
                [p["operation"], p["verdict"], p["passed"],
                 json.dumps(p["parameters"], sort_keys=True),
                 json.dumps(p["witnesses"], sort_keys=True)]
            )
    for p in payloads:
        print(f"[{'PASS' if p['passed'] else 'FAIL'}] {p['operation']}: {p['verdict']}")
    print(f"wrote {report_path} and {csv_path}")
    return 0 if report["summary"]["passed"] == report["summary"]["total"] else 2


def cmd_prohorov(args) -> int:
    mu = measure_from_lines(Path(args.mu).read_text().splitlines())
    nu = measure_from_lines(Path(args.nu).read_text().splitlines())
    result = prohorov(mu, nu, backend=args.backend)
    print(result.value)
    print(f"witness set: {list(result.witness_set)}")
    if args.two_sided:
        symmetric = prohorov_two_sided(mu, nu, backend="auto")
        print(f"two-sided: {symmetric}")
        if symmetric != result.value:
            print("MISMATCH between one-sided and two-sided values", file=sys.stderr)
            return 2
    return 0


def cmd_report(args) -> int:
    data = json.loads(Path(args.report).read_text())
    rows = data.get("certificates", [])
    for p in rows:
        print(f"[{'PASS' if p['passed'] else 'FAIL'}] {p['operation']}: {p['verdict']}")
    total, passed = data["summary"]["total"], data["summary"]["passed"]
    print(f"{passed}/{total} certificates passed")
    return 0 if passed == total else 2


def write_measure(path: str, mu) -> None:
    Path(path).write_text("\n".join(measure_to_lines(mu)) + "\n")


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="cantordyn",
        description="exact certificates for induced maps on Cantor-space measures",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("generate", help="build and write a witness map")
    gen.add_argument("--config", required=True)
    gen.add_argument("--out", default=".")
    gen.set_defaults(func=cmd_generate)

    ana = sub.add_parser("analyze", help="run a certificate suite on a map")
    ana.add_argument("--config", required=True)
    ana.add_argument("--suite", choices=SUITES, default="all")
    ana.add_argument("--out", default=".")
    ana.add_argument("--seed", type=int, default=None)
    ana.add_argument("--backend", choices=("enumeration", "flow", "auto", "both"),
                     default=None, help="override the distance solver backend")
    ana.set_defaults(func=cmd_analyze)

    pro = sub.add_parser("prohorov", help="exact distance between measure files")
    pro.add_argument("mu")
    pro.add_argument("nu")
    pro.add_argument("--backend", choices=("enumeration", "flow", "auto", "both"),
                     default="both")
    pro.add_argument("--two-sided", action="store_true")
    pro.set_defaults(func=cmd_prohorov)

    rep = sub.add_parser("report", help="summarize an existing report")
    rep.add_argument("report")
    rep.set_defaults(func=cmd_report)

    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (CantorDynError, OSError, json.JSONDecodeError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())

"""Command-line front end.

Exit codes: 0 success, 1 internal failure, 2 input error.  Every flag
default can be overridden with an environment variable named
``CLUSPT_<FLAG>`` (e.g. ``CLUSPT_POP=50``).
"""
from __future__ import annotations

import argparse
import csv
import io
import logging
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from . import __version__
from .decoder import format_solution, verify_solution
from .errors import ClusptError, ContractError, InstanceError, OracleRefusal, UndefinedCorrelation
from .ga import GAConfig, format_run_record, run
from .instance_io import (
    MissingSourceError,
    augment_source,
    read_instance,
    with_source,
    write_instance,
)
from .metrics import ComparisonRow, pearson, summarize
from .oracles import enumerate_roots, enumerate_trees

log = logging.getLogger("cluspt")

EXIT_OK, EXIT_INTERNAL, EXIT_INPUT = 0, 1, 2

SUMMARY_COLUMNS = ["instance", "BF", "Avg", "CV", "Rm", "RPD", "PI"]
FEATURE_COLUMNS = ["instance", "n", "k", "avg_cluster_size"]


def _env(name, default, cast=str):
    raw = os.environ.get(f"CLUSPT_{name}")
    if raw is None:
        return default
    if cast is bool:
        return raw.strip().lower() in ("1", "true", "yes", "on")
    return cast(raw)


def _add_ga_flags(p):
    p.add_argument("--pop", type=int, default=_env("POP", 100, int), help="population size")
    p.add_argument("--gens", type=int, default=_env("GENS", 500, int), help="generations")
    p.add_argument("--cx", type=float, default=_env("CX", 0.5, float), help="crossover probability")
    p.add_argument("--mut", type=float, default=_env("MUT", 0.05, float), help="mutation rate")
    p.add_argument("--elitism", type=int, default=_env("ELITISM", 1, int),
                   help="0 disables elitist survivor selection")
    p.add_argument("--seed", type=int, default=_env("SEED", 0, int))


def _add_headless(p):
    p.add_argument("--headless", action="store_true", default=_env("HEADLESS", False, bool),
                   help="draw a source vertex from --seed when SOURCE_VERTEX is missing")


def _load(path, headless, seed):
    inst = read_instance(path, headless=headless)
    if inst.source is None:
        inst = with_source(inst, augment_source(inst, seed).source)
        log.info("%s: drew source vertex %d with seed %d", inst.name, inst.source, seed)
    return inst


def _config(args, seed):
    return GAConfig(population_size=args.pop, generations=args.gens,
                    crossover_probability=args.cx, mutation_rate=args.mut,
                    seed=seed, elitism_count=args.elitism)


def cmd_solve(args):
    inst = _load(args.instance, args.headless, args.seed)
    record = run(inst, _config(args, args.seed))
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    (out / f"{inst.name}.sol").write_text(format_solution(record.best_tree, record.best_cost))
    (out / f"{inst.name}.run").write_text(format_run_record(record))
    print(f"COST {format(record.best_cost, '.17g')}")
    return EXIT_OK


def _bench_job(job):
    inst, config = job
    record = run(inst, config)
    return format_run_record(record), record.best_cost, record.wall_time


def _read_reference(path):
    ref = {}
    with open(path, newline="") as fh:
        for row in csv.DictReader(fh):
            ref[row["instance"]] = (float(row["avg"]), float(row["best"]))
    return ref


def cmd_bench(args):
    out = Path(args.out)
    (out / "runs").mkdir(parents=True, exist_ok=True)
    reference = _read_reference(args.reference) if args.reference else {}
    cost_fmt = "{:.1f}" if args.table_style else "{:.6f}"
    pct_fmt = "{:.2f}" if args.table_style else "{:.6f}"
    rm_fmt = "{:.2f}" if args.table_style else "{:.4f}"

    failed = 0
    instances = []
    for path in args.instance:
        try:
            instances.append(_load(path, args.headless, args.seed))
        except (ClusptError, OSError) as exc:
            failed += 1
            print(f"error: {path}: {exc}", file=sys.stderr)
    instances.sort(key=lambda inst: inst.name)

    jobs = [(inst, _config(args, args.seed + i)) for inst in instances for i in range(args.runs)]
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(_bench_job, jobs))
    else:
        results = [_bench_job(j) for j in jobs]

    summary_rows = []
    feature_rows = []
    for idx, inst in enumerate(instances):
        batch = results[idx * args.runs:(idx + 1) * args.runs]
        for i, (text, _, _) in enumerate(batch):
            (out / "runs" / f"{inst.name}_s{args.seed + i}.run").write_text(text)
        s = summarize([c for _, c, _ in batch], [t for _, _, t in batch], inst.name)
        row = [inst.name, cost_fmt.format(s.best_found), cost_fmt.format(s.average),
               "{:.6f}".format(s.coefficient_of_variation),
               "" if args.no_timing else rm_fmt.format(s.mean_runtime / 60.0), "", ""]
        if inst.name in reference:
            ref_avg, ref_best = reference[inst.name]
            row[5] = pct_fmt.format(ComparisonRow.from_costs(inst.name, s.average, ref_avg).rpd)
            row[6] = pct_fmt.format(ComparisonRow.from_costs(inst.name, s.best_found, ref_best).pi)
        summary_rows.append(row)
        feature_rows.append([inst.name, inst.n, inst.k, "{:.6f}".format(inst.n / inst.k)])

    _write_csv(out / "summary.csv", SUMMARY_COLUMNS, summary_rows)
    _write_csv(out / "instances.csv", FEATURE_COLUMNS, feature_rows)
    sys.stdout.write(_csv_text(SUMMARY_COLUMNS, summary_rows))
    return EXIT_INTERNAL if failed else EXIT_OK


def _csv_text(header, rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _write_csv(path, header, rows):
    Path(path).write_text(_csv_text(header, rows))


def cmd_oracle(args):
    inst = _load(args.instance, args.headless, args.seed)
    if args.mode == "roots":
        res = enumerate_roots(inst)
        witness = " ".join(map(str, res.best_witness))
    else:
        res = enumerate_trees(inst)
        witness = " ".join(f"{u}-{v}" for u, v, _ in res.best_witness.edges)
    report = (f"INSTANCE {inst.name}\nMODE {args.mode}\nBEST_COST {format(res.best_cost, '.17g')}\n"
              f"SPACE {res.search_space_size}\nWITNESS {witness}\n")
    sys.stdout.write(report)
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        (out / f"{inst.name}.{args.mode}.oracle").write_text(report)
    return EXIT_OK


def cmd_validate(args):
    inst = read_instance(args.instance, headless=args.headless)
    src = inst.source if inst.source is not None else "-"
    print(f"OK {inst.name} n={inst.n} k={inst.k} source={src}")
    if args.solution:
        cost = verify_solution(inst, Path(args.solution).read_text())
        print(f"SOLUTION OK cost={format(cost, '.17g')}")
    return EXIT_OK


def cmd_augment(args):
    inst = read_instance(args.instance, headless=True)
    if inst.source is not None:
        log.warning("%s already has source %d; replacing it", inst.name, inst.source)
    aug = augment_source(inst, args.seed)
    text = write_instance(with_source(inst, aug.source))
    if args.out:
        Path(args.out).write_text(text)
        print(f"SOURCE {aug.source}")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def _read_csv(path):
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


def cmd_analyze(args):
    results = Path(args.results)
    summary = {r["instance"]: r for r in _read_csv(results / "summary.csv")}
    features = {r["instance"]: r for r in _read_csv(results / "instances.csv")}
    rows = [(features[name], row) for name, row in sorted(summary.items())
            if name in features and row.get("RPD", "").strip()]
    if len(rows) < 3:
        raise InstanceError(f"analysis needs at least 3 rows with RPD, found {len(rows)}")
    rpds = [float(r["RPD"]) for _, r in rows]
    table = []
    for label, col in (("Averaged number of vertex", "avg_cluster_size"), ("Number of cluster", "k")):
        r, p = pearson([float(f[col]) for f, _ in rows], rpds)
        table.append([label, "{:.7f}".format(r), "{:.3E}".format(p)])
    text = _csv_text(["Criteria", "Pearson pmc", "p-values"], table)
    (results / "correlation.csv").write_text(text)
    sys.stdout.write(text)
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(prog="cluspt", description="Clustered shortest-path tree solver")
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="run the evolutionary solver once")
    p.add_argument("--instance", required=True)
    p.add_argument("--out", default=_env("OUT", "."))
    _add_ga_flags(p)
    _add_headless(p)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("bench", help="repeated runs over instances, CSV summary")
    p.add_argument("--instance", required=True, nargs="+")
    p.add_argument("--runs", type=int, default=_env("RUNS", 30, int))
    p.add_argument("--jobs", type=int, default=_env("JOBS", 1, int))
    p.add_argument("--out", default=_env("OUT", "results"))
    p.add_argument("--reference", help="CSV with columns instance,avg,best for RPD/PI")
    p.add_argument("--no-timing", action="store_true", default=_env("NO_TIMING", False, bool),
                   help="leave the Rm column empty so output is byte-reproducible")
    p.add_argument("--table-style", action="store_true", help="round like published tables")
    _add_ga_flags(p)
    _add_headless(p)
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("oracle", help="exhaustive optimum on a tiny instance")
    p.add_argument("--instance", required=True)
    p.add_argument("--mode", choices=("roots", "trees"), default="roots")
    p.add_argument("--out", default=os.environ.get("CLUSPT_OUT"))
    p.add_argument("--seed", type=int, default=_env("SEED", 0, int))
    _add_headless(p)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("validate", help="check an instance and optionally a solution file")
    p.add_argument("--instance", required=True)
    p.add_argument("--solution")
    _add_headless(p)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("augment-source", help="add a random source vertex to an instance")
    p.add_argument("--instance", required=True)
    p.add_argument("--seed", type=int, default=_env("SEED", 0, int))
    p.add_argument("--out", help="output path (default: stdout)")
    p.set_defaults(func=cmd_augment)

    p = sub.add_parser("analyze", help="Pearson correlation of RPD with instance features")
    p.add_argument("results", nargs="?", default=_env("OUT", "results"),
                   help="directory written by bench")
    p.set_defaults(func=cmd_analyze)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s")
    try:
        return args.func(args)
    except MissingSourceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (InstanceError, ContractError, OracleRefusal, UndefinedCorrelation,
            FileNotFoundError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ClusptError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())

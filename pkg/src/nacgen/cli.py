"""Batch command-line front end.

Subcommands: ``sample``, ``reduce``, ``verify``, ``emit``, ``bench``.
Every run is driven by a config document (see :mod:`nacgen.config`) and
is deterministic given the config plus an optional ``--seed`` override.
Exit codes: 0 success, 1 validation error, 2 verification failure.
"""

from __future__ import annotations

import argparse
import itertools
import json
import os
import sys
import time

from .config import ExperimentConfig, build_scenarios, load_config
from .errors import ConfigError, NacgenError
from .model import build_model, count_nacs, emit_lp, emit_mps
from .oracle import check_necessity, full_pair_count
from .snac import load_graph, run_snac, save_graph


class _Parser(argparse.ArgumentParser):
    """Argparse variant whose usage errors exit with code 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(1)


def _outdir(cfg: ExperimentConfig, args) -> str:
    out = args.out if args.out else cfg.output_dir
    os.makedirs(out, exist_ok=True)
    return out


def cmd_sample(cfg: ExperimentConfig, args) -> int:
    sset = build_scenarios(cfg, seed_override=args.seed)
    out = _outdir(cfg, args)
    path = os.path.join(out, "scenarios.txt")
    from .scenarios import save_scenarios

    save_scenarios(sset, path)
    print(f"wrote {len(sset)} scenarios to {path} (origin: {sset.origin})")
    return 0


def cmd_reduce(cfg: ExperimentConfig, args) -> int:
    sset = build_scenarios(cfg, seed_override=args.seed)
    graph = run_snac(cfg.params, sset)
    out = _outdir(cfg, args)
    path = os.path.join(out, "graph.txt")
    save_graph(graph, path, provenance=args.provenance)
    full = full_pair_count(len(sset))
    ratio = len(graph) / full if full else 0.0
    print(f"{len(graph)} pairs (full: {full})")
    print(f"reduction ratio: {ratio:.4f}")
    print(f"wrote {path}")
    return 0


def cmd_verify(cfg: ExperimentConfig, args) -> int:
    sset = build_scenarios(cfg, seed_override=args.seed)
    graph = load_graph(args.graph)
    report = check_necessity(cfg.params, sset, graph)
    for line in report.summary_lines():
        print(line)
    out = _outdir(cfg, args)
    path = os.path.join(out, "verify.json")
    with open(path, "w", encoding="ascii") as fh:
        json.dump(report.to_dict(), fh, indent=2, sort_keys=True)
        fh.write("\n")
    print(f"wrote {path}")
    return 0 if report.sufficient else 2


def cmd_emit(cfg: ExperimentConfig, args) -> int:
    if cfg.case is None:
        raise ConfigError("case_study", "emit requires a case study")
    sset = build_scenarios(cfg, seed_override=args.seed)
    if args.pairs == "full":
        pairs = list(itertools.combinations(range(len(sset)), 2))
    else:
        pairs = run_snac(cfg.params, sset).edge_list()
    model = build_model(cfg.case, sset, pairs)
    out = _outdir(cfg, args)
    if args.format == "mps":
        path = os.path.join(out, "model.mps")
        emit_mps(model, path)
    else:
        path = os.path.join(out, "model.lp")
        emit_lp(model, path)
    print(
        f"{args.pairs} pairs: {len(pairs)}, NAC rows: {model.nac_row_count()}, "
        f"total rows: {len(model.constraints())}"
    )
    print(f"wrote {path}")
    return 0


# Building models beyond this many NAC rows is skipped during bench runs;
# the row counts themselves are still reported via the closed form.
BENCH_MODEL_ROW_LIMIT = 200_000


def cmd_bench(cfg: ExperimentConfig, args) -> int:
    reps = cfg.repetitions
    n_drugs = len(cfg.params)
    pairs_list: list[int] = []
    nacs_list: list[int] = []
    snac_times: list[float] = []
    gen_snac_times: list[float] = []
    gen_full_times: list[float] = []
    n_scen = None
    for rep in range(reps):
        sset = build_scenarios(cfg, seed_override=args.seed, repetition=rep)
        n_scen = len(sset)
        t0 = time.perf_counter()
        graph = run_snac(cfg.params, sset)
        snac_times.append(time.perf_counter() - t0)
        pairs_list.append(len(graph))
        if cfg.case is not None:
            m = cfg.case.trial_count
            T = cfg.case.horizon
            nacs_list.append(count_nacs(len(graph), n_drugs, m, T, n_scen))
            full_rows = count_nacs(full_pair_count(n_scen), n_drugs, m, T, n_scen)
            if full_rows <= BENCH_MODEL_ROW_LIMIT:
                t0 = time.perf_counter()
                build_model(cfg.case, sset, graph.edge_list())
                gen_snac_times.append(time.perf_counter() - t0)
                t0 = time.perf_counter()
                build_model(
                    cfg.case,
                    sset,
                    list(itertools.combinations(range(n_scen), 2)),
                )
                gen_full_times.append(time.perf_counter() - t0)
    full_pairs = full_pair_count(n_scen)
    row = {
        "parameters": n_drugs,
        "outcomes": [p.outcome_count for p in cfg.params],
        "scenarios": n_scen,
        "repetitions": reps,
        "pairs_avg": sum(pairs_list) / reps,
        "pairs_max": max(pairs_list),
        "pairs_full": full_pairs,
        "snac_time_avg": sum(snac_times) / reps,
    }
    if cfg.case is not None:
        m = cfg.case.trial_count
        T = cfg.case.horizon
        row["nacs_avg"] = sum(nacs_list) / reps
        row["nacs_max"] = max(nacs_list)
        row["nacs_full"] = count_nacs(full_pairs, n_drugs, m, T, n_scen)
        if gen_snac_times:
            row["modelgen_snac_avg"] = sum(gen_snac_times) / len(gen_snac_times)
            row["modelgen_full_avg"] = sum(gen_full_times) / len(gen_full_times)
    lines = _bench_table(row)
    for ln in lines:
        print(ln)
    out = _outdir(cfg, args)
    txt = os.path.join(out, "bench.txt")
    with open(txt, "w", encoding="ascii") as fh:
        fh.write("\n".join(lines) + "\n")
    js = os.path.join(out, "bench.json")
    with open(js, "w", encoding="ascii") as fh:
        json.dump(row, fh, indent=2, sort_keys=True)
        fh.write("\n")
    print(f"wrote {txt} and {js}")
    return 0


def _bench_table(row: dict) -> list[str]:
    headers = ["metric", "average", "max", "full"]
    body = [
        (
            "pairs",
            f"{row['pairs_avg']:.1f}",
            str(row["pairs_max"]),
            str(row["pairs_full"]),
        )
    ]
    if "nacs_avg" in row:
        body.append(
            (
                "nacs",
                f"{row['nacs_avg']:.1f}",
                str(row["nacs_max"]),
                str(row["nacs_full"]),
            )
        )
    times = [("snac time [s]", f"{row['snac_time_avg']:.3f}", "", "")]
    if "modelgen_snac_avg" in row:
        times.append(
            (
                "model gen [s]",
                f"{row['modelgen_snac_avg']:.3f}",
                "",
                f"{row['modelgen_full_avg']:.3f}",
            )
        )
    rows = [headers] + body + times
    widths = [max(len(r[i]) for r in rows) for i in range(4)]
    lines = [
        f"{row['parameters']} parameters, outcomes {row['outcomes']}, "
        f"{row['scenarios']} scenarios, {row['repetitions']} repetition(s)"
    ]
    for r in rows:
        lines.append("  ".join(cell.ljust(w) for cell, w in zip(r, widths)).rstrip())
    return lines


def main(argv=None) -> int:
    parser = _Parser(prog="nacgen", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)
    for name, fn in (
        ("sample", cmd_sample),
        ("reduce", cmd_reduce),
        ("verify", cmd_verify),
        ("emit", cmd_emit),
        ("bench", cmd_bench),
    ):
        p = sub.add_parser(name, parents=[], add_help=True)
        p.set_defaults(func=fn)
        p.add_argument("--config", required=True, help="experiment config file")
        p.add_argument("--seed", type=int, default=None, help="seed override")
        p.add_argument("--out", default=None, help="output directory override")
        if name == "reduce":
            p.add_argument(
                "--provenance",
                action="store_true",
                help="serialize per-edge provenance",
            )
        if name == "verify":
            p.add_argument("--graph", required=True, help="graph file to verify")
        if name == "emit":
            p.add_argument("--pairs", choices=("full", "snac"), required=True)
            p.add_argument("--format", choices=("lp", "mps"), default="lp")
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # usage errors exit 1, --help exits 0
        return int(exc.code) if exc.code else 0
    try:
        cfg = load_config(args.config)
        return args.func(cfg, args)
    except (ConfigError, NacgenError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

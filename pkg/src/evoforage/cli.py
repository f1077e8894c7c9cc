"""Command-line experiment harness.

Subcommands: run (one evolution run), compare (encodings x seeds batch),
transfer (continue snapshot populations in a new world), baseline (random
policy calibration), scaling (genotype size tables).  Outputs are CSV files
plus self-contained SVG charts; identical (config, seed) always produce
byte-identical outputs, at any worker count.

Exit codes: 0 success, 2 configuration error, 1 runtime error.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import evolution, rng as rngmod
from .animat import AnimatRng, random_policy_life
from .charts import line_chart
from .config import ConfigError, RunConfig, load_config
from .evolution import (
    GenerationStats,
    ga_params_from_config,
    load_population,
    run_evolution,
    save_population,
    transfer_run,
)
from .genome_lsys import genotype_gene_count, ls_proof_stats
from .world import generate_world

STATS_HEADER = "generation,max_food,mean_food,best_ever,starved,mean_clicks"
DEFAULT_THRESHOLD = 2000
DEFAULT_SCALING_SIZES = (32, 64, 128, 256, 512, 1024, 2048, 4096)


def _stats_row(s: GenerationStats) -> str:
    return (f"{s.generation},{s.max_food},{s.mean_food:.4f},{s.best_ever},"
            f"{s.starved},{s.mean_clicks:.4f}")


def write_stats_csv(path: Path, stats: list[GenerationStats]) -> None:
    lines = [STATS_HEADER] + [_stats_row(s) for s in stats]
    path.write_text("\n".join(lines) + "\n")


def _mean(values) -> float:
    return sum(values) / len(values) if values else 0.0


def _stdev(values) -> float:
    """Sample standard deviation (n-1 denominator)."""
    if len(values) < 2:
        return 0.0
    m = _mean(values)
    return (sum((v - m) ** 2 for v in values) / (len(values) - 1)) ** 0.5


def first_crossing(stats: list[GenerationStats], threshold: int):
    """First generation whose max food strictly exceeds the threshold."""
    for s in stats:
        if s.max_food > threshold:
            return s.generation
    return None


def _load_cfg(args) -> RunConfig:
    if getattr(args, "config", None):
        path = Path(args.config)
        if not path.exists():
            raise ConfigError(f"config file not found: {path}")
        cfg = load_config(path.read_text())
    else:
        cfg = RunConfig()
    if getattr(args, "seed", None) is not None:
        cfg.seed = args.seed
    cfg.validate()
    return cfg


def cmd_run(cfg: RunConfig, out: Path, jobs: int) -> int:
    """One evolution run: stats.csv (streamed per generation), final.pop,
    fitness.svg."""
    out.mkdir(parents=True, exist_ok=True)
    csv_path = out / "stats.csv"
    with open(csv_path, "w") as fh:
        fh.write(STATS_HEADER + "\n")
        fh.flush()

        def on_generation(row: GenerationStats) -> None:
            fh.write(_stats_row(row) + "\n")
            fh.flush()

        stats, population = run_evolution(cfg, jobs=jobs, on_generation=on_generation)

    (out / "final.pop").write_text(save_population(population, cfg.generations))
    gens = [s.generation for s in stats]
    chart = line_chart(
        [("max food", gens, [s.max_food for s in stats]),
         ("mean food", gens, [s.mean_food for s in stats])],
        title=f"{cfg.encoding} in {cfg.world_type} (seed {cfg.seed})",
        x_label="generation", y_label="food collected")
    (out / "fitness.svg").write_text(chart)
    return 0


def cmd_compare(cfg: RunConfig, encodings: list[str], seeds: list[int], out: Path,
                jobs: int, threshold: int = DEFAULT_THRESHOLD) -> int:
    """Encodings x seeds batch with summary statistics and charts."""
    if len(seeds) < 2:
        raise ConfigError("compare needs at least 2 seeds")
    for encoding in encodings:
        if encoding not in evolution.ENCODINGS:
            raise ConfigError(f"unknown encoding {encoding!r}")
    out.mkdir(parents=True, exist_ok=True)

    runs: dict[str, list[tuple[int, list[GenerationStats] | None]]] = {e: [] for e in encodings}
    failed = 0
    for encoding in encodings:
        for seed in seeds:
            run_cfg = RunConfig(**{**cfg.__dict__, "encoding": encoding, "seed": seed})
            try:
                stats, _ = run_evolution(run_cfg, jobs=jobs)
            except Exception as exc:  # noqa: BLE001 - report failed runs, keep batch alive
                print(f"run {encoding} seed {seed} failed: {exc}", file=sys.stderr)
                failed += 1
                runs[encoding].append((seed, None))
                continue
            runs[encoding].append((seed, stats))
            write_stats_csv(out / f"{encoding}_seed{seed}.csv", stats)

    run_rows = ["encoding,seed,final_max,final_mean,best_ever,first_crossing,status"]
    summary_rows = ["encoding,runs,mean_max,std_max,cv_max,mean_mean,std_mean,cv_mean"]
    mean_max_series = []
    trace_series = []
    for encoding in encodings:
        finals_max, finals_mean = [], []
        per_gen: list[list[int]] = []
        for seed, stats in runs[encoding]:
            if stats is None:
                run_rows.append(f"{encoding},{seed},,,,,error")
                continue
            crossing = first_crossing(stats, threshold)
            run_rows.append(
                f"{encoding},{seed},{stats[-1].max_food},{stats[-1].mean_food:.4f},"
                f"{stats[-1].best_ever},{'' if crossing is None else crossing},ok")
            finals_max.append(stats[-1].max_food)
            finals_mean.append(stats[-1].mean_food)
            per_gen.append([s.max_food for s in stats])
            trace_series.append((f"{encoding} s{seed}",
                                 [s.generation for s in stats],
                                 [s.max_food for s in stats]))
        if finals_max:
            mm, sm = _mean(finals_max), _stdev(finals_max)
            ma, sa = _mean(finals_mean), _stdev(finals_mean)
            cv_max = f"{sm / mm:.4f}" if mm > 0 else ""
            cv_mean = f"{sa / ma:.4f}" if ma > 0 else ""
            summary_rows.append(
                f"{encoding},{len(finals_max)},{mm:.4f},{sm:.4f},{cv_max},"
                f"{ma:.4f},{sa:.4f},{cv_mean}")
            gens = list(range(1, len(per_gen[0]) + 1))
            means = [_mean([trace[g] for trace in per_gen]) for g in range(len(gens))]
            mean_max_series.append((encoding, gens, means))
        else:
            summary_rows.append(f"{encoding},0,,,,,,")

    (out / "compare_runs.csv").write_text("\n".join(run_rows) + "\n")
    (out / "compare_summary.csv").write_text("\n".join(summary_rows) + "\n")
    (out / "compare_mean_max.svg").write_text(line_chart(
        mean_max_series, title="mean of max food per generation",
        x_label="generation", y_label="food collected"))
    (out / "compare_traces.svg").write_text(line_chart(
        trace_series, title="individual run traces (max food)",
        x_label="generation", y_label="food collected"))
    print("\n".join(summary_rows))
    return 1 if failed else 0


def cmd_transfer(cfg: RunConfig, snapshot_paths: list[str], new_world: str,
                 generations: int, out: Path, jobs: int) -> int:
    """Continue each snapshot population in a new world type."""
    populations = []
    for raw in snapshot_paths:
        path = Path(raw)
        if not path.exists():
            raise ConfigError(f"snapshot not found: {path}")
        try:
            population, _ = load_population(path.read_text())
        except ValueError as exc:
            raise ConfigError(f"{path}: {exc}") from None
        populations.append((path.stem, population))
    ns = {p.n for _, p in populations}
    if len(ns) > 1:
        raise ConfigError(f"incompatible neuron counts across snapshots: {sorted(ns)}")

    out.mkdir(parents=True, exist_ok=True)
    ga = ga_params_from_config(cfg)
    series = []
    rows = ["snapshot,encoding,gen1_max,gen1_mean,final_max,final_mean,best_ever"]
    for i, (stem, population) in enumerate(populations):
        stats = transfer_run(population, new_world, generations, ga, cfg.seed,
                             width=cfg.width, height=cfg.height,
                             layout_seed=cfg.layout_seed, jobs=jobs)
        write_stats_csv(out / f"transfer_{i}_{stem}.csv", stats)
        rows.append(f"{stem},{population.encoding},{stats[0].max_food},"
                    f"{stats[0].mean_food:.4f},{stats[-1].max_food},"
                    f"{stats[-1].mean_food:.4f},{stats[-1].best_ever}")
        series.append((f"{population.encoding} {stem}",
                       [s.generation for s in stats],
                       [s.max_food for s in stats]))
    (out / "transfer_summary.csv").write_text("\n".join(rows) + "\n")
    (out / "transfer.svg").write_text(line_chart(
        series, title=f"transfer to {new_world}",
        x_label="generation", y_label="max food"))
    print("\n".join(rows))
    return 0


def cmd_baseline(cfg: RunConfig, world_type: str, lives: int, out: Path) -> int:
    """Random-policy calibration: mean/max/stddev food over seeded lives."""
    if lives < 1:
        raise ConfigError("baseline needs at least 1 life")
    world = generate_world(world_type, cfg.width, cfg.height, cfg.layout_seed)
    life_params = ga_params_from_config(cfg).life
    fits = []
    for i in range(lives):
        streams = AnimatRng(rngmod.stream(cfg.seed, 0, i, rngmod.FOOD),
                            rngmod.stream(cfg.seed, 0, i, rngmod.SPAWN))
        fits.append(random_policy_life(world, life_params, streams).fitness)
    mean, top, std = _mean(fits), max(fits), _stdev(fits)
    out.mkdir(parents=True, exist_ok=True)
    (out / "baseline.csv").write_text(
        "world_type,lives,mean,max,stddev\n"
        f"{world_type},{lives},{mean:.4f},{top},{std:.4f}\n")
    print(f"baseline {world_type}: lives={lives} mean={mean:.2f} max={top} std={std:.2f}")
    return 0


def cmd_scaling(sizes: list[int], out: Path, levels: int = 8) -> int:
    """Genotype growth table plus the constant-growth proof family table."""
    scaling_rows = ["n,lsys_genes,matrix_genes,ratio"]
    for n in sizes:
        try:
            lsys = genotype_gene_count(n)
        except ValueError as exc:
            raise ConfigError(str(exc)) from None
        matrix = n * n
        scaling_rows.append(f"{n},{lsys},{matrix},{matrix / lsys:.2f}")
    proof_rows = ["level,symbols,terminals,neurons"]
    for i in range(1, levels + 1):
        row = ls_proof_stats(i)
        proof_rows.append(f"{row.level},{row.symbols},{row.terminals},{row.neurons}")
    out.mkdir(parents=True, exist_ok=True)
    (out / "scaling.csv").write_text("\n".join(scaling_rows) + "\n")
    (out / "proof.csv").write_text("\n".join(proof_rows) + "\n")
    print("\n".join(scaling_rows))
    print("\n".join(proof_rows))
    return 0


def _int_list(raw: str) -> list[int]:
    try:
        return [int(tok) for tok in raw.split(",") if tok.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {raw!r}")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="evoforage",
        description="Evolve Hebbian foraging animats under different genetic encodings.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", help="run configuration file (key = value lines)")
        p.add_argument("--seed", type=int, help="override the run seed")
        p.add_argument("--out", default="out", help="output directory")
        p.add_argument("--jobs", type=int, default=1, help="parallel worker count")

    p_run = sub.add_parser("run", help="one evolution run")
    common(p_run)

    p_cmp = sub.add_parser("compare", help="batch of (encoding, seed) runs")
    common(p_cmp)
    p_cmp.add_argument("--encodings", type=str, default="lsys,matrixlsg,matrix")
    p_cmp.add_argument("--seeds", type=_int_list, default=[1, 2, 3, 4, 5])
    p_cmp.add_argument("--threshold", type=int, default=DEFAULT_THRESHOLD,
                       help="food level for first-crossing reporting")

    p_tr = sub.add_parser("transfer", help="continue snapshot populations in a new world")
    common(p_tr)
    p_tr.add_argument("snapshots", nargs="+", help="population snapshot files")
    p_tr.add_argument("--world", required=True, choices=("Open", "RoundedBarrier1", "Maze"))
    p_tr.add_argument("--generations", type=int, default=100)

    p_base = sub.add_parser("baseline", help="random-policy calibration")
    common(p_base)
    p_base.add_argument("--world", default=None,
                        choices=("Open", "RoundedBarrier1", "Maze"))
    p_base.add_argument("--lives", type=int, default=200)

    p_scale = sub.add_parser("scaling", help="genotype size tables")
    common(p_scale)
    p_scale.add_argument("--sizes", type=_int_list,
                         default=list(DEFAULT_SCALING_SIZES))
    p_scale.add_argument("--levels", type=int, default=8)
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    out = Path(args.out)
    try:
        if args.command == "scaling":
            return cmd_scaling(args.sizes, out, args.levels)
        cfg = _load_cfg(args)
        if args.command == "run":
            return cmd_run(cfg, out, args.jobs)
        if args.command == "compare":
            encodings = [e.strip() for e in args.encodings.split(",") if e.strip()]
            return cmd_compare(cfg, encodings, args.seeds, out, args.jobs, args.threshold)
        if args.command == "transfer":
            return cmd_transfer(cfg, args.snapshots, args.world, args.generations,
                                out, args.jobs)
        if args.command == "baseline":
            world_type = args.world or cfg.world_type
            return cmd_baseline(cfg, world_type, args.lives, out)
        raise ConfigError(f"unknown command {args.command!r}")
    except (ConfigError, argparse.ArgumentTypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # noqa: BLE001 - top-level harness boundary
        print(f"runtime error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

"""Command-line harness: experiment grids, single-function analysis, plot data.

Artifacts are deterministic given the seed: per-run convergence CSVs, one
summary JSON per grid cell, and a top-level aggregate table. All files
echo the full configuration, including defaults, so any number in them can
be reproduced from the file alone.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import hashlib
import json
import sys
from dataclasses import dataclass
from pathlib import Path

from .core import (
    TruthTable,
    algebraic_degree,
    balancedness_deficit,
    classify_spectrum,
    nonlinearity,
    truth_table_to_anf,
    walsh_transform,
)
from .encodings import ANF, GP, TT
from .engine import CHECKPOINT_INTERVAL, EaConfig, derive_seeds, run_batch, _splitmix64
from .fitness import FITNESS_FUNCTIONS

MIN_EXPERIMENT_N = 5
MAX_EXPERIMENT_N = 16


@dataclass(frozen=True)
class ExperimentSpec:
    """A grid of (n, encoding, fitness) cells sharing one engine setup."""

    sizes: tuple
    encodings: tuple = (TT, ANF, GP)
    fitness_functions: tuple = ("f1", "f2")
    population_size: int = 500
    evaluation_budget: int = 1_000_000
    mutation_probability: float = 0.5
    repetitions: int = 30
    master_seed: int = 0
    output_dir: str = "results"
    jobs: int = 1
    crossovers: tuple | None = None
    mutations: tuple | None = None

    def __post_init__(self):
        for name in ("sizes", "encodings", "fitness_functions"):
            object.__setattr__(self, name, tuple(getattr(self, name)))
        if not (self.sizes and self.encodings and self.fitness_functions):
            raise ValueError("experiment grid is empty")
        for n in self.sizes:
            if not MIN_EXPERIMENT_N <= n <= MAX_EXPERIMENT_N:
                raise ValueError(
                    f"experiment sizes must lie in [{MIN_EXPERIMENT_N}, {MAX_EXPERIMENT_N}], got {n}"
                )
        if self.jobs < 1:
            raise ValueError("jobs must be at least 1")

    def cells(self):
        for n in self.sizes:
            for encoding in self.encodings:
                for fitness in self.fitness_functions:
                    yield n, encoding, fitness


def _cell_name(n, encoding, fitness) -> str:
    return f"n{n}_{encoding}_{fitness}"


def _cell_seed(master_seed, n, encoding, fitness) -> int:
    # stable across platforms and processes, unlike hash()
    label = f"{n}/{encoding}/{fitness}".encode()
    digest = int.from_bytes(hashlib.sha256(label).digest()[:8], "big")
    return _splitmix64(master_seed ^ digest)


def _cell_config(spec: ExperimentSpec, n, encoding, fitness) -> EaConfig:
    return EaConfig(
        n=n,
        encoding=encoding,
        fitness=fitness,
        population_size=spec.population_size,
        evaluation_budget=spec.evaluation_budget,
        mutation_probability=spec.mutation_probability,
        master_seed=_cell_seed(spec.master_seed, n, encoding, fitness),
        repetitions=spec.repetitions,
        crossovers=spec.crossovers,
        mutations=spec.mutations,
    )


def _profile_dict(profile) -> dict:
    return {
        "kind": profile.kind,
        "distinct_values": list(profile.distinct_values),
        "exponents": list(profile.exponents),
        "description": profile.describe(),
    }


def _write_trace_csv(path: Path, samples):
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["evaluations", "best_fitness", "best_nl", "five_valued"])
        for evals, fit, nl, five in samples:
            writer.writerow([evals, repr(float(fit)), nl, int(five)])


def _write_summary_json(path: Path, config: EaConfig, seeds, results, summary):
    payload = {
        "config": dataclasses.asdict(config),
        "seeds": list(seeds),
        "summary": summary,
        "runs": [
            {
                "seed": r.seed,
                "best_fitness": r.best_fitness,
                "best_nonlinearity": r.best_nonlinearity,
                "five_valued": r.best_profile.is_five_valued,
                "profile": _profile_dict(r.best_profile),
                "best_genotype": r.best_genotype,
                "best_truth_table": r.best_truth_table,
                "evaluations": r.evaluations,
            }
            for r in results
        ],
    }
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")


def run_experiment(spec: ExperimentSpec) -> int:
    """Execute every grid cell and write all artifacts under the output dir."""
    out = Path(spec.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    (out / "experiment.json").write_text(
        json.dumps(dataclasses.asdict(spec), indent=2, sort_keys=True) + "\n"
    )
    table_rows = []
    for n, encoding, fitness in spec.cells():
        config = _cell_config(spec, n, encoding, fitness)
        name = _cell_name(n, encoding, fitness)
        print(f"[{name}] {spec.repetitions} runs, budget {spec.evaluation_budget} ...", flush=True)
        results, summary = run_batch(config, jobs=spec.jobs)
        cell_dir = out / name
        cell_dir.mkdir(exist_ok=True)
        seeds = derive_seeds(config.master_seed, config.repetitions)
        for i, result in enumerate(results):
            _write_trace_csv(cell_dir / f"run_{i:02d}.csv", result.samples)
        _write_summary_json(cell_dir / "summary.json", config, seeds, results, summary)
        table_rows.append(
            [
                n,
                encoding,
                fitness,
                repr(summary["fitness_avg"]),
                repr(summary["fitness_stdev"]),
                repr(summary["fitness_max"]),
                summary["nl_max"],
                repr(summary["five_valued_rate"]),
            ]
        )
        print(
            f"[{name}] avg={summary['fitness_avg']:.4f} max={summary['fitness_max']:.4f} "
            f"best_nl={summary['nl_max']} five_valued_rate={summary['five_valued_rate']:.2f}",
            flush=True,
        )
    with (out / "results.csv").open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(
            ["size", "encoding", "fitness", "avg", "stdev", "max", "best_nl", "five_valued_rate"]
        )
        writer.writerows(table_rows)
    return 0


def analyze(truth_table_hex: str, n: int) -> dict:
    """Property report for one function given as a truth-table hex string."""
    tt = TruthTable.from_hex(truth_table_hex, n)
    spectrum = walsh_transform(tt)
    profile = classify_spectrum(spectrum)
    report = {
        "n": tt.n,
        "hex": truth_table_hex,
        "weight": tt.weight,
        "balanced": balancedness_deficit(tt) == 0,
        "deficit": balancedness_deficit(tt),
        "nonlinearity": nonlinearity(spectrum),
        "algebraic_degree": algebraic_degree(truth_table_to_anf(tt)),
        "distinct_values": list(spectrum.distinct_values()),
        "profile": _profile_dict(profile),
    }
    return report


def _print_report(report: dict):
    print(f"n:                {report['n']}")
    print(f"weight:           {report['weight']}")
    print(f"balanced:         {report['balanced']} (deficit {report['deficit']})")
    print(f"nonlinearity:     {report['nonlinearity']}")
    print(f"algebraic degree: {report['algebraic_degree']}")
    print(f"distinct values:  {report['distinct_values']}")
    print(f"profile:          {report['profile']['description']}")


def _read_trace(path: Path):
    rows = []
    with path.open(newline="") as fh:
        reader = csv.DictReader(fh)
        for row in reader:
            rows.append((int(row["evaluations"]), float(row["best_fitness"])))
    if not rows:
        raise ValueError("no data rows")
    return rows


def export_plot_data(results_dir) -> int:
    """Distill run artifacts into violin and convergence plot inputs."""
    root = Path(results_dir)
    if not root.is_dir():
        raise FileNotFoundError(f"not a results directory: {results_dir}")
    cell_dirs = sorted(p.parent for p in root.glob("*/summary.json"))
    if not cell_dirs:
        raise FileNotFoundError(f"no cell summaries under {results_dir}")
    broken = []
    for cell_dir in cell_dirs:
        try:
            payload = json.loads((cell_dir / "summary.json").read_text())
            runs = payload["runs"]
            budget = payload["config"]["evaluation_budget"]
        except (json.JSONDecodeError, KeyError) as exc:
            broken.append(f"{cell_dir / 'summary.json'}: {exc}")
            continue
        with (root / f"{cell_dir.name}_distribution.csv").open("w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["run", "best_fitness", "best_nonlinearity", "five_valued"])
            for i, r in enumerate(runs):
                writer.writerow(
                    [i, repr(r["best_fitness"]), r["best_nonlinearity"], int(r["five_valued"])]
                )
        grid = list(range(CHECKPOINT_INTERVAL, budget + 1, CHECKPOINT_INTERVAL))
        if not grid or grid[-1] != budget:
            grid.append(budget)
        series = []
        for i in range(len(runs)):
            trace_path = cell_dir / f"run_{i:02d}.csv"
            try:
                rows = _read_trace(trace_path)
            except (OSError, ValueError, KeyError) as exc:
                broken.append(f"{trace_path}: {exc}")
                continue
            # step function of best fitness, resampled onto the grid
            values, k, current = [], 0, rows[0][1]
            for point in grid:
                while k < len(rows) and rows[k][0] <= point:
                    current = rows[k][1]
                    k += 1
                values.append(current)
            series.append(values)
        if series:
            with (root / f"{cell_dir.name}_convergence.csv").open("w", newline="") as fh:
                writer = csv.writer(fh)
                writer.writerow(["evaluations", "mean_best_fitness"])
                for j, point in enumerate(grid):
                    mean = sum(s[j] for s in series) / len(series)
                    writer.writerow([point, repr(mean)])
    if broken:
        raise ValueError("corrupt results:\n  " + "\n  ".join(broken))
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fivespec",
        description="Search for balanced Boolean functions with five-valued spectra.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    search = sub.add_parser("search", help="run an experiment grid")
    search.add_argument("--n", type=int, nargs="+", required=True, help="variable counts")
    search.add_argument(
        "--encoding", nargs="+", default=[TT, ANF, GP], choices=[TT, ANF, GP]
    )
    search.add_argument(
        "--fitness", nargs="+", default=list(FITNESS_FUNCTIONS), choices=list(FITNESS_FUNCTIONS)
    )
    search.add_argument("--pop", type=int, default=500, help="population size")
    search.add_argument("--evals", type=int, default=1_000_000, help="evaluation budget per run")
    search.add_argument("--reps", type=int, default=30, help="repetitions per cell")
    search.add_argument("--seed", type=int, default=0, help="master seed")
    search.add_argument("--out", default="results", help="output directory")
    search.add_argument("--jobs", type=int, default=1, help="parallel runs per cell")
    search.add_argument("--p-mut", type=float, default=0.5, help="child mutation probability")
    search.add_argument("--crossovers", nargs="+", default=None, help="crossover operator subset")
    search.add_argument("--mutations", nargs="+", default=None, help="mutation operator subset")

    an = sub.add_parser("analyze", help="report the properties of one function")
    an.add_argument("hex", help="truth table as a hex string, index 0 first")
    an.add_argument("--n", type=int, default=None, help="variable count (inferred if omitted)")
    an.add_argument("--json", action="store_true", help="emit the report as JSON")

    ex = sub.add_parser("export", help="write plot-ready CSVs from a results directory")
    ex.add_argument("results_dir", help="directory produced by the search command")
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "search":
            spec = ExperimentSpec(
                sizes=tuple(args.n),
                encodings=tuple(args.encoding),
                fitness_functions=tuple(args.fitness),
                population_size=args.pop,
                evaluation_budget=args.evals,
                mutation_probability=args.p_mut,
                repetitions=args.reps,
                master_seed=args.seed,
                output_dir=args.out,
                jobs=args.jobs,
                crossovers=tuple(args.crossovers) if args.crossovers else None,
                mutations=tuple(args.mutations) if args.mutations else None,
            )
            return run_experiment(spec)
        if args.command == "analyze":
            report = analyze(args.hex, args.n)
            if args.json:
                print(json.dumps(report, indent=2, sort_keys=True))
            else:
                _print_report(report)
            return 0
        if args.command == "export":
            return export_plot_data(args.results_dir)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())

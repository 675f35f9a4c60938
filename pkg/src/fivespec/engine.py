"""Steady-state tournament search over Boolean function genotypes.

One step samples three distinct individuals, eliminates the worst, crosses
the two survivors into a single child, mutates it with a fixed probability
and slots it where the loser stood. The budget counts fitness evaluations,
including the initial population, and is exhausted exactly.
"""

from __future__ import annotations

import random
import statistics
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from .core import (
    MAX_VARIABLES,
    SpectrumProfile,
    bits_to_hex,
    classify_spectrum,
    walsh_transform,
)
from .encodings import (
    ANF,
    GP,
    TT,
    GpTree,
    decode,
    evaluate_tree,
    random_bitstring,
    random_tree,
    tree_to_string,
)
from .fitness import FITNESS_FUNCTIONS, FitnessValue
from .variation import DEFAULT_MAX_DEPTH, make_suite, pick_and_apply

ENCODINGS = (TT, ANF, GP)
TOURNAMENT_SIZE = 3
CHECKPOINT_INTERVAL = 10_000

_MASK64 = (1 << 64) - 1


@dataclass(frozen=True)
class EaConfig:
    """Everything a run depends on; two configs equal means identical runs."""

    n: int
    encoding: str = GP
    fitness: str = "f1"
    population_size: int = 500
    evaluation_budget: int = 1_000_000
    mutation_probability: float = 0.5
    tournament_size: int = TOURNAMENT_SIZE
    min_init_depth: int = 2
    max_init_depth: int = 5
    max_depth: int = DEFAULT_MAX_DEPTH
    master_seed: int = 0
    repetitions: int = 30
    crossovers: tuple | None = None  # None = the full suite for the encoding
    mutations: tuple | None = None

    def __post_init__(self):
        object.__setattr__(self, "encoding", str(self.encoding).lower())
        object.__setattr__(self, "fitness", str(self.fitness).lower())
        if self.crossovers is not None:
            object.__setattr__(self, "crossovers", tuple(self.crossovers))
        if self.mutations is not None:
            object.__setattr__(self, "mutations", tuple(self.mutations))
        if not 2 <= self.n <= MAX_VARIABLES:
            raise ValueError(f"n must be in [2, {MAX_VARIABLES}], got {self.n}")
        if self.encoding not in ENCODINGS:
            raise ValueError(f"encoding must be one of {ENCODINGS}, got {self.encoding!r}")
        if self.fitness not in FITNESS_FUNCTIONS:
            raise ValueError(
                f"fitness must be one of {tuple(FITNESS_FUNCTIONS)}, got {self.fitness!r}"
            )
        if self.population_size < 3:
            raise ValueError("population_size must be at least 3")
        if self.evaluation_budget < self.population_size:
            raise ValueError("evaluation_budget must cover the initial population")
        if not 0.0 <= self.mutation_probability <= 1.0:
            raise ValueError("mutation_probability must be in [0, 1]")
        if self.tournament_size != TOURNAMENT_SIZE:
            raise ValueError("the elimination tournament is fixed at size 3")
        if not 0 <= self.min_init_depth <= self.max_init_depth <= self.max_depth:
            raise ValueError("need 0 <= min_init_depth <= max_init_depth <= max_depth")
        if self.repetitions < 1:
            raise ValueError("repetitions must be at least 1")


class Individual:
    __slots__ = ("genotype", "fitness")

    def __init__(self, genotype, fitness: FitnessValue):
        self.genotype = genotype
        self.fitness = fitness


@dataclass(frozen=True)
class RunResult:
    """Outcome of one run; every field is re-derivable from config + seed."""

    config: EaConfig
    seed: int
    best_genotype: str
    best_truth_table: str
    best_profile: SpectrumProfile
    best_fitness: float
    best_breakdown: FitnessValue
    best_nonlinearity: int
    evaluations: int
    trace: tuple  # (evaluations, best_fitness) at strict improvements
    samples: tuple  # (evaluations, best_fitness, best_nl, five_valued) rows


def _make_evaluator(config: EaConfig):
    fit = FITNESS_FUNCTIONS[config.fitness]
    n = config.n
    if config.encoding == GP:

        def evaluate(genotype):
            tt = evaluate_tree(genotype, n)
            return fit(tt, walsh_transform(tt))

    else:

        def evaluate(genotype):
            tt = decode(genotype)
            return fit(tt, walsh_transform(tt))

    return evaluate


def _phenotype(genotype, config: EaConfig):
    if config.encoding == GP:
        return evaluate_tree(genotype, config.n)
    return decode(genotype)


def _make_initializer(config: EaConfig):
    n = config.n
    if config.encoding == GP:
        limits = (config.min_init_depth, config.max_init_depth)
        return lambda rng: random_tree(n, limits, rng)
    mode = config.encoding
    return lambda rng: random_bitstring(n, mode, rng)


def _make_suite_for(config: EaConfig):
    return make_suite(
        config.encoding,
        config.n,
        crossover_names=config.crossovers,
        mutation_names=config.mutations,
        max_depth=config.max_depth,
        subtree_limits=(0, config.max_init_depth),
    )


def serialize_genotype(genotype, config: EaConfig) -> str:
    """Report form: prefix notation for trees, genotype-bit hex otherwise."""
    if isinstance(genotype, GpTree):
        return tree_to_string(genotype)
    return bits_to_hex(genotype.bits)


def _worst_index(population, idxs, rng):
    lo = min(population[i].fitness.value for i in idxs)
    tied = [i for i in idxs if population[i].fitness.value == lo]
    if len(tied) == 1:
        return tied[0]
    return tied[rng.randrange(len(tied))]


def _tournament_step(population, config, rng, suite, evaluate):
    idxs = rng.sample(range(len(population)), TOURNAMENT_SIZE)
    worst = _worst_index(population, idxs, rng)
    a, b = (population[i].genotype for i in idxs if i != worst)
    child_genotype = pick_and_apply(suite, (a, b), rng)
    if rng.random() < config.mutation_probability:
        child_genotype = pick_and_apply(suite, (child_genotype,), rng)
    child = Individual(child_genotype, evaluate(child_genotype))
    population[worst] = child
    return child


def sst_step(population, config: EaConfig, rng, suite=None, evaluate=None):
    """One elimination tournament; exactly one evaluation; size preserved."""
    if len(population) < TOURNAMENT_SIZE:
        raise ValueError("population must hold at least three individuals")
    if suite is None:
        suite = _make_suite_for(config)
    if evaluate is None:
        evaluate = _make_evaluator(config)
    _tournament_step(population, config, rng, suite, evaluate)
    return population


def run(config: EaConfig, seed: int) -> RunResult:
    """One full run: random init, steady-state loop, best-ever reporting."""
    rng = random.Random(seed)
    evaluate = _make_evaluator(config)
    suite = _make_suite_for(config)
    fresh = _make_initializer(config)

    population = []
    evaluations = 0
    best = None
    best_five = False
    best_nl = 0
    trace = []
    samples = []

    def improve(ind):
        nonlocal best, best_five, best_nl
        best = ind
        profile = classify_spectrum(walsh_transform(_phenotype(ind.genotype, config)))
        best_five = profile.is_five_valued
        best_nl = ind.fitness.nonlinearity
        trace.append((evaluations, ind.fitness.value))
        samples.append((evaluations, ind.fitness.value, best_nl, best_five))

    for _ in range(config.population_size):
        genotype = fresh(rng)
        ind = Individual(genotype, evaluate(genotype))
        evaluations += 1
        population.append(ind)
        if best is None or ind.fitness.value > best.fitness.value:
            improve(ind)
        elif evaluations % CHECKPOINT_INTERVAL == 0:
            samples.append((evaluations, best.fitness.value, best_nl, best_five))

    while evaluations < config.evaluation_budget:
        child = _tournament_step(population, config, rng, suite, evaluate)
        evaluations += 1
        if child.fitness.value > best.fitness.value:
            improve(child)
        elif evaluations % CHECKPOINT_INTERVAL == 0:
            samples.append((evaluations, best.fitness.value, best_nl, best_five))

    assert evaluations == config.evaluation_budget
    if samples[-1][0] != evaluations:
        samples.append((evaluations, best.fitness.value, best_nl, best_five))

    tt = _phenotype(best.genotype, config)
    profile = classify_spectrum(walsh_transform(tt))
    return RunResult(
        config=config,
        seed=seed,
        best_genotype=serialize_genotype(best.genotype, config),
        best_truth_table=tt.to_hex(),
        best_profile=profile,
        best_fitness=best.fitness.value,
        best_breakdown=best.fitness,
        best_nonlinearity=best.fitness.nonlinearity,
        evaluations=evaluations,
        trace=tuple(trace),
        samples=tuple(samples),
    )


def _splitmix64(state: int) -> int:
    z = state & _MASK64
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9 & _MASK64
    z = (z ^ (z >> 27)) * 0x94D049BB133111EB & _MASK64
    return z ^ (z >> 31)


def derive_seeds(master_seed: int, count: int) -> list:
    """Fixed splitting rule: one well-mixed 64-bit seed per repetition."""
    out = []
    state = master_seed & _MASK64
    for _ in range(count):
        state = (state + 0x9E3779B97F4A7C15) & _MASK64
        out.append(_splitmix64(state))
    return out


def _run_one(args):
    config, seed = args
    return run(config, seed)


def summarize(results) -> dict:
    """Aggregate a batch the way the results tables report it."""
    fits = [r.best_fitness for r in results]
    nls = [r.best_nonlinearity for r in results]
    five = [r.best_profile.is_five_valued for r in results]
    return {
        "repetitions": len(results),
        "fitness_avg": statistics.fmean(fits),
        "fitness_stdev": statistics.pstdev(fits),
        "fitness_max": max(fits),
        "nl_avg": statistics.fmean(nls),
        "nl_stdev": statistics.pstdev(nls),
        "nl_max": max(nls),
        "five_valued_rate": sum(five) / len(five),
    }


def run_batch(config: EaConfig, jobs: int = 1):
    """config.repetitions independent runs with seeds split off master_seed."""
    seeds = derive_seeds(config.master_seed, config.repetitions)
    if jobs > 1 and config.repetitions > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_run_one, [(config, s) for s in seeds]))
    else:
        results = [run(config, s) for s in seeds]
    return results, summarize(results)


__all__ = [
    "ENCODINGS",
    "TOURNAMENT_SIZE",
    "CHECKPOINT_INTERVAL",
    "EaConfig",
    "Individual",
    "RunResult",
    "sst_step",
    "run",
    "run_batch",
    "derive_seeds",
    "summarize",
    "serialize_genotype",
]

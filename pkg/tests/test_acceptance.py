"""Acceptance suite: one criterion per test, one PASS/FAIL line per criterion.

Run with `pytest tests/test_acceptance.py -v -s`. The reproduction criteria
(3-7) replay frozen-seed campaigns at the full budgets; on one core the
whole file takes roughly 40 minutes, almost all of it in criteria 5-7.
"""

import json
import random
import time

import numpy as np
import pytest
from conftest import five_valued_fixture

from fivespec.cli import main
from fivespec.core import (
    TruthTable,
    brute_force_nonlinearity,
    classify_spectrum,
    mobius_transform_packed,
    nonlinearity,
    walsh_transform,
)
from fivespec.encodings import evaluate_tree, parse_tree
from fivespec.engine import EaConfig, derive_seeds, run, run_batch
from fivespec.fitness import fitness1, fitness2


def report(num, ok, detail):
    line = f"{'PASS' if ok else 'FAIL'} criterion {num:2d}: {detail}"
    print(f"\n{line}", flush=True)
    assert ok, line


def batch(n, encoding, reps, budget, master):
    config = EaConfig(
        n=n,
        encoding=encoding,
        fitness="f1",
        evaluation_budget=budget,
        repetitions=reps,
        master_seed=master,
    )
    return run_batch(config)


@pytest.fixture(scope="module")
def n7_gp():
    return batch(7, "gp", reps=10, budget=1_000_000, master=13)


def test_criterion_01_transform_correctness():
    started = time.perf_counter()
    rng = np.random.default_rng(1)

    def naive_vs_fast(bit_matrix, n):
        size = 1 << n
        xs = np.arange(size, dtype=np.uint32)
        inner = np.bitwise_count(xs[:, None] & xs[None, :]).astype(np.int64)
        signs = 1 - 2 * (inner & 1)  # (-1)^(a.x) as a matrix
        naive = (1 - 2 * bit_matrix.astype(np.int64)) @ signs
        for row_bits, row_naive in zip(bit_matrix, naive):
            tt = TruthTable.from_bits(row_bits.tolist())
            coeffs = walsh_transform(tt).coeffs
            assert np.array_equal(coeffs, row_naive)
            assert int(np.sum(coeffs * coeffs)) == size * size  # Parseval

    exhaustive = np.array(
        [[(k >> i) & 1 for i in range(8)] for k in range(256)], dtype=np.uint8
    )
    naive_vs_fast(exhaustive, 3)
    checked = 256
    for n in range(4, 9):
        sample = rng.integers(0, 2, size=(1000, 1 << n), dtype=np.uint8)
        naive_vs_fast(sample, n)
        checked += 1000

    involution = 0
    py_rng = random.Random(2)
    for n in range(1, 11):
        for _ in range(1000):
            packed = py_rng.getrandbits(1 << n)
            twice = mobius_transform_packed(mobius_transform_packed(packed, n), n)
            assert twice == packed
            involution += 1

    elapsed = time.perf_counter() - started
    report(
        1,
        elapsed < 60,
        f"fast WHT == naive sum on {checked} functions (n=3 exhaustive, 1000/n for n=4..8), "
        f"Parseval exact everywhere, Mobius involution on {involution} vectors [{elapsed:.1f}s < 60s]",
    )


def test_criterion_02_nonlinearity_oracle_equivalence():
    started = time.perf_counter()
    checked = 0
    for n in (1, 2, 3, 4):
        for packed in range(1 << (1 << n)):
            tt = TruthTable(n, packed)
            assert nonlinearity(walsh_transform(tt)) == brute_force_nonlinearity(tt)
            checked += 1
    rng = random.Random(3)
    for n in range(5, 9):
        for _ in range(1000):
            tt = TruthTable(n, rng.getrandbits(1 << n))
            assert nonlinearity(walsh_transform(tt)) == brute_force_nonlinearity(tt)
            checked += 1
    elapsed = time.perf_counter() - started
    report(
        2,
        elapsed < 300,
        f"spectrum nonlinearity == brute-force affine distance on {checked} functions "
        f"(exhaustive n<=4 incl. all 65536 at n=4, 1000/n for n=5..8) [{elapsed:.1f}s < 300s]",
    )


def test_criterion_03_n5_reproduction():
    started = time.perf_counter()
    results, summary = batch(5, "gp", reps=10, budget=100_000, master=11)
    good = [
        r.best_breakdown.deficit == 0
        and r.best_profile.is_five_valued
        and r.best_nonlinearity == 12
        and r.best_fitness >= 12.5
        for r in results
    ]
    elapsed = time.perf_counter() - started
    report(
        3,
        all(good),
        f"n=5 GP/fitness1, 10 runs x 1e5 evals: {sum(good)}/10 balanced five-valued nl=12 "
        f"fitness>=12.5 (avg {summary['fitness_avg']:.4f}) [{elapsed:.0f}s]",
    )


def test_criterion_04_n6_reproduction():
    started = time.perf_counter()
    results, summary = batch(6, "gp", reps=10, budget=100_000, master=12)
    good = [
        r.best_profile.is_five_valued and r.best_nonlinearity == 24 for r in results
    ]
    elapsed = time.perf_counter() - started
    report(
        4,
        all(good),
        f"n=6 GP/fitness1, 10 runs x 1e5 evals: {sum(good)}/10 five-valued nl=24 "
        f"(avg {summary['fitness_avg']:.4f}) [{elapsed:.0f}s]",
    )


def test_criterion_05_n7_reproduction(n7_gp):
    started = time.perf_counter()
    results, summary = n7_gp
    hits = sum(
        r.best_profile.is_five_valued and r.best_nonlinearity == 56 for r in results
    )
    elapsed = time.perf_counter() - started
    report(
        5,
        hits >= 8,
        f"n=7 GP/fitness1, 10 runs x 1e6 evals: {hits}/10 five-valued nl=56 "
        f"(avg {summary['fitness_avg']:.4f}) [{elapsed:.0f}s]",
    )


def test_criterion_06_n8_reproduction():
    started = time.perf_counter()
    results, summary = batch(8, "gp", reps=5, budget=1_000_000, master=14)
    hits = sum(
        r.best_profile.is_five_valued and r.best_nonlinearity == 112 for r in results
    )
    elapsed = time.perf_counter() - started
    report(
        6,
        hits >= 1,
        f"n=8 GP/fitness1, 5 runs x 1e6 evals: {hits}/5 five-valued nl=112 "
        f"(max {summary['fitness_max']:.5f}) [{elapsed:.0f}s]",
    )


def test_criterion_07_encoding_gap(n7_gp):
    started = time.perf_counter()
    tt_results, _ = batch(7, "tt", reps=10, budget=1_000_000, master=15)
    anf_results, _ = batch(7, "anf", reps=10, budget=1_000_000, master=16)
    bitstring_hits = sum(
        r.best_profile.is_five_valued for r in tt_results + anf_results
    )
    gp_hits = sum(r.best_profile.is_five_valued for r in n7_gp[0])
    elapsed = time.perf_counter() - started
    report(
        7,
        bitstring_hits <= 2 and gp_hits >= 8,
        f"n=7 fitness1: five-valued in {bitstring_hits}/20 bitstring runs (TT+ANF) "
        f"vs {gp_hits}/10 GP runs [{elapsed:.0f}s]",
    )


def test_criterion_08_fitness_tier_separation():
    started = time.perf_counter()
    rng = random.Random(4)
    checked = 0
    for n in range(5, 9):
        size = 1 << n
        tables = [TruthTable(n, rng.getrandbits(size)) for _ in range(10_000)]
        tables.append(five_valued_fixture(n))  # tier three is rare at random
        tiers = ([], [], [])
        for tt in tables:
            spec = walsh_transform(tt)
            one = fitness1(tt, spec)
            two = fitness2(tt, spec)
            if one.deficit:
                tiers[0].append(one.value)
            elif one.distinct_values != 5:
                tiers[1].append(one.value)
            else:
                tiers[2].append(one.value)
                frac = one.value - one.nonlinearity
                assert 0.0 <= frac < 1.0
            assert (two.value < 0) == (one.deficit > 0)
            if two.penalty_count == 0:
                assert two.value == two.nonlinearity
            checked += 1
        assert tiers[0] and tiers[1] and tiers[2]
        assert max(tiers[0]) < 0 < min(tiers[1])
        assert max(tiers[1]) <= 0.5 < min(tiers[2])
    elapsed = time.perf_counter() - started
    report(
        8,
        True,
        f"fitness1 three-tier strict ordering, fractional term in [0,1), and fitness2 "
        f"sign/pen-zero laws on {checked} functions across n=5..8 [{elapsed:.0f}s]",
    )


def test_criterion_09_large_n_capability():
    started = time.perf_counter()
    config = EaConfig(n=12, encoding="gp", fitness="f1", evaluation_budget=100_000)
    seed = derive_seeds(17, 1)[0]
    result = run(config, seed)
    tree = parse_tree(result.best_genotype, 12)
    tt = evaluate_tree(tree, 12)
    well_formed = (
        result.evaluations == 100_000
        and tt.to_hex() == result.best_truth_table
        and len(result.best_truth_table) == (1 << 12) // 4
        and classify_spectrum(walsh_transform(tt)) == result.best_profile
        and [t[0] for t in result.trace] == sorted({t[0] for t in result.trace})
        and [t[1] for t in result.trace] == sorted({t[1] for t in result.trace})
    )
    elapsed = time.perf_counter() - started
    report(
        9,
        well_formed,
        f"n=12 GP run at 1e5 evals completes; RunResult consistent (best nl "
        f"{result.best_nonlinearity}, {result.best_profile.kind}) [{elapsed:.0f}s]",
    )


def test_criterion_10_determinism(tmp_path):
    started = time.perf_counter()
    config = EaConfig(
        n=5, encoding="gp", fitness="f1", population_size=100, evaluation_budget=3000
    )
    seed = derive_seeds(18, 1)[0]
    first, second = run(config, seed), run(config, seed)
    engine_identical = (
        first == second
        and json.dumps(first.samples) == json.dumps(second.samples)
        and repr(first) == repr(second)
    )

    out = tmp_path / "res"
    argv = [
        "search", "--n", "5", "--encoding", "tt", "--fitness", "f1",
        "--pop", "10", "--evals", "200", "--reps", "2", "--seed", "9",
        "--out", str(out),
    ]
    assert main(argv) == 0
    before = {p: p.read_bytes() for p in sorted(out.rglob("*")) if p.is_file()}
    assert main(argv) == 0
    after = {p: p.read_bytes() for p in sorted(out.rglob("*")) if p.is_file()}
    elapsed = time.perf_counter() - started
    report(
        10,
        engine_identical and before == after,
        f"repeated runs byte-identical at engine level and across all CLI artifacts "
        f"[{elapsed:.0f}s]",
    )

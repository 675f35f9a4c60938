"""Evolutionary search for balanced Boolean functions with five-valued
Walsh-Hadamard spectra, plus the spectral analysis toolkit underneath it."""

from .core import (
    AnfVector,
    SpectrumProfile,
    TruthTable,
    WalshSpectrum,
    algebraic_degree,
    anf_to_truth_table,
    balancedness_deficit,
    brute_force_nonlinearity,
    classify_spectrum,
    mobius_transform,
    nonlinearity,
    truth_table_to_anf,
    walsh_transform,
)
from .encodings import (
    BitstringGenotype,
    GpTree,
    decode,
    evaluate_tree,
    parse_tree,
    random_bitstring,
    random_tree,
    tree_to_string,
)
from .engine import EaConfig, RunResult, run, run_batch, sst_step
from .fitness import FitnessValue, fitness1, fitness2, pen
from .variation import OperatorSuite, make_suite, pick_and_apply

__version__ = "0.1.0"

__all__ = [
    "TruthTable",
    "AnfVector",
    "WalshSpectrum",
    "SpectrumProfile",
    "walsh_transform",
    "mobius_transform",
    "truth_table_to_anf",
    "anf_to_truth_table",
    "nonlinearity",
    "balancedness_deficit",
    "classify_spectrum",
    "brute_force_nonlinearity",
    "algebraic_degree",
    "BitstringGenotype",
    "GpTree",
    "decode",
    "evaluate_tree",
    "random_bitstring",
    "random_tree",
    "tree_to_string",
    "parse_tree",
    "OperatorSuite",
    "make_suite",
    "pick_and_apply",
    "FitnessValue",
    "fitness1",
    "fitness2",
    "pen",
    "EaConfig",
    "RunResult",
    "sst_step",
    "run",
    "run_batch",
    "__version__",
]

"""Genotype decoding checked against scalar per-assignment evaluation."""

import random

import numpy as np
import pytest

from fivespec import core
from fivespec.encodings import (
    ANF,
    OPERATOR_ARITY,
    OPERATORS,
    TT,
    BitstringGenotype,
    GpNode,
    GpTree,
    MalformedGenotypeError,
    decode,
    evaluate_tree,
    make_node,
    parse_tree,
    random_bitstring,
    random_tree,
    tree_to_string,
)


def scalar_eval(node, assignment):
    # assignment maps variable index (1-based) to 0/1; pure reference
    # semantics, no bitslicing
    if not node.children:
        return assignment[node.op]
    vals = [scalar_eval(c, assignment) for c in node.children]
    op = node.op
    if op == "OR":
        return vals[0] | vals[1]
    if op == "XOR":
        return vals[0] ^ vals[1]
    if op == "AND":
        return vals[0] & vals[1]
    if op == "AND2":
        return vals[0] & (1 - vals[1])
    if op == "XNOR":
        return 1 - (vals[0] ^ vals[1])
    if op == "IF":
        return vals[1] if vals[0] else vals[2]
    if op == "NOT":
        return 1 - vals[0]
    raise AssertionError(op)


def scalar_truth_table(tree, n):
    bits = []
    for index in range(1 << n):
        assignment = {i: (index >> (n - i)) & 1 for i in range(1, n + 1)}
        bits.append(scalar_eval(tree.root, assignment))
    return bits


def leaf(i):
    return GpNode(i)


class TestBitstringDecode:
    def test_tt_mode_is_identity(self):
        g = BitstringGenotype.from_bits([0, 1, 1, 0], TT)
        assert decode(g) == core.TruthTable.from_bits([0, 1, 1, 0])

    def test_anf_mode_single_low_coefficient(self):
        g = BitstringGenotype.from_bits([1, 0, 0, 0], ANF)
        assert decode(g) == core.TruthTable.from_bits([1, 1, 1, 1])

    def test_anf_mode_zero(self):
        g = BitstringGenotype.from_bits([0] * 16, ANF)
        assert decode(g).packed == 0

    def test_anf_round_trip(self):
        rng = random.Random(1)
        for n in (2, 3, 5, 7):
            g = random_bitstring(n, ANF, rng)
            tt = decode(g)
            again = core.mobius_transform_packed(tt.packed, n)
            assert again == g.packed

    def test_decode_is_length_preserving(self):
        rng = random.Random(2)
        for mode in (TT, ANF):
            for n in (1, 3, 6):
                g = random_bitstring(n, mode, rng)
                assert decode(g).size == 1 << n

    def test_mode_validated(self):
        with pytest.raises(MalformedGenotypeError):
            BitstringGenotype(3, "weird", 0)


class TestRandomBitstring:
    def test_deterministic_given_seed(self):
        a = random_bitstring(4, TT, random.Random(33))
        b = random_bitstring(4, TT, random.Random(33))
        assert a == b

    def test_length(self):
        g = random_bitstring(1, TT, random.Random(0))
        assert g.size == 2

    def test_mean_weight_near_half(self):
        rng = random.Random(5)
        weights = [random_bitstring(6, TT, rng).packed.bit_count() for _ in range(400)]
        avg = sum(weights) / len(weights)
        assert 28 < avg < 36  # expectation 32


class TestTreeEvaluation:
    def test_single_leaf_projection(self):
        assert evaluate_tree(GpTree(leaf(1)), 2).bits.tolist() == [0, 0, 1, 1]

    def test_xor_pair(self):
        tree = GpTree(GpNode("XOR", (leaf(1), leaf(2))))
        assert evaluate_tree(tree, 2).bits.tolist() == [0, 1, 1, 0]

    def test_if_matches_mux_identity(self):
        tree = GpTree(GpNode("IF", (leaf(1), leaf(2), leaf(3))))
        got = evaluate_tree(tree, 3)
        x1, x2, x3 = (core.variable_column(i, 3) for i in (1, 2, 3))
        mux = (x1 & x2) | ((core.full_mask(3) ^ x1) & x3)
        assert got.packed == mux

    def test_and2_and_xnor_identities(self):
        a, b = leaf(1), leaf(2)
        and2 = evaluate_tree(GpTree(GpNode("AND2", (a, b))), 2)
        manual = evaluate_tree(GpTree(GpNode("AND", (a, GpNode("NOT", (b,))))), 2)
        assert and2 == manual
        xnor = evaluate_tree(GpTree(GpNode("XNOR", (a, b))), 2)
        negated = evaluate_tree(GpTree(GpNode("NOT", (GpNode("XOR", (a, b)),))), 2)
        assert xnor == negated

    @pytest.mark.parametrize("n", [2, 3, 4, 5, 6])
    def test_bitsliced_equals_scalar_on_random_trees(self, n):
        rng = random.Random(40 + n)
        for _ in range(60):
            tree = random_tree(n, (0, 5), rng)
            fast = evaluate_tree(tree, n).bits.tolist()
            assert fast == scalar_truth_table(tree, n)

    def test_leaf_out_of_range_rejected(self):
        tree = GpTree(GpNode("XOR", (leaf(1), leaf(5))))
        with pytest.raises(MalformedGenotypeError):
            evaluate_tree(tree, 3)

    def test_evaluation_pure_across_sizes(self):
        # the same shared node evaluated at two n values must not leak
        # one cached table into the other
        tree = GpTree(GpNode("XOR", (leaf(1), leaf(2))))
        at3 = evaluate_tree(tree, 3)
        at2 = evaluate_tree(tree, 2)
        assert at2.bits.tolist() == [0, 1, 1, 0]
        assert at3.size == 8


class TestTreeStructure:
    def test_arity_enforced(self):
        with pytest.raises(MalformedGenotypeError):
            GpNode("XOR", (leaf(1),))
        with pytest.raises(MalformedGenotypeError):
            GpNode("NOT", (leaf(1), leaf(2)))
        with pytest.raises(MalformedGenotypeError):
            GpNode("NOPE", (leaf(1), leaf(2)))

    def test_leaf_index_validated(self):
        with pytest.raises(MalformedGenotypeError):
            GpNode(0)

    def test_size_and_depth(self):
        tree = GpTree(GpNode("IF", (leaf(1), GpNode("NOT", (leaf(2),)), leaf(3))))
        assert tree.size == 5
        assert tree.depth == 2

    def test_interning_shares_equal_structures(self):
        a = make_node("XOR", (make_node(1), make_node(2)))
        b = make_node("XOR", (make_node(1), make_node(2)))
        assert a is b

    def test_structural_equality_without_interning(self):
        a = GpNode("XOR", (leaf(1), leaf(2)))
        b = GpNode("XOR", (leaf(1), leaf(2)))
        assert a is not b
        assert a == b


class TestRandomTree:
    def test_deterministic(self):
        a = random_tree(4, (2, 5), random.Random(7))
        b = random_tree(4, (2, 5), random.Random(7))
        assert a == b

    def test_depth_within_limits(self):
        rng = random.Random(8)
        for _ in range(1000):
            tree = random_tree(5, (2, 5), rng)
            assert 2 <= tree.depth <= 5

    def test_zero_depth_gives_bare_leaf(self):
        rng = random.Random(9)
        for _ in range(20):
            tree = random_tree(3, (0, 0), rng)
            assert tree.root.is_leaf
            assert 1 <= tree.root.op <= 3

    def test_leaves_are_variables_only(self):
        rng = random.Random(10)
        def walk(node):
            if node.is_leaf:
                assert isinstance(node.op, int) and 1 <= node.op <= 4
            else:
                assert node.op in OPERATOR_ARITY
                assert len(node.children) == OPERATOR_ARITY[node.op]
                for c in node.children:
                    walk(c)
        for _ in range(300):
            walk(random_tree(4, (1, 4), rng).root)

    def test_bad_limits_rejected(self):
        with pytest.raises(ValueError):
            random_tree(3, (4, 2), random.Random(0))


class TestTreeSerialization:
    def test_to_string_format(self):
        tree = GpTree(GpNode("XOR", (GpNode("AND", (leaf(1), leaf(2))), leaf(3))))
        assert tree_to_string(tree) == "XOR(AND(x1,x2),x3)"

    def test_round_trip_random(self):
        rng = random.Random(12)
        for _ in range(200):
            tree = random_tree(6, (0, 5), rng)
            assert parse_tree(tree_to_string(tree)) == tree

    def test_round_trip_preserves_semantics(self):
        rng = random.Random(13)
        for _ in range(50):
            tree = random_tree(4, (1, 5), rng)
            again = parse_tree(tree_to_string(tree))
            assert evaluate_tree(again, 4) == evaluate_tree(tree, 4)

    def test_parse_validates(self):
        with pytest.raises(MalformedGenotypeError):
            parse_tree("XOR(x1)")
        with pytest.raises(MalformedGenotypeError):
            parse_tree("x0")
        with pytest.raises(MalformedGenotypeError):
            parse_tree("XOR(x1,x2)trailing")
        with pytest.raises(MalformedGenotypeError):
            parse_tree("FOO(x1,x2)")
        with pytest.raises(MalformedGenotypeError):
            parse_tree("x5", n=4)

    def test_operator_set_is_fixed(self):
        assert set(OPERATORS) == {"OR", "XOR", "AND", "AND2", "XNOR", "IF", "NOT"}
        assert OPERATOR_ARITY["NOT"] == 1
        assert OPERATOR_ARITY["IF"] == 3

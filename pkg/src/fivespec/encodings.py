"""Genotype representations: bitstrings over truth tables or ANF, and GP trees.

All three decode to the same phenotype, a core.TruthTable, so fitness and
reporting never care which encoding produced a function.
"""

from __future__ import annotations

import weakref

from .core import (
    TruthTable,
    full_mask,
    mobius_transform_packed,
    pack_bits,
    unpack_bits,
    variable_column,
)

TT = "tt"
ANF = "anf"
GP = "gp"

BITSTRING_MODES = (TT, ANF)

OPERATOR_ARITY = {
    "OR": 2,
    "XOR": 2,
    "AND": 2,
    "AND2": 2,  # first input AND NOT second
    "XNOR": 2,
    "IF": 3,  # IF(a, b, c): b where a holds, c elsewhere
    "NOT": 1,
}

OPERATORS = tuple(OPERATOR_ARITY)


class MalformedGenotypeError(ValueError):
    """A genotype violates its structural invariants."""


class BitstringGenotype:
    """2^n bits interpreted as a truth table (TT) or ANF coefficients (ANF)."""

    __slots__ = ("n", "mode", "packed")

    def __init__(self, n: int, mode: str, packed: int):
        if mode not in BITSTRING_MODES:
            raise MalformedGenotypeError(f"unknown bitstring mode {mode!r}")
        if not 0 <= packed <= full_mask(n):
            raise MalformedGenotypeError(f"packed value does not fit in 2^{n} bits")
        self.n = n
        self.mode = mode
        self.packed = packed

    @property
    def size(self) -> int:
        return 1 << self.n

    @property
    def bits(self):
        return unpack_bits(self.packed, self.size)

    @classmethod
    def from_bits(cls, bits, mode: str):
        arr = list(bits)
        n = len(arr).bit_length() - 1
        if len(arr) != 1 << n or n < 1:
            raise MalformedGenotypeError(f"bit vector length must be 2^n, got {len(arr)}")
        return cls(n, mode, pack_bits(arr))

    def __eq__(self, other):
        return (
            isinstance(other, BitstringGenotype)
            and other.n == self.n
            and other.mode == self.mode
            and other.packed == self.packed
        )

    def __hash__(self):
        return hash((self.n, self.mode, self.packed))

    def __repr__(self):
        return f"BitstringGenotype(n={self.n}, mode={self.mode!r})"


class GpNode:
    """One tree node. Leaves carry a variable index, internal nodes an operator.

    Nodes are immutable after construction and freely shared between trees;
    variation rebuilds only the path from the root to the changed subtree.
    size and depth are materialized so indexed traversal is O(depth).
    """

    __slots__ = ("op", "children", "size", "depth", "_table_n", "_table", "__weakref__")

    def __init__(self, op, children=()):
        if children:
            if OPERATOR_ARITY.get(op) != len(children):
                raise MalformedGenotypeError(f"bad operator/arity: {op!r}/{len(children)}")
            size = 1
            depth = 0
            for c in children:
                size += c.size
                if c.depth > depth:
                    depth = c.depth
            self.size = size
            self.depth = depth + 1
        else:
            if not isinstance(op, int) or op < 1:
                raise MalformedGenotypeError(f"leaf must carry a variable index >= 1, got {op!r}")
            self.size = 1
            self.depth = 0
        self.op = op
        self.children = tuple(children)
        self._table_n = -1
        self._table = 0

    @property
    def is_leaf(self) -> bool:
        return not self.children

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, GpNode):
            return NotImplemented
        if other.size != self.size or other.op != self.op:
            return False
        return other.children == self.children

    def __hash__(self):
        return hash((self.op, self.children))

    def __getstate__(self):
        # node tables are per-process caches, never shipped across workers
        return (self.op, self.children)

    def __setstate__(self, state):
        op, children = state
        if children:
            self.size = 1 + sum(c.size for c in children)
            self.depth = 1 + max(c.depth for c in children)
        else:
            self.size = 1
            self.depth = 0
        self.op = op
        self.children = children
        self._table_n = -1
        self._table = 0

    def __repr__(self):
        return f"GpNode({tree_to_string(GpTree(self))})"


class GpTree:
    """Expression-tree genotype over x1..xn with the fixed operator set."""

    __slots__ = ("root",)

    def __init__(self, root: GpNode):
        self.root = root

    @property
    def size(self) -> int:
        return self.root.size

    @property
    def depth(self) -> int:
        return self.root.depth

    def __eq__(self, other):
        return isinstance(other, GpTree) and other.root == self.root

    def __hash__(self):
        return hash(self.root)

    def __repr__(self):
        return f"GpTree({tree_to_string(self)})"


_INTERNED = weakref.WeakValueDictionary()


def make_node(op, children=()) -> GpNode:
    """Interning constructor: one shared object per distinct structure.

    Keys hold child object ids; an entry's node keeps its children alive,
    so an id in a live key can never be recycled. Identity then doubles
    as a fast structural-equality hint for the variation operators, and
    evaluation caches are shared across the whole population.
    """
    key = (op, *map(id, children))
    node = _INTERNED.get(key)
    if node is None:
        node = GpNode(op, children)
        _INTERNED[key] = node
    return node


def _node_table(node: GpNode, n: int) -> int:
    # Bitsliced evaluation: each node yields the packed 2^n-bit column of
    # its sub-expression. Cached per node so shared subtrees are computed
    # once per process.
    if node._table_n == n:
        return node._table
    op = node.op
    if node.children:
        mask = full_mask(n)
        ch = node.children
        a = _node_table(ch[0], n)
        if op == "NOT":
            t = mask ^ a
        else:
            b = _node_table(ch[1], n)
            if op == "OR":
                t = a | b
            elif op == "XOR":
                t = a ^ b
            elif op == "AND":
                t = a & b
            elif op == "AND2":
                t = a & (mask ^ b)
            elif op == "XNOR":
                t = mask ^ a ^ b
            else:  # IF
                t = (a & b) | ((mask ^ a) & _node_table(ch[2], n))
    else:
        if op > n:
            raise MalformedGenotypeError(f"leaf x{op} out of range for {n} variables")
        t = variable_column(op, n)
    node._table_n = n
    node._table = t
    return t


def evaluate_tree(tree: GpTree, n: int) -> TruthTable:
    """Truth table of the expressed function over all 2^n assignments."""
    return TruthTable(n, _node_table(tree.root, n))


def decode(g) -> TruthTable:
    """Phenotype of any genotype: the canonical truth table."""
    if isinstance(g, BitstringGenotype):
        if g.mode == TT:
            return TruthTable(g.n, g.packed)
        return TruthTable(g.n, mobius_transform_packed(g.packed, g.n))
    if isinstance(g, GpTree):
        raise TypeError("GP trees decode via evaluate_tree(tree, n); n is not stored in the tree")
    raise TypeError(f"not a genotype: {type(g).__name__}")


def random_bitstring(n: int, mode: str, rng) -> BitstringGenotype:
    """Uniform random genotype: every bit independent fair coin."""
    return BitstringGenotype(n, mode, rng.getrandbits(1 << n))


def random_tree(n: int, depth_limits, rng) -> GpTree:
    """Ramped half-and-half generation.

    Target depth is uniform over [min_depth, max_depth] and the grow or
    full method is picked with probability 1/2. Grow keeps every node
    above min_depth internal so the produced depth always lands inside
    the requested band; full builds a perfectly deep tree.
    """
    min_depth, max_depth = depth_limits
    if not 0 <= min_depth <= max_depth:
        raise ValueError(f"need 0 <= min_depth <= max_depth, got {depth_limits!r}")
    target = rng.randint(min_depth, max_depth)
    grow = rng.random() < 0.5

    def build(depth):
        if depth >= target:
            return make_node(rng.randint(1, n))
        if grow and depth >= min_depth:
            # uniform over terminals and operators
            k = rng.randrange(n + len(OPERATORS))
            if k < n:
                return make_node(k + 1)
            op = OPERATORS[k - n]
        else:
            op = OPERATORS[rng.randrange(len(OPERATORS))]
        return make_node(op, tuple(build(depth + 1) for _ in range(OPERATOR_ARITY[op])))

    return GpTree(build(0))


def tree_to_string(tree: GpTree) -> str:
    """Prefix notation, e.g. XOR(AND(x1,x2),x3)."""

    def emit(node):
        if node.is_leaf:
            return f"x{node.op}"
        return f"{node.op}({','.join(emit(c) for c in node.children)})"

    return emit(tree.root)


def parse_tree(text: str, n: int | None = None) -> GpTree:
    """Inverse of tree_to_string; validates arity and leaf range."""
    pos = 0
    length = len(text)

    def fail(msg):
        raise MalformedGenotypeError(f"{msg} at position {pos} in {text!r}")

    def parse_node():
        nonlocal pos
        start = pos
        while pos < length and (text[pos].isalnum() or text[pos] == "_"):
            pos += 1
        token = text[start:pos]
        if not token:
            fail("expected a node token")
        if token in OPERATOR_ARITY:
            if pos >= length or text[pos] != "(":
                fail(f"operator {token} needs an argument list")
            pos += 1
            children = [parse_node()]
            while pos < length and text[pos] == ",":
                pos += 1
                children.append(parse_node())
            if pos >= length or text[pos] != ")":
                fail("expected ')'")
            pos += 1
            if len(children) != OPERATOR_ARITY[token]:
                fail(f"{token} takes {OPERATOR_ARITY[token]} children, got {len(children)}")
            return make_node(token, tuple(children))
        if token.startswith("x") and token[1:].isdigit():
            index = int(token[1:])
            if index < 1 or (n is not None and index > n):
                fail(f"leaf {token} out of range")
            return make_node(index)
        fail(f"unknown token {token!r}")

    root = parse_node()
    if pos != length:
        fail("trailing characters")
    return GpTree(root)


__all__ = [
    "TT",
    "ANF",
    "GP",
    "BITSTRING_MODES",
    "OPERATORS",
    "OPERATOR_ARITY",
    "MalformedGenotypeError",
    "BitstringGenotype",
    "GpNode",
    "GpTree",
    "make_node",
    "decode",
    "evaluate_tree",
    "random_bitstring",
    "random_tree",
    "tree_to_string",
    "parse_tree",
]

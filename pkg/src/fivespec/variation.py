"""Mutation and crossover operators for bitstring and tree genotypes.

Every crossover returns a single child; every operator is pure given the
random stream. Tree operators enforce the depth limit by rejecting an
oversized child and handing back the first parent unchanged (genotypes
are immutable, so no defensive copy is needed).
"""

from __future__ import annotations

from dataclasses import dataclass

from .core import full_mask
from .encodings import (
    ANF,
    GP,
    TT,
    BitstringGenotype,
    GpNode,
    GpTree,
    MalformedGenotypeError,
    make_node,
    random_tree,
)

DEFAULT_MAX_DEPTH = 8


def _check_pair(a: BitstringGenotype, b: BitstringGenotype):
    if a.n != b.n or a.mode != b.mode:
        raise MalformedGenotypeError(
            f"crossover parents disagree: n={a.n}/{b.n}, mode={a.mode}/{b.mode}"
        )


def bit_flip_mutation(g: BitstringGenotype, rng) -> BitstringGenotype:
    """Invert exactly one uniformly chosen bit."""
    pos = rng.randrange(g.size)
    return BitstringGenotype(g.n, g.mode, g.packed ^ (1 << pos))


def shuffle_mutation(g: BitstringGenotype, rng) -> BitstringGenotype:
    """Uniformly permute the bits of a random substring [i, j]."""
    i = rng.randrange(g.size)
    j = rng.randrange(g.size)
    if i > j:
        i, j = j, i
    if i == j:
        return g
    width = j - i + 1
    seg = (g.packed >> i) & ((1 << width) - 1)
    bits = [(seg >> k) & 1 for k in range(width)]
    rng.shuffle(bits)
    new_seg = 0
    for k, bit in enumerate(bits):
        new_seg |= bit << k
    packed = g.packed ^ ((seg ^ new_seg) << i)
    return BitstringGenotype(g.n, g.mode, packed)


def one_point_crossover(a: BitstringGenotype, b: BitstringGenotype, rng) -> BitstringGenotype:
    """Positions below a uniform cut point from a, the rest from b."""
    _check_pair(a, b)
    k = rng.randint(1, a.size - 1)
    low = (1 << k) - 1
    return BitstringGenotype(a.n, a.mode, (a.packed & low) | (b.packed & ~low))


def uniform_crossover(a: BitstringGenotype, b: BitstringGenotype, rng) -> BitstringGenotype:
    """Each position independently copied from a or b with probability 1/2."""
    _check_pair(a, b)
    m = rng.getrandbits(a.size)
    return BitstringGenotype(a.n, a.mode, (a.packed & m) | (b.packed & ~m & full_mask(a.n)))


def _node_at(node: GpNode, index: int) -> GpNode:
    # preorder index; node.size makes the descent O(depth)
    while index:
        index -= 1
        for child in node.children:
            if index < child.size:
                node = child
                break
            index -= child.size
    return node


def _replace_at(node: GpNode, index: int, new: GpNode) -> GpNode:
    if index == 0:
        return new
    index -= 1
    children = list(node.children)
    for i, child in enumerate(children):
        if index < child.size:
            children[i] = _replace_at(child, index, new)
            return make_node(node.op, tuple(children))
        index -= child.size
    raise IndexError("preorder index out of range")


def _subtree_at_path(node: GpNode, path) -> GpNode:
    for i in path:
        node = node.children[i]
    return node


def _replace_at_path(node: GpNode, path, new: GpNode) -> GpNode:
    if not path:
        return new
    children = list(node.children)
    children[path[0]] = _replace_at_path(children[path[0]], path[1:], new)
    return make_node(node.op, tuple(children))


def subtree_mutation(
    t: GpTree, n: int, rng, subtree_limits=(0, 5), max_depth: int = DEFAULT_MAX_DEPTH
) -> GpTree:
    """Replace a uniformly chosen node's subtree with a fresh random one."""
    index = rng.randrange(t.size)
    new_subtree = random_tree(n, subtree_limits, rng).root
    child = GpTree(_replace_at(t.root, index, new_subtree))
    return t if child.depth > max_depth else child


def _simple_crossover(a: GpTree, b: GpTree, rng) -> GpTree:
    i = rng.randrange(a.size)
    j = rng.randrange(b.size)
    return GpTree(_replace_at(a.root, i, _node_at(b.root, j)))


def _uniform_crossover(a: GpTree, b: GpTree, rng) -> GpTree:
    # node-wise stitch over the common region; where the shapes diverge
    # the whole subtree comes from one parent. Identical subtrees pass
    # through unchanged, which keeps node sharing (and eval caches) alive
    # without altering the output distribution.
    def stitch(na, nb):
        if na is nb:
            return na
        ca, cb = na.children, nb.children
        if len(ca) != len(cb) or not ca:
            return na if rng.random() < 0.5 else nb
        op = na.op if rng.random() < 0.5 else nb.op
        children = [stitch(x, y) for x, y in zip(ca, cb)]
        if op == na.op and all(c is x for c, x in zip(children, ca)):
            return na
        if op == nb.op and all(c is y for c, y in zip(children, cb)):
            return nb
        return make_node(op, tuple(children))

    return GpTree(stitch(a.root, b.root))


def _common_segments(na: GpNode, nb: GpNode, path, out, shared_only):
    # coordinate segments of the common region as (path, count) rows; a
    # subtree pair that is one shared object collapses into a count-only
    # row because swapping anywhere inside it cannot change the child
    if na is nb:
        out.append((None, na.size))
        return
    out.append((path, 1))
    ca, cb = na.children, nb.children
    if shared_only:
        span = min(len(ca), len(cb))
    else:
        span = len(ca) if len(ca) == len(cb) else 0
    for i in range(span):
        _common_segments(ca[i], cb[i], path + (i,), out, shared_only)


def _coordinate_swap(a: GpTree, b: GpTree, rng, shared_only: bool) -> GpTree:
    segments = []
    _common_segments(a.root, b.root, (), segments, shared_only)
    r = rng.randrange(sum(count for _, count in segments))
    for path, count in segments:
        if r < count:
            if path is None:
                return a
            return GpTree(_replace_at_path(a.root, path, _subtree_at_path(b.root, path)))
        r -= count
    raise AssertionError("unreachable")


def _one_point_crossover(a: GpTree, b: GpTree, rng) -> GpTree:
    # crossover point uniform over the common region (equal arities along
    # every ancestor pair)
    return _coordinate_swap(a, b, rng, shared_only=False)


def _context_preserving_crossover(a: GpTree, b: GpTree, rng) -> GpTree:
    # crossover point uniform over the coordinates that exist in both trees
    return _coordinate_swap(a, b, rng, shared_only=True)


def _size_fair_crossover(a: GpTree, b: GpTree, rng) -> GpTree:
    i = rng.randrange(a.size)
    s = _node_at(a.root, i).size
    limit = 2 * s + 1  # donors more than twice the removed size are barred
    n_small = n_same = n_big = 0
    sum_small = sum_big = 0
    stack = [b.root]
    while stack:
        node = stack.pop()
        sz = node.size
        if sz <= limit:
            if sz < s:
                n_small += 1
                sum_small += sz
            elif sz == s:
                n_same += 1
            else:
                n_big += 1
                sum_big += sz
        if node.children:
            stack.extend(node.children)
    if n_small and n_big:
        # split the non-same mass so the expected size change is zero
        p_same = n_same / (n_small + n_same + n_big)
        d_small = (n_small * s - sum_small) / n_small
        d_big = (sum_big - n_big * s) / n_big
        p_big = (1.0 - p_same) * d_small / (d_small + d_big)
        r = rng.random()
        if r < p_same:
            want, m = 0, rng.randrange(n_same)
        elif r < p_same + p_big:
            want, m = 1, rng.randrange(n_big)
        else:
            want, m = -1, rng.randrange(n_small)
    elif n_same:
        want, m = 0, rng.randrange(n_same)
    elif n_small:
        want, m = -1, rng.randrange(n_small)
    else:
        want, m = 1, rng.randrange(n_big)
    donor = None
    stack = [b.root]
    while stack:
        node = stack.pop()
        sz = node.size
        if sz <= limit:
            hit = sz == s if want == 0 else (sz > s if want == 1 else sz < s)
            if hit:
                if m == 0:
                    donor = node
                    break
                m -= 1
        if node.children:
            stack.extend(node.children)
    return GpTree(_replace_at(a.root, i, donor))


TREE_CROSSOVER_VARIANTS = {
    "simple": _simple_crossover,
    "uniform": _uniform_crossover,
    "size_fair": _size_fair_crossover,
    "one_point": _one_point_crossover,
    "context_preserving": _context_preserving_crossover,
}


def tree_crossover(
    a: GpTree, b: GpTree, variant: str, rng, max_depth: int = DEFAULT_MAX_DEPTH
) -> GpTree:
    """One child from two parent trees; oversized children fall back to a."""
    try:
        op = TREE_CROSSOVER_VARIANTS[variant]
    except KeyError:
        raise ValueError(
            f"unknown crossover variant {variant!r}; choose from {sorted(TREE_CROSSOVER_VARIANTS)}"
        ) from None
    child = op(a, b, rng)
    return a if child.depth > max_depth else child


BITSTRING_CROSSOVERS = {
    "one_point": one_point_crossover,
    "uniform": uniform_crossover,
}

BITSTRING_MUTATIONS = {
    "bit_flip": bit_flip_mutation,
    "shuffle": shuffle_mutation,
}

TREE_MUTATIONS = ("subtree",)


@dataclass(frozen=True)
class OperatorSuite:
    """The operator pool one evolved encoding draws from, uniformly."""

    encoding: str
    crossover_names: tuple
    mutation_names: tuple
    crossovers: tuple  # callables (a, b, rng) -> child
    mutations: tuple  # callables (g, rng) -> genotype

    def __post_init__(self):
        if not self.crossovers or not self.mutations:
            raise ValueError("operator suite needs at least one crossover and one mutation")


def make_suite(
    encoding: str,
    n: int,
    crossover_names=None,
    mutation_names=None,
    max_depth: int = DEFAULT_MAX_DEPTH,
    subtree_limits=(0, 5),
) -> OperatorSuite:
    """Build the operator pool for an encoding, by name subset or in full."""
    if encoding in (TT, ANF):
        xo_registry, mut_registry = BITSTRING_CROSSOVERS, BITSTRING_MUTATIONS
        xo_names = tuple(crossover_names or xo_registry)
        mut_names = tuple(mutation_names or mut_registry)
        xos = tuple(_lookup(xo_registry, name) for name in xo_names)
        muts = tuple(_lookup(mut_registry, name) for name in mut_names)
    elif encoding == GP:
        xo_names = tuple(crossover_names or TREE_CROSSOVER_VARIANTS)
        mut_names = tuple(mutation_names or TREE_MUTATIONS)
        for name in xo_names:
            _lookup(TREE_CROSSOVER_VARIANTS, name)
        xos = tuple(_bind_tree_crossover(name, max_depth) for name in xo_names)
        muts = tuple(
            _bind_tree_mutation(name, n, subtree_limits, max_depth) for name in mut_names
        )
    else:
        raise ValueError(f"unknown encoding {encoding!r}")
    return OperatorSuite(encoding, xo_names, mut_names, xos, muts)


def _lookup(registry, name):
    try:
        return registry[name]
    except KeyError:
        raise ValueError(f"unknown operator {name!r}; choose from {sorted(registry)}") from None


def _bind_tree_crossover(variant, max_depth):
    def op(a, b, rng):
        return tree_crossover(a, b, variant, rng, max_depth=max_depth)

    return op


def _bind_tree_mutation(name, n, subtree_limits, max_depth):
    if name != "subtree":
        raise ValueError(f"unknown operator {name!r}; choose from ['subtree']")

    def op(t, rng):
        return subtree_mutation(t, n, rng, subtree_limits=subtree_limits, max_depth=max_depth)

    return op


def pick_and_apply(suite: OperatorSuite, parents, rng):
    """Apply a uniformly drawn operator: two parents cross, one mutates."""
    if len(parents) == 2:
        op = suite.crossovers[rng.randrange(len(suite.crossovers))]
        return op(parents[0], parents[1], rng)
    if len(parents) == 1:
        op = suite.mutations[rng.randrange(len(suite.mutations))]
        return op(parents[0], rng)
    raise ValueError(f"expected one or two parents, got {len(parents)}")


__all__ = [
    "DEFAULT_MAX_DEPTH",
    "bit_flip_mutation",
    "shuffle_mutation",
    "one_point_crossover",
    "uniform_crossover",
    "subtree_mutation",
    "tree_crossover",
    "TREE_CROSSOVER_VARIANTS",
    "BITSTRING_CROSSOVERS",
    "BITSTRING_MUTATIONS",
    "TREE_MUTATIONS",
    "OperatorSuite",
    "make_suite",
    "pick_and_apply",
]

"""Decomposition trees of separable permutations.

Internal nodes carry a sign, ``"+"`` for a direct sum and ``"-"`` for a skew
sum.  They have at least two children and signs alternate down the tree.
Nodes are addressed by paths: tuples of child indices starting from the root.
Leaf positions (for markings and skeletons) are 1-based, left to right.

Text format: a leaf is ``.``, an internal node is its sign followed by its
children in parentheses, e.g. ``+(-(.,.),-(+(.,.),.,.),.,-(.,.))``.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterator, Sequence, Union

from .perm import (
    NotSeparable,
    Perm,
    Symmetry,
    direct_sum,
    skew_components,
    skew_sum,
    sum_components,
)

PLUS, MINUS = "+", "-"
Path = tuple  # tuple[int, ...]
Partition = tuple  # tuple[int, ...], weakly decreasing


class InvalidTree(ValueError):
    pass


@dataclass(frozen=True)
class Leaf:
    label: object = None

    def __repr__(self) -> str:
        return "." if self.label is None else f".{self.label}"


@dataclass(frozen=True)
class Node:
    sign: str
    children: tuple

    def __repr__(self) -> str:
        return format_tree(self)


Tree = Union[Leaf, Node]
LEAF = Leaf()


def flip(sign: str) -> str:
    return MINUS if sign == PLUS else PLUS


# --- text format -------------------------------------------------------------

def format_tree(tree: Tree) -> str:
    if isinstance(tree, Leaf):
        return "."
    return tree.sign + "(" + ",".join(format_tree(c) for c in tree.children) + ")"


def parse_tree(text: str) -> Tree:
    """Parse and validate the ``+(.,-(.,.))`` format."""
    text = "".join(text.split())
    pos = 0

    def parse() -> Tree:
        nonlocal pos
        if pos >= len(text):
            raise InvalidTree("unexpected end of tree text")
        ch = text[pos]
        if ch == ".":
            pos += 1
            return LEAF
        if ch not in "+-":
            raise InvalidTree(f"unexpected {ch!r} at offset {pos} in tree text")
        if pos + 1 >= len(text) or text[pos + 1] != "(":
            raise InvalidTree(f"expected '(' at offset {pos + 1}")
        pos += 2
        kids = [parse()]
        while pos < len(text) and text[pos] == ",":
            pos += 1
            kids.append(parse())
        if pos >= len(text) or text[pos] != ")":
            raise InvalidTree(f"expected ')' at offset {pos}")
        pos += 1
        return Node(ch, tuple(kids))

    tree = parse()
    if pos != len(text):
        raise InvalidTree(f"trailing characters in tree text at offset {pos}")
    validate(tree)
    return tree


# --- basic structure ---------------------------------------------------------

def leaf_count(tree: Tree) -> int:
    if isinstance(tree, Leaf):
        return 1
    return sum(leaf_count(c) for c in tree.children)


def leaves(tree: Tree) -> list[Leaf]:
    if isinstance(tree, Leaf):
        return [tree]
    out = []
    for c in tree.children:
        out.extend(leaves(c))
    return out


def iter_nodes(tree: Tree, path: Path = ()) -> Iterator[tuple[Path, Tree]]:
    """All nodes in preorder, with their paths."""
    yield path, tree
    if isinstance(tree, Node):
        for i, c in enumerate(tree.children):
            yield from iter_nodes(c, path + (i,))


def internal_nodes(tree: Tree) -> list[tuple[Path, Node]]:
    return [(p, t) for p, t in iter_nodes(tree) if isinstance(t, Node)]


def validate(tree: Tree) -> None:
    """Raise :class:`InvalidTree` unless every node has >= 2 children and
    signs alternate."""
    for path, node in internal_nodes(tree):
        if node.sign not in (PLUS, MINUS):
            raise InvalidTree(f"bad sign {node.sign!r} at {path}")
        if len(node.children) < 2:
            raise InvalidTree(f"node at {path} has fewer than two children")
        for i, c in enumerate(node.children):
            if isinstance(c, Node) and c.sign == node.sign:
                raise InvalidTree(f"same-sign adjacency at {path + (i,)}")


def subtree(tree: Tree, path: Sequence[int]) -> Tree:
    for i in path:
        if not isinstance(tree, Node) or not 0 <= i < len(tree.children):
            raise KeyError(f"no node at path {tuple(path)}")
        tree = tree.children[i]
    return tree


def replace(tree: Tree, path: Sequence[int], new: Tree) -> Tree:
    if not path:
        return new
    if not isinstance(tree, Node) or not 0 <= path[0] < len(tree.children):
        raise KeyError(f"no node at path {tuple(path)}")
    i = path[0]
    kids = list(tree.children)
    kids[i] = replace(kids[i], path[1:], new)
    return Node(tree.sign, tuple(kids))


def resign(tree: Tree, sign: str) -> Tree:
    """Relabel internal nodes by depth parity, the root getting ``sign``."""
    if isinstance(tree, Leaf):
        return tree
    other = flip(sign)
    return Node(sign, tuple(resign(c, other) for c in tree.children))


def relabel_leaves(tree: Tree, start: int = 1) -> Tree:
    """Copy of ``tree`` whose leaves carry their 1-based positions."""
    counter = iter(range(start, start + leaf_count(tree)))

    def go(t: Tree) -> Tree:
        if isinstance(t, Leaf):
            return Leaf(next(counter))
        return Node(t.sign, tuple(go(c) for c in t.children))

    return go(tree)


def strip_labels(tree: Tree) -> Tree:
    if isinstance(tree, Leaf):
        return LEAF
    return Node(tree.sign, tuple(strip_labels(c) for c in tree.children))


def complement_tree(tree: Tree) -> Tree:
    if isinstance(tree, Leaf):
        return tree
    return Node(flip(tree.sign), tuple(complement_tree(c) for c in tree.children))


# --- the bijection with separable permutations -------------------------------

def decompose(pi: Sequence[int]) -> Tree:
    """Decomposition tree of a separable permutation."""
    n = len(pi)
    if n == 0:
        raise ValueError("the empty permutation has no decomposition tree")
    if n == 1:
        return LEAF
    blocks = sum_components(pi)
    if len(blocks) > 1:
        return Node(PLUS, tuple(decompose(b) for b in blocks))
    blocks = skew_components(pi)
    if len(blocks) > 1:
        return Node(MINUS, tuple(decompose(b) for b in blocks))
    raise NotSeparable(f"{tuple(pi)} is neither sum nor skew decomposable")


def compose(tree: Tree) -> Perm:
    """Inverse of :func:`decompose`."""
    validate(tree)
    return _compose(tree)


def _compose(tree: Tree) -> Perm:
    if isinstance(tree, Leaf):
        return (1,)
    join = direct_sum if tree.sign == PLUS else skew_sum
    out = _compose(tree.children[0])
    for c in tree.children[1:]:
        out = join(out, _compose(c))
    return out


def signature(tree: Tree) -> Partition:
    return tuple(sorted((len(n.children) - 1 for _, n in internal_nodes(tree)), reverse=True))


# --- skeletons ---------------------------------------------------------------

def reduced_skeleton(tree: Tree, positions) -> Tree:
    """Reduced skeleton of the leaves at the given 1-based positions."""
    marked = set(positions)
    if not marked:
        raise ValueError("empty leaf set")
    n = leaf_count(tree)
    if min(marked) < 1 or max(marked) > n:
        raise ValueError(f"leaf positions must lie in 1..{n}")
    counter = 0

    def go(t: Tree):
        nonlocal counter
        if isinstance(t, Leaf):
            counter += 1
            return LEAF if counter in marked else None
        parts = [r for r in (go(c) for c in t.children) if r is not None]
        if not parts:
            return None
        if len(parts) == 1:
            return parts[0]
        kids = []
        for p in parts:
            if isinstance(p, Node) and p.sign == t.sign:
                kids.extend(p.children)
            else:
                kids.append(p)
        return Node(t.sign, tuple(kids))

    return go(tree)


def occurrences_by_skeleton(sigma: Sequence[int], pi: Sequence[int]) -> int:
    """Count leaf sets of the tree of ``pi`` whose reduced skeleton is the tree
    of ``sigma``."""
    target = decompose(sigma)
    big = decompose(pi)
    n, k = len(pi), len(sigma)
    return sum(1 for L in combinations(range(1, n + 1), k) if reduced_skeleton(big, L) == target)


# --- equipopularity-preserving exchanges ------------------------------------

def _is_prefix(p: Path, q: Path) -> bool:
    return len(p) <= len(q) and q[: len(p)] == p


def subtree_exchange(tree: Tree, v: Path, w: Path) -> Tree:
    """Swap the subtrees at ``v`` and ``w`` and restore sign alternation."""
    v, w = tuple(v), tuple(w)
    if _is_prefix(v, w) or _is_prefix(w, v):
        raise ValueError(f"nodes {v} and {w} are in an ancestor relation")
    tv, tw = subtree(tree, v), subtree(tree, w)
    out = replace(replace(tree, v, tw), w, tv)
    return resign(out, tree.sign)


def forest_exchange(tree: Tree, a: Path) -> Tree:
    """Exchange the non-rightmost child forests of ``a`` and of its rightmost
    child ``b``, which must be internal."""
    a = tuple(a)
    node_a = subtree(tree, a)
    if not isinstance(node_a, Node):
        raise ValueError(f"node {a} is a leaf")
    node_b = node_a.children[-1]
    if not isinstance(node_b, Node):
        raise ValueError(f"rightmost child of {a} is a leaf")
    forest_f, forest_g, tc = node_a.children[:-1], node_b.children[:-1], node_b.children[-1]
    lower = Node(node_b.sign, forest_f + (tc,))
    upper = Node(node_a.sign, forest_g + (lower,))
    return resign(replace(tree, a, upper), tree.sign)


@dataclass(frozen=True)
class Exchange:
    """A recorded move.

    ``kind`` is ``"subtree"`` (``nodes == (v, w)``), ``"forest"``
    (``nodes == (a,)``) or ``"complement"`` (no nodes).
    """

    kind: str
    nodes: tuple = ()

    def apply(self, tree: Tree) -> Tree:
        if self.kind == "subtree":
            return subtree_exchange(tree, *self.nodes)
        if self.kind == "forest":
            return forest_exchange(tree, *self.nodes)
        if self.kind == "complement":
            return complement_tree(tree)
        raise ValueError(f"unknown exchange kind {self.kind!r}")

    def inverse(self) -> "Exchange":
        # all three moves are involutions at the same addresses
        return self


@dataclass(frozen=True)
class MarkedTree:
    tree: Tree
    marked: frozenset  # 1-based leaf positions

    def __post_init__(self):
        object.__setattr__(self, "marked", frozenset(self.marked))
        n = leaf_count(self.tree)
        if not self.marked or min(self.marked) < 1 or max(self.marked) > n:
            raise ValueError("marked leaves must be a nonempty subset of 1..n")

    @property
    def pattern_tree(self) -> Tree:
        return reduced_skeleton(self.tree, self.marked)

    @property
    def pattern(self) -> Perm:
        return _compose(self.pattern_tree)


def _mark_sets(tree: Tree, is_marked) -> dict:
    """Map each node path to the frozenset of marked-leaf ranks below it."""
    out = {}
    rank = 0

    def go(t: Tree, path: Path) -> frozenset:
        nonlocal rank
        if isinstance(t, Leaf):
            if is_marked(t):
                s = frozenset((rank,))
                rank += 1
            else:
                s = frozenset()
        else:
            s = frozenset().union(*(go(c, path + (i,)) for i, c in enumerate(t.children)))
        out[path] = s
        return s

    go(tree, ())
    return out


def transport_marks(marked: MarkedTree, move: Exchange, sigma: Sequence[int] | None = None) -> MarkedTree:
    """Carry a sigma-marked tree to a tau-marked tree with the same leaf count,
    where tau's tree is ``move`` applied to sigma's tree.

    The move's node addresses refer to the pattern tree.  The map is a
    bijection and ``move`` undoes it on the image.
    """
    pattern = marked.pattern_tree
    if sigma is not None and pattern != decompose(sigma):
        raise ValueError("marked tree is not marked by the given pattern")
    big = relabel_leaves(marked.tree)
    chosen = marked.marked
    sets = _mark_sets(big, lambda lf: lf.label in chosen)
    psets = _mark_sets(pattern, lambda lf: True)
    chains: dict = {}
    for path, s in sets.items():
        if s:
            chains.setdefault(s, []).append(path)

    def top(v: Path) -> Path:
        return min(chains[psets[v]], key=len)

    def bottom(v: Path) -> Path:
        return max(chains[psets[v]], key=len)

    if move.kind == "subtree":
        v, w = (tuple(x) for x in move.nodes)
        for x in (v, w):
            if x not in psets:
                raise KeyError(f"no node at path {x} in the pattern tree")
        if _is_prefix(v, w) or _is_prefix(w, v):
            raise ValueError(f"nodes {v} and {w} are in an ancestor relation")
        out = subtree_exchange(big, top(v), top(w))
    elif move.kind == "forest":
        (a,) = (tuple(x) for x in move.nodes)
        node_a = subtree(pattern, a)
        if not isinstance(node_a, Node) or not isinstance(node_a.children[-1], Node):
            raise ValueError(f"no forest exchange at {a} in the pattern tree")
        b = a + (len(node_a.children) - 1,)
        c = b + (len(node_a.children[-1].children) - 1,)
        a1, cb, b1, cc = bottom(a), top(b), bottom(b), top(c)
        c1 = bottom(c) if isinstance(subtree(pattern, c), Node) else cc
        # T at a1 = R[P1[Q[P2[Tc]]]]; the result swaps the R and Q segments
        segs = [(a1, cb), (cb, b1), (b1, cc), (cc, c1)]
        r_seg, p1, q_seg, p2 = ((subtree(big, x), y[len(x):]) for x, y in segs)
        core = subtree(big, c1)
        for seg, hole in (p2, r_seg, p1, q_seg):
            core = replace(seg, hole, core)
        out = resign(replace(big, a1, core), big.sign)
    else:
        raise ValueError(f"cannot transport marks through a {move.kind!r} move")
    new_marked = frozenset(i for i, lf in enumerate(leaves(out), 1) if lf.label in chosen)
    return MarkedTree(strip_labels(out), new_marked)


# --- wedges and canonical forms ----------------------------------------------

def wedge_tree(parts: Sequence[int]) -> Tree:
    """The spine tree whose i-th internal node has ``parts[i]`` leaf children
    followed by the next spine node; the last node has ``parts[-1] + 1`` leaves.
    The root is ``+``."""
    parts = list(parts)
    if not parts:
        raise ValueError("empty partition")
    if any(p < 1 for p in parts):
        raise ValueError("parts must be positive")
    tree: Tree = Node(PLUS, (LEAF,) * (parts[-1] + 1))
    for p in reversed(parts[:-1]):
        tree = Node(PLUS, (LEAF,) * p + (tree,))
    return resign(tree, PLUS)


def wedge(parts: Sequence[int]) -> tuple[Tree, Perm]:
    tree = wedge_tree(parts)
    return tree, _compose(tree)


def _spine(tree: Tree) -> list[Path]:
    """Paths of the rightmost branch, root first, ending at the rightmost leaf."""
    path: Path = ()
    out = [path]
    while isinstance(tree, Node):
        i = len(tree.children) - 1
        path = path + (i,)
        tree = tree.children[i]
        out.append(path)
    return out


def canonicalize(tree: Tree) -> tuple[Tree, list[Exchange]]:
    """Reduce ``tree`` to the wedge tree of its signature by exchanges.

    First every internal node is moved onto the rightmost branch by swapping
    it with the rightmost leaf (preorder-first node each time), then spine
    degrees are bubble-sorted with forest exchanges, then the tree is
    complemented if the root is ``-``.
    """
    validate(tree)
    moves: list[Exchange] = []

    def do(move: Exchange) -> None:
        nonlocal tree
        tree = move.apply(tree)
        moves.append(move)

    while True:
        spine = _spine(tree)
        on_spine = set(spine)
        off = [p for p, _ in internal_nodes(tree) if p not in on_spine]
        if not off:
            break
        do(Exchange("subtree", (spine[-1], off[0])))

    # bubble sort spine degrees into weakly decreasing order
    while True:
        spine = _spine(tree)[:-1]
        degrees = [len(subtree(tree, p).children) for p in spine]
        i = next((i for i in range(len(spine) - 1) if degrees[i] < degrees[i + 1]), None)
        if i is None:
            break
        do(Exchange("forest", (spine[i],)))

    if isinstance(tree, Node) and tree.sign == MINUS:
        do(Exchange("complement"))
    return tree, moves


def replay(tree: Tree, moves: Sequence[Exchange]) -> Tree:
    for m in moves:
        tree = m.apply(tree)
    return tree


def tree_symmetry(tree: Tree, g: Symmetry) -> Tree:
    """Tree-side action of a symmetry; commutes with :func:`decompose`."""
    swap, fx, fy = g.value
    if swap:
        tree = _reverse_children(tree, only=MINUS)
    if fy:
        tree = complement_tree(tree)
    if fx:
        tree = complement_tree(_reverse_children(tree, only=None))
    return tree


def _reverse_children(tree: Tree, only) -> Tree:
    if isinstance(tree, Leaf):
        return tree
    kids = tuple(_reverse_children(c, only) for c in tree.children)
    if only is None or tree.sign == only:
        kids = kids[::-1]
    return Node(tree.sign, kids)


# --- partitions --------------------------------------------------------------

def parse_partition(text: str) -> Partition:
    parts = tuple(int(s) for s in text.replace(" ", "").split(",") if s)
    if not parts or any(p < 1 for p in parts):
        raise ValueError(f"not a partition: {text!r}")
    return parts


def format_partition(parts: Sequence[int]) -> str:
    return ",".join(str(p) for p in parts)

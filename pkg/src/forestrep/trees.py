"""Binary planar trees and forests.

A tree is either a single leaf or a caret joining two subtrees.  A forest is
an ordered sequence of trees; its roots are counted left to right and its
leaves are numbered globally 1..m across the trees.  Forests compose by
vertical stacking: in ``compose(p, q)`` the i-th root of ``p`` is attached to
the i-th leaf of ``q``.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Iterator, NamedTuple

from .errors import ContractError, ParseError

DEFAULT_ENUM_BOUND = 12


class Tree:
    """Immutable rooted binary tree node.

    Construct through the module-level ``LEAF`` constant and ``caret``; both
    intern nodes, so equal trees are usually the same object.
    """

    __slots__ = ("left", "right", "leaf_count", "depth", "_hash")

    def __init__(self, left: "Tree | None" = None, right: "Tree | None" = None):
        if (left is None) != (right is None):
            raise ValueError("a tree node has either two children or none")
        self.left = left
        self.right = right
        if left is None:
            self.leaf_count = 1
            self.depth = 0
            self._hash = hash(("leaf",))
        else:
            self.leaf_count = left.leaf_count + right.leaf_count
            self.depth = 1 + max(left.depth, right.depth)
            self._hash = hash((left._hash, right._hash))

    @property
    def is_leaf(self) -> bool:
        return self.left is None

    def __hash__(self):
        return self._hash

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, Tree):
            return NotImplemented
        if self._hash != other._hash or self.leaf_count != other.leaf_count:
            return False
        if self.is_leaf or other.is_leaf:
            return self.is_leaf and other.is_leaf
        return self.left == other.left and self.right == other.right

    def __repr__(self):
        return f"Tree({format_tree(self)!r})"


LEAF = Tree()

_CARETS: dict[tuple[Tree, Tree], Tree] = {}


def caret(left: Tree, right: Tree) -> Tree:
    node = _CARETS.get((left, right))
    if node is None:
        node = Tree(left, right)
        _CARETS[(left, right)] = node
    return node


class Forest:
    """Ordered sequence of trees; a morphism from its roots to its leaves."""

    __slots__ = ("trees", "leaf_count")

    def __init__(self, trees):
        trees = tuple(trees)
        if not trees:
            raise ContractError("a forest needs at least one root")
        self.trees = trees
        self.leaf_count = sum(t.leaf_count for t in trees)

    @property
    def root_count(self) -> int:
        return len(self.trees)

    def __eq__(self, other):
        if not isinstance(other, Forest):
            return NotImplemented
        return self.trees == other.trees

    def __hash__(self):
        return hash(self.trees)

    def __repr__(self):
        return f"Forest({format_forest(self)!r})"


def trivial_forest(n: int) -> Forest:
    if n < 1:
        raise ContractError("trivial_forest: root count must be >= 1")
    return Forest((LEAF,) * n)


def elementary_forest(i: int, n: int) -> Forest:
    """Forest with n roots, all trees trivial except the i-th, a single caret."""
    if not 1 <= i <= n:
        raise ContractError(f"elementary_forest: need 1 <= i <= n, got i={i}, n={n}")
    trees = [LEAF] * n
    trees[i - 1] = caret(LEAF, LEAF)
    return Forest(trees)


def compose(p: Forest, q: Forest) -> Forest:
    """Stack p on top of q: root i of p is attached to leaf i of q."""
    if p.root_count != q.leaf_count:
        raise ContractError(
            f"compose: {p.root_count} roots on top cannot attach to {q.leaf_count} leaves"
        )
    feed = iter(p.trees)
    return Forest(tuple(_graft_tree(t, feed) for t in q.trees))


def _graft_tree(t: Tree, feed: Iterator[Tree]) -> Tree:
    if t.is_leaf:
        return next(feed)
    return caret(_graft_tree(t.left, feed), _graft_tree(t.right, feed))


def graft(t: Tree, f: Forest) -> Tree:
    """Attach the trees of f at the leaves of t, left to right."""
    return compose(f, Forest((t,))).trees[0]


def complete_tree(n: int) -> Tree:
    """The balanced tree with 2^n leaves, all at depth n."""
    if n < 0:
        raise ContractError("complete_tree: level must be >= 0")
    t = LEAF
    for _ in range(n):
        t = caret(t, t)
    return t


def split_leaf(t: Tree, i: int) -> Tree:
    """Replace leaf i (1-indexed) with a caret."""
    if not 1 <= i <= t.leaf_count:
        raise ContractError(f"split_leaf: leaf {i} out of range 1..{t.leaf_count}")

    def go(node: Tree, k: int) -> Tree:
        if node.is_leaf:
            return caret(LEAF, LEAF)
        nl = node.left.leaf_count
        if k <= nl:
            return caret(go(node.left, k), node.right)
        return caret(node.left, go(node.right, k - nl))

    return go(t, i)


def caret_positions(t: Tree) -> tuple[int, ...]:
    """Leaf indices i such that leaves i and i+1 are the children of one caret."""
    out: list[int] = []

    def go(node: Tree, off: int) -> int:
        if node.is_leaf:
            return 1
        nl = go(node.left, off)
        nr = go(node.right, off + nl)
        if node.left.is_leaf and node.right.is_leaf:
            out.append(off + 1)
        return nl + nr

    go(t, 0)
    return tuple(out)


def collapse_caret(t: Tree, i: int) -> Tree:
    """Replace the caret whose leaves are (i, i+1) by a single leaf."""

    def go(node: Tree, k: int) -> Tree:
        if node.is_leaf:
            raise ContractError(f"collapse_caret: leaves {i},{i + 1} are not siblings")
        nl = node.left.leaf_count
        if node.left.is_leaf and node.right.is_leaf and k == 1:
            return LEAF
        if k + 1 <= nl:
            return caret(go(node.left, k), node.right)
        if k > nl:
            return caret(node.left, go(node.right, k - nl))
        raise ContractError(f"collapse_caret: leaves {i},{i + 1} are not siblings")

    if not 1 <= i < t.leaf_count:
        raise ContractError(f"collapse_caret: leaf {i} out of range")
    return go(t, i)


def split_sequence(t: Tree) -> tuple[int, ...]:
    """Leaf indices that rebuild t from a single leaf, in order of application."""
    out: list[int] = []

    def go(node: Tree, pos: int):
        if node.is_leaf:
            return
        out.append(pos)
        go(node.left, pos)
        go(node.right, pos + node.left.leaf_count)

    go(t, 1)
    return tuple(out)


def tree_from_splits(indices) -> Tree:
    """Rebuild a tree by splitting leaves in the given order."""
    t = LEAF
    for i in indices:
        t = split_leaf(t, i)
    return t


# ---------------------------------------------------------------------------
# text format
#
# Two interchangeable forms, both round-tripping exactly:
#   "."           single leaf
#   "(L R)"       caret with subtree texts L and R
#   "f3 f1 f1"    product form, read right to left; each fI splits the
#                 current I-th leaf, starting from a single leaf.

def parse_tree(text: str) -> Tree:
    text = text.strip()
    if not text:
        raise ParseError("empty tree text")
    if text == ".":
        return LEAF
    if text.startswith("("):
        try:
            return _parse_parens(text)
        except ParseError:
            inner = text[1:-1].strip() if text.endswith(")") else None
            if inner:
                return _parse_product(inner)
            raise
    return _parse_product(text)


def _parse_parens(text: str) -> Tree:
    pos = 0

    def skip_ws():
        nonlocal pos
        while pos < len(text) and text[pos].isspace():
            pos += 1

    def node() -> Tree:
        nonlocal pos
        skip_ws()
        if pos >= len(text):
            raise ParseError(f"unexpected end of tree text at position {pos}")
        ch = text[pos]
        if ch == ".":
            pos += 1
            return LEAF
        if ch == "(":
            pos += 1
            left = node()
            right = node()
            skip_ws()
            if pos >= len(text) or text[pos] != ")":
                raise ParseError(f"expected ')' at position {pos}")
            pos += 1
            return caret(left, right)
        raise ParseError(f"unexpected character {ch!r} at position {pos}")

    t = node()
    skip_ws()
    if pos != len(text):
        raise ParseError(f"trailing text at position {pos}")
    return t


def _parse_product(text: str) -> Tree:
    tokens = text.split()
    indices = []
    for tok in tokens:
        if not tok.startswith("f") or not tok[1:].isdigit():
            raise ParseError(f"bad product token {tok!r}")
        indices.append(int(tok[1:]))
    t = LEAF
    for i in reversed(indices):
        if not 1 <= i <= t.leaf_count:
            raise ParseError(
                f"split index {i} exceeds current leaf count {t.leaf_count}"
            )
        t = split_leaf(t, i)
    return t


def format_tree(t: Tree, style: str = "product") -> str:
    if style == "product":
        seq = split_sequence(t)
        if not seq:
            return "."
        return " ".join(f"f{i}" for i in reversed(seq))
    if style == "parens":
        if t.is_leaf:
            return "."
        return f"({format_tree(t.left, 'parens')} {format_tree(t.right, 'parens')})"
    raise ValueError(f"unknown style {style!r}")


def parse_forest(text: str) -> Forest:
    parts = text.split(";")
    return Forest(tuple(parse_tree(p) for p in parts))


def format_forest(f: Forest, style: str = "product") -> str:
    return ";".join(format_tree(t, style) for t in f.trees)


# ---------------------------------------------------------------------------
# path words

def path_words(f: Forest | Tree) -> tuple[str, ...]:
    """Root-to-leaf turn words over {a, b}, one per leaf.

    A left turn contributes 'a', a right turn 'b'; the letter for the turn
    nearest the leaf is written first, so the first turn taken is the
    rightmost character.  The empty word is the trivial path.
    """
    if isinstance(f, Tree):
        return _tree_words(f)
    out: list[str] = []
    for t in f.trees:
        out.extend(_tree_words(t))
    return tuple(out)


@lru_cache(maxsize=None)
def _tree_words(t: Tree) -> tuple[str, ...]:
    if t.is_leaf:
        return ("",)
    left = tuple(w + "a" for w in _tree_words(t.left))
    right = tuple(w + "b" for w in _tree_words(t.right))
    return left + right


def format_words(words) -> str:
    return "(" + ", ".join(w if w else "e" for w in words) + ")"


# ---------------------------------------------------------------------------
# prefixes (subrooted trees)

class Subrooted(NamedTuple):
    """A prefix z of a tree t together with its residual data.

    ``inner_leaves`` counts the leaves of z that are internal nodes of t,
    i.e. the nontrivial trees of the forest f with compose(f, z) = t.
    ``words`` holds, for each leaf of t, the path word inside that residual
    forest (empty when the leaf already belongs to z).
    """

    tree: Tree
    inner_leaves: int
    words: tuple[str, ...]


@lru_cache(maxsize=None)
def subrooted_trees(t: Tree) -> tuple[Subrooted, ...]:
    """All prefixes of t (subtrees sharing its root), trivial prefix first,
    then by increasing leaf count with ties broken by the left subtree."""
    raw = sorted(_prefixes(t), key=lambda zr: zr[0].leaf_count)
    out = []
    for z, residual in raw:
        forest = Forest(residual)
        m = sum(1 for tree in residual if not tree.is_leaf)
        out.append(Subrooted(z, m, path_words(forest)))
    return tuple(out)


def _prefixes(t: Tree) -> list[tuple[Tree, tuple[Tree, ...]]]:
    items: list[tuple[Tree, tuple[Tree, ...]]] = [(LEAF, (t,))]
    if not t.is_leaf:
        for zl, rl in _prefixes(t.left):
            for zr, rr in _prefixes(t.right):
                items.append((caret(zl, zr), rl + rr))
    return items


def is_prefix(z: Tree, w: Tree) -> bool:
    if z.is_leaf:
        return True
    if w.is_leaf:
        return False
    return is_prefix(z.left, w.left) and is_prefix(z.right, w.right)


def residual_forest(w: Tree, z: Tree) -> Forest:
    """The forest f with compose(f, z) = w; z must be a prefix of w."""
    out: list[Tree] = []

    def go(wn: Tree, zn: Tree):
        if zn.is_leaf:
            out.append(wn)
            return
        if wn.is_leaf:
            raise ContractError("residual_forest: second tree is not a prefix of the first")
        go(wn.left, zn.left)
        go(wn.right, zn.right)

    go(w, z)
    return Forest(tuple(out))


def merge_trees(u: Tree, v: Tree) -> Tree:
    """Least common refinement: the smallest tree with both u and v as prefixes."""
    if u.is_leaf:
        return v
    if v.is_leaf:
        return u
    return caret(merge_trees(u.left, v.left), merge_trees(u.right, v.right))


# ---------------------------------------------------------------------------
# enumeration

def enumerate_trees(n: int, bound: int = DEFAULT_ENUM_BOUND) -> tuple[Tree, ...]:
    """All trees with n leaves in a fixed deterministic order."""
    if n < 1:
        raise ContractError("enumerate_trees: leaf count must be >= 1")
    if n > bound:
        raise ContractError(f"enumerate_trees: leaf count {n} exceeds bound {bound}")
    return _all_trees(n)


@lru_cache(maxsize=None)
def _all_trees(n: int) -> tuple[Tree, ...]:
    if n == 1:
        return (LEAF,)
    out = []
    for k in range(1, n):
        for left in _all_trees(k):
            for right in _all_trees(n - k):
                out.append(caret(left, right))
    return tuple(out)


def enumerate_forests(m: int, bound: int = DEFAULT_ENUM_BOUND) -> tuple[Forest, ...]:
    """All forests with m leaves (any number of roots), deterministic order."""
    if m < 1:
        raise ContractError("enumerate_forests: leaf count must be >= 1")
    if m > bound:
        raise ContractError(f"enumerate_forests: leaf count {m} exceeds bound {bound}")
    return tuple(Forest(trees) for trees in _forest_shapes(m))


@lru_cache(maxsize=None)
def _forest_shapes(m: int) -> tuple[tuple[Tree, ...], ...]:
    out: list[tuple[Tree, ...]] = []
    for k in range(1, m + 1):
        for first in _all_trees(k):
            if k == m:
                out.append((first,))
            else:
                for rest in _forest_shapes(m - k):
                    out.append((first,) + rest)
    return tuple(out)

"""Thompson's groups F, T, V as fraction groups of tree pairs.

An element is stored as a canonical reduced triple (domain tree, range tree,
leaf bijection): leaf k of the domain partition is sent affinely onto leaf
``perm(k)`` of the range partition.  Reduction cancels matched carets, which
is confluent, so equality of elements is structural equality of triples.
"""

from __future__ import annotations

import json
import re
from fractions import Fraction
from functools import lru_cache

from .errors import ContractError, ParseError
from .trees import (
    LEAF,
    Forest,
    Tree,
    caret,
    caret_positions,
    collapse_caret,
    complete_tree,
    compose,
    format_tree,
    graft,
    merge_trees,
    parse_tree,
    residual_forest,
)

F = "F"
T_ONLY = "T_only"
V_ONLY = "V_only"

DEFAULT_LEVEL_BOUND = 8


class Perm:
    """Permutation of {1..n}, stored as the image sequence."""

    __slots__ = ("images", "_inv")

    def __init__(self, images):
        images = tuple(images)
        n = len(images)
        if sorted(images) != list(range(1, n + 1)):
            raise ContractError(f"Perm: {images} is not a bijection of 1..{n}")
        self.images = images
        inv = [0] * n
        for k, v in enumerate(images, 1):
            inv[v - 1] = k
        self._inv = tuple(inv)

    @classmethod
    def identity(cls, n: int) -> "Perm":
        return cls(range(1, n + 1))

    @classmethod
    def rotation(cls, n: int, c: int) -> "Perm":
        return cls(((k - 1 + c) % n) + 1 for k in range(1, n + 1))

    @property
    def size(self) -> int:
        return len(self.images)

    def __call__(self, k: int) -> int:
        return self.images[k - 1]

    def inv(self, k: int) -> int:
        return self._inv[k - 1]

    def inverse(self) -> "Perm":
        return Perm(self._inv)

    def __mul__(self, other: "Perm") -> "Perm":
        if self.size != other.size:
            raise ContractError("Perm: cannot compose permutations of different sizes")
        return Perm(self.images[other.images[k] - 1] for k in range(self.size))

    def theta(self, seq):
        """Rearrange a sequence: slot i of the result is seq[inverse(i)]."""
        if len(seq) != self.size:
            raise ContractError("Perm.theta: length mismatch")
        return tuple(seq[self._inv[i] - 1] for i in range(self.size))

    def is_identity(self) -> bool:
        return all(v == k for k, v in enumerate(self.images, 1))

    def rotation_offset(self) -> int | None:
        """The c with images[k] = ((k-1+c) mod n)+1, or None if not a rotation."""
        n = self.size
        c = self.images[0] - 1
        for k in range(1, n + 1):
            if self.images[k - 1] != ((k - 1 + c) % n) + 1:
                return None
        return c

    def __eq__(self, other):
        return isinstance(other, Perm) and self.images == other.images

    def __hash__(self):
        return hash(self.images)

    def __repr__(self):
        return f"Perm({list(self.images)})"


def inflate(perm: Perm, sizes) -> Perm:
    """Replace strand k by sizes[k-1] parallel strands.

    Domain block k has sizes[k-1] slots; it is sent order-preservingly onto
    the range block of strand perm(k), whose offset is the total size of the
    strands landing before it.
    """
    sizes = tuple(sizes)
    if len(sizes) != perm.size:
        raise ContractError("inflate: one size per strand required")
    range_sizes = [sizes[perm.inv(j) - 1] for j in range(1, perm.size + 1)]
    range_off = [0] * perm.size
    for j in range(1, perm.size):
        range_off[j] = range_off[j - 1] + range_sizes[j - 1]
    images = []
    for k in range(1, perm.size + 1):
        base = range_off[perm(k) - 1]
        images.extend(base + r for r in range(1, sizes[k - 1] + 1))
    return Perm(images)


def permute_forest(perm: Perm, f: Forest) -> Forest:
    """The forest whose i-th tree is tree perm(i) of f."""
    if perm.size != f.root_count:
        raise ContractError("permute_forest: permutation size must match root count")
    return Forest(tuple(f.trees[perm(i) - 1] for i in range(1, perm.size + 1)))


class SymmetricForest:
    """A forest together with a permutation of its leaves."""

    __slots__ = ("forest", "perm")

    def __init__(self, forest: Forest, perm: Perm):
        if perm.size != forest.leaf_count:
            raise ContractError("SymmetricForest: permutation must act on the leaves")
        self.forest = forest
        self.perm = perm

    def __eq__(self, other):
        if not isinstance(other, SymmetricForest):
            return NotImplemented
        return self.forest == other.forest and self.perm == other.perm

    def __hash__(self):
        return hash((self.forest, self.perm))

    def __repr__(self):
        return f"SymmetricForest({self.forest!r}, {self.perm!r})"


def compose_symmetric(p: SymmetricForest, q: SymmetricForest) -> SymmetricForest:
    """Stack (p, sigma) on top of (q, tau).

    The permutation tau slides up through p: the trees of p are permuted so
    that tree i of the result's forest is tree tau(i) of p, and tau itself is
    inflated leaf-wise, each strand i widening to as many parallel strands as
    tree tau(i) of p has leaves.
    """
    if p.forest.root_count != q.forest.leaf_count:
        raise ContractError("compose_symmetric: arity mismatch")
    permuted = permute_forest(q.perm, p.forest)
    forest = compose(permuted, q.forest)
    widened = inflate(q.perm, [t.leaf_count for t in permuted.trees])
    return SymmetricForest(forest, p.perm * widened)


# ---------------------------------------------------------------------------
# group elements

class VElement:
    """Canonical reduced tree-pair-with-bijection form of an element of V."""

    __slots__ = ("domain", "range", "perm")

    def __init__(self, domain: Tree, range_: Tree, perm=None):
        if perm is None:
            perm = Perm.identity(domain.leaf_count)
        elif not isinstance(perm, Perm):
            perm = Perm(perm)
        if domain.leaf_count != range_.leaf_count:
            raise ContractError("VElement: domain and range must have equal leaf counts")
        if perm.size != domain.leaf_count:
            raise ContractError("VElement: bijection must act on the leaves")
        domain, range_, perm = _reduce(domain, range_, perm)
        self.domain = domain
        self.range = range_
        self.perm = perm

    @classmethod
    def identity(cls) -> "VElement":
        return cls(LEAF, LEAF)

    @property
    def leaf_count(self) -> int:
        return self.domain.leaf_count

    def is_identity(self) -> bool:
        return self.domain.is_leaf

    def __eq__(self, other):
        if not isinstance(other, VElement):
            return NotImplemented
        return (
            self.domain == other.domain
            and self.range == other.range
            and self.perm == other.perm
        )

    def __hash__(self):
        return hash((self.domain, self.range, self.perm))

    def __mul__(self, other: "VElement") -> "VElement":
        return multiply(self, other)

    def __invert__(self) -> "VElement":
        return inverse(self)

    def __repr__(self):
        return f"VElement({format_element_literal(self)!r})"


def _reduce(domain: Tree, range_: Tree, perm: Perm, pick=min):
    """Cancel matched carets until none remain.

    A caret at domain leaves (i, i+1) cancels against the range caret at
    (perm(i), perm(i)+1) when perm(i+1) = perm(i)+1.  ``pick`` selects among
    available cancellations; any choice yields the same canonical form.
    """
    while True:
        rc = set(caret_positions(range_))
        hits = [
            i
            for i in caret_positions(domain)
            if perm(i + 1) == perm(i) + 1 and perm(i) in rc
        ]
        if not hits:
            return domain, range_, perm
        i = pick(hits)
        j = perm(i)
        domain = collapse_caret(domain, i)
        range_ = collapse_caret(range_, j)
        images = [
            v - 1 if v > j else v
            for k, v in enumerate(perm.images, 1)
            if k != i + 1
        ]
        perm = Perm(images)


def make_element(domain: Tree, range_: Tree, bijection=None) -> VElement:
    """Canonical reduced element sending the domain partition onto the range
    partition along the leaf bijection."""
    return VElement(domain, range_, bijection)


def multiply(g: VElement, h: VElement) -> VElement:
    """Group product; (g*h) acts as g after h on [0, 1)."""
    w = merge_trees(g.domain, h.range)
    p = residual_forest(w, g.domain)
    q = residual_forest(w, h.range)
    new_range = graft(g.range, permute_forest(g.perm.inverse(), p))
    up = inflate(g.perm, [t.leaf_count for t in p.trees])
    new_domain = graft(h.domain, permute_forest(h.perm, q))
    down = inflate(h.perm, [q.trees[h.perm(k) - 1].leaf_count for k in range(1, h.perm.size + 1)])
    return VElement(new_domain, new_range, up * down)


def inverse(g: VElement) -> VElement:
    return VElement(g.range, g.domain, g.perm.inverse())


def classify(g: VElement) -> str:
    """F for order-preserving, T_only for a nontrivial rotation, else V_only."""
    if g.perm.is_identity():
        return F
    if g.perm.rotation_offset() is not None:
        return T_ONLY
    return V_ONLY


# ---------------------------------------------------------------------------
# dyadic rationals and the piecewise-linear action

class Dyadic:
    """Exact dyadic rational num / 2^exp in canonical form (num odd or exp 0)."""

    __slots__ = ("num", "exp")

    def __init__(self, num: int, exp: int = 0):
        if exp < 0:
            num <<= -exp
            exp = 0
        while exp > 0 and num % 2 == 0:
            num //= 2
            exp -= 1
        self.num = num
        self.exp = exp

    @classmethod
    def from_fraction(cls, x: Fraction) -> "Dyadic":
        den = x.denominator
        exp = den.bit_length() - 1
        if den != 1 << exp:
            raise ContractError(f"{x} is not a dyadic rational")
        return cls(x.numerator, exp)

    def to_fraction(self) -> Fraction:
        return Fraction(self.num, 1 << self.exp)

    def __add__(self, other: "Dyadic") -> "Dyadic":
        e = max(self.exp, other.exp)
        return Dyadic(
            (self.num << (e - self.exp)) + (other.num << (e - other.exp)), e
        )

    def __sub__(self, other: "Dyadic") -> "Dyadic":
        e = max(self.exp, other.exp)
        return Dyadic(
            (self.num << (e - self.exp)) - (other.num << (e - other.exp)), e
        )

    def __mul__(self, other: "Dyadic") -> "Dyadic":
        return Dyadic(self.num * other.num, self.exp + other.exp)

    def times_pow2(self, s: int) -> "Dyadic":
        return Dyadic(self.num, self.exp - s)

    def _cmp_key(self, other):
        e = max(self.exp, other.exp)
        return self.num << (e - self.exp), other.num << (e - other.exp)

    def __eq__(self, other):
        return isinstance(other, Dyadic) and (self.num, self.exp) == (other.num, other.exp)

    def __lt__(self, other):
        a, b = self._cmp_key(other)
        return a < b

    def __le__(self, other):
        a, b = self._cmp_key(other)
        return a <= b

    def __hash__(self):
        return hash((self.num, self.exp))

    def __str__(self):
        if self.exp == 0:
            return str(self.num)
        return f"{self.num}/{1 << self.exp}"

    def __repr__(self):
        return f"Dyadic({self.num}, {self.exp})"


def parse_dyadic(text: str) -> Dyadic:
    text = text.strip()
    m = re.fullmatch(r"(-?\d+)", text)
    if m:
        return Dyadic(int(m.group(1)))
    m = re.fullmatch(r"(-?\d+)\s*/\s*(\d+)", text)
    if m is None:
        m = re.fullmatch(r"(-?\d+)\s*/\s*2\^(\d+)", text)
        if m is None:
            raise ParseError(f"bad dyadic literal {text!r}")
        return Dyadic(int(m.group(1)), int(m.group(2)))
    den = int(m.group(2))
    exp = den.bit_length() - 1
    if den != 1 << exp:
        raise ParseError(f"denominator of {text!r} is not a power of 2")
    return Dyadic(int(m.group(1)), exp)


@lru_cache(maxsize=None)
def leaf_cells(t: Tree) -> tuple[tuple[Fraction, int], ...]:
    """(start, depth) of the standard dyadic cell of each leaf; cell k is
    [start, start + 2^-depth) and the cells tile [0, 1) in leaf order."""
    out: list[tuple[Fraction, int]] = []

    def go(node: Tree, start: Fraction, depth: int):
        if node.is_leaf:
            out.append((start, depth))
            return
        half = Fraction(1, 2 ** (depth + 1))
        go(node.left, start, depth + 1)
        go(node.right, start + half, depth + 1)

    go(t, Fraction(0), 0)
    return tuple(out)


def pl_value(domain: Tree, range_: Tree, perm: Perm, x: Fraction) -> Fraction:
    """Value at x of the map sending domain cell k affinely onto range cell perm(k)."""
    if not 0 <= x < 1:
        raise ContractError("pl_value: argument must lie in [0, 1)")
    node = domain
    start = Fraction(0)
    depth = 0
    k = 1
    while not node.is_leaf:
        half = Fraction(1, 2 ** (depth + 1))
        if x < start + half:
            node = node.left
        else:
            k += node.left.leaf_count
            start += half
            node = node.right
        depth += 1
    rstart, rdepth = leaf_cells(range_)[perm(k) - 1]
    return rstart + (x - start) * Fraction(2**depth, 2**rdepth)


def eval_pl(g: VElement, x) -> Dyadic:
    """Apply g's piecewise-linear action to a dyadic point of [0, 1)."""
    if isinstance(x, Dyadic):
        d = x
    elif isinstance(x, (Fraction, int)):
        d = Dyadic.from_fraction(Fraction(x))
    else:
        raise ContractError("eval_pl: expected a Dyadic or dyadic Fraction")
    return Dyadic.from_fraction(pl_value(g.domain, g.range, g.perm, d.to_fraction()))


def pl_segments(domain: Tree, range_: Tree, perm: Perm):
    """The map as (x0, x1, y0, y1) segments: [x0, x1) is sent affinely onto [y0, y1)."""
    dcells = leaf_cells(domain)
    rcells = leaf_cells(range_)
    segs = []
    for k in range(1, domain.leaf_count + 1):
        x0, dd = dcells[k - 1]
        y0, rd = rcells[perm(k) - 1]
        segs.append((x0, x0 + Fraction(1, 2**dd), y0, y0 + Fraction(1, 2**rd)))
    return segs


def pl_maps_equal(a, b) -> bool:
    """Exact equality of two piecewise-linear maps given as raw triples."""
    segs_a = pl_segments(*a)
    segs_b = pl_segments(*b)
    cuts = sorted({s[0] for s in segs_a} | {s[0] for s in segs_b} | {Fraction(1)})

    def at(segs, x):
        for x0, x1, y0, y1 in segs:
            if x0 <= x < x1:
                return y0 + (x - x0) * (y1 - y0) / (x1 - x0)
        raise AssertionError("point not covered")

    for lo, hi in zip(cuts, cuts[1:]):
        mid = (lo + hi) / 2
        if at(segs_a, lo) != at(segs_b, lo) or at(segs_a, mid) != at(segs_b, mid):
            return False
    return True


# ---------------------------------------------------------------------------
# named trees and element families

_TREE_PRODUCTS = {
    "a": "f3 f3 f1 f1",
    "b": "f4 f3 f2 f1",
    "c": "f1 f1",
    "d": "f2 f1",
    "q": "f2 f3 f1 f1",
}


@lru_cache(maxsize=None)
def named_tree(name: str) -> Tree:
    if name not in _TREE_PRODUCTS:
        raise ContractError(f"unknown tree name {name!r}; expected one of a,b,c,d,q")
    return parse_tree(_TREE_PRODUCTS[name])


_ELEMENT_PAIRS = {"g": ("a", "b"), "h": ("c", "d"), "k": ("a", "q")}


def builtin(name: str):
    """Named objects: trees a,b,c,d,q and elements g = a/b, h = c/d, k = a/q."""
    if name in _TREE_PRODUCTS:
        return named_tree(name)
    if name in _ELEMENT_PAIRS:
        top, bottom = _ELEMENT_PAIRS[name]
        return VElement(named_tree(bottom), named_tree(top))
    raise ContractError(f"unknown builtin {name!r}")


def inflated_element(name: str, n: int, bound: int = DEFAULT_LEVEL_BOUND) -> VElement:
    """Level-n widening of g, h or k: 2^n parallel copies grafted onto the
    complete tree with 2^n leaves."""
    if name not in _ELEMENT_PAIRS:
        raise ContractError(f"inflated_element: no such family {name!r}")
    if n < 0 or n > bound:
        raise ContractError(f"inflated_element: level {n} outside 0..{bound}")
    top, bottom = _ELEMENT_PAIRS[name]
    level = complete_tree(n)
    copies = 2**n
    rng = graft(level, Forest((named_tree(top),) * copies))
    dom = graft(level, Forest((named_tree(bottom),) * copies))
    return VElement(dom, rng)


def family_kn(n: int, bound: int = DEFAULT_LEVEL_BOUND) -> VElement:
    return inflated_element("k", n, bound)


def family_gn(n: int) -> VElement:
    """The exchange family on doubled left combs; lives in V for every n >= 2
    and keeps its leaf pattern under reduction."""
    if n < 2:
        raise ContractError("family_gn: defined for n >= 2")
    comb = caret(LEAF, LEAF)
    for _ in range(n - 2):
        comb = caret(comb, LEAF)
    # comb is the left comb with n leaves; s doubles it under one root caret
    s = caret(comb, comb)
    images = list(range(1, 2 * n + 1))
    for odd in range(1, n + 1, 2):
        images[odd - 1] = odd + n
        images[odd + n - 1] = odd
    return VElement(s, s, Perm(images))


def standard_generators() -> tuple[VElement, ...]:
    """A small generating set meeting all three classes: two order-preserving
    elements, the half rotation, and a leaf exchange."""
    x0 = VElement(named_tree("d"), named_tree("c"))
    x1 = VElement(caret(LEAF, named_tree("d")), caret(LEAF, named_tree("c")))
    rot = VElement(caret(LEAF, LEAF), caret(LEAF, LEAF), Perm((2, 1)))
    t = parse_tree("f3 f1 f1")
    swap = VElement(t, t, Perm((3, 2, 1, 4)))
    return x0, x1, rot, swap


# ---------------------------------------------------------------------------
# literals and JSON

def format_element_literal(g: VElement) -> str:
    def tree_text(t: Tree) -> str:
        text = format_tree(t)
        return f"({text})" if " " in text else text

    lit = f"{tree_text(g.range)}/{tree_text(g.domain)}"
    if not g.perm.is_identity():
        lit += f"~{list(g.perm.images)}"
    return lit


def _parse_tree_text(text: str) -> Tree:
    text = text.strip()
    if text in _TREE_PRODUCTS:
        return named_tree(text)
    return parse_tree(text)


def parse_element_literal(text: str) -> VElement:
    """One-line element syntax: ``RANGE/DOMAIN~[images]`` with the bijection
    optional; also accepts the builtin names g, h, k and the family forms
    k_N and g_N."""
    text = text.strip()
    if text in _ELEMENT_PAIRS:
        return builtin(text)
    m = re.fullmatch(r"k_(\d+)", text)
    if m:
        return family_kn(int(m.group(1)))
    m = re.fullmatch(r"g_(\d+)", text)
    if m:
        return family_gn(int(m.group(1)))
    perm = None
    if "~" in text:
        text, perm_text = text.rsplit("~", 1)
        perm_text = perm_text.strip()
        if not (perm_text.startswith("[") and perm_text.endswith("]")):
            raise ParseError(f"bad bijection literal {perm_text!r}")
        try:
            images = json.loads(perm_text)
        except json.JSONDecodeError as exc:
            raise ParseError(f"bad bijection literal {perm_text!r}") from exc
        perm = Perm(images)
    if text.count("/") != 1:
        raise ParseError("element literal must be RANGE/DOMAIN with a single '/'")
    range_text, domain_text = text.split("/")
    return VElement(_parse_tree_text(domain_text), _parse_tree_text(range_text), perm)


def element_to_json(g: VElement) -> dict:
    return {
        "domain": format_tree(g.domain),
        "range": format_tree(g.range),
        "perm": list(g.perm.images),
    }


def element_from_json(data: dict) -> VElement:
    try:
        domain = _parse_tree_text(data["domain"])
        range_ = _parse_tree_text(data["range"])
    except KeyError as exc:
        raise ParseError(f"element object missing field {exc}") from exc
    perm = data.get("perm")
    return VElement(domain, range_, Perm(perm) if perm is not None else None)

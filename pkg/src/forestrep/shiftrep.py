"""Exact coefficients of the shift representation on l^2(Z).

The caret isometry sends a vector v to (shift v) tensor zeta for a fixed
window vector zeta.  Everything a forest does to an elementary tensor is
therefore describable leaf by leaf as a shift power applied to either zeta
or one of the root inputs, which keeps all inner products rational.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import NamedTuple, Sequence

from .errors import ContractError
from .thompson import VElement, inflate, named_tree, permute_forest
from .trees import Forest, Tree, complete_tree, graft, merge_trees, residual_forest

DEFAULT_WINDOW_BOUND = 3


class SparseVec:
    """Finitely supported map from integers to rationals; no stored zeros."""

    __slots__ = ("entries",)

    def __init__(self, entries: dict | None = None):
        self.entries = {k: Fraction(v) for k, v in (entries or {}).items() if v}

    def shift(self, k: int) -> "SparseVec":
        return SparseVec({i + k: v for i, v in self.entries.items()})

    def dot(self, other: "SparseVec") -> Fraction:
        small, big = self.entries, other.entries
        if len(big) < len(small):
            small, big = big, small
        return sum((v * big[i] for i, v in small.items() if i in big), Fraction(0))

    def norm_sq(self) -> Fraction:
        return sum((v * v for v in self.entries.values()), Fraction(0))

    def scale(self, c) -> "SparseVec":
        return SparseVec({i: v * c for i, v in self.entries.items()})

    def __add__(self, other: "SparseVec") -> "SparseVec":
        out = dict(self.entries)
        for i, v in other.entries.items():
            out[i] = out.get(i, Fraction(0)) + v
        return SparseVec(out)

    def __eq__(self, other):
        return isinstance(other, SparseVec) and self.entries == other.entries

    def __repr__(self):
        return f"SparseVec({dict(sorted(self.entries.items()))})"


class UnitVec(NamedTuple):
    """A unit vector kept rational: the actual vector is vec / sqrt(scale_sq).

    Inner products between shifts of the same UnitVec are exact rationals;
    mixing two carriers needs scale_sq * scale_sq to be a perfect square.
    """

    vec: SparseVec
    scale_sq: Fraction

    def inner_shifts(self, a: int, b: int) -> Fraction:
        return self.vec.shift(a).dot(self.vec.shift(b)) / self.scale_sq

    @classmethod
    def from_sparse(cls, v: SparseVec) -> "UnitVec":
        return cls(v, v.norm_sq())


def _as_unit(v) -> UnitVec:
    if isinstance(v, UnitVec):
        return v
    if isinstance(v, SparseVec):
        return UnitVec.from_sparse(v)
    raise ContractError("expected a UnitVec or SparseVec")


def unit_inner(x: UnitVec, y: UnitVec, a: int, b: int) -> Fraction:
    """<shift^a x, shift^b y> when the joint normalization is rational."""
    if x.vec is y.vec or x == y:
        return x.inner_shifts(a, b)
    product = x.scale_sq * y.scale_sq
    num_root = math.isqrt(product.numerator)
    den_root = math.isqrt(product.denominator)
    if num_root * num_root != product.numerator or den_root * den_root != product.denominator:
        raise ContractError("unit_inner: mixed carriers give an irrational normalization")
    return x.vec.shift(a).dot(y.vec.shift(b)) / Fraction(num_root, den_root)


def window_size(m: int) -> int:
    return 2 * m * 8**m


def zeta(m: int, bound: int = DEFAULT_WINDOW_BOUND) -> UnitVec:
    """Normalized indicator of {1, ..., 2m*8^m}, the scale kept symbolic so
    every reported inner product stays rational."""
    if m < 1:
        raise ContractError("zeta: index must be >= 1")
    if m > bound:
        raise ContractError(f"zeta: index {m} exceeds bound {bound}")
    h = window_size(m)
    return UnitVec(SparseVec({i: 1 for i in range(1, h + 1)}), Fraction(h))


class LeafSymbol(NamedTuple):
    """Symbolic leaf component shift^power applied to a carrier.

    ``root`` names the input slot the component descends from when the whole
    path is made of left turns; otherwise the carrier is the fixed auxiliary
    vector and ``root`` is None.
    """

    power: int
    root: int | None


def forest_apply_shift(f: Forest) -> tuple[LeafSymbol, ...]:
    """Leaf components of the forest acting on one abstract input per root.

    Each caret shifts its incoming vector down the left branch and emits the
    auxiliary vector on the right branch, so a leaf carries the input shifted
    by its depth when its path is all left turns, and otherwise the auxiliary
    vector shifted by the number of left turns below the last right turn.
    """
    out: list[LeafSymbol] = []

    def go(node: Tree, power: int, root: int | None):
        if node.is_leaf:
            out.append(LeafSymbol(power, root))
            return
        go(node.left, power + 1, root)
        go(node.right, 0, None)

    for idx, t in enumerate(f.trees, 1):
        go(t, 0, idx)
    return tuple(out)


def _resolved_powers(f: Forest, input_powers: Sequence[int]) -> list[int]:
    """Leaf shift powers when every carrier is the auxiliary vector and input
    slot j arrives already shifted by input_powers[j-1]."""
    if len(input_powers) != f.root_count:
        raise ContractError("one input power per root required")
    powers = []
    for sym in forest_apply_shift(f):
        extra = input_powers[sym.root - 1] if sym.root is not None else 0
        powers.append(sym.power + extra)
    return powers


_PAIR_TREES = ("q", "a")


def c_constant(z) -> Fraction:
    """The scalar by which the two commutator trees pair:
    <shift z, z>^2 * <z, shift^2 z>.

    Cross-checked against the symbolic leaf-by-leaf pairing of the two trees;
    the input slot must carry equal shift powers on both sides so that its
    contribution factors out of the scalar.
    """
    z = _as_unit(z)
    value = z.inner_shifts(1, 0) ** 2 * z.inner_shifts(0, 2)
    syms_q = forest_apply_shift(Forest((named_tree("q"),)))
    syms_a = forest_apply_shift(Forest((named_tree("a"),)))
    check = Fraction(1)
    for sq, sa in zip(syms_q, syms_a):
        if sq.root is not None or sa.root is not None:
            if sq.root != sa.root or sq.power != sa.power:
                raise ArithmeticError("c_constant: input dependence does not factor out")
            continue
        check *= z.inner_shifts(sq.power, sa.power)
    if check != value:
        raise ArithmeticError("c_constant: closed form disagrees with the leaf pairing")
    return value


def kn_coefficient(n: int, xi: Sequence, zeta_vec, bound: int = DEFAULT_WINDOW_BOUND) -> Fraction:
    """Diagonal coefficient of the level-n commutator inflation on the
    elementary tensor with the given 2^n slot vectors.

    Computed honestly by pairing the two symbolic leaf expansions slot by
    slot with exact sparse inner products; equals C^(2^n) times the product
    of the slot norms, with C = c_constant(zeta_vec).
    """
    if n < 0:
        raise ContractError("kn_coefficient: level must be >= 0")
    components = [_as_unit(v) for v in xi]
    if len(components) != 2**n:
        raise ContractError(
            f"kn_coefficient: expected {2**n} slot vectors at level {n}, got {len(components)}"
        )
    zeta_vec = _as_unit(zeta_vec)
    syms_q = forest_apply_shift(Forest((named_tree("q"),)))
    syms_a = forest_apply_shift(Forest((named_tree("a"),)))
    total = Fraction(1)
    for comp in components:
        for sq, sa in zip(syms_q, syms_a):
            left = comp if sq.root is not None else zeta_vec
            right = comp if sa.root is not None else zeta_vec
            total *= unit_inner(left, right, sq.power, sa.power)
    return total


def almost_invariance(g: VElement, m: int, bound: int = DEFAULT_WINDOW_BOUND) -> Fraction:
    """Exact overlap <pi(g) xi_m, xi_m> against the level-m reference vector
    (the all-equal elementary tensor over the complete tree with 2^m leaves).

    Both sides are rewritten over a common refinement tree; every component
    is then a shift power of the same window vector, so the overlap is the
    product of rational shifted inner products.
    """
    if m < 1 or m > bound:
        raise ContractError(f"almost_invariance: level {m} outside 1..{bound}")
    z = zeta(m, bound)
    level = complete_tree(m)
    slots = 2**m

    # reference vector rewritten over the refinement of (domain, level tree)
    w1 = merge_trees(g.domain, level)
    powers_w1 = _resolved_powers(residual_forest(w1, level), [0] * slots)

    # g refined so its domain is w1; its action permutes the components
    p1 = residual_forest(w1, g.domain)
    widened = inflate(g.perm, [t.leaf_count for t in p1.trees])
    range_tree = graft(g.range, permute_forest(g.perm.inverse(), p1))
    powers_range = widened.theta(powers_w1)

    # pair (range_tree, moved components) against (level, all zeros)
    w2 = merge_trees(range_tree, level)
    left = _resolved_powers(residual_forest(w2, range_tree), powers_range)
    right = _resolved_powers(residual_forest(w2, level), [0] * slots)
    value = Fraction(1)
    for a, b in zip(left, right):
        value *= z.inner_shifts(a, b)
    return value


def invariance_bound(m: int) -> Fraction:
    """(1 - 8^-m)^(4^m), the guaranteed lower bound at level m."""
    return Fraction(8**m - 1, 8**m) ** (4**m)


def almost_invariance_report(g: VElement, m: int, bound: int = DEFAULT_WINDOW_BOUND) -> dict:
    """Coefficient, bound and the depth condition under which the bound is
    guaranteed (domain no deeper than m once refined, range no deeper than 2m)."""
    value = almost_invariance(g, m, bound)
    level = complete_tree(m)
    w1 = merge_trees(g.domain, level)
    p1 = residual_forest(w1, g.domain)
    range_tree = graft(g.range, permute_forest(g.perm.inverse(), p1))
    ref = invariance_bound(m)
    return {
        "m": m,
        "coefficient": value,
        "bound": ref,
        "satisfied": value >= ref,
        "within_depth": g.domain.depth <= m and range_tree.depth <= 2 * m,
    }

"""Exact representation coefficients over binary forests.

Two computation routes live here.  The generic route contracts a finite
three-index tensor over the states of a forest (a partition function).  The
interpolation route expands the action of a tree on the vacuum basis vector
into prefix terms and pairs two such expansions into the coefficient
``phi_alpha``, an integer polynomial in alpha.
"""

from __future__ import annotations

from collections import Counter
from fractions import Fraction
from typing import Iterable, NamedTuple

from .errors import ContractError
from .ring import ONE, RingElem
from .thompson import Perm, VElement
from .trees import Forest, Tree, enumerate_trees, subrooted_trees


class RTensor:
    """Finite three-index tensor R_i^{j,k} over an explicit index set.

    ``entries`` maps (i, j, k) to an exact scalar (Fraction, int or RingElem).
    When ``check_isometry`` is set, every column i must satisfy
    sum_{j,k} R_i^{j,k}^2 = 1 exactly; symbolic entries are checked in the
    ring, which implies the identity for every parameter value.  Windows cut
    out of an infinite isometry are not themselves isometries, so they are
    built with the check disabled.
    """

    __slots__ = ("indices", "entries", "_columns", "_tables")

    def __init__(self, indices, entries: dict, check_isometry: bool = True):
        self.indices = tuple(indices)
        index_set = set(self.indices)
        if len(index_set) != len(self.indices):
            raise ContractError("RTensor: duplicate indices")
        self.entries = dict(entries)
        columns: dict = {i: [] for i in self.indices}
        for (i, j, k), value in self.entries.items():
            if i not in index_set or j not in index_set or k not in index_set:
                raise ContractError(f"RTensor: entry ({i},{j},{k}) outside the index set")
            columns[i].append(((j, k), value))
        self._columns = columns
        self._tables: dict = {}
        if check_isometry:
            for i in self.indices:
                total = sum((v * v for _, v in columns[i]), start=0)
                if isinstance(total, RingElem):
                    ok = total == ONE
                else:
                    ok = Fraction(total) == 1
                if not ok:
                    raise ContractError(f"RTensor: column {i!r} is not norm one")

    def column(self, i):
        try:
            return self._columns[i]
        except KeyError:
            raise ContractError(f"RTensor: index {i!r} outside the index set") from None

    def _tree_table(self, t: Tree, i):
        """Sparse map leaf-multi-index -> scalar for one tree with root index i."""
        key = (t, i)
        table = self._tables.get(key)
        if table is not None:
            return table
        if t.is_leaf:
            table = {(i,): 1}
        else:
            table = {}
            for (j, k), weight in self.column(i):
                left = self._tree_table(t.left, j)
                right = self._tree_table(t.right, k)
                for kl, vl in left.items():
                    for kr, vr in right.items():
                        out_key = kl + kr
                        prev = table.get(out_key, 0)
                        table[out_key] = prev + weight * vl * vr
            table = {k2: v for k2, v in table.items() if not _is_zero(v)}
        self._tables[key] = table
        return table


def _is_zero(v) -> bool:
    if isinstance(v, RingElem):
        return v.is_zero()
    return v == 0


def partition_function(f: Forest, R: RTensor, in_idx, out_idx):
    """Sum over all edge labelings compatible with the boundary indices of the
    product of R over the internal vertices.

    ``in_idx`` labels the roots, ``out_idx`` the leaves.  An empty compatible
    set yields 0; a forest with no vertices yields 1 exactly when the
    boundaries agree.
    """
    in_idx = tuple(in_idx)
    out_idx = tuple(out_idx)
    if len(in_idx) != f.root_count:
        raise ContractError("partition_function: one input index per root required")
    if len(out_idx) != f.leaf_count:
        raise ContractError("partition_function: one output index per leaf required")
    index_set = set(R.indices)
    for i in in_idx + out_idx:
        if i not in index_set:
            raise ContractError(f"partition_function: index {i!r} outside the index set")
    total = 1
    pos = 0
    for root, t in zip(in_idx, f.trees):
        segment = out_idx[pos : pos + t.leaf_count]
        pos += t.leaf_count
        value = R._tree_table(t, root).get(segment, 0)
        if _is_zero(value):
            return 0 * total if isinstance(total, RingElem) else 0
        total = total * value
    return total


# ---------------------------------------------------------------------------
# the interpolation family

class ExpansionTerm(NamedTuple):
    coefficient: RingElem
    words: tuple[str, ...]


def phi_expansion(t: Tree) -> tuple[ExpansionTerm, ...]:
    """Expansion of the tree's action on the vacuum vector: one term per
    prefix z, with coefficient alpha^(leaves(z)-1) * beta^(inner leaves of z)
    attached to the residual path words."""
    return tuple(
        ExpansionTerm(RingElem.term(entry.tree.leaf_count - 1, entry.inner_leaves), entry.words)
        for entry in subrooted_trees(t)
    )


def word_window_tensor(words: Iterable[str]) -> RTensor:
    """The interpolation tensor restricted to the suffix closure of the given
    words.  Column 'e' carries alpha on (e, e) and beta on (a, b); a word g
    maps to ('a'+g, 'b'+g) with weight one whenever both lie in the window.
    """
    closure = {""}
    for w in words:
        for k in range(len(w) + 1):
            closure.add(w[k:])
    closure.update({"a", "b"})
    entries: dict = {("", "", ""): RingElem.alpha(), ("", "a", "b"): RingElem.beta()}
    for g in closure:
        if g and "a" + g in closure and "b" + g in closure:
            entries[(g, "a" + g, "b" + g)] = ONE
    return RTensor(sorted(closure), entries, check_isometry=False)


def phi_alpha(g: VElement) -> RingElem:
    """The diagonal vacuum coefficient of g as an exact polynomial in alpha.

    Sums over pairs of prefixes (z of the range tree, r of the domain tree)
    whose residual words match under the stored leaf bijection.  The result
    is always beta-free; a beta component would be a computation bug and
    raises.
    """
    range_terms = subrooted_trees(g.range)
    domain_terms = subrooted_trees(g.domain)
    lookup = {}
    for entry in domain_terms:
        lookup[g.perm.theta(entry.words)] = (entry.tree.leaf_count, entry.inner_leaves)
    exponents: Counter = Counter()
    for entry in range_terms:
        hit = lookup.get(entry.words)
        if hit is not None:
            leaves_r, inner_r = hit
            exponents[(entry.tree.leaf_count + leaves_r - 2, entry.inner_leaves + inner_r)] += 1
    result = RingElem()
    for (alpha_exp, beta_exp), count in sorted(exponents.items()):
        result = result + count * RingElem.term(alpha_exp, beta_exp)
    if not result.is_beta_free():
        raise ArithmeticError(
            "phi_alpha: nonzero beta component; matched terms must absorb beta in pairs"
        )
    return result


def phi_alpha_eval(g: VElement, alpha) -> Fraction:
    """Exact rational value of phi_alpha at a rational parameter in [0, 1]."""
    alpha = Fraction(alpha)
    if not 0 <= alpha <= 1:
        raise ContractError("phi_alpha_eval: alpha must lie in [0, 1]")
    return phi_alpha(g).eval(alpha)


# ---------------------------------------------------------------------------
# comparison with the exponential-decay family

class FarleyPhi(NamedTuple):
    """exp(-beta)^exponent kept exact as the pair (beta, exponent)."""

    beta: Fraction
    exponent: int

    def as_float(self) -> float:
        import math

        return math.exp(-float(self.beta) * self.exponent)


def farley_norm(g: VElement) -> int:
    """Squared cocycle length of a reduced pair with n leaves: 2n - 2."""
    return 2 * g.leaf_count - 2


def farley_phi(g: VElement, beta) -> FarleyPhi:
    beta = Fraction(beta)
    if beta < 0:
        raise ContractError("farley_phi: decay rate must be >= 0")
    return FarleyPhi(beta, farley_norm(g))


def farley_matches_phi(g: VElement) -> bool:
    """Whether phi_alpha(g) equals the pure monomial alpha^(2n-2) as a
    polynomial, i.e. whether the exponential-decay family sees g the same way."""
    return phi_alpha(g) == RingElem.term(farley_norm(g), 0)


# ---------------------------------------------------------------------------
# positive semidefiniteness, exactly

class GramResult(NamedTuple):
    is_psd: bool
    witness: dict | None


def psd_ldlt(matrix) -> GramResult:
    """Decide positive semidefiniteness of a symmetric rational matrix by
    pivoted LDL^T, no tolerances.

    The pivot is the largest remaining diagonal entry, lowest index first.
    A negative pivot, or a zero pivot alongside a nonzero residual
    off-diagonal entry, refutes PSD and is returned as the witness.
    """
    work = [[Fraction(v) for v in row] for row in matrix]
    active = list(range(len(work)))
    while active:
        pivot = max(active, key=lambda i: (work[i][i], -i))
        value = work[pivot][pivot]
        if value < 0:
            return GramResult(False, {"kind": "negative_pivot", "index": pivot, "value": value})
        if value == 0:
            for i in active:
                for j in active:
                    if work[i][j] != 0:
                        return GramResult(
                            False,
                            {"kind": "zero_pivot_offdiagonal", "row": i, "col": j, "value": work[i][j]},
                        )
            return GramResult(True, None)
        active.remove(pivot)
        col = {i: work[i][pivot] for i in active}
        for i in active:
            for j in active:
                work[i][j] -= col[i] * col[j] / value
    return GramResult(True, None)


def gram_psd_check(elements, alpha) -> GramResult:
    """Exact PSD verdict for M[i][j] = phi_alpha(g_i^-1 g_j) at a rational alpha."""
    from .thompson import inverse, multiply

    alpha = Fraction(alpha)
    if not 0 <= alpha <= 1:
        raise ContractError("gram_psd_check: alpha must lie in [0, 1]")
    elements = list(elements)
    matrix = [
        [phi_alpha_eval(multiply(inverse(gi), gj), alpha) for gj in elements]
        for gi in elements
    ]
    return psd_ldlt(matrix)


# ---------------------------------------------------------------------------
# decay table on rotation elements

class VanishRow(NamedTuple):
    leaves: int
    count: int
    phi_value: Fraction
    max_deviation: Fraction


def reduced_rotation_elements(max_leaves: int, bound: int = 12):
    """All reduced (tree, tree, rotation) triples with up to max_leaves leaves,
    in deterministic order."""
    for n in range(1, max_leaves + 1):
        trees = enumerate_trees(n, bound=max(bound, max_leaves))
        for range_tree in trees:
            for domain_tree in trees:
                for c in range(n):
                    g = VElement(domain_tree, range_tree, Perm.rotation(n, c))
                    if g.leaf_count == n:
                        yield g


def vanishing_scan(alpha, max_leaves: int, bound: int = 12) -> list[VanishRow]:
    """Tabulate phi_alpha over all reduced rotation pairs by leaf count.

    For each n the computed value must be exactly alpha^(2n-2); the deviation
    column records the largest absolute difference actually observed.
    """
    alpha = Fraction(alpha)
    if not 0 <= alpha <= 1:
        raise ContractError("vanishing_scan: alpha must lie in [0, 1]")
    if max_leaves > bound:
        raise ContractError(f"vanishing_scan: max_leaves {max_leaves} exceeds bound {bound}")
    per_n: dict[int, list[Fraction]] = {n: [] for n in range(1, max_leaves + 1)}
    for g in reduced_rotation_elements(max_leaves, bound):
        per_n[g.leaf_count].append(phi_alpha_eval(g, alpha))
    rows = []
    for n in range(1, max_leaves + 1):
        expected = alpha ** (2 * n - 2)
        values = per_n[n]
        deviation = max((abs(v - expected) for v in values), default=Fraction(0))
        rows.append(VanishRow(n, len(values), expected, deviation))
    return rows

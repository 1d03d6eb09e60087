"""Separating linear forms for the solution set, by divide and conquer
over variable blocks.

Project the solutions onto every coordinate (n oracle calls), then
repeatedly combine two blocks: if l1 separates the projections on block
I and l2 those on block J, and s separates the grid of root sets of
their elimination polynomials, then l1 + s*l2 separates the projections
on I union J.  A binary tree over the variables therefore reaches a
separating form for the full solution set with exactly 2n-1 oracle
calls (one per node), each along a form of small coefficient bitsize.

The family variant makes the root combination with a block of 2nd+1
consecutive separating integers instead of one, yielding a
one-parameter family of separating forms; shear selection over that
block then picks an instance whose elimination polynomial is certified
strong (no spurious roots), provided the system has no solutions at
infinity.

Sibling subtrees are independent; the oracle seed is split
deterministically per node, so results do not depend on evaluation
order.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .elimination import (
    EliminationResult,
    FormFamily,
    LinearForm,
    Strongness,
    certify_strong,
    check_no_infinity,
    choose_shear,
    hidden_var_resultant,
)
from .errors import CertificationError
from .gridsep import find_separating_block
from .isolation import RootSet, isolate
from .polynomials import PolynomialSystem, squarefree_part

__all__ = [
    "SlfNode",
    "SlfTree",
    "SlfFamily",
    "EliminationOracle",
    "build_slf_tree",
    "build_slf_family",
    "select_strong_slf",
    "BASE_ROOT_QUALITY",
]

BASE_ROOT_QUALITY = 8


class EliminationOracle:
    """Counts calls to the elimination engine for one system; the seed is
    split deterministically per call."""

    def __init__(self, system: PolynomialSystem, seed: int = 0):
        self.system = system
        self._rng = random.Random(seed)
        self.calls = 0

    def eliminate(self, form: LinearForm) -> EliminationResult:
        self.calls += 1
        return hidden_var_resultant(self.system, form, seed=self._rng.getrandbits(64))


@dataclass
class SlfNode:
    """One node of the divide-and-conquer tree: a linear form over a block
    of variables, its elimination polynomial, and the root set of that
    polynomial's squarefree part.  Internal nodes record the combining
    integer s with form = left.form + s * right.form."""

    variables: tuple[int, ...]
    block_coeffs: tuple[int, ...]
    form: LinearForm
    elimination: EliminationResult
    rootset: RootSet
    s: int | None = None
    left: "SlfNode | None" = None
    right: "SlfNode | None" = None

    def is_leaf(self) -> bool:
        return self.left is None

    def check_recursion(self) -> bool:
        """The combining identity must hold exactly at every internal node."""
        if self.is_leaf():
            return True
        expected = self.left.block_coeffs + tuple(
            self.s * c for c in self.right.block_coeffs
        )
        return (
            self.block_coeffs == expected
            and self.left.check_recursion()
            and self.right.check_recursion()
        )


@dataclass
class SlfTree:
    root: SlfNode
    oracle_calls: int
    leaves: list[SlfNode] = field(default_factory=list)


@dataclass
class SlfFamily:
    """Parametric separating form sum (a0_i + a1_i s) x_i, separating for
    every s in the block; carries the two subtrees so solutions can be
    reconstructed after an instance is chosen."""

    family: FormFamily
    block_start: int
    block_length: int
    left: SlfNode | None
    right: SlfNode | None
    oracle_calls: int
    leaves: list[SlfNode] = field(default_factory=list)

    def block(self) -> range:
        return range(self.block_start, self.block_start + self.block_length)


def _root_set(result: EliminationResult, quality: int) -> RootSet:
    poly = squarefree_part(result.polynomial) if result.polynomial.degree > 0 else result.polynomial
    return isolate(poly, quality)


def _make_leaf(oracle: EliminationOracle, n: int, var: int) -> SlfNode:
    form = LinearForm.coordinate(n, var)
    res = oracle.eliminate(form)
    return SlfNode(
        variables=(var,),
        block_coeffs=(1,),
        form=form,
        elimination=res,
        rootset=_root_set(res, BASE_ROOT_QUALITY),
    )


def _combine(
    oracle: EliminationOracle, n: int, left: SlfNode, right: SlfNode, c: int
) -> tuple[SlfNode, int]:
    """Find a block of c separating integers for the child root grids and
    build the combined node (oracle call for its elimination polynomial).
    Returns the node and the block start."""
    block = find_separating_block(left.rootset, right.rootset, c)
    s = block.s_star
    coeffs = left.block_coeffs + tuple(s * cc for cc in right.block_coeffs)
    variables = left.variables + right.variables
    form = LinearForm.embedded(n, variables, coeffs)
    res = oracle.eliminate(form)
    node = SlfNode(
        variables=variables,
        block_coeffs=coeffs,
        form=form,
        elimination=res,
        rootset=_root_set(res, BASE_ROOT_QUALITY),
        s=s,
        left=left,
        right=right,
    )
    assert node.check_recursion()
    return node, block.s_star


def _build_subtree(oracle: EliminationOracle, n: int, variables: tuple[int, ...]) -> SlfNode:
    if len(variables) == 1:
        return _make_leaf(oracle, n, variables[0])
    half = (len(variables) + 1) // 2
    left = _build_subtree(oracle, n, variables[:half])
    right = _build_subtree(oracle, n, variables[half:])
    node, _ = _combine(oracle, n, left, right, 1)
    return node


def _collect_leaves(node: SlfNode) -> list[SlfNode]:
    if node.is_leaf():
        return [node]
    return _collect_leaves(node.left) + _collect_leaves(node.right)


def build_slf_tree(
    system: PolynomialSystem,
    oracle: EliminationOracle | None = None,
    seed: int = 0,
) -> SlfTree:
    """Divide-and-conquer tree whose root form separates the solution set;
    exactly 2n-1 oracle calls."""
    oracle = oracle or EliminationOracle(system, seed)
    n = system.num_vars
    root = _build_subtree(oracle, n, tuple(range(n)))
    return SlfTree(root, oracle.calls, _collect_leaves(root))


def build_slf_family(
    system: PolynomialSystem,
    oracle: EliminationOracle | None = None,
    seed: int = 0,
) -> SlfFamily:
    """Same construction, but the final combination returns a block of
    2nd+1 consecutive separating integers, so every instance l1 + s*l2
    with s in the block is separating."""
    oracle = oracle or EliminationOracle(system, seed)
    n = system.num_vars
    if n == 1:
        leaf = _make_leaf(oracle, n, 0)
        fam = FormFamily((1,), (0,), 0)
        return SlfFamily(fam, 1, 1, None, None, oracle.calls, [leaf])
    variables = tuple(range(n))
    half = (n + 1) // 2
    left = _build_subtree(oracle, n, variables[:half])
    right = _build_subtree(oracle, n, variables[half:])
    d = max(1, system.magnitude.degree)
    want = 2 * n * d + 1
    block = find_separating_block(left.rootset, right.rootset, want)
    a0 = [0] * n
    a1 = [0] * n
    for idx, c in zip(left.variables, left.block_coeffs):
        a0[idx] = c
    for idx, c in zip(right.variables, right.block_coeffs):
        a1[idx] = c
    fam = FormFamily(tuple(a0), tuple(a1), left.variables[0])
    leaves = _collect_leaves(left) + _collect_leaves(right)
    return SlfFamily(fam, block.s_star, want, left, right, oracle.calls, leaves)


def select_strong_slf(
    family: SlfFamily,
    system: PolynomialSystem,
    oracle: EliminationOracle | None = None,
    seed: int = 0,
) -> tuple[LinearForm, EliminationResult, SlfNode]:
    """Pick s in the family's block so the sheared system keeps pivot-free
    top-degree terms, compute its elimination polynomial, and certify it
    strong.  Requires a system with no solutions at infinity.  Returns
    the instantiated form, the certified result, and the assembled root
    node for reconstruction."""
    oracle = oracle or EliminationOracle(system, seed)
    if not check_no_infinity(system):
        raise CertificationError(
            "system has solutions at infinity; remove them before selecting "
            "a strong separating form"
        )
    rng = random.Random(seed ^ 0x5F5F5F5F)
    n = system.num_vars
    if n == 1:
        leaf = family.leaves[0]
        strong = certify_strong(leaf.elimination, system)
        res = EliminationResult(leaf.elimination.polynomial, leaf.form, strong, None)
        node = SlfNode(
            variables=(0,),
            block_coeffs=(1,),
            form=leaf.form,
            elimination=res,
            rootset=leaf.rootset,
        )
        return leaf.form, res, node
    lam_set = list(family.block())
    choice = choose_shear(system, family.family, lam_set, rng)
    res = oracle.eliminate(choice.form)
    strong = certify_strong(res, system)
    if strong is not Strongness.CERTIFIED_STRONG:
        # scan the rest of the block deterministically before giving up
        for lam in lam_set:
            if lam == choice.lambda_star:
                continue
            form = family.family.instantiate(lam)
            res_try = oracle.eliminate(form)
            if certify_strong(res_try, system) is Strongness.CERTIFIED_STRONG:
                choice, res, strong = None, res_try, Strongness.CERTIFIED_STRONG
                chosen_form, chosen_lam = form, lam
                break
        else:
            raise CertificationError(
                "no instance in the separating block certified strong"
            )
    if choice is not None:
        chosen_form, chosen_lam = choice.form, choice.lambda_star
    certified = EliminationResult(
        res.polynomial, chosen_form, Strongness.CERTIFIED_STRONG, chosen_lam
    )
    node = SlfNode(
        variables=family.left.variables + family.right.variables,
        block_coeffs=family.left.block_coeffs
        + tuple(chosen_lam * c for c in family.right.block_coeffs),
        form=chosen_form,
        elimination=certified,
        rootset=_root_set(certified, BASE_ROOT_QUALITY),
        s=chosen_lam,
        left=family.left,
        right=family.right,
    )
    assert node.check_recursion()
    return chosen_form, certified, node

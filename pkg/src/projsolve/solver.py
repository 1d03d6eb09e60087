"""End-to-end solving: reconstruct all solutions from a separating-form
tree, after removing solutions at infinity.

Reconstruction walks the tree top down.  The root's elimination
polynomial is certified strong, so its distinct roots are exactly the
projections of the solutions; each projected value is lifted through
every internal node (unique grid preimage under x + s*y) until only
leaf coordinates remain.  Distinct solutions may share coordinates, but
they differ somewhere, so the coordinate boxes assembled per solution
are pairwise disjoint as boxes in C^n.

Solutions at infinity are removed up front by a random change of the
homogenizing coordinate (checked, redrawn until the resultant of the
leading forms is nonzero) and classified away afterwards: the
homogenizing value of a candidate is either exactly zero or bounded
away from zero by the coordinate root bounds of the original and
transformed systems, so interval refinement always decides.

The whole pipeline is a pure function of (system, quality, seed).
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .dyadic import ComplexBox, Dyadic, interval_div, interval_sqrt
from .elimination import (
    LinearForm,
    Strongness,
    check_no_infinity,
    forms_resultant_nonzero,
)
from .errors import CertificationError, NotZeroDimensionalError
from .gridsep import lift
from .isolation import RootSet, gamma_bits, isolate, refine_aligned
from .polynomials import (
    PolynomialSystem,
    eval_interval,
    homogenize,
    restrict_to_infinity,
)
from .slf import BASE_ROOT_QUALITY, EliminationOracle, SlfNode, build_slf_family, select_strong_slf

__all__ = [
    "SolutionBox",
    "InfinityTransform",
    "LevelImage",
    "SolveResult",
    "reconstruct",
    "remove_infinity",
    "classify_and_invert",
    "solve",
]


@dataclass(frozen=True)
class SolutionBox:
    """One solution: a box per coordinate, each of half-width below
    2**-quality, certified by interval evaluation of every system
    polynomial."""

    coordinates: tuple[ComplexBox, ...]
    quality: int

    def sort_key(self):
        return tuple(
            (c.re.lo.to_fraction(), c.im.lo.to_fraction()) for c in self.coordinates
        )


@dataclass(frozen=True)
class InfinityTransform:
    """Shift of the homogenizing coordinate by sum(lambdas[i] * x_i)."""

    lambdas: tuple[int, ...]

    def is_identity(self) -> bool:
        return all(v == 0 for v in self.lambdas)


@dataclass
class LevelImage:
    """Trace record: the realized image of the solution set under one
    node's form during reconstruction."""

    variables: tuple[int, ...]
    root_indices: list[int]


@dataclass
class SolveResult:
    solutions: list[SolutionBox]
    oracle_calls: int
    seed: int
    transform: InfinityTransform
    form: LinearForm | None
    infinity_draws: int = 0
    dropped_at_infinity: int = 0


# ---------------------------------------------------------------------------
# reconstruction
# ---------------------------------------------------------------------------


class _Reconstruction:
    """Solutions as index tuples into the leaf root sets, refinable to any
    output quality."""

    def __init__(self, leaves: dict[int, RootSet], tuples: list[tuple[int, ...]]):
        self.leaves = leaves  # variable index -> aligned RootSet
        self.tuples = tuples  # per solution: root index per variable

    def boxes(self, quality: int) -> list[SolutionBox]:
        for var in self.leaves:
            self.leaves[var] = refine_aligned(self.leaves[var], quality)
        out = []
        for tup in self.tuples:
            coords = tuple(
                self.leaves[var].roots[idx].box for var, idx in enumerate(tup)
            )
            out.append(SolutionBox(coords, quality))
        return out


def _expand_node(
    node: SlfNode,
    indices: list[int],
    sets: dict[int, RootSet],
    leaf_sets: dict[int, RootSet],
    trace: list[LevelImage] | None,
) -> dict[int, tuple[int, ...]]:
    """Map each root index of node.rootset (restricted to `indices`) to the
    tuple of leaf root indices it decomposes into.  `sets` caches refined
    root sets per node so precision gained in one lift is reused."""
    if trace is not None:
        trace.append(LevelImage(node.variables, sorted(indices)))
    if node.is_leaf():
        leaf_sets[node.variables[0]] = sets.get(id(node), node.rootset)
        return {i: (i,) for i in indices}
    z_set = sets.get(id(node), node.rootset)
    x_set = sets.get(id(node.left), node.left.rootset)
    y_set = sets.get(id(node.right), node.right.rootset)
    pairs, xq, yq = lift(
        z_set, x_set, y_set, node.s, BASE_ROOT_QUALITY, z_indices=indices
    )
    sets[id(node.left)] = xq
    sets[id(node.right)] = yq
    x_indices = sorted({p.x_index for p in pairs})
    y_indices = sorted({p.y_index for p in pairs})
    left_map = _expand_node(node.left, x_indices, sets, leaf_sets, trace)
    right_map = _expand_node(node.right, y_indices, sets, leaf_sets, trace)
    out = {}
    for z_idx, pair in zip(indices, pairs):
        out[z_idx] = left_map[pair.x_index] + right_map[pair.y_index]
    return out


def _reconstruct_rich(
    root: SlfNode, trace: list[LevelImage] | None = None
) -> _Reconstruction:
    if root.elimination.strong is not Strongness.CERTIFIED_STRONG:
        raise CertificationError(
            "reconstruction requires a certified-strong root elimination polynomial"
        )
    indices = list(range(len(root.rootset)))
    sets: dict = {}
    leaf_sets: dict[int, RootSet] = {}
    if root.is_leaf():
        maps = {i: (i,) for i in indices}
        leaf_sets[root.variables[0]] = root.rootset
    else:
        maps = _expand_node(root, indices, sets, leaf_sets, trace)
    tuples = [maps[i] for i in indices]
    # each tuple is already ordered by ascending variable: the tree splits
    # a sorted variable range and concatenates left block then right block
    return _Reconstruction(leaf_sets, tuples)


def reconstruct(
    root: SlfNode, quality: int, trace: list[LevelImage] | None = None
) -> list[SolutionBox]:
    """All solutions of the system behind the tree, as coordinate boxes of
    the requested quality; the count equals the number of distinct roots
    of the root elimination polynomial."""
    return _reconstruct_rich(root, trace).boxes(quality)


# ---------------------------------------------------------------------------
# infinity handling
# ---------------------------------------------------------------------------


def _transform_system(
    system: PolynomialSystem, lambdas: tuple[int, ...]
) -> tuple[PolynomialSystem, list]:
    """Apply x_{n+1} -> x_{n+1} + sum(lambdas[i] * x_i) to the homogenized
    system; returns the affinized result and the restrictions of the
    projective transforms to the hyperplane at infinity (the affinization
    can drop degrees, so the infinity check must use the latter)."""
    n = system.num_vars
    affine = []
    at_infinity = []
    for p in system.polys:
        hom = homogenize(p, p.total_degree)
        coeffs = tuple(-v for v in lambdas) + (1,)
        sheared = hom.substitute_linear(n, coeffs)
        affine.append(sheared.substitute_value_one(n))
        at_infinity.append(restrict_to_infinity(sheared))
    return PolynomialSystem(tuple(affine)), at_infinity


def remove_infinity(
    system: PolynomialSystem, rng: random.Random | int = 0, force_shift: bool = False
) -> tuple[PolynomialSystem, InfinityTransform, int]:
    """Replace the system by one with no solutions at infinity, drawing the
    homogenizing shift at random (at least half the candidates work) and
    verifying each draw via the leading-form resultant.  Returns the
    transformed system, the transform, and the number of draws."""
    if isinstance(rng, int):
        rng = random.Random(rng)
    n = system.num_vars
    if not force_shift and check_no_infinity(system):
        return system, InfinityTransform((0,) * n), 0
    d = max(1, system.magnitude.degree)
    bound = 2 * d**n
    for attempt in range(1, 129):
        lambdas = tuple(rng.randrange(bound + 1) for _ in range(n))
        transformed, at_infinity = _transform_system(system, lambdas)
        if forms_resultant_nonzero(at_infinity):
            return transformed, InfinityTransform(lambdas), attempt
    raise NotZeroDimensionalError(
        "no homogenizing shift removed the solutions at infinity; the system "
        "may not be zero-dimensional in projective space"
    )


def _box_div(num: ComplexBox, den: ComplexBox, precision: int) -> ComplexBox:
    """num / den with 0 certified outside den."""
    mod2 = den.abs_square()
    inv_re = interval_div(den.re, mod2, precision)
    inv_im = interval_div(-den.im, mod2, precision)
    inv = ComplexBox(inv_re, inv_im)
    return (num * inv).round_outward(precision)


def classify_and_invert(
    recon: _Reconstruction,
    transform: InfinityTransform,
    quality: int,
    gamma_total: int,
) -> tuple[list[SolutionBox], int]:
    """Undo the homogenizing shift: a candidate with homogenizing value
    certified nonzero maps to a finite solution of the original system
    (coordinates divided by that value); one with modulus certifiably
    below the 2**-(2*gamma+1) separation threshold is a solution at
    infinity and is dropped.  Returns the finite solutions and the number
    dropped."""
    if transform.is_identity():
        return recon.boxes(quality), 0
    lambdas = transform.lambdas
    margin = max(1, sum(abs(v) for v in lambdas)).bit_length() + 2
    threshold = Dyadic(1, -(2 * gamma_total + 1))
    work = max(quality + margin + 4, 2 * gamma_total + margin + 8)
    pending = list(range(len(recon.tuples)))
    decided_finite: list[int] = []
    dropped = 0
    while pending:
        for var in recon.leaves:
            recon.leaves[var] = refine_aligned(recon.leaves[var], work)
        still = []
        for k in pending:
            tup = recon.tuples[k]
            hom = ComplexBox.point(1)
            for var, idx in enumerate(tup):
                if lambdas[var]:
                    hom = hom + recon.leaves[var].roots[idx].box.scale_int(lambdas[var])
            modulus = interval_sqrt(hom.abs_square(), work)
            if modulus.lo.man > 0:
                decided_finite.append(k)
            elif modulus.hi < threshold:
                dropped += 1
            else:
                still.append(k)
        pending = still
        work *= 2
    # divide coordinates by the homogenizing value, refining until the
    # output boxes meet the quality target
    out: list[SolutionBox] = []
    precision = work
    while True:
        for var in recon.leaves:
            recon.leaves[var] = refine_aligned(recon.leaves[var], precision)
        out = []
        ok = True
        target = Dyadic(1, -quality)
        for k in decided_finite:
            tup = recon.tuples[k]
            hom = ComplexBox.point(1)
            for var, idx in enumerate(tup):
                if lambdas[var]:
                    hom = hom + recon.leaves[var].roots[idx].box.scale_int(lambdas[var])
            coords = []
            for var, idx in enumerate(tup):
                box = recon.leaves[var].roots[idx].box
                coords.append(_box_div(box, hom, precision))
            if any(c.half_width() >= target for c in coords):
                ok = False
                break
            out.append(SolutionBox(tuple(coords), quality))
        if ok:
            return out, dropped
        precision *= 2


# ---------------------------------------------------------------------------
# the pipeline
# ---------------------------------------------------------------------------


def _certify_solutions(system: PolynomialSystem, solutions: list[SolutionBox]) -> None:
    for sol in solutions:
        for p in system.polys:
            enclosure = eval_interval(p, list(sol.coordinates))
            if not enclosure.contains_zero():
                raise CertificationError(
                    "a reported solution box fails the interval-zero certificate"
                )


def solve(
    system: PolynomialSystem,
    quality: int = 53,
    seed: int = 0,
    check: bool = True,
) -> SolveResult:
    """All complex solutions of a square integer polynomial system as
    certified isolating boxes.

    Pipeline: remove solutions at infinity, build a family of separating
    linear forms, pick one whose elimination polynomial certifies strong,
    reconstruct the solutions by grid lifting, then undo the homogenizing
    shift and drop the solutions at infinity.  Las Vegas: the output is
    always correct, the seed only steers the random draws."""
    if quality < 1:
        raise ValueError("quality must be at least 1")
    rng = random.Random(seed)
    n = system.num_vars
    bezout = system.bezout_bound
    if n == 1:
        poly = system.polys[0].to_unipoly()
        if poly.is_zero():
            raise NotZeroDimensionalError("the zero polynomial has every point as a solution")
        roots = isolate(poly, quality)
        sols = [SolutionBox((r.box,), quality) for r in roots.roots]
        sols.sort(key=SolutionBox.sort_key)
        if check:
            _certify_solutions(system, sols)
        return SolveResult(sols, 0, seed, InfinityTransform((0,)), None)
    total_calls = 0
    last_error: Exception | None = None
    for attempt in range(8):
        transformed, transform, draws = remove_infinity(
            system, rng, force_shift=attempt > 0
        )
        oracle = EliminationOracle(transformed, rng.getrandbits(64))
        family = build_slf_family(transformed, oracle)
        try:
            form, strong_result, root_node = select_strong_slf(
                family, transformed, oracle, seed=rng.getrandbits(64)
            )
        except CertificationError as exc:
            last_error = exc
            total_calls += oracle.calls
            continue
        recon = _reconstruct_rich(root_node)
        gamma_total = 1
        if not transform.is_identity():
            original_oracle = EliminationOracle(system, rng.getrandbits(64))
            gammas = []
            for i in range(n):
                res = original_oracle.eliminate(LinearForm.coordinate(n, i))
                gammas.append(gamma_bits(res.polynomial))
            for leaf in family.leaves:
                gammas.append(gamma_bits(leaf.elimination.polynomial))
            gamma_total = max(gammas)
            total_calls += original_oracle.calls
        solutions, dropped = classify_and_invert(recon, transform, quality, gamma_total)
        solutions.sort(key=SolutionBox.sort_key)
        total_calls += oracle.calls
        if len(solutions) > bezout:
            raise CertificationError("solution count exceeds the Bezout bound")
        if check:
            _certify_solutions(system, solutions)
        return SolveResult(
            solutions, total_calls, seed, transform, form, draws, dropped
        )
    raise CertificationError(
        f"could not certify a strong separating form after several "
        f"randomizations: {last_error}"
    )

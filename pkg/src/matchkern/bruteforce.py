"""Ground-truth oracles: deliberately naive exhaustive searches.

These are the reference implementations that the fast paths are tested
against, so they stay independent of the kernel builders: plain
depth-first enumeration with hereditary feasibility pruning and hard size
guards.  ``enumerated`` counts every candidate subset whose feasibility
was decided (the empty set included); on an unconstrained instance that
equals the closed form sum of C(n, j) for j = 0..k.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

from .errors import ParameterError, SizeGuardError
from .matchoid import Matchoid
from .repset import Weights

MAX_WEIGHT_GROUND = 20
MAX_COVER_GROUND = 16
MAX_CHECK_GROUND = 14


@dataclass(frozen=True)
class BruteForceResult:
    value: Fraction
    witness: frozenset[int]
    enumerated: int


@dataclass(frozen=True)
class RepCheck:
    """Outcome of a representativity check, with a counterexample on failure."""

    ok: bool
    violation: tuple[frozenset[int], int] | None = None

    def __bool__(self) -> bool:
        return self.ok


def brute_max_weight_feasible(
    matchoid: Matchoid, weights: Weights, k: int
) -> BruteForceResult:
    """Optimum weight over feasible subsets of size at most ``k``."""
    if k < 0:
        raise ParameterError("k must be nonnegative")
    universe = sorted(matchoid.universe)
    if len(universe) > MAX_WEIGHT_GROUND:
        raise SizeGuardError(
            f"brute-force weight search is capped at {MAX_WEIGHT_GROUND} elements"
        )
    best_set: frozenset[int] = frozenset()
    best_value = Fraction(0)
    enumerated = 1  # the empty set

    def extend(current: tuple[int, ...], value: Fraction, start: int) -> None:
        nonlocal best_set, best_value, enumerated
        if value > best_value:
            best_set, best_value = frozenset(current), value
        if len(current) == k:
            return
        for idx in range(start, len(universe)):
            e = universe[idx]
            candidate = current + (e,)
            enumerated += 1
            if matchoid.is_feasible(candidate):
                extend(candidate, value + weights(e), idx + 1)

    extend((), Fraction(0), 0)
    return BruteForceResult(best_value, best_set, enumerated)


def top_weight(
    points: Iterable[int], point_weights: Mapping[int, Fraction], z: int
) -> Fraction:
    """Total weight of the ``z`` heaviest of the given points."""
    ranked = sorted((point_weights[p] for p in points), reverse=True)
    return sum(ranked[: max(z, 0)], Fraction(0))


def brute_max_coverage(
    matchoid: Matchoid,
    pointsets: Mapping[int, frozenset[int]],
    point_weights: Mapping[int, Fraction],
    z: int,
) -> BruteForceResult:
    """Optimum over all feasible sets of the weight of their top-z covered points."""
    if z < 0:
        raise ParameterError("z must be nonnegative")
    universe = sorted(matchoid.universe)
    if len(universe) > MAX_COVER_GROUND:
        raise SizeGuardError(
            f"brute-force coverage search is capped at {MAX_COVER_GROUND} elements"
        )
    best_set: frozenset[int] = frozenset()
    best_value = Fraction(0)
    enumerated = 1

    def extend(current: tuple[int, ...], covered: frozenset[int], start: int) -> None:
        nonlocal best_set, best_value, enumerated
        value = top_weight(covered, point_weights, z)
        if value > best_value:
            best_set, best_value = frozenset(current), value
        for idx in range(start, len(universe)):
            e = universe[idx]
            candidate = current + (e,)
            enumerated += 1
            if matchoid.is_feasible(candidate):
                extend(candidate, covered | pointsets[e], idx + 1)

    extend((), frozenset(), 0)
    return BruteForceResult(best_value, best_set, enumerated)


def _feasible_sets_up_to(matchoid: Matchoid, k: int) -> list[frozenset[int]]:
    universe = sorted(matchoid.universe)
    found: list[frozenset[int]] = [frozenset()]

    def extend(current: tuple[int, ...], start: int) -> None:
        if len(current) == k:
            return
        for idx in range(start, len(universe)):
            candidate = current + (universe[idx],)
            if matchoid.is_feasible(candidate):
                found.append(frozenset(candidate))
                extend(candidate, idx + 1)

    extend((), 0)
    return found


def check_joint_rep_set(
    kept: Iterable[int],
    pool: Iterable[int],
    matchoid: Matchoid,
    weights: Weights,
    k: int,
) -> RepCheck:
    """Definition-level representativity check by full enumeration.

    For every feasible set B with at most k elements and every b in B that
    came from ``pool``, some kept element at least as heavy must be able to
    replace b in B.  The replacement must come from outside B - b: reusing
    an element of B - b shrinks the set and loses b's weight, which would
    let kernels pass while dropping the optimum.  Returns the first
    violating (B, b) pair otherwise.
    """
    if k < 1:
        raise ParameterError("k must be a positive integer")
    universe = matchoid.universe
    if len(universe) > MAX_CHECK_GROUND:
        raise SizeGuardError(
            f"representativity check is capped at {MAX_CHECK_GROUND} elements"
        )
    kept_set = frozenset(kept)
    pool_set = frozenset(pool)
    ranked = weights.sort(kept_set)
    for b_set in _feasible_sets_up_to(matchoid, k):
        for b in sorted(b_set & pool_set):
            if b in kept_set:
                continue  # b replaces itself
            need = weights(b)
            base = b_set - {b}
            found = False
            for e in ranked:
                if weights(e) < need:
                    break  # ranked by weight, nothing lighter can serve
                if e not in base and matchoid.is_feasible(base | {e}):
                    found = True
                    break
            if not found:
                return RepCheck(False, (b_set, b))
    return RepCheck(True, None)


def check_well_colored(hash_fn, points: Iterable[int]) -> bool:
    """True iff the hash assigns pairwise distinct colors to the points."""
    pts = list(points)
    return len({hash_fn.color(p) for p in pts}) == len(set(pts))

"""Representative-set kernels for max-weight feasible sets under a matchoid.

The builder grows a branching tree.  Each tree node grabs the heaviest
element that survived to it and, while the branch budget ``(k-1) * ell``
allows, recurses once per member matroid containing that element, removing
everything newly spanned inside that matroid.  The union of grabbed
elements over all nodes is a joint k-representative set: for every
feasible set B of size at most k and every element b of B drawn from the
input pool, some kept element at least as heavy can replace b in B without
breaking feasibility.

The tree has at most ``rep_bound(ell, k)`` nodes, which simultaneously
bounds the output size and (times the pool size) the number of
independence queries.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, NamedTuple, Sequence

from .errors import DomainError, ParameterError
from .matchoid import Matchoid

# Refuse bound computations whose exponent range is absurd; everything in
# this package is meant for small fixed parameters.
_EXPONENT_CAP = 4096


def rep_bound(ell: int, k: int) -> int:
    """Upper bound on representative-set size: sum of ell**q for q up to (k-1)*ell."""
    if ell < 1:
        raise ParameterError("ell must be at least 1")
    if k < 1:
        raise ParameterError("k must be at least 1")
    top = (k - 1) * ell
    if top > _EXPONENT_CAP:
        raise OverflowError(f"bound exponent {top} exceeds the supported range")
    if ell == 1:
        return k
    return (ell ** (top + 1) - 1) // (ell - 1)


class Weights:
    """Element weights plus a strict priority order.

    Priority sorts heavier elements first and breaks ties toward the
    smaller order index; the order index is the element id unless an
    explicit order (arrival time, for streams) is supplied.  Weights are
    held as exact rationals so comparisons never suffer float drift.
    """

    def __init__(
        self,
        weights: Mapping[int, Fraction | int | str],
        order: Mapping[int, int] | None = None,
    ) -> None:
        self._w: dict[int, Fraction] = {
            int(e): Fraction(w) for e, w in weights.items()
        }
        self._order: dict[int, int] | None = (
            None if order is None else {int(e): int(i) for e, i in order.items()}
        )

    def __call__(self, element: int) -> Fraction:
        try:
            return self._w[element]
        except KeyError:
            raise DomainError(f"no weight assigned to element {element}") from None

    def __contains__(self, element: int) -> bool:
        return element in self._w

    def order_index(self, element: int) -> int:
        if self._order is None:
            return element
        try:
            return self._order[element]
        except KeyError:
            raise DomainError(f"no order index assigned to element {element}") from None

    def assign(
        self, element: int, weight: Fraction | int | str, index: int | None = None
    ) -> None:
        """Record a weight (and optionally an order index) for a new element."""
        e = int(element)
        if e in self._w:
            raise ParameterError(f"element {e} already has a weight")
        self._w[e] = Fraction(weight)
        if index is not None:
            if self._order is None:
                self._order = {}
            self._order[e] = int(index)

    def priority_key(self, element: int) -> tuple:
        return (-self(element), self.order_index(element), element)

    def sort(self, elements: Iterable[int]) -> list[int]:
        """Elements ordered by descending weight, earlier order index first."""
        return sorted(elements, key=self.priority_key)

    def total(self, elements: Iterable[int]) -> Fraction:
        return sum((self(e) for e in elements), Fraction(0))


@dataclass(frozen=True)
class MultiDimSet:
    """One set per member matroid; the branch state of the builder.

    ``free`` holds picked elements that no member matroid constrains.
    They cannot be charged to any part, but they still occupy budget:
    a feasible set may combine them with anything, so each one forces
    the recursion to keep looking for replacements among the rest.
    """

    parts: tuple[frozenset[int], ...]
    free: frozenset[int] = frozenset()

    @classmethod
    def empty(cls, size: int) -> "MultiDimSet":
        return cls((frozenset(),) * size)

    @property
    def norm(self) -> int:
        return sum(len(p) for p in self.parts) + len(self.free)

    def add(self, index: int, element: int) -> "MultiDimSet":
        parts = list(self.parts)
        parts[index] = parts[index] | {element}
        return MultiDimSet(tuple(parts), self.free)

    def add_free(self, element: int) -> "MultiDimSet":
        return MultiDimSet(self.parts, self.free | {element})


@dataclass
class RepSetContext:
    """Shared inputs of one representative-set construction."""

    matchoid: Matchoid
    weights: Weights
    k: int

    @property
    def budget(self) -> int:
        return (self.k - 1) * self.matchoid.ell


@dataclass
class RepSetStats:
    """Optional instrumentation filled in by ``rep_set``."""

    nodes: int = 0
    max_depth: int = 0
    max_children: int = 0
    queries: int = 0


def branch(
    state: MultiDimSet,
    pool: Iterable[int],
    ctx: RepSetContext,
    stats: RepSetStats | None = None,
) -> frozenset[int]:
    """One branching step on an explicit state; ``pool`` may be unordered."""
    return frozenset(_branch(state, ctx.weights.sort(pool), ctx, stats, 0))


def _branch(
    state: MultiDimSet,
    ordered_pool: Sequence[int],
    ctx: RepSetContext,
    stats: RepSetStats | None,
    depth: int,
) -> set[int]:
    if stats is not None:
        stats.nodes += 1
        stats.max_depth = max(stats.max_depth, depth)
    if not ordered_pool:
        return set()
    best = ordered_pool[0]
    picked = {best}
    if state.norm < ctx.budget:
        children = ctx.matchoid.indices_of(best)
        if stats is not None:
            stats.max_children = max(stats.max_children, max(1, len(children)))
        if not children:
            # No matroid constrains ``best``, so it spans nothing and only
            # itself leaves the pool -- but it may sit inside any feasible
            # set, so it must consume a budget slot like any other pick.
            picked |= _branch(
                state.add_free(best), ordered_pool[1:], ctx, stats, depth + 1
            )
        for i in children:
            matroid = ctx.matchoid.matroids[i]
            ground = matroid.ground
            extended = state.parts[i] | {best}
            # Keep an element only if the extended branch set does not span
            # it in this matroid; elements outside the ground set are never
            # spanned.  One query per surviving candidate inside the ground.
            survivors = [
                y
                for y in ordered_pool
                if y not in extended
                and (y not in ground or matroid.is_independent(extended | {y}))
            ]
            picked |= _branch(state.add(i, best), survivors, ctx, stats, depth + 1)
    return picked


def rep_set(
    pool: Iterable[int],
    matchoid: Matchoid,
    weights: Weights,
    k: int,
    stats: RepSetStats | None = None,
) -> frozenset[int]:
    """Joint k-representative subset of ``pool`` for the given matchoid.

    The pool is sorted by priority once up front; recursion preserves the
    order, so every argmax is just the head of the surviving list.
    """
    if k < 1:
        raise ParameterError("k must be a positive integer")
    t = frozenset(pool)
    if not t <= matchoid.universe:
        stray = sorted(t - matchoid.universe)
        raise DomainError(f"elements {stray} are outside the universe")
    ordered = weights.sort(t)
    ctx = RepSetContext(matchoid, weights, k)
    before = matchoid.queries
    out = _branch(MultiDimSet.empty(matchoid.size), ordered, ctx, stats, 0)
    if stats is not None:
        stats.queries = matchoid.queries - before
    return frozenset(out)


class KernelResult(NamedTuple):
    kernel: frozenset[int]
    solution: frozenset[int]
    value: Fraction


def best_feasible_subset(
    pool: Iterable[int],
    matchoid: Matchoid,
    weights: Weights,
    k: int,
) -> tuple[frozenset[int], Fraction]:
    """Max-weight feasible subset of ``pool`` with at most ``k`` elements.

    Depth-first search in ascending id order with hereditary pruning; the
    first maximizer encountered wins, so the witness is deterministic.
    """
    if k < 0:
        raise ParameterError("k must be nonnegative")
    order = sorted(frozenset(pool))
    best_set: frozenset[int] = frozenset()
    best_value = Fraction(0)

    def extend(current: tuple[int, ...], value: Fraction, start: int) -> None:
        nonlocal best_set, best_value
        if value > best_value:
            best_set, best_value = frozenset(current), value
        if len(current) == k:
            return
        for idx in range(start, len(order)):
            e = order[idx]
            candidate = current + (e,)
            if matchoid.is_feasible(candidate):
                extend(candidate, value + weights(e), idx + 1)

    extend((), Fraction(0), 0)
    return best_set, best_value


def kernel_max_weight(
    matchoid: Matchoid,
    weights: Weights,
    k: int,
    stats: RepSetStats | None = None,
) -> KernelResult:
    """Kernelize the whole universe, then search only the kernel.

    The returned value equals the optimum over the full universe because
    the kernel is k-representative.
    """
    kernel = rep_set(matchoid.universe, matchoid, weights, k, stats)
    solution, value = best_feasible_subset(kernel, matchoid, weights, k)
    return KernelResult(kernel, solution, value)

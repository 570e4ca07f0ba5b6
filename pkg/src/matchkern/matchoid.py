"""Matchoid constraints: a family of matroids with per-element incidence.

A set is feasible when its restriction to every member matroid's ground
set is independent there.  Feasibility is hereditary, which is what the
exhaustive searches elsewhere in the package rely on for pruning.
"""

from __future__ import annotations

from typing import Iterable, Sequence

from .errors import DomainError
from .matroids import Matroid


class Matchoid:
    """A collection of matroids over (subsets of) a common universe.

    ``overlap`` is the largest number of member matroids any single
    element belongs to; it is clamped to at least 1 so that size formulas
    stay well defined on degenerate inputs.  Elements of the universe that
    belong to no matroid are unconstrained.
    """

    def __init__(
        self,
        matroids: Sequence[Matroid],
        universe: Iterable[int] | None = None,
    ) -> None:
        self._matroids = tuple(matroids)
        covered: set[int] = set()
        for m in self._matroids:
            covered |= m.ground
        if universe is None:
            self._universe = frozenset(covered)
        else:
            self._universe = frozenset(int(e) for e in universe)
            if not covered <= self._universe:
                stray = sorted(covered - self._universe)
                raise DomainError(
                    f"matroid grounds mention elements {stray} outside the universe"
                )
        self._incidence: dict[int, tuple[int, ...]] = {
            e: tuple(
                i for i, m in enumerate(self._matroids) if e in m.ground
            )
            for e in self._universe
        }
        self._overlap = max(
            (len(ix) for ix in self._incidence.values()), default=0
        ) or 1

    @property
    def matroids(self) -> tuple[Matroid, ...]:
        return self._matroids

    @property
    def universe(self) -> frozenset[int]:
        return self._universe

    @property
    def ell(self) -> int:
        """Maximum number of member matroids covering any one element."""
        return self._overlap

    @property
    def size(self) -> int:
        return len(self._matroids)

    @property
    def queries(self) -> int:
        """Total independence queries across all member matroids."""
        return sum(m.queries for m in self._matroids)

    def indices_of(self, element: int) -> tuple[int, ...]:
        """Indices of the member matroids whose ground set contains ``element``."""
        try:
            return self._incidence[element]
        except KeyError:
            raise DomainError(f"element {element} is not in the universe") from None

    def is_feasible(self, subset: Iterable[int]) -> bool:
        """True iff every member matroid accepts its slice of ``subset``.

        Only matroids actually touched by the subset are queried.
        """
        s = frozenset(subset)
        if not s <= self._universe:
            stray = sorted(s - self._universe)
            raise DomainError(f"elements {stray} are outside the universe")
        touched = sorted({i for e in s for i in self._incidence[e]})
        return all(
            self._matroids[i].is_independent(s & self._matroids[i].ground)
            for i in touched
        )

    def rank_upper(self) -> int:
        """A cheap upper bound on the size of any feasible set.

        Every feasible set contributes at most ``rank(ground)`` elements to
        each matroid and unconstrained elements are free, so summing those
        terms and capping at the universe size bounds the true rank.  Used
        for CLI parameter defaults, never inside the algorithms.
        """
        constrained = sum(m.rank(m.ground) for m in self._matroids)
        free = sum(1 for e in self._universe if not self._incidence[e])
        return min(len(self._universe), constrained + free)

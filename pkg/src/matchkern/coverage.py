"""Explicit coverage instances and the counting value oracle.

The streaming coverage algorithm lives in a separate module and only ever
sees a ``ValueOracle``: a callable answering "how many points does this
element set cover".  The explicit point representation stays here, held in
a closure rather than an attribute, so algorithm code holding the oracle
has no attribute path back to the points.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping

from .errors import DomainError
from .matroids import QueryCounter


class CoverageInstance:
    """Elements covering subsets of a finite point universe.

    Point weights default to 1 each (the unweighted model); weighted
    points only matter to the color-coding pipeline and the brute-force
    coverage oracle.
    """

    def __init__(
        self,
        universe: Iterable[int],
        pointsets: Mapping[int, Iterable[int]],
        point_weights: Mapping[int, Fraction | int | str] | None = None,
    ) -> None:
        self._universe = frozenset(int(p) for p in universe)
        self._pointsets = {
            int(e): frozenset(int(p) for p in ps) for e, ps in pointsets.items()
        }
        for e, ps in self._pointsets.items():
            if not ps <= self._universe:
                stray = sorted(ps - self._universe)
                raise DomainError(
                    f"element {e} covers points {stray} outside the universe"
                )
        if point_weights is None:
            self._point_weights = {p: Fraction(1) for p in self._universe}
        else:
            self._point_weights = {
                int(p): Fraction(w) for p, w in point_weights.items()
            }
            missing = self._universe - self._point_weights.keys()
            if missing:
                raise DomainError(f"points {sorted(missing)} have no weight")

    @property
    def universe(self) -> frozenset[int]:
        return self._universe

    @property
    def pointsets(self) -> dict[int, frozenset[int]]:
        return dict(self._pointsets)

    @property
    def point_weights(self) -> dict[int, Fraction]:
        return dict(self._point_weights)

    @property
    def elements(self) -> frozenset[int]:
        return frozenset(self._pointsets)

    def covered(self, elements: Iterable[int]) -> frozenset[int]:
        out: set[int] = set()
        for e in elements:
            try:
                out |= self._pointsets[e]
            except KeyError:
                raise DomainError(f"unknown element {e}") from None
        return frozenset(out)


class ValueOracle:
    """Unweighted coverage value queries with a monotone tally.

    The point representation is captured in a closure at construction; the
    oracle object itself exposes nothing but ``__call__`` and the tally.
    """

    def __init__(self, instance: CoverageInstance) -> None:
        sets = {e: ps for e, ps in instance.pointsets.items()}

        def evaluate(elements: frozenset[int]) -> int:
            covered: set[int] = set()
            for e in elements:
                try:
                    covered |= sets[e]
                except KeyError:
                    raise DomainError(f"unknown element {e}") from None
            return len(covered)

        self._evaluate = evaluate
        self._queries = QueryCounter()

    @property
    def queries(self) -> int:
        return self._queries.value

    def __call__(self, elements: Iterable[int]) -> int:
        self._queries.bump()
        return self._evaluate(frozenset(elements))

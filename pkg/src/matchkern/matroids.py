"""Matroid independence oracles and the concrete families used here.

Every matroid is consumed exclusively through ``is_independent``; ``rank``
and ``span`` are derived from it, so the cost of any algorithm in this
package can be stated in oracle-query units.  Each matroid carries a
monotone query tally.  Construction-time validation (loop rejection, axiom
checks for explicit families) bypasses the tally: it is not part of any
algorithm's query budget.
"""

from __future__ import annotations

import threading
from collections import Counter
from typing import Iterable, Mapping, Sequence

from .errors import (
    ContractViolationError,
    DomainError,
    MatroidAxiomError,
    ParameterError,
)


class QueryCounter:
    """Monotone tally of oracle calls, safe under concurrent bumps."""

    __slots__ = ("_lock", "_count")

    def __init__(self) -> None:
        self._lock = threading.Lock()
        self._count = 0

    def bump(self) -> None:
        with self._lock:
            self._count += 1

    @property
    def value(self) -> int:
        return self._count


class Matroid:
    """Base independence oracle over a fixed ground set of integer ids.

    Subclasses set their own parameters first and then call
    ``super().__init__(ground)``.  The base constructor rejects loops: an
    element whose singleton is dependent could never appear in a feasible
    set, so such inputs are refused outright.
    """

    kind = "abstract"

    def __init__(self, ground: Iterable[int]) -> None:
        self._ground = frozenset(int(e) for e in ground)
        if any(e < 0 for e in self._ground):
            raise ParameterError("element ids must be nonnegative integers")
        self._queries = QueryCounter()
        for e in sorted(self._ground):
            if not self._independent(frozenset((e,))):
                raise MatroidAxiomError(
                    f"{self.kind} matroid has a loop: element {e}"
                )

    @property
    def ground(self) -> frozenset[int]:
        return self._ground

    @property
    def queries(self) -> int:
        """Number of independence-oracle calls made so far."""
        return self._queries.value

    def _independent(self, subset: frozenset[int]) -> bool:
        raise NotImplementedError

    def is_independent(self, subset: Iterable[int]) -> bool:
        s = frozenset(subset)
        if not s <= self._ground:
            stray = sorted(s - self._ground)
            raise DomainError(f"elements {stray} are outside the matroid ground set")
        self._queries.bump()
        return self._independent(s)

    def rank(self, subset: Iterable[int]) -> int:
        """Size of a largest independent subset, grown greedily.

        Greedy growth is exact on matroids; uses one oracle query per
        element of ``subset``.
        """
        s = frozenset(subset)
        if not s <= self._ground:
            stray = sorted(s - self._ground)
            raise DomainError(f"elements {stray} are outside the matroid ground set")
        basis: set[int] = set()
        for e in sorted(s):
            if self.is_independent(basis | {e}):
                basis.add(e)
        return len(basis)

    def span(self, independent: Iterable[int]) -> frozenset[int]:
        """Closure of an independent set: itself plus every element whose
        addition creates a dependency.  Uses at most ``|ground|`` queries.
        """
        t = frozenset(independent)
        if not t <= self._ground:
            stray = sorted(t - self._ground)
            raise DomainError(f"elements {stray} are outside the matroid ground set")
        if t and not self.is_independent(t):
            raise ContractViolationError("span requires an independent set")
        closed = set(t)
        for e in sorted(self._ground - t):
            if not self.is_independent(t | {e}):
                closed.add(e)
        return frozenset(closed)


class UniformMatroid(Matroid):
    """Independent iff the subset has at most ``rank`` elements."""

    kind = "uniform"

    def __init__(self, ground: Iterable[int], rank: int) -> None:
        if rank < 0:
            raise ParameterError("uniform matroid rank must be nonnegative")
        self._rank = int(rank)
        super().__init__(ground)

    @property
    def max_rank(self) -> int:
        return self._rank

    def _independent(self, subset: frozenset[int]) -> bool:
        return len(subset) <= self._rank


class PartitionMatroid(Matroid):
    """Disjoint blocks with a per-block capacity."""

    kind = "partition"

    def __init__(
        self,
        blocks: Sequence[Iterable[int]],
        capacities: Sequence[int],
    ) -> None:
        if len(blocks) != len(capacities):
            raise ParameterError("need exactly one capacity per block")
        self._blocks = tuple(frozenset(int(e) for e in b) for b in blocks)
        self._caps = tuple(int(c) for c in capacities)
        if any(c < 0 for c in self._caps):
            raise ParameterError("block capacities must be nonnegative")
        self._block_of: dict[int, int] = {}
        for idx, block in enumerate(self._blocks):
            if not block:
                raise ParameterError(f"block {idx} is empty")
            for e in block:
                if e in self._block_of:
                    raise ParameterError(f"element {e} appears in two blocks")
                self._block_of[e] = idx
        super().__init__(self._block_of.keys())

    @property
    def blocks(self) -> tuple[frozenset[int], ...]:
        return self._blocks

    @property
    def capacities(self) -> tuple[int, ...]:
        return self._caps

    def _independent(self, subset: frozenset[int]) -> bool:
        counts = Counter(self._block_of[e] for e in subset)
        return all(n <= self._caps[b] for b, n in counts.items())


class GraphicMatroid(Matroid):
    """Edge sets of a multigraph; independent iff the edges form a forest.

    ``edges`` maps each element id to its endpoint pair.  Every query runs
    a fresh union-find pass, so the oracle has no hidden mutable state.
    """

    kind = "graphic"

    def __init__(self, edges: Mapping[int, tuple[int, int]]) -> None:
        self._edges = {int(e): (int(u), int(v)) for e, (u, v) in edges.items()}
        super().__init__(self._edges.keys())

    @property
    def edges(self) -> dict[int, tuple[int, int]]:
        return dict(self._edges)

    def _independent(self, subset: frozenset[int]) -> bool:
        parent: dict[int, int] = {}

        def find(v: int) -> int:
            root = v
            while parent.get(root, root) != root:
                root = parent[root]
            while parent.get(v, v) != v:
                parent[v], v = root, parent[v]
            return root

        for e in sorted(subset):
            u, v = self._edges[e]
            ru, rv = find(u), find(v)
            if ru == rv:
                return False
            parent[ru] = rv
        return True


class ExplicitMatroid(Matroid):
    """A matroid given by the full list of its independent sets.

    The constructor validates the axioms: the empty set is present, the
    family is downward closed, and (for grounds of at most 12 elements)
    every independent pair of consecutive sizes satisfies augmentation.
    Checking only ``|B| = |A| + 1`` pairs is enough once heredity holds.
    """

    kind = "explicit"

    def __init__(
        self,
        ground: Iterable[int],
        independent_sets: Iterable[Iterable[int]],
    ) -> None:
        g = frozenset(int(e) for e in ground)
        self._sets = frozenset(frozenset(int(e) for e in s) for s in independent_sets)
        if frozenset() not in self._sets:
            raise MatroidAxiomError("independence family must contain the empty set")
        for s in self._sets:
            if not s <= g:
                raise MatroidAxiomError(
                    f"independent set {sorted(s)} leaves the ground set"
                )
            for e in s:
                if s - {e} not in self._sets:
                    raise MatroidAxiomError(
                        f"family is not downward closed at {sorted(s)} minus {e}"
                    )
        if len(g) <= 12:
            self._check_augmentation()
        super().__init__(g)

    def _check_augmentation(self) -> None:
        by_size: dict[int, list[frozenset[int]]] = {}
        for s in self._sets:
            by_size.setdefault(len(s), []).append(s)
        for size in sorted(by_size):
            for a in by_size.get(size, ()):
                for b in by_size.get(size + 1, ()):
                    if not any(a | {e} in self._sets for e in b - a):
                        raise MatroidAxiomError(
                            "augmentation fails between "
                            f"{sorted(a)} and {sorted(b)}"
                        )

    @property
    def independent_sets(self) -> frozenset[frozenset[int]]:
        return self._sets

    def _independent(self, subset: frozenset[int]) -> bool:
        return subset in self._sets

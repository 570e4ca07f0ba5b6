"""Streaming coverage kernel driven purely by value-oracle queries.

Goal: keep, from a stream of elements, a small kernel that still contains
a feasible set covering ``z`` points whenever one exists.  The only probe
available is an oracle mapping an element set to the number of points it
covers; two marginal-value identities recover everything needed:

* residual-overlap test (4 fresh queries): elements a and b share a
  covered point outside x's coverage iff f(a | x) != f(a | {b, x});
* same-slice test (6 fresh queries): a and b cover the same points inside
  x's coverage iff f(x | a) = f(x | b) = f(x | {a, b}).

Arrivals of value j < z are routed down a tree kept for value class j.
Each tree node groups elements that cover the same slice of their parent
element's coverage and are pairwise disjoint outside it; per node, ``z``
representative slots are maintained with the matchoid rep-set builder
under arrival-order weights, so earlier arrivals always win ties and slot
membership never shrinks.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

from .errors import ParameterError, StreamError
from .matchoid import Matchoid
from .repset import Weights, rep_bound, rep_set

# Placeholder parent of the tree roots: covers nothing, contributes no
# value, and is filtered out of query sets instead of reaching the oracle.
BOTTOM = None

Oracle = Callable[[Iterable[int]], int]


def _value(oracle: Oracle, elements: Iterable[int | None]) -> int:
    return oracle([e for e in elements if e is not BOTTOM])


def marginal(oracle: Oracle, element: int | None, base: Iterable[int | None]) -> int:
    """f(element | base) computed with two oracle queries."""
    if element is BOTTOM:
        return 0
    fixed = [e for e in base if e is not BOTTOM]
    return _value(oracle, fixed + [element]) - _value(oracle, fixed)


def same_points_within(oracle: Oracle, a: int | None, b: int | None, x: int | None) -> bool:
    """True iff a and b cover identical points inside x's coverage.

    Exactly six fresh oracle evaluations.
    """
    via_a = marginal(oracle, x, [a])
    via_b = marginal(oracle, x, [b])
    via_both = marginal(oracle, x, [a, b])
    return via_a == via_b == via_both


def disjoint_outside(oracle: Oracle, a: int | None, b: int | None, x: int | None) -> bool:
    """True iff a and b share no covered point outside x's coverage.

    Exactly four fresh oracle evaluations.
    """
    return marginal(oracle, a, [x]) == marginal(oracle, a, [b, x])


class TreeNode:
    """One node of a value-class tree: z representative slots plus children.

    ``members`` lists every element stored at the node in insertion order;
    children hang off the member whose coverage they refine.
    """

    __slots__ = ("uid", "depth", "parent_elem", "slots", "children", "member_order")

    def __init__(self, uid: int, depth: int, parent_elem: int | None, z: int) -> None:
        self.uid = uid
        self.depth = depth
        self.parent_elem = parent_elem
        self.slots: list[list[int]] = [[] for _ in range(z)]
        self.children: dict[int, list[TreeNode]] = {}
        self.member_order: list[int] = []

    def members(self) -> tuple[int, ...]:
        return tuple(self.member_order)

    def walk(self) -> Iterable["TreeNode"]:
        yield self
        for kids in self.children.values():
            for child in kids:
                yield from child.walk()


@dataclass
class ArrivalRecord:
    """Per-arrival accounting used by the bound checks."""

    element: int
    value: int
    status: str  # "early", "skipped", "stored", "rejected"
    node_uid: int | None = None
    slot: int | None = None
    value_queries: int = 0
    overlap_tests: int = 0
    match_tests: int = 0
    independence_queries: int = 0

    @property
    def value_query_budget(self) -> int:
        # One query classifies the arrival; each residual-overlap test is
        # worth 4 and each same-slice test 6.
        return 1 + 4 * self.overlap_tests + 6 * self.match_tests


@dataclass
class _Tally:
    overlap: int = 0
    match: int = 0


@dataclass
class CoverageState:
    oracle: Oracle
    matchoid: Matchoid
    z: int
    literal_match: bool = False
    roots: list[TreeNode] = field(default_factory=list)
    arrival_index: dict[int, int] = field(default_factory=dict)
    early: int | None = None
    log: list[ArrivalRecord] = field(default_factory=list)
    _next_uid: int = 0

    def new_node(self, depth: int, parent_elem: int | None) -> TreeNode:
        node = TreeNode(self._next_uid, depth, parent_elem, self.z)
        self._next_uid += 1
        return node

    def nodes(self) -> Iterable[TreeNode]:
        for root in self.roots:
            yield from root.walk()

    def kernel(self) -> frozenset[int]:
        if self.early is not None:
            return frozenset((self.early,))
        out: set[int] = set()
        for node in self.nodes():
            out.update(node.member_order)
        return frozenset(out)


def coverage_init(
    oracle: Oracle, matchoid: Matchoid, z: int, literal_match: bool = False
) -> CoverageState:
    if z < 1:
        raise ParameterError("z must be a positive integer")
    state = CoverageState(oracle, matchoid, z, literal_match)
    # One tree per possible arrival value 1..z-1; value-z arrivals exit early.
    state.roots = [state.new_node(0, BOTTOM) for _ in range(z - 1)]
    return state


def find_node(
    oracle: Oracle,
    element: int,
    node: TreeNode,
    state: CoverageState,
    tally: _Tally | None = None,
) -> TreeNode:
    """Descend from ``node`` to the tree position where ``element`` belongs.

    At each node, scan members for one sharing coverage with the element
    outside the parent slice; descend into the child whose members cover
    the same slice of that member, creating the child if none matches.  By
    the node invariants every stored member of a child agrees on its
    slice, so probing one member decides the match; ``literal_match``
    probes them all instead.
    """
    parent = node.parent_elem
    for r in node.members():
        if tally is not None:
            tally.overlap += 1
        if disjoint_outside(oracle, element, r, parent):
            continue
        for child in node.children.get(r, ()):
            probes: Sequence[int] = child.members()
            assert probes, "child nodes are filled on creation"
            if not state.literal_match:
                probes = probes[:1]
            matched = True
            for rp in probes:
                if tally is not None:
                    tally.match += 1
                if not same_points_within(oracle, rp, element, r):
                    matched = False
                    break
            if matched:
                return find_node(oracle, element, child, state, tally)
        fresh = state.new_node(node.depth + 1, r)
        node.children.setdefault(r, []).append(fresh)
        return fresh
    return node


def process_elem(element: int, node: TreeNode, state: CoverageState) -> int | None:
    """Offer ``element`` to each slot in turn; return the accepting slot index.

    Slot weights decrease with arrival time, so the rep-set builder always
    prefers older members and never evicts one (asserted below).  The
    element lands in the first slot whose rebuilt representative set keeps
    it, and is dropped entirely when every slot stands pat.
    """
    arrival = state.arrival_index
    for j, slot in enumerate(node.slots):
        candidate = frozenset(slot) | {element}
        weights = Weights(
            {e: -arrival[e] for e in candidate},
            order={e: arrival[e] for e in candidate},
        )
        rebuilt = rep_set(candidate, state.matchoid, weights, state.z)
        assert frozenset(slot) <= rebuilt, "slot membership must never shrink"
        if element in rebuilt:
            slot.append(element)
            node.member_order.append(element)
            return j
    return None


def coverage_push(state: CoverageState, element: int) -> ArrivalRecord:
    """Feed one arrival; classifies it, routes it, and logs the query cost."""
    e = int(element)
    if state.early is not None:
        raise StreamError("stream already terminated by an early exit")
    if e in state.arrival_index:
        raise StreamError(f"element {e} arrived twice")
    value_before = state.oracle.queries if hasattr(state.oracle, "queries") else 0
    ind_before = state.matchoid.queries
    state.arrival_index[e] = len(state.arrival_index)

    fe = _value(state.oracle, [e])
    tally = _Tally()
    if fe >= state.z:
        state.early = e
        record = ArrivalRecord(e, fe, "early")
    elif fe == 0:
        # Covers nothing; it can never help reach z points, drop it.
        record = ArrivalRecord(e, fe, "skipped")
    else:
        node = find_node(state.oracle, e, state.roots[fe - 1], state, tally)
        slot = process_elem(e, node, state)
        status = "stored" if slot is not None else "rejected"
        record = ArrivalRecord(e, fe, status, node_uid=node.uid, slot=slot)
    record.overlap_tests = tally.overlap
    record.match_tests = tally.match
    if hasattr(state.oracle, "queries"):
        record.value_queries = state.oracle.queries - value_before
    record.independence_queries = state.matchoid.queries - ind_before
    state.log.append(record)
    return record


@dataclass(frozen=True)
class CoverageResult:
    kernel: frozenset[int]
    early: int | None
    state: CoverageState
    value_queries: int
    independence_queries: int


def streaming_coverage(
    oracle: Oracle,
    arrivals: Iterable[int],
    matchoid: Matchoid,
    z: int,
    literal_match: bool = False,
) -> CoverageResult:
    """Run the whole stream (stopping on an early exit) and report totals."""
    state = coverage_init(oracle, matchoid, z, literal_match)
    for e in arrivals:
        record = coverage_push(state, e)
        if record.status == "early":
            break
    return CoverageResult(
        kernel=state.kernel(),
        early=state.early,
        state=state,
        value_queries=sum(r.value_queries for r in state.log),
        independence_queries=sum(r.independence_queries for r in state.log),
    )


def extract_coverage_solution(
    oracle: Oracle,
    kernel: Iterable[int],
    matchoid: Matchoid,
    z: int,
) -> frozenset[int] | None:
    """Feasible subset of the kernel covering at least ``z`` points, if any.

    Exhaustive over subsets of size at most z in deterministic order; any
    set covering z points keeps one element per covered point, so larger
    subsets never need to be searched.
    """
    from itertools import combinations

    if z < 1:
        raise ParameterError("z must be a positive integer")
    pool = sorted(frozenset(kernel))
    for size in range(1, min(z, len(pool)) + 1):
        for combo in combinations(pool, size):
            if matchoid.is_feasible(combo) and _value(oracle, combo) >= z:
                return frozenset(combo)
    return None


def coverage_store_bound(ell: int, z: int) -> int:
    """Worst-case number of stored elements across all trees.

    Trees exist for value classes 1..z-1; node fanout is bounded by
    ``2**(z-1)`` children per stored element, each node stores at most
    ``rep_bound(ell, z) * z`` elements, and depth is bounded by z-1.
    """
    if ell < 1:
        raise ParameterError("ell must be at least 1")
    if z < 1:
        raise ParameterError("z must be a positive integer")
    if z == 1:
        return 0
    per_node = rep_bound(ell, z) * z
    branching = (2 ** (z - 1)) * per_node
    nodes = sum(branching ** d for d in range(z))
    return (z - 1) * nodes * per_node


@dataclass(frozen=True)
class StructureReport:
    """Recomputed structural bounds for a finished run."""

    stored: int
    store_bound: int
    max_depth: int
    max_slot: int
    max_node_members: int
    max_children_per_member: int
    ok: bool


def structure_report(state: CoverageState) -> StructureReport:
    bound = coverage_store_bound(state.matchoid.ell, state.z)
    slot_bound = rep_bound(state.matchoid.ell, state.z)
    stored = 0
    max_depth = 0
    max_slot = 0
    max_members = 0
    max_children = 0
    for node in state.nodes():
        stored += len(node.member_order)
        max_depth = max(max_depth, node.depth)
        max_members = max(max_members, len(node.member_order))
        for slot in node.slots:
            max_slot = max(max_slot, len(slot))
        for kids in node.children.values():
            max_children = max(max_children, len(kids))
    ok = (
        stored <= bound
        and max_depth <= state.z - 1
        and max_slot <= slot_bound
        and max_members <= slot_bound * state.z
        and max_children <= 2 ** (state.z - 1)
    )
    return StructureReport(
        stored, bound, max_depth, max_slot, max_members, max_children, ok
    )

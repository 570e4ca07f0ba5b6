"""Shared test utilities: independent re-implementations used as oracles.

Everything here computes definitions directly (subset enumeration, naive
graph reasoning) without touching the package's fast paths, so the tests
compare two genuinely different routes to the same answer.
"""

from __future__ import annotations

import random
from fractions import Fraction
from itertools import chain, combinations

from matchkern import Matchoid, UniformMatroid, Weights
from matchkern.instances import build_matchoid, build_weights, gen_random_matchoid


def powerset(items, max_size=None):
    items = sorted(items)
    top = len(items) if max_size is None else min(max_size, len(items))
    return chain.from_iterable(combinations(items, r) for r in range(top + 1))


def exhaustive_rank(matroid, subset):
    """max |I| over independent I inside subset, by trying every subset."""
    best = 0
    for cand in powerset(subset):
        if len(cand) > best and matroid.is_independent(cand):
            best = len(cand)
    return best


def exhaustive_span(matroid, independent):
    t = frozenset(independent)
    base = exhaustive_rank(matroid, t)
    closed = set(t)
    for e in matroid.ground - t:
        if exhaustive_rank(matroid, t | {e}) == base:
            closed.add(e)
    return frozenset(closed)


def edges_form_forest(pairs):
    """Cycle check with plain adjacency bookkeeping, no union-find."""
    parent = {}

    def root(v):
        while parent.get(v, v) != v:
            v = parent[v]
        return v

    for u, v in pairs:
        ru, rv = root(u), root(v)
        if ru == rv:
            return False
        parent[ru] = rv
    return True


def all_feasible_sets(matchoid, k=None):
    out = []
    for cand in powerset(matchoid.universe, k):
        if matchoid.is_feasible(cand):
            out.append(frozenset(cand))
    return out


def p3_matchoid():
    """Two rank-1 constraints chained over three elements (a path shape).

    Element 1 sits in both grounds; weights 3 > 2 > 1.
    """
    ma = UniformMatroid({0, 1}, 1)
    mb = UniformMatroid({1, 2}, 1)
    mc = Matchoid([ma, mb])
    w = Weights({0: Fraction(3), 1: Fraction(2), 2: Fraction(1)})
    return mc, w


def random_instance(rng, n_max=10, s_max=3, ell_max=2, kinds=("uniform", "partition", "graphic")):
    """A small random matchoid plus its weight table, via the generator."""
    n = rng.randint(2, n_max)
    ell = rng.randint(1, ell_max)
    s = rng.randint(1, min(s_max, n * ell))
    inst = gen_random_matchoid(n, s, ell, kinds, seed=rng.getrandbits(32))
    return build_matchoid(inst), build_weights(inst), inst


# ---------------------------------------------------------------------------
# Coverage-tree invariant harness.  The tests know the pointsets; the
# algorithm under test does not, so recomputing every structural promise
# from the points is an independent route.

def assert_tree_invariants(state, pointsets):
    cov = lambda e: frozenset() if e is None else pointsets[e]
    for tree_index, root in enumerate(state.roots):
        value_class = tree_index + 1
        for node in root.walk():
            outside = cov(node.parent_elem)
            members = node.members()
            # every stored element belongs to its value class
            for e in members:
                assert len(pointsets[e]) == value_class, (e, value_class)
            # members are pairwise disjoint outside the parent slice
            for i, a in enumerate(members):
                for b in members[i + 1:]:
                    assert not (cov(a) & cov(b)) - outside, (a, b, node.uid)
            # slots partition the member list and preserve arrival order
            flat = [e for slot in node.slots for e in slot]
            assert sorted(flat) == sorted(members)
            for slot in node.slots:
                idx = [state.arrival_index[e] for e in slot]
                assert idx == sorted(idx)
            # children hang off a stored member; their members agree on the
            # slice of that member and genuinely overlap it
            for anchor, kids in node.children.items():
                assert anchor in members
                for child in kids:
                    assert child.parent_elem == anchor
                    assert child.depth == node.depth + 1
                    kid_members = child.members()
                    assert kid_members
                    slices = {cov(e) & cov(anchor) for e in kid_members}
                    assert len(slices) == 1, (child.uid, slices)
                    for e in kid_members:
                        assert (cov(e) & cov(anchor)) - outside, (e, anchor)
                # distinct children of one anchor hold distinct slices
                kid_slices = [
                    cov(child.members()[0]) & cov(anchor) for child in kids
                ]
                assert len(set(kid_slices)) == len(kid_slices)


class SlotShadow:
    """Tracks slot contents across arrivals and checks they never shrink."""

    def __init__(self):
        self.seen = {}

    def check(self, state):
        for node in state.nodes():
            for j, slot in enumerate(node.slots):
                key = (node.uid, j)
                old = self.seen.get(key, [])
                assert slot[: len(old)] == old, f"slot {key} rewrote history"
                self.seen[key] = list(slot)


def make_rng(seed):
    return random.Random(seed)

import pytest
from fractions import Fraction

from matchkern import (
    ContractViolationError,
    DomainError,
    ExplicitMatroid,
    GraphicMatroid,
    MatroidAxiomError,
    ParameterError,
    PartitionMatroid,
    UniformMatroid,
)

from helpers import edges_form_forest, exhaustive_rank, exhaustive_span, make_rng, powerset


def test_uniform_independence():
    m = UniformMatroid({1, 2, 3, 4}, 2)
    assert m.is_independent(set())
    assert m.is_independent({1})
    assert m.is_independent({1, 4})
    assert not m.is_independent({1, 2, 3})


def test_uniform_rank_zero_is_all_loops():
    with pytest.raises(MatroidAxiomError):
        UniformMatroid({1, 2}, 0)


def test_uniform_rank_zero_empty_ground_ok():
    m = UniformMatroid(set(), 0)
    assert m.is_independent(set())


def test_negative_rank_rejected():
    with pytest.raises(ParameterError):
        UniformMatroid({1}, -1)


def test_negative_ids_rejected():
    with pytest.raises(ParameterError):
        UniformMatroid({-3, 1}, 1)


def test_out_of_ground_query():
    m = UniformMatroid({1, 2}, 1)
    with pytest.raises(DomainError):
        m.is_independent({3})
    with pytest.raises(DomainError):
        m.rank({1, 9})
    with pytest.raises(DomainError):
        m.span({7})


def test_partition_capacities():
    m = PartitionMatroid([[1, 2, 3], [4, 5]], [2, 1])
    assert m.is_independent({1, 2, 4})
    assert not m.is_independent({1, 2, 3})
    assert not m.is_independent({4, 5})
    assert m.rank(m.ground) == 3


def test_partition_validation():
    with pytest.raises(ParameterError):
        PartitionMatroid([[1, 2], [2, 3]], [1, 1])  # overlapping blocks
    with pytest.raises(ParameterError):
        PartitionMatroid([[1], []], [1, 1])  # empty block
    with pytest.raises(ParameterError):
        PartitionMatroid([[1]], [1, 2])  # capacity count mismatch
    with pytest.raises(MatroidAxiomError):
        PartitionMatroid([[1, 2]], [0])  # capacity 0 makes loops


def test_graphic_triangle():
    m = GraphicMatroid({0: (0, 1), 1: (1, 2), 2: (0, 2)})
    assert m.is_independent({0, 1})
    assert not m.is_independent({0, 1, 2})
    assert m.rank(m.ground) == 2


def test_graphic_parallel_edges():
    m = GraphicMatroid({0: (0, 1), 1: (0, 1)})
    assert m.is_independent({0})
    assert m.is_independent({1})
    assert not m.is_independent({0, 1})


def test_graphic_self_loop_rejected():
    with pytest.raises(MatroidAxiomError):
        GraphicMatroid({0: (2, 2)})


def test_graphic_queries_are_stateless():
    # the union-find is rebuilt per query, so interleaving queries cannot
    # contaminate each other
    m = GraphicMatroid({0: (0, 1), 1: (1, 2), 2: (0, 2), 3: (2, 3)})
    assert not m.is_independent({0, 1, 2})
    assert m.is_independent({0, 1, 3})
    assert not m.is_independent({0, 1, 2})


def test_explicit_roundtrip():
    sets = [(), (1,), (2,), (1, 2), (3,), (1, 3), (2, 3)]
    m = ExplicitMatroid({1, 2, 3}, sets)
    assert m.is_independent({1, 3})
    assert not m.is_independent({1, 2, 3})
    assert m.independent_sets == {frozenset(s) for s in sets}


def test_explicit_missing_empty_set():
    with pytest.raises(MatroidAxiomError):
        ExplicitMatroid({1}, [(1,)])


def test_explicit_not_downward_closed():
    with pytest.raises(MatroidAxiomError):
        ExplicitMatroid({1, 2}, [(), (1, 2)])


def test_explicit_augmentation_failure():
    # {3} cannot be augmented from {1,2}: neither {1,3} nor {2,3} present
    with pytest.raises(MatroidAxiomError):
        ExplicitMatroid({1, 2, 3}, [(), (1,), (2,), (3,), (1, 2)])


def test_explicit_loop_rejected():
    with pytest.raises(MatroidAxiomError):
        ExplicitMatroid({1, 2}, [(), (1,)])  # 2 is a loop


def test_span_requires_independent_input():
    m = UniformMatroid({1, 2, 3}, 1)
    with pytest.raises(ContractViolationError):
        m.span({1, 2})


def test_span_uniform_full_rank_closes_everything():
    m = UniformMatroid({1, 2, 3, 4}, 2)
    assert m.span({1, 2}) == {1, 2, 3, 4}
    assert m.span({1}) == {1}
    assert m.span(set()) == set()


def test_query_counter_monotone_and_rank_cost():
    m = UniformMatroid({1, 2, 3, 4, 5}, 3)
    before = m.queries
    m.rank({1, 2, 3, 4})
    assert m.queries - before == 4  # one query per element, greedy
    before = m.queries
    m.span({1, 2})
    # validation query plus one per element outside the input
    assert m.queries - before == 1 + 3
    before = m.queries
    m.span(set())
    assert m.queries - before == 5


def test_construction_does_not_count_queries():
    m = UniformMatroid({1, 2, 3}, 2)
    assert m.queries == 0


# --- randomized cross-checks against the exhaustive definitions ----------

def _random_matroid(rng):
    style = rng.choice(("uniform", "partition", "graphic"))
    n = rng.randint(1, 6)
    ids = list(range(n))
    if style == "uniform":
        return UniformMatroid(ids, rng.randint(1, n))
    if style == "partition":
        rng.shuffle(ids)
        blocks, caps, i = [], [], 0
        while i < n:
            j = min(n, i + rng.randint(1, 3))
            blocks.append(ids[i:j])
            caps.append(rng.randint(1, j - i))
            i = j
        return PartitionMatroid(blocks, caps)
    pool = n + 2
    edges = {}
    for e in ids:
        u = rng.randrange(pool)
        v = rng.randrange(pool)
        while v == u:
            v = rng.randrange(pool)
        edges[e] = (u, v)
    return GraphicMatroid(edges)


def test_random_matroids_match_exhaustive_rank_and_span():
    rng = make_rng(4821)
    for _ in range(60):
        m = _random_matroid(rng)
        sub = frozenset(e for e in m.ground if rng.random() < 0.6)
        assert m.rank(sub) == exhaustive_rank(m, sub)
        basis = set()
        for e in sorted(sub):
            if m.is_independent(basis | {e}):
                basis.add(e)
        assert m.span(basis) == exhaustive_span(m, basis)


def test_graphic_independence_matches_forest_check():
    rng = make_rng(77)
    for _ in range(80):
        m = _random_matroid(rng)
        if m.kind != "graphic":
            continue
        for sub in powerset(m.ground):
            expected = edges_form_forest([m.edges[e] for e in sub])
            assert m.is_independent(sub) == expected


def test_explicit_from_materialized_uniform():
    base = UniformMatroid({0, 1, 2, 3}, 2)
    sets = [s for s in powerset(base.ground) if base.is_independent(s)]
    ex = ExplicitMatroid(base.ground, sets)
    for sub in powerset(base.ground):
        assert ex.is_independent(sub) == base.is_independent(sub)

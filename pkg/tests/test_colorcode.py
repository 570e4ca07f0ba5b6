"""Color-coded coverage: field arithmetic, exact independence by full
enumeration, pruning, the per-mask streams, and the planted guarantee."""

from fractions import Fraction
from itertools import combinations, product

import pytest

from matchkern import (
    DomainError,
    FamilyError,
    ParameterError,
    num_colors,
)
from matchkern.bruteforce import brute_max_coverage, check_well_colored
from matchkern.colorcode import (
    HashFunction,
    color_element,
    color_weight,
    color_weight_of_set,
    draw_hash,
    extract_weighted_solution,
    find_injective_hash,
    iter_colors,
    nonempty_submasks,
    perfect_family,
    randomized_kernel,
    randomized_repetitions,
    reduction_poly,
    streaming_max_coverage,
)
from matchkern.instances import build_coverage, build_matchoid, gen_coverage
from matchkern.repset import rep_bound

from helpers import make_rng


def test_num_colors():
    assert num_colors(1) == 1
    assert num_colors(2) == 2
    assert num_colors(3) == 4
    assert num_colors(4) == 4
    assert num_colors(5) == 8
    with pytest.raises(ParameterError):
        num_colors(0)


# --- GF(2^bits) ------------------------------------------------------------

def _gf2_rem(a, b):
    # plain long division in GF(2)[x], written from the definition
    db = b.bit_length() - 1
    while a.bit_length() - 1 >= db and a:
        a ^= b << (a.bit_length() - 1 - db)
    return a


def _brute_irreducible(poly, degree):
    for d in range(1, degree // 2 + 1):
        for cand in range(1 << d, 1 << (d + 1)):
            if _gf2_rem(poly, cand) == 0:
                return False
    return True


def test_reduction_polys_are_smallest_irreducible():
    for bits in range(1, 11):
        poly = reduction_poly(bits)
        assert poly.bit_length() == bits + 1
        assert _brute_irreducible(poly, bits), bin(poly)
        for smaller in range((1 << bits) + 1, poly, 2):
            assert not _brute_irreducible(smaller, bits), bin(smaller)


def test_reduction_poly_known_small_values():
    assert reduction_poly(1) == 0b11
    assert reduction_poly(2) == 0b111
    assert reduction_poly(3) == 0b1011


# --- hash functions ---------------------------------------------------------

def test_draw_hash_reproducible_and_in_range():
    h1 = draw_hash(42, 3, 20)
    h2 = draw_hash(42, 3, 20)
    assert h1 == h2
    assert h1.color_bits == 2
    for p in range(20):
        assert h1.value(p) < (1 << h1.bits)
        assert 0 <= h1.color(p) < 4
    assert draw_hash(43, 3, 20) != h1


def test_hash_domain_checked():
    h = draw_hash(0, 2, 4)
    with pytest.raises(DomainError):
        h.value(4)


def _all_hashes(z, bits, domain):
    mod = reduction_poly(bits)
    color_bits = (num_colors(z) - 1).bit_length()
    for coeffs in product(range(1 << bits), repeat=z):
        yield HashFunction(
            seed=0, z=z, domain=domain, bits=bits,
            color_bits=color_bits, coeffs=coeffs, modulus=mod,
        )


def test_pairwise_independence_exact_by_enumeration():
    # two fixed distinct points, every degree-1 polynomial over GF(2):
    # each color pair must appear exactly once
    counts = {}
    for h in _all_hashes(2, 1, 2):
        key = (h.color(0), h.color(1))
        counts[key] = counts.get(key, 0) + 1
    assert counts == {(a, b): 1 for a in (0, 1) for b in (0, 1)}


def test_threewise_independence_exact_by_enumeration():
    # all 64 degree-2 polynomials over GF(4), three fixed points: every
    # color triple shows up exactly once, so the injective fraction is
    # exactly 24/64
    counts = {}
    injective = 0
    for h in _all_hashes(3, 2, 4):
        key = (h.color(0), h.color(1), h.color(2))
        counts[key] = counts.get(key, 0) + 1
        if len(set(key)) == 3:
            injective += 1
    assert all(v == 1 for v in counts.values())
    assert len(counts) == 64
    assert Fraction(injective, 64) == Fraction(3, 8)


def test_mask_helpers():
    assert list(iter_colors(0b1011)) == [0, 1, 3]
    subs = list(nonempty_submasks(0b101))
    assert subs == [0b101, 0b100, 0b001]
    assert set(nonempty_submasks(0b111)) == set(range(1, 8))


# --- colored elements -------------------------------------------------------

class _StubHash:
    """Deterministic coloring for tests that need exact control."""

    def __init__(self, mapping):
        self.mapping = mapping

    def color(self, p):
        return self.mapping[p]


def test_color_element_keeps_best_point_per_color():
    h = _StubHash({0: 0, 1: 0, 2: 1, 3: 1})
    weights = {0: Fraction(2), 1: Fraction(7), 2: Fraction(4), 3: Fraction(4)}
    wps = color_element(9, [0, 1, 2, 3], weights, h)
    assert wps.element == 9
    assert wps.mask == 0b11
    # color 0 keeps the heavier point, color 1 breaks the tie by id
    assert wps.points == ((1, Fraction(7), 0), (2, Fraction(4), 1))


def test_color_weight_and_missing_colors():
    h = _StubHash({0: 0, 1: 2})
    wps = color_element(5, [0, 1], {0: Fraction(3), 1: Fraction(5)}, h)
    assert color_weight(wps, 0b001) == 3
    assert color_weight(wps, 0b101) == 8
    with pytest.raises(DomainError):
        color_weight(wps, 0b010)


def test_color_weight_of_set_takes_group_best():
    h = _StubHash({0: 0, 1: 0, 2: 1})
    w = {0: Fraction(2), 1: Fraction(9), 2: Fraction(4)}
    a = color_element(1, [0], w, h)
    b = color_element(2, [1, 2], w, h)
    assert color_weight_of_set([a, b], 0b01) == 9
    assert color_weight_of_set([a, b], 0b11) == 13
    with pytest.raises(DomainError):
        color_weight_of_set([a], 0b10)


def test_merge_inequality_random():
    # combining a group with one more element under the union of two
    # disjoint color sets never loses value
    rng = make_rng(99)
    for _ in range(200):
        colors = {p: rng.randrange(4) for p in range(8)}
        h = _StubHash(colors)
        w = {p: Fraction(rng.randint(1, 12), rng.choice((1, 2))) for p in range(8)}
        elems = []
        for e in range(4):
            pts = rng.sample(range(8), rng.randint(1, 4))
            elems.append(color_element(e, pts, w, h))
        group = elems[:-1]
        extra = elems[-1]
        gmask = 0
        for wps in group:
            gmask |= wps.mask
        for c1 in nonempty_submasks(gmask):
            for c2 in nonempty_submasks(extra.mask & ~c1):
                lhs = color_weight_of_set(group, c1) + color_weight(extra, c2)
                rhs = color_weight_of_set(group + [extra], c1 | c2)
                assert lhs <= rhs


# --- streaming runs ----------------------------------------------------------

def _weighted_instance(seed, n=6, m=7):
    inst = gen_coverage(n, m, max_set=3, weighted=True, seed=seed, s=2, ell=1)
    return inst, build_coverage(inst), build_matchoid(inst)


def test_per_mask_kernels_respect_rep_bound():
    inst, cov, mc = _weighted_instance(11)
    z = 2
    run = streaming_max_coverage(cov, mc, inst.stream_order, z, draw_hash(5, z, 7))
    bound = rep_bound(mc.ell, z)
    assert run.per_mask  # something was retained
    for mask, kernel in run.per_mask.items():
        assert 1 <= mask < (1 << num_colors(z))
        assert len(kernel) <= bound
        assert kernel <= frozenset(inst.element_ids)
    assert run.max_retained_points <= num_colors(z)


def test_repetition_counts():
    assert randomized_repetitions(2, 0.1) == 18
    assert randomized_repetitions(1, 0.5) == 2
    with pytest.raises(ParameterError):
        randomized_repetitions(2, 0.0)
    with pytest.raises(ParameterError):
        randomized_repetitions(0, 0.1)


def test_driver_parallel_matches_serial():
    inst, cov, mc = _weighted_instance(12)
    serial = randomized_kernel(cov, mc, inst.stream_order, 2, 0.5, seed=3)
    parallel = randomized_kernel(
        cov, build_matchoid(inst), inst.stream_order, 2, 0.5, seed=3, parallel=3
    )
    assert serial.repetitions == parallel.repetitions == 6
    assert serial.kernel == parallel.kernel
    assert [r.per_mask for r in serial.runs] == [r.per_mask for r in parallel.runs]


def test_find_injective_hash():
    h = find_injective_hash([2, 9, 13], 3, 16)
    assert check_well_colored(h, [2, 9, 13])
    with pytest.raises(ParameterError):
        find_injective_hash([1, 2, 3], 2, 16)  # 3 points, 2 colors


def test_perfect_family_separates_every_subset():
    points = list(range(7))
    family = perfect_family(2, points)
    assert family
    for pair in combinations(points, 2):
        assert any(check_well_colored(h, pair) for h in family)
    with pytest.raises(ParameterError):
        perfect_family(5, points)
    with pytest.raises(ParameterError):
        perfect_family(2, range(31))


def test_extraction_matches_brute_on_kernel_of_everything():
    rng = make_rng(13)
    for _ in range(15):
        inst, cov, mc = _weighted_instance(rng.getrandbits(30))
        z = 2
        brute = brute_max_coverage(mc, cov.pointsets, cov.point_weights, z)
        full, value = extract_weighted_solution(inst.element_ids, mc, z, cov)
        assert value == brute.value
        assert mc.is_feasible(full)


def test_planted_hash_recovers_the_optimum():
    rng = make_rng(14)
    for _ in range(10):
        inst, cov, mc = _weighted_instance(rng.getrandbits(30))
        z = 2
        brute = brute_max_coverage(mc, cov.pointsets, cov.point_weights, z)
        covered = cov.covered(brute.witness)
        target = sorted(covered, key=lambda p: (-cov.point_weights[p], p))[:z]
        h = find_injective_hash(target, z, max(cov.universe) + 1)
        run = streaming_max_coverage(cov, mc, inst.stream_order, z, h)
        _, value = extract_weighted_solution(run.kernel, mc, z, cov)
        assert value == brute.value


def test_driver_recovers_optimum_with_exact_arithmetic():
    inst, cov, mc = _weighted_instance(77)
    z = 2
    driver = randomized_kernel(cov, mc, inst.stream_order, z, 0.1, seed=1)
    assert driver.repetitions == 18
    solution, value = extract_weighted_solution(driver.kernel, mc, z, cov)
    brute = brute_max_coverage(mc, cov.pointsets, cov.point_weights, z)
    assert value == brute.value
    assert isinstance(value, Fraction)
    assert solution <= driver.kernel

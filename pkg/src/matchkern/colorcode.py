"""Color-coded streaming kernels for weighted coverage maximization.

Points are hashed to a palette of ``num_colors(z)`` colors (the smallest
power of two at least z) by a random polynomial of degree z-1 over a
binary field, evaluated at the point id; the color is the top bits of the
field value, so any z distinct points receive independent uniform colors.

For every nonempty color subset, a streaming rep-set instance is kept
where an element's weight is the summed weight of its best point per
color in the subset.  When the heaviest z points of some optimal solution
happen to land on pairwise distinct colors, the union of the per-subset
kernels contains a feasible set matching the optimum; repeating with
fresh seeds makes that event overwhelmingly likely.
"""

from __future__ import annotations

import math
import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import Iterable, Mapping, Sequence

from .coverage import CoverageInstance
from .errors import DomainError, FamilyError, ParameterError
from .matchoid import Matchoid
from .repset import rep_bound
from .stream import StreamState, stream_init, stream_push


def num_colors(z: int) -> int:
    """Palette size for a top-z target: smallest power of two >= z."""
    if z < 1:
        raise ParameterError("z must be a positive integer")
    return 1 << (z - 1).bit_length()


# ---------------------------------------------------------------------------
# GF(2^bits) arithmetic.  The reduction polynomial per width is the smallest
# irreducible one by integer value, found once with a Rabin test; this keeps
# the field fixed and reproducible without a hand-maintained table.

def _poly_mod(a: int, mod: int) -> int:
    deg = mod.bit_length() - 1
    while a.bit_length() - 1 >= deg:
        a ^= mod << (a.bit_length() - 1 - deg)
    return a


def _poly_mul_mod(a: int, b: int, mod: int) -> int:
    out = 0
    while b:
        if b & 1:
            out ^= a
        b >>= 1
        a <<= 1
        a = _poly_mod(a, mod)
    return _poly_mod(out, mod)


def _poly_gcd(a: int, b: int) -> int:
    while b:
        a, b = b, _poly_mod(a, b)
    return a


def _x_pow_pow2_mod(times: int, mod: int) -> int:
    """x**(2**times) mod ``mod`` by repeated squaring."""
    acc = _poly_mod(0b10, mod)
    for _ in range(times):
        acc = _poly_mul_mod(acc, acc, mod)
    return acc


def _prime_factors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def _is_irreducible(poly: int, degree: int) -> bool:
    if _x_pow_pow2_mod(degree, poly) != _poly_mod(0b10, poly):
        return False
    for q in _prime_factors(degree):
        probe = _x_pow_pow2_mod(degree // q, poly) ^ 0b10
        if _poly_gcd(poly, _poly_mod(probe, poly)) != 1:
            return False
    return True


@lru_cache(maxsize=None)
def reduction_poly(bits: int) -> int:
    if bits < 1:
        raise ParameterError("field width must be at least 1 bit")
    for candidate in range((1 << bits) + 1, 1 << (bits + 1), 2):
        if _is_irreducible(candidate, bits):
            return candidate
    raise ParameterError(f"no irreducible polynomial of degree {bits} found")


@dataclass(frozen=True)
class HashFunction:
    """Degree-(z-1) polynomial hash over GF(2^bits) with top-bit colors."""

    seed: int
    z: int
    domain: int  # point ids live in [0, domain)
    bits: int
    color_bits: int
    coeffs: tuple[int, ...]
    modulus: int

    def value(self, point: int) -> int:
        p = int(point)
        if not 0 <= p < self.domain:
            raise DomainError(f"point {p} is outside [0, {self.domain})")
        acc = 0
        for c in reversed(self.coeffs):
            acc = _poly_mul_mod(acc, p, self.modulus) ^ c
        return acc

    def color(self, point: int) -> int:
        return self.value(point) >> (self.bits - self.color_bits)

    def colors(self, points: Iterable[int]) -> frozenset[int]:
        return frozenset(self.color(p) for p in points)

    def color_mask(self, points: Iterable[int]) -> int:
        mask = 0
        for p in points:
            mask |= 1 << self.color(p)
        return mask


def draw_hash(seed: int, z: int, m: int) -> HashFunction:
    """Seeded hash for point ids in [0, m) targeting z colors.

    The field is wide enough to embed both the domain and the palette, so
    distinct points map to distinct field elements and the extracted color
    bits are uniform.
    """
    if z < 1:
        raise ParameterError("z must be a positive integer")
    if m < 1:
        raise ParameterError("the point domain must be nonempty")
    palette = num_colors(z)
    bits = max(1, (m - 1).bit_length(), (palette - 1).bit_length())
    color_bits = (palette - 1).bit_length()
    rng = random.Random(seed)
    coeffs = tuple(rng.getrandbits(bits) for _ in range(z))
    return HashFunction(
        seed=int(seed),
        z=z,
        domain=m,
        bits=bits,
        color_bits=color_bits,
        coeffs=coeffs,
        modulus=reduction_poly(bits),
    )


def iter_colors(mask: int) -> Iterable[int]:
    c = 0
    while mask:
        if mask & 1:
            yield c
        mask >>= 1
        c += 1


def nonempty_submasks(mask: int) -> Iterable[int]:
    """All nonempty submasks, largest first."""
    sub = mask
    while sub:
        yield sub
        sub = (sub - 1) & mask


# ---------------------------------------------------------------------------
# Colored elements and palette-restricted values.

@dataclass(frozen=True)
class WeightedPointSet:
    """An element's points after pruning to the heaviest point per color."""

    element: int
    points: tuple[tuple[int, Fraction, int], ...]  # (point, weight, color)
    mask: int


def color_element(
    element: int,
    points: Iterable[int],
    point_weights: Mapping[int, Fraction],
    hash_fn: HashFunction,
) -> WeightedPointSet:
    best: dict[int, tuple[int, Fraction]] = {}
    for p in sorted(points):
        c = hash_fn.color(p)
        w = Fraction(point_weights[p])
        if c not in best or (w, -p) > (best[c][1], -best[c][0]):
            best[c] = (p, w)
    kept = tuple((p, w, c) for c, (p, w) in sorted(best.items()))
    mask = 0
    for c in best:
        mask |= 1 << c
    return WeightedPointSet(int(element), kept, mask)


def color_weight(wps: WeightedPointSet, colors: int) -> Fraction:
    """Summed weight of the element's best point for each requested color."""
    if colors & ~wps.mask:
        missing = sorted(set(iter_colors(colors)) - set(iter_colors(wps.mask)))
        raise DomainError(
            f"element {wps.element} has no point of colors {missing}"
        )
    per_color = {c: w for _, w, c in wps.points}
    return sum((per_color[c] for c in iter_colors(colors)), Fraction(0))


def color_weight_of_set(
    elements: Iterable[WeightedPointSet], colors: int
) -> Fraction:
    """For each requested color, the heaviest point of that color anywhere
    in the group; their weights summed."""
    best: dict[int, Fraction] = {}
    group_mask = 0
    for wps in elements:
        group_mask |= wps.mask
        for _, w, c in wps.points:
            if c not in best or w > best[c]:
                best[c] = w
    if colors & ~group_mask:
        missing = sorted(set(iter_colors(colors)) - set(iter_colors(group_mask)))
        raise DomainError(f"the element group has no point of colors {missing}")
    return sum((best[c] for c in iter_colors(colors)), Fraction(0))


# ---------------------------------------------------------------------------
# Streaming over one hash function, and the repeated-seed driver.

@dataclass
class ColorStreamState:
    matchoid: Matchoid
    z: int
    hash_fn: HashFunction
    streams: dict[int, StreamState]
    colored: dict[int, WeightedPointSet]
    arrivals: int = 0


@dataclass(frozen=True)
class ColorRunResult:
    hash_fn: HashFunction
    kernel: frozenset[int]
    per_mask: dict[int, frozenset[int]]
    max_retained_points: int


def color_stream_init(
    matchoid: Matchoid, z: int, hash_fn: HashFunction
) -> ColorStreamState:
    if z < 1:
        raise ParameterError("z must be a positive integer")
    palette_mask = (1 << num_colors(z)) - 1
    streams = {
        mask: stream_init(matchoid, None, z)
        for mask in range(1, palette_mask + 1)
    }
    return ColorStreamState(matchoid, z, hash_fn, streams, {})


def color_stream_push(
    state: ColorStreamState,
    element: int,
    points: Iterable[int],
    point_weights: Mapping[int, Fraction],
) -> WeightedPointSet:
    wps = color_element(element, points, point_weights, state.hash_fn)
    state.colored[element] = wps
    state.arrivals += 1
    for mask in nonempty_submasks(wps.mask):
        stream_push(state.streams[mask], element, weight=color_weight(wps, mask))
    return wps


def streaming_max_coverage(
    instance: CoverageInstance,
    matchoid: Matchoid,
    arrivals: Iterable[int],
    z: int,
    hash_fn: HashFunction,
) -> ColorRunResult:
    """One pass under one hash function; returns the union kernel."""
    pointsets = instance.pointsets
    point_weights = instance.point_weights
    state = color_stream_init(matchoid, z, hash_fn)
    max_retained = 0
    for e in arrivals:
        wps = color_stream_push(state, e, pointsets[e], point_weights)
        max_retained = max(max_retained, len(wps.points))
    per_mask = {mask: st.kernel for mask, st in state.streams.items() if st.kernel}
    kernel: set[int] = set()
    for part in per_mask.values():
        kernel |= part
    return ColorRunResult(hash_fn, frozenset(kernel), per_mask, max_retained)


def randomized_repetitions(z: int, eps: float) -> int:
    """Seeds needed so a well-colored round happens with probability 1 - eps."""
    if z < 1:
        raise ParameterError("z must be a positive integer")
    if not 0.0 < eps < 1.0:
        raise ParameterError("eps must lie strictly between 0 and 1")
    return math.ceil(math.exp(z) * math.log(1.0 / eps))


@dataclass(frozen=True)
class DriverResult:
    kernel: frozenset[int]
    repetitions: int
    runs: tuple[ColorRunResult, ...]


def randomized_kernel(
    instance: CoverageInstance,
    matchoid: Matchoid,
    arrivals: Sequence[int],
    z: int,
    eps: float,
    seed: int = 0,
    parallel: int | None = None,
) -> DriverResult:
    """Union of per-seed kernels over the prescribed number of repetitions."""
    u = randomized_repetitions(z, eps)
    m = (max(instance.universe) + 1) if instance.universe else 1
    rng = random.Random(seed)
    rep_seeds = [rng.getrandbits(62) for _ in range(u)]
    order = list(arrivals)

    def one_run(rep_seed: int) -> ColorRunResult:
        return streaming_max_coverage(
            instance, matchoid, order, z, draw_hash(rep_seed, z, m)
        )

    if parallel is not None and parallel > 1:
        with ThreadPoolExecutor(max_workers=parallel) as pool:
            runs = tuple(pool.map(one_run, rep_seeds))
    else:
        runs = tuple(one_run(s) for s in rep_seeds)
    kernel: set[int] = set()
    for run in runs:
        kernel |= run.kernel
    return DriverResult(frozenset(kernel), u, runs)


def find_injective_hash(
    points: Iterable[int], z: int, m: int, start_seed: int = 0, max_tries: int = 100000
) -> HashFunction:
    """First seed from ``start_seed`` whose hash separates the given points."""
    pts = sorted(set(points))
    if len(pts) > num_colors(z):
        raise ParameterError("more points than colors can never be injective")
    for seed in range(start_seed, start_seed + max_tries):
        h = draw_hash(seed, z, m)
        if len({h.color(p) for p in pts}) == len(pts):
            return h
    raise FamilyError(f"no injective seed found in {max_tries} tries")


def perfect_family(
    z: int, realized_universe: Iterable[int], start_seed: int = 0
) -> list[HashFunction]:
    """Greedy family of hashes separating every z-subset of the universe.

    Seeds are tried in order and kept whenever they separate a still
    uncovered subset; construction fails loudly if the cap (a generous
    multiple of the expected coupon-collector cost) is exhausted.  Only
    desk-scale universes are supported.
    """
    points = sorted(set(int(p) for p in realized_universe))
    if z < 1:
        raise ParameterError("z must be a positive integer")
    if z > 4 or len(points) > 30:
        raise ParameterError("perfect families are only built for z <= 4 and <= 30 points")
    m = (max(points) + 1) if points else 1
    targets = [frozenset(c) for c in combinations(points, z)]
    if not targets:
        return [draw_hash(start_seed, z, m)]
    cap = math.ceil(10 * math.exp(z) * z * math.log(max(len(points), 2)))
    family: list[HashFunction] = []
    uncovered = set(targets)
    for seed in range(start_seed, start_seed + cap):
        h = draw_hash(seed, z, m)
        separated = {
            t for t in uncovered if len({h.color(p) for p in t}) == z
        }
        if separated:
            family.append(h)
            uncovered -= separated
            if not uncovered:
                return family
    missing = sorted(next(iter(uncovered)))
    raise FamilyError(
        f"family cap {cap} exhausted with {len(uncovered)} subsets uncovered, "
        f"e.g. {missing}"
    )


def extract_weighted_solution(
    kernel: Iterable[int],
    matchoid: Matchoid,
    z: int,
    instance: CoverageInstance,
) -> tuple[frozenset[int], Fraction]:
    """Best feasible kernel subset by top-z covered weight, on the full points.

    Subsets of size at most z suffice: keeping one covering element per
    top point never lowers the objective and feasibility is hereditary.
    """
    if z < 1:
        raise ParameterError("z must be a positive integer")
    pointsets = instance.pointsets
    point_weights = instance.point_weights
    pool = sorted(frozenset(kernel))
    best_set: frozenset[int] = frozenset()
    best_value = Fraction(0)
    for size in range(1, min(z, len(pool)) + 1):
        for combo in combinations(pool, size):
            if not matchoid.is_feasible(combo):
                continue
            covered: set[int] = set()
            for e in combo:
                covered |= pointsets[e]
            ranked = sorted((point_weights[p] for p in covered), reverse=True)
            value = sum(ranked[:z], Fraction(0))
            if value > best_value:
                best_set, best_value = frozenset(combo), value
    return best_set, best_value

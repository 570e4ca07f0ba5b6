"""Instance model, generators, graph encodings, and the on-disk format.

Instances are stored as versioned JSON: human-diffable, integer ids, and
weights written as exact rational strings (``"3"``, ``"17/4"``; plain
decimal strings are accepted on input) so loading never goes through
floats.  ``stream_order`` is optional and defaults to ascending id order.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import chain
from typing import IO, Any, Iterable, Mapping, Sequence

from .coverage import CoverageInstance
from .errors import ParameterError, SchemaError
from .matchoid import Matchoid
from .matroids import (
    ExplicitMatroid,
    GraphicMatroid,
    Matroid,
    PartitionMatroid,
    UniformMatroid,
)
from .repset import Weights

FORMAT = "matchoid-instance"
VERSION = 1

GENERATOR_KINDS = ("uniform", "partition", "graphic")


@dataclass
class Element:
    id: int
    weight: Fraction
    points: frozenset[int] | None = None


@dataclass
class Instance:
    elements: list[Element]
    matroids: list[dict[str, Any]]
    stream_order: list[int]
    points: tuple[int, ...] | None = None
    point_weights: dict[int, Fraction] | None = None
    metadata: dict[str, Any] = field(default_factory=dict)

    @property
    def element_ids(self) -> list[int]:
        return [e.id for e in self.elements]

    def weights_map(self) -> dict[int, Fraction]:
        return {e.id: e.weight for e in self.elements}

    def pointsets_map(self) -> dict[int, frozenset[int]]:
        return {
            e.id: (e.points if e.points is not None else frozenset())
            for e in self.elements
        }

    @property
    def has_points(self) -> bool:
        return any(e.points is not None for e in self.elements)


# ---------------------------------------------------------------------------
# Matroid descriptors <-> oracle objects.

def build_matroid(desc: Mapping[str, Any], where: str = "matroid") -> Matroid:
    kind = desc.get("kind")
    try:
        if kind == "uniform":
            return UniformMatroid(desc["ground"], desc["rank"])
        if kind == "partition":
            return PartitionMatroid(desc["blocks"], desc["capacities"])
        if kind == "graphic":
            edges = {
                int(e): (int(uv[0]), int(uv[1]))
                for e, uv in desc["edges"].items()
            }
            return GraphicMatroid(edges)
        if kind == "explicit":
            return ExplicitMatroid(desc["ground"], desc["independent"])
    except KeyError as exc:
        raise SchemaError(f"{where}: missing field {exc} for kind '{kind}'") from None
    raise SchemaError(f"{where}.kind: unknown kind {kind!r}")


def build_matchoid(instance: Instance) -> Matchoid:
    matroids = [
        build_matroid(d, where=f"matroids[{i}]")
        for i, d in enumerate(instance.matroids)
    ]
    return Matchoid(matroids, universe=instance.element_ids)


def build_weights(instance: Instance) -> Weights:
    return Weights(instance.weights_map())


def build_coverage(instance: Instance) -> CoverageInstance:
    if not instance.has_points:
        raise ParameterError("instance has no pointsets; not a coverage instance")
    pointsets = instance.pointsets_map()
    if instance.points is not None:
        universe: Iterable[int] = instance.points
    else:
        universe = sorted(set(chain.from_iterable(pointsets.values())))
    return CoverageInstance(universe, pointsets, instance.point_weights)


# ---------------------------------------------------------------------------
# Serialization.

def _to_json_dict(instance: Instance) -> dict[str, Any]:
    doc: dict[str, Any] = {
        "format": FORMAT,
        "version": VERSION,
        "metadata": instance.metadata,
        "elements": [],
        "matroids": instance.matroids,
        "stream_order": list(instance.stream_order),
    }
    for e in instance.elements:
        entry: dict[str, Any] = {"id": e.id, "weight": str(e.weight)}
        if e.points is not None:
            entry["points"] = sorted(e.points)
        doc["elements"].append(entry)
    if instance.points is not None:
        doc["points"] = sorted(instance.points)
    if instance.point_weights is not None:
        doc["point_weights"] = {
            str(p): str(w) for p, w in sorted(instance.point_weights.items())
        }
    return doc


def save(instance: Instance, target: str | IO[str]) -> None:
    doc = _to_json_dict(instance)
    text = json.dumps(doc, indent=2, sort_keys=True) + "\n"
    if hasattr(target, "write"):
        target.write(text)  # type: ignore[union-attr]
    else:
        with open(target, "w", encoding="utf-8") as fh:
            fh.write(text)


def _expect(cond: bool, path: str, message: str) -> None:
    if not cond:
        raise SchemaError(f"{path}: {message}")


def _parse_weight(raw: Any, path: str) -> Fraction:
    _expect(isinstance(raw, str), path, "weights must be strings")
    try:
        return Fraction(raw)
    except (ValueError, ZeroDivisionError):
        raise SchemaError(f"{path}: {raw!r} is not a rational number") from None


def load(source: str | IO[str]) -> Instance:
    if hasattr(source, "read"):
        text = source.read()  # type: ignore[union-attr]
    else:
        with open(source, "r", encoding="utf-8") as fh:
            text = fh.read()
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"not valid JSON: {exc}") from None
    _expect(isinstance(doc, dict), "$", "top level must be an object")
    _expect(doc.get("format") == FORMAT, "format", f"expected {FORMAT!r}")
    _expect(doc.get("version") == VERSION, "version", f"expected {VERSION}")
    raw_elements = doc.get("elements")
    _expect(isinstance(raw_elements, list), "elements", "must be a list")

    elements: list[Element] = []
    seen: set[int] = set()
    for i, raw in enumerate(raw_elements):
        path = f"elements[{i}]"
        _expect(isinstance(raw, dict), path, "must be an object")
        _expect(isinstance(raw.get("id"), int), f"{path}.id", "must be an integer")
        eid = raw["id"]
        _expect(eid >= 0, f"{path}.id", "must be nonnegative")
        _expect(eid not in seen, f"{path}.id", f"duplicate id {eid}")
        seen.add(eid)
        weight = _parse_weight(raw.get("weight"), f"{path}.weight")
        points: frozenset[int] | None = None
        if "points" in raw:
            _expect(
                isinstance(raw["points"], list)
                and all(isinstance(p, int) for p in raw["points"]),
                f"{path}.points",
                "must be a list of integers",
            )
            points = frozenset(raw["points"])
        elements.append(Element(eid, weight, points))

    raw_matroids = doc.get("matroids")
    _expect(isinstance(raw_matroids, list), "matroids", "must be a list")
    for i, desc in enumerate(raw_matroids):
        _expect(isinstance(desc, dict), f"matroids[{i}]", "must be an object")
        build_matroid(desc, where=f"matroids[{i}]")  # full validation
        ground = _descriptor_ground(desc)
        stray = ground - seen
        _expect(
            not stray,
            f"matroids[{i}]",
            f"ground mentions unknown elements {sorted(stray)}",
        )

    if "stream_order" in doc:
        order = doc["stream_order"]
        _expect(
            isinstance(order, list) and all(isinstance(e, int) for e in order),
            "stream_order",
            "must be a list of integers",
        )
        _expect(
            sorted(order) == sorted(seen),
            "stream_order",
            "must be a permutation of the element ids",
        )
        stream_order = list(order)
    else:
        stream_order = sorted(seen)

    points: tuple[int, ...] | None = None
    if "points" in doc:
        raw_pts = doc["points"]
        _expect(
            isinstance(raw_pts, list) and all(isinstance(p, int) for p in raw_pts),
            "points",
            "must be a list of integers",
        )
        points = tuple(sorted(set(raw_pts)))
        for e in elements:
            if e.points is not None:
                stray = e.points - set(points)
                _expect(
                    not stray,
                    f"elements[id={e.id}].points",
                    f"mentions unknown points {sorted(stray)}",
                )

    point_weights: dict[int, Fraction] | None = None
    if "point_weights" in doc:
        raw_pw = doc["point_weights"]
        _expect(isinstance(raw_pw, dict), "point_weights", "must be an object")
        point_weights = {}
        for key, value in raw_pw.items():
            try:
                pid = int(key)
            except ValueError:
                raise SchemaError(
                    f"point_weights.{key}: keys must be integer point ids"
                ) from None
            point_weights[pid] = _parse_weight(value, f"point_weights.{key}")

    metadata = doc.get("metadata", {})
    _expect(isinstance(metadata, dict), "metadata", "must be an object")
    return Instance(elements, list(raw_matroids), stream_order, points, point_weights, metadata)


def _descriptor_ground(desc: Mapping[str, Any]) -> set[int]:
    kind = desc.get("kind")
    if kind == "uniform" or kind == "explicit":
        return set(desc["ground"])
    if kind == "partition":
        return set(chain.from_iterable(desc["blocks"]))
    if kind == "graphic":
        return {int(e) for e in desc["edges"]}
    return set()


# ---------------------------------------------------------------------------
# Generators.

def _random_matroid_descriptors(
    rng: random.Random,
    ids: Sequence[int],
    s: int,
    ell: int,
    kinds: Sequence[str],
) -> list[dict[str, Any]]:
    """Random grounds touching each element at most ``ell`` times, then a
    random matroid of a requested kind on each ground."""
    if s < 1:
        raise ParameterError("need at least one matroid")
    if ell < 1:
        raise ParameterError("ell must be at least 1")
    for kind in kinds:
        if kind not in GENERATOR_KINDS:
            raise ParameterError(f"cannot generate matroid kind {kind!r}")
    if s > len(ids) * ell:
        raise ParameterError(
            f"infeasible: {s} nonempty grounds need more than {len(ids)} "
            f"elements x ell={ell} membership slots"
        )
    capacity = {e: ell for e in ids}
    grounds: list[set[int]] = []
    for _ in range(s):
        eligible = sorted(e for e in ids if capacity[e] > 0)
        seed_elem = rng.choice(eligible)
        capacity[seed_elem] -= 1
        grounds.append({seed_elem})
    for e in ids:
        if capacity[e] == 0:
            continue
        extra = rng.randint(0, capacity[e])
        open_grounds = [i for i in range(s) if e not in grounds[i]]
        for i in rng.sample(open_grounds, min(extra, len(open_grounds))):
            grounds[i].add(e)

    descriptors: list[dict[str, Any]] = []
    for ground in grounds:
        members = sorted(ground)
        kind = rng.choice(list(kinds))
        if kind == "uniform":
            descriptors.append(
                {
                    "kind": "uniform",
                    "ground": members,
                    "rank": rng.randint(1, len(members)),
                }
            )
        elif kind == "partition":
            shuffled = members[:]
            rng.shuffle(shuffled)
            cuts = sorted(
                rng.sample(range(1, len(shuffled)), rng.randint(0, len(shuffled) - 1))
            ) if len(shuffled) > 1 else []
            blocks = []
            last = 0
            for cut in cuts + [len(shuffled)]:
                blocks.append(sorted(shuffled[last:cut]))
                last = cut
            capacities = [rng.randint(1, len(b)) for b in blocks]
            descriptors.append(
                {"kind": "partition", "blocks": blocks, "capacities": capacities}
            )
        else:  # graphic
            pool = len(members) + 1
            edges = {
                str(e): sorted(rng.sample(range(pool), 2)) for e in members
            }
            descriptors.append({"kind": "graphic", "edges": edges})
    return descriptors


def gen_random_matchoid(
    n: int, s: int, ell: int, kinds: Sequence[str], seed: int
) -> Instance:
    """Random weighted matchoid instance; weights are small integers so
    ties actually occur and exercise the priority order."""
    if n < 1:
        raise ParameterError("need at least one element")
    rng = random.Random(seed)
    ids = list(range(n))
    descriptors = _random_matroid_descriptors(rng, ids, s, ell, kinds)
    elements = [Element(e, Fraction(rng.randint(1, 10))) for e in ids]
    order = ids[:]
    rng.shuffle(order)
    metadata = {
        "generator": "random-matchoid",
        "seed": seed,
        "n": n,
        "s": s,
        "ell": ell,
        "kinds": sorted(kinds),
    }
    return Instance(elements, descriptors, order, metadata=metadata)


def gen_coverage(
    n: int,
    m: int,
    max_set: int,
    weighted: bool,
    seed: int,
    *,
    s: int = 1,
    ell: int = 1,
    kinds: Sequence[str] = ("uniform", "partition"),
) -> Instance:
    """Random coverage instance over points 0..m-1 with a random matchoid.

    The matchoid shape is controlled by the keyword parameters; the
    positional part matches the plain coverage contract.
    """
    if n < 1:
        raise ParameterError("need at least one element")
    if m < 1:
        raise ParameterError("need at least one point")
    if not 1 <= max_set <= m:
        raise ParameterError("max_set must lie between 1 and m")
    rng = random.Random(seed)
    ids = list(range(n))
    elements = [
        Element(
            e,
            Fraction(1),
            frozenset(rng.sample(range(m), rng.randint(1, max_set))),
        )
        for e in ids
    ]
    descriptors = _random_matroid_descriptors(rng, ids, s, ell, kinds)
    if weighted:
        point_weights = {
            p: Fraction(rng.randint(1, 20), rng.choice((1, 2, 4))) for p in range(m)
        }
    else:
        point_weights = {p: Fraction(1) for p in range(m)}
    order = ids[:]
    rng.shuffle(order)
    metadata = {
        "generator": "random-coverage",
        "seed": seed,
        "n": n,
        "m": m,
        "max_set": max_set,
        "weighted": weighted,
        "s": s,
        "ell": ell,
    }
    return Instance(
        elements,
        descriptors,
        order,
        points=tuple(range(m)),
        point_weights=point_weights,
        metadata=metadata,
    )


def encode_independent_set(
    edges: Iterable[tuple[int, int]],
    k: int,
    vertices: Iterable[int] | None = None,
) -> Instance:
    """Encode maximum independent set in a simple graph.

    Each vertex becomes a unit-weight element covering one private point;
    each edge becomes a rank-1 matroid on its two endpoints, so a set of
    vertices is feasible exactly when no edge has both endpoints chosen.
    The element overlap equals the maximum degree.
    """
    edge_list: list[tuple[int, int]] = []
    seen_edges: set[frozenset[int]] = set()
    verts: set[int] = {int(v) for v in (vertices or ())}
    for u, v in edges:
        u, v = int(u), int(v)
        if u == v:
            raise ParameterError(f"self-loop at vertex {u}; the graph must be simple")
        key = frozenset((u, v))
        if key in seen_edges:
            continue
        seen_edges.add(key)
        edge_list.append((min(u, v), max(u, v)))
        verts |= {u, v}
    if any(v < 0 for v in verts):
        raise ParameterError("vertex ids must be nonnegative integers")
    if k < 0:
        raise ParameterError("k must be nonnegative")
    ordered = sorted(verts)
    elements = [Element(v, Fraction(1), frozenset((v,))) for v in ordered]
    descriptors = [
        {"kind": "uniform", "ground": [u, v], "rank": 1}
        for u, v in sorted(edge_list)
    ]
    degree: dict[int, int] = {v: 0 for v in ordered}
    for u, v in edge_list:
        degree[u] += 1
        degree[v] += 1
    metadata = {
        "generator": "independent-set",
        "k": k,
        "max_degree": max(degree.values(), default=0),
    }
    return Instance(
        elements,
        descriptors,
        ordered[:],
        points=tuple(ordered),
        point_weights={v: Fraction(1) for v in ordered},
        metadata=metadata,
    )

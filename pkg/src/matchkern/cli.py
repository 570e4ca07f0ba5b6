"""Command-line front end: generate instances, run the solvers, verify runs.

Reports are line-delimited JSON: a ``run`` header, optional ``step``
records, and one final ``summary`` record.  Identical invocations produce
byte-identical reports (no timestamps, sorted keys, exact rational values
as strings).

Exit codes: 0 success, 1 bound violation, 2 verification failure,
3 input error.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from fractions import Fraction
from typing import Any, Iterable, Sequence

from . import colorcode
from .bruteforce import (
    brute_max_coverage,
    brute_max_weight_feasible,
    check_joint_rep_set,
)
from .coverage import ValueOracle
from .coverage_oracle import (
    coverage_store_bound,
    extract_coverage_solution,
    streaming_coverage,
    structure_report,
)
from .errors import MatchkernError, ParameterError, SchemaError
from .instances import (
    Instance,
    build_coverage,
    build_matchoid,
    build_weights,
    encode_independent_set,
    gen_coverage,
    gen_random_matchoid,
    load,
    save,
)
from .repset import RepSetStats, best_feasible_subset, kernel_max_weight, rep_bound
from .stream import _ceil_log2, stream_init, stream_memory_report, stream_push

EXIT_OK = 0
EXIT_BOUND = 1
EXIT_VERIFY = 2
EXIT_INPUT = 3


def _jsonable(obj: Any) -> Any:
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, (frozenset, set)):
        return sorted(obj)
    if isinstance(obj, tuple):
        return [_jsonable(x) for x in obj]
    if isinstance(obj, list):
        return [_jsonable(x) for x in obj]
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    return obj


def _emit(records: Iterable[dict[str, Any]], path: str | None) -> None:
    lines = [
        json.dumps(_jsonable(r), sort_keys=True, separators=(",", ":"))
        for r in records
    ]
    text = "\n".join(lines) + "\n"
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


# ---------------------------------------------------------------------------
# gen

_GRAPHS = ("path", "cycle", "complete", "star", "edgeless", "gnp")


def _parse_graph(spec: str, seed: int) -> tuple[list[tuple[int, int]], list[int]]:
    parts = spec.split(":")
    name = parts[0]
    if name not in _GRAPHS:
        raise ParameterError(f"unknown graph family {name!r}; choose from {_GRAPHS}")
    try:
        n = int(parts[1])
    except (IndexError, ValueError):
        raise ParameterError(f"graph spec {spec!r} needs an integer size") from None
    if n < 1:
        raise ParameterError("graphs need at least one vertex")
    vertices = list(range(n))
    if name == "path":
        return [(i, i + 1) for i in range(n - 1)], vertices
    if name == "cycle":
        if n < 3:
            raise ParameterError("cycles need at least three vertices")
        return [(i, (i + 1) % n) for i in range(n)], vertices
    if name == "complete":
        return [(i, j) for i in range(n) for j in range(i + 1, n)], vertices
    if name == "star":
        return [(0, i) for i in range(1, n)], vertices
    if name == "edgeless":
        return [], vertices
    # gnp:N:PERCENT
    try:
        percent = int(parts[2])
    except (IndexError, ValueError):
        raise ParameterError("gnp specs look like gnp:N:PERCENT") from None
    if not 0 <= percent <= 100:
        raise ParameterError("gnp percent must be within 0..100")
    rng = random.Random(seed)
    edges = [
        (i, j)
        for i in range(n)
        for j in range(i + 1, n)
        if rng.randrange(100) < percent
    ]
    return edges, vertices


def _cmd_gen(args: argparse.Namespace) -> int:
    kinds = tuple(k.strip() for k in args.kinds.split(",")) if args.kinds else None
    if args.generator == "matchoid":
        instance = gen_random_matchoid(
            args.n, args.s, args.ell, kinds or ("uniform", "partition", "graphic"),
            args.seed,
        )
    elif args.generator == "coverage":
        instance = gen_coverage(
            args.n,
            args.m,
            args.max_set,
            args.weighted,
            args.seed,
            s=args.s,
            ell=args.ell,
            kinds=kinds or ("uniform", "partition"),
        )
    else:  # independent-set
        edges, vertices = _parse_graph(args.graph, args.seed)
        instance = encode_independent_set(edges, args.k or 2, vertices)
    save(instance, args.out)
    _emit(
        [
            {
                "record": "gen",
                "generator": args.generator,
                "out": args.out,
                "elements": len(instance.elements),
                "matroids": len(instance.matroids),
            }
        ],
        None,
    )
    return EXIT_OK


# ---------------------------------------------------------------------------
# kernel / stream

def _choose_k(args: argparse.Namespace, instance: Instance, matchoid) -> int:
    if args.k is not None:
        return args.k
    meta_k = instance.metadata.get("k")
    if isinstance(meta_k, int) and meta_k >= 1:
        return meta_k
    return max(1, matchoid.rank_upper())


def _cmd_kernel(args: argparse.Namespace) -> int:
    instance = load(args.instance)
    matchoid = build_matchoid(instance)
    weights = build_weights(instance)
    k = _choose_k(args, instance, matchoid)
    stats = RepSetStats()
    result = kernel_max_weight(matchoid, weights, k, stats)
    bound = rep_bound(matchoid.ell, k)
    budget = bound * len(matchoid.universe)
    kernel_ok = len(result.kernel) <= bound
    queries_ok = stats.queries <= budget
    ok = kernel_ok and queries_ok
    _emit(
        [
            {
                "record": "run",
                "mode": "kernel",
                "instance": args.instance,
                "params": {"k": k},
            },
            {
                "record": "summary",
                "mode": "kernel",
                "instance": args.instance,
                "k": k,
                "ell": matchoid.ell,
                "kernel": result.kernel,
                "kernel_size": len(result.kernel),
                "solution": result.solution,
                "value": result.value,
                "counters": {"independence_queries": stats.queries},
                "bounds": {
                    "kernel_bound": bound,
                    "kernel_ok": kernel_ok,
                    "query_budget": budget,
                    "queries_ok": queries_ok,
                },
                "ok": ok,
            },
        ],
        args.report,
    )
    return EXIT_OK if ok else EXIT_BOUND


def _cmd_stream(args: argparse.Namespace) -> int:
    instance = load(args.instance)
    matchoid = build_matchoid(instance)
    weights = build_weights(instance)
    k = _choose_k(args, instance, matchoid)
    bound = rep_bound(matchoid.ell, k)
    state = stream_init(matchoid, weights, k)
    records: list[dict[str, Any]] = [
        {
            "record": "run",
            "mode": "stream",
            "instance": args.instance,
            "params": {"k": k},
        }
    ]
    push_ok = True
    for t, e in enumerate(instance.stream_order):
        kernel = stream_push(state, e)
        spent = state.queries_last_push
        push_ok = push_ok and spent <= bound * (bound + 1)
        records.append(
            {
                "record": "step",
                "t": t,
                "element": e,
                "weight": weights(e),
                "kernel": kernel,
                "kernel_size": len(kernel),
                "queries": spent,
            }
        )
    report = stream_memory_report(state)
    solution, value = best_feasible_subset(state.kernel, matchoid, state.weights, k)
    kernel_ok = report.kernel_size <= bound
    aux_ok = report.aux_bits_peak <= 2 * k * matchoid.ell * _ceil_log2(
        max(report.arrivals, matchoid.size, 2)
    )
    ok = kernel_ok and push_ok and aux_ok
    records.append(
        {
            "record": "summary",
            "mode": "stream",
            "instance": args.instance,
            "k": k,
            "ell": matchoid.ell,
            "kernel": state.kernel,
            "kernel_size": report.kernel_size,
            "solution": solution,
            "value": value,
            "counters": {
                "independence_queries": report.queries_total,
                "max_push_queries": report.queries_max_push,
                "aux_bits_peak": report.aux_bits_peak,
                "arrivals": report.arrivals,
            },
            "bounds": {
                "kernel_bound": bound,
                "kernel_ok": kernel_ok,
                "push_budget": bound * (bound + 1),
                "push_ok": push_ok,
                "aux_ok": aux_ok,
            },
            "ok": ok,
        }
    )
    _emit(records, args.report)
    return EXIT_OK if ok else EXIT_BOUND


# ---------------------------------------------------------------------------
# cover-oracle

def _cmd_cover_oracle(args: argparse.Namespace) -> int:
    instance = load(args.instance)
    matchoid = build_matchoid(instance)
    cov = build_coverage(instance)
    oracle = ValueOracle(cov)
    z = args.z
    result = streaming_coverage(
        oracle, instance.stream_order, matchoid, z, literal_match=args.literal_match
    )
    solution = extract_coverage_solution(oracle, result.kernel, matchoid, z)
    structure = structure_report(result.state)
    per_arrival_ok = all(
        r.value_queries <= r.value_query_budget for r in result.state.log
    )
    bound = coverage_store_bound(matchoid.ell, z)
    kernel_ok = len(result.kernel) <= max(1, bound)
    ok = per_arrival_ok and structure.ok and kernel_ok
    trees = [
        {
            "value_class": j + 1,
            "nodes": sum(1 for _ in root.walk()),
            "stored": sum(len(n.member_order) for n in root.walk()),
            "max_depth": max(n.depth for n in root.walk()),
        }
        for j, root in enumerate(result.state.roots)
    ]
    _emit(
        [
            {
                "record": "run",
                "mode": "cover-oracle",
                "instance": args.instance,
                "params": {"z": z, "literal_match": args.literal_match},
            },
            {
                "record": "summary",
                "mode": "cover-oracle",
                "instance": args.instance,
                "z": z,
                "ell": matchoid.ell,
                "kernel": result.kernel,
                "kernel_size": len(result.kernel),
                "early": result.early,
                "solution": solution,
                "counters": {
                    "value_queries": result.value_queries,
                    "independence_queries": result.independence_queries,
                },
                "trees": trees,
                "bounds": {
                    "store_bound": bound,
                    "stored": structure.stored,
                    "structure_ok": structure.ok,
                    "per_arrival_ok": per_arrival_ok,
                    "kernel_ok": kernel_ok,
                },
                "ok": ok,
            },
        ],
        args.report,
    )
    return EXIT_OK if ok else EXIT_BOUND


# ---------------------------------------------------------------------------
# cover-color

def _top_z_value(cov, elements: Iterable[int], z: int) -> Fraction:
    covered: set[int] = set()
    pointsets = cov.pointsets
    for e in elements:
        covered |= pointsets[e]
    weights = cov.point_weights
    ranked = sorted((weights[p] for p in covered), reverse=True)
    return sum(ranked[:z], Fraction(0))


def _cmd_cover_color(args: argparse.Namespace) -> int:
    instance = load(args.instance)
    matchoid = build_matchoid(instance)
    cov = build_coverage(instance)
    z = args.z
    palette = colorcode.num_colors(z)
    order = list(instance.stream_order)
    planted_value: Fraction | None = None
    if args.mode == "random":
        driver = colorcode.randomized_kernel(
            cov, matchoid, order, z, args.eps, seed=args.seed, parallel=args.parallel
        )
        runs = driver.runs
        kernel = driver.kernel
        repetitions = driver.repetitions
    elif args.mode == "perfect":
        family = colorcode.perfect_family(z, cov.universe, start_seed=args.seed)
        runs = tuple(
            colorcode.streaming_max_coverage(cov, matchoid, order, z, h)
            for h in family
        )
        kernel = frozenset().union(*(r.kernel for r in runs))
        repetitions = len(family)
    else:  # planted
        brute = brute_max_coverage(matchoid, cov.pointsets, cov.point_weights, z)
        covered = cov.covered(brute.witness)
        target = sorted(covered, key=lambda p: (-cov.point_weights[p], p))[:z]
        m = (max(cov.universe) + 1) if cov.universe else 1
        h = colorcode.find_injective_hash(target, z, m, start_seed=args.seed)
        runs = (colorcode.streaming_max_coverage(cov, matchoid, order, z, h),)
        kernel = runs[0].kernel
        repetitions = 1
        planted_value = brute.value
    solution, value = colorcode.extract_weighted_solution(kernel, matchoid, z, cov)
    per_mask_bound = rep_bound(matchoid.ell, z)
    per_mask_ok = all(
        len(part) <= per_mask_bound for run in runs for part in run.per_mask.values()
    )
    observed_retained = max((run.max_retained_points for run in runs), default=0)
    ok = per_mask_ok
    summary: dict[str, Any] = {
        "record": "summary",
        "mode": "cover-color",
        "instance": args.instance,
        "z": z,
        "eps": args.eps,
        "seed": args.seed,
        "color_mode": args.mode,
        "repetitions": repetitions,
        "kernel": kernel,
        "kernel_size": len(kernel),
        "solution": solution,
        "value": value,
        "retained_points": {
            "stated_z": z,
            "palette": palette,
            "observed_max": observed_retained,
        },
        "bounds": {
            "per_mask_bound": per_mask_bound,
            "per_mask_ok": per_mask_ok,
            "instances_per_run": (1 << palette) - 1,
        },
        "ok": ok,
    }
    if planted_value is not None:
        summary["planted_value"] = planted_value
    _emit(
        [
            {
                "record": "run",
                "mode": "cover-color",
                "instance": args.instance,
                "params": {
                    "z": z,
                    "eps": args.eps,
                    "seed": args.seed,
                    "color_mode": args.mode,
                },
            },
            summary,
        ],
        args.report,
    )
    return EXIT_OK if ok else EXIT_BOUND


# ---------------------------------------------------------------------------
# verify

def _read_summary(path: str) -> dict[str, Any]:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            lines = [line for line in fh.read().splitlines() if line.strip()]
    except OSError as exc:
        raise SchemaError(f"cannot read report: {exc}") from None
    summary = None
    for line in lines:
        try:
            record = json.loads(line)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"report line is not JSON: {exc}") from None
        if isinstance(record, dict) and record.get("record") == "summary":
            summary = record
    if summary is None:
        raise SchemaError("report contains no summary record")
    return summary


def _verify_linear(summary: dict[str, Any], instance: Instance) -> tuple[int, list[str]]:
    problems: list[str] = []
    matchoid = build_matchoid(instance)
    weights = build_weights(instance)
    k = int(summary["k"])
    kernel = frozenset(summary["kernel"])
    solution = frozenset(summary["solution"])
    value = Fraction(summary["value"])
    bound = rep_bound(matchoid.ell, k)
    counters = summary["counters"]
    queries = int(counters["independence_queries"])
    if summary["mode"] == "stream":
        # Re-kernelization on every arrival: the budget is per push.
        arrivals = int(counters["arrivals"])
        max_push = int(counters["max_push_queries"])
        per_push = bound * (bound + 1)
        busted = max_push > per_push or queries > arrivals * per_push
    else:
        busted = queries > bound * len(matchoid.universe)
    if len(kernel) > bound or busted:
        return EXIT_BOUND, [f"bound violation: kernel {len(kernel)} queries {queries}"]
    if not kernel <= matchoid.universe:
        problems.append("kernel leaves the universe")
    if not solution <= kernel:
        problems.append("solution is not drawn from the kernel")
    if len(solution) > k:
        problems.append("solution exceeds k elements")
    if not matchoid.is_feasible(solution):
        problems.append("claimed solution is infeasible")
    if weights.total(solution) != value:
        problems.append("claimed value does not match the solution's weight")
    brute = brute_max_weight_feasible(matchoid, weights, k)
    if value != brute.value:
        problems.append(
            f"claimed optimum {value} differs from brute force {brute.value}"
        )
    if len(matchoid.universe) <= 14:
        check = check_joint_rep_set(kernel, matchoid.universe, matchoid, weights, k)
        if not check.ok:
            problems.append(f"kernel fails representativity at {check.violation}")
    return (EXIT_VERIFY if problems else EXIT_OK), problems


def _verify_cover_oracle(
    summary: dict[str, Any], instance: Instance
) -> tuple[int, list[str]]:
    problems: list[str] = []
    matchoid = build_matchoid(instance)
    cov = build_coverage(instance)
    z = int(summary["z"])
    kernel = frozenset(summary["kernel"])
    solution = summary["solution"]
    bound = coverage_store_bound(matchoid.ell, z)
    if len(kernel) > max(1, bound):
        return EXIT_BOUND, [f"bound violation: kernel {len(kernel)} > {max(1, bound)}"]
    unit = {p: Fraction(1) for p in cov.universe}
    brute = brute_max_coverage(matchoid, cov.pointsets, unit, z)
    achievable = brute.value >= z
    if solution is None:
        if achievable:
            problems.append("no solution claimed although z points are coverable")
    else:
        chosen = frozenset(solution)
        if not chosen <= kernel:
            problems.append("solution is not drawn from the kernel")
        if not matchoid.is_feasible(chosen):
            problems.append("claimed solution is infeasible")
        if len(cov.covered(chosen)) < z:
            problems.append("claimed solution covers fewer than z points")
    early = summary.get("early")
    if early is not None:
        if len(cov.covered([early])) < z:
            problems.append("early-exit element does not cover z points alone")
        if kernel != frozenset((early,)):
            problems.append("early exit must leave a singleton kernel")
    return (EXIT_VERIFY if problems else EXIT_OK), problems


def _verify_cover_color(
    summary: dict[str, Any], instance: Instance
) -> tuple[int, list[str]]:
    problems: list[str] = []
    matchoid = build_matchoid(instance)
    cov = build_coverage(instance)
    z = int(summary["z"])
    kernel = frozenset(summary["kernel"])
    solution = frozenset(summary["solution"])
    value = Fraction(summary["value"])
    if not kernel <= frozenset(e.id for e in instance.elements):
        problems.append("kernel mentions unknown elements")
    if not solution <= kernel:
        problems.append("solution is not drawn from the kernel")
    if solution and not matchoid.is_feasible(solution):
        problems.append("claimed solution is infeasible")
    if _top_z_value(cov, solution, z) != value:
        problems.append("claimed value does not match the solution's coverage")
    brute = brute_max_coverage(matchoid, cov.pointsets, cov.point_weights, z)
    if value > brute.value:
        problems.append(
            f"claimed value {value} exceeds the true optimum {brute.value}"
        )
    if "planted_value" in summary:
        planted = Fraction(summary["planted_value"])
        if planted != brute.value:
            problems.append("recorded planted optimum is wrong")
        if value != brute.value:
            problems.append("planted run failed to reach the optimum")
    return (EXIT_VERIFY if problems else EXIT_OK), problems


def _cmd_verify(args: argparse.Namespace) -> int:
    summary = _read_summary(args.report)
    instance_path = args.instance or summary.get("instance")
    if not instance_path:
        raise SchemaError("report does not name its instance; pass --instance")
    instance = load(instance_path)
    mode = summary.get("mode")
    if mode in ("kernel", "stream"):
        code, problems = _verify_linear(summary, instance)
    elif mode == "cover-oracle":
        code, problems = _verify_cover_oracle(summary, instance)
    elif mode == "cover-color":
        code, problems = _verify_cover_color(summary, instance)
    else:
        raise SchemaError(f"report has unknown mode {mode!r}")
    _emit(
        [
            {
                "record": "verify",
                "report": args.report,
                "instance": instance_path,
                "mode": mode,
                "ok": code == EXIT_OK,
                "problems": problems,
            }
        ],
        None,
    )
    return code


# ---------------------------------------------------------------------------
# Parser.

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="matchkern",
        description="Exact kernels for matchoid-constrained maximization.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help="generate an instance file")
    gen.add_argument(
        "--generator",
        choices=("matchoid", "coverage", "independent-set"),
        required=True,
    )
    gen.add_argument("--out", required=True, help="output instance path")
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--n", type=int, default=8)
    gen.add_argument("--s", type=int, default=2)
    gen.add_argument("--ell", type=int, default=1)
    gen.add_argument("--m", type=int, default=8)
    gen.add_argument("--max-set", type=int, default=3, dest="max_set")
    gen.add_argument("--weighted", action="store_true")
    gen.add_argument("--kinds", default=None, help="comma-separated matroid kinds")
    gen.add_argument("--graph", default="path:3", help="graph spec, e.g. cycle:5")
    gen.add_argument("--k", type=int, default=None)
    gen.set_defaults(handler=_cmd_gen)

    kernel = sub.add_parser("kernel", help="offline kernel + exact solution")
    kernel.add_argument("--instance", required=True)
    kernel.add_argument("--k", type=int, default=None)
    kernel.add_argument("--report", default=None)
    kernel.set_defaults(handler=_cmd_kernel)

    stream = sub.add_parser("stream", help="streaming kernel over stream_order")
    stream.add_argument("--instance", required=True)
    stream.add_argument("--k", type=int, default=None)
    stream.add_argument("--report", default=None)
    stream.set_defaults(handler=_cmd_stream)

    cover = sub.add_parser("cover-oracle", help="value-oracle coverage kernel")
    cover.add_argument("--instance", required=True)
    cover.add_argument("--z", type=int, required=True)
    cover.add_argument("--literal-match", action="store_true", dest="literal_match")
    cover.add_argument("--report", default=None)
    cover.set_defaults(handler=_cmd_cover_oracle)

    color = sub.add_parser("cover-color", help="color-coded weighted coverage kernel")
    color.add_argument("--instance", required=True)
    color.add_argument("--z", type=int, required=True)
    color.add_argument("--eps", type=float, default=0.1)
    color.add_argument("--seed", type=int, default=0)
    color.add_argument("--mode", choices=("random", "perfect", "planted"), default="random")
    color.add_argument("--parallel", type=int, default=None)
    color.add_argument("--report", default=None)
    color.set_defaults(handler=_cmd_cover_color)

    verify = sub.add_parser("verify", help="replay a report against brute force")
    verify.add_argument("--report", required=True)
    verify.add_argument("--instance", default=None)
    verify.set_defaults(handler=_cmd_verify)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except OverflowError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except MatchkernError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    raise SystemExit(main())

"""Streaming maintenance of a joint k-representative set.

One element arrives at a time; the state keeps only the current kernel and
re-kernelizes kernel-plus-newcomer on every push.  Representativity for
the whole prefix follows by induction, so the memory footprint stays at
``rep_bound(ell, k)`` elements plus the implicit branch state: a path of
at most ``(k-1) * ell`` (element id, matroid index) pairs.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

from .errors import ParameterError, StreamError
from .matchoid import Matchoid
from .repset import Weights, rep_bound, rep_set


def _ceil_log2(n: int) -> int:
    return max(1, (max(n, 2) - 1).bit_length())


@dataclass
class StreamState:
    matchoid: Matchoid
    k: int
    weights: Weights
    source: Weights | None
    kernel: frozenset[int] = frozenset()
    arrivals: int = 0
    pushed: set[int] = field(default_factory=set)
    queries_total: int = 0
    queries_last_push: int = 0
    queries_max_push: int = 0
    aux_bits_peak: int = 0


@dataclass(frozen=True)
class MemoryReport:
    kernel_size: int
    kernel_bound: int
    arrivals: int
    aux_bits_peak: int
    queries_total: int
    queries_last_push: int
    queries_max_push: int


def stream_init(
    matchoid: Matchoid,
    weights: Weights | Mapping[int, Fraction | int | str] | None,
    k: int,
) -> StreamState:
    """Fresh stream over ``matchoid``.

    ``weights`` may be a ready weight table used to look up arrivals, or
    None when each push will carry its own weight.  Either way the state
    re-keys priorities by arrival order, which is the streaming tie-break.
    """
    if k < 1:
        raise ParameterError("k must be a positive integer")
    rep_bound(matchoid.ell, k)  # validate parameters up front
    source: Weights | None
    if weights is None:
        source = None
    elif isinstance(weights, Weights):
        source = weights
    else:
        source = Weights(weights)
    return StreamState(matchoid, k, Weights({}, order={}), source)


def stream_push(
    state: StreamState,
    element: int,
    weight: Fraction | int | str | None = None,
) -> frozenset[int]:
    """Feed one arrival and return the updated kernel."""
    e = int(element)
    if e in state.pushed:
        raise StreamError(f"element {e} arrived twice")
    if weight is None:
        if state.source is None:
            raise ParameterError(
                f"no weight table configured and none supplied for element {e}"
            )
        weight = state.source(e)
    state.weights.assign(e, weight, index=state.arrivals)
    state.pushed.add(e)
    state.arrivals += 1

    before = state.matchoid.queries
    state.kernel = rep_set(state.kernel | {e}, state.matchoid, state.weights, state.k)
    spent = state.matchoid.queries - before
    state.queries_total += spent
    state.queries_last_push = spent
    state.queries_max_push = max(state.queries_max_push, spent)

    per_level = _ceil_log2(state.arrivals) + _ceil_log2(max(state.matchoid.size, 1))
    bits = (state.k - 1) * state.matchoid.ell * per_level
    state.aux_bits_peak = max(state.aux_bits_peak, bits)
    return state.kernel


def stream_memory_report(state: StreamState) -> MemoryReport:
    return MemoryReport(
        kernel_size=len(state.kernel),
        kernel_bound=rep_bound(state.matchoid.ell, state.k),
        arrivals=state.arrivals,
        aux_bits_peak=state.aux_bits_peak,
        queries_total=state.queries_total,
        queries_last_push=state.queries_last_push,
        queries_max_push=state.queries_max_push,
    )

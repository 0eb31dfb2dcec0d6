"""Exact shortest-augmenting-path (Edmonds-Karp) maximum flow.

Residual arcs are scanned in ascending arc-id order (or a caller-supplied
priority order), so the augmenting path picked among the shortest ones is
reproducible. Deleted arcs are masked; ids never shift.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .network import UNBOUNDED, Flow, Network, check_flow


@dataclass(frozen=True)
class MaxFlowResult:
    flow: Flow
    value: Fraction
    min_cut: frozenset[int]


def _num(x: Fraction):
    # integral data stays in int arithmetic, which is much faster than Fraction
    return int(x) if x.denominator == 1 else x


def max_flow(
    net: Network,
    capacity_override: Mapping[int, Fraction] | None = None,
    deleted: Iterable[int] = (),
    order: Sequence[int] | None = None,
) -> MaxFlowResult:
    """Maximum s-t flow with ``deleted`` arcs masked.

    ``capacity_override`` replaces arc capacities; an entry for the dummy arc
    caps the flow value. ``order`` is a permutation of user arc ids giving
    the scan priority (default: ascending ids). If the value cap is what
    binds, ``min_cut`` is ``{dummy_id}``.
    """
    deleted = frozenset(deleted)
    dummy = net.dummy_id
    if dummy in deleted:
        raise ValueError("the dummy arc cannot be deleted")
    override = capacity_override or {}
    s, t = net.source, net.sink

    cap = [0] * (dummy + 1)
    for a in net.arc_ids:
        c = override.get(a, net.arcs[a - 1].capacity)
        cap[a] = 0 if a in deleted else _num(Fraction(c))
    limit = override.get(dummy, UNBOUNDED)
    limit = None if limit is UNBOUNDED else _num(Fraction(limit))

    rank = {a: i for i, a in enumerate(order)} if order is not None else None
    adj: list[list[int]] = [[] for _ in range(net.n + 1)]
    for a in net.arc_ids:
        if a in deleted:
            continue
        tail, head, _ = net.arcs[a - 1]
        adj[tail].append(a)
        adj[head].append(a)
    if rank is not None:
        for lst in adj:
            lst.sort(key=rank.__getitem__)

    flow = [0] * (dummy + 1)
    value = 0
    arcs = net.arcs
    while limit is None or value < limit:
        # parent[v] = (arc, forward?) used to reach v
        parent: list[tuple[int, bool] | None] = [None] * (net.n + 1)
        seen = [False] * (net.n + 1)
        seen[s] = True
        queue = deque([s])
        while queue and not seen[t]:
            u = queue.popleft()
            for a in adj[u]:
                tail, head, _ = arcs[a - 1]
                if tail == u:
                    v, forward, room = head, True, cap[a] - flow[a]
                else:
                    v, forward, room = tail, False, flow[a]
                if room > 0 and not seen[v]:
                    seen[v] = True
                    parent[v] = (a, forward)
                    queue.append(v)
        if not seen[t]:
            break
        path = []
        v = t
        while v != s:
            a, forward = parent[v]
            path.append((a, forward))
            v = arcs[a - 1].tail if forward else arcs[a - 1].head
        delta = min(cap[a] - flow[a] if fwd else flow[a] for a, fwd in path)
        if limit is not None:
            delta = min(delta, limit - value)
        for a, fwd in path:
            flow[a] += delta if fwd else -delta
        value += delta

    flow[dummy] = value
    result_flow = Flow({a: Fraction(flow[a]) for a in range(1, dummy + 1)}, dummy)

    # vertices reachable from s in the final residual graph
    seen = [False] * (net.n + 1)
    seen[s] = True
    queue = deque([s])
    while queue:
        u = queue.popleft()
        for a in adj[u]:
            tail, head, _ = arcs[a - 1]
            if tail == u and cap[a] - flow[a] > 0 and not seen[head]:
                seen[head] = True
                queue.append(head)
            elif head == u and flow[a] > 0 and not seen[tail]:
                seen[tail] = True
                queue.append(tail)
    if seen[t]:
        cut = frozenset({dummy})
    else:
        cut = frozenset(
            a for a in net.arc_ids
            if a not in deleted and seen[arcs[a - 1].tail] and not seen[arcs[a - 1].head]
        )
    return MaxFlowResult(result_flow, Fraction(value), cut)


def residual_value(net: Network, phi: Flow, deleted: Iterable[int], *, check: bool = True) -> Fraction:
    """Best adaptive flow value after deleting ``deleted``.

    This is the maximum flow of the surviving network when every arc, dummy
    included, is bounded by its value under ``phi``. Raises
    :class:`~kamrfp.network.FlowError` for an infeasible ``phi`` unless
    ``check`` is false (callers that validated ``phi`` once already).
    """
    if check:
        check_flow(net, phi)
    return max_flow(net, capacity_override=phi.values, deleted=deleted).value


def min_cut_cardinality(net: Network) -> int:
    """Fewest user arcs whose removal disconnects s from t."""
    unit = {a: Fraction(1) for a in net.arc_ids}
    return int(max_flow(net, capacity_override=unit).value)

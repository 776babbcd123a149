"""Exact integral max-flow / min-cut and min-cost flow primitives.

Networks are tiny in this package (flow amounts never exceed the failure
budget plus one), so the implementations favor exactness and determinism
over asymptotics: shortest augmenting paths for max-flow, successive
shortest paths for min-cost flow.  All arithmetic is integer arithmetic;
the min-cost routine is fully deterministic, returning the
lexicographically smallest per-arc flow vector among the optimal flows.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import NamedTuple

from .core import Infeasible

__all__ = ["Arc", "FlowNetwork", "FlowResult", "max_flow", "min_cost_flow",
           "balanced_flow"]


class Arc(NamedTuple):
    """A directed arc.  ``capacity=None`` means unlimited.

    ``origin`` optionally records the instance edge id this arc models,
    so flow supports can be mapped back to selectable edges.
    """

    tail: int
    head: int
    capacity: int | None
    cost: int = 0
    origin: int | None = None


@dataclass(frozen=True)
class FlowNetwork:
    """A capacitated network, optionally with vertex imbalances.

    ``supplies[v] < 0`` means ``v`` must send out ``-supplies[v]`` units,
    ``supplies[v] > 0`` that it must absorb that many; the vector must
    sum to zero.  Plain s-t queries leave ``supplies`` as ``None``.
    """

    vertex_count: int
    arcs: tuple[Arc, ...]
    supplies: tuple[int, ...] | None = None


@dataclass(frozen=True)
class FlowResult:
    value: int
    flows: tuple[int, ...]
    total_cost: int | None = None
    min_cut: tuple[int, ...] | None = None


def _check_capacities(arcs) -> None:
    for i, a in enumerate(arcs):
        if a.capacity is not None and a.capacity < 0:
            raise ValueError(f"arc {i} has negative capacity")


def _adjacency(net: FlowNetwork) -> list[list[tuple[int, bool]]]:
    # (arc index, is_forward) per vertex, in arc-index order for determinism
    adj: list[list[tuple[int, bool]]] = [[] for _ in range(net.vertex_count)]
    for i, a in enumerate(net.arcs):
        if a.tail == a.head:
            continue
        adj[a.tail].append((i, True))
        adj[a.head].append((i, False))
    return adj


def max_flow(net: FlowNetwork, s: int, t: int, cap_at: int) -> FlowResult:
    """Maximum s-t flow, never pushing more than ``cap_at`` units.

    Returns ``min(true max flow, cap_at)``.  When the returned value is
    below ``cap_at`` the flow is maximum and ``min_cut`` lists the
    saturated forward arcs of a minimum cut (whose capacities sum to the
    flow value); otherwise ``min_cut`` is ``None``.
    """
    if s == t:
        raise ValueError("max_flow requires distinct terminals")
    if cap_at < 0:
        raise ValueError("cap_at must be non-negative")
    arcs = net.arcs
    _check_capacities(arcs)
    # Unlimited arcs can never carry more than cap_at units here.
    caps = [cap_at if a.capacity is None else a.capacity for a in arcs]
    flows = [0] * len(arcs)
    adj = _adjacency(net)
    value = 0
    while value < cap_at:
        parent: dict[int, tuple[int, bool]] = {s: (-1, True)}
        queue = deque([s])
        while queue and t not in parent:
            u = queue.popleft()
            for idx, fwd in adj[u]:
                a = arcs[idx]
                if fwd:
                    v, residual = a.head, caps[idx] - flows[idx]
                else:
                    v, residual = a.tail, flows[idx]
                if v not in parent and residual > 0:
                    parent[v] = (idx, fwd)
                    queue.append(v)
        if t not in parent:
            break
        # Bottleneck along the found path, bounded by the remaining budget.
        bottleneck = cap_at - value
        v = t
        while v != s:
            idx, fwd = parent[v]
            if fwd:
                bottleneck = min(bottleneck, caps[idx] - flows[idx])
                v = arcs[idx].tail
            else:
                bottleneck = min(bottleneck, flows[idx])
                v = arcs[idx].head
        v = t
        while v != s:
            idx, fwd = parent[v]
            if fwd:
                flows[idx] += bottleneck
                v = arcs[idx].tail
            else:
                flows[idx] -= bottleneck
                v = arcs[idx].head
        value += bottleneck
    min_cut = None
    if value < cap_at:
        seen = {s}
        stack = [s]
        while stack:
            u = stack.pop()
            for idx, fwd in adj[u]:
                a = arcs[idx]
                v, residual = (a.head, caps[idx] - flows[idx]) if fwd else (a.tail, flows[idx])
                if v not in seen and residual > 0:
                    seen.add(v)
                    stack.append(v)
        min_cut = tuple(i for i, a in enumerate(arcs)
                        if a.tail in seen and a.head not in seen and a.tail != a.head)
    return FlowResult(value=value, flows=tuple(flows), min_cut=min_cut)


def min_cost_flow(net: FlowNetwork, s: int, t: int, amount: int) -> FlowResult:
    """Integral s-t flow of exactly ``amount`` units of minimum total cost.

    Among all minimum-cost flows, returns the one whose per-arc flow
    vector is lexicographically smallest by arc index.  This is achieved
    by augmenting along paths that are shortest for the cost vector
    ``cost * W + B**(m - i)``: the huge primary weight ``W`` keeps the
    true objective dominant and the per-arc powers of ``B`` break ties
    exactly like a lexicographic comparison of the flow vector.

    Raises:
        Infeasible: fewer than ``amount`` units fit; ``max_achievable``
            carries the true maximum.
    """
    if s == t:
        raise ValueError("min_cost_flow requires distinct terminals")
    if amount < 0:
        raise ValueError("amount must be non-negative")
    arcs = net.arcs
    _check_capacities(arcs)
    m = len(arcs)
    caps = [amount if a.capacity is None else a.capacity for a in arcs]
    for i, a in enumerate(arcs):
        if a.cost < 0:
            raise ValueError(f"arc {i} has negative cost")
    base = amount + 2
    big_w = base ** (m + 2)
    packed = [a.cost * big_w + base ** (m - i) for i, a in enumerate(arcs)]
    flows = [0] * m
    adj = _adjacency(net)
    for pushed in range(amount):
        # Bellman-Ford; residual costs can be negative but no negative
        # cycle exists while the current flow is optimal for its value.
        dist: list[int | None] = [None] * net.vertex_count
        dist[s] = 0
        parent: list[tuple[int, bool] | None] = [None] * net.vertex_count
        for _ in range(net.vertex_count):
            changed = False
            for i, a in enumerate(arcs):
                if a.tail == a.head:
                    continue
                du = dist[a.tail]
                if du is not None and flows[i] < caps[i]:
                    nd = du + packed[i]
                    if dist[a.head] is None or nd < dist[a.head]:
                        dist[a.head] = nd
                        parent[a.head] = (i, True)
                        changed = True
                dv = dist[a.head]
                if dv is not None and flows[i] > 0:
                    nd = dv - packed[i]
                    if dist[a.tail] is None or nd < dist[a.tail]:
                        dist[a.tail] = nd
                        parent[a.tail] = (i, False)
                        changed = True
            if not changed:
                break
        if dist[t] is None:
            raise Infeasible(
                f"only {pushed} of {amount} flow units fit",
                max_achievable=pushed)
        v = t
        while v != s:
            idx, fwd = parent[v]
            if fwd:
                flows[idx] += 1
                v = arcs[idx].tail
            else:
                flows[idx] -= 1
                v = arcs[idx].head
    total = sum(a.cost * f for a, f in zip(arcs, flows))
    return FlowResult(value=amount, flows=tuple(flows), total_cost=total)


def balanced_flow(net: FlowNetwork) -> FlowResult | None:
    """Integral flow meeting the network's vertex imbalances, or ``None``.

    Reduces to max-flow through a super source and sink.  The returned
    flow vector covers only the original arcs.
    """
    if net.supplies is None:
        raise ValueError("network carries no supplies vector")
    if sum(net.supplies) != 0:
        raise ValueError("supplies must sum to zero")
    need = sum(b for b in net.supplies if b > 0)
    if need == 0:
        return FlowResult(value=0, flows=(0,) * len(net.arcs))
    n = net.vertex_count
    super_s, super_t = n, n + 1
    arcs = list(net.arcs)
    for v, b in enumerate(net.supplies):
        if b < 0:
            arcs.append(Arc(super_s, v, -b))
        elif b > 0:
            arcs.append(Arc(v, super_t, b))
    big = FlowNetwork(n + 2, tuple(arcs))
    result = max_flow(big, super_s, super_t, need)
    if result.value < need:
        return None
    return FlowResult(value=need, flows=result.flows[:len(net.arcs)])

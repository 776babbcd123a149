"""Exact fractional relaxation and integrality-gap instrumentation.

The relaxation replaces edge purchases with capacities ``x`` in [0, 1]
and asks that after any failure of at most k faulty edges a full unit of
s-t flow still fits.  Desk-scale instances are solved exactly: the
per-scenario flow conditions collapse, cut by cut, into ``sum of x over
the cut minus its k largest faulty values >= 1``, the inner maximum is
linearized with one threshold variable per cut, and the resulting LP is
handed to the rational simplex.  No floating point anywhere.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import oracle, simplex
from .core import (BadParameters, FTPError, Infeasible, Instance,
                   build_instance, is_feasible)

__all__ = ["TooLargeForExactLP", "CapacityVector", "GapReport", "solve_frac",
           "gap_family", "rounding_vector", "gap_report",
           "fractional_max_flow", "enumerate_cut_edge_sets"]

DEFAULT_VAR_CAP = 50_000
MAX_CUT_ENUMERATION = 2**18
MINIMALITY_FILTER_LIMIT = 4000


class TooLargeForExactLP(FTPError):
    """The exact LP would exceed the configured size caps."""


@dataclass(frozen=True)
class CapacityVector:
    """A fractional solution: exact per-edge capacities and their cost."""

    x: tuple[Fraction, ...]
    value: Fraction


@dataclass(frozen=True)
class GapReport:
    """Integral versus fractional optimum on one instance."""

    integral_opt: int
    fractional_opt: Fraction
    ratio: Fraction


def enumerate_cut_edge_sets(instance: Instance) -> list[tuple[int, ...]]:
    """Inclusion-minimal s-t cut edge sets, deduplicated, sorted.

    Every s-side vertex subset is enumerated, so this is exponential in
    the vertex count; callers cap sizes first.
    """
    n = instance.vertex_count
    s, t = instance.s, instance.t
    others = [v for v in range(n) if v not in (s, t)]
    cuts: set[tuple[int, ...]] = set()
    for mask in range(2 ** len(others)):
        side = {s}
        for i, v in enumerate(others):
            if mask >> i & 1:
                side.add(v)
        crossing = []
        for e in instance.edges:
            if e.u == e.v:
                continue
            if instance.directed:
                if e.u in side and e.v not in side:
                    crossing.append(e.id)
            elif (e.u in side) != (e.v in side):
                crossing.append(e.id)
        cuts.add(tuple(sorted(crossing)))
    # Any cut containing another is implied by it.  The pairwise filter
    # is quadratic, so past a few thousand distinct cuts the redundant
    # rows are kept instead (they are sound, just wasteful).
    if len(cuts) > MINIMALITY_FILTER_LIMIT:
        return sorted(cuts)
    as_sets = {c: frozenset(c) for c in cuts}
    minimal = [c for c in cuts
               if not any(other != c and as_sets[other] < as_sets[c] for other in cuts)]
    return sorted(minimal)


def solve_frac(instance: Instance, var_cap: int = DEFAULT_VAR_CAP) -> CapacityVector:
    """Exact optimum of the fractional relaxation.

    Raises:
        Infeasible: even buying every edge is infeasible.
        TooLargeForExactLP: the cut enumeration or LP would be too big.
    """
    m = len(instance.edges)
    if instance.s == instance.t:
        return CapacityVector((Fraction(0),) * m, Fraction(0))
    if not is_feasible(instance, range(m)):
        raise Infeasible("instance is infeasible even with every edge bought")
    if 2 ** max(0, instance.vertex_count - 2) > MAX_CUT_ENUMERATION:
        raise TooLargeForExactLP(
            f"{instance.vertex_count} vertices give too many cuts to enumerate")
    cuts = enumerate_cut_edge_sets(instance)
    k = instance.k
    faulty = instance.faulty_ids

    num_vars = m
    rows: list[tuple[dict[int, Fraction], str, int]] = []
    one = Fraction(1)
    for cut in cuts:
        cut_faulty = [eid for eid in cut if eid in faulty]
        if len(cut_faulty) <= k:
            # Every faulty edge of this cut can fail at once.
            survivors = [eid for eid in cut if eid not in faulty]
            rows.append(({eid: one for eid in survivors}, simplex.GREATER_EQUAL, 1))
        else:
            # sum(x over cut) - (k largest faulty x) >= 1, linearized with
            # a threshold theta and overshoot variables z >= x - theta.
            theta = num_vars
            z_of = {eid: num_vars + 1 + i for i, eid in enumerate(cut_faulty)}
            num_vars += 1 + len(cut_faulty)
            main: dict[int, Fraction] = {eid: one for eid in cut}
            main[theta] = Fraction(-k)
            for eid in cut_faulty:
                main[z_of[eid]] = -one
            rows.append((main, simplex.GREATER_EQUAL, 1))
            for eid in cut_faulty:
                rows.append(({z_of[eid]: one, theta: one, eid: -one},
                             simplex.GREATER_EQUAL, 0))
    if num_vars > var_cap:
        raise TooLargeForExactLP(f"{num_vars} LP variables exceed the cap of {var_cap}")

    objective = {e.id: Fraction(e.w) for e in instance.edges}
    solution, value = simplex.solve_lp(objective, rows, num_vars)
    # Capacities above one are never needed (a unit of flow never loads
    # an edge beyond one); they can only appear on zero-cost edges.
    x = tuple(min(solution[e.id], one) for e in instance.edges)
    clamped_value = sum(Fraction(e.w) * x[e.id] for e in instance.edges)
    assert clamped_value == value
    return CapacityVector(x, value)


def gap_family(D: int, k: int) -> Instance:
    """The worst-case family: D parallel faulty unit edges, budget k.

    Its integral optimum is k+1 while the fractional optimum is
    D/(D-k), so the ratio approaches k+1 as D grows.

    Raises:
        BadParameters: ``D < k+1`` (the family would be infeasible).
    """
    if k < 0 or D < k + 1:
        raise BadParameters(f"need D >= k+1, got D={D}, k={k}")
    return build_instance(False, 2, 0, 1, k, [(0, 1, 1, True)] * D)


def rounding_vector(x: CapacityVector, instance: Instance) -> tuple[Fraction, ...]:
    """Scale a fractional solution so every cut carries k+1 capacity.

    Safe edges are scaled by k+1 outright; faulty edges are scaled but
    clipped at one.  The result dominates an integral (k+1)-unit flow,
    which is how the k+1 bound on the integrality gap arises.
    """
    k = instance.k
    scale = Fraction(k + 1)
    out = []
    for e in instance.edges:
        xe = x.x[e.id]
        ye = scale * xe
        if e.faulty:
            ye = min(Fraction(1), ye)
        out.append(ye)
    return tuple(out)


def fractional_max_flow(instance: Instance, capacities, banned=frozenset()) -> Fraction:
    """Max s-t flow under rational per-edge capacities (failed edges banned).

    Plain augmenting paths; exact Fractions throughout.  Used to verify
    fractional solutions scenario by scenario.
    """
    if instance.s == instance.t:
        raise ValueError("terminals must differ")
    arcs: list[list] = []  # [tail, head, cap, flow]
    for e in instance.edges:
        if e.id in banned or e.u == e.v:
            continue
        cap = Fraction(capacities[e.id])
        if cap <= 0:
            continue
        arcs.append([e.u, e.v, cap, Fraction(0)])
        if not instance.directed:
            arcs.append([e.v, e.u, cap, Fraction(0)])
    adj: list[list[tuple[int, bool]]] = [[] for _ in range(instance.vertex_count)]
    for i, a in enumerate(arcs):
        adj[a[0]].append((i, True))
        adj[a[1]].append((i, False))
    total = Fraction(0)
    while True:
        parent: dict[int, tuple[int, bool]] = {instance.s: (-1, True)}
        queue = [instance.s]
        qi = 0
        while qi < len(queue) and instance.t not in parent:
            u = queue[qi]
            qi += 1
            for idx, fwd in adj[u]:
                a = arcs[idx]
                v, residual = (a[1], a[2] - a[3]) if fwd else (a[0], a[3])
                if v not in parent and residual > 0:
                    parent[v] = (idx, fwd)
                    queue.append(v)
        if instance.t not in parent:
            return total
        push = None
        v = instance.t
        while v != instance.s:
            idx, fwd = parent[v]
            a = arcs[idx]
            residual = a[2] - a[3] if fwd else a[3]
            push = residual if push is None else min(push, residual)
            v = a[0] if fwd else a[1]
        v = instance.t
        while v != instance.s:
            idx, fwd = parent[v]
            arcs[idx][3] += push if fwd else -push
            v = arcs[idx][0] if fwd else arcs[idx][1]
        total += push


def gap_report(D: int, k: int, var_cap: int = DEFAULT_VAR_CAP) -> GapReport:
    """Exact integral and fractional optima for the worst-case family."""
    instance = gap_family(D, k)
    frac = solve_frac(instance, var_cap)
    integral = oracle.brute_force_opt(instance, edge_cap=max(oracle.DEFAULT_EDGE_CAP, D))
    assert integral.best is not None
    ratio = Fraction(integral.best.cost) / frac.value
    return GapReport(integral.best.cost, frac.value, ratio)

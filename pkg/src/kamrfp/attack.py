"""Exhaustive attacker and independent cross-check oracles."""

from __future__ import annotations

import itertools
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

from .maxflow import max_flow, residual_value
from .network import Flow, Network, check_flow

DEFAULT_BUDGET = 10**6
DEFAULT_TOLERANCE = Fraction(1, 10**6)


class BudgetExceeded(RuntimeError):
    def __init__(self, count: int, budget: int):
        self.count, self.budget = count, budget
        super().__init__(f"C(m,k) = {count} attack subsets exceed the enumeration budget {budget}")


@dataclass(frozen=True)
class AttackReport:
    attacked_flow_value: Fraction
    worst_attack: tuple[int, ...]
    residual: Fraction
    subsets_evaluated: int

    @property
    def loss(self) -> Fraction:
        return self.attacked_flow_value - self.residual


def _scan(net: Network, phi: Flow, subsets) -> tuple[Fraction, tuple[int, ...], int]:
    """Lexicographically first minimizer among ``subsets`` (given in order)."""
    support = phi.support()
    cache: dict[frozenset[int], Fraction] = {}
    best = None
    count = 0
    for subset in subsets:
        count += 1
        # arcs without flow have zero adaptive capacity; deleting them changes nothing
        key = support.intersection(subset)
        res = cache.get(key)
        if res is None:
            res = residual_value(net, phi, key, check=False) if key else phi.value
            cache[key] = res
        if best is None or res < best[0]:
            best = (res, subset)
    return best[0], best[1], count


def _scan_chunk(args):
    net, phi, k, start, stop = args
    subsets = itertools.islice(itertools.combinations(net.arc_ids, k), start, stop)
    return _scan(net, phi, subsets)


def worst_case(
    net: Network, phi: Flow, k: int, budget: int | None = None, workers: int = 1
) -> AttackReport:
    """Minimum adaptive residual value over every k-subset of user arcs.

    Ties resolve to the lexicographically smallest subset, also when the
    enumeration is split across ``workers`` processes.
    """
    if not 1 <= k <= net.m:
        raise ValueError(f"k must lie in 1..{net.m}, got {k}")
    budget = DEFAULT_BUDGET if budget is None else budget
    count = math.comb(net.m, k)
    if count > budget:
        raise BudgetExceeded(count, budget)
    check_flow(net, phi)

    if workers <= 1 or count < 2 * workers:
        res, subset, seen = _scan(net, phi, itertools.combinations(net.arc_ids, k))
    else:
        step = -(-count // workers)
        jobs = [(net, phi, k, lo, min(lo + step, count)) for lo in range(0, count, step)]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_scan_chunk, jobs))
        res, subset, _ = min(parts, key=lambda p: (p[0], p[1]))
        seen = sum(p[2] for p in parts)
    return AttackReport(phi.value, subset, res, seen)


def certify(net: Network, sol, k: int, budget: int | None = None, workers: int = 1) -> bool:
    """Check that ``sol.flow`` really guarantees ``sol.theta`` against every
    k-subset attack, and stamp ``sol.certified`` / ``sol.worst_attack``."""
    if sol.flow.value == 0:
        sol.certified = sol.theta == 0
        sol.worst_attack = ()
        return sol.certified
    report = worst_case(net, sol.flow, k, budget=budget, workers=workers)
    sol.worst_attack = report.worst_attack
    sol.certified = report.residual == sol.theta
    return sol.certified


def k1_bisection_oracle(net: Network, tolerance: Fraction = DEFAULT_TOLERANCE) -> Fraction:
    """Approximate the smallest possible maximum arc flow over all maximum flows.

    Bisects ``lam`` on ``[0, F*]``, testing whether capping every user arc at
    ``min(c_a, lam)`` still admits value ``F*``. The result is an upper end of
    the final bracket, within ``tolerance`` of the true breakpoint.
    """
    fstar = max_flow(net).value
    if fstar <= 0:
        raise ValueError("the oracle needs a positive maximum flow value")
    tolerance = Fraction(tolerance)
    lo, hi = Fraction(0), fstar
    while hi - lo > tolerance:
        mid = (lo + hi) / 2
        capped = {a: min(net.capacity(a), mid) for a in net.arc_ids}
        if max_flow(net, capacity_override=capped).value == fstar:
            hi = mid
        else:
            lo = mid
    return hi

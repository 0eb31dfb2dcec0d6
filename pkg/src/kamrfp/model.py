"""Scenario-expanded linear program for adaptive max flow under k arc losses.

For every k-subset ``A_i`` of user arcs the model carries its own adaptive
flow block ``phi^i`` on the surviving arcs, bounded arc-wise by the initial
flow ``phi``. ``theta`` lower-bounds every ``phi^i_ts``, so at the optimum it
is the guaranteed residual value of ``phi``.
"""

from __future__ import annotations

import itertools
import math
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator

from .maxflow import max_flow
from .network import Flow, Network, check_flow, incidence
from .simplex import LinearProgram, LPStatus, solve_lp

TWO_PHASE = "two_phase"
COMBINED = "combined"
MODES = (TWO_PHASE, COMBINED)

DEFAULT_MAX_VARS = 50_000


class ModelTooLarge(ValueError):
    """Refused build: scenario variables exceed the configured cap."""


class InvariantViolation(RuntimeError):
    """A property that must hold for every valid instance did not."""


class ScenarioIndex:
    """All k-subsets of user arcs in lexicographic order, indexed both ways."""

    def __init__(self, m: int, k: int):
        if not 1 <= k <= m:
            raise ValueError(f"k must lie in 1..{m}, got {k}")
        self.m, self.k = m, k
        self.subsets: list[tuple[int, ...]] = list(itertools.combinations(range(1, m + 1), k))
        self._index = {s: i for i, s in enumerate(self.subsets)}

    def __len__(self) -> int:
        return len(self.subsets)

    def __iter__(self) -> Iterator[tuple[int, ...]]:
        return iter(self.subsets)

    def __getitem__(self, i: int) -> tuple[int, ...]:
        return self.subsets[i]

    def index(self, subset) -> int:
        return self._index[tuple(sorted(subset))]


def variable_count(m: int, k: int) -> int:
    """(m+1) flow variables, theta, and m+1-k per scenario."""
    return (m + 1) + 1 + math.comb(m, k) * (m + 1 - k)


@dataclass
class ModelMap:
    phi: dict[int, int]
    theta: int
    scenario_vars: dict[tuple[int, int], int]
    rows: dict[str, list[int]] = field(default_factory=dict)
    scenarios: ScenarioIndex | None = None

    @property
    def num_vars(self) -> int:
        return len(self.phi) + 1 + len(self.scenario_vars)


def build_model(
    net: Network,
    k: int,
    mode: str = TWO_PHASE,
    fstar: Fraction | None = None,
    max_vars: int = DEFAULT_MAX_VARS,
) -> tuple[LinearProgram, ModelMap]:
    m = net.m
    if not 1 <= k <= m:
        raise ValueError(f"k must lie in 1..{m} (number of destroyable arcs), got {k}")
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}")
    if mode == TWO_PHASE and fstar is None:
        raise ValueError("two_phase mode needs the maximum flow value fstar")
    scen_vars = math.comb(m, k) * (m + 1 - k)
    if scen_vars > max_vars:
        raise ModelTooLarge(
            f"C({m},{k})*({m}+1-{k}) = {scen_vars} scenario variables exceed the cap of "
            f"{max_vars}; the model grows as O(m^(k+1))"
        )

    scenarios = ScenarioIndex(m, k)
    dummy = net.dummy_id
    inc = incidence(net).matrix
    names = [f"phi[{a}]" for a in range(1, dummy + 1)] + ["theta"]
    phi = {a: a - 1 for a in range(1, dummy + 1)}
    theta = dummy
    svars: dict[tuple[int, int], int] = {}
    for i, subset in enumerate(scenarios):
        gone = set(subset)
        for a in range(1, dummy + 1):
            if a not in gone:
                svars[i, a] = len(names)
                names.append(f"phi^{i}[{a}]")

    lp = LinearProgram(len(names), names=names)
    rows: dict[str, list[int]] = {
        "conservation": [], "capacity": [], "value": [],
        "scenario_conservation": [], "coupling": [], "theta": [],
    }

    def conservation(var_of: dict[int, int]) -> list[int]:
        out = []
        for v in range(net.n):
            coeffs = {j: int(inc[v, a - 1]) for a, j in var_of.items() if inc[v, a - 1]}
            out.append(lp.add_constraint(coeffs, "=", 0))
        return out

    rows["conservation"] = conservation(phi)
    for a in net.arc_ids:
        rows["capacity"].append(lp.add_constraint({phi[a]: 1}, "<=", net.capacity(a)))
    for i, subset in enumerate(scenarios):
        block = {a: svars[i, a] for a in range(1, dummy + 1) if a not in subset}
        rows["scenario_conservation"] += conservation(block)
        for a, j in block.items():
            rows["coupling"].append(lp.add_constraint({j: 1, phi[a]: -1}, "<=", 0))
        rows["theta"].append(lp.add_constraint({block[dummy]: 1, theta: -1}, ">=", 0))

    if mode == TWO_PHASE:
        rows["value"].append(lp.add_constraint({phi[dummy]: 1}, "=", fstar))
        lp.objective = {theta: Fraction(1)}
    else:
        lp.objective = {phi[dummy]: Fraction(1), theta: Fraction(1)}
    return lp, ModelMap(phi, theta, svars, rows, scenarios)


@dataclass
class Solution:
    """Optimal initial flow and its guaranteed residual value ``theta``.

    ``certified`` and ``worst_attack`` are stamped by
    :func:`kamrfp.attack.certify`; ``worst_attack`` is None until then.
    """

    flow: Flow
    fstar: Fraction
    theta: Fraction
    k: int
    objective_mode: str
    certified: bool = False
    worst_attack: tuple[int, ...] | None = None
    variables: int = 0
    lp_method: str | None = None
    timings_ms: dict[str, float] = field(default_factory=dict)

    @property
    def loss(self) -> Fraction:
        return self.fstar - self.theta


def solve_kamrfp(
    net: Network,
    k: int,
    mode: str = TWO_PHASE,
    *,
    certify: bool = True,
    max_vars: int = DEFAULT_MAX_VARS,
    lp_method: str = "auto",
    budget: int | None = None,
    refine: bool = True,
) -> Solution:
    """Maximum flow minimizing the worst loss over all k-arc deletions.

    With ``refine`` (default) a second solve keeps ``theta`` and the flow
    value at their optima and maximizes the summed residual value over all
    scenarios, which picks a deterministic, less degenerate optimal flow.
    """
    from . import attack

    if not 1 <= k <= net.m:
        raise ValueError(f"k must lie in 1..{net.m} (number of destroyable arcs), got {k}")
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}")
    timings: dict[str, float] = {}
    clock = time.perf_counter()

    base = max_flow(net)
    fstar = base.value
    timings["fstar"] = (time.perf_counter() - clock) * 1e3
    nvars = variable_count(net.m, k)

    if fstar == 0:
        sol = Solution(base.flow, fstar, Fraction(0), k, mode, variables=nvars, timings_ms=timings)
        sol.certified, sol.worst_attack = True, ()
        return sol

    clock = time.perf_counter()
    lp, mp = build_model(net, k, mode, fstar if mode == TWO_PHASE else None, max_vars)
    timings["build"] = (time.perf_counter() - clock) * 1e3

    clock = time.perf_counter()
    out = solve_lp(lp, lp_method)
    timings["solve"] = (time.perf_counter() - clock) * 1e3
    if out.status is not LPStatus.OPTIMAL:
        raise InvariantViolation(f"k-AMRFP model reported {out.status.value}")

    flow = Flow({a: out.values[j] for a, j in mp.phi.items()}, net.dummy_id)
    check_flow(net, flow)
    if flow.value != fstar:
        raise InvariantViolation(
            f"{mode} model returned flow value {flow.value}, maximum is {fstar}"
        )
    theta = out.values[mp.theta]
    if not 0 <= theta <= fstar:
        raise InvariantViolation(f"theta {theta} outside [0, {fstar}]")

    if refine:
        clock = time.perf_counter()
        lp.add_constraint({mp.theta: 1}, "=", theta)
        if mode == COMBINED:
            lp.add_constraint({mp.phi[net.dummy_id]: 1}, "=", fstar)
        lp.objective = {mp.scenario_vars[i, net.dummy_id]: Fraction(1) for i in range(len(mp.scenarios))}
        out = solve_lp(lp, lp_method)
        if out.status is not LPStatus.OPTIMAL:
            raise InvariantViolation(f"tie-break model reported {out.status.value}")
        flow = Flow({a: out.values[j] for a, j in mp.phi.items()}, net.dummy_id)
        check_flow(net, flow)
        timings["refine"] = (time.perf_counter() - clock) * 1e3

    sol = Solution(flow, fstar, theta, k, mode, variables=mp.num_vars,
                   lp_method=out.method, timings_ms=timings)
    if certify:
        clock = time.perf_counter()
        try:
            attack.certify(net, sol, k, budget=budget)
        except attack.BudgetExceeded:
            sol.certified = False
        timings["certify"] = (time.perf_counter() - clock) * 1e3
    return sol

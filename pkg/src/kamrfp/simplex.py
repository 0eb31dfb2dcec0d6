"""Exact linear programming over the rationals.

Two solve routes share one contract:

* ``exact``: two-phase tableau simplex on :class:`Fraction` data with Bland's
  rule (lowest eligible entering column, ratio ties broken by lowest basic
  variable index). No tolerance anywhere.
* ``guided``: HiGHS finds a primal/dual pair in floating point; both are
  snapped to nearby small-denominator rationals and accepted only if they
  form an exact optimality certificate (primal feasible, dual feasible,
  equal objectives). Anything short of that falls back to ``exact``.

``auto`` picks ``exact`` for small tableaus and ``guided`` otherwise.
"""

from __future__ import annotations

import enum
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

import numpy as np
import scipy.optimize
import scipy.sparse

from .network import format_rational

log = logging.getLogger(__name__)

RELATIONS = ("<=", "=", ">=")

#: ``auto`` uses the exact tableau up to this many (rows x columns) cells.
EXACT_CELL_LIMIT = 60_000


class LPStatus(enum.Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"


@dataclass(frozen=True)
class Constraint:
    coeffs: Mapping[int, Fraction]
    relation: str
    rhs: Fraction


@dataclass
class LinearProgram:
    """``maximize objective . x`` subject to constraints, ``0 <= x <= upper``."""

    num_vars: int
    objective: dict[int, Fraction] = field(default_factory=dict)
    constraints: list[Constraint] = field(default_factory=list)
    upper: dict[int, Fraction] = field(default_factory=dict)
    names: list[str] = field(default_factory=list)

    def add_constraint(self, coeffs: Mapping[int, Fraction | int], relation: str, rhs=0) -> int:
        if relation not in RELATIONS:
            raise ValueError(f"relation must be one of {RELATIONS}")
        clean = {j: Fraction(v) for j, v in coeffs.items() if v != 0}
        for j in clean:
            if not 0 <= j < self.num_vars:
                raise IndexError(f"variable {j} out of range")
        self.constraints.append(Constraint(clean, relation, Fraction(rhs)))
        return len(self.constraints) - 1

    def name(self, j: int) -> str:
        return self.names[j] if j < len(self.names) else f"x{j}"

    def check(self, x) -> list[str]:
        """Exact violations of ``x``; empty when feasible."""
        bad = []
        for j in range(self.num_vars):
            if x[j] < 0:
                bad.append(f"{self.name(j)} < 0")
            if j in self.upper and x[j] > self.upper[j]:
                bad.append(f"{self.name(j)} above its upper bound")
        for i, con in enumerate(self.constraints):
            lhs = sum((v * x[j] for j, v in con.coeffs.items()), Fraction(0))
            ok = {"<=": lhs <= con.rhs, "=": lhs == con.rhs, ">=": lhs >= con.rhs}[con.relation]
            if not ok:
                bad.append(f"row {i}")
        return bad

    def objective_value(self, x) -> Fraction:
        return sum((v * x[j] for j, v in self.objective.items()), Fraction(0))


@dataclass(frozen=True)
class LPOutcome:
    status: LPStatus
    values: tuple[Fraction, ...] | None = None
    objective: Fraction | None = None
    method: str = "exact"
    pivots: int = 0


def lp_to_text(lp: LinearProgram) -> str:
    """Human-readable dump, one constraint per line, rationals as ``p/q``."""

    def terms(coeffs):
        if not coeffs:
            return "0"
        return " + ".join(f"{format_rational(v)}*{lp.name(j)}" for j, v in sorted(coeffs.items()))

    lines = [f"max: {terms(lp.objective)}"]
    for i, con in enumerate(lp.constraints):
        lines.append(f"r{i}: {terms(con.coeffs)} {con.relation} {format_rational(con.rhs)}")
    for j, u in sorted(lp.upper.items()):
        lines.append(f"bound: {lp.name(j)} <= {format_rational(u)}")
    return "\n".join(lines) + "\n"


def solve_lp(lp: LinearProgram, method: str = "auto") -> LPOutcome:
    if method == "auto":
        rows = len(lp.constraints) + len(lp.upper)
        method = "exact" if rows * (lp.num_vars + 2 * rows) <= EXACT_CELL_LIMIT else "guided"
    if method == "exact":
        return _Tableau(lp).solve()
    if method == "guided":
        outcome = _solve_guided(lp)
        if outcome is not None:
            return outcome
        log.warning("float-guided certificate failed; falling back to exact simplex")
        return _Tableau(lp).solve()
    raise ValueError(f"unknown LP method {method!r}")


class _Tableau:
    """Sparse-row tableau; each row is ``{column: coefficient}``."""

    def __init__(self, lp: LinearProgram):
        self.lp = lp
        n = lp.num_vars
        rows: list[tuple[dict[int, Fraction], str, Fraction]] = [
            (dict(c.coeffs), c.relation, c.rhs) for c in lp.constraints
        ]
        rows += [({j: Fraction(1)}, "<=", u) for j, u in sorted(lp.upper.items())]

        self.rows: list[dict[int, Fraction]] = []
        self.rhs: list[Fraction] = []
        self.basis: list[int] = []
        col = n
        pending_art = []
        for coeffs, rel, b in rows:
            if b < 0:
                coeffs = {j: -v for j, v in coeffs.items()}
                b = -b
                rel = {"<=": ">=", ">=": "<=", "=": "="}[rel]
            row = dict(coeffs)
            if rel == "<=":
                row[col] = Fraction(1)
                self.basis.append(col)
                col += 1
            else:
                if rel == ">=":
                    row[col] = Fraction(-1)
                    col += 1
                self.basis.append(-1)
                pending_art.append(len(self.rows))
            self.rows.append(row)
            self.rhs.append(b)
        self.art_start = col
        for r in pending_art:
            self.rows[r][col] = Fraction(1)
            self.basis[r] = col
            col += 1
        self.ncols = col
        self.pivots = 0

    def _pivot(self, r: int, j: int, cost: dict[int, Fraction], obj: list[Fraction]) -> None:
        prow = self.rows[r]
        piv = prow[j]
        if piv != 1:
            for k in prow:
                prow[k] /= piv
            self.rhs[r] /= piv
        items = list(prow.items())
        b = self.rhs[r]
        for i, row in enumerate(self.rows):
            if i == r:
                continue
            f = row.get(j)
            if f is None:
                continue
            for k, v in items:
                nv = row.get(k, 0) - f * v
                if nv:
                    row[k] = nv
                else:
                    row.pop(k, None)
            self.rhs[i] -= f * b
        f = cost.get(j)
        if f:
            for k, v in items:
                nv = cost.get(k, 0) - f * v
                if nv:
                    cost[k] = nv
                else:
                    cost.pop(k, None)
            obj[0] += f * b
        self.basis[r] = j
        self.pivots += 1

    def _run(self, cost: dict[int, Fraction], obj: list[Fraction], allowed: int) -> bool:
        """Bland's rule until optimal (True) or unbounded (False)."""
        while True:
            entering = min((k for k, v in cost.items() if v > 0 and k < allowed), default=None)
            if entering is None:
                return True
            best = None
            for i, row in enumerate(self.rows):
                a = row.get(entering)
                if a is not None and a > 0:
                    key = (self.rhs[i] / a, self.basis[i])
                    if best is None or key < best[0]:
                        best = (key, i)
            if best is None:
                return False
            self._pivot(best[1], entering, cost, obj)

    def solve(self) -> LPOutcome:
        # phase 1: maximize -(sum of artificials)
        cost: dict[int, Fraction] = {}
        obj = [Fraction(0)]
        for i, bv in enumerate(self.basis):
            if bv >= self.art_start:
                for k, v in self.rows[i].items():
                    if k < self.art_start:
                        cost[k] = cost.get(k, 0) + v
                obj[0] -= self.rhs[i]
        cost = {k: v for k, v in cost.items() if v}
        self._run(cost, obj, self.ncols)
        if obj[0] < 0:
            return LPOutcome(LPStatus.INFEASIBLE, method="exact", pivots=self.pivots)

        # drive zero-level artificials out of the basis; drop redundant rows
        i = 0
        while i < len(self.rows):
            if self.basis[i] >= self.art_start:
                j = min((k for k in self.rows[i] if k < self.art_start), default=None)
                if j is None:
                    del self.rows[i], self.rhs[i], self.basis[i]
                    continue
                self._pivot(i, j, {}, [Fraction(0)])
            i += 1
        for row in self.rows:
            for k in [k for k in row if k >= self.art_start]:
                del row[k]

        # phase 2
        c = self.lp.objective
        cost = {k: Fraction(v) for k, v in c.items() if v}
        obj = [Fraction(0)]
        for i, bv in enumerate(self.basis):
            cb = c.get(bv, 0)
            if cb:
                for k, v in self.rows[i].items():
                    nv = cost.get(k, 0) - cb * v
                    if nv:
                        cost[k] = nv
                    else:
                        cost.pop(k, None)
                obj[0] += cb * self.rhs[i]
        if not self._run(cost, obj, self.art_start):
            return LPOutcome(LPStatus.UNBOUNDED, method="exact", pivots=self.pivots)

        x = [Fraction(0)] * self.lp.num_vars
        for i, bv in enumerate(self.basis):
            if bv < self.lp.num_vars:
                x[bv] = self.rhs[i]
        return LPOutcome(LPStatus.OPTIMAL, tuple(x), obj[0], "exact", self.pivots)


# --- float-guided, exactly certified route ---------------------------------


def snap(v: float, rel_tol: float = 1e-7) -> Fraction | None:
    """Smallest-denominator rational within ``rel_tol`` of ``v``, or None."""
    if not np.isfinite(v):
        return None
    tol = rel_tol * max(1.0, abs(v))
    for limit in (1, 10, 100, 1_000, 10_000, 100_000, 1_000_000):
        f = Fraction(v).limit_denominator(limit)
        if abs(float(f) - v) <= tol:
            return f
    return None


def _solve_guided(lp: LinearProgram) -> LPOutcome | None:
    n = lp.num_vars
    ub_rows: list[tuple[Mapping[int, Fraction], Fraction]] = []
    eq_rows: list[tuple[Mapping[int, Fraction], Fraction]] = []
    for con in lp.constraints:
        if con.relation == "=":
            eq_rows.append((con.coeffs, con.rhs))
        elif con.relation == "<=":
            ub_rows.append((con.coeffs, con.rhs))
        else:
            ub_rows.append(({j: -v for j, v in con.coeffs.items()}, -con.rhs))

    def matrix(rows):
        if not rows:
            return None, None
        ri, ci, vals = [], [], []
        for r, (coeffs, _) in enumerate(rows):
            for j, v in coeffs.items():
                ri.append(r)
                ci.append(j)
                vals.append(float(v))
        mat = scipy.sparse.csr_matrix((vals, (ri, ci)), shape=(len(rows), n))
        return mat, np.array([float(b) for _, b in rows])

    a_ub, b_ub = matrix(ub_rows)
    a_eq, b_eq = matrix(eq_rows)
    c = np.zeros(n)
    for j, v in lp.objective.items():
        c[j] = -float(v)
    bounds = [(0, float(lp.upper[j]) if j in lp.upper else None) for j in range(n)]
    res = scipy.optimize.linprog(
        c, A_ub=a_ub, b_ub=b_ub, A_eq=a_eq, b_eq=b_eq, bounds=bounds, method="highs-ds"
    )
    if res.status != 0:
        return None

    x = [snap(v) for v in res.x]
    z = [snap(-v) for v in res.ineqlin.marginals] if ub_rows else []
    y = [snap(-v) for v in res.eqlin.marginals] if eq_rows else []
    if any(v is None for v in x + y + z):
        return None
    if any(v < 0 for v in x + z) or lp.check(x):
        return None

    # exact dual feasibility: c - A^T(y, z) <= 0, except on upper-bounded columns
    reduced = {j: Fraction(v) for j, v in lp.objective.items()}
    dual_obj = Fraction(0)
    for (coeffs, b), mult in zip(eq_rows + ub_rows, y + z):
        if mult:
            dual_obj += b * mult
            for j, v in coeffs.items():
                reduced[j] = reduced.get(j, 0) - v * mult
    for j, r in reduced.items():
        if r > 0:
            if j not in lp.upper:
                return None
            dual_obj += lp.upper[j] * r
    primal_obj = lp.objective_value(x)
    if primal_obj != dual_obj:
        return None
    return LPOutcome(LPStatus.OPTIMAL, tuple(x), primal_obj, "guided", int(res.nit))

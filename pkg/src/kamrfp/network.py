"""Directed capacitated networks, flows, parsing and incidence matrices.

A network carries ``m`` user arcs with ids ``1..m`` (input order) plus the
implicit dummy arc ``m+1`` = ``(t, s)`` of unbounded capacity, which turns an
s-t flow into a circulation. Every numeric value is a :class:`Fraction`.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, NamedTuple

import numpy as np


class NetworkError(ValueError):
    """Invalid network or flow input. ``line`` is 1-based when known."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


class FlowError(NetworkError):
    """A flow violates conservation or a capacity bound."""


class _Unbounded:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "UNBOUNDED"

    def __reduce__(self):
        return (_Unbounded, ())


UNBOUNDED = _Unbounded()

_RATIONAL = re.compile(r"^(-?\d+)(?:/(\d+))?$")


def parse_rational(text: str) -> Fraction:
    """Parse ``"p"`` or ``"p/q"`` exactly. Decimal points are rejected."""
    match = _RATIONAL.match(text.strip())
    if not match:
        raise ValueError(f"not a rational literal: {text!r}")
    num = int(match.group(1))
    den = int(match.group(2)) if match.group(2) is not None else 1
    if den == 0:
        raise ValueError(f"zero denominator: {text!r}")
    return Fraction(num, den)


def format_rational(x: Fraction | int) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


class Arc(NamedTuple):
    tail: int
    head: int
    capacity: Fraction


@dataclass(frozen=True)
class Network:
    """Capacitated digraph on vertices ``1..n`` with source and sink.

    ``arcs`` holds only the user arcs; the dummy arc is implicit and
    reachable through :meth:`arc` with id :attr:`dummy_id`.
    """

    n: int
    arcs: tuple[Arc, ...]
    source: int
    sink: int

    def __post_init__(self):
        object.__setattr__(
            self, "arcs", tuple(Arc(int(t), int(h), Fraction(c)) for t, h, c in self.arcs)
        )
        if self.n < 1:
            raise NetworkError("vertex count must be positive")
        for label, v in (("source", self.source), ("sink", self.sink)):
            if not 1 <= v <= self.n:
                raise NetworkError(f"{label} {v} out of range 1..{self.n}")
        if self.source == self.sink:
            raise NetworkError("source and sink must differ")
        for i, (tail, head, cap) in enumerate(self.arcs, start=1):
            if not (1 <= tail <= self.n and 1 <= head <= self.n):
                raise NetworkError(f"arc {i} has an endpoint outside 1..{self.n}")
            if tail == head:
                raise NetworkError(f"arc {i} is a self-loop at vertex {tail}")
            if cap < 0:
                raise NetworkError(f"arc {i} has negative capacity {format_rational(cap)}")

    @property
    def m(self) -> int:
        """Number of user (destroyable) arcs."""
        return len(self.arcs)

    @property
    def dummy_id(self) -> int:
        return len(self.arcs) + 1

    @property
    def arc_ids(self) -> range:
        """Ids of the user arcs, dummy excluded."""
        return range(1, len(self.arcs) + 1)

    def arc(self, a: int) -> tuple[int, int, Fraction | _Unbounded]:
        if a == self.dummy_id:
            return (self.sink, self.source, UNBOUNDED)
        if not 1 <= a <= len(self.arcs):
            raise KeyError(a)
        return tuple(self.arcs[a - 1])

    def capacity(self, a: int) -> Fraction | _Unbounded:
        return self.arc(a)[2]


@dataclass(frozen=True)
class Flow:
    """Arc values on all ``m+1`` arcs; ``values[dummy_id]`` is the flow value."""

    values: Mapping[int, Fraction]
    dummy_id: int = field(default=0)

    def __post_init__(self):
        object.__setattr__(self, "values", {a: Fraction(v) for a, v in self.values.items()})
        if not self.dummy_id:
            object.__setattr__(self, "dummy_id", max(self.values))

    def __getitem__(self, a: int) -> Fraction:
        return self.values.get(a, Fraction(0))

    @property
    def value(self) -> Fraction:
        return self[self.dummy_id]

    def support(self) -> frozenset[int]:
        """Non-dummy arcs carrying positive flow."""
        return frozenset(a for a, v in self.values.items() if v > 0 and a != self.dummy_id)

    def as_list(self) -> list[Fraction]:
        return [self[a] for a in range(1, self.dummy_id + 1)]


def make_flow(net: Network, values: Mapping[int, Fraction] | Iterable[Fraction]) -> Flow:
    """Build a flow on ``net``; a sequence covers arcs ``1..m`` (dummy inferred)
    or ``1..m+1``. Missing arcs default to 0 and a missing dummy value is
    inferred from conservation at the source."""
    if not isinstance(values, Mapping):
        values = {a: Fraction(v) for a, v in enumerate(values, start=1)}
    full = {a: Fraction(values.get(a, 0)) for a in range(1, net.dummy_id + 1)}
    if net.dummy_id not in values:
        full[net.dummy_id] = _net_outflow(net, full, net.source, include_dummy=False)
    return Flow(full, net.dummy_id)


def _net_outflow(net: Network, values: Mapping[int, Fraction], v: int, include_dummy=True):
    total = Fraction(0)
    last = net.dummy_id if include_dummy else net.m
    for a in range(1, last + 1):
        tail, head, _ = net.arc(a)
        if tail == v:
            total += values.get(a, 0)
        elif head == v:
            total -= values.get(a, 0)
    return total


def check_flow(net: Network, phi: Flow, bounds: Mapping[int, Fraction] | None = None) -> None:
    """Raise :class:`FlowError` unless ``phi`` is a feasible circulation.

    ``bounds`` replaces the arc capacities (used for adaptive flows, whose
    bounds are the original flow values).
    """
    extra = set(phi.values) - set(range(1, net.dummy_id + 1))
    if extra:
        raise FlowError(f"flow references unknown arc(s) {sorted(extra)}")
    for a in range(1, net.dummy_id + 1):
        x = phi[a]
        if x < 0:
            raise FlowError(f"arc {a} carries negative flow {format_rational(x)}")
        cap = bounds[a] if bounds is not None and a in bounds else net.capacity(a)
        if cap is not UNBOUNDED and x > cap:
            raise FlowError(
                f"arc {a} carries {format_rational(x)} above its bound {format_rational(cap)}"
            )
    for v in range(1, net.n + 1):
        excess = _net_outflow(net, phi.values, v)
        if excess != 0:
            raise FlowError(
                f"conservation violated at vertex {v} (net outflow {format_rational(excess)})"
            )


@dataclass(frozen=True)
class IncidenceMatrix:
    """``n x (m+1)`` node-arc incidence; row ``v-1`` is vertex ``v``."""

    matrix: np.ndarray

    def column(self, a: int) -> np.ndarray:
        return self.matrix[:, a - 1]

    def without(self, deleted: Iterable[int]) -> np.ndarray:
        """Columns of the surviving arcs, in id order."""
        gone = set(deleted)
        keep = [a - 1 for a in range(1, self.matrix.shape[1] + 1) if a not in gone]
        return self.matrix[:, keep]

    @property
    def shape(self) -> tuple[int, int]:
        return self.matrix.shape


def incidence(net: Network) -> IncidenceMatrix:
    mat = np.zeros((net.n, net.dummy_id), dtype=np.int8)
    for a in range(1, net.dummy_id + 1):
        tail, head, _ = net.arc(a)
        mat[tail - 1, a - 1] = 1
        mat[head - 1, a - 1] = -1
    return IncidenceMatrix(mat)


# --- text formats ----------------------------------------------------------


def parse_network(text: str, format: str = "dimacs") -> Network:
    if format == "dimacs":
        return _parse_dimacs(text)
    if format == "json":
        return _parse_json(text)
    raise ValueError(f"unknown network format {format!r}")


def _capacity(token: str, lineno: int | None) -> Fraction:
    try:
        cap = parse_rational(token)
    except ValueError:
        raise NetworkError(f"bad capacity {token!r}", lineno) from None
    if cap < 0:
        raise NetworkError(f"negative capacity {token}", lineno)
    return cap


def _vertex(token: str, lineno: int) -> int:
    if not re.fullmatch(r"\d+", token):
        raise NetworkError(f"bad vertex id {token!r}", lineno)
    return int(token)


def _parse_dimacs(text: str) -> Network:
    n = declared_m = None
    source = sink = None
    arcs: list[Arc] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        parts = raw.split()
        if not parts or parts[0] == "c":
            continue
        kind = parts[0]
        if kind == "p":
            if n is not None:
                raise NetworkError("duplicate problem line", lineno)
            if len(parts) != 4 or parts[1] != "max":
                raise NetworkError("expected 'p max <n> <m>'", lineno)
            n, declared_m = _vertex(parts[2], lineno), _vertex(parts[3], lineno)
        elif kind == "n":
            if len(parts) != 3 or parts[2] not in ("s", "t"):
                raise NetworkError("expected 'n <id> s' or 'n <id> t'", lineno)
            v = _vertex(parts[1], lineno)
            if parts[2] == "s":
                if source is not None:
                    raise NetworkError("duplicate source declaration", lineno)
                source = v
            else:
                if sink is not None:
                    raise NetworkError("duplicate sink declaration", lineno)
                sink = v
        elif kind == "a":
            if n is None:
                raise NetworkError("arc line before problem line", lineno)
            if len(parts) != 4:
                raise NetworkError("expected 'a <tail> <head> <capacity>'", lineno)
            tail, head = _vertex(parts[1], lineno), _vertex(parts[2], lineno)
            cap = _capacity(parts[3], lineno)
            if not (1 <= tail <= n and 1 <= head <= n):
                raise NetworkError(f"arc endpoint outside 1..{n}", lineno)
            if tail == head:
                raise NetworkError(f"self-loop at vertex {tail}", lineno)
            arcs.append(Arc(tail, head, cap))
        else:
            raise NetworkError(f"unknown record type {kind!r}", lineno)
    if n is None:
        raise NetworkError("missing problem line")
    if source is None:
        raise NetworkError("missing source declaration")
    if sink is None:
        raise NetworkError("missing sink declaration")
    if declared_m != len(arcs):
        raise NetworkError(f"problem line declares {declared_m} arcs, found {len(arcs)}")
    return Network(n, tuple(arcs), source, sink)


def _parse_json(text: str) -> Network:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise NetworkError(f"invalid JSON: {exc.msg}", exc.lineno) from None
    if not isinstance(doc, dict):
        raise NetworkError("top-level JSON value must be an object")
    for key in ("n", "arcs"):
        if key not in doc:
            raise NetworkError(f"missing key {key!r}")
    if "source" not in doc:
        raise NetworkError("missing source declaration")
    if "sink" not in doc:
        raise NetworkError("missing sink declaration")
    arcs = []
    for i, item in enumerate(doc["arcs"], start=1):
        try:
            tail, head, cap = item["tail"], item["head"], item["cap"]
        except (KeyError, TypeError):
            raise NetworkError(f"arc {i} needs 'tail', 'head' and 'cap'") from None
        if not all(isinstance(x, int) and not isinstance(x, bool) for x in (tail, head)):
            raise NetworkError(f"arc {i} endpoints must be integers")
        if isinstance(cap, bool) or not isinstance(cap, (int, str)):
            raise NetworkError(f"arc {i} capacity must be an integer or 'p/q' string")
        arcs.append(Arc(tail, head, _capacity(str(cap), None)))
    return Network(doc["n"], tuple(arcs), doc["source"], doc["sink"])


def serialize_network(net: Network, format: str = "dimacs") -> str:
    if format == "dimacs":
        lines = [f"p max {net.n} {net.m}", f"n {net.source} s", f"n {net.sink} t"]
        lines += [f"a {t} {h} {format_rational(c)}" for t, h, c in net.arcs]
        return "\n".join(lines) + "\n"
    if format == "json":
        doc = {
            "n": net.n,
            "source": net.source,
            "sink": net.sink,
            "arcs": [{"tail": t, "head": h, "cap": format_rational(c)} for t, h, c in net.arcs],
        }
        return json.dumps(doc, indent=2) + "\n"
    raise ValueError(f"unknown network format {format!r}")


def parse_flow(text: str, net: Network) -> Flow:
    """Parse ``f <arc_id> <p/q>`` lines. Feasibility is not checked here."""
    values: dict[int, Fraction] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        parts = raw.split()
        if not parts or parts[0] == "c":
            continue
        if parts[0] != "f" or len(parts) != 3:
            raise NetworkError("expected 'f <arc_id> <value>'", lineno)
        if not parts[1].isdigit() or not 1 <= int(parts[1]) <= net.dummy_id:
            raise NetworkError(f"unknown arc id {parts[1]!r}", lineno)
        a = int(parts[1])
        if a in values:
            raise NetworkError(f"duplicate value for arc {a}", lineno)
        try:
            values[a] = parse_rational(parts[2])
        except ValueError:
            raise NetworkError(f"bad flow value {parts[2]!r}", lineno) from None
    return make_flow(net, values)


def serialize_flow(phi: Flow) -> str:
    return "".join(f"f {a} {format_rational(v)}\n" for a, v in sorted(phi.values.items()))

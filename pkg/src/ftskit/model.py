"""Input-output featured transition systems: data model and trace semantics."""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping, Protocol

from .feature_logic import IDENT_RE, Formula, ProductConfig, format_formula, sat_in, variables

TAU = "tau"
DELTA = "delta"
RESERVED = frozenset([TAU, DELTA, "true", "false"])

Trace = tuple[str, ...]


class ModelError(ValueError):
    """A model that cannot be parsed or fails validation."""

    def __init__(self, message: str, diagnostics: list["Diagnostic"] | None = None):
        super().__init__(message)
        self.diagnostics = diagnostics or []


@dataclass(frozen=True)
class Diagnostic:
    clause: str
    message: str

    def __str__(self) -> str:
        return f"[{self.clause}] {self.message}"


@dataclass(frozen=True)
class GuardedTransition:
    src: str
    action: str
    guard: Formula
    dst: str


class TransitionSystem(Protocol):
    """Anything ``steps`` can walk: an initial state plus a successor index."""

    initial: str

    @property
    def succ(self) -> Mapping[str, Mapping[str, tuple[str, ...]]]: ...


def _index(transitions: Iterable[GuardedTransition]) -> dict[str, dict[str, tuple[str, ...]]]:
    idx: dict[str, dict[str, list[str]]] = {}
    for t in transitions:
        dsts = idx.setdefault(t.src, {}).setdefault(t.action, [])
        if t.dst not in dsts:
            dsts.append(t.dst)
    return {s: {a: tuple(d) for a, d in m.items()} for s, m in idx.items()}


@dataclass(frozen=True)
class Iofts:
    name: str
    states: tuple[str, ...]
    initial: str
    inputs: tuple[str, ...]
    outputs: tuple[str, ...]
    features: tuple[str, ...]
    transitions: tuple[GuardedTransition, ...]
    products: tuple[ProductConfig, ...] = field(default=())

    def kind(self, action: str) -> str:
        if action == TAU:
            return "tau"
        if action == DELTA:
            return "delta"
        if action in self.inputs:
            return "input"
        if action in self.outputs:
            return "output"
        raise KeyError(action)

    def product(self, name: str) -> ProductConfig:
        for p in self.products:
            if p.name == name:
                return p
        raise KeyError(f"unknown product {name!r}")

    @cached_property
    def succ(self) -> dict[str, dict[str, tuple[str, ...]]]:
        # A raw model edge exists iff some declared product enables its guard.
        live = [t for t in self.transitions if sat_in(t.guard, self.products)]
        return _index(live)

    @cached_property
    def outgoing(self) -> dict[str, tuple[GuardedTransition, ...]]:
        out: dict[str, list[GuardedTransition]] = {s: [] for s in self.states}
        for t in self.transitions:
            out.setdefault(t.src, []).append(t)
        return {s: tuple(ts) for s, ts in out.items()}


def validate(m: Iofts) -> list[Diagnostic]:
    """Check the well-formedness conditions of an IOFTS.

    Returns an empty list when the model is well formed.
    """
    diags: list[Diagnostic] = []
    add = lambda clause, msg: diags.append(Diagnostic(clause, msg))  # noqa: E731

    for kind, names in (("state", m.states), ("feature", m.features),
                        ("input", m.inputs), ("output", m.outputs)):
        seen = set()
        for n in names:
            if not IDENT_RE.fullmatch(n):
                add("identifier", f"{kind} name {n!r} is not an identifier")
            if n in seen:
                add("duplicate", f"{kind} {n!r} declared twice")
            seen.add(n)
    states = set(m.states)
    if m.initial not in states:
        add("initial", f"initial state {m.initial!r} is not a declared state")

    for n in sorted(set(m.inputs) & set(m.outputs)):
        add("actions-disjoint", f"action {n!r} declared as both input and output")
    for n in list(m.inputs) + list(m.outputs):
        if n in RESERVED:
            add("reserved-name", f"action name {n!r} is reserved")
    for f in m.features:
        if f in RESERVED:
            add("reserved-name", f"feature name {f!r} is reserved")

    actions = set(m.inputs) | set(m.outputs) | {TAU}
    features = set(m.features)
    guards: dict[tuple[str, str, str], Formula] = {}
    for t in m.transitions:
        where = f"{t.src} {t.action} {t.dst}"
        for s in (t.src, t.dst):
            if s not in states:
                add("membership", f"transition {where}: undeclared state {s!r}")
        if t.action not in actions:
            add("membership", f"transition {where}: undeclared action {t.action!r}")
        unknown = variables(t.guard) - features
        if unknown:
            add("guard-vars", f"transition {where}: guard uses undeclared "
                              f"feature(s) {', '.join(sorted(unknown))}")
        key = (t.src, t.action, t.dst)
        if key in guards and guards[key] != t.guard:
            add("guard-unique", f"transition {where} has two different guards: "
                                f"[{format_formula(guards[key])}] and [{format_formula(t.guard)}]")
        guards.setdefault(key, t.guard)

    names = set()
    for p in m.products:
        if p.name in names:
            add("duplicate", f"product {p.name!r} declared twice")
        names.add(p.name)
        assigned = p.features()
        for f in m.features:
            if f not in assigned:
                add("product-total", f"product {p.name!r} does not assign feature {f!r}")
        for f in sorted(assigned - features):
            add("membership", f"product {p.name!r} assigns undeclared feature {f!r}")
    return diags


def check(m: Iofts) -> Iofts:
    diags = validate(m)
    if diags:
        raise ModelError("invalid model:\n" + "\n".join(f"  {d}" for d in diags), diags)
    return m


# --------------------------------------------------------------------------
# reachability

def reach(m: TransitionSystem, s: str) -> set[str]:
    """States reachable from ``s`` along any edge, regardless of label."""
    succ = m.succ
    states = getattr(m, "states", None)
    if states is not None and s not in states:
        raise KeyError(f"unknown state {s!r}")
    seen = {s}
    todo = deque([s])
    while todo:
        cur = todo.popleft()
        for dsts in succ.get(cur, {}).values():
            for d in dsts:
                if d not in seen:
                    seen.add(d)
                    todo.append(d)
    return seen


def tau_closure(sys: TransitionSystem, states: Iterable[str]) -> frozenset[str]:
    succ = sys.succ
    seen = set(states)
    todo = list(seen)
    while todo:
        cur = todo.pop()
        for d in succ.get(cur, {}).get(TAU, ()):
            if d not in seen:
                seen.add(d)
                todo.append(d)
    return frozenset(seen)


def after(sys: TransitionSystem, states: Iterable[str], action: str) -> frozenset[str]:
    """One visible step from a tau-closed set, followed by tau-closure."""
    succ = sys.succ
    nxt = set()
    for s in states:
        nxt.update(succ.get(s, {}).get(action, ()))
    return tau_closure(sys, nxt) if nxt else frozenset()


def steps(sys: TransitionSystem, start: Iterable[str], trace: Iterable[str]) -> frozenset[str]:
    """All states reachable from ``start`` via the visible ``trace``."""
    cur = tau_closure(sys, start)
    for a in trace:
        if a == TAU:
            raise ValueError("traces never contain tau")
        cur = after(sys, cur, a)
        if not cur:
            break
    return cur


def visible_actions(sys: TransitionSystem, states: Iterable[str]) -> list[str]:
    succ = sys.succ
    acts = {a for s in states for a in succ.get(s, {}) if a != TAU}
    return sorted(acts)


def straces_upto(sys: TransitionSystem, k: int) -> set[Trace]:
    """Suspension traces of length at most ``k`` from the initial state."""
    if k < 0:
        raise ValueError("depth must be non-negative")
    out: set[Trace] = set()
    frontier = [((), tau_closure(sys, [sys.initial]))]
    for depth in range(k + 1):
        nxt = []
        for sigma, xs in frontier:
            out.add(sigma)
            if depth == k:
                continue
            for a in visible_actions(sys, xs):
                nxt.append((sigma + (a,), after(sys, xs, a)))
        frontier = nxt
    return out


def is_strace(sys: TransitionSystem, trace: Iterable[str]) -> bool:
    return bool(steps(sys, [sys.initial], trace))


def format_trace(trace: Iterable[str]) -> str:
    return " ".join(trace)


def parse_trace(text: str) -> Trace:
    trace = tuple(text.split())
    if TAU in trace:
        raise ValueError("traces never contain tau")
    return trace


"""Depth-bounded test suites and the test cases they contain.

A suite state is either ``Inner(X, sigma)`` -- the set of specification
states reached after the suspension trace ``sigma`` -- or one of the verdicts
``PASS`` / ``FAIL``.  Inner states form a tree keyed by ``sigma``.
"""
from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field
from typing import Iterator, Union

from .feature_logic import Formula
from .model import DELTA, Trace, after, tau_closure
from .projection import FeatureSpec


class Verdict(enum.Enum):
    PASS = "pass"
    FAIL = "fail"

    def __repr__(self) -> str:
        return self.value


PASS = Verdict.PASS
FAIL = Verdict.FAIL


@dataclass(frozen=True)
class Inner:
    states: frozenset[str]
    trace: Trace

    def label(self) -> str:
        xs = ", ".join(sorted(self.states))
        return "{" + xs + "}, " + (" ".join(self.trace) if self.trace else "ε")


SuiteState = Union[Inner, Verdict]
Edges = dict[str, tuple[SuiteState, ...]]


@dataclass
class TestSuite:
    spec: FeatureSpec
    depth: int
    root: Inner
    nodes: dict[Trace, Inner]
    edges: dict[Inner, Edges]
    guard_label: Formula

    __test__ = False  # not a pytest class

    @property
    def inputs(self) -> tuple[str, ...]:
        return tuple(sorted(self.spec.inputs))

    @property
    def observables(self) -> tuple[str, ...]:
        return tuple(sorted(self.spec.outputs)) + (DELTA,)

    def actions(self) -> tuple[str, ...]:
        return tuple(sorted(set(self.spec.inputs) | set(self.spec.outputs) | {DELTA}))

    def inner_states(self) -> list[Inner]:
        return sorted(self.nodes.values(), key=lambda st: (len(st.trace), st.trace))

    def targets(self, st: Inner, action: str) -> tuple[SuiteState, ...]:
        return self.edges.get(st, {}).get(action, ())

    def child(self, st: Inner, action: str) -> Inner | None:
        for t in self.targets(st, action):
            if isinstance(t, Inner):
                return t
        return None

    def edge_list(self) -> list[tuple[SuiteState, str, SuiteState]]:
        out = []
        for st in self.inner_states():
            for a, ts in sorted(self.edges.get(st, {}).items()):
                out.extend((st, a, t) for t in ts)
        return out

    def follow(self, trace: Trace) -> SuiteState | None:
        """Deterministic walk from the root; verdict states absorb outputs/delta."""
        cur: SuiteState = self.root
        for a in trace:
            if isinstance(cur, Verdict):
                if a not in self.observables:
                    return None
                continue
            ts = self.targets(cur, a)
            if not ts:
                return None
            inner = [t for t in ts if isinstance(t, Inner)]
            cur = inner[0] if inner else ts[0]
        return cur

    def fails_on(self, trace: Trace) -> bool:
        """Whether ``root =trace=> fail`` holds."""
        if not trace:
            return False
        st = self.nodes.get(tuple(trace[:-1]))
        return st is not None and FAIL in self.targets(st, trace[-1])


def suite_root(spec: FeatureSpec) -> Inner:
    return Inner(tau_closure(spec, [spec.initial]), ())


def _successors(spec: FeatureSpec, st: Inner, actions, observables,
                with_inner: bool, cache: dict | None = None) -> Edges:
    edges: Edges = {}
    for a in actions:
        key = (st.states, a)
        if cache is not None and key in cache:
            ys = cache[key]
        else:
            ys = after(spec, st.states, a)
            if cache is not None:
                cache[key] = ys
        targets: list[SuiteState] = []
        if ys and with_inner:
            targets.append(Inner(ys, st.trace + (a,)))
        if a in observables:
            targets.append(PASS if ys else FAIL)
        if targets:
            edges[a] = tuple(targets)
    return edges


def expand(suite: TestSuite, st: SuiteState) -> list[tuple[str, SuiteState]]:
    """Apply the suite construction rules to one non-frontier inner state."""
    if not isinstance(st, Inner):
        raise ValueError("verdict states are not expanded")
    if len(st.trace) >= suite.depth:
        raise ValueError(f"state at depth {len(st.trace)} is beyond the bound {suite.depth}")
    edges = _successors(suite.spec, st, suite.actions(), set(suite.observables), True)
    return [(a, t) for a, ts in edges.items() for t in ts]


def build_suite(spec: FeatureSpec, k: int) -> TestSuite:
    """Breadth-first suite construction, truncated at traces of length ``k``."""
    if k < 0:
        raise ValueError("depth must be non-negative")
    actions = sorted(set(spec.inputs) | set(spec.outputs) | {DELTA})
    observables = set(spec.outputs) | {DELTA}
    root = suite_root(spec)
    nodes = {(): root}
    edges: dict[Inner, Edges] = {}
    cache: dict = {}
    frontier = [root]
    while frontier:
        nxt = []
        for st in frontier:
            e = _successors(spec, st, actions, observables, len(st.trace) < k, cache)
            edges[st] = e
            for ts in e.values():
                for t in ts:
                    if isinstance(t, Inner):
                        nodes[t.trace] = t
                        nxt.append(t)
        frontier = nxt
    return TestSuite(spec, k, root, nodes, edges, spec.phi)


# --------------------------------------------------------------------------
# test cases

@dataclass
class TestCase:
    """A deterministic tree cut out of a suite: at most one input per node."""

    root: Inner
    routes: dict[Inner, dict[str, SuiteState]] = field(default_factory=dict)

    __test__ = False

    @property
    def edges(self) -> dict[Inner, Edges]:
        return {st: {a: (t,) for a, t in r.items()} for st, r in self.routes.items()}

    def offered_input(self, st: Inner, inputs) -> str | None:
        chosen = [a for a in self.routes.get(st, {}) if a in inputs]
        return chosen[0] if chosen else None

    def is_deterministic(self) -> bool:
        return all(isinstance(t, (Inner, Verdict)) for r in self.routes.values() for t in r.values())

    def is_acyclic(self) -> bool:
        seen = set()
        todo = [self.root]
        while todo:
            st = todo.pop()
            if st in seen:
                return False
            seen.add(st)
            todo.extend(t for t in self.routes.get(st, {}).values() if isinstance(t, Inner))
        return True


def _route(suite: TestSuite, st: Inner, a: str) -> SuiteState:
    ts = suite.targets(st, a)
    for t in ts:
        if isinstance(t, Inner):
            return t
    return ts[0]


def iter_test_cases(suite: TestSuite) -> Iterator[TestCase]:
    """Enumerate test cases: every combination of input choices (or none)."""
    inputs = suite.inputs
    memo: dict[Inner, list[tuple]] = {}

    def cases(st: Inner) -> list[tuple]:
        if st in memo:
            return memo[st]
        obs = [(a, _route(suite, st, a)) for a in suite.observables if suite.targets(st, a)]
        obs_kids = [t for _, t in obs if isinstance(t, Inner)]
        options: list[tuple[str, Inner] | None] = [None]
        options += [(a, c) for a in inputs if (c := suite.child(st, a)) is not None]
        out = []
        for choice in options:
            routes = tuple(sorted(obs + ([choice] if choice else []), key=lambda x: x[0]))
            kids = obs_kids + ([choice[1]] if choice else [])
            for combo in itertools.product(*(cases(kid) for kid in kids)):
                out.append(((st, routes),) + tuple(itertools.chain.from_iterable(combo)))
        memo[st] = out
        return out

    for flat in cases(suite.root):
        yield TestCase(suite.root, {st: dict(r) for st, r in flat})


def extract_test_cases(suite: TestSuite, limit: int | None = None) -> list[TestCase]:
    return list(itertools.islice(iter_test_cases(suite), limit))

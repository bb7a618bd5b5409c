"""Running suites against implementations: synchronous observation and verdicts."""
from __future__ import annotations

import logging
import random
import shlex
import subprocess
from collections import deque
from dataclasses import dataclass
from typing import Sequence

from .model import DELTA, Trace, after, tau_closure
from .projection import FeatureSpec
from .suite import FAIL, PASS, Inner, SuiteState, TestSuite, Verdict, build_suite

log = logging.getLogger(__name__)


class ModelPort:
    """An implementation under test backed by a feature specification.

    Quiescence is offered exactly where the backing model has a delta loop.
    With ``complete_inputs`` every missing input becomes a self-loop.
    """

    def __init__(self, spec: FeatureSpec, complete_inputs: bool = False, warn: bool = True):
        self.spec = spec
        self.complete_inputs = complete_inputs
        self.inputs = frozenset(spec.inputs)
        if warn and not complete_inputs:
            missing = check_input_enabled(spec)
            if missing:
                log.warning("implementation %s is not input-enabled (%d missing input(s), "
                            "e.g. %s at %s)", spec.base.name, len(missing),
                            missing[0][1], missing[0][0])

    def initial(self) -> frozenset[str]:
        return tau_closure(self.spec, [self.spec.initial])

    def after(self, states: frozenset[str], action: str) -> frozenset[str]:
        if self.complete_inputs and action in self.inputs:
            succ = self.spec.succ
            nxt = set()
            for s in states:
                nxt.update(succ.get(s, {}).get(action, (s,)))
            return tau_closure(self.spec, nxt)
        return after(self.spec, states, action)


def as_port(impl) -> ModelPort:
    if isinstance(impl, ModelPort):
        return impl
    if isinstance(impl, FeatureSpec):
        return ModelPort(impl, warn=False)
    raise TypeError(f"cannot use {type(impl).__name__} as an implementation")


@dataclass(frozen=True)
class RunResult:
    verdict: Verdict
    failing_traces: tuple[Trace, ...]
    explored: int

    @property
    def passed(self) -> bool:
        return self.verdict is PASS


def check_input_enabled(spec: FeatureSpec) -> list[tuple[str, str]]:
    """(state, input) pairs where the input cannot be taken."""
    missing = []
    for s in spec.states:
        enabled = spec.succ.get(s, {})
        for a in spec.inputs:
            if a not in enabled:
                missing.append((s, a))
    return missing


def sync_step(suite: TestSuite, st: SuiteState, impl, impl_states: frozenset[str],
              action: str) -> list[tuple[SuiteState, frozenset[str]]]:
    """Composed moves of suite state and implementation on ``action``."""
    port = as_port(impl)
    if isinstance(st, Verdict):
        targets: tuple[SuiteState, ...] = (st,) if action in suite.observables else ()
    else:
        targets = suite.edges.get(st, {}).get(action, ())
    if not targets:
        return []
    ys = port.after(impl_states, action)
    if not ys:
        return []
    return [(t, ys) for t in targets]


def run_suite(suite, impl) -> RunResult:
    """Explore the synchronous product of ``suite`` and ``impl`` exhaustively.

    ``suite`` may be a TestSuite, a spinal suite or a TestCase; anything with
    ``root`` and an ``edges`` map keyed by inner states works.
    """
    port = as_port(impl)
    edges = suite.edges
    start = (suite.root, port.initial())
    seen = {start}
    queue = deque([start])
    failing: set[Trace] = set()
    while queue:
        st, xs = queue.popleft()
        if isinstance(st, Verdict):
            continue
        for a, targets in sorted(edges.get(st, {}).items()):
            ys = port.after(xs, a)
            if not ys:
                continue
            for t in targets:
                if t is FAIL:
                    failing.add(st.trace + (a,))
                conf = (t, ys)
                if conf not in seen:
                    seen.add(conf)
                    queue.append(conf)
    traces = tuple(sorted(failing, key=lambda tr: (len(tr), tr)))
    return RunResult(FAIL if traces else PASS, traces, len(seen))


def passes(impl, suite) -> bool:
    return run_suite(suite, impl).verdict is PASS


def conforms(impl_spec: FeatureSpec, spec: FeatureSpec, k: int) -> bool:
    return passes(impl_spec, build_suite(spec, k))


# --------------------------------------------------------------------------
# external implementations

class ProcessAdapter:
    """Talks to an implementation running in a child process.

    Wire format, one message per line: the tester sends ``I <input>``, ``?``
    (prompt for one observation) or ``R`` (reset); the adapter answers a
    prompt with ``O <output>`` or ``Q`` for quiescence.
    """

    def __init__(self, command: str | Sequence[str]):
        argv = shlex.split(command) if isinstance(command, str) else list(command)
        self.proc = subprocess.Popen(argv, stdin=subprocess.PIPE, stdout=subprocess.PIPE,
                                     text=True, bufsize=1)

    def _send(self, line: str) -> None:
        assert self.proc.stdin is not None
        self.proc.stdin.write(line + "\n")
        self.proc.stdin.flush()

    def reset(self) -> None:
        self._send("R")

    def give(self, action: str) -> None:
        self._send(f"I {action}")

    def observe(self) -> str:
        self._send("?")
        assert self.proc.stdout is not None
        reply = self.proc.stdout.readline().strip()
        if reply == "Q":
            return DELTA
        if reply.startswith("O "):
            return reply[2:].strip()
        raise RuntimeError(f"adapter protocol error: {reply!r}")

    def close(self) -> None:
        if self.proc.poll() is None:
            self.proc.stdin.close()
            self.proc.wait(timeout=5)

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()


def run_online(suite: TestSuite, adapter: ProcessAdapter, runs: int = 100,
               seed: int = 0) -> RunResult:
    """Randomized test runs against a live implementation.

    Each run resets the adapter and walks the suite, at every inner state
    either offering one input or asking for an observation.
    """
    rng = random.Random(seed)
    failing: set[Trace] = set()
    steps_taken = 0
    for _ in range(runs):
        adapter.reset()
        cur: SuiteState = suite.root
        while isinstance(cur, Inner):
            ins = [a for a in suite.inputs if suite.child(cur, a) is not None]
            choice = rng.choice([None] + ins)
            steps_taken += 1
            if choice is not None:
                adapter.give(choice)
                cur = suite.child(cur, choice)
                continue
            obs = adapter.observe()
            targets = suite.targets(cur, obs)
            if not targets or FAIL in targets:
                failing.add(cur.trace + (obs,))
                break
            nxt = [t for t in targets if isinstance(t, Inner)]
            cur = nxt[0] if nxt else PASS
    traces = tuple(sorted(failing, key=lambda tr: (len(tr), tr)))
    return RunResult(FAIL if traces else PASS, traces, steps_taken)

"""Orthogonality of an implementation with respect to a specification and a
tested product.

An implementation is orthogonal when every new behaviour ``a . sigma''`` it
shows after some ``sigma'`` is also shown after a spine of ``sigma'``.
"""
from __future__ import annotations

from dataclasses import dataclass

from .execution import as_port
from .feature_logic import ProductConfig
from .model import Trace, format_trace
from .projection import FeatureSpec
from .spinal import Novelty, spines_of
from .suite import TestSuite, build_suite


@dataclass(frozen=True)
class Witness:
    sigma_prime: Trace
    action: str
    sigma_double_prime: Trace

    @property
    def trace(self) -> Trace:
        return self.sigma_prime + (self.action,) + self.sigma_double_prime

    def __str__(self) -> str:
        return (f"{format_trace(self.sigma_prime) or 'ε'} | {self.action} | "
                f"{format_trace(self.sigma_double_prime) or 'ε'}")


@dataclass(frozen=True)
class OrthogonalityReport:
    orthogonal: bool
    witness: Witness | None
    searched_depth: int
    obligations: int


def impl_traces(impl, k: int) -> dict[Trace, frozenset[str]]:
    """Every suspension trace of the implementation up to length ``k``."""
    port = as_port(impl)
    alphabet = sorted({a for m in port.spec.succ.values() for a in m} - {"tau"}
                      | set(port.spec.inputs if port.complete_inputs else ()))
    out = {(): port.initial()}
    frontier = [()]
    for _ in range(k):
        nxt = []
        for tr in frontier:
            xs = out[tr]
            for a in alphabet:
                ys = port.after(xs, a)
                if ys:
                    out[tr + (a,)] = ys
                    nxt.append(tr + (a,))
        frontier = nxt
    return out


def check_orthogonal(impl, spec: FeatureSpec, product: ProductConfig, k: int,
                     suite: TestSuite | None = None) -> OrthogonalityReport:
    """Search all decompositions ``sigma' a sigma''`` of implementation traces
    up to length ``k`` for an undischarged obligation.

    The reported witness is the first failing one by total length, then
    trace order, then the position of the new action.
    """
    novelty = Novelty(spec, product)
    if suite is None:
        suite = build_suite(spec, k)
    traces = impl_traces(impl, k)
    spine_cache: dict[Trace, list[Trace]] = {}
    obligations = 0
    for t in sorted(traces, key=lambda tr: (len(tr), tr)):
        for i, a in enumerate(t):
            sp = t[:i]
            if sp not in suite.nodes or not novelty.is_new(sp, a):
                continue
            obligations += 1
            rest = t[i + 1:]
            if sp not in spine_cache:
                spine_cache[sp] = spines_of(suite, sp)
            if not any(s + (a,) + rest in traces for s in spine_cache[sp]):
                return OrthogonalityReport(False, Witness(sp, a, rest), k, obligations)
    return OrthogonalityReport(True, None, k, obligations)

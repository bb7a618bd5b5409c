"""Spinal test suites for incremental product-line testing.

Given a suite for a sub-line and an already tested product, the spinal suite
keeps only loop-free paths the product can perform (the spines) and, below
them, everything that follows an action the tested product lacks.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .feature_logic import ProductConfig, evaluate, format_formula
from .model import Trace, is_strace, steps
from .projection import FeatureSpec, derive_product
from .suite import Inner, TestSuite, Verdict


class NotValidProduct(ValueError):
    pass


def _require_valid(spec: FeatureSpec, product: ProductConfig) -> None:
    if not evaluate(spec.phi, product):
        raise NotValidProduct(
            f"product {product.name} does not satisfy {format_formula(spec.phi)}")


class Novelty:
    """Cached evaluation of ``new(sigma, a)`` for one specification and product."""

    def __init__(self, spec: FeatureSpec, product: ProductConfig):
        _require_valid(spec, product)
        self.spec = spec
        self.product = product
        self.product_spec = derive_product(spec.base, product)
        self._strace: dict[Trace, bool] = {}
        self._new: dict[tuple[Trace, str], bool] = {}

    def in_product(self, sigma: Trace) -> bool:
        sigma = tuple(sigma)
        if sigma not in self._strace:
            self._strace[sigma] = is_strace(self.product_spec, sigma)
        return self._strace[sigma]

    def is_new(self, sigma: Trace, action: str) -> bool:
        key = (tuple(sigma), action)
        if key not in self._new:
            self._new[key] = self._compute(key[0], action)
        return self._new[key]

    def _compute(self, sigma: Trace, action: str) -> bool:
        if not self.in_product(sigma):
            return False
        guards = self.spec.guards
        for s in steps(self.spec, [self.spec.initial], sigma):
            for a, g in guards.get(s, ()):
                if a == action and not evaluate(g, self.product):
                    return True
        return False


def is_new(spec: FeatureSpec, product: ProductConfig, sigma: Trace, action: str) -> bool:
    """Is there an ``action`` edge after ``sigma`` that ``product`` does not enable?"""
    return Novelty(spec, product).is_new(sigma, action)


def _node(suite: TestSuite, sigma: Trace) -> Inner:
    try:
        return suite.nodes[tuple(sigma)]
    except KeyError:
        raise KeyError(f"{' '.join(sigma) or 'ε'} is not a trace of the suite") from None


def prefix_states(suite: TestSuite, sigma: Trace) -> list[frozenset[str]]:
    return [_node(suite, sigma[:i]).states for i in range(len(sigma) + 1)]


def bt_holds(suite: TestSuite, sigma: Trace) -> bool:
    """No two states along ``sigma`` share their X-component."""
    xs = prefix_states(suite, tuple(sigma))
    return len(set(xs)) == len(xs)


def is_subsequence(short: Trace, long: Trace) -> bool:
    i = 0
    for a in long:
        if i < len(short) and short[i] == a:
            i += 1
    return i == len(short)


def is_spine(suite: TestSuite, sigma: Trace, sigma_prime: Trace) -> bool:
    sigma, sigma_prime = tuple(sigma), tuple(sigma_prime)
    if _node(suite, sigma).states != _node(suite, sigma_prime).states:
        return False
    return is_subsequence(sigma, sigma_prime) and bt_holds(suite, sigma)


def spines_of(suite: TestSuite, sigma_prime: Trace) -> list[Trace]:
    """All spines of ``sigma_prime``, shortest first."""
    target = _node(suite, sigma_prime).states
    found = [st.trace for st in suite.inner_states()
             if st.states == target and len(st.trace) <= len(sigma_prime)
             and is_subsequence(st.trace, sigma_prime) and bt_holds(suite, st.trace)]
    return found


@dataclass
class SpinalSuite(TestSuite):
    base_product: ProductConfig = None  # type: ignore[assignment]
    products: tuple[ProductConfig, ...] = ()
    spines: frozenset[Inner] = field(default_factory=frozenset)
    continuations: frozenset[Inner] = field(default_factory=frozenset)


def build_spinal(suite: TestSuite, product: ProductConfig) -> SpinalSuite:
    spec = suite.spec
    _require_valid(spec, product)
    if product not in spec.products:
        raise NotValidProduct(f"product {product.name} is not among the suite's products")
    novelty = Novelty(spec, product)

    spines = set()
    for st in suite.inner_states():
        if novelty.in_product(st.trace) and bt_holds(suite, st.trace):
            spines.add(st)

    continuations: set[Inner] = set()
    for st in spines:
        for a in suite.actions():
            child = suite.child(st, a)
            if child is None or child in continuations or not novelty.is_new(st.trace, a):
                continue
            todo = [child]
            while todo:
                cur = todo.pop()
                if cur in continuations:
                    continue
                continuations.add(cur)
                todo.extend(t for ts in suite.edges.get(cur, {}).values()
                            for t in ts if isinstance(t, Inner))

    keep = spines | continuations
    edges = {}
    for st in keep:
        kept = {}
        for a, ts in suite.edges.get(st, {}).items():
            ts = tuple(t for t in ts if isinstance(t, Verdict) or t in keep)
            if ts:
                kept[a] = ts
        edges[st] = kept
    return SpinalSuite(
        spec=spec,
        depth=suite.depth,
        root=suite.root,
        nodes={st.trace: st for st in keep},
        edges=edges,
        guard_label=suite.guard_label,
        base_product=product,
        products=tuple(p for p in spec.products if p != product),
        spines=frozenset(spines),
        continuations=frozenset(continuations),
    )

"""Product derivation: projecting an IOFTS onto the products selected by a
feature constraint, with quiescence made explicit as delta self-loops."""
from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import cached_property

from .feature_logic import (
    Formula,
    ProductConfig,
    config_formula,
    conj,
    disj,
    evaluate,
    format_formula,
    sat_in,
)
from .model import DELTA, TAU, GuardedTransition, Iofts, _index, reach
from .modelfile import dump_product, dump_transition

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class FeatureSpec:
    """The projection of ``base`` by ``phi``, restricted to reachable states.

    States keep the names of the underlying model states; the projection
    they belong to is carried by ``phi``.
    """

    base: Iofts
    phi: Formula
    states: tuple[str, ...]
    initial: str
    transitions: tuple[GuardedTransition, ...]
    products: tuple[ProductConfig, ...]

    @property
    def inputs(self) -> tuple[str, ...]:
        return self.base.inputs

    @property
    def outputs(self) -> tuple[str, ...]:
        return self.base.outputs

    @property
    def features(self) -> tuple[str, ...]:
        return self.base.features

    @cached_property
    def succ(self) -> dict[str, dict[str, tuple[str, ...]]]:
        return _index(self.transitions)

    @cached_property
    def guards(self) -> dict[str, tuple[tuple[str, Formula], ...]]:
        """state -> ((action, guard), ...) for every outgoing transition."""
        out: dict[str, list[tuple[str, Formula]]] = {}
        for t in self.transitions:
            out.setdefault(t.src, []).append((t.action, t.guard))
        return {s: tuple(v) for s, v in out.items()}

    def delta_states(self) -> list[str]:
        return [t.src for t in self.transitions if t.action == DELTA]


def quiescent(m: Iofts, s: str, product: ProductConfig) -> bool:
    """No output or tau transition leaving ``s`` is enabled for ``product``."""
    if s not in m.outgoing:
        raise KeyError(f"unknown state {s!r}")
    for t in m.outgoing[s]:
        if (t.action == TAU or t.action in m.outputs) and evaluate(t.guard, product):
            return False
    return True


def project(m: Iofts, phi: Formula) -> FeatureSpec:
    selected = sat_in(phi, m.products)
    if not selected:
        log.warning("no product of %s satisfies %s", m.name, format_formula(phi))

    transitions = [
        GuardedTransition(t.src, t.action, conj(phi, t.guard), t.dst)
        for t in m.transitions
        if sat_in(conj(phi, t.guard), m.products)
    ]
    for s in m.states:
        quiet = [p for p in selected if quiescent(m, s, p)]
        if quiet:
            guard = conj(phi, disj(config_formula(p, m.features) for p in quiet))
            transitions.append(GuardedTransition(s, DELTA, guard, s))

    full = FeatureSpec(m, phi, m.states, m.initial, tuple(transitions), tuple(selected))
    live = reach(full, m.initial)
    return FeatureSpec(
        base=m,
        phi=phi,
        states=tuple(s for s in m.states if s in live),
        initial=m.initial,
        transitions=tuple(t for t in transitions if t.src in live),
        products=tuple(selected),
    )


def derive_product(m: Iofts, product: ProductConfig) -> FeatureSpec:
    """The feature specification of the single product ``product``."""
    if not any(p == product for p in m.products):
        raise KeyError(f"unknown product {product.name!r}")
    spec = project(m, config_formula(product, m.features))
    return FeatureSpec(spec.base, spec.phi, spec.states, spec.initial,
                       spec.transitions, (product,))


def format_spec(spec: FeatureSpec) -> str:
    """Model-file style listing of a projection, delta loops included."""
    m = spec.base
    lines = [
        f"# projection of {m.name} by [{format_formula(spec.phi)}]",
        f"iofts {m.name}",
        " ".join(["features", *m.features]),
        " ".join(["inputs", *m.inputs]),
        " ".join(["outputs", *m.outputs]),
        " ".join(["states", *spec.states]),
        f"initial {spec.initial}",
    ]
    lines += [dump_transition(m, t) for t in spec.transitions]
    lines += [dump_product(m, p) for p in spec.products]
    return "\n".join(lines) + "\n"

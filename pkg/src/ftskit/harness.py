"""Randomized models, fault injection and falsification checks for the spine
lemma and the incremental-testing theorem.

All randomness comes from ``random.Random`` instances seeded explicitly, so
every case can be regenerated from the seeds stored in its report.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field, replace

from .execution import passes
from .feature_logic import (
    TRUE,
    And,
    Formula,
    Not,
    ProductConfig,
    Var,
    format_formula,
)
from .model import DELTA, TAU, GuardedTransition, Iofts, check, reach
from .modelfile import dump_model
from .orthogonality import check_orthogonal
from .projection import FeatureSpec, derive_product, format_spec, project
from .spinal import Novelty, build_spinal, spines_of
from .suite import TestSuite, build_suite


@dataclass(frozen=True)
class GenParams:
    seed: int = 0
    n_states: tuple[int, int] = (1, 6)
    n_features: tuple[int, int] = (1, 3)
    n_products: tuple[int, int] = (1, 4)
    n_inputs: tuple[int, int] = (1, 3)
    n_outputs: tuple[int, int] = (0, 2)
    out_degree: tuple[int, int] = (0, 3)
    p_tau: float = 0.05
    p_guard: float = 0.5
    depth: int = 5

    def __post_init__(self):
        for name in ("n_states", "n_features", "n_products", "n_inputs", "n_outputs", "out_degree"):
            lo, hi = getattr(self, name)
            if lo > hi or lo < 0:
                raise ValueError(f"{name}: empty range {lo}..{hi}")
        if self.n_states[0] < 1:
            raise ValueError("need at least one state")
        for name in ("p_tau", "p_guard"):
            if not 0.0 <= getattr(self, name) <= 1.0:
                raise ValueError(f"{name} must be a probability")


@dataclass
class PropertyReport:
    name: str
    cases_run: int = 0
    cases_applicable: int = 0
    counterexamples: list[dict] = field(default_factory=list)
    notes: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.counterexamples

    def merge(self, other: "PropertyReport") -> None:
        self.cases_run += other.cases_run
        self.cases_applicable += other.cases_applicable
        self.counterexamples.extend(other.counterexamples)

    def summary(self) -> str:
        return (f"{self.name}: {self.cases_run} cases, {self.cases_applicable} applicable, "
                f"{len(self.counterexamples)} counterexample(s)")


def _random_guard(rng: random.Random, features: list[str]) -> Formula:
    lits = []
    for f in rng.sample(features, rng.randint(1, min(2, len(features)))):
        lits.append(Var(f) if rng.random() < 0.5 else Not(Var(f)))
    node = lits[0]
    for lit in lits[1:]:
        node = And(node, lit)
    return node


def random_iofts(params: GenParams) -> Iofts:
    rng = random.Random(params.seed)
    states = [f"s{i}" for i in range(rng.randint(*params.n_states))]
    features = [f"f{i}" for i in range(rng.randint(*params.n_features))]
    inputs = [f"i{i}" for i in range(rng.randint(*params.n_inputs))]
    outputs = [f"o{i}" for i in range(rng.randint(*params.n_outputs))]

    valuations = [tuple(bool(b >> j & 1) for j in range(len(features)))
                  for b in range(2 ** len(features))]
    n_products = min(rng.randint(*params.n_products), len(valuations))
    products = tuple(
        ProductConfig.of(f"p{i}", dict(zip(features, v)))
        for i, v in enumerate(rng.sample(valuations, n_products))
    )

    transitions = []
    seen = set()
    for s in states:
        for _ in range(rng.randint(*params.out_degree)):
            if rng.random() < params.p_tau:
                action = TAU
            else:
                action = rng.choice(inputs + outputs)
            dst = rng.choice(states)
            if (s, action, dst) in seen:
                continue
            seen.add((s, action, dst))
            guard = _random_guard(rng, features) if rng.random() < params.p_guard else TRUE
            transitions.append(GuardedTransition(s, action, guard, dst))

    m = Iofts(f"rand{params.seed}", tuple(states), states[0], tuple(inputs), tuple(outputs),
              tuple(features), tuple(transitions), products)
    return check(m)


def random_constraint(product: ProductConfig, rng: random.Random) -> Formula:
    """``true`` or a literal over one feature that ``product`` satisfies."""
    if rng.random() < 0.4 or not product.assignment:
        return TRUE
    f, value = rng.choice(product.assignment)
    return Var(f) if value else Not(Var(f))


# --------------------------------------------------------------------------
# fault injection

MUTATIONS = ("identity", "add-output", "redirect", "remove-output", "silence-state", "toggle-delta")


def _rebuild(spec: FeatureSpec, transitions: list[GuardedTransition]) -> FeatureSpec:
    tmp = replace(spec, transitions=tuple(transitions))
    live = reach(tmp, spec.initial)
    return replace(spec, states=tuple(s for s in spec.states if s in live),
                   transitions=tuple(t for t in transitions if t.src in live))


def _loud(spec: FeatureSpec, transitions, s: str) -> bool:
    return any(t.src == s and (t.action == TAU or t.action in spec.outputs) for t in transitions)


def _fix_delta(spec: FeatureSpec, transitions: list[GuardedTransition], s: str) -> list[GuardedTransition]:
    """Make quiescence at ``s`` match the presence of outputs/tau there."""
    rest = [t for t in transitions if not (t.src == s and t.action == DELTA)]
    if not _loud(spec, rest, s):
        rest.append(GuardedTransition(s, DELTA, spec.phi, s))
    return rest


def add_output(spec: FeatureSpec, s: str, output: str, dst: str) -> FeatureSpec:
    ts = list(spec.transitions) + [GuardedTransition(s, output, spec.phi, dst)]
    return _rebuild(spec, _fix_delta(spec, ts, s))


def remove_outputs(spec: FeatureSpec, s: str, only: str | None = None) -> FeatureSpec:
    ts = [t for t in spec.transitions
          if not (t.src == s and t.action in spec.outputs and (only is None or t.action == only))]
    return _rebuild(spec, _fix_delta(spec, ts, s))


def mutate_impl(spec: FeatureSpec, seed: int) -> FeatureSpec:
    """Inject one fault; ``seed % len(MUTATIONS)`` picks the mutation class
    (class 0 is the identity)."""
    rng = random.Random(seed)
    kind = MUTATIONS[seed % len(MUTATIONS)]
    states = list(spec.states)
    ts = list(spec.transitions)
    s = rng.choice(states)
    if kind == "add-output" and spec.outputs:
        return add_output(spec, s, rng.choice(spec.outputs), rng.choice(states))
    if kind == "redirect":
        movable = [t for t in ts if t.action != DELTA]
        if movable:
            t = rng.choice(movable)
            ts[ts.index(t)] = replace(t, dst=rng.choice(states))
            return _rebuild(spec, ts)
    if kind == "remove-output":
        outs = [t for t in ts if t.action in spec.outputs]
        if outs:
            t = rng.choice(outs)
            return remove_outputs(spec, t.src, only=t.action)
    if kind == "silence-state":
        loud = [x for x in states if any(t.src == x and t.action in spec.outputs for t in ts)]
        if loud:
            return remove_outputs(spec, rng.choice(loud))
    if kind == "toggle-delta":
        if any(t.src == s and t.action == DELTA for t in ts):
            ts = [t for t in ts if not (t.src == s and t.action == DELTA)]
        else:
            ts.append(GuardedTransition(s, DELTA, spec.phi, s))
        return _rebuild(spec, ts)
    return spec


# --------------------------------------------------------------------------
# property checks

def check_lemma_spine_fail(suite: TestSuite, product: ProductConfig,
                           k: int | None = None) -> PropertyReport:
    """For every failing path ``sigma' a sigma''`` with ``new(sigma', a)`` and
    every spine ``sigma`` of ``sigma'``, the path ``sigma a sigma''`` must fail too."""
    report = PropertyReport("spine-lemma")
    novelty = Novelty(suite.spec, product)
    k = suite.depth if k is None else k
    spine_cache: dict = {}
    for st in suite.inner_states():
        if len(st.trace) > k:
            continue
        for b in suite.observables:
            if not suite.fails_on(st.trace + (b,)):
                continue
            failing = st.trace + (b,)
            report.cases_run += 1
            for i, a in enumerate(failing):
                sp = failing[:i]
                if not novelty.is_new(sp, a):
                    continue
                rest = failing[i + 1:]
                if sp not in spine_cache:
                    spine_cache[sp] = spines_of(suite, sp)
                for s in spine_cache[sp]:
                    report.cases_applicable += 1
                    if not suite.fails_on(s + (a,) + rest):
                        report.counterexamples.append({
                            "failing": list(failing), "sigma_prime": list(sp), "action": a,
                            "sigma_double_prime": list(rest), "spine": list(s),
                            "product": product.name, "phi": format_formula(suite.spec.phi),
                            "model": dump_model(suite.spec.base),
                        })
    return report


def check_theorem_incremental(spec: FeatureSpec, product: ProductConfig, impl: FeatureSpec,
                              k: int) -> PropertyReport:
    """An orthogonal implementation passing the product suite and the spinal
    suite must pass the full suite.  Cases whose premises fail are counted
    as not applicable."""
    report = PropertyReport("incremental-theorem", cases_run=1)
    full = build_suite(spec, k)
    orth = check_orthogonal(impl, spec, product, k, suite=full)
    product_suite = build_suite(derive_product(spec.base, product), k)
    spinal = build_spinal(full, product)
    flags = {
        "orthogonal": orth.orthogonal,
        "passes_product": passes(impl, product_suite),
        "passes_spinal": passes(impl, spinal),
        "passes_full": passes(impl, full),
    }
    report.notes.update(flags)
    if orth.witness is not None:
        report.notes["witness"] = str(orth.witness)
    if flags["orthogonal"] and flags["passes_product"] and flags["passes_spinal"]:
        report.cases_applicable = 1
        if not flags["passes_full"]:
            report.counterexamples.append({
                "product": product.name, "phi": format_formula(spec.phi),
                "model": dump_model(spec.base), "impl": format_spec(impl), **flags,
            })
    return report


# --------------------------------------------------------------------------
# seed-pinned campaigns

def case_seed(seed: int, index: int) -> int:
    return random.Random(f"{seed}:{index}").randrange(2**31)


def random_case(seed: int, index: int, params: GenParams | None = None):
    """Model, constraint, a product satisfying the constraint, and the case seed."""
    cs = case_seed(seed, index)
    params = replace(params or GenParams(), seed=cs)
    m = random_iofts(params)
    rng = random.Random(cs + 1)
    product = rng.choice(m.products)
    return m, random_constraint(product, rng), product, cs


def _tag(bundles: list[dict], **info) -> None:
    for b in bundles:
        b.update(info)


def conformance_campaign(seed: int, cases: int, depths=(3, 5),
                         params: GenParams | None = None) -> PropertyReport:
    """Every product of a sub-line passes the sub-line's suite."""
    report = PropertyReport("product-conformance")
    for i in range(cases):
        m, phi, _, cs = random_case(seed, i, params)
        spec = project(m, phi)
        for k in depths:
            suite = build_suite(spec, k)
            for p in spec.products:
                report.cases_run += 1
                report.cases_applicable += 1
                if not passes(derive_product(m, p), suite):
                    report.counterexamples.append({
                        "seed": seed, "case": i, "case_seed": cs, "depth": k,
                        "phi": format_formula(phi), "product": p.name, "model": dump_model(m)})
    return report


def lemma_campaign(seed: int, cases: int, k: int = 5,
                   params: GenParams | None = None) -> PropertyReport:
    report = PropertyReport("spine-lemma")
    for i in range(cases):
        m, phi, product, cs = random_case(seed, i, params)
        sub = check_lemma_spine_fail(build_suite(project(m, phi), k), product)
        _tag(sub.counterexamples, seed=seed, case=i, case_seed=cs, depth=k)
        report.merge(sub)
    return report


def theorem_campaign(seed: int, cases: int, k: int = 5,
                     params: GenParams | None = None) -> PropertyReport:
    report = PropertyReport("incremental-theorem")
    for i in range(cases):
        m, phi, product, cs = random_case(seed, i, params)
        spec = project(m, phi)
        impl = mutate_impl(spec, cs)
        sub = check_theorem_incremental(spec, product, impl, k)
        _tag(sub.counterexamples, seed=seed, case=i, case_seed=cs, depth=k,
             mutation=MUTATIONS[cs % len(MUTATIONS)])
        report.merge(sub)
    return report


def replay(bundle: dict, params: GenParams | None = None) -> bool:
    """Regenerate a campaign counterexample from its seeds; True if it still
    violates the property it was reported for."""
    m, phi, product, cs = random_case(bundle["seed"], bundle["case"], params)
    spec = project(m, phi)
    k = bundle["depth"]
    if "spine" in bundle:
        suite = build_suite(spec, k)
        s = tuple(bundle["spine"])
        rest = tuple(bundle["sigma_double_prime"])
        return (suite.fails_on(tuple(bundle["failing"]))
                and not suite.fails_on(s + (bundle["action"],) + rest))
    if "impl" in bundle:
        return not check_theorem_incremental(spec, product, mutate_impl(spec, cs), k).ok
    p = m.product(bundle["product"])
    return not passes(derive_product(m, p), build_suite(spec, k))
